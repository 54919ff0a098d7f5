#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lhvprobe/linalg.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/rng.hpp"
#include "lhvprobe/states.hpp"

using namespace lhvprobe;

namespace {

Su3Angles random_angles(Rng& rng) {
    Su3Angles a;
    for (double& x : a.phi) x = rng.uniform(0.0, 2.0 * M_PI);
    return a;
}

Complex det3(const ComplexMatrix& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

DensityOperator pure_product_00() {
    ComplexMatrix m(9, 9);
    m(0, 0) = 1.0;
    return DensityOperator(m);
}

DensityOperator maximally_mixed() {
    ComplexMatrix m = ComplexMatrix::identity(9);
    m *= 1.0 / 9.0;
    return DensityOperator(m);
}

// brute-force recomputation of the trace formula through an explicit
// Kronecker product, a code path the library never takes
double oracle_probability(const ComplexMatrix& pa, const ComplexMatrix& pb,
                          const ComplexMatrix& rho) {
    const ComplexMatrix big = kron(pa, pb);
    Complex acc = 0.0;
    for (std::size_t r = 0; r < 9; ++r) {
        for (std::size_t c = 0; c < 9; ++c) acc += big(r, c) * rho(c, r);
    }
    return acc.real();
}

// independent Haar sampler for the distribution cross-check: classic
// Gram-Schmidt on a Ginibre draw using the standard library RNG
double independent_haar_u00(std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Complex g[3][3];
    for (auto& row : g) {
        for (Complex& x : row) x = Complex(normal(gen), normal(gen));
    }
    // orthonormalize columns in order
    for (int c = 0; c < 3; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            Complex proj = 0.0;
            for (int r = 0; r < 3; ++r) proj += std::conj(g[r][prev]) * g[r][c];
            for (int r = 0; r < 3; ++r) g[r][c] -= proj * g[r][prev];
        }
        double norm = 0.0;
        for (int r = 0; r < 3; ++r) norm += std::norm(g[r][c]);
        norm = std::sqrt(norm);
        for (int r = 0; r < 3; ++r) g[r][c] /= norm;
    }
    return std::norm(g[0][0]);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_statistic_beta12(std::vector<double> a) {
    std::sort(a.begin(), a.end());
    double d = 0.0;
    const double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double cdf = 1.0 - (1.0 - a[i]) * (1.0 - a[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(cdf - lo), std::abs(cdf - hi)));
    }
    return d;
}

}  // namespace

TEST_CASE("su3_unitary at zero angles is the identity") {
    const ComplexMatrix u = su3_unitary(Su3Angles{});
    CHECK(max_abs_diff(u, ComplexMatrix::identity(3)) < 1e-15);
}

TEST_CASE("su3_unitary lands in SU(3)") {
    Rng rng(41);
    for (int rep = 0; rep < 1000; ++rep) {
        const ComplexMatrix u = su3_unitary(random_angles(rng));
        CHECK(max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(3)) < 1e-10);
        CHECK(std::abs(det3(u) - Complex(1.0, 0.0)) < 1e-10);
    }
}

TEST_CASE("angle recovery inverts the factorization") {
    Rng rng(42);
    for (int rep = 0; rep < 200; ++rep) {
        const ComplexMatrix u = su3_unitary(random_angles(rng));
        const Su3Angles rec = su3_angles_from_unitary(u);
        CHECK(max_abs_diff(su3_unitary(rec), u) < 1e-10);
    }
}

TEST_CASE("measurement projectors resolve the identity") {
    const auto at_zero = measurement_projectors(Su3Angles{});
    for (int k = 0; k < 3; ++k) {
        ComplexMatrix expected(3, 3);
        expected(static_cast<std::size_t>(k), static_cast<std::size_t>(k)) = 1.0;
        CHECK(max_abs_diff(at_zero[static_cast<std::size_t>(k)], expected) < 1e-15);
    }

    Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const Su3Angles angles = random_angles(rng);
        const ComplexMatrix u = su3_unitary(angles);
        const auto proj = measurement_projectors(angles);

        ComplexMatrix sum(3, 3);
        for (const ComplexMatrix& p : proj) sum += p;
        CHECK(max_abs_diff(sum, ComplexMatrix::identity(3)) < 1e-10);

        for (std::size_t k = 0; k < 3; ++k) {
            for (std::size_t l = 0; l < 3; ++l) {
                const ComplexMatrix prod = proj[k] * proj[l];
                if (k == l) {
                    CHECK(max_abs_diff(prod, proj[k]) < 1e-10);
                } else {
                    ComplexMatrix zero(3, 3);
                    CHECK(max_abs_diff(prod, zero) < 1e-10);
                }
            }
        }

        // each projector is the outer product of the matching column
        for (std::size_t k = 0; k < 3; ++k) {
            ComplexMatrix outer(3, 3);
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t c = 0; c < 3; ++c) {
                    outer(r, c) = u(r, k) * std::conj(u(c, k));
                }
            }
            CHECK(max_abs_diff(outer, proj[k]) < 1e-12);
        }
    }
}

TEST_CASE("probability table on landmark states") {
    SettingsQuad zero_settings;
    const ProbabilityTable t0 = probability_table(pure_product_00(), zero_settings);
    for (int pair = 0; pair < 4; ++pair) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double expected = (a == 0 && b == 0) ? 1.0 : 0.0;
                CHECK(std::abs(t0.at(pair, a, b) - expected) < 1e-14);
            }
        }
    }

    const ProbabilityTable tm =
        probability_table(maximally_mixed(), haar_random_settings(99));
    for (int pair = 0; pair < 4; ++pair) {
        for (int cell = 0; cell < 9; ++cell) {
            CHECK(std::abs(tm.p[static_cast<std::size_t>(pair)]
                               [static_cast<std::size_t>(cell)] -
                           1.0 / 9.0) < 1e-12);
        }
    }
}

TEST_CASE("probability table matches the kron-trace oracle") {
    const DensityOperator rho = bound_entangled_state();
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        const SettingsQuad s = haar_random_settings(seed);
        const ProbabilityTable t = probability_table(rho, s);

        const auto pa1 = measurement_projectors(s.a1);
        const auto pa2 = measurement_projectors(s.a2);
        const auto pb1 = measurement_projectors(s.b1);
        const auto pb2 = measurement_projectors(s.b2);
        const std::array<const std::array<ComplexMatrix, 3>*, 2> alice{&pa1, &pa2};
        const std::array<const std::array<ComplexMatrix, 3>*, 2> bob{&pb1, &pb2};

        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const int pair = 2 * i + j;
                for (std::size_t k = 0; k < 3; ++k) {
                    for (std::size_t l = 0; l < 3; ++l) {
                        const double oracle = oracle_probability(
                            (*alice[static_cast<std::size_t>(i)])[k],
                            (*bob[static_cast<std::size_t>(j)])[l],
                            rho.matrix());
                        CHECK(std::abs(t.at(pair, static_cast<int>(k),
                                            static_cast<int>(l)) -
                                       oracle) < 1e-12);
                    }
                }
            }
        }

        // table invariants: entries in [0,1], each pair sums to one
        for (int pair = 0; pair < 4; ++pair) {
            double sum = 0.0;
            for (int cell = 0; cell < 9; ++cell) {
                const double v = t.p[static_cast<std::size_t>(pair)]
                                    [static_cast<std::size_t>(cell)];
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                sum += v;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("no-signalling marginals hold for every table") {
    const DensityOperator rho = bound_entangled_state();
    for (std::uint64_t seed = 400; seed < 410; ++seed) {
        const ProbabilityTable t =
            probability_table(rho, haar_random_settings(seed));
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 3; ++k) {
                double m1 = 0.0;
                double m2 = 0.0;
                for (int l = 0; l < 3; ++l) {
                    m1 += t.at(2 * i + 0, k, l);
                    m2 += t.at(2 * i + 1, k, l);
                }
                CHECK(std::abs(m1 - m2) < 1e-12);
            }
        }
        for (int j = 0; j < 2; ++j) {
            for (int l = 0; l < 3; ++l) {
                double m1 = 0.0;
                double m2 = 0.0;
                for (int k = 0; k < 3; ++k) {
                    m1 += t.at(0 + j, k, l);
                    m2 += t.at(2 + j, k, l);
                }
                CHECK(std::abs(m1 - m2) < 1e-12);
            }
        }
    }
}

TEST_CASE("global phase on a basis leaves the table unchanged") {
    // shifting phi8 by 2pi/sqrt(3) multiplies the unitary by the cube
    // root of unity, a pure global phase
    Rng rng(44);
    const DensityOperator rho = bound_entangled_state();
    SettingsQuad s = haar_random_settings(7);
    const ProbabilityTable before = probability_table(rho, s);

    const double shift = 2.0 * M_PI / std::sqrt(3.0);
    const ComplexMatrix u_before = su3_unitary(s.a1);
    s.a1.phi[7] += shift;
    const ComplexMatrix u_after = su3_unitary(s.a1);
    const Complex omega = std::exp(Complex(0.0, 2.0 * M_PI / 3.0));
    ComplexMatrix rescaled = u_before;
    rescaled *= omega;
    CHECK(max_abs_diff(u_after, rescaled) < 1e-12);

    const ProbabilityTable after = probability_table(rho, s);
    for (int pair = 0; pair < 4; ++pair) {
        for (int cell = 0; cell < 9; ++cell) {
            CHECK(std::abs(before.p[static_cast<std::size_t>(pair)]
                                   [static_cast<std::size_t>(cell)] -
                           after.p[static_cast<std::size_t>(pair)]
                                  [static_cast<std::size_t>(cell)]) < 1e-12);
        }
    }
}

TEST_CASE("table is affine in the state") {
    Rng rng(45);
    const PureState psi = state_from_angles(canonical_psi_angles());
    const DensityOperator rho_b = bound_entangled_state();
    const DensityOperator pure = admixture(1.0, psi);
    for (int rep = 0; rep < 10; ++rep) {
        const double f = rng.uniform(0.0, 1.0);
        const SettingsQuad s =
            haar_random_settings(500 + static_cast<std::uint64_t>(rep));
        const ProbabilityTable mixed = probability_table(admixture(f, psi), s);
        const ProbabilityTable t0 = probability_table(rho_b, s);
        const ProbabilityTable t1 = probability_table(pure, s);
        for (int pair = 0; pair < 4; ++pair) {
            for (int cell = 0; cell < 9; ++cell) {
                const auto sp = static_cast<std::size_t>(pair);
                const auto sc = static_cast<std::size_t>(cell);
                CHECK(std::abs(mixed.p[sp][sc] -
                               ((1.0 - f) * t0.p[sp][sc] + f * t1.p[sp][sc])) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("settings sampling is deterministic in the seed") {
    const SettingsQuad a = haar_random_settings(1234);
    const SettingsQuad b = haar_random_settings(1234);
    for (int g = 0; g < 4; ++g) {
        const Su3Angles& ga = (g == 0) ? a.a1 : (g == 1) ? a.a2 : (g == 2) ? a.b1 : a.b2;
        const Su3Angles& gb = (g == 0) ? b.a1 : (g == 1) ? b.a2 : (g == 2) ? b.b1 : b.b2;
        for (int k = 0; k < 8; ++k) {
            CHECK(ga.phi[static_cast<std::size_t>(k)] ==
                  gb.phi[static_cast<std::size_t>(k)]);
        }
    }

    const SettingsQuad c = uniform_angle_settings(77);
    const SettingsQuad d = random_settings(77, SamplingMode::UniformAngles);
    CHECK(c.a2.phi[3] == d.a2.phi[3]);
}

TEST_CASE("maximally mixed table entries average to 1/9 over seeds") {
    const DensityOperator rho = maximally_mixed();
    double mean[9] = {0.0};
    const int n = 10000;
    for (int rep = 0; rep < n; ++rep) {
        const ProbabilityTable t =
            probability_table(rho, haar_random_settings(
                                       static_cast<std::uint64_t>(rep) + 10000));
        for (int cell = 0; cell < 9; ++cell) {
            mean[cell] += t.p[0][static_cast<std::size_t>(cell)];
        }
    }
    // 3 sigma binomial bound at p = 1/9
    const double bound =
        3.0 * std::sqrt((1.0 / 9.0) * (8.0 / 9.0) / static_cast<double>(n));
    for (int cell = 0; cell < 9; ++cell) {
        CHECK(std::abs(mean[cell] / n - 1.0 / 9.0) < bound);
    }
}

TEST_CASE("Haar overlap statistic matches Beta(1,2)") {
    const int n = 10000;
    std::vector<double> library;
    library.reserve(n);
    Rng rng(46);
    for (int rep = 0; rep < n; ++rep) {
        const ComplexMatrix u = su3_unitary(haar_random_basis(rng));
        library.push_back(std::norm(u(0, 0)));
    }

    // one-sample test against the closed-form CDF 1 - (1-x)^2
    const double d1 = ks_statistic_beta12(library);
    const double crit1 = 1.6276 / std::sqrt(static_cast<double>(n));
    CHECK(d1 < crit1);

    // two-sample test against an independently coded Ginibre-QR sampler
    std::mt19937_64 gen(477);
    std::vector<double> reference;
    reference.reserve(n);
    for (int rep = 0; rep < n; ++rep) {
        reference.push_back(independent_haar_u00(gen));
    }
    const double d2 = ks_statistic(library, reference);
    const double crit2 = 1.6276 * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(d2 < crit2);
}
