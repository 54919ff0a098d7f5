#include "lhvprobe/measurements.hpp"

#include <cmath>
#include <stdexcept>

namespace lhvprobe {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt3 = 0.57735026918962576450914878050196;

// exp(i x lambda_2): plane rotation in the 0-1 block.
ComplexMatrix r2(double x) {
    ComplexMatrix m = ComplexMatrix::identity(3);
    const double c = std::cos(x), s = std::sin(x);
    m(0, 0) = c;
    m(0, 1) = s;
    m(1, 0) = -s;
    m(1, 1) = c;
    return m;
}

// exp(i x lambda_3) = diag(e^{ix}, e^{-ix}, 1).
ComplexMatrix r3(double x) {
    ComplexMatrix m = ComplexMatrix::identity(3);
    m(0, 0) = std::polar(1.0, x);
    m(1, 1) = std::polar(1.0, -x);
    return m;
}

// exp(i x lambda_5): plane rotation in the 0-2 block.
ComplexMatrix r5(double x) {
    ComplexMatrix m = ComplexMatrix::identity(3);
    const double c = std::cos(x), s = std::sin(x);
    m(0, 0) = c;
    m(0, 2) = s;
    m(2, 0) = -s;
    m(2, 2) = c;
    return m;
}

// exp(i x lambda_8) = diag(e^{ix/sqrt3}, e^{ix/sqrt3}, e^{-2ix/sqrt3}).
ComplexMatrix r8(double x) {
    ComplexMatrix m = ComplexMatrix::identity(3);
    m(0, 0) = std::polar(1.0, x * kInvSqrt3);
    m(1, 1) = std::polar(1.0, x * kInvSqrt3);
    m(2, 2) = std::polar(1.0, -2.0 * x * kInvSqrt3);
    return m;
}

// ZYZ-style split of the embedded SU(2) block with first column (alpha,
// beta): angles (a, b, c) with R3(a) R2(b) R3(c) reproducing the block
//   [[e^{i(a+c)} cos b, e^{i(a-c)} sin b],
//    [-e^{-i(a-c)} sin b, e^{-i(a+c)} cos b]].
struct Su2Split {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

Su2Split su2_from_first_column(Complex alpha, Complex beta) {
    constexpr double kTiny = 1e-13;
    Su2Split out;
    const double ra = std::abs(alpha), rb = std::abs(beta);
    out.b = std::atan2(rb, ra);
    if (rb <= kTiny) {
        out.a = std::arg(alpha);
        return out;
    }
    // column's beta entry is -e^{-i(a-c)} sin b
    const double diff = -std::arg(-beta);
    if (ra <= kTiny) {
        out.a = diff / 2.0;
        out.c = -diff / 2.0;
        return out;
    }
    const double sum = std::arg(alpha);
    out.a = (sum + diff) / 2.0;
    out.c = (sum - diff) / 2.0;
    return out;
}

}  // namespace

ComplexMatrix su3_unitary(const Su3Angles& g) {
    const auto& p = g.phi;
    return r3(p[0]) * r2(p[1]) * r3(p[2]) * r5(p[3]) * r3(p[4]) * r2(p[5]) *
           r3(p[6]) * r8(p[7]);
}

Su3Angles su3_angles_from_unitary(const ComplexMatrix& u) {
    if (u.rows() != 3 || u.cols() != 3) {
        throw std::invalid_argument("su3_angles_from_unitary expects 3x3");
    }
    constexpr double kTiny = 1e-13;

    // Split off the lambda_8 phase using the (2,2) entry, which the
    // factorization leaves as cos(theta) e^{-2i phi8/sqrt3}.
    double phi8 = 0.0;
    if (std::abs(u(2, 2)) > kTiny) {
        phi8 = -std::arg(u(2, 2)) * std::sqrt(3.0) / 2.0;
    }
    const ComplexMatrix w = u * r8(-phi8);

    const double off = std::hypot(std::abs(w(0, 2)), std::abs(w(1, 2)));
    const double theta = std::atan2(off, std::abs(w(2, 2)));

    Su2Split left;
    if (off > kTiny) {
        left = su2_from_first_column(w(0, 2) / off, w(1, 2) / off);
    }
    const ComplexMatrix v1 =
        r3(left.a) * r2(left.b) * r3(left.c);
    const ComplexMatrix rest = r5(-theta) * v1.adjoint() * w;
    const Su2Split right = su2_from_first_column(rest(0, 0), rest(1, 0));

    Su3Angles out;
    out.phi = {left.a, left.b, left.c, theta,
               right.a, right.b, right.c, phi8};
    return out;
}

std::array<ComplexMatrix, 3> measurement_projectors(const Su3Angles& angles) {
    const ComplexMatrix u = su3_unitary(angles);
    std::array<ComplexMatrix, 3> out{ComplexMatrix(3, 3), ComplexMatrix(3, 3),
                                     ComplexMatrix(3, 3)};
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = 0; c < 3; ++c) {
                out[k](r, c) = u(r, k) * std::conj(u(c, k));
            }
        }
    }
    return out;
}

ProbabilityTable probability_table(const DensityOperator& rho,
                                   const SettingsQuad& settings) {
    const std::array<std::array<ComplexMatrix, 3>, 2> alice = {
        measurement_projectors(settings.a1),
        measurement_projectors(settings.a2)};
    const std::array<std::array<ComplexMatrix, 3>, 2> bob = {
        measurement_projectors(settings.b1),
        measurement_projectors(settings.b2)};

    const ComplexMatrix& m = rho.matrix();
    ProbabilityTable table;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const std::size_t pair = 2 * i + j;
            for (int k = 0; k < 3; ++k) {
                for (int l = 0; l < 3; ++l) {
                    // Tr[(Pi_k (x) Pi_l) rho] without forming the Kronecker
                    // product: contract the 3x3 blocks directly.
                    Complex sum = 0.0;
                    const ComplexMatrix& pa = alice[i][static_cast<std::size_t>(k)];
                    const ComplexMatrix& pb = bob[j][static_cast<std::size_t>(l)];
                    for (std::size_t r = 0; r < 3; ++r) {
                        for (std::size_t s = 0; s < 3; ++s) {
                            for (std::size_t t = 0; t < 3; ++t) {
                                for (std::size_t v = 0; v < 3; ++v) {
                                    sum += pa(r, s) * pb(t, v) *
                                           m(3 * s + v, 3 * r + t);
                                }
                            }
                        }
                    }
                    double value = sum.real();
                    if (value < 0.0 && value > -1e-12) value = 0.0;
                    if (value > 1.0 && value < 1.0 + 1e-12) value = 1.0;
                    table.p[pair][static_cast<std::size_t>(3 * k + l)] = value;
                }
            }
        }
    }
    return table;
}

Su3Angles haar_random_basis(Rng& rng) {
    // Ginibre draw
    ComplexMatrix g(3, 3);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            g(r, c) = Complex(rng.gaussian(), rng.gaussian());
        }
    }
    // Modified Gram-Schmidt; dividing by the real positive column norm is
    // the R-diagonal phase fix that makes Q Haar on U(3).
    ComplexMatrix q = g;
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            Complex proj = 0.0;
            for (std::size_t r = 0; r < 3; ++r) {
                proj += std::conj(q(r, prev)) * q(r, c);
            }
            for (std::size_t r = 0; r < 3; ++r) {
                q(r, c) -= proj * q(r, prev);
            }
        }
        double norm_sq = 0.0;
        for (std::size_t r = 0; r < 3; ++r) norm_sq += std::norm(q(r, c));
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t r = 0; r < 3; ++r) q(r, c) *= inv;
    }
    // Pull the determinant phase out evenly to land in SU(3); a global
    // column-phase change never moves the projectors.
    const Complex det =
        q(0, 0) * (q(1, 1) * q(2, 2) - q(1, 2) * q(2, 1)) -
        q(0, 1) * (q(1, 0) * q(2, 2) - q(1, 2) * q(2, 0)) +
        q(0, 2) * (q(1, 0) * q(2, 1) - q(1, 1) * q(2, 0));
    const Complex fix = std::polar(1.0, -std::arg(det) / 3.0);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) q(r, c) *= fix;
    }
    return su3_angles_from_unitary(q);
}

SettingsQuad haar_random_settings(std::uint64_t seed) {
    Rng rng(seed);
    SettingsQuad quad;
    quad.a1 = haar_random_basis(rng);
    quad.a2 = haar_random_basis(rng);
    quad.b1 = haar_random_basis(rng);
    quad.b2 = haar_random_basis(rng);
    return quad;
}

SettingsQuad uniform_angle_settings(std::uint64_t seed) {
    Rng rng(seed);
    SettingsQuad quad;
    for (Su3Angles* g : {&quad.a1, &quad.a2, &quad.b1, &quad.b2}) {
        for (double& phi : g->phi) phi = rng.uniform(0.0, kTwoPi);
    }
    return quad;
}

SettingsQuad random_settings(std::uint64_t seed, SamplingMode mode) {
    return mode == SamplingMode::Haar ? haar_random_settings(seed)
                                      : uniform_angle_settings(seed);
}

}  // namespace lhvprobe
