#include <doctest.h>

#include <cmath>
#include <variant>
#include <vector>

#include "lhvprobe/lhv.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/rng.hpp"
#include "lhvprobe/states.hpp"

using namespace lhvprobe;

namespace {

DensityOperator pure_product_00() {
    ComplexMatrix m(9, 9);
    m(0, 0) = 1.0;
    return DensityOperator(m);
}

ProbabilityTable table_from_36(const std::array<double, 36>& flat) {
    ProbabilityTable t;
    for (std::size_t pair = 0; pair < 4; ++pair) {
        for (std::size_t cell = 0; cell < 9; ++cell) {
            t.p[pair][cell] = flat[pair * 9 + cell];
        }
    }
    return t;
}

ProbabilityTable uniform_table() {
    ProbabilityTable t;
    for (auto& pair : t.p) pair.fill(1.0 / 9.0);
    return t;
}

ProbabilityTable random_hull_point(Rng& rng) {
    std::array<double, 81> w{};
    double sum = 0.0;
    for (double& x : w) {
        x = rng.next_double();
        sum += x;
    }
    std::array<double, 36> flat{};
    std::size_t s = 0;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n, ++s) {
                    const auto st = strategy_table(k, l, m, n);
                    for (std::size_t e = 0; e < 36; ++e) {
                        flat[e] += (w[s] / sum) * st[e];
                    }
                }
            }
        }
    }
    return table_from_36(flat);
}

void check_certificate_invariants(const BellCertificate& cert) {
    double best = -1e300;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    const double v =
                        strategy_value(cert.coefficients, k, l, m, n);
                    CHECK(v <= cert.lhv_bound + 1e-9);
                    best = std::max(best, v);
                }
            }
        }
    }
    CHECK(best == doctest::Approx(cert.lhv_bound).epsilon(1e-9));
    CHECK(cert.margin > 1e-7);
    CHECK(cert.quantum_value - cert.lhv_bound ==
          doctest::Approx(cert.margin).epsilon(1e-12));
}

}  // namespace

TEST_CASE("feasibility LP layout") {
    const ProbabilityTable t = uniform_table();
    const LpProblem p = build_feasibility(t);
    REQUIRE(p.rows == 37);
    REQUIRE(p.cols == 81);

    for (std::size_t r = 0; r < 36; ++r) {
        int ones = 0;
        for (std::size_t c = 0; c < 81; ++c) {
            const double v = p.at(r, c);
            CHECK((v == 0.0 || v == 1.0));
            if (v == 1.0) ++ones;
        }
        CHECK(ones == 9);
        CHECK(p.rhs[r] ==
              t.p[r / 9][r % 9]);
    }
    for (std::size_t c = 0; c < 81; ++c) CHECK(p.at(36, c) == 1.0);
    CHECK(p.rhs[36] == 1.0);

    // rank deficiency by construction: the nine rows of one setting pair
    // sum to the normalization row
    for (std::size_t pair = 0; pair < 4; ++pair) {
        for (std::size_t c = 0; c < 81; ++c) {
            double acc = 0.0;
            for (std::size_t cell = 0; cell < 9; ++cell) {
                acc += p.at(pair * 9 + cell, c);
            }
            CHECK(acc == 1.0);
        }
    }
}

TEST_CASE("product state tables are feasible") {
    for (std::uint64_t seed = 70; seed < 75; ++seed) {
        const ProbabilityTable t =
            probability_table(pure_product_00(), haar_random_settings(seed));
        const LhvVerdict v = lhv_feasible(t);
        REQUIRE(is_feasible(v));
        CHECK(check_marginals(std::get<JointDistribution>(v), t) <= 1e-8);
    }
}

TEST_CASE("single-pair experiments are classical") {
    SettingsQuad s = haar_random_settings(71);
    s.a2 = s.a1;
    s.b2 = s.b1;
    const ProbabilityTable t =
        probability_table(bound_entangled_state(), s);
    CHECK(is_feasible(lhv_feasible(t)));

    const PureState psi = state_from_angles(canonical_psi_angles());
    const ProbabilityTable t2 = probability_table(admixture(1.0, psi), s);
    CHECK(is_feasible(lhv_feasible(t2)));
}

TEST_CASE("vertex oracle on landmark tables") {
    CHECK(vertex_oracle(uniform_table()));
    CHECK(vertex_oracle(table_from_36(strategy_table(0, 1, 2, 0))));
    CHECK(vertex_oracle(table_from_36(strategy_table(2, 2, 2, 2))));
}

TEST_CASE("formulations agree on a mixed corpus") {
    Rng rng(72);
    int infeasible = 0;
    for (int rep = 0; rep < 30; ++rep) {
        const ProbabilityTable t = random_hull_point(rng);
        const bool lp = is_feasible(lhv_feasible(t));
        const bool hull = vertex_oracle(t);
        CHECK(lp == hull);
        CHECK(lp);
    }
    const PureState psi = state_from_angles(canonical_psi_angles());
    for (std::uint64_t seed = 900; seed < 930; ++seed) {
        const ProbabilityTable t = probability_table(
            admixture(0.95, psi), haar_random_settings(seed));
        const LhvVerdict v = lhv_feasible(t);
        CHECK(is_feasible(v) == vertex_oracle(t));
        if (!is_feasible(v)) {
            ++infeasible;
            check_certificate_invariants(std::get<BellCertificate>(v));
        }
    }
    // the F = 0.95 mixture is deep in the nonlocal regime; random settings
    // must expose it at least once in thirty draws
    CHECK(infeasible > 0);
}

TEST_CASE("no-signalling violators are infeasible") {
    ProbabilityTable t = uniform_table();
    // Alice's A1 marginal depends on Bob's choice: all mass at (0,0) when
    // Bob measures B1 but at (1,1) when Bob measures B2
    t.p[0].fill(0.0);
    t.p[0][0] = 1.0;
    t.p[1].fill(0.0);
    t.p[1][4] = 1.0;

    const LhvVerdict v = lhv_feasible(t);
    REQUIRE(!is_feasible(v));
    check_certificate_invariants(std::get<BellCertificate>(v));
    CHECK(!vertex_oracle(t));
}

TEST_CASE("critical admixture is 1 for degenerate settings") {
    SettingsQuad s = haar_random_settings(73);
    s.a2 = s.a1;
    s.b2 = s.b1;
    const FThreshold th = critical_admixture(s, canonical_psi_angles());
    CHECK(th.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("critical admixture threshold is sharp") {
    const SettingsQuad s = haar_random_settings(74);
    const StateAngles angles = canonical_psi_angles();
    const FThreshold th = critical_admixture(s, angles);
    REQUIRE(th.value >= 0.0);
    REQUIRE(th.value <= 1.0);

    const PureState psi = state_from_angles(angles);
    CHECK(check_marginals(th.witness,
                          probability_table(admixture(th.value, psi), s)) <=
          1e-8);

    if (th.value >= 0.011) {
        const ProbabilityTable below = probability_table(
            admixture(th.value - 0.01, psi), s);
        CHECK(is_feasible(lhv_feasible(below)));
    }
    if (th.value + 0.01 <= 1.0) {
        const ProbabilityTable above = probability_table(
            admixture(th.value + 0.01, psi), s);
        CHECK(!is_feasible(lhv_feasible(above)));
    }
}

TEST_CASE("marginal residual audit") {
    JointDistribution uniform;
    uniform.p.fill(1.0 / 81.0);
    CHECK(check_marginals(uniform, uniform_table()) == 0.0);

    JointDistribution perturbed = uniform;
    perturbed.p[JointDistribution::index(1, 2, 0, 1)] += 1e-3;
    CHECK(check_marginals(perturbed, uniform_table()) >= 1e-3 - 1e-12);
}

TEST_CASE("maximally entangled state violates at the frozen settings") {
    // Settings found by maximizing the certificate margin over the 32
    // observable angles for the state (|00> + |11> + |22>)/sqrt(3).
    // The margin value is a frozen regression of that search.
    const double flat[32] = {
        1.1249313643680554,     0.95406781832306997,
        -0.58373279874594119,   0.98671615622717157,
        2.6437594879667805,     0.086767403754521993,
        -0.0031992855287865758, -0.59825887466893368,
        -0.16199258914466946,   0.62492910636331678,
        -2.4793001507696704,    0.88893272995946093,
        0.41270208310164913,    0.67379516810689855,
        0.35243964490321156,    1.8014930889866796,
        1.6564381315264161,     1.1718318456301449,
        0.16033843461773412,    0.78360245820626462,
        0.066130484620345459,   1.3715393230562034,
        0.18464008605290771,    -1.1808790051449467,
        -1.2635769181348864,    0.9792606696287236,
        0.97377783530680828,    1.1838214151383017,
        0.31148502819307017,    0.45665003313979591,
        0.48746303411067227,    0.17912887479215828};
    SettingsQuad settings;
    Su3Angles* parts[4] = {&settings.a1, &settings.a2, &settings.b1,
                           &settings.b2};
    for (int p = 0; p < 4; ++p) {
        for (int i = 0; i < 8; ++i) parts[p]->phi[i] = flat[8 * p + i];
    }

    PureState me;
    const double r3 = 1.0 / std::sqrt(3.0);
    me.amplitudes[0] = r3;
    me.amplitudes[4] = r3;
    me.amplitudes[8] = r3;
    const DensityOperator rho{me.projector()};

    const LhvVerdict verdict =
        lhv_feasible(probability_table(rho, settings));
    REQUIRE(!is_feasible(verdict));
    const BellCertificate& cert = std::get<BellCertificate>(verdict);
    check_certificate_invariants(cert);
    CHECK(cert.margin > 1e-4);
    CHECK(cert.margin == doctest::Approx(0.34517793738379543).epsilon(1e-9));
}
