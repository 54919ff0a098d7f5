#include "lhvprobe/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lhvprobe {

namespace {

constexpr double kMarginalTol = 1e-8;
constexpr double kMarginTol = 1e-7;

// Which joint-distribution outcome indices a setting pair reads: pair 0 is
// (A1,B1) -> (k,m), pair 1 (A1,B2) -> (k,n), pair 2 (A2,B1) -> (l,m),
// pair 3 (A2,B2) -> (l,n).
struct PairView {
    int alice_slot;  // 0 = k (A1), 1 = l (A2)
    int bob_slot;    // 0 = m (B1), 1 = n (B2)
};

constexpr std::array<PairView, 4> kPairViews = {
    PairView{0, 0}, PairView{0, 1}, PairView{1, 0}, PairView{1, 1}};

bool pair_matches(const PairView& view, int k, int l, int m, int n, int a,
                  int b) {
    const int alice = view.alice_slot == 0 ? k : l;
    const int bob = view.bob_slot == 0 ? m : n;
    return alice == a && bob == b;
}

double marginal_sum(const JointDistribution& dist, int pair, int a, int b) {
    const PairView& view = kPairViews[static_cast<std::size_t>(pair)];
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    if (pair_matches(view, k, l, m, n, a, b)) {
                        sum += dist.p[JointDistribution::index(k, l, m, n)];
                    }
                }
            }
        }
    }
    return sum;
}

BellCertificate make_certificate(const std::vector<double>& farkas_dual,
                                 const ProbabilityTable& table) {
    BellCertificate cert;
    double scale = 0.0;
    for (std::size_t r = 0; r < 36; ++r) {
        scale = std::max(scale, std::abs(farkas_dual[r]));
    }
    if (scale <= 0.0) {
        throw std::runtime_error("degenerate Farkas dual: no marginal rows");
    }
    for (std::size_t r = 0; r < 36; ++r) {
        cert.coefficients[r] = farkas_dual[r] / scale;
    }

    double bound = -1e300;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    bound = std::max(
                        bound, strategy_value(cert.coefficients, k, l, m, n));
                }
            }
        }
    }
    cert.lhv_bound = bound;

    double quantum = 0.0;
    for (int pair = 0; pair < 4; ++pair) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                quantum += cert.coefficients[static_cast<std::size_t>(
                               pair * 9 + 3 * a + b)] *
                           table.at(pair, a, b);
            }
        }
    }
    cert.quantum_value = quantum;
    cert.margin = quantum - bound;
    if (!(cert.margin > kMarginTol)) {
        throw std::runtime_error(
            "infeasible verdict without a strict Bell margin");
    }
    return cert;
}

}  // namespace

double JointDistribution::sum() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

LpProblem build_feasibility(const ProbabilityTable& table) {
    LpProblem lp;
    lp.rows = 37;
    lp.cols = 81;
    lp.matrix.assign(37 * 81, 0.0);
    lp.rhs.assign(37, 0.0);
    lp.objective.assign(81, 0.0);

    for (int pair = 0; pair < 4; ++pair) {
        const PairView& view = kPairViews[static_cast<std::size_t>(pair)];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const std::size_t row =
                    static_cast<std::size_t>(pair * 9 + 3 * a + b);
                for (int k = 0; k < 3; ++k) {
                    for (int l = 0; l < 3; ++l) {
                        for (int m = 0; m < 3; ++m) {
                            for (int n = 0; n < 3; ++n) {
                                if (pair_matches(view, k, l, m, n, a, b)) {
                                    lp.matrix[row * 81 +
                                              JointDistribution::index(
                                                  k, l, m, n)] = 1.0;
                                }
                            }
                        }
                    }
                }
                lp.rhs[row] = table.at(pair, a, b);
            }
        }
    }
    for (std::size_t v = 0; v < 81; ++v) lp.matrix[36 * 81 + v] = 1.0;
    lp.rhs[36] = 1.0;
    return lp;
}

LhvVerdict lhv_feasible(const ProbabilityTable& table) {
    const LpProblem lp = build_feasibility(table);
    const LpOutcome outcome = solve(lp);

    switch (outcome.status) {
        case LpStatus::FeasibleOptimal: {
            JointDistribution dist;
            std::copy(outcome.solution.begin(), outcome.solution.end(),
                      dist.p.begin());
            if (check_marginals(dist, table) > kMarginalTol) {
                throw std::runtime_error(
                    "feasible LP point failed the marginal audit");
            }
            return dist;
        }
        case LpStatus::Infeasible:
            return make_certificate(outcome.farkas_dual, table);
        case LpStatus::Unbounded:
            throw std::runtime_error(
                "feasibility LP reported unbounded (zero objective)");
        case LpStatus::NumericalFailure:
        default:
            throw std::runtime_error("LP solver numerical failure");
    }
}

std::array<double, 36> strategy_table(int k, int l, int m, int n) {
    std::array<double, 36> t{};
    const std::array<int, 2> alice = {k, l};
    const std::array<int, 2> bob = {m, n};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const int pair = 2 * i + j;
            t[static_cast<std::size_t>(pair * 9 + 3 * alice[static_cast<std::size_t>(i)] +
                                       bob[static_cast<std::size_t>(j)])] = 1.0;
        }
    }
    return t;
}

double strategy_value(const std::array<double, 36>& c, int k, int l, int m,
                      int n) {
    return c[static_cast<std::size_t>(3 * k + m)] +
           c[static_cast<std::size_t>(9 + 3 * k + n)] +
           c[static_cast<std::size_t>(18 + 3 * l + m)] +
           c[static_cast<std::size_t>(27 + 3 * l + n)];
}

bool vertex_oracle(const ProbabilityTable& table) {
    // hull membership: 81 mixture weights over strategy tables
    LpProblem lp;
    lp.rows = 37;
    lp.cols = 81;
    lp.matrix.assign(37 * 81, 0.0);
    lp.rhs.assign(37, 0.0);
    lp.objective.assign(81, 0.0);

    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    const std::size_t s = JointDistribution::index(k, l, m, n);
                    const std::array<double, 36> t = strategy_table(k, l, m, n);
                    for (std::size_t r = 0; r < 36; ++r) {
                        lp.matrix[r * 81 + s] = t[r];
                    }
                    lp.matrix[36 * 81 + s] = 1.0;
                }
            }
        }
    }
    for (int pair = 0; pair < 4; ++pair) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                lp.rhs[static_cast<std::size_t>(pair * 9 + 3 * a + b)] =
                    table.at(pair, a, b);
            }
        }
    }
    lp.rhs[36] = 1.0;

    const LpOutcome outcome = solve(lp);
    if (outcome.status == LpStatus::FeasibleOptimal) return true;
    if (outcome.status == LpStatus::Infeasible) return false;
    throw std::runtime_error("vertex oracle LP did not resolve");
}

FThreshold critical_admixture(const SettingsQuad& settings,
                              const StateAngles& state_angles) {
    const PureState psi = state_from_angles(state_angles);
    const ProbabilityTable base =
        probability_table(bound_entangled_state(), settings);
    const ProbabilityTable pure =
        probability_table(DensityOperator(psi.projector()), settings);

    // 81 joint entries plus F as variable 81; marginal rows read
    //   marginal(P_LR) - F (table_psi - table_B) = table_B
    LpProblem lp = build_feasibility(base);
    LpProblem wide;
    wide.rows = 37;
    wide.cols = 82;
    wide.matrix.assign(37 * 82, 0.0);
    wide.rhs = lp.rhs;
    wide.objective.assign(82, 0.0);
    wide.objective[81] = 1.0;
    wide.upper_bounds.assign(82, std::numeric_limits<double>::infinity());
    wide.upper_bounds[81] = 1.0;
    for (std::size_t r = 0; r < 37; ++r) {
        for (std::size_t c = 0; c < 81; ++c) {
            wide.matrix[r * 82 + c] = lp.matrix[r * 81 + c];
        }
    }
    for (int pair = 0; pair < 4; ++pair) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const std::size_t row =
                    static_cast<std::size_t>(pair * 9 + 3 * a + b);
                wide.matrix[row * 82 + 81] =
                    base.at(pair, a, b) - pure.at(pair, a, b);
            }
        }
    }

    const LpOutcome outcome = solve(wide);
    if (outcome.status != LpStatus::FeasibleOptimal) {
        throw std::runtime_error(
            "critical admixture LP did not reach an optimum");
    }

    FThreshold result;
    result.value = std::clamp(outcome.solution[81], 0.0, 1.0);
    std::copy(outcome.solution.begin(), outcome.solution.begin() + 81,
              result.witness.p.begin());
    result.settings = settings;
    result.state_angles = state_angles;

    const ProbabilityTable mixed =
        probability_table(admixture(result.value, psi), settings);
    if (check_marginals(result.witness, mixed) > kMarginalTol) {
        throw std::runtime_error(
            "critical admixture witness failed the marginal audit");
    }
    return result;
}

double check_marginals(const JointDistribution& dist,
                       const ProbabilityTable& table) {
    double worst = 0.0;
    for (int pair = 0; pair < 4; ++pair) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double lhs = marginal_sum(dist, pair, a, b);
                worst = std::max(worst,
                                 std::abs(lhs - table.at(pair, a, b)));
            }
        }
    }
    return worst;
}

}  // namespace lhvprobe
