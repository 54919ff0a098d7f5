#pragma once

#include <array>
#include <variant>

#include "lhvprobe/lp.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/states.hpp"

namespace lhvprobe {

/// The 81-entry joint distribution P_LR over simultaneous outcomes
/// (k, l, m, n) of (A1, A2, B1, B2). Existence of such a distribution with
/// the right marginals is equivalent to a local realistic description.
struct JointDistribution {
    std::array<double, 81> p{};

    static std::size_t index(int k, int l, int m, int n) {
        return static_cast<std::size_t>(((k * 3 + l) * 3 + m) * 3 + n);
    }
    double sum() const;
};

/// Bell-type functional extracted from a Farkas dual: 36 coefficients in
/// ProbabilityTable order. Every deterministic strategy scores at most
/// lhv_bound, while the quantum table scores quantum_value > lhv_bound.
struct BellCertificate {
    std::array<double, 36> coefficients{};
    double lhv_bound = 0.0;
    double quantum_value = 0.0;
    double margin = 0.0;
};

/// Result of the critical-admixture LP.
struct FThreshold {
    double value = 0.0;
    JointDistribution witness;
    SettingsQuad settings;
    StateAngles state_angles;
};

using LhvVerdict = std::variant<JointDistribution, BellCertificate>;

inline bool is_feasible(const LhvVerdict& v) {
    return std::holds_alternative<JointDistribution>(v);
}

/// 81 variables, 37 equality rows: 36 marginal equations (four setting
/// pairs, nine outcome pairs each) plus the normalization row, zero
/// objective. Entries are 0/1; the system is rank-deficient by construction
/// and handed to the solver as is.
LpProblem build_feasibility(const ProbabilityTable& table);

/// Decide LHV existence for a quantum probability table. Feasible tables
/// yield a witnessing JointDistribution (marginal residual <= 1e-8);
/// infeasible ones a normalized BellCertificate. Solver breakdowns throw.
LhvVerdict lhv_feasible(const ProbabilityTable& table);

/// The 36-entry table of the deterministic strategy assigning outcomes
/// (k, l, m, n) to (A1, A2, B1, B2).
std::array<double, 36> strategy_table(int k, int l, int m, int n);

/// Value of a Bell functional on one deterministic strategy.
double strategy_value(const std::array<double, 36>& coefficients, int k,
                      int l, int m, int n);

/// Independent hull-membership formulation: is the table a convex mixture
/// of the 81 deterministic strategy tables? Must agree with lhv_feasible.
bool vertex_oracle(const ProbabilityTable& table);

/// Maximize F in [0, 1] subject to the LHV marginal equations at
/// rho(F) = (1-F) rho_B + F |psi><psi|; F enters the LP as a variable.
/// Returns the optimum with its witnessing distribution.
FThreshold critical_admixture(const SettingsQuad& settings,
                              const StateAngles& state_angles);

/// Max over the 36 marginal equations of |sum of consistent joint entries
/// minus the table entry|.
double check_marginals(const JointDistribution& dist,
                       const ProbabilityTable& table);

}  // namespace lhvprobe
