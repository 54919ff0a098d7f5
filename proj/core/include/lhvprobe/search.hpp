#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lhvprobe/lhv.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/states.hpp"

namespace lhvprobe {

struct NelderMeadOptions {
    int max_iterations = 5000;
    double simplex_spread_tolerance = 1e-6;
    double value_tolerance = 1e-7;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    long evaluations = 0;
    bool converged = false;
};

/// Downhill-simplex minimization of f starting from the given vertices
/// (dimension + 1 of them). Objective values are memoized on exact
/// point match within the run. Stops on simplex spread, value spread,
/// or the iteration cap (converged = false in the last case).
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> initial_simplex,
    const NelderMeadOptions& options);

struct CampaignConfig {
    long trials = 10000;
    std::uint64_t seed = 0;
    SamplingMode sampling_mode = SamplingMode::Haar;
    bool use_mixture = false;      ///< false: rho_B, true: admixture below
    double mixture_fraction = 0.0;
    PureState mixture_psi;         ///< only read when use_mixture
    /// explicit state, overriding the rho_B / mixture selection; a testing
    /// hook for campaigns on arbitrary density operators
    std::optional<DensityOperator> state_override;
    int worker_count = 1;
};

struct InfeasibleRecord {
    long trial = 0;
    SettingsQuad settings;
    BellCertificate certificate;
};

struct FailureRecord {
    long trial = 0;
    std::string message;
};

struct CampaignReport {
    long trials_run = 0;
    long feasible_count = 0;
    std::vector<InfeasibleRecord> infeasible_records;
    std::vector<FailureRecord> failure_records;  ///< empty in healthy runs
    double wall_time_seconds = 0.0;
    CampaignConfig config;
    /// per-trial stream, indexed by trial: 1 feasible / 0 infeasible /
    /// -1 failure, and the marginal residual or certificate margin
    std::vector<int> per_trial_feasible;
    std::vector<double> per_trial_metric;
};

/// Trial t draws settings from seed xor t, builds the quantum table for the
/// configured state and decides feasibility. Results are slot-addressed by
/// trial index, so the report never depends on worker_count.
CampaignReport run_campaign(const CampaignConfig& config);

struct AmoebaConfig {
    int restarts = 20;
    std::uint64_t seed = 0;
    int max_iterations = 20000;  ///< per restart, across its amoeba reruns
    double simplex_spread_tolerance = 1e-6;
    double value_tolerance = 1e-7;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// when set, only the 32 observable angles are searched and the state
    /// stays fixed; otherwise 38 angles (32 + 6 state angles)
    std::optional<StateAngles> fixed_state;
    int worker_count = 1;
};

struct MinimizationResult {
    double best_F = 1.0;
    SettingsQuad best_settings;
    StateAngles best_state_angles;
    PureState best_state_vector;
    std::vector<double> per_restart_F;
    std::vector<bool> per_restart_converged;
    long evaluations = 0;
};

/// Global search for min_settings critical_admixture(...): Nelder-Mead
/// restarts from random initial simplices (base uniform in [0, 2pi) per
/// coordinate, offsets 0.25 rad). Within a restart the amoeba is rerun
/// from its own result until it stops improving, since one pass over this
/// many angles tends to stall early. The winning point is re-evaluated
/// once more as an audit; a mismatch beyond 1e-8 throws.
MinimizationResult minimize_F(const AmoebaConfig& config);

/// Maximize linear_entanglement_degree over the six state angles.
std::pair<PureState, double> max_entanglement_check(
    std::uint64_t seed = 0x1b5u, int restarts = 12);

}  // namespace lhvprobe
