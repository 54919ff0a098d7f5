#include "lhvprobe/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lhvprobe/parallel.hpp"
#include "lhvprobe/rng.hpp"

namespace lhvprobe {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSimplexOffset = 0.25;

void validate(const NelderMeadOptions& o) {
    if (!(o.reflection > 0.0) || !(o.expansion > 1.0) ||
        !(o.contraction > 0.0 && o.contraction < 1.0) ||
        !(o.shrink > 0.0 && o.shrink < 1.0)) {
        throw std::invalid_argument("bad Nelder-Mead coefficients");
    }
}

std::vector<std::vector<double>> simplex_around(const std::vector<double>& base,
                                                double offset) {
    std::vector<std::vector<double>> vertices(base.size() + 1, base);
    for (std::size_t i = 0; i < base.size(); ++i) {
        vertices[i + 1][i] += offset;
    }
    return vertices;
}

std::vector<std::vector<double>> random_simplex(Rng& rng, std::size_t dim) {
    std::vector<double> base(dim);
    for (double& v : base) v = rng.uniform(0.0, kTwoPi);
    return simplex_around(base, kSimplexOffset);
}

SettingsQuad settings_from_flat(const double* x) {
    SettingsQuad q;
    Su3Angles* gs[4] = {&q.a1, &q.a2, &q.b1, &q.b2};
    for (int g = 0; g < 4; ++g) {
        for (int i = 0; i < 8; ++i) {
            gs[g]->phi[static_cast<std::size_t>(i)] = x[8 * g + i];
        }
    }
    return q;
}

StateAngles state_angles_from_flat(const double* x) {
    StateAngles g;
    g.psi = x[0];
    g.theta = x[1];
    g.phi = x[2];
    g.chi1 = x[3];
    g.chi2 = x[4];
    g.chi3 = x[5];
    return g;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> simplex, const NelderMeadOptions& o) {
    validate(o);
    if (simplex.empty() || simplex.size() != simplex[0].size() + 1) {
        throw std::invalid_argument("simplex needs dimension + 1 vertices");
    }
    const std::size_t dim = simplex[0].size();

    NelderMeadResult result;
    std::map<std::vector<double>, double> cache;
    auto eval = [&](const std::vector<double>& p) {
        auto it = cache.find(p);
        if (it != cache.end()) return it->second;
        const double v = f(p);
        ++result.evaluations;
        cache.emplace(p, v);
        return v;
    };

    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    for (int iter = 0; iter < o.max_iterations; ++iter) {
        result.iterations = iter;
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values[a] < values[b];
        });
        const std::size_t best = order[0];
        const std::size_t second_worst = order[dim - 1];
        const std::size_t worst = order[dim];

        double spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                spread = std::max(
                    spread, std::abs(simplex[i][d] - simplex[best][d]));
            }
        }
        if (spread < o.simplex_spread_tolerance ||
            values[worst] - values[best] < o.value_tolerance) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef, const std::vector<double>& away) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                p[d] = centroid[d] + coef * (centroid[d] - away[d]);
            }
            return p;
        };

        const std::vector<double> reflected = blend(o.reflection, simplex[worst]);
        const double fr = eval(reflected);

        if (fr < values[best]) {
            const std::vector<double> expanded =
                blend(o.reflection * o.expansion, simplex[worst]);
            const double fe = eval(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }

        // contraction: outside when the reflected point improved on the
        // worst vertex, inside otherwise
        std::vector<double> contracted;
        double fc;
        if (fr < values[worst]) {
            contracted = blend(o.reflection * o.contraction, simplex[worst]);
            fc = eval(contracted);
            if (fc <= fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
                continue;
            }
        } else {
            contracted = blend(-o.contraction, simplex[worst]);
            fc = eval(contracted);
            if (fc < values[worst]) {
                simplex[worst] = contracted;
                values[worst] = fc;
                continue;
            }
        }

        // shrink toward the best vertex
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < dim; ++d) {
                simplex[i][d] = simplex[best][d] +
                                o.shrink * (simplex[i][d] - simplex[best][d]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    std::size_t arg_best = 0;
    for (std::size_t i = 1; i <= dim; ++i) {
        if (values[i] < values[arg_best]) arg_best = i;
    }
    result.point = simplex[arg_best];
    result.value = values[arg_best];
    return result;
}

CampaignReport run_campaign(const CampaignConfig& config) {
    if (config.trials < 1) {
        throw std::invalid_argument("campaign needs at least one trial");
    }
    const DensityOperator rho =
        config.state_override
            ? *config.state_override
            : config.use_mixture
                  ? admixture(config.mixture_fraction, config.mixture_psi)
                  : bound_entangled_state();

    CampaignReport report;
    report.config = config;
    report.trials_run = config.trials;
    report.per_trial_feasible.assign(static_cast<std::size_t>(config.trials), 0);
    report.per_trial_metric.assign(static_cast<std::size_t>(config.trials), 0.0);

    std::mutex record_mutex;
    const auto started = std::chrono::steady_clock::now();

    parallel_for(config.trials, config.worker_count, [&](long t) {
        const std::size_t slot = static_cast<std::size_t>(t);
        const SettingsQuad settings = random_settings(
            config.seed ^ static_cast<std::uint64_t>(t), config.sampling_mode);
        try {
            const ProbabilityTable table = probability_table(rho, settings);
            const LhvVerdict verdict = lhv_feasible(table);
            if (is_feasible(verdict)) {
                report.per_trial_feasible[slot] = 1;
                report.per_trial_metric[slot] =
                    check_marginals(std::get<JointDistribution>(verdict), table);
            } else {
                const BellCertificate& cert = std::get<BellCertificate>(verdict);
                report.per_trial_feasible[slot] = 0;
                report.per_trial_metric[slot] = cert.margin;
                std::lock_guard<std::mutex> lock(record_mutex);
                report.infeasible_records.push_back({t, settings, cert});
            }
        } catch (const std::exception& e) {
            report.per_trial_feasible[slot] = -1;
            report.per_trial_metric[slot] = 0.0;
            std::lock_guard<std::mutex> lock(record_mutex);
            report.failure_records.push_back({t, e.what()});
        }
    });

    const auto finished = std::chrono::steady_clock::now();
    report.wall_time_seconds =
        std::chrono::duration<double>(finished - started).count();

    for (int flag : report.per_trial_feasible) {
        if (flag == 1) ++report.feasible_count;
    }
    auto by_trial = [](const auto& a, const auto& b) { return a.trial < b.trial; };
    std::sort(report.infeasible_records.begin(), report.infeasible_records.end(),
              by_trial);
    std::sort(report.failure_records.begin(), report.failure_records.end(),
              by_trial);
    return report;
}

MinimizationResult minimize_F(const AmoebaConfig& config) {
    if (config.restarts < 1) {
        throw std::invalid_argument("minimize_F needs at least one restart");
    }
    NelderMeadOptions options;
    options.max_iterations = config.max_iterations;
    options.simplex_spread_tolerance = config.simplex_spread_tolerance;
    options.value_tolerance = config.value_tolerance;
    options.reflection = config.reflection;
    options.expansion = config.expansion;
    options.contraction = config.contraction;
    options.shrink = config.shrink;
    validate(options);

    const std::size_t dim = config.fixed_state ? 32 : 38;
    auto decode_settings = [](const std::vector<double>& x) {
        return settings_from_flat(x.data());
    };
    auto decode_state = [&](const std::vector<double>& x) {
        return config.fixed_state ? *config.fixed_state
                                  : state_angles_from_flat(x.data() + 32);
    };
    auto objective = [&](const std::vector<double>& x) {
        return critical_admixture(decode_settings(x), decode_state(x)).value;
    };

    // One amoeba pass over 32 or 38 angles routinely stops on a collapsed
    // simplex well short of the local minimum. Each restart therefore
    // reruns the amoeba from the point it just returned with a fresh
    // full-size simplex, shrinking the rebuild offset whenever a rerun
    // stops improving. The restart's iteration budget caps the total.
    auto descend = [&](Rng& rng) {
        NelderMeadOptions step = options;
        int remaining = options.max_iterations;
        long evaluations = 0;
        int iterations = 0;

        auto run_once = [&](const std::vector<std::vector<double>>& simplex) {
            step.max_iterations = remaining;
            NelderMeadResult run = nelder_mead(objective, simplex, step);
            remaining -= std::max(1, run.iterations);
            evaluations += run.evaluations;
            iterations += run.iterations;
            return run;
        };

        NelderMeadResult best = run_once(random_simplex(rng, dim));
        double offset = kSimplexOffset;
        while (remaining > 0 && offset >= 2e-3) {
            const NelderMeadResult run =
                run_once(simplex_around(best.point, offset));
            const bool improved = run.value < best.value - 1e-9;
            if (run.value < best.value) {
                best.point = run.point;
                best.value = run.value;
            }
            best.converged = run.converged;
            offset = improved ? kSimplexOffset : offset * 0.5;
        }
        best.evaluations = evaluations;
        best.iterations = iterations;
        return best;
    };

    std::vector<NelderMeadResult> runs(static_cast<std::size_t>(config.restarts));
    parallel_for(config.restarts, config.worker_count, [&](long r) {
        Rng rng(config.seed ^ static_cast<std::uint64_t>(r));
        runs[static_cast<std::size_t>(r)] = descend(rng);
    });

    MinimizationResult result;
    std::size_t winner = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        result.per_restart_F.push_back(runs[r].value);
        result.per_restart_converged.push_back(runs[r].converged);
        result.evaluations += runs[r].evaluations;
        if (runs[r].value < runs[winner].value) winner = r;
    }

    const NelderMeadResult& best = runs[winner];
    result.best_F = best.value;
    result.best_settings = decode_settings(best.point);
    result.best_state_angles = decode_state(best.point);
    result.best_state_vector = state_from_angles(result.best_state_angles);

    const double audit =
        critical_admixture(result.best_settings, result.best_state_angles).value;
    if (std::abs(audit - result.best_F) > 1e-8) {
        throw std::runtime_error("best point re-evaluation mismatch");
    }
    return result;
}

std::pair<PureState, double> max_entanglement_check(std::uint64_t seed,
                                                    int restarts) {
    NelderMeadOptions options;
    options.max_iterations = 2000;
    options.simplex_spread_tolerance = 1e-9;
    options.value_tolerance = 1e-12;

    auto objective = [](const std::vector<double>& x) {
        return -linear_entanglement_degree(
            state_from_angles(state_angles_from_flat(x.data())));
    };

    Rng rng(seed);
    double best_value = 1.0;
    std::vector<double> best_point(6, 0.0);
    for (int r = 0; r < restarts; ++r) {
        const NelderMeadResult run =
            nelder_mead(objective, random_simplex(rng, 6), options);
        if (run.value < best_value) {
            best_value = run.value;
            best_point = run.point;
        }
    }
    const PureState state =
        state_from_angles(state_angles_from_flat(best_point.data()));
    return {state, -best_value};
}

}  // namespace lhvprobe
