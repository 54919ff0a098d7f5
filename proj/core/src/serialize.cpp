#include "lhvprobe/serialize.hpp"

#include <stdexcept>

namespace lhvprobe {

namespace {

json complex_to_json(const Complex& z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void to_json(json& j, const PureState& s) {
    json amps = json::array();
    for (const Complex& a : s.amplitudes) amps.push_back(complex_to_json(a));
    j = json{{"amplitudes", amps}};
}

void from_json(const json& j, PureState& s) {
    const json& amps = j.at("amplitudes");
    if (amps.size() != 9) {
        throw std::invalid_argument("pure state needs 9 amplitudes");
    }
    for (std::size_t i = 0; i < 9; ++i) {
        s.amplitudes[i] = complex_from_json(amps[i]);
    }
    if (std::abs(s.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("pure state must be normalized");
    }
}

void to_json(json& j, const DensityOperator& rho) {
    json entries = json::array();
    const ComplexMatrix& m = rho.matrix();
    for (std::size_t r = 0; r < 9; ++r) {
        for (std::size_t c = 0; c < 9; ++c) {
            entries.push_back(complex_to_json(m(r, c)));
        }
    }
    j = json{{"matrix", entries}};
}

void to_json(json& j, const StateAngles& g) {
    j = json{{"psi", g.psi},   {"theta", g.theta}, {"phi", g.phi},
             {"chi1", g.chi1}, {"chi2", g.chi2},   {"chi3", g.chi3}};
}

void from_json(const json& j, StateAngles& g) {
    j.at("psi").get_to(g.psi);
    j.at("theta").get_to(g.theta);
    j.at("phi").get_to(g.phi);
    j.at("chi1").get_to(g.chi1);
    j.at("chi2").get_to(g.chi2);
    j.at("chi3").get_to(g.chi3);
}

void to_json(json& j, const Su3Angles& g) {
    j = json::array();
    for (double v : g.phi) j.push_back(v);
}

void from_json(const json& j, Su3Angles& g) {
    if (!j.is_array() || j.size() != 8) {
        throw std::invalid_argument("SU(3) angles need 8 entries");
    }
    for (std::size_t i = 0; i < 8; ++i) g.phi[i] = j[i].get<double>();
}

void to_json(json& j, const SettingsQuad& q) {
    j = json{{"a1", q.a1}, {"a2", q.a2}, {"b1", q.b1}, {"b2", q.b2}};
}

void from_json(const json& j, SettingsQuad& q) {
    j.at("a1").get_to(q.a1);
    j.at("a2").get_to(q.a2);
    j.at("b1").get_to(q.b1);
    j.at("b2").get_to(q.b2);
}

void to_json(json& j, const ProbabilityTable& t) {
    json rows = json::array();
    for (const auto& pair : t.p) {
        for (double v : pair) rows.push_back(v);
    }
    j = json{{"pair_order", {"11", "12", "21", "22"}}, {"p", rows}};
}

void from_json(const json& j, ProbabilityTable& t) {
    const json& rows = j.at("p");
    if (rows.size() != 36) {
        throw std::invalid_argument("probability table needs 36 entries");
    }
    for (std::size_t i = 0; i < 36; ++i) {
        t.p[i / 9][i % 9] = rows[i].get<double>();
    }
}

void to_json(json& j, const JointDistribution& d) {
    json p = json::array();
    for (double v : d.p) p.push_back(v);
    j = json{{"p", p}};
}

void from_json(const json& j, JointDistribution& d) {
    const json& p = j.at("p");
    if (p.size() != 81) {
        throw std::invalid_argument("joint distribution needs 81 entries");
    }
    for (std::size_t i = 0; i < 81; ++i) d.p[i] = p[i].get<double>();
}

void to_json(json& j, const BellCertificate& c) {
    json coeffs = json::array();
    for (double v : c.coefficients) coeffs.push_back(v);
    j = json{{"coefficients", coeffs},
             {"lhv_bound", c.lhv_bound},
             {"quantum_value", c.quantum_value},
             {"margin", c.margin}};
}

void from_json(const json& j, BellCertificate& c) {
    const json& coeffs = j.at("coefficients");
    if (coeffs.size() != 36) {
        throw std::invalid_argument("certificate needs 36 coefficients");
    }
    for (std::size_t i = 0; i < 36; ++i) {
        c.coefficients[i] = coeffs[i].get<double>();
    }
    j.at("lhv_bound").get_to(c.lhv_bound);
    j.at("quantum_value").get_to(c.quantum_value);
    j.at("margin").get_to(c.margin);
}

void to_json(json& j, const FThreshold& f) {
    j = json{{"value", f.value},
             {"witness_distribution", f.witness},
             {"settings", f.settings},
             {"state_angles", f.state_angles}};
}

void from_json(const json& j, FThreshold& f) {
    j.at("value").get_to(f.value);
    j.at("witness_distribution").get_to(f.witness);
    j.at("settings").get_to(f.settings);
    j.at("state_angles").get_to(f.state_angles);
}

void to_json(json& j, const LpProblem& p) {
    j = json{{"rows", p.rows},
             {"cols", p.cols},
             {"matrix", p.matrix},
             {"rhs", p.rhs},
             {"objective", p.objective},
             {"upper_bounds", p.upper_bounds}};
}

void to_json(json& j, const LpOutcome& o) {
    const char* status = "numerical-failure";
    switch (o.status) {
        case LpStatus::FeasibleOptimal: status = "feasible-optimal"; break;
        case LpStatus::Infeasible: status = "infeasible"; break;
        case LpStatus::Unbounded: status = "unbounded"; break;
        case LpStatus::NumericalFailure: break;
    }
    j = json{{"status", status},
             {"solution", o.solution},
             {"objective_value", o.objective_value},
             {"farkas_dual", o.farkas_dual},
             {"residual", o.residual}};
}

void to_json(json& j, const CampaignConfig& c) {
    j = json{{"trials", c.trials},
             {"seed", c.seed},
             {"sampling_mode", sampling_mode_name(c.sampling_mode)},
             {"state_source", c.use_mixture ? "mixture" : "rho_b"},
             {"worker_count", c.worker_count}};
    if (c.use_mixture) {
        j["mixture_fraction"] = c.mixture_fraction;
        j["mixture_psi"] = c.mixture_psi;
    }
    if (c.state_override) j["state_source"] = "explicit-override";
}

void to_json(json& j, const CampaignReport& r) {
    json infeasible = json::array();
    for (const InfeasibleRecord& rec : r.infeasible_records) {
        infeasible.push_back(json{{"trial", rec.trial},
                                  {"settings", rec.settings},
                                  {"certificate", rec.certificate}});
    }
    json failures = json::array();
    for (const FailureRecord& rec : r.failure_records) {
        failures.push_back(json{{"trial", rec.trial}, {"message", rec.message}});
    }
    j = json{{"trials_run", r.trials_run},
             {"feasible_count", r.feasible_count},
             {"infeasible_records", infeasible},
             {"failure_records", failures},
             {"wall_time_seconds", r.wall_time_seconds},
             {"config", r.config}};
}

void to_json(json& j, const MinimizationResult& r) {
    json converged = json::array();
    for (bool c : r.per_restart_converged) converged.push_back(c);
    j = json{{"best_F", r.best_F},
             {"best_settings", r.best_settings},
             {"best_state_angles", r.best_state_angles},
             {"best_state_vector", r.best_state_vector},
             {"per_restart_F", r.per_restart_F},
             {"per_restart_converged", converged},
             {"evaluations", r.evaluations}};
}

std::string sampling_mode_name(SamplingMode mode) {
    return mode == SamplingMode::Haar ? "haar" : "uniform-angles";
}

SamplingMode sampling_mode_from_name(const std::string& name) {
    if (name == "haar") return SamplingMode::Haar;
    if (name == "uniform-angles") return SamplingMode::UniformAngles;
    throw std::invalid_argument("unknown sampling mode: " + name);
}

}  // namespace lhvprobe
