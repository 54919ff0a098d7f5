#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lhvprobe/lhv.hpp"
#include "lhvprobe/linalg.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/search.hpp"
#include "lhvprobe/serialize.hpp"
#include "lhvprobe/states.hpp"
#include "lhvprobe/version.hpp"

namespace {

using lhvprobe::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFeasible = 3;

std::string utc_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cout << "seed: " << seed << "\n";
    return seed;
}

int resolve_workers(const std::optional<int>& flag) {
    if (flag) {
        if (*flag < 1) throw CLI::ValidationError("--workers must be >= 1");
        return *flag;
    }
    if (const char* env = std::getenv("LHVPROBE_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw CLI::ValidationError(
                "LHVPROBE_WORKERS must be a positive integer");
        }
        return static_cast<int>(v);
    }
    return 1;
}

json make_manifest(const std::string& command, const json& config,
                   const std::vector<std::uint64_t>& seeds,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs,
                   const std::string& started, const std::string& finished) {
    return json{{"command", command},   {"config", config},
                {"seeds", seeds},       {"tool_version", lhvprobe::kVersion},
                {"started", started},   {"finished", finished},
                {"inputs", inputs},     {"outputs", outputs}};
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return json::parse(in);
}

lhvprobe::PureState canonical_psi() {
    return lhvprobe::state_from_angles(lhvprobe::canonical_psi_angles());
}

struct Check {
    std::string name;
    bool passed;
    double value;
    double threshold;
    std::string note;
};

int cmd_verify(bool inject_v4_typo, std::uint64_t seed,
               const std::string& out_path) {
    using namespace lhvprobe;
    const std::string started = utc_now();
    std::vector<Check> checks;

    std::array<PureState, 5> upb = tiles_upb();
    if (inject_v4_typo) {
        // the uncorrected coefficient: 1/sqrt(2) on all nine cells
        for (Complex& a : upb[4].amplitudes) {
            a = Complex(1.0 / std::sqrt(2.0), 0.0);
        }
    }
    const std::array<PureState, 4> comp = complement_basis();
    std::vector<PureState> all(upb.begin(), upb.end());
    all.insert(all.end(), comp.begin(), comp.end());

    double gram_dev = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
            const Complex g = all[i].inner(all[j]);
            const Complex target = i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            gram_dev = std::max(gram_dev, std::abs(g - target));
        }
    }
    checks.push_back({"basis_gram_identity", gram_dev <= 1e-12, gram_dev, 1e-12,
                      "max |<v_i|v_j> - delta_ij| over the 9-vector basis"});

    ComplexMatrix rho = ComplexMatrix::identity(9);
    for (const PureState& v : upb) rho -= v.projector();
    rho *= 0.25;

    const HermitianSpectrum spec = hermitian_eig(rho);
    double eig_dev = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        const double target = i < 4 ? 0.25 : 0.0;
        eig_dev = std::max(eig_dev, std::abs(spec.eigenvalues[i] - target));
    }
    checks.push_back({"rho_b_spectrum", eig_dev <= 1e-10, eig_dev, 1e-10,
                      "eigenvalues must be 1/4 (x4) and 0 (x5)"});

    const double ppt_min = min_eigenvalue(partial_transpose_B(rho));
    checks.push_back({"rho_b_ppt", ppt_min >= -1e-10, ppt_min, -1e-10,
                      "min eigenvalue of the partial transpose"});

    ComplexMatrix alt(9, 9);
    for (const PureState& v : comp) alt += v.projector();
    alt *= 0.25;
    const double construction_dev = max_abs_diff(rho, alt);
    checks.push_back({"rho_b_two_constructions", construction_dev <= 1e-12,
                      construction_dev, 1e-12,
                      "(I-P)/4 versus (1/4) sum of complement projectors"});

    double annihilation = 0.0;
    for (const PureState& v : upb) {
        for (std::size_t r = 0; r < 9; ++r) {
            Complex acc = 0.0;
            for (std::size_t c = 0; c < 9; ++c) acc += rho(r, c) * v.amplitudes[c];
            annihilation = std::max(annihilation, std::abs(acc));
        }
    }
    checks.push_back({"rho_b_annihilates_upb", annihilation <= 1e-12,
                      annihilation, 1e-12, "rho_B |v_k> = 0 for k = 0..4"});

    const double overlap = min_product_overlap_with_upb(seed);
    checks.push_back({"upb_unextendible", overlap >= 1e-6, overlap, 1e-6,
                      "min over product states of |P (a x b)|^2 stays positive"});

    const double degree = linear_entanglement_degree(canonical_psi());
    const double degree_dev = std::abs(degree - 15.0 / 16.0);
    checks.push_back({"entanglement_degree_15_16", degree_dev <= 1e-12,
                      degree_dev, 1e-12,
                      "linear entanglement degree of (|v5>+|v6>)/sqrt2"});

    bool all_passed = true;
    json check_list = json::array();
    for (const Check& c : checks) {
        all_passed = all_passed && c.passed;
        check_list.push_back(json{{"name", c.name},
                                  {"passed", c.passed},
                                  {"value", c.value},
                                  {"threshold", c.threshold},
                                  {"note", c.note}});
    }

    json report{{"schema_version", lhvprobe::kSchemaVersion},
                {"checks", check_list},
                {"all_passed", all_passed}};
    report["manifest"] = make_manifest(
        "verify", json{{"inject_v4_typo", inject_v4_typo}}, {seed}, {},
        out_path.empty() ? std::vector<std::string>{}
                         : std::vector<std::string>{out_path},
        started, utc_now());

    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        write_json_file(out_path, report);
        std::cout << (all_passed ? "verify: all checks passed\n"
                                 : "verify: FAILURES present\n");
    }
    for (const Check& c : checks) {
        if (!c.passed) {
            std::cerr << "failed check: " << c.name << " (value " << c.value
                      << ", threshold " << c.threshold << ")\n";
        }
    }
    return all_passed ? kExitOk : kExitCheckFailure;
}

int cmd_sample(long trials, std::uint64_t seed, const std::string& mode_name,
               const std::string& state_name, std::optional<double> fraction,
               const std::optional<std::string>& psi_path, bool psi_canonical,
               int workers, const std::string& out_dir) {
    using namespace lhvprobe;
    const std::string started = utc_now();

    CampaignConfig config;
    config.trials = trials;
    config.seed = seed;
    config.sampling_mode = sampling_mode_from_name(mode_name);
    config.worker_count = workers;

    if (state_name == "mixture") {
        config.use_mixture = true;
        config.mixture_fraction = fraction.value();
        if (psi_canonical) {
            config.mixture_psi = canonical_psi();
        } else {
            config.mixture_psi = read_json_file(*psi_path).get<PureState>();
        }
    }

    const CampaignReport report = run_campaign(config);

    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/trials.csv";
    const std::string report_path = out_dir + "/report.json";

    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);
        csv << "trial,feasible,residual_or_margin\n";
        char line[96];
        for (long t = 0; t < report.trials_run; ++t) {
            const std::size_t slot = static_cast<std::size_t>(t);
            std::snprintf(line, sizeof(line), "%ld,%d,%.17g\n", t,
                          report.per_trial_feasible[slot],
                          report.per_trial_metric[slot]);
            csv << line;
        }
    }

    json doc = json(report);
    doc["schema_version"] = kSchemaVersion;
    json config_echo = json(report.config);
    doc["manifest"] = make_manifest(
        "sample", config_echo, {seed},
        psi_path ? std::vector<std::string>{*psi_path}
                 : std::vector<std::string>{},
        {report_path, csv_path}, started, utc_now());
    write_json_file(report_path, doc);

    std::cout << "feasible " << report.feasible_count << " / "
              << report.trials_run << ", infeasible "
              << report.infeasible_records.size() << ", failures "
              << report.failure_records.size() << "\n";
    return report.failure_records.empty() ? kExitOk : kExitCheckFailure;
}

int cmd_fmax(const std::string& settings_path,
             const std::optional<std::string>& angles_path, bool psi_canonical,
             const std::string& out_path) {
    using namespace lhvprobe;
    const std::string started = utc_now();

    const SettingsQuad settings =
        read_json_file(settings_path).get<SettingsQuad>();
    const StateAngles angles =
        psi_canonical ? canonical_psi_angles()
                      : read_json_file(*angles_path).get<StateAngles>();

    const FThreshold threshold = critical_admixture(settings, angles);

    json doc = json(threshold);
    doc["schema_version"] = kSchemaVersion;
    std::vector<std::string> inputs{settings_path};
    if (angles_path) inputs.push_back(*angles_path);
    doc["manifest"] = make_manifest(
        "fmax",
        json{{"settings", settings_path},
             {"psi_canonical", psi_canonical},
             {"state_angles", angles_path ? *angles_path : ""}},
        {}, inputs, {out_path}, started, utc_now());
    write_json_file(out_path, doc);

    std::printf("F threshold: %.9f\n", threshold.value);
    return kExitOk;
}

int cmd_fmin(int restarts, std::uint64_t seed, bool fix_psi_canonical,
             int max_iter, int workers, const std::string& out_dir) {
    using namespace lhvprobe;
    const std::string started = utc_now();

    AmoebaConfig config;
    config.restarts = restarts;
    config.seed = seed;
    config.max_iterations = max_iter;
    config.worker_count = workers;
    if (fix_psi_canonical) config.fixed_state = canonical_psi_angles();

    const MinimizationResult result = minimize_F(config);

    std::filesystem::create_directories(out_dir);
    const std::string result_path = out_dir + "/result.json";
    const std::string settings_path = out_dir + "/best_settings.json";

    json settings_doc = json(result.best_settings);
    write_json_file(settings_path, settings_doc);

    json doc = json(result);
    doc["schema_version"] = kSchemaVersion;
    doc["manifest"] = make_manifest(
        "fmin",
        json{{"restarts", restarts},
             {"fix_psi_canonical", fix_psi_canonical},
             {"max_iterations", max_iter},
             {"workers", workers}},
        {seed}, {}, {result_path, settings_path}, started, utc_now());
    write_json_file(result_path, doc);

    std::printf("best F: %.9f over %d restarts\n", result.best_F, restarts);
    return kExitOk;
}

int cmd_certificate(const std::string& settings_path,
                    const std::string& state_name,
                    std::optional<double> fraction,
                    const std::optional<std::string>& psi_path,
                    bool psi_canonical, const std::string& out_path,
                    const std::optional<std::string>& dump_lp_path) {
    using namespace lhvprobe;
    const std::string started = utc_now();

    const SettingsQuad settings =
        read_json_file(settings_path).get<SettingsQuad>();

    DensityOperator rho = bound_entangled_state();
    if (state_name == "mixture") {
        const PureState psi = psi_canonical
                                  ? canonical_psi()
                                  : read_json_file(*psi_path).get<PureState>();
        rho = admixture(fraction.value(), psi);
    }

    const ProbabilityTable table = probability_table(rho, settings);
    if (dump_lp_path) {
        const LpProblem lp = build_feasibility(table);
        const LpOutcome outcome = solve(lp);
        write_json_file(*dump_lp_path,
                        json{{"schema_version", kSchemaVersion},
                             {"problem", lp},
                             {"outcome", outcome}});
    }

    const LhvVerdict verdict = lhv_feasible(table);
    json config_echo{{"settings", settings_path},
                     {"state", state_name},
                     {"f", fraction ? *fraction : 0.0},
                     {"psi_canonical", psi_canonical},
                     {"psi", psi_path ? *psi_path : ""}};
    std::vector<std::string> inputs{settings_path};
    if (psi_path) inputs.push_back(*psi_path);

    if (is_feasible(verdict)) {
        const JointDistribution& dist = std::get<JointDistribution>(verdict);
        json doc{{"schema_version", kSchemaVersion},
                 {"feasible", true},
                 {"witness_distribution", dist},
                 {"marginal_residual", check_marginals(dist, table)}};
        doc["manifest"] = make_manifest("certificate", config_echo, {}, inputs,
                                        {out_path}, started, utc_now());
        write_json_file(out_path, doc);
        std::cout << "table is LHV-feasible; witness written (exit 3)\n";
        return kExitFeasible;
    }

    const BellCertificate& cert = std::get<BellCertificate>(verdict);
    double strategy_max = -1e300;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    strategy_max = std::max(
                        strategy_max,
                        strategy_value(cert.coefficients, k, l, m, n));
                }
            }
        }
    }
    json doc{{"schema_version", kSchemaVersion},
             {"feasible", false},
             {"certificate", cert},
             {"strategy_audit",
              json{{"max_strategy_value", strategy_max},
                   {"lhv_bound", cert.lhv_bound},
                   {"max_le_bound", strategy_max <= cert.lhv_bound + 1e-9}}}};
    doc["manifest"] = make_manifest("certificate", config_echo, {}, inputs,
                                    {out_path}, started, utc_now());
    write_json_file(out_path, doc);
    std::printf("infeasible: margin %.9g\n", cert.margin);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "lhvprobe: local-hidden-variable feasibility for bipartite qutrit "
        "Bell experiments"};
    app.set_version_flag("--version", lhvprobe::kVersion);
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand(
        "verify", "check the state constructions and their invariants");
    bool inject_v4_typo = false;
    std::optional<std::uint64_t> verify_seed;
    std::string verify_out;
    verify->add_flag("--inject-v4-typo", inject_v4_typo,
                     "debug: use the uncorrected 1/sqrt(2) coefficient on v4");
    verify->add_option("--seed", verify_seed,
                       "seed for the unextendibility witness search");
    verify->add_option("--out", verify_out, "write the JSON report here");

    // sample
    auto* sample = app.add_subcommand(
        "sample", "random-settings feasibility campaign");
    long trials = 10000;
    std::optional<std::uint64_t> sample_seed;
    std::string mode_name = "haar";
    std::string state_name = "rho_b";
    std::optional<double> fraction;
    std::optional<std::string> psi_path;
    bool sample_psi_canonical = false;
    std::optional<int> sample_workers;
    std::string sample_out = ".";
    sample->add_option("--trials", trials, "number of trials")
        ->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "campaign seed");
    sample->add_option("--mode", mode_name, "haar | uniform-angles")
        ->check(CLI::IsMember({"haar", "uniform-angles"}));
    sample->add_option("--state", state_name, "rho_b | mixture")
        ->check(CLI::IsMember({"rho_b", "mixture"}));
    sample->add_option("--f", fraction, "admixture fraction (mixture only)")
        ->check(CLI::Range(0.0, 1.0));
    sample->add_option("--psi", psi_path, "pure-state JSON (mixture only)");
    sample->add_flag("--psi-canonical", sample_psi_canonical,
                     "use (|v5>+|v6>)/sqrt2 as the admixed state");
    sample->add_option("--workers", sample_workers,
                       "worker threads (flag wins over LHVPROBE_WORKERS)");
    sample->add_option("--out", sample_out, "output directory");
    // CSV columns: trial (0-based index), feasible (1 feasible, 0 infeasible,
    // -1 solver failure), residual_or_margin (marginal residual when
    // feasible, Bell margin when infeasible), printed with %.17g
    sample->footer(
        "trials.csv columns: trial,feasible,residual_or_margin\n"
        "  trial: 0-based index; feasible: 1/0 (-1 on solver failure);\n"
        "  residual_or_margin: marginal residual if feasible, else margin");

    // fmax
    auto* fmax = app.add_subcommand(
        "fmax", "critical admixture F for fixed settings and state");
    std::string fmax_settings;
    std::optional<std::string> fmax_angles;
    bool fmax_psi_canonical = false;
    std::string fmax_out = "fthreshold.json";
    fmax->add_option("--settings", fmax_settings, "SettingsQuad JSON")
        ->required();
    fmax->add_option("--state-angles", fmax_angles, "StateAngles JSON");
    fmax->add_flag("--psi-canonical", fmax_psi_canonical,
                   "use the canonical angles of (|v5>+|v6>)/sqrt2");
    fmax->add_option("--out", fmax_out, "output JSON path");

    // fmin
    auto* fmin = app.add_subcommand(
        "fmin", "minimize the critical admixture over measurement angles");
    int restarts = 20;
    std::optional<std::uint64_t> fmin_seed;
    bool fix_psi_canonical = false;
    int max_iter = lhvprobe::AmoebaConfig{}.max_iterations;
    std::optional<int> fmin_workers;
    std::string fmin_out = ".";
    fmin->add_option("--restarts", restarts, "independent restarts")
        ->check(CLI::PositiveNumber);
    fmin->add_option("--seed", fmin_seed, "search seed");
    fmin->add_flag("--fix-psi-canonical", fix_psi_canonical,
                   "fix the state to (|v5>+|v6>)/sqrt2, search 32 angles");
    fmin->add_option("--max-iter", max_iter, "iteration cap per restart")
        ->check(CLI::PositiveNumber);
    fmin->add_option("--workers", fmin_workers,
                     "worker threads (flag wins over LHVPROBE_WORKERS)");
    fmin->add_option("--out", fmin_out, "output directory");

    // certificate
    auto* certificate = app.add_subcommand(
        "certificate", "Bell certificate for an infeasible table");
    std::string cert_settings;
    std::string cert_state = "mixture";
    std::optional<double> cert_f;
    std::optional<std::string> cert_psi;
    bool cert_psi_canonical = false;
    std::string cert_out = "certificate.json";
    std::optional<std::string> dump_lp;
    certificate->add_option("--settings", cert_settings, "SettingsQuad JSON")
        ->required();
    certificate->add_option("--state", cert_state, "rho_b | mixture")
        ->check(CLI::IsMember({"rho_b", "mixture"}));
    certificate->add_option("--f", cert_f, "admixture fraction")
        ->check(CLI::Range(0.0, 1.0));
    certificate->add_option("--psi", cert_psi, "pure-state JSON");
    certificate->add_flag("--psi-canonical", cert_psi_canonical,
                          "use (|v5>+|v6>)/sqrt2 as the admixed state");
    certificate->add_option("--out", cert_out, "output JSON path");
    certificate->add_option("--dump-lp", dump_lp,
                            "also dump the feasibility LP and its outcome");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify) {
            return cmd_verify(inject_v4_typo, resolve_seed(verify_seed),
                              verify_out);
        }
        if (*sample) {
            if (state_name == "mixture") {
                if (!fraction) {
                    std::cerr << "--state mixture requires --f\n";
                    return kExitUsage;
                }
                if (sample_psi_canonical == psi_path.has_value()) {
                    std::cerr << "--state mixture requires exactly one of "
                                 "--psi or --psi-canonical\n";
                    return kExitUsage;
                }
            } else if (fraction || psi_path || sample_psi_canonical) {
                std::cerr << "--f/--psi/--psi-canonical need --state mixture\n";
                return kExitUsage;
            }
            return cmd_sample(trials, resolve_seed(sample_seed), mode_name,
                              state_name, fraction, psi_path,
                              sample_psi_canonical,
                              resolve_workers(sample_workers), sample_out);
        }
        if (*fmax) {
            if (fmax_psi_canonical == fmax_angles.has_value()) {
                std::cerr << "fmax needs exactly one of --state-angles or "
                             "--psi-canonical\n";
                return kExitUsage;
            }
            return cmd_fmax(fmax_settings, fmax_angles, fmax_psi_canonical,
                            fmax_out);
        }
        if (*fmin) {
            return cmd_fmin(restarts, resolve_seed(fmin_seed),
                            fix_psi_canonical, max_iter,
                            resolve_workers(fmin_workers), fmin_out);
        }
        if (*certificate) {
            if (cert_state == "mixture") {
                if (!cert_f) {
                    std::cerr << "--state mixture requires --f\n";
                    return kExitUsage;
                }
                if (cert_psi_canonical == cert_psi.has_value()) {
                    std::cerr << "--state mixture requires exactly one of "
                                 "--psi or --psi-canonical\n";
                    return kExitUsage;
                }
            }
            return cmd_certificate(cert_settings, cert_state, cert_f, cert_psi,
                                   cert_psi_canonical, cert_out, dump_lp);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitUsage;
}
