#include <doctest.h>

#include <cmath>

#include "lhvprobe/lhv.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/search.hpp"
#include "lhvprobe/serialize.hpp"
#include "lhvprobe/states.hpp"

using namespace lhvprobe;

TEST_CASE("pure states round-trip through JSON") {
    const PureState psi = state_from_angles(canonical_psi_angles());
    const json j = json(psi);
    const PureState back = j.get<PureState>();
    for (std::size_t k = 0; k < 9; ++k) {
        CHECK(std::abs(psi.amplitudes[k] - back.amplitudes[k]) == 0.0);
    }
}

TEST_CASE("non-normalized pure state JSON is rejected") {
    PureState psi = state_from_angles(canonical_psi_angles());
    json j = json(psi);
    j["amplitudes"][0] = json::array({5.0, 0.0});
    CHECK_THROWS(j.get<PureState>());
}

TEST_CASE("angles and settings round-trip") {
    StateAngles a{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const StateAngles a2 = json(a).get<StateAngles>();
    CHECK(a2.psi == a.psi);
    CHECK(a2.chi3 == a.chi3);

    const SettingsQuad q = haar_random_settings(91);
    const SettingsQuad q2 = json(q).get<SettingsQuad>();
    for (int k = 0; k < 8; ++k) {
        CHECK(q.a1.phi[static_cast<std::size_t>(k)] ==
              q2.a1.phi[static_cast<std::size_t>(k)]);
        CHECK(q.b2.phi[static_cast<std::size_t>(k)] ==
              q2.b2.phi[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("probability tables round-trip with pair order recorded") {
    const ProbabilityTable t = probability_table(bound_entangled_state(),
                                                 haar_random_settings(92));
    const json j = json(t);
    REQUIRE(j.contains("pair_order"));
    CHECK(j["pair_order"][0] == "11");
    CHECK(j["pair_order"][3] == "22");
    const ProbabilityTable t2 = j.get<ProbabilityTable>();
    for (std::size_t pair = 0; pair < 4; ++pair) {
        for (std::size_t cell = 0; cell < 9; ++cell) {
            CHECK(t.p[pair][cell] == t2.p[pair][cell]);
        }
    }
}

TEST_CASE("verdict payloads round-trip") {
    JointDistribution d;
    d.p.fill(1.0 / 81.0);
    const JointDistribution d2 = json(d).get<JointDistribution>();
    CHECK(d2.p[80] == d.p[80]);

    BellCertificate cert;
    cert.coefficients[7] = -1.25;
    cert.lhv_bound = 2.0;
    cert.quantum_value = 2.5;
    cert.margin = 0.5;
    const BellCertificate c2 = json(cert).get<BellCertificate>();
    CHECK(c2.coefficients[7] == cert.coefficients[7]);
    CHECK(c2.margin == cert.margin);

    FThreshold th;
    th.value = 0.625;
    th.witness = d;
    th.settings = haar_random_settings(93);
    th.state_angles = canonical_psi_angles();
    const FThreshold t2 = json(th).get<FThreshold>();
    CHECK(t2.value == th.value);
    CHECK(t2.settings.a2.phi[5] == th.settings.a2.phi[5]);
}

TEST_CASE("campaign report serializes with config echo") {
    CampaignConfig config;
    config.trials = 5;
    config.seed = 94;
    const CampaignReport report = run_campaign(config);
    const json j = json(report);
    CHECK(j["trials_run"] == 5);
    CHECK(j["feasible_count"] == 5);
    CHECK(j["config"]["state_source"] == "rho_b");
    CHECK(j["config"]["sampling_mode"] == "haar");
    const std::string dumped = j.dump();
    CHECK(json::parse(dumped) == j);
}

TEST_CASE("lp problems and outcomes serialize") {
    const ProbabilityTable t = probability_table(bound_entangled_state(),
                                                 haar_random_settings(95));
    const LpProblem p = build_feasibility(t);
    const LpOutcome out = solve(p);
    const json j{{"problem", p}, {"outcome", out}};
    CHECK(j["problem"]["rows"] == 37);
    CHECK(j["problem"]["cols"] == 81);
    CHECK(j["outcome"]["status"] == "feasible-optimal");
}

TEST_CASE("sampling mode names map both ways") {
    CHECK(sampling_mode_name(SamplingMode::Haar) == "haar");
    CHECK(sampling_mode_name(SamplingMode::UniformAngles) == "uniform-angles");
    CHECK(sampling_mode_from_name("haar") == SamplingMode::Haar);
    CHECK(sampling_mode_from_name("uniform-angles") ==
          SamplingMode::UniformAngles);
    CHECK_THROWS(sampling_mode_from_name("other"));
}
