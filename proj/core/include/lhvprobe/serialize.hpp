#pragma once

#include <json.hpp>

#include "lhvprobe/lhv.hpp"
#include "lhvprobe/lp.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/search.hpp"
#include "lhvprobe/states.hpp"

namespace lhvprobe {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// complex amplitudes serialize as [re, im]; matrices row-major

void to_json(json& j, const PureState& s);
void from_json(const json& j, PureState& s);

void to_json(json& j, const DensityOperator& rho);

void to_json(json& j, const StateAngles& g);
void from_json(const json& j, StateAngles& g);

void to_json(json& j, const Su3Angles& g);
void from_json(const json& j, Su3Angles& g);

void to_json(json& j, const SettingsQuad& q);
void from_json(const json& j, SettingsQuad& q);

void to_json(json& j, const ProbabilityTable& t);
void from_json(const json& j, ProbabilityTable& t);

void to_json(json& j, const JointDistribution& d);
void from_json(const json& j, JointDistribution& d);

void to_json(json& j, const BellCertificate& c);
void from_json(const json& j, BellCertificate& c);

void to_json(json& j, const FThreshold& f);
void from_json(const json& j, FThreshold& f);

void to_json(json& j, const LpProblem& p);
void to_json(json& j, const LpOutcome& o);

void to_json(json& j, const CampaignConfig& c);
void to_json(json& j, const CampaignReport& r);

void to_json(json& j, const MinimizationResult& r);

std::string sampling_mode_name(SamplingMode mode);
SamplingMode sampling_mode_from_name(const std::string& name);

}  // namespace lhvprobe
