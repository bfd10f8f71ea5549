#pragma once

#include "cmrl/cmdp.hpp"
#include "cmrl/envs.hpp"
#include "cmrl/meta_train.hpp"
#include "cmrl/safe_test.hpp"

#include <json.hpp>

#include <string>

namespace cmrl {

// Plain JSON conventions: nested row-major arrays, decimal floats.
nlohmann::json to_json(const TabularCmdp& m);
TabularCmdp cmdp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Policy& pi);
Policy policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GridworldLayout& layout);
GridworldLayout layout_from_json(const nlohmann::json& j);

/// The training bundle is the sole contract between the training and testing
/// phases: {pi_s, tuples, config, log}.
nlohmann::json to_json(const TrainingBundle& bundle);
TrainingBundle bundle_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TestReport& report, const TestConfig& config);

/// Flat per-episode CSV: k, l, m, alpha, R_k, C_k, event, true_Vr, true_Vc,
/// regret_r, regret_c. Header comment lines carry the run configuration.
std::string report_to_csv(const TestReport& report, const TestConfig& config,
                          const std::string& header_comment = "");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Shortest round-trip decimal rendering, stable across runs.
std::string format_double(double v);

} // namespace cmrl
