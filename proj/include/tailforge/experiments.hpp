#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tailforge {

inline constexpr const char* experiment_schema = "tailforge/experiment@1";

struct Expectation {
    std::string name;
    bool holds = false;
    std::string detail;
};

struct ExperimentResult {
    std::string id;
    bool passed = true;
    std::vector<Expectation> expectations;
    std::vector<std::string> files;  ///< written file names, relative to the output directory
    nlohmann::json summary;

    /// Name and detail of the first expectation that failed, or "".
    std::string first_failure() const;
};

/// prop-1.1, prop-1.2, prop-1.3, prop-1.4, thm-1.1
const std::vector<std::string>& experiment_ids();
bool is_experiment_id(const std::string& id);

/// Full configuration of a scripted scenario; every field can be edited and
/// fed back to run_experiment.
nlohmann::json default_experiment_config(const std::string& id);

/// Writes CSV evidence tables and summary.json (which embeds `config`) into
/// `out_dir`. Output depends only on the configuration.
ExperimentResult run_experiment(const nlohmann::json& config, const std::string& out_dir);

/// Reruns the configuration embedded in a summary.json.
ExperimentResult rerun_from_summary(const std::string& summary_path, const std::string& out_dir);

}  // namespace tailforge
