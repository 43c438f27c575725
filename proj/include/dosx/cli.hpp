#pragma once

#include "dosx/disorder.hpp"
#include "dosx/expansion.hpp"
#include "dosx/lattice.hpp"
#include "dosx/profile.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dosx {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Parsed experiment configuration. Keys are dotted (box.L, window.eta, ...).
struct ExperimentConfig {
    BoxSpec box{4.0, 1, 3.0};
    Profile profile = Profile::gaussian(1.0);
    WeightDistribution dist = WeightDistribution::uniform_zero_one();
    SpectralWindow window;
    int N = 2;
    int n_max = 3;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    std::string mode;
    std::vector<WaveVector> psi;
    std::vector<std::string> psi_labels;
    std::map<std::string, std::string> raw; ///< accepted key/value pairs, for the input echo

    Model model() const { return {box, profile, dist}; }
};

/// Parse the key = value format; '#' starts a comment. Throws ConfigError naming the key on
/// unknown, duplicate, missing or malformed entries.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// One table destined for a CSV file.
struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_render(const CsvTable& t);
/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

struct RunResult {
    int exit_code = 0;
    json summary;
    std::vector<CsvTable> tables;
};

/// Runs one mode in-process. The summary carries everything except the timestamp key.
RunResult execute(const std::string& mode, const ExperimentConfig& cfg);

struct RunOptions {
    std::string mode;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::string out_dir = ".";
};

/// execute() plus overrides, timing, and artifact writing (CSV per table, summary.json).
int run(const RunOptions& opts);

/// Copy of a summary with the timestamp key removed.
json without_timestamp(const json& summary);

// verification suite

struct CheckResult {
    std::string name;
    std::string module;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

std::vector<CheckResult> run_verify_suite(const ExperimentConfig& cfg);

} // namespace dosx
