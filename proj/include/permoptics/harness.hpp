#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "permoptics/matrix.hpp"
#include "permoptics/photonic.hpp"
#include "permoptics/resources.hpp"
#include "permoptics/sampling.hpp"

namespace permoptics {

inline constexpr std::uint64_t kDefaultSeed = 20190101;
inline constexpr std::string_view kVersion = "1.0.0";

enum class SimulationMode { thermal, unitary };

// A validated experiment descriptor plus its sampling plan. The JSON form:
//
//   {"unitary": {"dim", "re", "im"}, "laxity": "constructed"|"experimental",
//    "mus": [...], "etas": [...], "detection": {"kind", "cutoff"},
//    "rep_rate_hz": f, "accum_s": t, "mode": "thermal"|"unitary",
//    "sampling": {"n_samples", "seed", "partitions", "confidence"}}
//
// Only "unitary" is required for mode "unitary"; thermal mode also needs
// "mus". Without sampling.n_samples, N = round(rep_rate_hz * accum_s).
struct ExperimentConfig {
    UnitaryMatrix unitary;
    std::vector<double> mus;
    std::vector<double> etas;
    DetectionModel detection;
    double rep_rate_hz = 0.0;
    double accum_s = 0.0;
    SimulationMode mode = SimulationMode::thermal;
    SamplingPlan sampling;
    std::string hash;  // FNV-1a of the canonical JSON text
};

// Throws InputError on any schema violation, including unknown keys.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

std::string config_hash(const nlohmann::json& j);

nlohmann::json to_json(const SamplingResult& r);
nlohmann::json to_json(const ResourceEstimate& e);

// Deterministic part of a simulate run: the exact reference values and the
// sampling statistics. Identical for identical (config, seed).
nlohmann::json simulate_payload(const ExperimentConfig& config);

struct RunRecord {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    unsigned partitions = 1;
    nlohmann::json payload;
    double wall_seconds = 0.0;

    nlohmann::json to_json() const;  // adds timestamp and module versions
};

// PERMOPTICS_LOG when set, otherwise <out_dir>/runs.jsonl.
std::filesystem::path run_log_path(const std::filesystem::path& out_dir);

// Appends one JSON line under an exclusive flock.
void append_run_record(const std::filesystem::path& log, const RunRecord& record);

// A reproduction table. CSV is the file contract; JSON carries the same rows
// plus a summary object.
struct Report {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    nlohmann::json summary = nlohmann::json::object();

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

struct ReproduceOptions {
    std::uint64_t seed = kDefaultSeed;
    unsigned partitions = 1;
    std::size_t fig3_repeats = 2000;
    std::size_t haar_draws = 100000;
    std::size_t bound_trials = 10000;
};

Report reproduce_table1(const ReproduceOptions& options);
Report reproduce_fig3(const ReproduceOptions& options);
Report reproduce_visibility(const ReproduceOptions& options);
Report reproduce_haar(const ReproduceOptions& options);
Report reproduce_bounds(const ReproduceOptions& options);

// Dispatches on the target name; std::nullopt for an unknown target.
std::optional<Report> reproduce(std::string_view target, const ReproduceOptions& options);

}  // namespace permoptics
