#include "permoptics/harness.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "permoptics/error.hpp"
#include "permoptics/haar.hpp"
#include "permoptics/matrix_json.hpp"
#include "permoptics/permanent.hpp"
#include "permoptics/philox.hpp"
#include "permoptics/reference_rows.hpp"
#include "permoptics/resources.hpp"

namespace permoptics {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         std::string_view where) {
    for (const auto& item : j.items()) {
        if (allowed.count(item.key()) == 0) {
            throw InputError(std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

double number_field(const json& j, const char* key, std::string_view where) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw InputError(std::string(where) + ": '" + key + "' must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw InputError(std::string(where) + ": '" + key + "' must be finite");
    }
    return x;
}

std::uint64_t count_field(const json& j, const char* key, std::string_view where) {
    const auto& v = j.at(key);
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    // Accept 1.6e9-style literals when they are exact integers.
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (x >= 0.0 && x < 1.8e19 && std::floor(x) == x) {
            return static_cast<std::uint64_t>(x);
        }
    }
    throw InputError(std::string(where) + ": '" + key + "' must be a non-negative integer");
}

std::vector<double> number_array(const json& j, const char* key, std::string_view where) {
    const auto& v = j.at(key);
    if (!v.is_array()) {
        throw InputError(std::string(where) + ": '" + key + "' must be an array");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) {
            throw InputError(std::string(where) + ": '" + key + "' must hold finite numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

std::string hex64(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << x;
    return os.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

std::string csv_cell(const json& v) {
    if (v.is_null()) {
        return "";
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string quoted = "\"";
        for (char c : s) {
            quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        return quoted + "\"";
    }
    return v.dump();
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::string config_hash(const json& j) {
    // FNV-1a over the canonical dump (object keys are sorted).
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return hex64(h);
}

ExperimentConfig parse_experiment_config(const json& j) {
    constexpr std::string_view where = "config";
    if (!j.is_object()) {
        throw InputError("config: top level must be an object");
    }
    reject_unknown_keys(j,
                        {"unitary", "laxity", "mus", "etas", "detection", "rep_rate_hz", "accum_s",
                         "mode", "sampling"},
                        where);
    if (!j.contains("unitary")) {
        throw InputError("config: 'unitary' is required");
    }
    try {
        SimulationMode mode = SimulationMode::thermal;
        if (j.contains("mode")) {
            const auto name = j.at("mode").get<std::string>();
            if (name == "thermal") {
                mode = SimulationMode::thermal;
            } else if (name == "unitary") {
                mode = SimulationMode::unitary;
            } else {
                throw InputError("config: mode must be 'thermal' or 'unitary'");
            }
        }
        UnitarityLaxity laxity = UnitarityLaxity::constructed;
        if (j.contains("laxity")) {
            const auto name = j.at("laxity").get<std::string>();
            if (name == "experimental") {
                laxity = UnitarityLaxity::experimental;
            } else if (name != "constructed") {
                throw InputError("config: laxity must be 'constructed' or 'experimental'");
            }
        }
        UnitaryMatrix unitary(matrix_from_json(j.at("unitary")), laxity);
        const std::size_t dim = unitary.dim();

        std::vector<double> mus;
        std::vector<double> etas;
        if (j.contains("mus")) {
            mus = number_array(j, "mus", where);
        } else if (mode == SimulationMode::thermal) {
            throw InputError("config: thermal mode requires 'mus'");
        }
        if (j.contains("etas")) {
            etas = number_array(j, "etas", where);
        }
        if (!mus.empty() && mus.size() != dim) {
            throw InputError("config: 'mus' length must equal the unitary dimension");
        }
        if (!etas.empty() && etas.size() != mus.size()) {
            throw InputError("config: 'etas' length must equal the 'mus' length");
        }
        if (!mus.empty()) {
            ThermalBank check(mus, etas);
        }

        DetectionModel detection;
        if (j.contains("detection")) {
            const auto& d = j.at("detection");
            if (!d.is_object()) {
                throw InputError("config: 'detection' must be an object");
            }
            reject_unknown_keys(d, {"kind", "cutoff"}, "config.detection");
            if (d.contains("kind")) {
                const auto kind = d.at("kind").get<std::string>();
                if (kind == "exact_single_photon") {
                    detection.kind = DetectionKind::exact_single_photon;
                } else if (kind == "threshold") {
                    detection.kind = DetectionKind::threshold;
                } else {
                    throw InputError("config: detection.kind must be 'exact_single_photon' or "
                                     "'threshold'");
                }
            }
            if (d.contains("cutoff")) {
                const auto cutoff = count_field(d, "cutoff", "config.detection");
                if (cutoff < 1 || cutoff > kOracleMaxCutoff) {
                    throw InputError("config: detection.cutoff must lie in [1, 8]");
                }
                detection.cutoff = static_cast<unsigned>(cutoff);
            }
        }

        const double rep_rate = j.contains("rep_rate_hz") ? number_field(j, "rep_rate_hz", where) : 0.0;
        const double accum = j.contains("accum_s") ? number_field(j, "accum_s", where) : 0.0;
        if (rep_rate < 0.0 || accum < 0.0) {
            throw InputError("config: rep_rate_hz and accum_s must be non-negative");
        }

        SamplingPlan plan;
        plan.seed = kDefaultSeed;
        plan.n_samples = static_cast<std::uint64_t>(std::llround(rep_rate * accum));
        if (j.contains("sampling")) {
            const auto& s = j.at("sampling");
            if (!s.is_object()) {
                throw InputError("config: 'sampling' must be an object");
            }
            reject_unknown_keys(s, {"n_samples", "seed", "partitions", "confidence"},
                                "config.sampling");
            if (s.contains("n_samples")) {
                plan.n_samples = count_field(s, "n_samples", "config.sampling");
            }
            if (s.contains("seed")) {
                plan.seed = count_field(s, "seed", "config.sampling");
            }
            if (s.contains("partitions")) {
                const auto parts = count_field(s, "partitions", "config.sampling");
                if (parts < 1 || parts > 1024) {
                    throw InputError("config: sampling.partitions must lie in [1, 1024]");
                }
                plan.partitions = static_cast<unsigned>(parts);
            }
            if (s.contains("confidence")) {
                plan.confidence = number_field(s, "confidence", "config.sampling");
            }
        }
        plan.validate();

        return ExperimentConfig{std::move(unitary), std::move(mus), std::move(etas), detection,
                                rep_rate, accum, mode, plan, config_hash(j)};
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_json_file(path));
}

json to_json(const SamplingResult& r) {
    json j = {
        {"n", r.n},
        {"k", r.k},
        {"p_true", r.p_true},
        {"p_hat", r.p_hat},
        {"stderr", r.stderr_p},
        {"confidence", r.confidence},
        {"z_c", r.z_c},
        {"ci", interval_json(r.ci)},
        {"perm_scale", optional_number(r.perm_scale)},
        {"perm_estimate", optional_number(r.perm_estimate)},
        {"perm_stderr", optional_number(r.perm_stderr)},
        {"perm_ci", r.perm_ci ? interval_json(*r.perm_ci) : json(nullptr)},
        {"generator", r.generator},
        {"warnings", r.warnings},
    };
    return j;
}

json to_json(const ResourceEstimate& e) {
    return json{
        {"n_required", e.n_required ? json(*e.n_required) : json(nullptr)},
        {"n_real", std::isfinite(e.n_real) ? json(e.n_real) : json(nullptr)},
        {"infinite", e.infinite()},
        {"z_c", e.z_c},
        {"formula_id", e.formula_id},
        {"diagnostic", e.diagnostic},
    };
}

json simulate_payload(const ExperimentConfig& config) {
    if (config.mode == SimulationMode::unitary) {
        const double exact = single_photon_click_probability(config.unitary);
        const SamplingResult r = estimate_permanent_unitary(config.unitary, config.sampling);
        return json{{"mode", "unitary"}, {"perm_u2_exact", exact}, {"result", to_json(r)}};
    }
    const ThermalBank bank(config.mus, config.etas);
    const double p = click_probability_interfering(config.unitary, bank);
    const double perm = permanent(sandwich(config.unitary.matrix(), bank.effective_mus())).real();
    const SamplingResult r = estimate_permanent_thermal(config.unitary, bank, config.sampling);
    const bool within = r.perm_estimate && r.perm_stderr &&
                        std::abs(*r.perm_estimate - perm) <= 3.0 * *r.perm_stderr;
    return json{{"mode", "thermal"},
                {"p_exact", p},
                {"perm_exact", perm},
                {"within_3sigma", within},
                {"result", to_json(r)}};
}

json RunRecord::to_json() const {
    return json{
        {"command", command},
        {"config_hash", config_hash},
        {"seed", seed},
        {"partitions", partitions},
        {"timestamp", utc_timestamp()},
        {"versions",
         {{"permoptics", std::string(kVersion)}, {"generator", std::string(Philox4x32::name)}}},
        {"payload", payload},
        {"wall_seconds", wall_seconds},
    };
}

std::filesystem::path run_log_path(const std::filesystem::path& out_dir) {
    if (const char* env = std::getenv("PERMOPTICS_LOG"); env != nullptr && *env != '\0') {
        return env;
    }
    return out_dir / "runs.jsonl";
}

void append_run_record(const std::filesystem::path& log, const RunRecord& record) {
    if (log.has_parent_path()) {
        std::filesystem::create_directories(log.parent_path());
    }
    const std::string line = record.to_json().dump() + "\n";
    const int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) {
        throw InputError("cannot open run log '" + log.string() + "'");
    }
    ::flock(fd, LOCK_EX);
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
        if (n <= 0) {
            break;
        }
        written += static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (written != line.size()) {
        throw InputError("short write to run log '" + log.string() + "'");
    }
}

std::string Report::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << columns[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_cell(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

json Report::to_json() const {
    json table = json::array();
    for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) {
            obj[columns[i]] = row[i];
        }
        table.push_back(obj);
    }
    return json{{"report", name}, {"rows", table}, {"summary", summary}};
}

Report reproduce_table1(const ReproduceOptions& options) {
    Report report{"table1",
                  {"row", "perm_exact_printed", "perm_exact_computed", "perm_exact_ok",
                   "perm_from_printed_a", "no_interference_printed", "no_interference_factorial",
                   "no_interference_literal", "no_interference_ok", "perm_exp_printed",
                   "perm_exp_sigma_printed", "n_samples", "k", "perm_estimate", "perm_stderr",
                   "within_3sigma"},
                  {}};
    const auto& rows = reference_rows();
    std::size_t exact_ok = 0;
    std::size_t no_int_ok = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const UnitaryMatrix u(row.u, UnitarityLaxity::experimental);
        const ThermalBank bank(row.mus);
        const double tol = 2.0 * row.last_digit;
        const double perm = permanent(sandwich(row.u, row.mus)).real();
        const double from_printed = permanent(row.printed_a).real();
        const double ni_fact =
            no_interference_permanent(u, bank, EnhancementConvention::factorial_rule);
        const double ni_lit = no_interference_permanent(u, bank, EnhancementConvention::paper_literal);
        const bool ok_exact = std::abs(perm - row.perm_exact) <= tol * (1.0 + 1e-9);
        const bool ok_ni = std::abs(ni_fact - row.no_interference) <= tol * (1.0 + 1e-9);
        exact_ok += ok_exact ? 1 : 0;
        no_int_ok += ok_ni ? 1 : 0;

        SamplingPlan plan;
        plan.n_samples = static_cast<std::uint64_t>(std::llround(kReferenceRepRateHz * row.accum_s));
        plan.seed = derive_seed(options.seed, i);
        plan.partitions = options.partitions;
        const SamplingResult r = estimate_permanent_thermal(u, bank, plan);
        const bool within = std::abs(*r.perm_estimate - perm) <= 3.0 * *r.perm_stderr;

        report.rows.push_back({row.label, row.perm_exact, perm, ok_exact, from_printed,
                               row.no_interference, ni_fact, ni_lit, ok_ni, row.perm_exp,
                               row.perm_exp_sigma, r.n, r.k, *r.perm_estimate, *r.perm_stderr,
                               within});
    }
    report.summary = {{"rows", rows.size()},
                      {"perm_exact_within_tolerance", exact_ok},
                      {"no_interference_within_tolerance", no_int_ok},
                      {"tolerance", "2 units in the last printed digit"},
                      {"rep_rate_hz", kReferenceRepRateHz},
                      {"seed", options.seed}};
    return report;
}

Report reproduce_fig3(const ReproduceOptions& options) {
    constexpr double p = 1e-3;
    const std::vector<std::uint64_t> grid = {10'000, 100'000, 1'000'000, 10'000'000};
    const std::vector<double> deltas = {0.95, 0.997};
    const auto rows = empirical_error_sweep(p, grid, options.fig3_repeats, deltas, options.seed);
    Report report{"fig3", {"n", "delta", "eps_empirical", "eps_theory", "ratio"}, {}};
    for (const auto& r : rows) {
        report.rows.push_back({r.n, r.delta, r.eps_empirical, r.eps_theory, r.ratio});
    }
    json slopes = json::object();
    for (double d : deltas) {
        std::ostringstream key;
        key << d;
        slopes[key.str()] = loglog_slope(rows, d);
    }
    double worst = 0.0;
    for (const auto& r : rows) {
        worst = std::max(worst, std::abs(r.ratio - 1.0));
    }
    report.summary = {{"p", p},
                      {"repeats", options.fig3_repeats},
                      {"loglog_slope", slopes},
                      {"max_relative_deviation", worst},
                      {"seed", options.seed}};
    return report;
}

Report reproduce_visibility(const ReproduceOptions&) {
    const double h = 1.0 / std::sqrt(2.0);
    const UnitaryMatrix bs(ComplexMatrix{{h, h}, {h, -h}});
    Report report{"visibility",
                  {"mu", "p_interfering", "p_no_interference", "visibility", "deviation"},
                  {}};
    double worst = 0.0;
    for (double mu : {1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5}) {
        const ThermalBank bank({mu, mu});
        const double p_int = click_probability_interfering(bs, bank);
        const double p_no = click_probability_no_interference(bs, bank);
        const double v = thermal_visibility(bs, bank);
        worst = std::max(worst, std::abs(v - 1.0 / 3.0));
        report.rows.push_back({mu, p_int, p_no, v, v - 1.0 / 3.0});
    }
    report.summary = {{"ideal", 1.0 / 3.0},
                      {"max_abs_deviation", worst},
                      {"measured_reference", 0.33},
                      {"measured_reference_sigma", 0.06}};
    return report;
}

Report reproduce_haar(const ReproduceOptions& options) {
    Report report{"haar",
                  {"m", "exact", "asymptote", "exact_over_asymptote", "mc_mean", "mc_stderr",
                   "mc_z", "draws"},
                  {}};
    for (std::size_t m = 1; m <= 8; ++m) {
        const double exact = haar_average_permanent(m);
        const double asym = haar_average_asymptote(m);
        std::vector<json> row = {m, exact, asym, exact / asym};
        if (m >= 2 && m <= 4) {
            RandomStream stream(derive_seed(options.seed, m), 0);
            double sum = 0.0;
            double sum2 = 0.0;
            for (std::size_t d = 0; d < options.haar_draws; ++d) {
                const double x = single_photon_click_probability(haar_random_unitary(m, stream));
                sum += x;
                sum2 += x * x;
            }
            const double n = static_cast<double>(options.haar_draws);
            const double mean = sum / n;
            const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
            const double se = std::sqrt(var / n);
            row.insert(row.end(), {mean, se, (mean - exact) / se, options.haar_draws});
        } else {
            row.insert(row.end(), {nullptr, nullptr, nullptr, 0});
        }
        report.rows.push_back(std::move(row));
    }
    report.summary = {{"draws", options.haar_draws}, {"seed", options.seed}};
    return report;
}

Report reproduce_bounds(const ReproduceOptions& options) {
    Report report{"bounds",
                  {"m", "p_max", "exp_minus_m", "p_max_within_exp", "search_best", "search_trials",
                   "search_within_p_max", "cost_ratio_eta1"},
                  {}};
    bool all_ok = true;
    for (std::size_t m = 1; m <= 20; ++m) {
        const double pmax = max_click_probability(m);
        const double bound = std::exp(-static_cast<double>(m));
        std::vector<json> row = {m, pmax, bound, pmax <= bound};
        all_ok = all_ok && pmax <= bound;
        if (m <= 4) {
            RandomStream stream(derive_seed(options.seed, m, 19), 0);
            double best = 0.0;
            for (std::size_t t = 0; t < options.bound_trials; ++t) {
                const UnitaryMatrix u = haar_random_unitary(m, stream);
                std::vector<double> mus(m);
                for (double& mu : mus) {
                    mu = 0.999 * stream.uniform();
                }
                best = std::max(best, click_probability_interfering(u, ThermalBank(mus)));
            }
            all_ok = all_ok && best <= pmax;
            row.insert(row.end(), {best, options.bound_trials, best <= pmax});
        } else {
            row.insert(row.end(), {nullptr, 0, nullptr});
        }
        row.push_back(cost_comparison(m, 1.0).ratio);
        report.rows.push_back(std::move(row));
    }
    const auto onset = optical_cost_dominance_onset(1.0);
    report.summary = {{"all_within_bounds", all_ok},
                      {"optical_cost_dominance_onset_eta1", onset ? json(*onset) : json(nullptr)},
                      {"seed", options.seed}};
    return report;
}

std::optional<Report> reproduce(std::string_view target, const ReproduceOptions& options) {
    if (target == "table1") {
        return reproduce_table1(options);
    }
    if (target == "fig3") {
        return reproduce_fig3(options);
    }
    if (target == "visibility") {
        return reproduce_visibility(options);
    }
    if (target == "haar") {
        return reproduce_haar(options);
    }
    if (target == "bounds") {
        return reproduce_bounds(options);
    }
    return std::nullopt;
}

}  // namespace permoptics
