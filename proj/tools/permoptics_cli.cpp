// permoptics: command-line front end.
//
// Exit codes: 0 success, 2 input error, 3 dimension guard, 1 anything else.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "permoptics/error.hpp"
#include "permoptics/harness.hpp"
#include "permoptics/matrix_json.hpp"
#include "permoptics/permanent.hpp"
#include "permoptics/photonic.hpp"
#include "permoptics/resources.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace permoptics;

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> partitions;
    std::string out_dir = "results";
    std::string format = "json";
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Flat objects print as a two-line CSV; nested values are dumped as JSON text.
void emit(const json& j, const GlobalOptions& g) {
    if (g.format == "csv" && j.is_object()) {
        std::string header;
        std::string values;
        for (const auto& item : j.items()) {
            header += (header.empty() ? "" : ",") + item.key();
            const auto& v = item.value();
            std::string cell = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
            if (cell.find_first_of(",\"") != std::string::npos) {
                std::string quoted = "\"";
                for (char c : cell) {
                    quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
                }
                cell = quoted + "\"";
            }
            values += (item.key() == j.begin().key() ? "" : ",") + cell;
        }
        std::cout << header << '\n' << values << '\n';
        return;
    }
    std::cout << j.dump(2) << '\n';
}

int cmd_perm(const std::string& file, const std::string& method_name, const GlobalOptions& g) {
    const auto method = parse_permanent_method(method_name);
    if (!method) {
        throw InputError("unknown method '" + method_name + "'");
    }
    const ComplexMatrix a = matrix_from_json(read_json_file(file));
    const auto start = std::chrono::steady_clock::now();
    const Complex value = permanent(a, *method);
    const double elapsed = seconds_since(start);
    emit(json{{"re", value.real()},
              {"im", value.imag()},
              {"dim", a.dim()},
              {"method", std::string(to_string(*method))},
              {"seconds", elapsed}},
         g);
    return 0;
}

ExperimentConfig config_with_overrides(const std::string& file, const GlobalOptions& g) {
    ExperimentConfig config = load_experiment_config(file);
    if (g.seed) {
        config.sampling.seed = *g.seed;
    }
    if (g.partitions) {
        config.sampling.partitions = *g.partitions;
    }
    return config;
}

int cmd_simulate(const std::string& file, const GlobalOptions& g) {
    const ExperimentConfig config = config_with_overrides(file, g);
    const auto start = std::chrono::steady_clock::now();
    const json payload = simulate_payload(config);
    RunRecord record{"simulate",          config.hash, config.sampling.seed,
                     config.sampling.partitions, payload, seconds_since(start)};
    append_run_record(run_log_path(g.out_dir), record);
    if (g.format == "csv") {
        const auto& r = payload.at("result");
        json flat = {{"config_hash", config.hash},
                     {"n", r.at("n")},
                     {"k", r.at("k")},
                     {"p_hat", r.at("p_hat")},
                     {"perm_estimate", r.at("perm_estimate")},
                     {"perm_stderr", r.at("perm_stderr")}};
        emit(flat, g);
    } else {
        emit(json{{"config_hash", config.hash}, {"payload", payload}}, g);
    }
    return 0;
}

struct ResourceArgs {
    std::optional<double> p;
    std::optional<double> perm_u2;
    double epsilon = 0.1;
    double delta = 0.95;
    std::optional<std::string> flavor;
    std::vector<double> mus;
};

int cmd_resources(const ResourceArgs& a, const GlobalOptions& g) {
    if (a.p.has_value() == a.perm_u2.has_value()) {
        throw InputError("give exactly one of --p and --perm-u2");
    }
    ResourceQuery q;
    q.epsilon = a.epsilon;
    q.delta = a.delta;
    q.mus = a.mus;
    q.p = a.p ? *a.p : *a.perm_u2;
    if (a.flavor) {
        const auto f = parse_error_flavor(*a.flavor);
        if (!f) {
            throw InputError("unknown flavor '" + *a.flavor + "'");
        }
        q.flavor = *f;
    } else {
        q.flavor = a.p ? ErrorFlavor::multiplicative_thermal : ErrorFlavor::multiplicative_unitary;
    }
    const bool unitary_flavor = q.flavor == ErrorFlavor::multiplicative_unitary ||
                                q.flavor == ErrorFlavor::almost_multiplicative_unitary;
    if (unitary_flavor != a.perm_u2.has_value()) {
        throw InputError("--perm-u2 goes with the unitary flavors and --p with the thermal ones");
    }
    const ResourceEstimate e = estimate_resources(q);
    json out = to_json(e);
    out["flavor"] = std::string(to_string(q.flavor));
    emit(out, g);
    return 0;
}

int cmd_reproduce(const std::string& target, const GlobalOptions& g) {
    ReproduceOptions options;
    options.seed = g.seed.value_or(kDefaultSeed);
    options.partitions = g.partitions.value_or(1);
    const auto start = std::chrono::steady_clock::now();
    const auto report = reproduce(target, options);
    if (!report) {
        throw InputError("unknown target '" + target +
                         "' (expected table1, fig3, visibility, haar or bounds)");
    }
    fs::create_directories(g.out_dir);
    const fs::path file = fs::path(g.out_dir) / (report->name + (g.format == "csv" ? ".csv" : ".json"));
    {
        std::ofstream out(file);
        out << (g.format == "csv" ? report->to_csv() : report->to_json().dump(2) + "\n");
        if (!out) {
            throw InputError("cannot write '" + file.string() + "'");
        }
    }
    const json key = {{"target", target}, {"seed", options.seed}, {"partitions", options.partitions}};
    RunRecord record{"reproduce", config_hash(key), options.seed, options.partitions,
                     report->to_json(), seconds_since(start)};
    append_run_record(run_log_path(g.out_dir), record);
    std::cout << json{{"report", report->name}, {"file", file.string()}, {"summary", report->summary}}
                     .dump(2)
              << '\n';
    return 0;
}

int cmd_oracle(const std::string& file, const GlobalOptions& g) {
    const ExperimentConfig config = config_with_overrides(file, g);
    if (config.mus.empty()) {
        throw InputError("oracle needs 'mus'");
    }
    const ThermalBank bank(config.mus, config.etas);
    const OracleResult r = fock_oracle_probability(config.unitary, bank, config.detection);
    json out = {{"detection", to_string(config.detection.kind)},
                {"cutoff", config.detection.cutoff},
                {"probability", r.probability},
                {"truncation_bound", r.truncation_bound},
                {"configurations", r.configurations}};
    // The closed form counts exactly one photon per output; a threshold
    // detector also clicks on multi-photon events.
    out["closed_form_single_photon"] = click_probability_interfering(config.unitary, bank);
    emit(out, g);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permanents of positive semidefinite matrices from thermal-light interferometry"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Master seed for every random stream");
    app.add_option("--partitions", g.partitions, "Parallel sampling partitions")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--out", g.out_dir, "Output directory for reports and the run log");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::string matrix_file;
    std::string method = "glynn";
    auto* perm = app.add_subcommand("perm", "Exact permanent of a matrix file");
    perm->add_option("matrix_file", matrix_file, "JSON {dim, re, im}")->required();
    perm->add_option("--method", method, "naive, ryser or glynn");

    std::string config_file;
    auto* simulate = app.add_subcommand("simulate", "Seeded coincidence-counting simulation");
    simulate->add_option("config", config_file, "Experiment config JSON")->required();

    ResourceArgs res;
    auto* resources = app.add_subcommand("resources", "Required number of samples");
    resources->add_option("--p", res.p, "Coincidence probability");
    resources->add_option("--perm-u2", res.perm_u2, "|Perm U|^2 for single-photon inputs");
    resources->add_option("--epsilon", res.epsilon, "Relative error")->capture_default_str();
    resources->add_option("--delta", res.delta, "Confidence level")->capture_default_str();
    resources->add_option("--flavor", res.flavor,
                          "multiplicative_thermal, multiplicative_unitary, "
                          "almost_multiplicative_thermal or almost_multiplicative_unitary");
    resources->add_option("--mus", res.mus, "Mean-photon parameters (almost-multiplicative thermal)");

    std::string target;
    auto* repro = app.add_subcommand("reproduce", "Reproduction reports");
    repro->add_option("target", target, "table1, fig3, visibility, haar or bounds")->required();

    std::string oracle_file;
    auto* oracle = app.add_subcommand("oracle", "Brute-force Fock-space evaluation of a config");
    oracle->add_option("config", oracle_file, "Experiment config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (perm->parsed()) {
            return cmd_perm(matrix_file, method, g);
        }
        if (simulate->parsed()) {
            return cmd_simulate(config_file, g);
        }
        if (resources->parsed()) {
            return cmd_resources(res, g);
        }
        if (repro->parsed()) {
            return cmd_reproduce(target, g);
        }
        if (oracle->parsed()) {
            return cmd_oracle(oracle_file, g);
        }
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << '\n';
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
