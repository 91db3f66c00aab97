#include "sparsefront/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace sparsefront;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool trace = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "configuration file (JSON)")->required();
    cmd->add_option("--seed", o.seed, "run a single seed instead of the configured list");
    cmd->add_option("--out", o.out, "output path (instance file for ingest, directory otherwise)");
    cmd->add_flag("--trace", o.trace, "write per-iteration solver traces");
}

ExperimentConfig experiment(const CommonOptions& o) {
    ExperimentConfig c = load_config(o.config);
    if (o.seed) c.seeds = {*o.seed};
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.trace) c.trace = true;
    return c;
}

int cmd_ingest(const CommonOptions& o) {
    using nlohmann::json;
    json cfg;
    try {
        cfg = json::parse(read_file(o.config));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    const fs::path base = fs::path(o.config).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
    IngestOptions opts;
    std::string prices, esg;
    try {
        prices = resolve(cfg.at("prices").get<std::string>());
        esg = resolve(cfg.at("esg").get<std::string>());
        opts.market_column = cfg.at("market_column").get<std::string>();
        opts.name = cfg.value("name", std::string("instance"));
        opts.log_returns = cfg.value("log_returns", false);
        opts.estimation.population = cfg.value("population_moments", true);
        if (cfg.contains("instance")) opts.instance_fields = cfg["instance"].dump();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("ingest config: ") + e.what());
    }
    const ProblemInstance inst = ingest(read_file(prices), read_file(esg), opts);
    const std::string out = o.out.empty() ? opts.name + ".json" : o.out;
    save_instance(inst, out);
    std::cout << "wrote " << out << " (n=" << inst.n << ", s=" << inst.s << ")\n";
    return 0;
}

int cmd_run(const CommonOptions& o) {
    const ExperimentConfig c = experiment(o);
    const auto records = run_experiment(c);
    int failures = 0;
    for (const auto& r : records) {
        std::cout << r.instance << ' ' << r.pipeline << " seed " << r.seed << ": ";
        if (r.status == "ok") {
            std::cout << r.points << " points, hv " << format_double(r.hypervolume) << (r.best ? " (best)" : "") << '\n';
        } else {
            std::cout << r.status << '\n';
            ++failures;
        }
    }
    return failures == static_cast<int>(records.size()) && !records.empty() ? kExitNumerical : 0;
}

int cmd_reference(const CommonOptions& o) {
    const ExperimentConfig c = experiment(o);
    build_references(c);
    std::cout << "reference fronts written under " << c.output_dir << '\n';
    return 0;
}

int cmd_report(const CommonOptions& o) {
    const ExperimentConfig c = experiment(o);
    const auto records = runs_from_csv(read_file((fs::path(c.output_dir) / "runs.csv").string()));
    const auto rows = compute_metrics(c, records);
    write_report(rows, c.output_dir);
    for (const auto& r : rows)
        std::cout << r.problem << ' ' << r.solver << ": purity " << format_double(r.purity) << ", gamma "
                  << format_double(r.gamma) << ", hv " << format_double(r.hv) << ", recall " << format_double(r.recall)
                  << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse multi-objective portfolio front reconstruction"};
    app.require_subcommand(1);
    CommonOptions ingest_opts, run_opts, ref_opts, report_opts;
    auto* ingest_cmd = app.add_subcommand("ingest", "estimate an instance from price and ESG CSV files");
    auto* run_cmd = app.add_subcommand("run", "run the configured pipelines and seeds");
    auto* ref_cmd = app.add_subcommand("reference", "merge all runs into per-instance reference fronts");
    auto* report_cmd = app.add_subcommand("report", "write metric and performance-profile CSVs");
    add_common(ingest_cmd, ingest_opts);
    add_common(run_cmd, run_opts);
    add_common(ref_cmd, ref_opts);
    add_common(report_cmd, report_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (ingest_cmd->parsed()) return cmd_ingest(ingest_opts);
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (ref_cmd->parsed()) return cmd_reference(ref_opts);
        if (report_cmd->parsed()) return cmd_report(report_opts);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
