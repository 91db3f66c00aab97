#pragma once

// Experiment shell: CSV ingestion, configuration, two-phase pipelines
// (initialisation then optional SFSD), persisted runs, reference fronts and
// metric reports.

#include "sparsefront/descent.hpp"
#include "sparsefront/evolutionary.hpp"
#include "sparsefront/front_io.hpp"
#include "sparsefront/instance_io.hpp"
#include "sparsefront/metrics.hpp"
#include "sparsefront/scalarization.hpp"
#include "sparsefront/sfsd.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparsefront {

// ---- ingestion ----------------------------------------------------------

struct PriceTable {
    std::vector<std::string> dates;
    std::vector<std::string> tickers;
    MatrixXd prices;  // periods x tickers
};

/// Parses `date,T1,...`; dates must be ISO-8601 and strictly increasing.
/// Errors name the offending line.
PriceTable parse_prices_csv(const std::string& text);

/// Parses `ticker,score` rows.
std::vector<std::pair<std::string, double>> parse_esg_csv(const std::string& text);

/// Simple returns p_t / p_{t-1} - 1, or log returns.
MatrixXd price_returns(const MatrixXd& prices, bool log_returns);

struct IngestOptions {
    std::string name = "instance";
    std::string market_column;
    bool log_returns = false;
    EstimationOptions estimation;
    /// Instance JSON fields other than the estimated data (s, objectives,
    /// bounds, sectors, ...), as a JSON object string.
    std::string instance_fields = "{}";
};

ProblemInstance ingest(const std::string& prices_csv, const std::string& esg_csv, const IngestOptions& options);

// ---- pipelines ----------------------------------------------------------

struct PipelineSpec {
    std::string phase1 = "mohyb";  // scal, mohyb, nsga2, nsma or nsga2-long
    bool sfsd = true;

    /// e.g. "mohyb+sfsd", "scal", "nsga2-long".
    std::string id() const;
    static PipelineSpec parse(const std::string& text);
};

struct SolverSettings {
    int grid_size = 0;  // 0 means 2n weights
    ScalarizationOptions scalarization;
    double moiht_L = 0.0;  // 0 means the default Lipschitz-based value
    MoihtParams moiht;
    MospdParams mospd;
    int population = 100;
    NsmaParams nsma;
    SfsdParams sfsd;
};

struct CellOutput {
    PipelineSpec pipeline;
    std::uint64_t seed = 0;
    FrontTable phase1;
    FrontTable final_front;
    Trace trace;
    double phase1_seconds = 0.0;
    double sfsd_seconds = 0.0;
    long sfsd_iterations = 0;
    bool natural_termination = false;
    std::string error;  // empty on success
};

/// Runs one (pipeline, seed) cell in memory.
CellOutput run_cell(const ProblemInstance& inst, const PipelineSpec& pipeline, std::uint64_t seed,
                    const Budget& phase1_budget, const Budget& sfsd_budget, const SolverSettings& settings = {});

// ---- experiments --------------------------------------------------------

struct ExperimentConfig {
    std::vector<std::string> instances;  // instance JSON paths
    std::vector<std::string> pipelines = {"mohyb+sfsd"};
    std::vector<std::uint64_t> seeds = {0};
    double phase1_seconds = 10.0;
    double sfsd_seconds = 5.0;
    long phase1_iterations = -1;  // negative means uncapped
    long sfsd_iterations = -1;
    std::string output_dir = "results";
    bool trace = false;
    int extra_reference_runs = 0;  // additional nsga2-long runs for the reference
    SolverSettings settings;
    std::string source;  // canonical JSON the hash is computed from

    Budget phase1_budget() const;
    Budget sfsd_budget() const;
    std::string hash() const;
    void validate() const;

    /// Relative instance paths resolve against `base_dir`.
    static ExperimentConfig from_json(const std::string& text, const std::string& base_dir = ".");
};

ExperimentConfig load_config(const std::string& path);

struct RunRecord {
    std::string config_hash;
    std::string instance;
    std::string pipeline;
    std::uint64_t seed = 0;
    double phase1_seconds = 0.0;
    double sfsd_seconds = 0.0;
    long sfsd_iterations = 0;
    bool natural_termination = false;
    std::size_t points = 0;
    double hypervolume = 0.0;
    bool best = false;  // highest hypervolume among this pipeline's seeds
    std::string front_path;
    std::string phase1_path;
    std::string status = "ok";
};

/// Runs every (instance, pipeline, seed) cell, writes fronts under
/// output_dir/<instance>/<pipeline>/ and the run table to output_dir/runs.csv.
/// Cells run on SPARSEFRONT_THREADS worker threads (default 1).
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

std::string runs_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> runs_from_csv(const std::string& text);

/// Merges every successful run of each instance into
/// output_dir/<instance>/reference.csv.
void build_references(const ExperimentConfig& config);

struct MetricRow {
    std::string solver;
    std::string problem;
    double purity = 0.0;
    double gamma = 0.0;
    double hv = 0.0;
    double recall = 0.0;
};

/// Metrics of each pipeline's best run against the instance reference.
std::vector<MetricRow> compute_metrics(const ExperimentConfig& config, const std::vector<RunRecord>& records);

/// Writes metrics.csv and profile_{purity,hv,gamma}.csv to output_dir.
void write_report(const std::vector<MetricRow>& rows, const std::string& output_dir);

/// Worker count from SPARSEFRONT_THREADS, at least 1.
int thread_count();

}  // namespace sparsefront
