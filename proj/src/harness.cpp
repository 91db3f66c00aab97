#include "sparsefront/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace sparsefront {

using nlohmann::json;
namespace fs = std::filesystem;

// ---- ingestion ----------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& raw) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool iso_date(const std::string& d) {
    if (d.size() < 10) return false;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    if (d[4] != '-' || d[7] != '-') return false;
    const int month = std::stoi(d.substr(5, 2));
    const int day = std::stoi(d.substr(8, 2));
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& what) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
        throw DataError(what + " line " + std::to_string(line) + ": '" + cell + "' is not a number");
    }
    if (!std::isfinite(v)) throw DataError(what + " line " + std::to_string(line) + ": non-finite value");
    return v;
}

}  // namespace

PriceTable parse_prices_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("prices CSV: empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date") throw DataError("prices CSV line 1: header must be date,TICKER...");
    PriceTable t;
    t.tickers.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("prices CSV line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                            " cells, found " + std::to_string(cells.size()));
        if (!iso_date(cells[0])) throw DataError("prices CSV line " + std::to_string(lineno) + ": bad date '" + cells[0] + "'");
        if (!t.dates.empty() && !(t.dates.back() < cells[0]))
            throw DataError("prices CSV line " + std::to_string(lineno) + ": dates are not strictly increasing");
        t.dates.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t k = 1; k < cells.size(); ++k) {
            const double p = parse_number(cells[k], lineno, "prices CSV");
            if (p <= 0.0) throw DataError("prices CSV line " + std::to_string(lineno) + ": prices must be positive");
            row.push_back(p);
        }
        rows.push_back(std::move(row));
    }
    t.prices.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.tickers.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t k = 0; k < rows[r].size(); ++k) t.prices(r, k) = rows[r][k];
    return t;
}

std::vector<std::pair<std::string, double>> parse_esg_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("ESG CSV: empty file");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "ticker" || header[1] != "score")
        throw DataError("ESG CSV line 1: header must be ticker,score");
    std::vector<std::pair<std::string, double>> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) throw DataError("ESG CSV line " + std::to_string(lineno) + ": expected 2 cells");
        out.emplace_back(cells[0], parse_number(cells[1], lineno, "ESG CSV"));
    }
    return out;
}

MatrixXd price_returns(const MatrixXd& prices, bool log_returns) {
    const Eigen::Index T = prices.rows() - 1;
    if (T < 1) throw DataError("at least two price rows are required");
    MatrixXd R(T, prices.cols());
    for (Eigen::Index t = 0; t < T; ++t)
        for (Eigen::Index k = 0; k < prices.cols(); ++k) {
            const double ratio = prices(t + 1, k) / prices(t, k);
            R(t, k) = log_returns ? std::log(ratio) : ratio - 1.0;
        }
    return R;
}

ProblemInstance ingest(const std::string& prices_csv, const std::string& esg_csv, const IngestOptions& options) {
    const PriceTable table = parse_prices_csv(prices_csv);
    const auto market_it = std::find(table.tickers.begin(), table.tickers.end(), options.market_column);
    if (market_it == table.tickers.end()) throw DataError("market column '" + options.market_column + "' not found");
    const Eigen::Index market = market_it - table.tickers.begin();
    const MatrixXd all = price_returns(table.prices, options.log_returns);
    if (all.rows() < 2) throw DataError("at least two return periods are required");

    std::vector<std::string> assets;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(table.tickers.size()); ++k)
        if (k != market) {
            assets.push_back(table.tickers[k]);
            cols.push_back(k);
        }
    if (assets.empty()) throw DataError("no asset columns besides the market column");
    MatrixXd R(all.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t a = 0; a < cols.size(); ++a) R.col(a) = all.col(cols[a]);

    const auto scores = parse_esg_csv(esg_csv);
    std::map<std::string, double> by_ticker(scores.begin(), scores.end());
    VectorXd esg(static_cast<Eigen::Index>(assets.size()));
    for (std::size_t a = 0; a < assets.size(); ++a) {
        const auto it = by_ticker.find(assets[a]);
        if (it == by_ticker.end()) throw DataError("ESG CSV: no score for ticker '" + assets[a] + "'");
        esg[a] = it->second;
    }

    ProblemInstance estimated;
    estimated.name = options.name;
    estimated.n = static_cast<int>(assets.size());
    estimated.objectives = {{ObjectiveId::ER, default_scale(ObjectiveId::ER), std::nullopt, true},
                            {ObjectiveId::V, default_scale(ObjectiveId::V), std::nullopt, true}};
    estimated.model = std::make_shared<ObjectiveModel>(estimate_model(R, all.col(market), esg, options.estimation));

    // User-supplied fields (s, objectives, bounds, ...) override the defaults.
    json doc = json::parse(instance_to_json(estimated));
    try {
        const json fields = json::parse(options.instance_fields);
        for (const char* reserved : {"n", "c", "Q", "esg", "coskew", "centered_returns", "beta"})
            if (fields.contains(reserved)) throw ConfigError(std::string("ingest: field '") + reserved + "' is estimated from data");
        if (!fields.contains("s")) throw ConfigError("ingest: the cardinality bound 's' is required");
        doc.update(fields);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("ingest fields: ") + e.what());
    }
    return instance_from_json(doc.dump());
}

// ---- pipelines ----------------------------------------------------------

std::string PipelineSpec::id() const {
    if (phase1 == "nsga2-long") return phase1;
    return sfsd ? phase1 + "+sfsd" : phase1;
}

PipelineSpec PipelineSpec::parse(const std::string& text) {
    PipelineSpec p;
    std::string base = text;
    p.sfsd = false;
    const std::string suffix = "+sfsd";
    if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        base.resize(base.size() - suffix.size());
        p.sfsd = true;
    }
    static const std::set<std::string> known = {"scal", "mohyb", "nsga2", "nsma", "nsga2-long"};
    if (!known.count(base)) throw ConfigError("unknown pipeline '" + text + "'");
    if (base == "nsga2-long" && p.sfsd) throw ConfigError("nsga2-long does not take an sfsd stage");
    p.phase1 = base;
    return p;
}

namespace {

Budget sum_budgets(const Budget& a, const Budget& b) {
    Budget out;
    out.seconds = a.seconds + b.seconds;
    const long cap = std::numeric_limits<long>::max();
    out.iterations = (a.iterations == cap || b.iterations == cap) ? cap : a.iterations + b.iterations;
    return out;
}

struct PhaseOne {
    FrontList front;
    std::map<std::size_t, VectorXd> lambda_of;
};

PhaseOne phase_one(const ProblemInstance& inst, const PortfolioObjectives& obj, const Polyhedron& poly,
                   const PipelineSpec& pipeline, std::uint64_t seed, const Budget& budget, const Budget& sfsd_budget,
                   const SolverSettings& settings, Trace* trace) {
    const int n = inst.n;
    const int s = inst.s;
    PhaseOne out;
    if (pipeline.phase1 == "scal") {
        const auto grid = lambda_grid(obj.count(), std::max(settings.grid_size > 0 ? settings.grid_size : 2 * n, obj.count()));
        ScalarizationOptions so = settings.scalarization;
        so.seed = seed;
        so.budget = budget;
        ScalarizationFront sf = scalarization_front(obj, poly, s, grid, so);
        out.front = std::move(sf.front);
        out.lambda_of = std::move(sf.lambda_of);
        return out;
    }

    std::vector<VectorXd> points;
    std::vector<std::string> origins;
    if (pipeline.phase1 == "mohyb") {
        MoihtParams iht = settings.moiht;
        Rng rng = Rng::stream(seed, "lipschitz");
        iht.L = settings.moiht_L > 0.0 ? settings.moiht_L : default_moiht_L(obj, s, rng);
        for (auto& r : mohyb(obj, initial_points(n, s, seed), poly, s, iht, settings.mospd, budget, trace)) {
            points.push_back(std::move(r.x));
            origins.push_back(r.origin.empty() ? "mohyb" : r.origin);
        }
    } else {
        GaParams ga;
        ga.N = settings.population;
        ga.seed = seed;
        ga.budget = pipeline.phase1 == "nsga2-long" ? sum_budgets(budget, sfsd_budget) : budget;
        Population pop;
        if (pipeline.phase1 == "nsma") {
            NsmaParams memetic = settings.nsma;
            Rng rng = Rng::stream(seed, "lipschitz");
            memetic.moiht.L = settings.moiht_L > 0.0 ? settings.moiht_L : default_moiht_L(obj, s, rng);
            pop = nsma_run(obj, poly, s, ga, memetic);
        } else {
            pop = nsga2_run(obj, poly, s, ga);
        }
        const std::string tag = pipeline.phase1 == "nsga2-long" ? "nsga2" : pipeline.phase1;
        for (const Member& m : pop.first_front()) {
            points.push_back(m.x);
            origins.push_back(tag);
        }
    }
    out.front = initial_front(points, origins, obj, poly, s);
    return out;
}

}  // namespace

CellOutput run_cell(const ProblemInstance& inst, const PipelineSpec& pipeline, std::uint64_t seed,
                    const Budget& phase1_budget, const Budget& sfsd_budget, const SolverSettings& settings) {
    CellOutput out;
    out.pipeline = pipeline;
    out.seed = seed;
    const PortfolioObjectives obj = inst.make_objectives();
    const Polyhedron poly = inst.make_polyhedron();

    Stopwatch clock;
    PhaseOne p1 = phase_one(inst, obj, poly, pipeline, seed, phase1_budget, sfsd_budget, settings, &out.trace);
    out.phase1_seconds = clock.elapsed();
    std::vector<std::string> lambda_cols;
    if (pipeline.phase1 == "scal")
        for (int j = 0; j < obj.count(); ++j) lambda_cols.push_back("lambda_" + std::to_string(j + 1));
    out.phase1 = front_table(p1.front, obj, lambda_cols, p1.lambda_of);

    if (!pipeline.sfsd || pipeline.phase1 == "nsga2-long") {
        out.final_front = out.phase1;
        return out;
    }
    if (p1.front.empty()) throw NumericalError("phase one produced no feasible point");
    Stopwatch sfsd_clock;
    SfsdParams sp = settings.sfsd;
    sp.budget = sfsd_budget;
    SfsdResult res = sfsd_run(p1.front, obj, poly, inst.s, sp);
    out.sfsd_seconds = sfsd_clock.elapsed();
    out.sfsd_iterations = res.iterations;
    out.natural_termination = res.natural_termination;
    out.final_front = front_table(res.front, obj);
    return out;
}

// ---- experiments --------------------------------------------------------

Budget ExperimentConfig::phase1_budget() const {
    Budget b;
    b.seconds = phase1_seconds;
    if (phase1_iterations >= 0) b.iterations = phase1_iterations;
    return b;
}

Budget ExperimentConfig::sfsd_budget() const {
    Budget b;
    b.seconds = sfsd_seconds;
    if (sfsd_iterations >= 0) b.iterations = sfsd_iterations;
    return b;
}

std::string ExperimentConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_label(source)));
    return buf;
}

void ExperimentConfig::validate() const {
    if (instances.empty()) throw ConfigError("config: no instances");
    if (pipelines.empty()) throw ConfigError("config: no pipelines");
    if (seeds.empty()) throw ConfigError("config: at least one seed is required");
    if (!(phase1_seconds > 0.0) || !(sfsd_seconds > 0.0)) throw ConfigError("config: budgets must be positive");
    if (phase1_iterations == 0 || sfsd_iterations == 0) throw ConfigError("config: iteration caps must be positive");
    for (const auto& p : pipelines) PipelineSpec::parse(p);
    if (settings.population < 2) throw ConfigError("config: population must be at least 2");
    settings.mospd.validate();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        auto resolve = [&](const std::string& p) {
            const fs::path path(p);
            return path.is_absolute() ? p : (fs::path(base_dir) / path).lexically_normal().string();
        };
        if (j.contains("instance")) c.instances.push_back(resolve(j["instance"].get<std::string>()));
        if (j.contains("instances"))
            for (const auto& p : j["instances"]) c.instances.push_back(resolve(p.get<std::string>()));
        if (j.contains("pipelines")) c.pipelines = j["pipelines"].get<std::vector<std::string>>();
        if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        c.phase1_seconds = j.value("phase1_budget", c.phase1_seconds);
        c.sfsd_seconds = j.value("sfsd_budget", c.sfsd_seconds);
        if (j.contains("phase1_iterations") && !j["phase1_iterations"].is_null())
            c.phase1_iterations = j["phase1_iterations"].get<long>();
        if (j.contains("sfsd_iterations") && !j["sfsd_iterations"].is_null())
            c.sfsd_iterations = j["sfsd_iterations"].get<long>();
        if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>());
        c.trace = j.value("trace", false);
        c.extra_reference_runs = j.value("extra_reference_runs", 0);
        SolverSettings& s = c.settings;
        s.grid_size = j.value("grid_size", 0);
        s.population = j.value("population", s.population);
        s.moiht_L = j.value("moiht_L", 0.0);
        s.nsma.refine_every = j.value("nsma_refine_every", s.nsma.refine_every);
        s.nsma.refine_steps = j.value("nsma_refine_steps", s.nsma.refine_steps);
        s.sfsd.crowding_gate = j.value("crowding_gate", s.sfsd.crowding_gate);
        s.scalarization.enumeration_budget = j.value("enumeration_budget", s.scalarization.enumeration_budget);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    json canon = j;
    canon.erase("output_dir");
    c.source = canon.dump();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    const fs::path p(path);
    return ExperimentConfig::from_json(read_file(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

int thread_count() {
    if (const char* env = std::getenv("SPARSEFRONT_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

namespace {

std::string clean_cell(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

template <typename F>
void parallel_for(std::size_t count, F&& body) {
    const int threads = std::max(1, std::min<int>(thread_count(), static_cast<int>(count)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<ProblemInstance> instances;
    for (const auto& path : config.instances) instances.push_back(load_instance(path));

    struct Cell {
        std::size_t instance;
        PipelineSpec pipeline;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (const auto& p : config.pipelines)
            for (auto seed : config.seeds) cells.push_back({i, PipelineSpec::parse(p), seed});

    std::vector<RunRecord> records(cells.size());
    std::vector<std::vector<VectorXd>> internal(cells.size());
    parallel_for(cells.size(), [&](std::size_t k) {
        const Cell& cell = cells[k];
        const ProblemInstance& inst = instances[cell.instance];
        RunRecord& rec = records[k];
        rec.config_hash = config.hash();
        rec.instance = inst.name;
        rec.pipeline = cell.pipeline.id();
        rec.seed = cell.seed;
        const fs::path dir = fs::path(config.output_dir) / inst.name / rec.pipeline;
        const std::string stem = "seed_" + std::to_string(cell.seed);
        try {
            const CellOutput out =
                run_cell(inst, cell.pipeline, cell.seed, config.phase1_budget(), config.sfsd_budget(), config.settings);
            rec.front_path = (dir / (stem + ".csv")).string();
            rec.phase1_path = (dir / (stem + "_phase1.csv")).string();
            write_front(rec.front_path, out.final_front);
            write_front(rec.phase1_path, out.phase1);
            if (config.trace) write_file_atomic((dir / (stem + "_trace.csv")).string(), trace_to_csv(out.trace));
            rec.phase1_seconds = out.phase1_seconds;
            rec.sfsd_seconds = out.sfsd_seconds;
            rec.sfsd_iterations = out.sfsd_iterations;
            rec.natural_termination = out.natural_termination;
            rec.points = out.final_front.rows.size();
            internal[k] = out.final_front.internal_values(inst.make_objectives());
        } catch (const Error& e) {
            rec.status = clean_cell(std::string("error: ") + e.what());
        }
    });

    // Best seed per (instance, pipeline) by hypervolume against the union of its seeds.
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < records.size(); ++k)
        if (records[k].status == "ok" && !internal[k].empty()) groups[{records[k].instance, records[k].pipeline}].push_back(k);
    for (const auto& [key, ks] : groups) {
        std::vector<Front> fronts;
        for (std::size_t k : ks) fronts.push_back(internal[k]);
        const VectorXd ref = reference_point(fronts);
        std::size_t best = ks.front();
        for (std::size_t k : ks) {
            records[k].hypervolume = hypervolume(internal[k], ref);
            if (records[k].hypervolume > records[best].hypervolume) best = k;
        }
        records[best].best = true;
    }
    write_file_atomic((fs::path(config.output_dir) / "runs.csv").string(), runs_to_csv(records));
    return records;
}

std::string runs_to_csv(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    out << "config_hash,instance,pipeline,seed,phase1_seconds,sfsd_seconds,sfsd_iterations,natural_termination,points,"
           "hypervolume,best,front_path,phase1_path,status\n";
    for (const auto& r : records)
        out << r.config_hash << ',' << r.instance << ',' << r.pipeline << ',' << r.seed << ','
            << format_double(r.phase1_seconds) << ',' << format_double(r.sfsd_seconds) << ',' << r.sfsd_iterations
            << ',' << (r.natural_termination ? 1 : 0) << ',' << r.points << ',' << format_double(r.hypervolume) << ','
            << (r.best ? 1 : 0) << ',' << r.front_path << ',' << r.phase1_path << ',' << clean_cell(r.status) << '\n';
    return out.str();
}

std::vector<RunRecord> runs_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<RunRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != 14) throw DataError("runs CSV line " + std::to_string(lineno) + ": expected 14 cells");
        RunRecord r;
        try {
            r.config_hash = c[0];
            r.instance = c[1];
            r.pipeline = c[2];
            r.seed = std::stoull(c[3]);
            r.phase1_seconds = c[4].empty() ? 0.0 : std::stod(c[4]);
            r.sfsd_seconds = c[5].empty() ? 0.0 : std::stod(c[5]);
            r.sfsd_iterations = std::stol(c[6]);
            r.natural_termination = c[7] == "1";
            r.points = std::stoul(c[8]);
            r.hypervolume = c[9].empty() ? 0.0 : std::stod(c[9]);
            r.best = c[10] == "1";
        } catch (const std::exception&) {
            throw DataError("runs CSV line " + std::to_string(lineno) + ": malformed number");
        }
        r.front_path = c[11];
        r.phase1_path = c[12];
        r.status = c[13];
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::string reference_path(const std::string& output_dir, const std::string& instance) {
    return (fs::path(output_dir) / instance / "reference.csv").string();
}

std::vector<ReferencePoint> reference_points(const FrontTable& t, const PortfolioObjectives& obj, const std::string& source) {
    std::vector<ReferencePoint> out;
    const Front F = t.internal_values(obj);
    for (std::size_t i = 0; i < t.rows.size(); ++i) out.push_back({F[i], support_of(t.rows[i].x), source, t.rows[i].x});
    return out;
}

}  // namespace

void build_references(const ExperimentConfig& config) {
    const auto records = runs_from_csv(read_file((fs::path(config.output_dir) / "runs.csv").string()));
    for (const auto& path : config.instances) {
        const ProblemInstance inst = load_instance(path);
        const PortfolioObjectives obj = inst.make_objectives();
        std::vector<std::vector<ReferencePoint>> runs;
        for (const auto& r : records) {
            if (r.instance != inst.name || r.status != "ok") continue;
            runs.push_back(reference_points(read_front(r.front_path), obj, r.pipeline));
        }
        for (int k = 0; k < config.extra_reference_runs; ++k) {
            const CellOutput extra = run_cell(inst, PipelineSpec::parse("nsga2-long"), 1000 + static_cast<std::uint64_t>(k),
                                              config.phase1_budget(), config.sfsd_budget(), config.settings);
            runs.push_back(reference_points(extra.final_front, obj, "nsga2-long"));
        }
        if (runs.empty()) throw ConfigError("reference: no successful runs for instance '" + inst.name + "'");
        const ReferenceFront ref = build_reference(runs);

        FrontTable table;
        for (const auto& p : ref.points) {
            FrontRow row;
            row.F = obj.natural_values(p.F);
            row.x = p.x;
            row.support = p.support;
            row.origin = p.source;
            table.rows.push_back(std::move(row));
        }
        write_front(reference_path(config.output_dir, inst.name), table);
    }
}

std::vector<MetricRow> compute_metrics(const ExperimentConfig& config, const std::vector<RunRecord>& records) {
    std::vector<MetricRow> rows;
    for (const auto& path : config.instances) {
        const ProblemInstance inst = load_instance(path);
        const PortfolioObjectives obj = inst.make_objectives();
        const FrontTable ref = read_front(reference_path(config.output_dir, inst.name));
        const Front ref_values = ref.internal_values(obj);
        std::vector<SupportSet> ref_supports;
        for (const auto& row : ref.rows) ref_supports.push_back(support_of(row.x));

        std::vector<std::string> solvers;
        std::vector<Front> fronts;
        std::vector<std::vector<SupportSet>> supports;
        for (const auto& r : records) {
            if (r.instance != inst.name || !r.best || r.status != "ok") continue;
            const FrontTable t = read_front(r.front_path);
            solvers.push_back(r.pipeline);
            fronts.push_back(t.internal_values(obj));
            std::vector<SupportSet> sup;
            for (const auto& row : t.rows) sup.push_back(support_of(row.x));
            supports.push_back(std::move(sup));
        }
        if (solvers.empty()) continue;
        const std::vector<double> pur = purity(fronts);
        const VectorXd hv_ref = reference_point({ref_values});
        for (std::size_t k = 0; k < solvers.size(); ++k) {
            MetricRow row;
            row.solver = solvers[k];
            row.problem = inst.name;
            row.purity = pur[k];
            row.gamma = gamma_spread(fronts[k]);
            row.hv = hypervolume(fronts[k], hv_ref);
            row.recall = ref_supports.empty() ? 0.0 : recall(supports[k], ref_supports);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_report(const std::vector<MetricRow>& rows, const std::string& output_dir) {
    std::ostringstream metrics;
    metrics << "solver,problem,purity,gamma,hv,recall\n";
    for (const auto& r : rows)
        metrics << r.solver << ',' << r.problem << ',' << format_double(r.purity) << ',' << format_double(r.gamma) << ','
                << format_double(r.hv) << ',' << format_double(r.recall) << '\n';
    write_file_atomic((fs::path(output_dir) / "metrics.csv").string(), metrics.str());

    std::vector<std::string> solvers, problems;
    for (const auto& r : rows) {
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) solvers.push_back(r.solver);
        if (std::find(problems.begin(), problems.end(), r.problem) == problems.end()) problems.push_back(r.problem);
    }
    auto profile = [&](const char* name, double MetricRow::*field, bool higher_is_better) {
        std::vector<std::vector<double>> values(solvers.size(), std::vector<double>(problems.size(), kInf));
        for (auto& row : values) std::fill(row.begin(), row.end(), std::nan(""));
        for (const auto& r : rows) {
            const auto s = std::find(solvers.begin(), solvers.end(), r.solver) - solvers.begin();
            const auto p = std::find(problems.begin(), problems.end(), r.problem) - problems.begin();
            values[s][p] = r.*field;
        }
        const auto curves = performance_profile(values, higher_is_better);
        std::ostringstream out;
        out << "solver,tau,fraction\n";
        for (std::size_t s = 0; s < solvers.size(); ++s)
            for (const auto& step : curves[s])
                out << solvers[s] << ',' << format_double(step.tau) << ',' << format_double(step.fraction) << '\n';
        write_file_atomic((fs::path(output_dir) / (std::string("profile_") + name + ".csv")).string(), out.str());
    };
    profile("purity", &MetricRow::purity, true);
    profile("hv", &MetricRow::hv, true);
    profile("gamma", &MetricRow::gamma, false);
}

}  // namespace sparsefront
