#include "test_util.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

using namespace sparsefront;
namespace fs = std::filesystem;

namespace {

const char* kPrices =
    "date,MKT,A,B\n"
    "2024-01-01,50,100,100\n"
    "2024-01-02,55,110,120\n"
    "2024-01-03,49.5,99,120\n"
    "2024-01-04,49.5,99,132\n";

const char* kEsg = "ticker,score\nA,40\nB,60\n";

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sparsefront_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

IngestOptions ingest_options() {
    IngestOptions o;
    o.name = "tiny";
    o.market_column = "MKT";
    o.instance_fields = R"({"s": 1})";
    return o;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

double toy_recall(const CellOutput& out) {
    const PortfolioObjectives obj = toy_instance().make_objectives();
    std::vector<SupportSet> reference;
    for (int i = 0; i < 3; ++i) reference.push_back(SupportSet({i}));
    std::vector<SupportSet> found;
    for (const auto& row : out.final_front.rows) found.push_back(support_of(row.x));
    return recall(found, reference);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPARSEFRONT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("ingest estimates the three-period example") {
    const ProblemInstance inst = ingest(kPrices, kEsg, ingest_options());
    REQUIRE(inst.n == 2);
    CHECK(inst.s == 1);
    CHECK(std::abs(inst.model->c[0]) < 1e-15);
    CHECK(inst.model->c[1] == doctest::Approx(0.1));
    CHECK(inst.model->Q(0, 0) == doctest::Approx(0.02 / 3.0));
    CHECK(inst.model->Q(0, 1) == doctest::Approx(0.02 / 3.0));
    CHECK(inst.model->beta[0] == doctest::Approx(1.0));
    CHECK(inst.model->esg[1] == 60.0);
}

TEST_CASE("ingest rejects malformed input with line numbers") {
    const IngestOptions o = ingest_options();
    CHECK(message_of([&] { ingest("date,MKT,A,B\n2024-01-01,50,100,100\n2024-01-02,55,110,120\n", kEsg, o); })
              .find("two return periods") != std::string::npos);
    CHECK(message_of([&] { ingest("date,MKT,A,B\n2024-01-01,50,100,100\n", kEsg, o); }).find("two price rows") !=
          std::string::npos);
    const std::string bad_price = "date,MKT,A,B\n2024-01-01,50,100,100\n2024-01-02,55,-1,120\n2024-01-03,1,1,1\n";
    CHECK(message_of([&] { ingest(bad_price, kEsg, o); }).find("line 3") != std::string::npos);
    const std::string bad_date = "date,MKT,A,B\n2024-01-01,50,100,100\n2024/01/02,55,1,120\n";
    CHECK(message_of([&] { ingest(bad_date, kEsg, o); }).find("line 3") != std::string::npos);
    const std::string unordered = "date,MKT,A,B\n2024-01-02,50,100,100\n2024-01-01,55,1,120\n";
    CHECK(message_of([&] { ingest(unordered, kEsg, o); }).find("line 3") != std::string::npos);
    const std::string short_row = "date,MKT,A,B\n2024-01-01,50,100\n";
    CHECK(message_of([&] { ingest(short_row, kEsg, o); }).find("line 2") != std::string::npos);
    CHECK_THROWS_AS(ingest(kPrices, "ticker,score\nA,40\n", o), DataError);
    IngestOptions no_s = o;
    no_s.instance_fields = "{}";
    CHECK_THROWS_AS(ingest(kPrices, kEsg, no_s), ConfigError);
    IngestOptions clash = o;
    clash.instance_fields = R"({"s": 1, "c": [1, 2]})";
    CHECK_THROWS_AS(ingest(kPrices, kEsg, clash), ConfigError);
}

TEST_CASE("instance JSON round trip") {
    ProblemInstance inst = testutil::mean_variance_instance("rt", 5, 2, 3);
    inst.constraints.upper = VectorXd::Constant(5, 0.6);
    inst.constraints.sectors.push_back({{0, 1}, 0.1, 0.7});
    const ProblemInstance back = instance_from_json(instance_to_json(inst));
    CHECK(back.n == 5);
    CHECK(back.s == 2);
    CHECK(back.model->Q == inst.model->Q);
    CHECK(back.model->c == inst.model->c);
    CHECK(back.constraints.sectors.size() == 1);
    CHECK(instance_to_json(back) == instance_to_json(inst));
    CHECK_THROWS_AS(instance_from_json(R"({"n": 2})"), ConfigError);
}

TEST_CASE("front CSV round trip keeps every digit") {
    const ProblemInstance inst = toy_instance();
    const PortfolioObjectives obj = inst.make_objectives();
    FrontList X;
    X.insert({(VectorXd(3) << 0.1, 0.0, 0.9).finished(), obj.values((VectorXd(3) << 0.1, 0.0, 0.9).finished()),
              SupportSet({0, 2})},
             "scal");
    X.insert({testutil::basis(3, 1), obj.values(testutil::basis(3, 1)), SupportSet({1})}, "mohyb");
    const FrontTable t = front_table(X, obj);
    const std::string csv = front_to_csv(t);
    CHECK(csv.rfind("f_1,f_2,x_1,x_2,x_3,support,theta,origin\n", 0) == 0);
    const FrontTable back = front_from_csv(csv);
    REQUIRE(back.rows.size() == 2);
    CHECK(front_to_csv(back) == csv);
    CHECK(back.rows[0].support == SupportSet({0, 2}));
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(kInf) == "inf");
    CHECK(format_double(std::nan("")) == "");
}

TEST_CASE("toy pipelines recover the documented supports") {
    const ProblemInstance inst = toy_instance();
    const Budget unlimited = Budget::iterations_only(1000);
    const CellOutput scal = run_cell(inst, PipelineSpec::parse("scal+sfsd"), 0, unlimited, unlimited);
    CHECK(toy_recall(scal) == doctest::Approx(2.0 / 3.0));
    CHECK(scal.final_front.rows.size() == 2);
    const CellOutput hyb = run_cell(inst, PipelineSpec::parse("mohyb+sfsd"), 0, unlimited, unlimited);
    CHECK(toy_recall(hyb) == 1.0);
    CHECK(hyb.final_front.rows.size() == 3);
}

TEST_CASE("zero SFSD budget returns the phase-one front") {
    const ProblemInstance inst = testutil::mean_variance_instance("z", 6, 2, 8);
    const CellOutput out =
        run_cell(inst, PipelineSpec::parse("mohyb+sfsd"), 1, Budget::iterations_only(4), Budget::iterations_only(0));
    CHECK(out.sfsd_iterations == 0);
    REQUIRE(out.final_front.rows.size() == out.phase1.rows.size());
    FrontTable a = out.phase1, b = out.final_front;
    for (auto& r : a.rows) r.theta = std::nan("");
    for (auto& r : b.rows) r.theta = std::nan("");
    CHECK(front_to_csv(a) == front_to_csv(b));
}

TEST_CASE("phase-one entries carry size-s super supports") {
    const ProblemInstance inst = testutil::mean_variance_instance("j", 7, 3, 9);
    const Polyhedron P = inst.make_polyhedron();
    for (const char* p : {"scal", "mohyb", "nsga2", "nsma"}) {
        const CellOutput out = run_cell(inst, PipelineSpec::parse(p), 2, Budget::iterations_only(3), {});
        for (const auto& row : out.phase1.rows) {
            CHECK(row.support.size() == 3);
            CHECK(row.support.includes(support_of(row.x)));
            CHECK(is_feasible(row.x, P, 3));
        }
    }
}

TEST_CASE("pipeline ids parse and print") {
    CHECK(PipelineSpec::parse("mohyb+sfsd").id() == "mohyb+sfsd");
    CHECK(PipelineSpec::parse("nsma").id() == "nsma");
    CHECK(PipelineSpec::parse("nsga2-long").id() == "nsga2-long");
    CHECK_THROWS_AS(PipelineSpec::parse("moead"), ConfigError);
    CHECK_THROWS_AS(PipelineSpec::parse("nsga2-long+sfsd"), ConfigError);
}

TEST_CASE("experiment outputs are deterministic and reports are complete") {
    const fs::path dir = scratch_dir("experiment");
    save_instance(toy_instance(), (dir / "toy.json").string());
    save_instance(testutil::mean_variance_instance("mv", 6, 2, 10), (dir / "mv.json").string());
    const std::string config = R"({
        "instances": ["toy.json", "mv.json"],
        "pipelines": ["scal+sfsd", "mohyb+sfsd", "nsga2+sfsd", "nsma+sfsd"],
        "seeds": [0, 1],
        "phase1_iterations": 3,
        "sfsd_iterations": 3,
        "population": 16,
        "output_dir": "out"
    })";
    write(dir / "config.json", config);
    const ExperimentConfig c = load_config((dir / "config.json").string());
    CHECK(c.output_dir == (dir / "out").string());

    const auto first = run_experiment(c);
    REQUIRE(first.size() == 16);
    std::map<std::string, std::string> snapshot;
    for (const auto& r : first) {
        CHECK(r.status == "ok");
        snapshot[r.front_path] = read_file(r.front_path);
    }
    const auto second = run_experiment(c);
    for (const auto& r : second) CHECK(read_file(r.front_path) == snapshot[r.front_path]);
    CHECK(runs_from_csv(runs_to_csv(first)).size() == first.size());

    build_references(c);
    const auto rows = compute_metrics(c, runs_from_csv(read_file((dir / "out" / "runs.csv").string())));
    CHECK(rows.size() == 8);
    write_report(rows, c.output_dir);
    for (const char* f : {"metrics.csv", "profile_purity.csv", "profile_hv.csv", "profile_gamma.csv"})
        CHECK(fs::exists(dir / "out" / f));
    for (const auto& row : rows)
        if (row.problem == "toy") CHECK(row.recall == doctest::Approx(row.solver == "scal+sfsd" ? 2.0 / 3.0 : 1.0));
    fs::remove_all(dir);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(ExperimentConfig::from_json("{"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"instances": []})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"instances": ["a.json"], "pipelines": ["bogus"]})"), ConfigError);
    const ExperimentConfig a = ExperimentConfig::from_json(R"({"instances": ["a.json"], "output_dir": "x"})");
    const ExperimentConfig b = ExperimentConfig::from_json(R"({"instances": ["a.json"], "output_dir": "y"})");
    const ExperimentConfig c = ExperimentConfig::from_json(R"({"instances": ["a.json"], "seeds": [4]})");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
}

TEST_CASE("command line exit codes") {
    const fs::path dir = scratch_dir("cli");
    write(dir / "prices.csv", kPrices);
    write(dir / "esg.csv", kEsg);
    write(dir / "ingest.json", R"({"prices": "prices.csv", "esg": "esg.csv", "market_column": "MKT",
                                  "name": "tiny", "instance": {"s": 1}})");
    CHECK(run_cli("ingest --config " + (dir / "ingest.json").string() + " --out " + (dir / "tiny.json").string()) == 0);
    CHECK(load_instance((dir / "tiny.json").string()).n == 2);

    write(dir / "bad_ingest.json", R"({"prices": "prices.csv", "esg": "esg.csv", "market_column": "NOPE",
                                      "instance": {"s": 1}})");
    CHECK(run_cli("ingest --config " + (dir / "bad_ingest.json").string()) == 2);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("frobnicate") == 2);

    save_instance(toy_instance(), (dir / "toy.json").string());
    write(dir / "run.json", R"({"instances": ["toy.json"], "pipelines": ["mohyb+sfsd"], "seeds": [0],
                               "phase1_iterations": 3, "sfsd_iterations": 3, "output_dir": "out"})");
    const std::string cfg = (dir / "run.json").string();
    CHECK(run_cli("run --config " + cfg + " --trace") == 0);
    CHECK(fs::exists(dir / "out" / "toy" / "mohyb+sfsd" / "seed_0.csv"));
    CHECK(fs::exists(dir / "out" / "toy" / "mohyb+sfsd" / "seed_0_trace.csv"));
    CHECK(run_cli("reference --config " + cfg) == 0);
    CHECK(run_cli("report --config " + cfg) == 0);
    CHECK(fs::exists(dir / "out" / "metrics.csv"));
    fs::remove_all(dir);
}
