#include "sparsefront/instance_io.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sparsefront {

using nlohmann::json;

void ProblemInstance::validate() const {
    if (!model) throw ConfigError("instance '" + name + "': missing model");
    if (n < 1) throw ConfigError("instance '" + name + "': n must be positive");
    if (s < 1 || s >= n) throw ConfigError("instance '" + name + "': s must satisfy 1 <= s < n");
    if (model->n() != n) throw ConfigError("instance '" + name + "': model size differs from n");
    if (objectives.empty()) throw ConfigError("instance '" + name + "': no objectives selected");
    model->validate();
    constraints.validate(n);
}

namespace {

json vec_json(const VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::isfinite(v[i])) a.push_back(v[i]);
        else a.push_back(nullptr);
    }
    return a;
}

VectorXd json_vec(const json& a, const char* field, double null_value = kInf) {
    if (!a.is_array()) throw ConfigError(std::string("instance field '") + field + "' must be an array");
    VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].is_null() ? null_value : a[i].get<double>();
    return v;
}

MatrixXd json_mat(const json& a, const char* field) {
    if (!a.is_array()) throw ConfigError(std::string("instance field '") + field + "' must be an array of rows");
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    MatrixXd M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (a[i].size() != cols) throw ConfigError(std::string("instance field '") + field + "' is ragged");
        for (std::size_t j = 0; j < cols; ++j) M(i, j) = a[i][j].get<double>();
    }
    return M;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& inst) {
    const ObjectiveModel& m = *inst.model;
    json j;
    j["name"] = inst.name;
    j["n"] = inst.n;
    j["s"] = inst.s;
    json objs = json::array();
    for (const auto& spec : inst.objectives) {
        json o{{"id", to_string(spec.id)}, {"scale", spec.scale}};
        if (spec.maximize) o["maximize"] = *spec.maximize;
        if (spec.id == ObjectiveId::V && !spec.half) o["half"] = false;
        objs.push_back(o);
    }
    j["objectives"] = objs;
    j["c"] = vec_json(m.c);
    json Q = json::array();
    for (Eigen::Index i = 0; i < m.Q.rows(); ++i) Q.push_back(vec_json(m.Q.row(i).transpose()));
    j["Q"] = Q;
    j["esg"] = vec_json(m.esg);
    j["coskew"] = m.coskew.empty() ? json(nullptr) : json(m.coskew);
    if (m.coskew.empty() && m.centered_returns.size() > 0) {
        json R = json::array();
        for (Eigen::Index t = 0; t < m.centered_returns.rows(); ++t)
            R.push_back(vec_json(m.centered_returns.row(t).transpose()));
        j["centered_returns"] = R;
    }
    j["beta"] = vec_json(m.beta);
    const ConstraintSpec& cs = inst.constraints;
    j["beta_min"] = cs.beta_window ? json(cs.beta_window->first) : json(nullptr);
    j["beta_max"] = cs.beta_window ? json(cs.beta_window->second) : json(nullptr);
    j["lower"] = vec_json(cs.lower.size() ? cs.lower : VectorXd::Zero(inst.n));
    j["upper"] = vec_json(cs.upper.size() ? cs.upper : VectorXd::Constant(inst.n, kInf));
    json sectors = json::array();
    for (const auto& sec : cs.sectors) sectors.push_back({{"indices", sec.indices}, {"min", sec.min}, {"max", sec.max}});
    j["sectors"] = sectors;
    j["turnover"] = cs.turnover ? json{{"x0", vec_json(cs.turnover->x0)}, {"tau", cs.turnover->tau}} : json(nullptr);
    return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("instance JSON: ") + e.what());
    }
    ProblemInstance inst;
    try {
        inst.name = j.value("name", std::string("instance"));
        inst.n = j.at("n").get<int>();
        inst.s = j.at("s").get<int>();
        for (const auto& o : j.at("objectives")) {
            ObjectiveSpec spec;
            spec.id = parse_objective_id(o.at("id").get<std::string>());
            spec.scale = o.contains("scale") ? o["scale"].get<double>() : default_scale(spec.id);
            if (o.contains("maximize")) spec.maximize = o["maximize"].get<bool>();
            spec.half = o.value("half", true);
            inst.objectives.push_back(spec);
        }
        auto model = std::make_shared<ObjectiveModel>();
        model->c = json_vec(j.at("c"), "c");
        model->Q = json_mat(j.at("Q"), "Q");
        model->esg = j.contains("esg") && !j["esg"].is_null() ? json_vec(j["esg"], "esg") : VectorXd::Zero(inst.n);
        if (j.contains("coskew") && !j["coskew"].is_null()) model->coskew = j["coskew"].get<std::vector<double>>();
        if (j.contains("centered_returns") && !j["centered_returns"].is_null())
            model->centered_returns = json_mat(j["centered_returns"], "centered_returns");
        model->beta = j.contains("beta") && !j["beta"].is_null() ? json_vec(j["beta"], "beta") : VectorXd::Zero(inst.n);
        inst.model = model;

        ConstraintSpec& cs = inst.constraints;
        if (j.contains("lower") && !j["lower"].is_null()) cs.lower = json_vec(j["lower"], "lower", 0.0);
        if (j.contains("upper") && !j["upper"].is_null()) cs.upper = json_vec(j["upper"], "upper");
        const bool has_min = j.contains("beta_min") && !j["beta_min"].is_null();
        const bool has_max = j.contains("beta_max") && !j["beta_max"].is_null();
        if (has_min || has_max)
            cs.beta_window = std::make_pair(has_min ? j["beta_min"].get<double>() : 0.0,
                                            has_max ? j["beta_max"].get<double>() : kInf);
        if (j.contains("sectors"))
            for (const auto& sec : j["sectors"])
                cs.sectors.push_back({sec.at("indices").get<std::vector<int>>(), sec.value("min", 0.0), sec.value("max", 1.0)});
        if (j.contains("turnover") && !j["turnover"].is_null())
            cs.turnover = TurnoverConstraint{json_vec(j["turnover"].at("x0"), "turnover.x0"), j["turnover"].at("tau").get<double>()};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("instance JSON: ") + e.what());
    }
    inst.validate();
    return inst;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

ProblemInstance load_instance(const std::string& path) { return instance_from_json(read_file(path)); }

void save_instance(const ProblemInstance& inst, const std::string& path) { write_file_atomic(path, instance_to_json(inst)); }

ProblemInstance toy_instance() {
    auto model = std::make_shared<ObjectiveModel>();
    model->Q = VectorXd((VectorXd(3) << 2.0, 0.5, 3.0).finished()).asDiagonal();
    model->c = (VectorXd(3) << 4.0, 5.0, 1.0).finished();
    model->esg = VectorXd::Zero(3);
    model->beta = VectorXd::Zero(3);
    ProblemInstance inst;
    inst.name = "toy";
    inst.n = 3;
    inst.s = 1;
    inst.model = model;
    ObjectiveSpec variance{ObjectiveId::V, 1.0, std::nullopt, false};
    ObjectiveSpec ret{ObjectiveId::ER, 1.0, false, true};
    inst.objectives = {variance, ret};
    return inst;
}

}  // namespace sparsefront
