#include "sparsefront/objectives.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sparsefront {

int ObjectiveModel::n() const {
    if (c.size()) return static_cast<int>(c.size());
    if (Q.rows()) return static_cast<int>(Q.rows());
    if (esg.size()) return static_cast<int>(esg.size());
    if (beta.size()) return static_cast<int>(beta.size());
    if (centered_returns.cols()) return static_cast<int>(centered_returns.cols());
    if (!coskew.empty()) return static_cast<int>(std::lround(std::cbrt(static_cast<double>(coskew.size()))));
    return 0;
}

double ObjectiveModel::coskew_at(int i, int j, int k) const {
    const std::size_t n = static_cast<std::size_t>(this->n());
    return coskew[(static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n + static_cast<std::size_t>(k)];
}

void ObjectiveModel::validate() const {
    const int N = n();
    if (N <= 0) throw ConfigError("objective model has no assets");
    auto check_len = [&](const VectorXd& v, const char* name) {
        if (v.size() && v.size() != N) throw ConfigError(std::string(name) + " has wrong length");
    };
    check_len(c, "c");
    check_len(esg, "esg");
    check_len(beta, "beta");
    if (Q.size()) {
        if (Q.rows() != N || Q.cols() != N) throw ConfigError("Q must be n x n");
        if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw ConfigError("Q is not symmetric");
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Q, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8) throw ConfigError("Q is not positive semi-definite");
    }
    if (!coskew.empty()) {
        if (coskew.size() != static_cast<std::size_t>(N) * N * N) throw ConfigError("coskewness tensor must hold n^3 values");
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j)
                for (int k = j; k < N; ++k) {
                    const double v = coskew_at(i, j, k);
                    const double perms[5] = {coskew_at(i, k, j), coskew_at(j, i, k), coskew_at(j, k, i),
                                             coskew_at(k, i, j), coskew_at(k, j, i)};
                    for (double p : perms)
                        if (std::abs(p - v) > 1e-10) throw ConfigError("coskewness tensor is not symmetric");
                }
    }
    if (centered_returns.size() && centered_returns.cols() != N)
        throw ConfigError("centered returns have wrong width");
}

std::string to_string(ObjectiveId id) {
    switch (id) {
        case ObjectiveId::ER: return "ER";
        case ObjectiveId::V: return "V";
        case ObjectiveId::ESG: return "ESG";
        case ObjectiveId::SR: return "SR";
        case ObjectiveId::SW: return "SW";
    }
    return "?";
}

ObjectiveId parse_objective_id(const std::string& text) {
    if (text == "ER") return ObjectiveId::ER;
    if (text == "V") return ObjectiveId::V;
    if (text == "ESG") return ObjectiveId::ESG;
    if (text == "SR") return ObjectiveId::SR;
    if (text == "SW") return ObjectiveId::SW;
    throw ConfigError("unknown objective id '" + text + "'");
}

bool ObjectiveSpec::is_maximized() const {
    if (maximize) return *maximize;
    return id != ObjectiveId::V;
}

double default_scale(ObjectiveId id) {
    switch (id) {
        case ObjectiveId::ER:
        case ObjectiveId::V: return 1e2;
        case ObjectiveId::ESG: return 1e-2;
        case ObjectiveId::SW: return 1e-1;
        case ObjectiveId::SR: return 1.0;
    }
    return 1.0;
}

double eval_skewness(const ObjectiveModel& model, const VectorXd& x) {
    if (!model.coskew.empty()) {
        const int n = model.n();
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (x[i] == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                if (x[j] == 0.0) continue;
                const double xij = x[i] * x[j];
                const double* row = &model.coskew[(static_cast<std::size_t>(i) * n + j) * n];
                double inner = 0.0;
                for (int k = 0; k < n; ++k) inner += row[k] * x[k];
                total += xij * inner;
            }
        }
        return total;
    }
    const VectorXd p = model.centered_returns * x;
    return p.array().cube().mean();
}

VectorXd grad_skewness(const ObjectiveModel& model, const VectorXd& x) {
    const int n = model.n();
    if (!model.coskew.empty()) {
        VectorXd g = VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                if (x[j] == 0.0) continue;
                const double* row = &model.coskew[(static_cast<std::size_t>(i) * n + j) * n];
                double inner = 0.0;
                for (int k = 0; k < n; ++k) inner += row[k] * x[k];
                acc += x[j] * inner;
            }
            g[i] = 3.0 * acc;
        }
        return g;
    }
    const VectorXd p = model.centered_returns * x;
    const double T = static_cast<double>(model.centered_returns.rows());
    return 3.0 / T * (model.centered_returns.transpose() * p.array().square().matrix());
}

PortfolioObjectives::PortfolioObjectives(std::shared_ptr<const ObjectiveModel> model, ObjectiveSelection selection)
    : model_(std::move(model)), selection_(std::move(selection)) {
    if (!model_) throw ConfigError("missing objective model");
    if (selection_.empty()) throw ConfigError("at least one objective is required");
    for (const auto& spec : selection_) {
        if (!(spec.scale > 0.0)) throw ConfigError("objective scale factors must be strictly positive");
        const bool needs_c = spec.id == ObjectiveId::ER || spec.id == ObjectiveId::SR;
        const bool needs_Q = spec.id == ObjectiveId::V || spec.id == ObjectiveId::SR;
        if (needs_c && model_->c.size() == 0) throw ConfigError(to_string(spec.id) + " requires expected returns c");
        if (needs_Q && model_->Q.size() == 0) throw ConfigError(to_string(spec.id) + " requires covariance Q");
        if (spec.id == ObjectiveId::ESG && model_->esg.size() == 0) throw ConfigError("ESG requires esg scores");
        if (spec.id == ObjectiveId::SW && !model_->has_coskewness())
            throw ConfigError("SW requires a coskewness tensor");
    }
}

double PortfolioObjectives::raw(const ObjectiveSpec& spec, const VectorXd& x) const {
    const ObjectiveModel& m = *model_;
    switch (spec.id) {
        case ObjectiveId::ER: return m.c.dot(x);
        case ObjectiveId::V: return (spec.half ? 0.5 : 1.0) * x.dot(m.Q * x);
        case ObjectiveId::ESG: return m.esg.dot(x);
        case ObjectiveId::SR: {
            const double var = 0.5 * x.dot(m.Q * x);
            if (!(var > 0.0)) throw NumericalError("Sharpe ratio undefined at a zero-variance portfolio");
            return m.c.dot(x) / std::sqrt(var);
        }
        case ObjectiveId::SW: return eval_skewness(m, x);
    }
    return 0.0;
}

VectorXd PortfolioObjectives::raw_gradient(const ObjectiveSpec& spec, const VectorXd& x) const {
    const ObjectiveModel& m = *model_;
    switch (spec.id) {
        case ObjectiveId::ER: return m.c;
        case ObjectiveId::V: return (spec.half ? 1.0 : 2.0) * (m.Q * x);
        case ObjectiveId::ESG: return m.esg;
        case ObjectiveId::SR: {
            const VectorXd Qx = m.Q * x;
            const double var = 0.5 * x.dot(Qx);
            if (!(var > 0.0)) throw NumericalError("Sharpe ratio undefined at a zero-variance portfolio");
            const double sd = std::sqrt(var);
            return m.c / sd - (m.c.dot(x) / (2.0 * var * sd)) * Qx;
        }
        case ObjectiveId::SW: return grad_skewness(m, x);
    }
    return VectorXd::Zero(x.size());
}

VectorXd PortfolioObjectives::values(const VectorXd& x) const {
    VectorXd F(count());
    for (int j = 0; j < count(); ++j) {
        const auto& spec = selection_[j];
        F[j] = (spec.is_maximized() ? -spec.scale : spec.scale) * raw(spec, x);
    }
    return F;
}

MatrixXd PortfolioObjectives::jacobian(const VectorXd& x) const {
    MatrixXd G(count(), dim());
    for (int j = 0; j < count(); ++j) {
        const auto& spec = selection_[j];
        G.row(j) = (spec.is_maximized() ? -spec.scale : spec.scale) * raw_gradient(spec, x).transpose();
    }
    return G;
}

VectorXd PortfolioObjectives::raw_values(const VectorXd& x) const {
    VectorXd F(count());
    for (int j = 0; j < count(); ++j) F[j] = raw(selection_[j], x);
    return F;
}

VectorXd PortfolioObjectives::natural_values(const VectorXd& internal) const {
    VectorXd out = internal;
    for (int j = 0; j < count(); ++j)
        if (selection_[j].is_maximized()) out[j] = -out[j];
    return out;
}

bool PortfolioObjectives::is_convex_quadratic() const {
    for (const auto& spec : selection_) {
        if (spec.id == ObjectiveId::SR || spec.id == ObjectiveId::SW) return false;
        if (spec.id == ObjectiveId::V && spec.is_maximized()) return false;
    }
    return true;
}

ObjectiveModel estimate_model(const MatrixXd& returns, const VectorXd& market_returns, const VectorXd& esg_scores,
                              const EstimationOptions& opts) {
    const Eigen::Index T = returns.rows();
    const Eigen::Index n = returns.cols();
    if (T < 2) throw DataError("at least two return observations are required");
    if (market_returns.size() != T) throw DataError("market return series length differs from asset returns");
    if (esg_scores.size() && esg_scores.size() != n) throw DataError("one ESG score per asset is required");
    if (!returns.allFinite() || !market_returns.allFinite()) throw DataError("returns contain non-finite values");

    const double divisor = opts.population ? static_cast<double>(T) : static_cast<double>(T - 1);
    ObjectiveModel model;
    model.c = returns.colwise().mean().transpose();
    const MatrixXd centered = returns.rowwise() - model.c.transpose();
    model.Q = centered.transpose() * centered / divisor;
    model.Q = 0.5 * (model.Q + model.Q.transpose());
    model.esg = esg_scores;

    const double market_mean = market_returns.mean();
    const VectorXd mc = market_returns.array() - market_mean;
    const double market_var = mc.squaredNorm() / divisor;
    if (!(market_var > 0.0)) throw DataError("market returns have zero variance; betas are undefined");
    model.beta = centered.transpose() * mc / divisor / market_var;

    if (n <= opts.dense_coskew_limit) {
        const std::size_t N = static_cast<std::size_t>(n);
        model.coskew.assign(N * N * N, 0.0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j)
                for (Eigen::Index k = j; k < n; ++k) {
                    const double v =
                        (centered.col(i).array() * centered.col(j).array() * centered.col(k).array()).sum() / divisor;
                    const std::size_t a = i, b = j, cc = k;
                    const std::size_t idx[6][3] = {{a, b, cc}, {a, cc, b}, {b, a, cc}, {b, cc, a}, {cc, a, b}, {cc, b, a}};
                    for (const auto& p : idx) model.coskew[(p[0] * N + p[1]) * N + p[2]] = v;
                }
    } else {
        // mean over T of (a_t x)^3 equals x'C(x (x) x) once rows carry the divisor.
        model.centered_returns = centered * std::cbrt(static_cast<double>(T) / divisor);
    }
    return model;
}

}  // namespace sparsefront
