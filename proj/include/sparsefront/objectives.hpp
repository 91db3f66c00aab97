#pragma once

// Portfolio objectives (expected return, variance, ESG, Sharpe ratio,
// skewness), their gradients, and sample estimation of the model data.
//
// Internally everything is minimised: maximised objectives are negated at
// evaluation time and scaled by their scale factor. natural_values()
// restores the reporting orientation.

#include "sparsefront/model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sparsefront {

/// Vector-valued function R^n -> R^m with a Jacobian. All solvers consume
/// objectives through this interface.
class MultiObjective {
public:
    virtual ~MultiObjective() = default;
    virtual int dim() const = 0;
    virtual int count() const = 0;
    virtual VectorXd values(const VectorXd& x) const = 0;
    /// count() x dim() matrix of gradients, one row per objective.
    virtual MatrixXd jacobian(const VectorXd& x) const = 0;
};

struct ObjectiveModel {
    VectorXd c;        // expected returns
    MatrixXd Q;        // covariance
    VectorXd esg;      // ESG scores
    std::vector<double> coskew;  // dense n^3 tensor, row-major; empty if absent
    MatrixXd centered_returns;   // T x n; used for skewness when coskew is empty
    VectorXd beta;

    int n() const;
    bool has_coskewness() const { return !coskew.empty() || centered_returns.size() > 0; }

    /// Checks the symmetry / PSD / shape invariants; throws ConfigError.
    void validate() const;

    double coskew_at(int i, int j, int k) const;
};

enum class ObjectiveId { ER, V, ESG, SR, SW };

std::string to_string(ObjectiveId id);
ObjectiveId parse_objective_id(const std::string& text);

struct ObjectiveSpec {
    ObjectiveId id = ObjectiveId::V;
    double scale = 1.0;
    /// Orientation override; nullopt keeps the natural sense (V minimised,
    /// everything else maximised).
    std::optional<bool> maximize;
    /// V only: when false the variance term is the raw form x'Qx.
    bool half = true;

    bool is_maximized() const;
};

using ObjectiveSelection = std::vector<ObjectiveSpec>;

/// Default scale factors: 1e2 for V and ER, 1e-2 for ESG, 1e-1 for SW, 1 for SR.
double default_scale(ObjectiveId id);

class PortfolioObjectives final : public MultiObjective {
public:
    PortfolioObjectives(std::shared_ptr<const ObjectiveModel> model, ObjectiveSelection selection);

    int dim() const override { return model_->n(); }
    int count() const override { return static_cast<int>(selection_.size()); }
    VectorXd values(const VectorXd& x) const override;
    MatrixXd jacobian(const VectorXd& x) const override;

    /// Unscaled values in their natural orientation.
    VectorXd raw_values(const VectorXd& x) const;
    /// Converts internal (minimisation, scaled) values to natural orientation (scaled).
    VectorXd natural_values(const VectorXd& internal) const;

    const ObjectiveModel& model() const { return *model_; }
    const ObjectiveSelection& selection() const { return selection_; }

    /// True when every selected objective is linear or convex quadratic.
    bool is_convex_quadratic() const;

private:
    double raw(const ObjectiveSpec& spec, const VectorXd& x) const;
    VectorXd raw_gradient(const ObjectiveSpec& spec, const VectorXd& x) const;

    std::shared_ptr<const ObjectiveModel> model_;
    ObjectiveSelection selection_;
};

double eval_skewness(const ObjectiveModel& model, const VectorXd& x);
VectorXd grad_skewness(const ObjectiveModel& model, const VectorXd& x);

struct EstimationOptions {
    /// Divide second and third moments by T (true) or T-1.
    bool population = true;
    /// Above this many assets the coskewness tensor is not materialised;
    /// skewness is contracted from the centered returns instead.
    int dense_coskew_limit = 128;
};

/// Sample estimates from a T x n return matrix and a market return series.
ObjectiveModel estimate_model(const MatrixXd& returns, const VectorXd& market_returns, const VectorXd& esg_scores,
                              const EstimationOptions& opts = {});

}  // namespace sparsefront
