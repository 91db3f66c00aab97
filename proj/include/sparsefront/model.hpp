#pragma once

// Core data model: support sets, Pareto dominance, and the per-support
// front list that every solver in the library writes into.

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsefront {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// |x_i| above this counts as a nonzero weight.
inline constexpr double kSupportTolerance = 1e-7;
/// Slack allowed on linear rows when testing feasibility.
inline constexpr double kFeasibilityTolerance = 1e-8;
/// A direction subproblem value below this is treated as a descent.
inline constexpr double kThetaTolerance = -1e-7;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy. The CLI maps ConfigError to exit code 2 and every
// NumericalError to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class ConfigError : public Error {
public:
    using Error::Error;
};
class DataError : public ConfigError {
public:
    using ConfigError::ConfigError;
};
class InfeasibleError : public Error {
public:
    using Error::Error;
};
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sorted set of 0-based asset indices.
class SupportSet {
public:
    SupportSet() = default;
    explicit SupportSet(std::vector<int> indices);

    const std::vector<int>& indices() const { return idx_; }
    std::size_t size() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    bool contains(int i) const;
    bool includes(const SupportSet& other) const;

    /// Semicolon-joined indices, e.g. "0;3;7".
    std::string to_string() const;
    static SupportSet parse(const std::string& text);

    auto operator<=>(const SupportSet&) const = default;
    bool operator==(const SupportSet&) const = default;

private:
    std::vector<int> idx_;
};

SupportSet support_of(const VectorXd& x, double tol = kSupportTolerance);

/// Every s-element superset of support_of(x). Enumeration stops at
/// kMaxSuperSupports sets; past that cap the single completion using the
/// smallest-index zeros is returned instead.
inline constexpr std::size_t kMaxSuperSupports = 10000;
std::vector<SupportSet> super_supports(const VectorXd& x, int s, double tol = kSupportTolerance);

/// Completion of support_of(x) with the smallest-index zero coordinates.
SupportSet first_super_support(const VectorXd& x, int s, double tol = kSupportTolerance);

enum class Relation { Dominates, Dominated, Equal, Incomparable };

/// Relation of a to b under componentwise <= with strictness somewhere.
Relation compare(const VectorXd& a, const VectorXd& b);

/// a dominates b, i.e. a <= b componentwise and a != b.
bool dominates(const VectorXd& a, const VectorXd& b);

/// Indices of the points no other point strictly dominates, ascending.
std::vector<std::size_t> nondominated_filter(const std::vector<VectorXd>& points);

/// NSGA-II crowding distance with per-objective range normalisation.
std::vector<double> crowding_distance(const std::vector<VectorXd>& front);

struct EvaluatedPoint {
    VectorXd x;
    VectorXd F;
    SupportSet J;
};

/// Evaluated points grouped by super support set. Within one group no entry
/// dominates another; a candidate that is dominated by, or equal to, an
/// incumbent of its group is rejected.
class FrontList {
public:
    struct Entry {
        std::size_t id = 0;
        EvaluatedPoint point;
        std::string origin;
        double theta = std::numeric_limits<double>::quiet_NaN();
    };

    /// Inserts p, dropping incumbents of the same group that p dominates.
    /// Returns the id assigned to p, or nullopt if p was rejected.
    std::optional<std::size_t> insert(EvaluatedPoint p, std::string origin = {});

    /// Would insert() accept a point with these values in group J?
    bool accepts(const VectorXd& F, const SupportSet& J) const;

    bool contains(std::size_t id) const;
    const Entry* find(std::size_t id) const;
    void set_theta(std::size_t id, double theta);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<const Entry*> group(const SupportSet& J) const;
    std::vector<SupportSet> supports() const;

    /// Objective vectors of all entries, in storage order.
    std::vector<VectorXd> objective_vectors() const;

    /// Entries that survive a nondominance filter across all groups.
    std::vector<Entry> global_front() const;

private:
    std::vector<Entry> entries_;
    std::size_t next_id_ = 0;
};

}  // namespace sparsefront
