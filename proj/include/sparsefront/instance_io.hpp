#pragma once

// Problem instances and their JSON form.

#include "sparsefront/constraints.hpp"
#include "sparsefront/objectives.hpp"

#include <memory>
#include <string>

namespace sparsefront {

struct ProblemInstance {
    std::string name;
    int n = 0;
    int s = 0;
    ObjectiveSelection objectives;
    ConstraintSpec constraints;
    std::shared_ptr<const ObjectiveModel> model;

    PortfolioObjectives make_objectives() const { return PortfolioObjectives(model, objectives); }
    Polyhedron make_polyhedron() const { return build_polyhedron(constraints, *model, n); }
    /// Checks sizes and model invariants; throws ConfigError.
    void validate() const;
};

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// The three-asset, one-sparse instance with objectives
/// f1 = 2x1^2 + 0.5x2^2 + 3x3^2 and f2 = 4x1 + 5x2 + x3, both minimised.
ProblemInstance toy_instance();

}  // namespace sparsefront
