#pragma once

// Front CSV files: f_1..f_m (natural orientation), x_1..x_n, support,
// theta, origin, then any extra numeric columns. Rows are ordered by
// support, then f_1 ascending.

#include "sparsefront/descent.hpp"
#include "sparsefront/model.hpp"
#include "sparsefront/objectives.hpp"

#include <map>
#include <string>
#include <vector>

namespace sparsefront {

struct FrontRow {
    VectorXd F;  // natural orientation
    VectorXd x;
    SupportSet support;
    double theta = std::numeric_limits<double>::quiet_NaN();
    std::string origin;
    std::vector<double> extra;
};

struct FrontTable {
    std::vector<std::string> extra_columns;
    std::vector<FrontRow> rows;

    /// Internal (minimisation) values, recovered using the objective orientation.
    std::vector<VectorXd> internal_values(const PortfolioObjectives& obj) const;
    std::vector<SupportSet> supports() const;
};

/// Rows for every entry; `extra` supplies per-entry extra columns by id.
FrontTable front_table(const FrontList& front, const PortfolioObjectives& obj,
                       const std::vector<std::string>& extra_columns = {},
                       const std::map<std::size_t, VectorXd>& extra = {});

std::string format_double(double v);

std::string front_to_csv(FrontTable table);
FrontTable front_from_csv(const std::string& text);

void write_front(const std::string& path, const FrontTable& table);
FrontTable read_front(const std::string& path);

std::string trace_to_csv(const Trace& trace);

}  // namespace sparsefront
