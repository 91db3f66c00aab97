#include "sparsefront/front_io.hpp"

#include "sparsefront/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sparsefront {

std::vector<VectorXd> FrontTable::internal_values(const PortfolioObjectives& obj) const {
    std::vector<VectorXd> out;
    for (const auto& r : rows) {
        VectorXd F = r.F;
        for (int j = 0; j < obj.count(); ++j)
            if (obj.selection()[j].is_maximized()) F[j] = -F[j];
        out.push_back(F);
    }
    return out;
}

std::vector<SupportSet> FrontTable::supports() const {
    std::vector<SupportSet> out;
    for (const auto& r : rows) out.push_back(r.support);
    return out;
}

FrontTable front_table(const FrontList& front, const PortfolioObjectives& obj,
                       const std::vector<std::string>& extra_columns, const std::map<std::size_t, VectorXd>& extra) {
    FrontTable t;
    t.extra_columns = extra_columns;
    for (const auto& e : front.entries()) {
        FrontRow r;
        r.F = obj.natural_values(e.point.F);
        r.x = e.point.x;
        r.support = e.point.J;
        r.theta = e.theta;
        r.origin = e.origin;
        if (const auto it = extra.find(e.id); it != extra.end())
            r.extra.assign(it->second.data(), it->second.data() + it->second.size());
        t.rows.push_back(std::move(r));
    }
    return t;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string front_to_csv(FrontTable table) {
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const FrontRow& a, const FrontRow& b) {
        if (a.support != b.support) return a.support < b.support;
        return a.F[0] < b.F[0];
    });
    const Eigen::Index m = table.rows.empty() ? 0 : table.rows.front().F.size();
    const Eigen::Index n = table.rows.empty() ? 0 : table.rows.front().x.size();
    std::ostringstream out;
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < m; ++j) header.push_back("f_" + std::to_string(j + 1));
    for (Eigen::Index i = 0; i < n; ++i) header.push_back("x_" + std::to_string(i + 1));
    header.insert(header.end(), {"support", "theta", "origin"});
    header.insert(header.end(), table.extra_columns.begin(), table.extra_columns.end());
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& r : table.rows) {
        for (Eigen::Index j = 0; j < m; ++j) out << format_double(r.F[j]) << ',';
        for (Eigen::Index i = 0; i < n; ++i) out << format_double(r.x[i]) << ',';
        out << r.support.to_string() << ',' << format_double(r.theta) << ',' << r.origin;
        for (std::size_t k = 0; k < table.extra_columns.size(); ++k)
            out << ',' << (k < r.extra.size() ? format_double(r.extra[k]) : std::string());
        out << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, std::size_t line) {
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw DataError("front CSV line " + std::to_string(line) + ": bad number '" + cell + "'");
    }
}

}  // namespace

FrontTable front_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("front CSV: empty file");
    const auto header = split(line);
    int m = 0, n = 0;
    std::size_t support_col = 0;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k].rfind("f_", 0) == 0) ++m;
        else if (header[k].rfind("x_", 0) == 0) ++n;
        else if (header[k] == "support") support_col = k;
    }
    if (support_col != static_cast<std::size_t>(m + n) || header.size() < support_col + 3)
        throw DataError("front CSV: unexpected header");
    FrontTable t;
    t.extra_columns.assign(header.begin() + support_col + 3, header.end());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw DataError("front CSV line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                            " cells, found " + std::to_string(cells.size()));
        FrontRow r;
        r.F.resize(m);
        r.x.resize(n);
        for (int j = 0; j < m; ++j) r.F[j] = parse_cell(cells[j], lineno);
        for (int i = 0; i < n; ++i) r.x[i] = parse_cell(cells[m + i], lineno);
        r.support = SupportSet::parse(cells[support_col]);
        r.theta = parse_cell(cells[support_col + 1], lineno);
        r.origin = cells[support_col + 2];
        for (std::size_t k = support_col + 3; k < cells.size(); ++k) r.extra.push_back(parse_cell(cells[k], lineno));
        t.rows.push_back(std::move(r));
    }
    return t;
}

void write_front(const std::string& path, const FrontTable& table) { write_file_atomic(path, front_to_csv(table)); }

FrontTable read_front(const std::string& path) { return front_from_csv(read_file(path)); }

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "solver,iteration,theta,gap,tau,eps\n";
    for (const auto& r : trace)
        out << r.solver << ',' << r.iteration << ',' << format_double(r.theta) << ',' << format_double(r.gap) << ','
            << format_double(r.tau) << ',' << format_double(r.eps) << '\n';
    return out.str();
}

}  // namespace sparsefront
