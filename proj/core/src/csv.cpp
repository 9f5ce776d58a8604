#include "gcov/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gcov {
namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& s, double* out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    // literal inf/nan cells count as missing data, not numbers
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        return false;
    *out = v;
    return true;
}

}  // namespace

SeriesMatrix load_csv(const std::string& path,
                      const std::vector<std::string>& column_spec) {
    std::ifstream in(path);
    if (!in) throw EmptyInput("cannot open '" + path + "'");

    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    bool first_data_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> cells = split_row(line);

        if (first_data_row) {
            bool all_numeric = true;
            double tmp;
            for (const auto& c : cells)
                if (!parse_double(c, &tmp)) {
                    all_numeric = false;
                    break;
                }
            if (!all_numeric && rows.empty() && header.empty()) {
                header = cells;
                continue;
            }
            first_data_row = false;
        }

        std::vector<double> row(cells.size());
        for (size_t j = 0; j < cells.size(); ++j)
            if (!parse_double(cells[j], &row[j]))
                throw ParseError("non-numeric cell '" + cells[j] + "' at line " +
                                     std::to_string(line_no) + ", column " +
                                     std::to_string(j + 1),
                                 line_no, static_cast<long>(j + 1));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row width changed at line " + std::to_string(line_no),
                             line_no, static_cast<long>(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyInput("no data rows in '" + path + "'");

    const auto n_cols = rows.front().size();
    std::vector<size_t> selected;
    if (column_spec.empty()) {
        for (size_t j = 0; j < n_cols; ++j) selected.push_back(j);
    } else {
        for (const auto& spec : column_spec) {
            const auto it = std::find(header.begin(), header.end(), spec);
            if (it != header.end()) {
                selected.push_back(static_cast<size_t>(it - header.begin()));
                continue;
            }
            double idx;
            if (parse_double(spec, &idx) && idx >= 0 && idx < n_cols &&
                idx == std::floor(idx)) {
                selected.push_back(static_cast<size_t>(idx));
                continue;
            }
            throw ParseError("unknown column '" + spec + "'", 0, 0);
        }
    }

    Eigen::MatrixXd values(selected.size(), rows.size());
    for (size_t t = 0; t < rows.size(); ++t)
        for (size_t k = 0; k < selected.size(); ++k)
            values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
                rows[t][selected[k]];
    return SeriesMatrix(std::move(values));
}

void save_csv(const std::string& path, const SeriesMatrix& series,
              const std::vector<std::string>& column_names) {
    std::ofstream out(path);
    if (!out) throw EmptyInput("cannot write '" + path + "'");
    const Eigen::MatrixXd& v = series.values();

    if (!column_names.empty()) {
        for (Eigen::Index k = 0; k < v.rows(); ++k)
            out << (k ? "," : "")
                << (k < static_cast<Eigen::Index>(column_names.size())
                        ? column_names[k]
                        : "y" + std::to_string(k + 1));
        out << "\n";
    } else {
        for (Eigen::Index k = 0; k < v.rows(); ++k)
            out << (k ? "," : "") << "y" << (k + 1);
        out << "\n";
    }

    out.precision(17);
    for (Eigen::Index t = 0; t < v.cols(); ++t) {
        for (Eigen::Index k = 0; k < v.rows(); ++k)
            out << (k ? "," : "") << v(k, t);
        out << "\n";
    }
}

}  // namespace gcov
