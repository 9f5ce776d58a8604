#pragma once

#include <string>
#include <vector>

#include "gcov/series.hpp"

namespace gcov {

/**
 * @brief Load a numeric CSV into a K x T series (file columns become rows).
 *
 * A header row is auto-detected: if the first row has any non-numeric cell it
 * is treated as column names. Columns may be selected by zero-based index or
 * by header name; an empty spec selects all columns. Any non-numeric or
 * missing cell in a data row is an error naming the line and column.
 *
 * @throws ParseError, EmptyInput
 */
SeriesMatrix load_csv(const std::string& path,
                      const std::vector<std::string>& column_spec = {});

/// Write a series as CSV, one row per time point, with a header line.
void save_csv(const std::string& path, const SeriesMatrix& series,
              const std::vector<std::string>& column_names = {});

}  // namespace gcov
