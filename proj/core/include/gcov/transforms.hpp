#pragma once

#include <vector>

#include "gcov/series.hpp"

namespace gcov {

enum class TransformKind {
    identity,
    abs,
    square,
    cube,
    sign,
    power,      ///< |u|^lambda is not implied: u^lambda, positive input required
    indicator,  ///< bin membership against strictly increasing edges
};

/**
 * @brief One entry of a transform stack applied to a residual series.
 *
 * An indicator with m edges partitions the line into m+1 bins and emits the
 * first m bin-membership rows (the last bin is dropped since memberships sum
 * to one).
 */
struct TransformTag {
    TransformKind kind = TransformKind::identity;
    double lambda = 1.0;              ///< exponent, for kind == power
    std::vector<double> edges;        ///< bin edges, for kind == indicator

    static TransformTag identity() { return {TransformKind::identity, 1.0, {}}; }
    static TransformTag abs() { return {TransformKind::abs, 1.0, {}}; }
    static TransformTag square() { return {TransformKind::square, 1.0, {}}; }
    static TransformTag cube() { return {TransformKind::cube, 1.0, {}}; }
    static TransformTag sign() { return {TransformKind::sign, 1.0, {}}; }
    static TransformTag power(double lambda) { return {TransformKind::power, lambda, {}}; }
    static TransformTag indicator(std::vector<double> edges) {
        return {TransformKind::indicator, 1.0, std::move(edges)};
    }

    /// Number of output rows this tag produces per input row.
    Eigen::Index rows_per_input() const {
        return kind == TransformKind::indicator
                   ? static_cast<Eigen::Index>(edges.size())
                   : 1;
    }
};

/**
 * @brief Stack transforms of a residual series, in tag order.
 *
 * Each tag maps every input row; outputs are stacked tag-major. The output
 * has sum(tag rows x input K) rows and unchanged length.
 *
 * @throws DomainError for power on nonpositive input or non-increasing
 *         indicator edges
 */
SeriesMatrix apply_transforms(const SeriesMatrix& residuals,
                              const std::vector<TransformTag>& tags);

}  // namespace gcov
