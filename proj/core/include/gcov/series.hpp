#pragma once

#include <Eigen/Dense>

#include "gcov/errors.hpp"

namespace gcov {

/**
 * @brief A K x T block of observations or residuals.
 *
 * Rows are components, columns are time points. Construction rejects
 * non-finite entries, so downstream numerics never see NaN or Inf.
 */
class SeriesMatrix {
public:
    SeriesMatrix() = default;

    explicit SeriesMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
        if (values_.rows() < 1 || values_.cols() < 1)
            throw ShapeMismatch("SeriesMatrix requires K >= 1 and T >= 1");
        if (!values_.allFinite())
            throw DomainError("SeriesMatrix entries must be finite");
    }

    /// Convenience constructor for a univariate series.
    static SeriesMatrix univariate(const Eigen::VectorXd& y) {
        return SeriesMatrix(y.transpose());
    }

    Eigen::Index components() const { return values_.rows(); }
    Eigen::Index length() const { return values_.cols(); }

    const Eigen::MatrixXd& values() const { return values_; }

private:
    Eigen::MatrixXd values_;
};

}  // namespace gcov
