#include "gcov/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace gcov {
namespace {

bool integral(double x) { return x == std::floor(x); }

void apply_one(const TransformTag& tag, const Eigen::MatrixXd& in,
               Eigen::MatrixXd& out, Eigen::Index row0) {
    const Eigen::Index K = in.rows();
    const Eigen::Index T = in.cols();
    switch (tag.kind) {
        case TransformKind::identity:
            out.middleRows(row0, K) = in;
            break;
        case TransformKind::abs:
            out.middleRows(row0, K) = in.cwiseAbs();
            break;
        case TransformKind::square:
            out.middleRows(row0, K) = in.array().square();
            break;
        case TransformKind::cube:
            out.middleRows(row0, K) = in.array().cube();
            break;
        case TransformKind::sign:
            out.middleRows(row0, K) = in.array().sign();
            break;
        case TransformKind::power:
            if (!integral(tag.lambda) && (in.array() <= 0.0).any())
                throw DomainError("power transform with non-integer exponent "
                                  "requires strictly positive inputs");
            out.middleRows(row0, K) = in.array().pow(tag.lambda);
            break;
        case TransformKind::indicator: {
            if (tag.edges.empty())
                throw DomainError("indicator transform requires at least one edge");
            if (!std::is_sorted(tag.edges.begin(), tag.edges.end(),
                                std::less_equal<double>()))
                throw DomainError("indicator edges must be strictly increasing");
            const auto m = static_cast<Eigen::Index>(tag.edges.size());
            // Bin b is (edge_{b-1}, edge_b]; the last (open-ended) bin is dropped.
            for (Eigen::Index k = 0; k < K; ++k)
                for (Eigen::Index t = 0; t < T; ++t) {
                    const double y = in(k, t);
                    const auto bin = std::lower_bound(tag.edges.begin(),
                                                      tag.edges.end(), y) -
                                     tag.edges.begin();
                    for (Eigen::Index b = 0; b < m; ++b)
                        out(row0 + k * m + b, t) = (bin == b) ? 1.0 : 0.0;
                }
            break;
        }
    }
}

}  // namespace

SeriesMatrix apply_transforms(const SeriesMatrix& residuals,
                              const std::vector<TransformTag>& tags) {
    if (tags.empty()) throw DomainError("transform stack must be nonempty");
    const Eigen::MatrixXd& in = residuals.values();

    Eigen::Index out_rows = 0;
    for (const auto& tag : tags) out_rows += tag.rows_per_input() * in.rows();

    Eigen::MatrixXd out(out_rows, in.cols());
    Eigen::Index row0 = 0;
    for (const auto& tag : tags) {
        apply_one(tag, in, out, row0);
        row0 += tag.rows_per_input() * in.rows();
    }
    return SeriesMatrix(std::move(out));
}

}  // namespace gcov
