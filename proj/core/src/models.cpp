#include "gcov/models.hpp"

#include <cmath>
#include <limits>

namespace gcov {

namespace {
constexpr double kArBound = 0.999;
constexpr double kVarianceFloor = 1e-8;
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void ThetaVector::validate() const {
    if (values.size() < 1) throw DomainError("theta must have at least one entry");
    if (lower.size() != values.size() || upper.size() != values.size() ||
        static_cast<Eigen::Index>(names.size()) != values.size())
        throw ShapeMismatch("theta fields have inconsistent lengths");
    for (Eigen::Index j = 0; j < values.size(); ++j)
        if (values(j) < lower(j) || values(j) > upper(j))
            throw DomainError("theta coordinate " + names[j] + " out of bounds");
}

SeriesMatrix residuals_var(const SeriesMatrix& series,
                           const std::vector<Eigen::MatrixXd>& phis) {
    const Eigen::MatrixXd& y = series.values();
    const Eigen::Index K = y.rows();
    const Eigen::Index T = y.cols();
    const auto p = static_cast<Eigen::Index>(phis.size());
    for (const auto& phi : phis)
        if (phi.rows() != K || phi.cols() != K)
            throw ShapeMismatch("VAR coefficient matrix is not K x K");
    if (T <= p) throw TooShort("series too short for VAR order");

    Eigen::MatrixXd u = y.rightCols(T - p);
    for (Eigen::Index j = 1; j <= p; ++j)
        u -= phis[j - 1] * y.middleCols(p - j, T - p);
    return SeriesMatrix(std::move(u));
}

SeriesMatrix residuals_mar(const SeriesMatrix& series,
                           const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& psi) {
    if (series.components() != 1)
        throw ShapeMismatch("MAR residual map expects a univariate series");
    const Eigen::RowVectorXd y = series.values().row(0);
    const Eigen::Index T = y.size();
    const Eigen::Index r = phi.size();
    const Eigen::Index s = psi.size();
    if (T <= r + s) throw TooShort("series too short for MAR(r, s)");

    // Forward (noncausal) filter: w_t = y_t - sum_k psi_k y_{t+k}.
    Eigen::RowVectorXd w = y.head(T - s);
    for (Eigen::Index k = 1; k <= s; ++k)
        w -= psi(k - 1) * y.segment(k, T - s);

    // Backward (causal) filter: u_t = w_t - sum_j phi_j w_{t-j}.
    Eigen::RowVectorXd u = w.tail(w.size() - r);
    for (Eigen::Index j = 1; j <= r; ++j)
        u -= phi(j - 1) * w.segment(r - j, w.size() - r);
    return SeriesMatrix(u);
}

Residuals residuals_ar_arch(const SeriesMatrix& series, double a1, double alpha1) {
    if (series.components() != 1)
        throw ShapeMismatch("AR-ARCH residual map expects a univariate series");
    const Eigen::RowVectorXd y = series.values().row(0);
    const Eigen::Index T = y.size();
    if (T < 3) throw TooShort("AR-ARCH needs T >= 3");

    const Eigen::RowVectorXd eps =
        y.tail(T - 1) - a1 * y.head(T - 1);  // eps_t, t = 2..T
    Eigen::MatrixXd out(2, T - 2);
    double penalty = 0.0;
    for (Eigen::Index t = 1; t < T - 1; ++t) {
        double v = 1.0 + alpha1 * eps(t - 1) * eps(t - 1);
        if (v < kVarianceFloor) {
            penalty += kVarianceFloor - v;
            v = kVarianceFloor;
        }
        const double u = eps(t) / std::sqrt(v);
        out(0, t - 1) = u;
        out(1, t - 1) = std::fabs(u);
    }
    return Residuals{SeriesMatrix(std::move(out)), penalty};
}

ModelSpec ModelSpec::causal_var(Eigen::Index K, int p,
                                std::vector<TransformTag> transforms) {
    if (K < 1 || p < 1) throw DomainError("VAR requires K >= 1 and p >= 1");
    ModelSpec m;
    m.name_ = "var(" + std::to_string(p) + ")";
    m.family_ = ModelFamily::causal_var;
    m.p_ = p;
    m.data_dim_ = K;
    m.lead_ = 0;
    m.lag_ = p;
    if (transforms.empty()) transforms = {TransformTag::identity()};
    m.transforms_ = std::move(transforms);

    const Eigen::Index J = K * K * p;
    m.param_template_.values = Eigen::VectorXd::Zero(J);
    m.param_template_.lower = Eigen::VectorXd::Constant(J, -kInf);
    m.param_template_.upper = Eigen::VectorXd::Constant(J, kInf);
    for (int j = 1; j <= p; ++j)
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index l = 0; l < K; ++l)
                m.param_template_.names.push_back(
                    "phi" + std::to_string(j) + "[" + std::to_string(i + 1) + "," +
                    std::to_string(l + 1) + "]");

    Eigen::Index rows = 0;
    for (const auto& tag : m.transforms_) rows += tag.rows_per_input() * K;
    m.residual_dim_ = rows;
    return m;
}

ModelSpec ModelSpec::mar(int r, int s, std::vector<TransformTag> transforms) {
    if (r < 0 || s < 0 || r + s < 1)
        throw DomainError("MAR requires r, s >= 0 with r + s >= 1");
    ModelSpec m;
    m.name_ = "mar(" + std::to_string(r) + "," + std::to_string(s) + ")";
    m.family_ = ModelFamily::mar;
    m.r_ = r;
    m.s_ = s;
    m.data_dim_ = 1;
    m.lead_ = s;
    m.lag_ = r;
    if (transforms.empty()) transforms = {TransformTag::identity()};
    m.transforms_ = std::move(transforms);

    const Eigen::Index J = r + s;
    m.param_template_.values = Eigen::VectorXd::Zero(J);
    m.param_template_.lower = Eigen::VectorXd::Constant(J, -kArBound);
    m.param_template_.upper = Eigen::VectorXd::Constant(J, kArBound);
    for (int j = 1; j <= r; ++j)
        m.param_template_.names.push_back("phi" + std::to_string(j));
    for (int k = 1; k <= s; ++k)
        m.param_template_.names.push_back("psi" + std::to_string(k));

    Eigen::Index rows = 0;
    for (const auto& tag : m.transforms_) rows += tag.rows_per_input();
    m.residual_dim_ = rows;
    return m;
}

ModelSpec ModelSpec::ar_arch() {
    ModelSpec m;
    m.name_ = "ar_arch";
    m.family_ = ModelFamily::ar_arch;
    m.data_dim_ = 1;
    m.residual_dim_ = 2;
    m.lead_ = 0;
    m.lag_ = 2;
    m.transforms_ = {TransformTag::identity()};

    m.param_template_.values = Eigen::VectorXd::Zero(2);
    m.param_template_.values(1) = 0.1;
    m.param_template_.names = {"a1", "alpha1"};
    m.param_template_.lower = Eigen::VectorXd(2);
    m.param_template_.upper = Eigen::VectorXd(2);
    m.param_template_.lower << -kArBound, -0.5;
    m.param_template_.upper << kArBound, 3.0;
    return m;
}

ModelFamily ModelSpec::family_by_name(const std::string& name) {
    if (name == "var") return ModelFamily::causal_var;
    if (name == "mar") return ModelFamily::mar;
    if (name == "ar_arch") return ModelFamily::ar_arch;
    throw UnknownModel("unknown model family '" + name + "'");
}

Residuals ModelSpec::residuals(const ThetaVector& theta,
                               const SeriesMatrix& data) const {
    if (theta.dim() != param_template_.dim())
        throw ShapeMismatch("theta dimension does not match the model");
    if (data.components() != data_dim_)
        throw ShapeMismatch("data dimension does not match the model");
    if (data.length() <= lead_ + lag_ + 2)
        throw TooShort("data too short for the model trimming");

    switch (family_) {
        case ModelFamily::causal_var: {
            const Eigen::Index K = data_dim_;
            std::vector<Eigen::MatrixXd> phis;
            phis.reserve(p_);
            for (int j = 0; j < p_; ++j) {
                Eigen::MatrixXd phi(K, K);
                for (Eigen::Index i = 0; i < K; ++i)
                    for (Eigen::Index l = 0; l < K; ++l)
                        phi(i, l) = theta.values(j * K * K + i * K + l);
                phis.push_back(std::move(phi));
            }
            return {apply_transforms(residuals_var(data, phis), transforms_), 0.0};
        }
        case ModelFamily::mar:
            return {apply_transforms(
                        residuals_mar(data, theta.values.head(r_),
                                      theta.values.tail(s_)),
                        transforms_),
                    0.0};
        case ModelFamily::ar_arch: {
            Residuals res =
                residuals_ar_arch(data, theta.values(0), theta.values(1));
            return res;
        }
    }
    throw UnknownModel("unhandled model family");
}

}  // namespace gcov
