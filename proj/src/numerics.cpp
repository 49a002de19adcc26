#include "dcflow/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace dcflow {

namespace {

bool is_symmetric(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

NormOrder norm_order_from_int(int q) {
    switch (q) {
        case 1: return NormOrder::One;
        case 2: return NormOrder::Two;
        case 0: return NormOrder::Inf;
        default: throw std::invalid_argument("norm order must be 1, 2 or 0 (infinity)");
    }
}

int norm_order_to_int(NormOrder q) {
    switch (q) {
        case NormOrder::One: return 1;
        case NormOrder::Two: return 2;
        default: return 0;
    }
}

double vector_norm(const Vec& x, NormOrder q) {
    switch (q) {
        case NormOrder::One: return x.lpNorm<1>();
        case NormOrder::Two: return x.norm();
        default: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    }
}

double induced_norm(const Mat& m, NormOrder q) {
    if (m.rows() != m.cols()) throw std::invalid_argument("induced_norm: matrix must be square");
    if (m.size() == 0) return 0.0;
    if (!m.allFinite()) throw std::invalid_argument("induced_norm: matrix has non-finite entries");
    switch (q) {
        case NormOrder::One: return m.cwiseAbs().colwise().sum().maxCoeff();
        case NormOrder::Inf: return m.cwiseAbs().rowwise().sum().maxCoeff();
        case NormOrder::Two: {
            if (is_symmetric(m, 1e-12)) {
                Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
                return es.eigenvalues().cwiseAbs().maxCoeff();
            }
            Eigen::SelfAdjointEigenSolver<Mat> es(m.transpose() * m, Eigen::EigenvaluesOnly);
            return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
        }
    }
    return 0.0;
}

double min_eigenvalue_sym(const Mat& m) {
    if (m.rows() != m.cols() || !is_symmetric(m, 1e-12))
        throw std::invalid_argument("min_eigenvalue_sym: matrix is not symmetric");
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue_sym(const Mat& m) {
    if (m.rows() != m.cols() || !is_symmetric(m, 1e-12))
        throw std::invalid_argument("max_eigenvalue_sym: matrix is not symmetric");
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    if (h <= 0.0) throw std::invalid_argument("fd_gradient: step must be positive");
    Vec g(x.size());
    Vec probe = x;
    for (Eigen::Index n = 0; n < x.size(); ++n) {
        probe(n) = x(n) + h;
        const double hi = f(probe);
        probe(n) = x(n) - h;
        const double lo = f(probe);
        probe(n) = x(n);
        g(n) = (hi - lo) / (2.0 * h);
    }
    return g;
}

} // namespace dcflow
