#include "dcflow/monotone.hpp"

#include <cmath>
#include <stdexcept>

namespace dcflow {

namespace {

bool band_contains(const Vec& v, const VoltageBand& band) {
    constexpr double slack = 1e-9;
    return v.size() == 0 ||
           (v.minCoeff() >= band.v_lo() - slack && v.maxCoeff() <= band.v_hi() + slack);
}

} // namespace

Vec monotone_map(const DerivedModel& model, const Vec& u) {
    if (u.size() != model.P) throw std::invalid_argument("monotone_map: wrong vector length");
    if (model.P > 0 && u.minCoeff() <= 0.0)
        throw std::domain_error("NonPositiveInput: squared voltages must be positive");
    const Vec root = u.cwiseSqrt();
    Vec coupling = Vec::Zero(model.P);
    for (const auto& e : model.pp_edges) {
        const double t = e.g * root(e.n) * root(e.m);
        coupling(e.n) += t;
        coupling(e.m) += t;
    }
    return (coupling + model.k.cwiseProduct(root) - model.p).cwiseQuotient(model.c);
}

SolveResult solve_monotone(const DerivedModel& model, const VoltageBand& band,
                           const SolveOptions& opts, std::optional<Vec> init_u) {
    if (opts.tol <= 0.0 || opts.max_iter < 1)
        throw std::invalid_argument("solve_monotone: tol must be > 0 and max_iter >= 1");

    SolveResult res;
    Vec u = init_u ? std::move(*init_u) : Vec::Constant(model.P, band.u_hi);
    if (u.size() != model.P) throw std::invalid_argument("solve_monotone: init has wrong length");
    if (model.P > 0 && u.minCoeff() <= 0.0)
        throw std::domain_error("NonPositiveInput: init must be positive");

    const double ceiling = 10.0 * band.u_hi;
    res.status = SolveStatus::MaxIterations;
    for (int it = 1; it <= opts.max_iter; ++it) {
        Vec next = monotone_map(model, u);
        if (!next.allFinite() || (model.P > 0 && next.minCoeff() <= 0.0)) {
            // the map left its domain; report the last valid iterate
            res.status = SolveStatus::DomainError;
            res.iterations = it;
            if (opts.record_trace) res.trace.push_back(std::numeric_limits<double>::quiet_NaN());
            break;
        }
        const double diff = model.P > 0 ? (next - u).lpNorm<Eigen::Infinity>() : 0.0;
        if (opts.record_trace) res.trace.push_back(diff);
        u = std::move(next);
        res.iterations = it;
        if (model.P > 0 && u.maxCoeff() > ceiling) {
            res.status = SolveStatus::Diverged;
            break;
        }
        if (diff <= opts.tol) {
            res.status = SolveStatus::Converged;
            break;
        }
    }

    res.v = u.cwiseSqrt();
    res.in_band = band_contains(res.v, band);
    if (model.P == 0 || res.v.minCoeff() > 0.0)
        res.residual_inf =
            model.P > 0 ? residual(model, res.v).lpNorm<Eigen::Infinity>() : 0.0;
    return res;
}

} // namespace dcflow
