#include "dcflow/zbus.hpp"

#include <cmath>
#include <stdexcept>

namespace dcflow {

namespace {

constexpr double kSingularFloor = 1e-9;

bool band_contains(const Vec& v, const VoltageBand& band) {
    constexpr double slack = 1e-9;
    return v.size() == 0 ||
           (v.minCoeff() >= band.v_lo() - slack && v.maxCoeff() <= band.v_hi() + slack);
}

} // namespace

Vec zbus_map(const DerivedModel& model, const Vec& v) {
    if (v.size() != model.P) throw std::invalid_argument("zbus_map: wrong vector length");
    if (model.P > 0 && v.cwiseAbs().minCoeff() < kSingularFloor)
        throw std::domain_error("ZeroVoltageEntry: update undefined near a zero voltage");
    // h(v) = Z(k - p./v) = d - Z*(p./v); using d keeps the p = 0 case exact
    return model.d - model.Z * model.p.cwiseQuotient(v);
}

ZbusSolve solve_zbus(const DerivedModel& model, const VoltageBand& band, const SolveOptions& opts,
                     std::optional<Vec> init, std::optional<double> r_for_alpha) {
    if (opts.tol <= 0.0 || opts.max_iter < 1)
        throw std::invalid_argument("solve_zbus: tol must be > 0 and max_iter >= 1");

    ZbusSolve out;
    SolveResult& res = out.result;
    ZbusDiagnostics& diag = out.diagnostics;

    diag.ball = contraction_analysis(model, band, model.q);
    if (diag.ball.feasible && model.P > 0) {
        const double r = r_for_alpha.value_or(*diag.ball.r_under);
        diag.r_used = r;
        const double gap = diag.ball.d_min - r;
        if (gap > 0.0) diag.alpha_theoretical = diag.ball.beta / (gap * gap);
    }
    {
        // advisory only: with p >= 0 the map itself is monotone under this test
        const double inv_vhi = 1.0 / band.v_hi();
        diag.monotone_route_ok = true;
        for (int i = 0; i < model.P; ++i) {
            const double i0 = model.boundary(i) - model.k(i);
            const double g0 = model.c(i) - model.gn(i);
            if (i0 + g0 + model.p(i) * inv_vhi < 0.0) {
                diag.monotone_route_ok = false;
                break;
            }
        }
    }

    Vec v;
    if (init) {
        v = std::move(*init);
        if (v.size() != model.P) throw std::invalid_argument("solve_zbus: init has wrong length");
    } else {
        v = model.d;
        for (int i = 0; i < model.P; ++i)
            if (std::abs(v(i)) < 1e-6) v(i) = 1.0;
    }

    const double growth_ceiling = 10.0 * (diag.ball.d_max + 1.0);
    const double r_under = diag.ball.feasible ? *diag.ball.r_under : 0.0;
    const double r_over = diag.ball.feasible ? *diag.ball.r_over : 0.0;
    auto in_ball = [&](const Vec& x, double r) {
        return diag.ball.feasible && vector_norm(x - model.d, model.q) <= r + 1e-12;
    };

    diag.stayed_in_uniqueness_ball = in_ball(v, r_over);
    bool prev_in_under = in_ball(v, r_under);

    double prev_diff_inf = -1.0;
    double prev_diff_q = -1.0;
    Vec prev_v;
    int stall_streak = 0;
    bool damped = false;
    // a certified contraction cannot cycle, so the stall fallback is reserved
    // for runs outside (or at the edge of) the feasibility condition
    const bool stall_detection =
        !(diag.ball.feasible && diag.alpha_theoretical && *diag.alpha_theoretical <= 0.98);

    res.status = SolveStatus::MaxIterations;
    for (int it = 1; it <= opts.max_iter; ++it) {
        if (model.P > 0 && v.cwiseAbs().minCoeff() < kSingularFloor) {
            res.status = SolveStatus::Diverged;
            break;
        }
        Vec next = model.P > 0 ? Vec(model.d - model.Z * model.p.cwiseQuotient(v)) : Vec(v);
        if (damped) next = 0.5 * (v + next);
        if (!next.allFinite()) {
            res.status = SolveStatus::Diverged;
            res.iterations = it;
            break;
        }

        const double diff_inf = model.P > 0 ? (next - v).lpNorm<Eigen::Infinity>() : 0.0;
        const double diff_q = model.P > 0 ? vector_norm(next - v, model.q) : 0.0;
        if (opts.record_trace) res.trace.push_back(diff_inf);

        const bool next_in_under = in_ball(next, r_under);
        diag.stayed_in_uniqueness_ball = diag.stayed_in_uniqueness_ball && in_ball(next, r_over);
        if (prev_diff_q > 1e-300) {
            const double ratio = diff_q / prev_diff_q;
            diag.alpha_empirical = std::max(diag.alpha_empirical, ratio);
            // the contraction bound covers this step when both map inputs sat
            // inside the localization ball
            if (prev_in_under && in_ball(v, r_under))
                diag.alpha_empirical_in_ball = std::max(diag.alpha_empirical_in_ball, ratio);
        }

        // Period-2 stall: successive differences stop shrinking while the
        // two-steps-apart distance collapses. A strict contraction at factor
        // alpha <= 1 - 1e-9 cannot trip this. Averaged updates break the cycle.
        if (stall_detection && !damped && prev_v.size() == v.size() && prev_v.size() > 0 &&
            diff_inf > opts.tol && prev_diff_inf >= 0.0) {
            const double cycle_gap = (next - prev_v).lpNorm<Eigen::Infinity>();
            if (diff_inf >= (1.0 - 1e-9) * prev_diff_inf &&
                cycle_gap <= 1e-6 * std::max(1.0, next.lpNorm<Eigen::Infinity>()) &&
                cycle_gap <= 1e-3 * diff_inf) {
                if (++stall_streak >= 2) {
                    damped = true;
                    diag.averaging_engaged = true;
                }
            } else {
                stall_streak = 0;
            }
        }

        prev_in_under = next_in_under;
        prev_v = std::move(v);
        v = std::move(next);
        prev_diff_inf = diff_inf;
        prev_diff_q = diff_q;
        res.iterations = it;

        if (model.P > 0 && v.lpNorm<Eigen::Infinity>() > growth_ceiling) {
            res.status = SolveStatus::Diverged;
            break;
        }
        if (diff_inf <= opts.tol) {
            res.status = SolveStatus::Converged;
            break;
        }
    }

    // a converged negative vector solves the equations but is nonphysical
    if (res.status == SolveStatus::Converged && model.P > 0 && v.minCoeff() <= 0.0)
        res.status = SolveStatus::Diverged;

    res.v = std::move(v);
    res.in_band = band_contains(res.v, band);
    if (model.P == 0)
        res.residual_inf = 0.0;
    else if (res.v.minCoeff() > 0.0)
        res.residual_inf = residual(model, res.v).lpNorm<Eigen::Infinity>();
    return out;
}

} // namespace dcflow
