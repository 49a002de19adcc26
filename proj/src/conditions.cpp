#include "dcflow/conditions.hpp"

#include <cmath>
#include <limits>

namespace dcflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MarginCheck finalize(const DerivedModel& model, Vec margins) {
    MarginCheck out;
    out.margins = std::move(margins);
    for (int i = 0; i < model.P; ++i) {
        if (out.margins(i) < out.worst_margin) {
            out.worst_margin = out.margins(i);
            out.worst_bus = model.pbus_ids[static_cast<size_t>(i)];
        }
    }
    out.ok = out.worst_margin >= 0.0;
    return out;
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::ZBus: return "zbus";
        case Method::Monotone: return "monotone";
        default: return "energy";
    }
}

double monotone_current_coefficient(const VoltageBand& band) {
    return band.u_lo / std::sqrt(2.0 * band.u_hi - band.u_lo);
}

MarginCheck check_monotone_current(const DerivedModel& model, const VoltageBand& band) {
    const double coeff = monotone_current_coefficient(band);
    Vec margins = Vec::Constant(model.P, kInf);
    for (int i = 0; i < model.P; ++i) {
        const double i0 = model.boundary(i) - model.k(i);
        // only buses whose current draw meets or exceeds the boundary
        // injection (k_n <= 0) constrain the mapping
        if (model.k(i) <= 0.0) margins(i) = coeff * model.gn(i) - i0;
    }
    return finalize(model, std::move(margins));
}

MarginCheck check_monotone_power(const DerivedModel& model, const VoltageBand& band) {
    const double sq = std::sqrt(band.u_hi);
    Vec margins(model.P);
    for (int i = 0; i < model.P; ++i) {
        const double g0 = model.c(i) - model.gn(i);
        const double i0 = model.boundary(i) - model.k(i);
        margins(i) = band.u_hi * g0 + sq * i0 + model.p(i);
    }
    return finalize(model, std::move(margins));
}

BallAnalysis contraction_analysis(const DerivedModel& model, const VoltageBand& band, NormOrder q) {
    BallAnalysis ball;
    if (model.P == 0) {
        ball.feasible = true;
        ball.r_under = 0.0;
        ball.r_over = 0.0;
        return ball;
    }
    ball.beta = induced_norm(model.Z, q) * vector_norm(model.p, q);
    ball.d_min = model.d.cwiseAbs().minCoeff();
    ball.d_max = model.d.cwiseAbs().maxCoeff();
    ball.feasible = ball.d_min * ball.d_min >= 4.0 * ball.beta;
    if (!ball.feasible) return ball;

    const double disc = std::sqrt(std::max(0.0, ball.d_min * ball.d_min - 4.0 * ball.beta));
    ball.r_under = 0.5 * (ball.d_min - disc);
    ball.r_over = ball.d_min - std::sqrt(ball.beta);

    const double v_lo = band.v_lo();
    const double v_hi = band.v_hi();
    ball.ball_in_box = *ball.r_under <= std::min(ball.d_min - v_lo, v_hi - ball.d_max);

    const Vec centered = (v_lo + v_hi) * Vec::Ones(model.P) - 2.0 * model.d;
    const double ones_norm = vector_norm(Vec::Ones(model.P), q);
    ball.box_in_ball = vector_norm(centered, q) + (v_hi - v_lo) * ones_norm <= 2.0 * *ball.r_over;
    return ball;
}

MarginCheck check_global_convexity(const DerivedModel& model, const VoltageBand& band) {
    return check_global_convexity(model, band, min_eigenvalue_sym(model.G));
}

MarginCheck check_global_convexity(const DerivedModel& model, const VoltageBand& band,
                                   double lambda_min_g) {
    const double v_lo = band.v_lo();
    const double ratio = std::sqrt(band.u_hi / band.u_lo);
    Vec margins(model.P);
    Vec pp_sum = Vec::Zero(model.P);
    for (const auto& e : model.pp_edges) {
        pp_sum(e.n) += e.g;
        pp_sum(e.m) += e.g;
    }
    for (int i = 0; i < model.P; ++i) {
        const double rhs = v_lo * (lambda_min_g + model.c(i) - ratio * pp_sum(i));
        margins(i) = rhs - std::max(model.k(i), 0.0);
    }
    return finalize(model, std::move(margins));
}

MarginCheck check_local_convexity(const DerivedModel& model, const VoltageBand& band) {
    return check_local_convexity(model, band, min_eigenvalue_sym(model.G));
}

MarginCheck check_local_convexity(const DerivedModel& model, const VoltageBand& band,
                                  double lambda_min_g) {
    Vec margins(model.P);
    for (int i = 0; i < model.P; ++i)
        margins(i) = lambda_min_g * band.u_lo - std::max(model.p(i), 0.0);
    return finalize(model, std::move(margins));
}

MethodChoice select_method(const ConditionReport& report) {
    MethodChoice choice;
    if (report.contraction.feasible) {
        choice.method = Method::ZBus;
        choice.rationale =
            "contraction feasibility holds (d_min^2 >= 4*beta): a unique solution exists in the "
            "uniqueness ball and the Z-bus updates converge to it";
    } else if (report.monotone_current.ok && report.monotone_power.ok) {
        choice.method = Method::Monotone;
        choice.rationale =
            "contraction feasibility fails but both monotone-mapping conditions hold: the "
            "squared-voltage updates from the band top reach the high-voltage solution if one "
            "exists";
    } else {
        choice.method = Method::EnergyFunction;
        choice.rationale =
            "neither the contraction feasibility nor the monotone-mapping conditions hold: "
            "minimize the energy function, whose stationary points are the power-flow solutions";
    }
    return choice;
}

ConditionReport build_report(const DerivedModel& model, const VoltageBand& band, NormOrder q) {
    ConditionReport report;
    report.lambda_min_g = model.P > 0 ? min_eigenvalue_sym(model.G) : 0.0;
    report.monotone_current = check_monotone_current(model, band);
    report.monotone_power = check_monotone_power(model, band);
    report.contraction = contraction_analysis(model, band, q);
    report.global_convexity = check_global_convexity(model, band, report.lambda_min_g);
    report.local_convexity = check_local_convexity(model, band, report.lambda_min_g);
    report.recommended = select_method(report);
    return report;
}

} // namespace dcflow
