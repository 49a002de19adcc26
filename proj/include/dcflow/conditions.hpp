#pragma once

#include "dcflow/model.hpp"

#include <optional>
#include <string>

namespace dcflow {

/// Per-bus margins of one sufficient condition, stored as RHS - LHS of the
/// inequality so that 0 is always the boundary. Buses a condition does not
/// constrain get +infinity. ok holds iff every margin is >= 0.
struct MarginCheck {
    bool ok = true;
    Vec margins;
    int worst_bus = -1;                 // bus id of the smallest margin, -1 if unconstrained
    double worst_margin = std::numeric_limits<double>::infinity();
};

/// Contraction-ball analysis for the Z-bus map around the center d = Zk:
/// beta = ||Z||_q ||p||_q, feasibility means d_min^2 >= 4 beta, and in that
/// case the admissible radii span (r_under, r_over). r_under localizes the
/// solution, r_over certifies uniqueness. ball_in_box states that the
/// localization ball sits inside the voltage band box; box_in_ball that the
/// band box sits inside the uniqueness ball.
struct BallAnalysis {
    double beta = 0.0;
    double d_min = 0.0;
    double d_max = 0.0;
    bool feasible = false;
    std::optional<double> r_under;
    std::optional<double> r_over;
    std::optional<bool> ball_in_box;
    std::optional<bool> box_in_ball;
};

enum class Method { ZBus, Monotone, EnergyFunction };

const char* method_name(Method m); // "zbus" | "monotone" | "energy"

struct MethodChoice {
    Method method = Method::EnergyFunction;
    std::string rationale;
};

/// Every sufficient condition evaluated on one model, plus the recommended
/// solver. lambda_min_g is computed once and shared by the convexity checks.
struct ConditionReport {
    MarginCheck monotone_current;   // bounded constant-current draws
    MarginCheck monotone_power;     // bounded constant-power generation
    BallAnalysis contraction;
    MarginCheck global_convexity;
    MarginCheck local_convexity;
    double lambda_min_g = 0.0;
    MethodChoice recommended;
};

/// Band coefficient u_lo / sqrt(2 u_hi - u_lo) of the constant-current bound
/// (0.64 for a +-10% band).
double monotone_current_coefficient(const VoltageBand& band);

/// Constant-current condition: buses whose current draw exceeds the boundary
/// injection (k_n <= 0) must satisfy i0_n <= coeff * gn_n; other buses are
/// unconstrained (+inf margin).
MarginCheck check_monotone_current(const DerivedModel& model, const VoltageBand& band);

/// Constant-power condition: u_hi*g0_n + sqrt(u_hi)*i0_n + p_n >= 0 per bus.
MarginCheck check_monotone_power(const DerivedModel& model, const VoltageBand& band);

BallAnalysis contraction_analysis(const DerivedModel& model, const VoltageBand& band, NormOrder q);

/// Band-wide convexity of the energy function:
/// [k_n]+ <= sqrt(u_lo) * (lambda_min(G) + c_n - sqrt(u_hi/u_lo) * sum_m g_nm).
MarginCheck check_global_convexity(const DerivedModel& model, const VoltageBand& band);
MarginCheck check_global_convexity(const DerivedModel& model, const VoltageBand& band,
                                   double lambda_min_g);

/// Convexity at any power-flow solution (state-independent):
/// [p_n]+ <= lambda_min(G) * u_lo.
MarginCheck check_local_convexity(const DerivedModel& model, const VoltageBand& band);
MarginCheck check_local_convexity(const DerivedModel& model, const VoltageBand& band,
                                  double lambda_min_g);

/// Selector: contraction feasibility wins (existence + uniqueness + speed),
/// then the monotone pair (high-voltage solution), energy descent otherwise.
/// Pure function of the report.
MethodChoice select_method(const ConditionReport& report);

ConditionReport build_report(const DerivedModel& model, const VoltageBand& band, NormOrder q);

} // namespace dcflow
