#pragma once

#include "dcflow/conditions.hpp"
#include "dcflow/model.hpp"
#include "dcflow/solve.hpp"

#include <optional>

namespace dcflow {

/// Convergence diagnostics of one Z-bus run. alpha_theoretical is the
/// contraction modulus beta/(d_min - R)^2 at r_used (defaults to the
/// localization radius r_under); it is < 1 whenever feasibility holds and
/// r_used lies in the admissible range. alpha_empirical tracks the largest
/// observed ratio of successive-difference q-norms; the _in_ball variant
/// restricts to steps whose inputs stayed inside the localization ball, where
/// the theoretical bound applies.
struct ZbusDiagnostics {
    BallAnalysis ball;
    std::optional<double> alpha_theoretical;
    std::optional<double> r_used;
    double alpha_empirical = 0.0;
    double alpha_empirical_in_ball = 0.0;
    bool stayed_in_uniqueness_ball = false;  // every iterate within r_over of d
    bool averaging_engaged = false;          // period-2 stall fallback was used
    bool monotone_route_ok = false;          // advisory: i0 + g0 + p/sqrt(u_hi) >= 0 per bus
};

struct ZbusSolve {
    SolveResult result;
    ZbusDiagnostics diagnostics;
};

/// One Z-bus update h(v) = Z [k - D(v) p] with D(v) = diag(v)^{-1}.
/// Fixed points solve the power-flow equations. Throws std::domain_error when
/// an entry of v is within 1e-9 of the D(v) singularity.
Vec zbus_map(const DerivedModel& model, const Vec& v);

/// Iterates v <- h(v) from d (entries of d smaller than 1e-6 in magnitude fall
/// back to 1.0 pu, since they would start on or next to the singularity) until
/// the inf-norm successive difference drops to opts.tol.
///
/// Under feasibility (d_min^2 >= 4 beta) the limit is the unique solution in
/// the uniqueness ball and lies in the localization ball. Diagnostics are
/// computed regardless, since the iteration often converges beyond the
/// sufficient condition. A detected period-2 stall switches to averaged
/// updates v <- (v + h(v))/2, which keep the same fixed points.
///
/// Status: Diverged when an entry approaches the singularity (|v_n| < 1e-9),
/// when norms grow past 10*(d_max+1), or when the converged vector has
/// non-positive entries (a nonphysical root).
ZbusSolve solve_zbus(const DerivedModel& model, const VoltageBand& band, const SolveOptions& opts,
                     std::optional<Vec> init = std::nullopt,
                     std::optional<double> r_for_alpha = std::nullopt);

} // namespace dcflow
