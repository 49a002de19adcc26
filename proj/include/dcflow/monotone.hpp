#pragma once

#include "dcflow/model.hpp"
#include "dcflow/solve.hpp"

#include <optional>

namespace dcflow {

/// One application of the squared-voltage mapping,
///   f_n(u) = (1/c_n) * (sum_m g_nm sqrt(u_n u_m) + k_n sqrt(u_n) - p_n).
/// Fixed points are squared power-flow solutions. Throws std::domain_error on
/// non-positive input entries.
Vec monotone_map(const DerivedModel& model, const Vec& u);

/// Iterates u <- f(u) from the band top u_hi*1 (or init_u, which the
/// convergence analysis does not cover) until the inf-norm successive
/// difference drops to opts.tol. Under the monotone-mapping conditions the
/// iterates decrease entrywise and the limit, when it stays inside the band,
/// is the high-voltage solution. Returns v = sqrt(u).
///
/// Status: Diverged if an iterate exceeds 10*u_hi; DomainError if the map
/// produces a non-positive or non-finite entry (large constant-power draws).
/// Iterates are never clamped to the band; in_band reports containment.
SolveResult solve_monotone(const DerivedModel& model, const VoltageBand& band,
                           const SolveOptions& opts, std::optional<Vec> init_u = std::nullopt);

} // namespace dcflow
