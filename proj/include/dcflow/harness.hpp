#pragma once

#include "dcflow/conditions.hpp"
#include "dcflow/model.hpp"
#include "dcflow/network.hpp"
#include "dcflow/solve.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace dcflow {

/// Monte-Carlo loading protocol: per trial and per load bus, the
/// constant-power component is scaled by an independent uniform draw from
/// p_scale_range and the constant-current/conductance components by
/// independent draws from iz_scale_range. Deterministic given seed.
struct McConfig {
    int trials = 1;
    std::uint64_t seed = 0;
    std::pair<double, double> p_scale_range{-10.0, 10.0};
    std::pair<double, double> iz_scale_range{0.0, 10.0};
    std::ostream* trial_csv = nullptr;  // optional per-trial record stream
};

/// 2x2 contingency of one sufficient condition against its method's success.
struct ConditionCell {
    int cond_true_success = 0;
    int cond_true_fail = 0;
    int cond_false_success = 0;
    int cond_false_fail = 0;
};

struct McSummary {
    int trials = 0;
    int agree_count = 0;   // some method converged and all converged results match
    int fail_count = 0;
    double worst_disagreement = 0.0;
    ConditionCell contraction;       // feasibility vs Z-bus convergence
    ConditionCell monotone_pair;     // both monotone conditions vs in-band monotone convergence
    ConditionCell local_convexity;   // solution convexity vs energy convergence
};

/// Success judged against each method's own claim: the monotone mapping
/// promises the high-voltage solution inside the band, the other two make no
/// band claim.
bool method_succeeded(const SolveResult& result, Method method);

/// Closed-form roots of the single-load-bus quadratic c v^2 - k v + p = 0,
/// positive roots only, sorted descending. Throws std::runtime_error
/// ("NoPositiveRoot") when none exists.
std::vector<double> oracle_single_pbus(const DerivedModel& model);

/// Independent brute-force root finder: damped Newton on the power-balance
/// residual from `starts` random initializations in [0.1, 2.0]^P, deduplicated
/// at inf-distance 1e-5. Returns the distinct entrywise-positive solutions
/// found (possibly none). Intended for small P.
std::vector<Vec> oracle_multistart(const DerivedModel& model, int starts, std::uint64_t seed);

enum class NetKind { Radial, Meshed };

/// Synthetic test feeders: a random spanning tree rooted at the slack bus
/// (radial), plus ceil(n/4) random chords (meshed). Line conductances uniform
/// in [5, 50] pu; each load bus carries a nominal load in [0.02, 0.12] pu
/// split 30/30/40 into conductance/current/power components at 1 pu voltage.
/// Deterministic given seed.
Network generate_network(NetKind kind, int n_buses, std::uint64_t seed);

McSummary run_monte_carlo(const Network& base, const McConfig& cfg);

} // namespace dcflow
