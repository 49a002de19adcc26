#pragma once

#include "dcflow/numerics.hpp"

#include <limits>
#include <vector>

namespace dcflow {

enum class SolveStatus { Converged, MaxIterations, Diverged, DomainError };

const char* to_string(SolveStatus s);

struct SolveOptions {
    double tol = 1e-6;      // fixed-point: inf-norm successive difference;
                            // energy descent: inf-norm of the gradient
    int max_iter = 10000;
    bool record_trace = false;
};

/// Recommended stopping threshold for the gradient-descent solver, whose
/// natural certificate is stationarity rather than iterate stalling.
inline constexpr double kEnergyDefaultTol = 1e-8;

struct SolveResult {
    Vec v;                  // per-unit voltages over the load buses
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    double residual_inf = std::numeric_limits<double>::quiet_NaN();
    bool in_band = false;   // all v_n within [v_lo, v_hi] (1e-9 slack)

    // one entry per iteration when record_trace is set:
    // fixed-point solvers store ||x^{t+1}-x^t||_inf, the energy solver stores
    // ||grad E||_inf and fills energy_trace with E alongside.
    std::vector<double> trace;
    std::vector<double> energy_trace;
};

} // namespace dcflow
