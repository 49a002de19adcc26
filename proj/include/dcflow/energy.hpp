#pragma once

#include "dcflow/model.hpp"
#include "dcflow/solve.hpp"

#include <optional>

namespace dcflow {

/// Snapshot of the energy landscape at one point rho (rho_n = log u_n).
struct EnergyState {
    Vec rho;
    double value = 0.0;
    double grad_norm_inf = 0.0;
};

/// Hessian of the energy function and its conductance-scaled companion
/// H_tilde = 2 diag(e^{-rho/2}) H diag(e^{-rho/2}) = G + diag(K), which shares
/// the definiteness of H and decomposes against the reduced Laplacian.
struct HessianBundle {
    Mat H;
    Mat H_tilde;
    Vec K_diag;
    double lambda_min_tilde = 0.0;
};

/// Energy over log-squared voltages,
///   E(rho) = sum_n [c_n e^{rho_n} - 2 k_n e^{rho_n/2} + p_n rho_n]
///            - 2 * sum_{unordered pairs n<m} g_nm e^{(rho_n+rho_m)/2},
/// whose stationary points are exactly the power-flow solutions. Throws
/// std::overflow_error when an exponential leaves the representable range.
double energy_value(const DerivedModel& model, const Vec& rho);

/// Gradient entry: c_n e^{rho_n} - sum_m g_nm e^{(rho_n+rho_m)/2}
///                 - k_n e^{rho_n/2} + p_n.
/// Coincides with the power-balance residual at v = e^{rho/2}.
Vec energy_gradient(const DerivedModel& model, const Vec& rho);

HessianBundle hessian(const DerivedModel& model, const Vec& rho);

EnergyState evaluate_energy_state(const DerivedModel& model, const Vec& rho);

/// Gradient descent from rho = 0 (the flat voltage profile) with step
/// 0.9/||H(rho0)||_2 and halving backtracking until the energy decreases.
/// Stops at ||grad E||_inf <= opts.tol (stationarity; kEnergyDefaultTol is the
/// recommended threshold). Unbounded descent (E < -1e12 or ||rho||_inf > 50)
/// and overflow are reported as Diverged: no solution exists down that valley.
/// Returns v = e^{rho/2}.
SolveResult solve_energy(const DerivedModel& model, const VoltageBand& band,
                         const SolveOptions& opts, std::optional<Vec> init_rho = std::nullopt);

} // namespace dcflow
