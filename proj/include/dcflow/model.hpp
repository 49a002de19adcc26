#pragma once

#include "dcflow/network.hpp"
#include "dcflow/numerics.hpp"

#include <vector>

namespace dcflow {

/// Constants derived from a validated network, everything indexed over the
/// P load (ZIP) buses in increasing bus-id order:
///   c_n = sum of incident line conductances + g0_n
///   k_n = boundary injection (sum of g to constant-voltage neighbours times
///         their voltage) - i0_n
///   gn_n = sum of incident line conductances
///   G    = reduced Laplacian (diagonal c, off-diagonal -g between loads), SPD
///   Z    = G^{-1} (dense), d = Z k
/// Immutable after construction; safe to share across threads.
struct DerivedModel {
    int P = 0;
    std::vector<int> pbus_ids;   // P-index -> bus id
    std::vector<int> bus_to_p;   // bus id -> P-index, -1 for constant-voltage buses
    Vec c, k, gn, p, d;
    Vec boundary;                // per load bus: sum over constant-voltage neighbours of g*v
    Mat G, Z;

    /// One load-load line, endpoints as P-indices with n < m.
    struct Edge {
        int n = 0, m = 0;
        double g = 0.0;
    };
    std::vector<Edge> pp_edges;

    VoltageBand band;            // copied from the source network
    NormOrder q = NormOrder::Two;
};

/// Validates the network, then builds the derived constants. Inverting the
/// reduced Laplacian uses a Cholesky factorization; failure (possible only on
/// corrupted input) raises ValidationError("SingularG...").
DerivedModel derive(const Network& net);

/// Per-bus power-balance residual at a voltage vector v > 0 (entrywise):
///   r_n = c_n v_n^2 - v_n * sum_m g_nm v_m - k_n v_n + p_n
/// Exact solutions return the zero vector. Throws std::domain_error on
/// non-positive entries.
Vec residual(const DerivedModel& model, const Vec& v);

} // namespace dcflow
