#pragma once

#include <cstddef>

#include "robust/gnormal.hpp"

namespace robust {

/// Net counts of +/- steps taken at the upper (p) and lower (q) sigma under
/// binary noise. The running centered sum is p * upper + q * lower.
struct LatticeState {
    long p = 0;
    long q = 0;

    double xi(const VarianceBand& band) const { return static_cast<double>(p) * band.upper() + static_cast<double>(q) * band.lower(); }
};

/// Largest horizon the lattice programs accept; memory and time grow as n^2 and n^3.
inline constexpr std::size_t kMaxDpHorizon = 200;

/// Exact supremum over all adaptive sigma strategies of the probability of
/// the kind's rejection event at threshold c, at horizon n, with Rademacher
/// noise. Backward induction over the (p, q) lattice. Throws ResourceError
/// for n > kMaxDpHorizon.
double dp_max_rejection(std::size_t n, double c, const VarianceBand& band, TestKind kind = TestKind::I);

/// Exact rejection probability of the threshold policy (optimal_sigma) on
/// the same lattice. Never exceeds dp_max_rejection.
double dp_policy_value(std::size_t n, double c, const VarianceBand& band, TestKind kind = TestKind::I);

/// Uniform grid for the explicit G-heat solver on [-half_width, half_width] x [t0, t_end].
struct PDEGrid {
    double half_width;
    double dx;
    double dt;
    double t0;
    double t_end = 1.0;

    /// Grid covering |c| + 8 * upper with x = 0 on a node and
    /// dt = courant * dx^2 / upper^2 shrunk to divide (t_end - t0) evenly.
    static PDEGrid for_problem(double c, const VarianceBand& band, double dx = 0.01, double t0 = 0.01,
                               double courant = 0.5);
};

/// Marches u_t = (upper^2 (u_xx)^+ - lower^2 (u_xx)^-) / 2 explicitly from
/// the self-similar profile at t0 to t_end and returns u(t_end, 0). The
/// coefficient at each node follows the sign of the discrete second
/// difference (zero counts as convex). Boundaries are held at the
/// self-similar profile. Throws ConfigurationError for an unstable or too
/// narrow grid.
double g_heat_solve(double c, const VarianceBand& band, const PDEGrid& grid);

}  // namespace robust
