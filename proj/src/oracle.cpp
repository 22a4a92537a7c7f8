#include "robust/oracle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "robust/adversary.hpp"
#include "robust/errors.hpp"

namespace robust {

namespace {

bool rejection_event(TestKind kind, double scaled, double c)
{
    switch (kind) {
    case TestKind::I: return scaled > c;
    case TestKind::II: return scaled < c;
    case TestKind::III: return std::abs(scaled) > c;
    }
    return false;
}

void check_horizon(std::size_t n)
{
    if (n == 0) {
        throw DomainError("lattice horizon must be >= 1");
    }
    if (n > kMaxDpHorizon) {
        throw ResourceError("lattice horizon " + std::to_string(n) + " exceeds the limit of " +
                            std::to_string(kMaxDpHorizon));
    }
}

// Value table over the (p, q) box [-n-1, n+1]^2; entry (p + n + 1, q + n + 1).
class Lattice {
public:
    explicit Lattice(std::size_t n) : offset_(static_cast<Eigen::Index>(n) + 1), values_(2 * offset_ + 1, 2 * offset_ + 1)
    {
        values_.setZero();
    }

    double& at(long p, long q) { return values_(p + offset_, q + offset_); }
    double at(long p, long q) const { return values_(p + offset_, q + offset_); }

private:
    Eigen::Index offset_;
    Eigen::MatrixXd values_;
};

// Backward induction; `pick(step, state, up_value, low_value)` returns the
// value of the chosen action at that state.
template <class Pick>
double backward_induction(std::size_t n, double c, const VarianceBand& band, TestKind kind, Pick&& pick)
{
    check_horizon(n);
    const long horizon = static_cast<long>(n);
    const double root_n = std::sqrt(static_cast<double>(n));

    Lattice next(n);
    Lattice current(n);
    for (long p = -horizon; p <= horizon; ++p) {
        for (long q = -horizon; q <= horizon; ++q) {
            const LatticeState s{p, q};
            next.at(p, q) = rejection_event(kind, s.xi(band) / root_n, c) ? 1.0 : 0.0;
        }
    }
    for (long step = horizon - 1; step >= 0; --step) {
        for (long p = -step; p <= step; ++p) {
            const long q_span = step - std::abs(p);
            for (long q = -q_span; q <= q_span; ++q) {
                if (((p + q - step) & 1L) != 0) {
                    continue;
                }
                const double up = 0.5 * (next.at(p + 1, q) + next.at(p - 1, q));
                const double low = 0.5 * (next.at(p, q + 1) + next.at(p, q - 1));
                current.at(p, q) = pick(static_cast<std::size_t>(step), LatticeState{p, q}, up, low);
            }
        }
        std::swap(current, next);
    }
    return next.at(0, 0);
}

}  // namespace

double dp_max_rejection(std::size_t n, double c, const VarianceBand& band, TestKind kind)
{
    return backward_induction(n, c, band, kind,
                              [](std::size_t, const LatticeState&, double up, double low) { return std::max(up, low); });
}

double dp_policy_value(std::size_t n, double c, const VarianceBand& band, TestKind kind)
{
    return backward_induction(n, c, band, kind, [&](std::size_t step, const LatticeState& s, double up, double low) {
        const double sigma = optimal_sigma(kind, PathState{step, s.xi(band)}, n, c, band);
        return sigma == band.upper() ? up : low;
    });
}

PDEGrid PDEGrid::for_problem(double c, const VarianceBand& band, double dx, double t0, double courant)
{
    if (!(dx > 0.0) || !(t0 > 0.0 && t0 < 1.0) || !(courant > 0.0 && courant <= 1.0)) {
        throw ConfigurationError("grid needs dx > 0, 0 < t0 < 1 and 0 < courant <= 1");
    }
    PDEGrid grid{};
    grid.dx = dx;
    grid.t0 = t0;
    grid.t_end = 1.0;
    grid.half_width = std::ceil((std::abs(c) + 8.0 * band.upper()) / dx) * dx;
    const double dt_max = courant * dx * dx / (band.upper() * band.upper());
    const double steps = std::ceil((grid.t_end - t0) / dt_max);
    grid.dt = (grid.t_end - t0) / steps;
    return grid;
}

double g_heat_solve(double c, const VarianceBand& band, const PDEGrid& grid)
{
    const double hi2 = band.upper() * band.upper();
    const double lo2 = band.lower() * band.lower();
    if (!(grid.dx > 0.0) || !(grid.dt > 0.0)) {
        throw ConfigurationError("grid spacing and time step must be positive");
    }
    if (grid.dt > grid.dx * grid.dx / hi2 * (1.0 + 1e-12)) {
        throw ConfigurationError("explicit scheme unstable: dt > dx^2 / sigma_upper^2");
    }
    if (!(grid.t0 > 0.0 && grid.t0 < grid.t_end)) {
        throw ConfigurationError("initial time must satisfy 0 < t0 < t_end");
    }
    if (grid.half_width < std::abs(c) + 8.0 * band.upper() - 1e-9) {
        throw ConfigurationError("domain half-width must be at least |c| + 8 sigma_upper");
    }

    const auto half_nodes = static_cast<Eigen::Index>(std::llround(grid.half_width / grid.dx));
    const Eigen::Index nodes = 2 * half_nodes + 1;
    const Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(nodes, -static_cast<double>(half_nodes), static_cast<double>(half_nodes)) * grid.dx;
    const auto steps = static_cast<long>(std::llround((grid.t_end - grid.t0) / grid.dt));
    const double dt = (grid.t_end - grid.t0) / static_cast<double>(steps);

    auto profile = [&](double xv, double t) { return self_similar_f((xv - c) / std::sqrt(t), band); };

    Eigen::ArrayXd u = x.unaryExpr([&](double xv) { return profile(xv, grid.t0); });
    Eigen::ArrayXd d2(nodes - 2);
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    for (long k = 1; k <= steps; ++k) {
        const double t = grid.t0 + static_cast<double>(k) * dt;
        d2 = (u.segment(2, nodes - 2) - 2.0 * u.segment(1, nodes - 2) + u.segment(0, nodes - 2)) * inv_dx2;
        u.segment(1, nodes - 2) += (0.5 * dt) * (d2 >= 0.0).select(hi2 * d2, lo2 * d2);
        u(0) = profile(x(0), t);
        u(nodes - 1) = profile(x(nodes - 1), t);
    }
    return u(half_nodes);
}

}  // namespace robust
