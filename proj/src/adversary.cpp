#include "robust/adversary.hpp"

#include <cmath>
#include <string>

#include "robust/errors.hpp"

namespace robust {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

class NoiseSource {
public:
    explicit NoiseSource(NoiseModel model) : model_(model) {}

    double operator()(Rng& rng)
    {
        if (model_ == NoiseModel::Rademacher) {
            return (rng() >> 63) != 0 ? 1.0 : -1.0;
        }
        return normal_(rng);
    }

private:
    NoiseModel model_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

template <class Emit>
void run_process(std::size_t n, double mu, double mu0, const Strategy& strategy, NoiseModel noise,
                 const VarianceBand& band, Rng& rng, Emit&& emit)
{
    NoiseSource draw(noise);
    PathState state;
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = choose_sigma(strategy, state, n, band);
        const double z = sigma * draw(rng) + mu;
        state.xi += z - mu0;
        state.i = i + 1;
        emit(sigma, z, state.xi);
    }
}

}  // namespace

std::string_view to_string(NoiseModel noise)
{
    return noise == NoiseModel::Rademacher ? "rademacher" : "normal";
}

NoiseModel parse_noise_model(std::string_view text)
{
    if (text == "normal" || text == "standard-normal") return NoiseModel::StandardNormal;
    if (text == "rademacher") return NoiseModel::Rademacher;
    throw DomainError("unknown noise model '" + std::string(text) + "'");
}

double optimal_sigma(TestKind kind, const PathState& state, std::size_t n, double c, const VarianceBand& band)
{
    if (n == 0 || state.i >= n) {
        throw DomainError("step index out of range");
    }
    if (state.i == 0) {
        return band.upper();
    }
    const double scaled = state.xi / std::sqrt(static_cast<double>(n));
    bool upper = false;
    switch (kind) {
    case TestKind::I: upper = scaled <= c; break;
    case TestKind::II: upper = scaled >= c; break;
    case TestKind::III: upper = std::abs(scaled) <= c; break;
    }
    return upper ? band.upper() : band.lower();
}

double choose_sigma(const Strategy& strategy, const PathState& state, std::size_t n, const VarianceBand& band)
{
    return std::visit(
        Overloaded{
            [&](const OptimalPolicy& p) { return optimal_sigma(p.kind, state, n, p.c, band); },
            [&](const ConstantPolicy& p) {
                if (!(p.sigma >= band.lower() && p.sigma <= band.upper())) {
                    throw DomainError("constant sigma " + std::to_string(p.sigma) + " lies outside the band");
                }
                return p.sigma;
            },
            [&](const IidRandomPolicy& p) {
                if (!(p.p_upper >= 0.0 && p.p_upper <= 1.0)) {
                    throw DomainError("p_upper must be a probability");
                }
                const double u = unit_interval(mix_keys({p.coin_seed, static_cast<std::uint64_t>(state.i)}));
                return u < p.p_upper ? band.upper() : band.lower();
            },
            [&](const AlternatingPolicy&) { return state.i % 2 == 0 ? band.upper() : band.lower(); },
        },
        strategy);
}

Eigen::VectorXd generate_sequence(std::size_t n, double mu, double mu0, const Strategy& strategy, NoiseModel noise,
                                  const VarianceBand& band, Rng& rng)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    Eigen::Index k = 0;
    run_process(n, mu, mu0, strategy, noise, band, rng, [&](double, double z, double) { out(k++) = z; });
    return out;
}

std::vector<TraceStep> strategy_trace(std::size_t n, double mu, double mu0, const Strategy& strategy,
                                      NoiseModel noise, const VarianceBand& band, Rng& rng)
{
    std::vector<TraceStep> trace;
    trace.reserve(n);
    run_process(n, mu, mu0, strategy, noise, band, rng,
                [&](double sigma, double z, double xi) { trace.push_back({sigma, z, xi}); });
    return trace;
}

bool audit_predictability(const std::vector<TraceStep>& trace, double mu0, const Strategy& strategy,
                          const VarianceBand& band)
{
    const std::size_t n = trace.size();
    PathState state;
    for (std::size_t i = 0; i < n; ++i) {
        if (choose_sigma(strategy, state, n, band) != trace[i].sigma) {
            return false;
        }
        state.xi += trace[i].z - mu0;
        state.i = i + 1;
    }
    return true;
}

}  // namespace robust
