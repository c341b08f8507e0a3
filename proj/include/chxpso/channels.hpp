#ifndef CHXPSO_CHANNELS_HPP
#define CHXPSO_CHANNELS_HPP

// The two update channels that share one guidance vector Q. Neither channel
// evaluates the objective.

#include "chxpso/core.hpp"

#include <algorithm>
#include <concepts>

namespace chxpso {

/// Anything that yields uniforms in [0, 1). Tests substitute fixed values.
template <class T>
concept UniformSource = requires(T& t) {
    { t.uniform() } -> std::convertible_to<double>;
};

struct Coefficients
{
    double w;
    double c1;
    double c2;
};

/// Linear interpolation of the schedule at FEs / FEsmax, progress clamped to [0, 1].
inline Coefficients coefficients_at(const ChannelSchedule& s, std::uint64_t evals,
                                    std::uint64_t max_evals)
{
    double t = max_evals == 0 ? 1.0 : static_cast<double>(evals) / static_cast<double>(max_evals);
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [t](double a, double b) { return t == 1.0 ? b : a + (b - a) * t; };
    return {lerp(s.w_start, s.w_end), lerp(s.c1_start, s.c1_end), lerp(s.c2_start, s.c2_end)};
}

/// v = w v + c r (q - x) with a fresh r per dimension; then velocity clamp,
/// move and bound clamp. Uses c1 as c.
template <UniformSource R>
void non_g_update(Particle& p, std::span<const double> guide, const Coefficients& k,
                  const ProblemSpec& problem, R& rng)
{
    for (std::size_t d = 0; d < p.position.size(); ++d) {
        const double r = rng.uniform();
        double v = k.w * p.velocity[d] + k.c1 * r * (guide[d] - p.position[d]);
        v = clamp_velocity(v, problem.vmax(d));
        p.velocity[d] = v;
        p.position[d] += v;
    }
    clamp_in_place(p, problem);
}

/// v = w v + c1 r1 (q - x) + c2 r2 (g - x); r1 then r2 per dimension.
template <UniformSource R>
void g_update(Particle& p, std::span<const double> guide, std::span<const double> global_best,
              const Coefficients& k, const ProblemSpec& problem, R& rng)
{
    for (std::size_t d = 0; d < p.position.size(); ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double v = k.w * p.velocity[d] + k.c1 * r1 * (guide[d] - p.position[d]) +
                   k.c2 * r2 * (global_best[d] - p.position[d]);
        v = clamp_velocity(v, problem.vmax(d));
        p.velocity[d] = v;
        p.position[d] += v;
    }
    clamp_in_place(p, problem);
}

} // namespace chxpso

#endif // CHXPSO_CHANNELS_HPP
