#ifndef CHXPSO_CORE_HPP
#define CHXPSO_CORE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chxpso {

using Vector = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;

/// Raised when a problem or run configuration violates its invariants.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised on malformed call arguments (dimension mismatch, empty inputs).
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Fraction of each dimension's range used as the velocity limit.
inline constexpr double velocity_limit_fraction = 0.2;

/// A box-constrained minimization problem.
///
/// `optimum` is the known optimal value and is used only to report errors.
struct ProblemSpec
{
    std::string name;
    Vector lower;
    Vector upper;
    Objective objective;
    double optimum = 0.0;

    std::size_t dimension() const { return lower.size(); }

    double vmax(std::size_t d) const
    {
        return velocity_limit_fraction * (upper[d] - lower[d]);
    }

    void validate() const
    {
        if (lower.empty())
            throw ConfigError("problem '" + name + "' has zero dimensions");
        if (lower.size() != upper.size())
            throw ConfigError("problem '" + name + "' bound vectors differ in length");
        for (std::size_t d = 0; d < lower.size(); ++d)
            if (!(lower[d] < upper[d]))
                throw ConfigError("problem '" + name + "' has lower >= upper in dimension " +
                                  std::to_string(d));
        if (!objective)
            throw ConfigError("problem '" + name + "' has no objective");
    }
};

/// Seedable random stream. Every stochastic draw in the library goes through
/// one of these three calls, so a run is reproducible bit-for-bit across
/// standard library implementations.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n)
    {
        // rejection sampling keeps the draw unbiased
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % bound);
    }

    /// Standard normal via Box-Muller. Consumes two uniforms per call.
    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 engine_;
};

struct Particle
{
    Vector position;
    Vector velocity;
};

/// The channel a layer employed in its most recent step.
enum class Channel
{
    none,  // no step taken yet
    non_g,
    g,
};

/// One non-G particle and one G particle sharing a layer best and a
/// constructed guidance vector.
struct Layer
{
    Particle non_g;
    Particle g;
    Vector best;
    double best_fitness = std::numeric_limits<double>::infinity();
    Vector guide; // the constructed vector Q
    int alpha_non_g = 0;
    int alpha_g = 0;
    int beta = 0;
    Channel last_channel = Channel::none;
};

enum class OperatorKind
{
    identity,
    comprehensive_learning,
};

inline std::string to_string(OperatorKind kind)
{
    return kind == OperatorKind::identity ? "identity" : "cl";
}

inline OperatorKind parse_operator_kind(const std::string& name)
{
    if (name == "identity")
        return OperatorKind::identity;
    if (name == "cl" || name == "comprehensive-learning")
        return OperatorKind::comprehensive_learning;
    throw ConfigError("unknown operator kind '" + name + "'");
}

/// Linear schedule for inertia weight and the two acceleration coefficients,
/// driven by evaluation progress FEs / FEsmax.
struct ChannelSchedule
{
    double w_start;
    double w_end;
    double c1_start;
    double c1_end;
    double c2_start = 0.0;
    double c2_end = 0.0;
};

/// Inertia 0.99 -> 0.2, c1 2.5 -> 0.5, c2 0.5 -> 2.5.
inline constexpr ChannelSchedule g_channel_defaults{0.99, 0.2, 2.5, 0.5, 0.5, 2.5};

/// Inertia 0.9 -> 0.4 with constant c = 1.49445.
inline constexpr ChannelSchedule non_g_channel_defaults{0.9, 0.4, 1.49445, 1.49445, 0.0, 0.0};

struct RunConfig
{
    std::size_t population = 20;
    std::uint64_t max_evals = 100000;
    int threshold_m = 6;
    OperatorKind op = OperatorKind::identity;
    ChannelSchedule non_g_schedule = non_g_channel_defaults;
    ChannelSchedule g_schedule = g_channel_defaults;
    std::uint64_t seed = 1;

    /// Checks the invariants shared by all algorithms. `min_population` is 2
    /// for algorithms that use the learning-probability formula.
    void validate(std::size_t min_population = 2) const
    {
        if (population < min_population)
            throw ConfigError("population must be at least " + std::to_string(min_population));
        if (threshold_m < 1)
            throw ConfigError("total upper threshold M must be at least 1");
        if (max_evals < population)
            throw ConfigError("evaluation budget is smaller than the population");
    }
};

/// Position and cached fitness of the best point found so far.
struct BestPoint
{
    Vector position;
    double fitness = std::numeric_limits<double>::infinity();
};

struct SwarmState
{
    std::vector<Layer> layers;
    BestPoint global_best;
    std::uint64_t evals = 0;
    std::uint64_t iteration = 0;
};

/// Pull out-of-range position components back to the violated bound and
/// zero the matching velocity component.
inline void clamp_in_place(Particle& p, const ProblemSpec& problem)
{
    for (std::size_t d = 0; d < p.position.size(); ++d) {
        if (p.position[d] < problem.lower[d]) {
            p.position[d] = problem.lower[d];
            p.velocity[d] = 0.0;
        }
        else if (p.position[d] > problem.upper[d]) {
            p.position[d] = problem.upper[d];
            p.velocity[d] = 0.0;
        }
    }
}

inline Particle clamp_to_bounds(Particle p, const ProblemSpec& problem)
{
    clamp_in_place(p, problem);
    return p;
}

inline double clamp_velocity(double v, double vmax)
{
    return v > vmax ? vmax : (v < -vmax ? -vmax : v);
}

/// Uniform position in the box, then a uniform velocity in [-Vmax, Vmax];
/// dimensions are drawn in order, positions first.
inline Particle random_particle(const ProblemSpec& problem, Rng& rng)
{
    const std::size_t dim = problem.dimension();
    Particle p{Vector(dim), Vector(dim)};
    for (std::size_t d = 0; d < dim; ++d)
        p.position[d] = problem.lower[d] + rng.uniform() * (problem.upper[d] - problem.lower[d]);
    for (std::size_t d = 0; d < dim; ++d) {
        const double vmax = problem.vmax(d);
        p.velocity[d] = -vmax + 2.0 * vmax * rng.uniform();
    }
    return p;
}

} // namespace chxpso

#endif // CHXPSO_CORE_HPP
