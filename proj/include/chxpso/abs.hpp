#ifndef CHXPSO_ABS_HPP
#define CHXPSO_ABS_HPP

// Adaptive balance search: cap limiter, reward/punishment counters and the
// three-condition selector, combined into one step per layer.

#include "chxpso/channels.hpp"
#include "chxpso/core.hpp"
#include "chxpso/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace chxpso {

struct Thresholds
{
    int non_g;
    int g;

    bool operator==(const Thresholds&) const = default;
};

/// M_nonG = ceil(M (1 - FEs/FEsmax)), M_G = floor(M FEs/FEsmax).
///
/// Computed in exact integer arithmetic so the pair always sums to M.
inline Thresholds thresholds_at(int m, std::uint64_t evals, std::uint64_t max_evals)
{
    if (max_evals == 0 || evals >= max_evals)
        return {0, m};
    const auto mm = static_cast<std::uint64_t>(m);
    const std::uint64_t g = (mm * evals) / max_evals;
    return {m - static_cast<int>(g), static_cast<int>(g)};
}

enum class Condition
{
    explore = 1,                 // non-G channel
    exploit = 2,                 // G channel
    reconstruct_then_explore = 3 // rebuild Q, then non-G channel
};

struct Counters
{
    int alpha_non_g = 0;
    int alpha_g = 0;
    int beta = 0;
};

/// Checks condition 3, then 1, then 2 and returns the first that holds.
inline Condition select_condition(const Counters& c, const Thresholds& t)
{
    if ((c.beta != 0 && c.alpha_non_g > t.non_g) || c.alpha_g > t.g)
        return Condition::reconstruct_then_explore;
    if (c.alpha_non_g <= t.non_g)
        return Condition::explore;
    if (c.alpha_non_g > t.non_g && c.beta == 0 && c.alpha_g <= t.g)
        return Condition::exploit;
    throw std::logic_error("adaptive selector reached a state no condition covers");
}

inline Counters counters_of(const Layer& layer)
{
    return {layer.alpha_non_g, layer.alpha_g, layer.beta};
}

struct StepOutcome
{
    Condition condition = Condition::explore;
    bool layer_improved = false;
    bool global_improved = false;
    int evaluations = 1;
    Thresholds thresholds{0, 0};
};

/// Raised when a layer step is requested with the budget already spent.
class BudgetExhausted : public std::runtime_error
{
public:
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// One step of layer n: thresholds from the current FEs, condition
/// selection, optional reconstruction, one channel update, one evaluation,
/// reward/punishment and best updates. Ties (f(X) == f(L)) count as failures.
inline StepOutcome abs_layer_step(std::size_t n, SwarmState& state, const ConstructionOperator& op,
                                  const RunConfig& config, const ProblemSpec& problem, Rng& rng)
{
    if (state.evals >= config.max_evals)
        throw BudgetExhausted();

    Layer& layer = state.layers[n];
    StepOutcome out;
    out.thresholds = thresholds_at(config.threshold_m, state.evals, config.max_evals);
    out.condition = select_condition(counters_of(layer), out.thresholds);

    if (out.condition == Condition::reconstruct_then_explore) {
        layer.alpha_non_g = 0;
        layer.alpha_g = 0;
        layer.beta = 0;
        layer.guide = op.construct(n, InformationPool(state.layers), rng);
        if (select_condition(counters_of(layer), out.thresholds) != Condition::explore)
            throw std::logic_error("reconstruction did not re-enable exploration");
    }

    if (out.condition == Condition::exploit) {
        const auto k = coefficients_at(config.g_schedule, state.evals, config.max_evals);
        g_update(layer.g, layer.guide, state.global_best.position, k, problem, rng);
        const double f = problem.objective(layer.g.position);
        ++state.evals;
        layer.last_channel = Channel::g;
        if (f >= layer.best_fitness || std::isnan(f)) {
            ++layer.alpha_g;
        }
        else {
            layer.best = layer.g.position;
            layer.best_fitness = f;
            out.layer_improved = true;
            if (f < state.global_best.fitness) {
                layer.alpha_g = 0;
                state.global_best = {layer.best, f};
                out.global_improved = true;
            }
        }
        return out;
    }

    const auto k = coefficients_at(config.non_g_schedule, state.evals, config.max_evals);
    non_g_update(layer.non_g, layer.guide, k, problem, rng);
    const double f = problem.objective(layer.non_g.position);
    ++state.evals;
    layer.last_channel = Channel::non_g;
    if (f >= layer.best_fitness || std::isnan(f)) {
        ++layer.alpha_non_g;
    }
    else {
        layer.alpha_non_g = 0;
        ++layer.beta;
        layer.best = layer.non_g.position;
        layer.best_fitness = f;
        out.layer_improved = true;
        if (f < state.global_best.fitness) {
            state.global_best = {layer.best, f};
            out.global_improved = true;
        }
    }
    return out;
}

} // namespace chxpso

#endif // CHXPSO_ABS_HPP
