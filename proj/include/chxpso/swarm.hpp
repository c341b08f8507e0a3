#ifndef CHXPSO_SWARM_HPP
#define CHXPSO_SWARM_HPP

#include "chxpso/core.hpp"
#include "chxpso/operators.hpp"

namespace chxpso {

/// Samples N layers, duplicates each into its non-G and G particle, sets
/// L_n = X_n (one evaluation per layer), picks G and builds every Q_n.
///
/// Draw order: layer 1..N particles (see random_particle), then operator
/// draws for layers 1..N.
inline SwarmState init_swarm(const ProblemSpec& problem, const RunConfig& config,
                             const ConstructionOperator& op, Rng& rng)
{
    problem.validate();
    config.validate();

    SwarmState state;
    state.layers.resize(config.population);
    for (auto& layer : state.layers) {
        layer.non_g = random_particle(problem, rng);
        layer.g = layer.non_g;
        layer.best = layer.non_g.position;
        layer.best_fitness = problem.objective(layer.best);
        ++state.evals;
        if (state.global_best.position.empty() || layer.best_fitness < state.global_best.fitness)
            state.global_best = {layer.best, layer.best_fitness};
    }
    const InformationPool pool(state.layers);
    for (std::size_t n = 0; n < state.layers.size(); ++n)
        state.layers[n].guide = op.construct(n, pool, rng);
    state.iteration = 1;
    return state;
}

} // namespace chxpso

#endif // CHXPSO_SWARM_HPP
