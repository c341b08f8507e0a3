#ifndef CHXPSO_ENGINE_HPP
#define CHXPSO_ENGINE_HPP

// The CHxPSO-ABS main loop and the three single-swarm baselines.

#include "chxpso/abs.hpp"
#include "chxpso/channels.hpp"
#include "chxpso/core.hpp"
#include "chxpso/metrics.hpp"
#include "chxpso/operators.hpp"
#include "chxpso/swarm.hpp"

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chxpso {

/// Output of one seeded run. Per-iteration traces cover the main loop only;
/// the initialization evaluations are not an iteration.
struct RunRecord
{
    std::string algorithm;
    std::string function;
    std::uint64_t seed = 0;
    std::uint64_t total_evals = 0;
    double final_error = 0.0;
    std::vector<double> best_error;
    std::vector<double> diversity;       // over the particles employed this iteration
    std::vector<double> diversity_non_g; // NaN when no non-G particle was employed
    std::vector<double> diversity_g;     // NaN when no G particle was employed
    std::vector<int> count_non_g;        // empty for single-swarm algorithms
    std::vector<int> count_g;

    bool layered = false;                // true for the two-channel algorithms

    std::size_t iterations() const { return best_error.size(); }
};

enum class Algorithm
{
    chpso_abs,
    chclpso_abs,
    global_pso,
    cognitive_pso,
    clpso,
};

inline constexpr std::array<Algorithm, 5> all_algorithms{
    Algorithm::chpso_abs, Algorithm::chclpso_abs, Algorithm::global_pso, Algorithm::cognitive_pso,
    Algorithm::clpso};

inline std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::chpso_abs: return "chpso-abs";
    case Algorithm::chclpso_abs: return "chclpso-abs";
    case Algorithm::global_pso: return "global-pso";
    case Algorithm::cognitive_pso: return "cognitive-pso";
    case Algorithm::clpso: return "clpso";
    }
    return "?";
}

inline std::optional<Algorithm> find_algorithm(const std::string& name)
{
    for (Algorithm a : all_algorithms)
        if (to_string(a) == name)
            return a;
    return std::nullopt;
}

/// Per-layer step trace for CHxPSO-ABS, counters taken after the step.
struct StepTrace
{
    std::uint64_t iteration;
    std::size_t layer;
    StepOutcome outcome;
    Counters counters;
    std::uint64_t evals_after;
};

using StepObserver = std::function<void(const StepTrace&)>;

namespace detail {

inline double channel_diversity(const std::vector<std::span<const double>>& positions)
{
    if (positions.empty())
        return std::numeric_limits<double>::quiet_NaN();
    return diversity(std::span<const std::span<const double>>(positions));
}

} // namespace detail

/// CHxPSO-ABS. The operator follows config.op. The main loop runs whole
/// iterations of N layer steps while k < floor(FEsmax / N), so the run never
/// exceeds the budget.
inline RunRecord run_chxpso_abs(const ProblemSpec& problem, const RunConfig& config,
                                const StepObserver& observer = {})
{
    problem.validate();
    config.validate(2);
    Rng rng(config.seed);
    const auto op = make_operator(config.op, config.population);
    SwarmState state = init_swarm(problem, config, *op, rng);

    RunRecord rec;
    rec.algorithm = config.op == OperatorKind::identity ? "chpso-abs" : "chclpso-abs";
    rec.layered = true;
    rec.function = problem.name;
    rec.seed = config.seed;

    const std::uint64_t n_layers = config.population;
    const std::uint64_t max_iterations = config.max_evals / n_layers;
    std::vector<std::span<const double>> all, non_g, g;
    while (state.iteration < max_iterations) {
        ++state.iteration;
        for (std::size_t n = 0; n < state.layers.size(); ++n) {
            const StepOutcome outcome = abs_layer_step(n, state, *op, config, problem, rng);
            if (observer)
                observer({state.iteration, n, outcome, counters_of(state.layers[n]), state.evals});
        }
        all.clear();
        non_g.clear();
        g.clear();
        for (const auto& layer : state.layers) {
            if (layer.last_channel == Channel::g) {
                g.push_back(layer.g.position);
                all.push_back(layer.g.position);
            }
            else {
                non_g.push_back(layer.non_g.position);
                all.push_back(layer.non_g.position);
            }
        }
        rec.best_error.push_back(state.global_best.fitness - problem.optimum);
        rec.diversity.push_back(detail::channel_diversity(all));
        rec.diversity_non_g.push_back(detail::channel_diversity(non_g));
        rec.diversity_g.push_back(detail::channel_diversity(g));
        rec.count_non_g.push_back(static_cast<int>(non_g.size()));
        rec.count_g.push_back(static_cast<int>(g.size()));
    }
    rec.total_evals = state.evals;
    rec.final_error = state.global_best.fitness - problem.optimum;
    return rec;
}

/// Personal-best swarm shared by the single-swarm baselines.
struct BaselineSwarm
{
    std::vector<Particle> particles;
    std::vector<BestPoint> personal;
    BestPoint global;
    std::uint64_t evals = 0;

    static BaselineSwarm create(const ProblemSpec& problem, std::size_t population, Rng& rng)
    {
        BaselineSwarm s;
        for (std::size_t n = 0; n < population; ++n) {
            s.particles.push_back(random_particle(problem, rng));
            const double f = problem.objective(s.particles.back().position);
            ++s.evals;
            s.personal.push_back({s.particles.back().position, f});
            if (s.global.position.empty() || f < s.global.fitness)
                s.global = s.personal.back();
        }
        return s;
    }

    /// Evaluates particle n, updating personal and global bests on strict
    /// improvement. Returns whether the personal best improved.
    bool evaluate(std::size_t n, const ProblemSpec& problem)
    {
        const double f = problem.objective(particles[n].position);
        ++evals;
        if (!(f < personal[n].fitness))
            return false;
        personal[n] = {particles[n].position, f};
        if (f < global.fitness)
            global = personal[n];
        return true;
    }

    double current_diversity() const
    {
        std::vector<std::span<const double>> views;
        for (const auto& p : particles)
            views.emplace_back(p.position);
        return diversity(std::span<const std::span<const double>>(views));
    }
};

namespace detail {

inline void record_baseline_iteration(RunRecord& rec, const BaselineSwarm& s, const ProblemSpec& problem)
{
    rec.best_error.push_back(s.global.fitness - problem.optimum);
    rec.diversity.push_back(s.current_diversity());
}

inline RunRecord start_record(std::string algorithm, const ProblemSpec& problem, const RunConfig& config)
{
    RunRecord rec;
    rec.algorithm = std::move(algorithm);
    rec.function = problem.name;
    rec.seed = config.seed;
    return rec;
}

template <class StepFn>
RunRecord run_baseline(std::string algorithm, const ProblemSpec& problem, const RunConfig& config,
                       std::size_t min_population, StepFn&& step)
{
    problem.validate();
    config.validate(min_population);
    Rng rng(config.seed);
    BaselineSwarm swarm = BaselineSwarm::create(problem, config.population, rng);
    RunRecord rec = start_record(std::move(algorithm), problem, config);
    const std::uint64_t max_iterations = config.max_evals / config.population;
    std::uint64_t iteration = 1;
    while (iteration < max_iterations) {
        ++iteration;
        for (std::size_t n = 0; n < swarm.particles.size(); ++n)
            step(swarm, n, iteration, rng);
        record_baseline_iteration(rec, swarm, problem);
    }
    rec.total_evals = swarm.evals;
    rec.final_error = swarm.global.fitness - problem.optimum;
    return rec;
}

} // namespace detail

/// Global-best PSO with time-varying inertia and acceleration (config.g_schedule).
/// The global best is updated as soon as any particle improves on it.
inline RunRecord run_global_pso(const ProblemSpec& problem, const RunConfig& config)
{
    return detail::run_baseline(
        "global-pso", problem, config, 1,
        [&](BaselineSwarm& s, std::size_t n, std::uint64_t, Rng& rng) {
            const auto k = coefficients_at(config.g_schedule, s.evals, config.max_evals);
            g_update(s.particles[n], s.personal[n].position, s.global.position, k, problem, rng);
            s.evaluate(n, problem);
        });
}

/// Cognitive-only PSO: the global PSO schedule without the social term.
inline RunRecord run_cognitive_pso(const ProblemSpec& problem, const RunConfig& config)
{
    return detail::run_baseline(
        "cognitive-pso", problem, config, 1,
        [&](BaselineSwarm& s, std::size_t n, std::uint64_t, Rng& rng) {
            const auto k = coefficients_at(config.g_schedule, s.evals, config.max_evals);
            non_g_update(s.particles[n], s.personal[n].position, k, problem, rng);
            s.evaluate(n, problem);
        });
}

inline constexpr int clpso_refreshing_gap = 7;

struct ClpsoEvent
{
    enum class Kind
    {
        refreshed,
        improved,
        failed,
    };
    std::uint64_t iteration;
    std::size_t particle;
    Kind kind;
};

using ClpsoObserver = std::function<void(const ClpsoEvent&)>;

/// Canonical CLPSO over personal bests (config.non_g_schedule). Exemplars are
/// per-dimension particle indices, so they follow later improvements of the
/// chosen personal bests. A particle's exemplar is refreshed before its update
/// once it has failed to improve `clpso_refreshing_gap` times in a row.
inline RunRecord run_clpso(const ProblemSpec& problem, const RunConfig& config,
                           const ClpsoObserver& observer = {})
{
    problem.validate();
    config.validate(2);
    Rng rng(config.seed);
    BaselineSwarm swarm = BaselineSwarm::create(problem, config.population, rng);
    const std::size_t pop = config.population, dim = problem.dimension();

    std::vector<double> pc(pop);
    for (std::size_t n = 0; n < pop; ++n)
        pc[n] = learning_probability(n + 1, pop);
    auto choose = [&](std::size_t n) {
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < pop; ++i)
            if (i != n)
                others.push_back(i);
        return choose_cl_sources(
            n, others, [&](std::size_t i) { return swarm.personal[i].fitness; }, pc[n], dim, rng);
    };
    std::vector<std::vector<std::size_t>> exemplar(pop);
    for (std::size_t n = 0; n < pop; ++n)
        exemplar[n] = choose(n);
    std::vector<int> stall(pop, 0);

    RunRecord rec = detail::start_record("clpso", problem, config);
    const std::uint64_t max_iterations = config.max_evals / pop;
    std::uint64_t iteration = 1;
    Vector guide(dim);
    while (iteration < max_iterations) {
        ++iteration;
        for (std::size_t n = 0; n < pop; ++n) {
            if (stall[n] >= clpso_refreshing_gap) {
                exemplar[n] = choose(n);
                stall[n] = 0;
                if (observer)
                    observer({iteration, n, ClpsoEvent::Kind::refreshed});
            }
            for (std::size_t d = 0; d < dim; ++d)
                guide[d] = swarm.personal[exemplar[n][d]].position[d];
            const auto k = coefficients_at(config.non_g_schedule, swarm.evals, config.max_evals);
            non_g_update(swarm.particles[n], guide, k, problem, rng);
            const bool improved = swarm.evaluate(n, problem);
            stall[n] = improved ? 0 : stall[n] + 1;
            if (observer)
                observer({iteration, n, improved ? ClpsoEvent::Kind::improved : ClpsoEvent::Kind::failed});
        }
        detail::record_baseline_iteration(rec, swarm, problem);
    }
    rec.total_evals = swarm.evals;
    rec.final_error = swarm.global.fitness - problem.optimum;
    return rec;
}

/// Runs the named algorithm; CHxPSO variants override config.op.
inline RunRecord run_algorithm(Algorithm algorithm, const ProblemSpec& problem, RunConfig config)
{
    switch (algorithm) {
    case Algorithm::chpso_abs:
        config.op = OperatorKind::identity;
        return run_chxpso_abs(problem, config);
    case Algorithm::chclpso_abs:
        config.op = OperatorKind::comprehensive_learning;
        return run_chxpso_abs(problem, config);
    case Algorithm::global_pso: return run_global_pso(problem, config);
    case Algorithm::cognitive_pso: return run_cognitive_pso(problem, config);
    case Algorithm::clpso: return run_clpso(problem, config);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace chxpso

#endif // CHXPSO_ENGINE_HPP
