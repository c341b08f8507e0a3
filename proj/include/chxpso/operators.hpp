#ifndef CHXPSO_OPERATORS_HPP
#define CHXPSO_OPERATORS_HPP

// Information pool and the pluggable operators that build each layer's
// guidance vector Q from the layer bests.

#include "chxpso/core.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace chxpso {

/// Read view over the layer bests plus the channel each layer used last.
///
/// The view aliases the swarm's layers, so it always reflects the latest L.
class InformationPool
{
public:
    explicit InformationPool(std::span<const Layer> layers) : layers_(layers) {}

    std::size_t size() const { return layers_.size(); }
    std::span<const double> best(std::size_t n) const { return layers_[n].best; }
    double best_fitness(std::size_t n) const { return layers_[n].best_fitness; }
    Channel last_channel(std::size_t n) const { return layers_[n].last_channel; }

    /// Layers eligible as exemplars for a reconstruction that feeds `channel`:
    /// layers whose last step used that channel, plus layers with no history.
    /// `exclude` is left out.
    std::vector<std::size_t> active(Channel channel, std::size_t exclude) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            if (i == exclude)
                continue;
            const Channel c = layers_[i].last_channel;
            if (c == Channel::none || c == channel)
                out.push_back(i);
        }
        return out;
    }

private:
    std::span<const Layer> layers_;
};

/// Pc_n = 0.05 + 0.45 (exp(10 (n-1)/(N-1)) - 1) / (exp(10) - 1), n is 1-based.
inline double learning_probability(std::size_t n, std::size_t population)
{
    if (population < 2)
        throw ConfigError("learning probability needs a population of at least 2");
    if (n < 1 || n > population)
        throw InputError("layer index out of range");
    const double t = 10.0 * static_cast<double>(n - 1) / static_cast<double>(population - 1);
    return 0.05 + 0.45 * std::expm1(t) / std::expm1(10.0);
}

/// Picks, per dimension, which candidate's best to copy (comprehensive
/// learning). Returns source indices; `self` marks "copy from own best".
///
/// Draw order per dimension d = 0..D-1: one uniform u; if u < pc and there
/// are at least two candidates, index(C) for the first pick and index(C-1)
/// for the second (skipping the first); the lower fitness wins and ties go to
/// the first pick. With one candidate no index is drawn. If no dimension
/// learned from another layer, index(D) picks a dimension and index(C) a
/// candidate for it.
template <class Fitness>
std::vector<std::size_t> choose_cl_sources(std::size_t self, std::span<const std::size_t> candidates,
                                           Fitness&& fitness, double pc, std::size_t dim, Rng& rng)
{
    std::vector<std::size_t> source(dim, self);
    if (candidates.empty())
        return source;
    bool learned = false;
    for (std::size_t d = 0; d < dim; ++d) {
        if (rng.uniform() >= pc)
            continue;
        if (candidates.size() == 1) {
            source[d] = candidates[0];
        }
        else {
            const std::size_t i = rng.index(candidates.size());
            std::size_t j = rng.index(candidates.size() - 1);
            if (j >= i)
                ++j;
            const std::size_t a = candidates[i], b = candidates[j];
            source[d] = fitness(b) < fitness(a) ? b : a;
        }
        learned = true;
    }
    if (!learned) {
        const std::size_t d = rng.index(dim);
        source[d] = candidates[rng.index(candidates.size())];
    }
    return source;
}

/// Q_n = L_n, copied.
inline Vector construct_identity(std::size_t n, const InformationPool& pool)
{
    const auto best = pool.best(n);
    return Vector(best.begin(), best.end());
}

/// Comprehensive-learning construction over the active layers. Falls back to
/// identity when no other layer is active.
inline Vector construct_cl(std::size_t n, const InformationPool& pool, double pc, Rng& rng,
                           Channel channel = Channel::non_g)
{
    const auto candidates = pool.active(channel, n);
    if (candidates.empty())
        return construct_identity(n, pool);
    const std::size_t dim = pool.best(n).size();
    const auto source = choose_cl_sources(
        n, candidates, [&](std::size_t i) { return pool.best_fitness(i); }, pc, dim, rng);
    Vector q(dim);
    for (std::size_t d = 0; d < dim; ++d)
        q[d] = pool.best(source[d])[d];
    return q;
}

/// Builds guidance vectors for layers. Implementations must be stateless
/// apart from configuration; randomness comes from the supplied stream.
class ConstructionOperator
{
public:
    virtual ~ConstructionOperator() = default;
    virtual Vector construct(std::size_t n, const InformationPool& pool, Rng& rng) const = 0;
    virtual OperatorKind kind() const = 0;
};

class IdentityOperator final : public ConstructionOperator
{
public:
    Vector construct(std::size_t n, const InformationPool& pool, Rng&) const override
    {
        return construct_identity(n, pool);
    }
    OperatorKind kind() const override { return OperatorKind::identity; }
};

class ComprehensiveLearningOperator final : public ConstructionOperator
{
public:
    explicit ComprehensiveLearningOperator(std::size_t population)
    {
        pc_.reserve(population);
        for (std::size_t n = 1; n <= population; ++n)
            pc_.push_back(learning_probability(n, population));
    }

    Vector construct(std::size_t n, const InformationPool& pool, Rng& rng) const override
    {
        return construct_cl(n, pool, pc_.at(n), rng);
    }
    OperatorKind kind() const override { return OperatorKind::comprehensive_learning; }

    double probability(std::size_t n) const { return pc_.at(n); }

private:
    std::vector<double> pc_;
};

inline std::unique_ptr<ConstructionOperator> make_operator(OperatorKind kind, std::size_t population)
{
    if (kind == OperatorKind::identity)
        return std::make_unique<IdentityOperator>();
    return std::make_unique<ComprehensiveLearningOperator>(population);
}

} // namespace chxpso

#endif // CHXPSO_OPERATORS_HPP
