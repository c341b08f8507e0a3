#ifndef CHXPSO_TEST_SUPPORT_HPP
#define CHXPSO_TEST_SUPPORT_HPP

#include "chxpso/benchmarks.hpp"
#include "chxpso/core.hpp"

#include <atomic>
#include <memory>

namespace chxpso::testkit {

/// Wraps a problem's objective so every call is counted.
struct CountingProblem
{
    ProblemSpec problem;
    std::shared_ptr<std::atomic<std::uint64_t>> calls = std::make_shared<std::atomic<std::uint64_t>>(0);

    explicit CountingProblem(ProblemSpec p) : problem(std::move(p))
    {
        auto inner = problem.objective;
        auto counter = calls;
        problem.objective = [inner, counter](std::span<const double> x) {
            ++*counter;
            return inner(x);
        };
    }

    std::uint64_t count() const { return calls->load(); }
};

inline ProblemSpec box_problem(std::size_t dim, double lo, double hi, Objective f, double optimum = 0.0)
{
    return {"test", Vector(dim, lo), Vector(dim, hi), std::move(f), optimum};
}

inline ProblemSpec sphere_problem(std::size_t dim, double lo = -100.0, double hi = 100.0)
{
    return box_problem(dim, lo, hi, [](std::span<const double> x) { return bench::sphere(x); });
}

/// Always returns the same uniform.
struct FixedUniform
{
    double value;
    double uniform() { return value; }
};

} // namespace chxpso::testkit

#endif
