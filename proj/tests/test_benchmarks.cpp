#include "chxpso/benchmarks.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace chxpso;
using namespace chxpso::bench;

namespace {

double orthogonality_error(const Matrix& r)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t j = 0; j < r.n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < r.n; ++k)
                s += r(k, i) * r(k, j);
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace

TEST(BaseFunctions, AnalyticOptimaAreZero)
{
    const Vector zero(10, 0.0);
    EXPECT_EQ(plain_function(BaseFunction::sphere, 10)(zero), 0.0);
    EXPECT_EQ(plain_function(BaseFunction::rastrigin, 10)(zero), 0.0);
    for (auto f : {BaseFunction::bent_cigar, BaseFunction::rosenbrock, BaseFunction::ackley,
                   BaseFunction::griewank, BaseFunction::schwefel})
        EXPECT_NEAR(plain_function(f, 10)(zero), 0.0, 1e-9) << to_string(f);
}

TEST(BaseFunctions, RastriginOneStepFromOrigin)
{
    // 1 + 10 - 10 cos(2 pi)
    EXPECT_NEAR(plain_function(BaseFunction::rastrigin, 2)(Vector{1.0, 0.0}), 1.0, 1e-12);
}

TEST(BaseFunctions, BentCigarWeightsTail)
{
    EXPECT_EQ(plain_function(BaseFunction::bent_cigar, 2)(Vector{0.0, 1.0}), 1e6);
    EXPECT_EQ(plain_function(BaseFunction::bent_cigar, 2)(Vector{1.0, 0.0}), 1.0);
}

TEST(BaseFunctions, SchwefelPenaltyKeepsOptimumInside)
{
    const auto f = plain_function(BaseFunction::schwefel, 2);
    EXPECT_GT(f(Vector{-900.0, 600.0}), 0.0);
    EXPECT_GT(f(Vector{400.0, -400.0}), 0.0);
}

TEST(TransformedFunction, DimensionMismatchIsInputError)
{
    EXPECT_THROW(plain_function(BaseFunction::sphere, 3)(Vector{1.0, 2.0}), InputError);
}

TEST(TransformedFunction, BiasIsAddedAndShiftMovesOptimum)
{
    Rng rng(5);
    TransformedFunction f{BaseFunction::rastrigin, Vector{1.0, -2.0, 0.5}, make_rotation(3, rng), 300.0};
    EXPECT_NEAR(f(f.shift), 300.0, 1e-12);
    EXPECT_GT(f(Vector{0.0, 0.0, 0.0}), 300.0);
}

TEST(MakeRotation, OneDimensionalIsPlusMinusOne)
{
    Rng rng(17);
    const Matrix r = make_rotation(1, rng);
    EXPECT_EQ(std::abs(r(0, 0)), 1.0);
}

TEST(MakeRotation, OrthogonalForSeveralSizesAndSeeds)
{
    for (std::size_t dim : {2u, 3u, 10u, 30u, 50u})
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Rng rng(seed);
            EXPECT_LT(orthogonality_error(make_rotation(dim, rng)), 1e-10) << dim << " " << seed;
        }
}

TEST(MakeRotation, DeterministicForSeed)
{
    Rng a(99), b(99);
    EXPECT_EQ(make_rotation(10, a), make_rotation(10, b));
}

TEST(MakeRotation, RotationDoesNotChangeValueAtOptimum)
{
    const Vector o{3.0, -1.0, 2.0, 0.5};
    for (std::uint64_t seed = 1; seed < 10; ++seed) {
        Rng rng(seed);
        TransformedFunction f{BaseFunction::griewank, o, make_rotation(4, rng), 12.0};
        EXPECT_NEAR(f(o), 12.0, 1e-12);
    }
}

TEST(Suite, ContainsRequiredEntriesAndVariants)
{
    std::set<std::string> names;
    for (const auto& e : suite())
        names.insert(e.name);
    for (std::string base : {"sphere", "bent_cigar", "rosenbrock", "rastrigin", "ackley", "griewank",
                             "schwefel", "composition_1", "composition_2", "hybrid_1"})
        for (std::string v : {"", "_shifted", "_shifted_rotated"})
            for (std::string d : {"_2d", "_10d", "_30d"})
                EXPECT_TRUE(names.count(base + v + d)) << base + v + d;
    EXPECT_TRUE(names.count("rastrigin_shifted_rotated_10d"));
}

TEST(Suite, GroupsAndDomains)
{
    int complex = 0;
    for (const auto& e : suite(10)) {
        if (e.group == Group::complex_multimodal)
            ++complex;
        if (e.name.rfind("schwefel", 0) == 0)
            EXPECT_EQ(e.upper, 500.0);
        else if (e.name.rfind("rastrigin", 0) == 0)
            EXPECT_EQ(e.upper, 5.12);
        else
            EXPECT_EQ(e.upper, 100.0);
        EXPECT_EQ(e.lower, -e.upper);
    }
    EXPECT_GE(complex, 6);
}

TEST(Suite, EveryEntryReachesItsOptimumAtTheShift)
{
    for (const auto& e : suite()) {
        ASSERT_EQ(e.optimum_point.size(), e.dimension) << e.name;
        EXPECT_NEAR(e.objective(e.optimum_point), e.optimum, 1e-9) << e.name;
        for (std::size_t d = 0; d < e.dimension; ++d) {
            EXPECT_GE(e.optimum_point[d], e.lower) << e.name;
            EXPECT_LE(e.optimum_point[d], e.upper) << e.name;
        }
    }
}

TEST(Suite, FiniteAndDeterministicOverTheBox)
{
    Rng rng(123);
    for (const auto& e : suite(10)) {
        for (int trial = 0; trial < 50; ++trial) {
            Vector x(e.dimension);
            for (double& v : x) {
                const double u = rng.uniform();
                v = trial == 0 ? e.lower : (trial == 1 ? e.upper : e.lower + u * (e.upper - e.lower));
            }
            const double f1 = e.objective(x);
            ASSERT_TRUE(std::isfinite(f1)) << e.name;
            ASSERT_GE(f1, e.optimum - 1e-9) << e.name;
            ASSERT_EQ(f1, e.objective(x)) << e.name;
        }
    }
}

TEST(Suite, RebuildingGivesIdenticalData)
{
    const auto a = suite(10), b = suite(10);
    Rng rng(8);
    Vector x(10);
    for (double& v : x)
        v = -50.0 + 100.0 * rng.uniform();
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].name, b[i].name);
        EXPECT_EQ(a[i].optimum_point, b[i].optimum_point);
        EXPECT_EQ(a[i].objective(x), b[i].objective(x));
    }
}

TEST(Suite, FindFunctionByName)
{
    const auto f = find_function("rastrigin_shifted_rotated_10d");
    ASSERT_TRUE(f);
    EXPECT_EQ(f->dimension, 10u);
    EXPECT_FALSE(find_function("nope_10d"));
    EXPECT_FALSE(find_function("rastrigin"));
    EXPECT_TRUE(find_function("sphere_5d")); // any dimension resolves
}
