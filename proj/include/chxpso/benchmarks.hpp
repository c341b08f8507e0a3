#ifndef CHXPSO_BENCHMARKS_HPP
#define CHXPSO_BENCHMARKS_HPP

// Classical test functions with shift and rotation transforms, grouped as
// unimodal, simple multimodal and complex (composed/hybrid) multimodal.

#include "chxpso/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace chxpso::bench {

inline double sqr(double x) { return x * x; }

inline double sphere(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z)
        s += v * v;
    return s;
}

inline double bent_cigar(std::span<const double> z)
{
    double s = z[0] * z[0];
    for (std::size_t i = 1; i < z.size(); ++i)
        s += 1e6 * z[i] * z[i];
    return s;
}

/// Minimum at z = (1, ..., 1); callers add the unit offset.
inline double rosenbrock(std::span<const double> z)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
        s += 100.0 * sqr(z[i + 1] - z[i] * z[i]) + sqr(z[i] - 1.0);
    return s;
}

inline double rastrigin(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z)
        s += v * v - 10.0 * std::cos(2.0 * M_PI * v) + 10.0;
    return s;
}

inline double ackley(std::span<const double> z)
{
    const double n = static_cast<double>(z.size());
    double sq = 0.0, cs = 0.0;
    for (double v : z) {
        sq += v * v;
        cs += std::cos(2.0 * M_PI * v);
    }
    const double value = -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + M_E;
    return value < 0.0 ? 0.0 : value; // rounding at the optimum
}

inline double griewank(std::span<const double> z)
{
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s += z[i] * z[i];
        p *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s / 4000.0 - p + 1.0;
}

inline constexpr double schwefel_offset = 420.9687462275036;
inline constexpr double schwefel_constant = 418.9828872724338;

/// Modified Schwefel with the minimum moved to z = 0 and a quadratic penalty
/// outside [-500, 500] so the optimum stays inside the box.
inline double schwefel(std::span<const double> y)
{
    const double n = static_cast<double>(y.size());
    double s = 0.0;
    for (double yi : y) {
        const double z = yi + schwefel_offset;
        if (z > 500.0) {
            const double m = 500.0 - std::fmod(z, 500.0);
            s += m * std::sin(std::sqrt(std::abs(m))) - sqr(z - 500.0) / (10000.0 * n);
        }
        else if (z < -500.0) {
            const double m = std::fmod(std::abs(z), 500.0) - 500.0;
            s += m * std::sin(std::sqrt(std::abs(m))) - sqr(z + 500.0) / (10000.0 * n);
        }
        else {
            s += z * std::sin(std::sqrt(std::abs(z)));
        }
    }
    const double value = schwefel_constant * n - s;
    return std::abs(value) < 1e-9 ? 0.0 : value;
}

enum class BaseFunction
{
    sphere,
    bent_cigar,
    rosenbrock,
    rastrigin,
    ackley,
    griewank,
    schwefel,
};

inline std::string to_string(BaseFunction f)
{
    switch (f) {
    case BaseFunction::sphere: return "sphere";
    case BaseFunction::bent_cigar: return "bent_cigar";
    case BaseFunction::rosenbrock: return "rosenbrock";
    case BaseFunction::rastrigin: return "rastrigin";
    case BaseFunction::ackley: return "ackley";
    case BaseFunction::griewank: return "griewank";
    case BaseFunction::schwefel: return "schwefel";
    }
    return "?";
}

/// Base value at z, where z is already shifted and rotated. Rosenbrock's unit
/// offset is applied here so every base has its minimum at z = 0.
inline double evaluate_base(BaseFunction f, std::span<const double> z)
{
    switch (f) {
    case BaseFunction::sphere: return sphere(z);
    case BaseFunction::bent_cigar: return bent_cigar(z);
    case BaseFunction::rosenbrock: {
        Vector shifted(z.begin(), z.end());
        for (double& v : shifted)
            v += 1.0;
        return rosenbrock(shifted);
    }
    case BaseFunction::rastrigin: return rastrigin(z);
    case BaseFunction::ackley: return ackley(z);
    case BaseFunction::griewank: return griewank(z);
    case BaseFunction::schwefel: return schwefel(z);
    }
    return 0.0;
}

/// Row-major square matrix.
struct Matrix
{
    std::size_t n = 0;
    std::vector<double> a;

    static Matrix identity(std::size_t n)
    {
        Matrix m{n, std::vector<double>(n * n, 0.0)};
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    bool operator==(const Matrix&) const = default;
};

/// Random orthogonal matrix: a Gaussian matrix (row-major draw order)
/// orthonormalized row by row with twice-applied modified Gram-Schmidt.
inline Matrix make_rotation(std::size_t dim, Rng& rng)
{
    if (dim == 0)
        throw InputError("rotation dimension must be positive");
    Matrix m{dim, std::vector<double>(dim * dim)};
    for (double& v : m.a)
        v = rng.normal();
    for (std::size_t i = 0; i < dim; ++i) {
        double* row = &m.a[i * dim];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < i; ++j) {
                const double* prev = &m.a[j * dim];
                double dot = 0.0;
                for (std::size_t k = 0; k < dim; ++k)
                    dot += row[k] * prev[k];
                for (std::size_t k = 0; k < dim; ++k)
                    row[k] -= dot * prev[k];
            }
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
            norm += row[k] * row[k];
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < dim; ++k)
            row[k] /= norm;
    }
    return m;
}

/// base(R (x - o)) + bias.
struct TransformedFunction
{
    BaseFunction base = BaseFunction::sphere;
    Vector shift;
    Matrix rotation;
    double bias = 0.0;

    std::size_t dimension() const { return shift.size(); }

    /// The transformed argument z = R (x - o).
    Vector transform(std::span<const double> x) const
    {
        const std::size_t dim = shift.size();
        Vector diff(dim), z(dim, 0.0);
        for (std::size_t d = 0; d < dim; ++d)
            diff[d] = x[d] - shift[d];
        for (std::size_t i = 0; i < dim; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                s += rotation(i, j) * diff[j];
            z[i] = s;
        }
        return z;
    }

    double operator()(std::span<const double> x) const
    {
        if (x.size() != shift.size())
            throw InputError("expected a point of dimension " + std::to_string(shift.size()) +
                             ", got " + std::to_string(x.size()));
        return evaluate_base(base, transform(x)) + bias;
    }
};

/// Unshifted, unrotated instance.
inline TransformedFunction plain_function(BaseFunction base, std::size_t dim, double bias = 0.0)
{
    return {base, Vector(dim, 0.0), Matrix::identity(dim), bias};
}

/// CEC-style composition: Gaussian proximity weights over component optima,
/// value sum_i w_i (lambda_i g_i(x) + bias_i).
struct CompositionFunction
{
    struct Component
    {
        TransformedFunction fn;
        double sigma;
        double lambda;
        double bias;
    };
    std::vector<Component> components;

    double operator()(std::span<const double> x) const
    {
        const std::size_t dim = components.front().fn.dimension();
        if (x.size() != dim)
            throw InputError("expected a point of dimension " + std::to_string(dim) + ", got " +
                             std::to_string(x.size()));
        std::vector<double> weights(components.size());
        std::vector<double> values(components.size());
        double total = 0.0;
        for (std::size_t i = 0; i < components.size(); ++i) {
            const auto& c = components[i];
            double dist2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d)
                dist2 += sqr(x[d] - c.fn.shift[d]);
            values[i] = c.lambda * c.fn(x) + c.bias;
            if (dist2 == 0.0)
                return values[i];
            weights[i] = std::exp(-dist2 / (2.0 * static_cast<double>(dim) * c.sigma * c.sigma)) /
                         std::sqrt(dist2);
            total += weights[i];
        }
        if (total == 0.0) // far from every optimum: equal weights
            return std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
        double s = 0.0;
        for (std::size_t i = 0; i < components.size(); ++i)
            s += weights[i] / total * values[i];
        return s;
    }
};

/// Hybrid function: a shifted, rotated and permuted argument split into
/// consecutive blocks, each block fed to a different base.
struct HybridFunction
{
    TransformedFunction transform; // its base is unused
    std::vector<std::size_t> permutation;
    std::vector<std::pair<BaseFunction, std::size_t>> blocks; // (base, length)

    double operator()(std::span<const double> x) const
    {
        if (x.size() != transform.dimension())
            throw InputError("expected a point of dimension " +
                             std::to_string(transform.dimension()) + ", got " +
                             std::to_string(x.size()));
        const Vector z = transform.transform(x);
        Vector permuted(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            permuted[i] = z[permutation[i]];
        double s = 0.0;
        std::size_t offset = 0;
        for (const auto& [base, len] : blocks) {
            if (len == 0)
                continue;
            s += evaluate_base(base, std::span<const double>(permuted).subspan(offset, len));
            offset += len;
        }
        return s + transform.bias;
    }
};

enum class Group
{
    unimodal,
    simple_multimodal,
    complex_multimodal,
};

inline std::string to_string(Group g)
{
    switch (g) {
    case Group::unimodal: return "unimodal";
    case Group::simple_multimodal: return "simple-multimodal";
    case Group::complex_multimodal: return "complex-multimodal";
    }
    return "?";
}

enum class Variant
{
    plain,
    shifted,
    shifted_rotated,
};

/// A named suite entry. `optimum_point` is where the value equals `optimum`.
struct SuiteEntry
{
    std::string name;
    Group group;
    Variant variant;
    std::size_t dimension;
    double lower;
    double upper;
    Objective objective;
    double optimum = 0.0;
    Vector optimum_point;

    ProblemSpec problem() const
    {
        return {name, Vector(dimension, lower), Vector(dimension, upper), objective, optimum};
    }
};

inline std::string variant_suffix(Variant v)
{
    switch (v) {
    case Variant::plain: return "";
    case Variant::shifted: return "_shifted";
    case Variant::shifted_rotated: return "_shifted_rotated";
    }
    return "";
}

inline std::pair<double, double> default_domain(BaseFunction f)
{
    if (f == BaseFunction::schwefel)
        return {-500.0, 500.0};
    if (f == BaseFunction::rastrigin)
        return {-5.12, 5.12};
    return {-100.0, 100.0};
}

namespace detail {

// Stable per-entry seed so that suite data never depends on construction order.
inline std::uint64_t entry_seed(const std::string& key, std::size_t dim)
{
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h ^ (static_cast<std::uint64_t>(dim) * 0x9e3779b97f4a7c15ull);
}

inline Vector random_shift(std::size_t dim, double lower, double upper, Rng& rng)
{
    Vector o(dim);
    for (double& v : o)
        v = 0.8 * (lower + rng.uniform() * (upper - lower));
    return o;
}

inline TransformedFunction make_transformed(BaseFunction base, std::size_t dim, Variant variant,
                                            double lower, double upper, Rng& rng)
{
    TransformedFunction fn = plain_function(base, dim);
    if (variant != Variant::plain)
        fn.shift = random_shift(dim, lower, upper, rng);
    if (variant == Variant::shifted_rotated)
        fn.rotation = make_rotation(dim, rng);
    return fn;
}

} // namespace detail

/// Suite entries for one dimension.
inline std::vector<SuiteEntry> suite(std::size_t dim)
{
    std::vector<SuiteEntry> entries;
    const std::array<std::pair<BaseFunction, Group>, 7> singles{{
        {BaseFunction::sphere, Group::unimodal},
        {BaseFunction::bent_cigar, Group::unimodal},
        {BaseFunction::rosenbrock, Group::unimodal},
        {BaseFunction::rastrigin, Group::simple_multimodal},
        {BaseFunction::ackley, Group::simple_multimodal},
        {BaseFunction::griewank, Group::simple_multimodal},
        {BaseFunction::schwefel, Group::simple_multimodal},
    }};
    const std::array<Variant, 3> variants{Variant::plain, Variant::shifted,
                                          Variant::shifted_rotated};
    const std::string dim_suffix = "_" + std::to_string(dim) + "d";

    for (const auto& [base, group] : singles) {
        const auto [lo, hi] = default_domain(base);
        for (Variant v : variants) {
            const std::string name = to_string(base) + variant_suffix(v) + dim_suffix;
            Rng rng(detail::entry_seed(name, dim));
            auto fn = std::make_shared<const TransformedFunction>(
                detail::make_transformed(base, dim, v, lo, hi, rng));
            entries.push_back({name, group, v, dim, lo, hi,
                               [fn](std::span<const double> x) { return (*fn)(x); }, fn->bias,
                               fn->shift});
        }
    }

    // Compositions over [-100, 100]; the first component holds the global optimum.
    struct CompositionRecipe
    {
        std::string name;
        std::array<BaseFunction, 3> bases;
        std::array<double, 3> sigma;
        std::array<double, 3> lambda;
    };
    const std::array<CompositionRecipe, 2> recipes{{
        {"composition_1",
         {BaseFunction::rastrigin, BaseFunction::griewank, BaseFunction::sphere},
         {10.0, 20.0, 30.0},
         {1.0, 10.0, 1e-6}},
        {"composition_2",
         {BaseFunction::ackley, BaseFunction::bent_cigar, BaseFunction::schwefel},
         {10.0, 20.0, 20.0},
         {1.0, 1e-6, 1.0}},
    }};
    for (const auto& recipe : recipes) {
        for (Variant v : variants) {
            const std::string name = recipe.name + variant_suffix(v) + dim_suffix;
            Rng rng(detail::entry_seed(name, dim));
            auto comp = std::make_shared<CompositionFunction>();
            for (std::size_t i = 0; i < 3; ++i) {
                // plain: first optimum at the origin, no rotation
                Variant component_variant = v;
                if (v == Variant::plain)
                    component_variant = i == 0 ? Variant::plain : Variant::shifted;
                auto fn = detail::make_transformed(recipe.bases[i], dim, component_variant, -100.0,
                                                   100.0, rng);
                comp->components.push_back(
                    {std::move(fn), recipe.sigma[i], recipe.lambda[i], 100.0 * static_cast<double>(i)});
            }
            const Vector opt = comp->components.front().fn.shift;
            std::shared_ptr<const CompositionFunction> shared = comp;
            entries.push_back({name, Group::complex_multimodal, v, dim, -100.0, 100.0,
                               [shared](std::span<const double> x) { return (*shared)(x); }, 0.0,
                               opt});
        }
    }

    // Hybrid: 30% sphere-like (bent cigar), 30% rastrigin, 40% ackley.
    for (Variant v : variants) {
        const std::string name = std::string("hybrid_1") + variant_suffix(v) + dim_suffix;
        Rng rng(detail::entry_seed(name, dim));
        auto hyb = std::make_shared<HybridFunction>();
        hyb->transform = detail::make_transformed(BaseFunction::sphere, dim, v, -100.0, 100.0, rng);
        hyb->permutation.resize(dim);
        std::iota(hyb->permutation.begin(), hyb->permutation.end(), std::size_t{0});
        if (v != Variant::plain)
            for (std::size_t i = dim; i > 1; --i)
                std::swap(hyb->permutation[i - 1], hyb->permutation[rng.index(i)]);
        const std::size_t n1 = (3 * dim) / 10, n2 = (3 * dim) / 10;
        hyb->blocks = {{BaseFunction::bent_cigar, n1},
                       {BaseFunction::rastrigin, n2},
                       {BaseFunction::ackley, dim - n1 - n2}};
        std::shared_ptr<const HybridFunction> shared = hyb;
        entries.push_back({name, Group::complex_multimodal, v, dim, -100.0, 100.0,
                           [shared](std::span<const double> x) { return (*shared)(x); }, 0.0,
                           shared->transform.shift});
    }
    return entries;
}

inline constexpr std::array<std::size_t, 3> suite_dimensions{2, 10, 30};

/// Every entry at every supported dimension.
inline std::vector<SuiteEntry> suite()
{
    std::vector<SuiteEntry> all;
    for (std::size_t dim : suite_dimensions) {
        auto part = suite(dim);
        std::move(part.begin(), part.end(), std::back_inserter(all));
    }
    return all;
}

/// Looks up a suite entry by its stable name, e.g. "rastrigin_shifted_rotated_10d".
inline std::optional<SuiteEntry> find_function(const std::string& name)
{
    const auto pos = name.rfind('_');
    if (pos == std::string::npos || name.size() < pos + 3 || name.back() != 'd')
        return std::nullopt;
    std::size_t dim = 0;
    try {
        dim = std::stoul(name.substr(pos + 1, name.size() - pos - 2));
    }
    catch (const std::exception&) {
        return std::nullopt;
    }
    if (dim == 0 || dim > 1000)
        return std::nullopt;
    for (auto& e : suite(dim))
        if (e.name == name)
            return e;
    return std::nullopt;
}

} // namespace chxpso::bench

#endif // CHXPSO_BENCHMARKS_HPP
