#ifndef CHXPSO_METRICS_HPP
#define CHXPSO_METRICS_HPP

#include "chxpso/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace chxpso {

/// Mean Euclidean distance of the positions to their centroid.
inline double diversity(std::span<const std::span<const double>> positions)
{
    if (positions.empty())
        throw InputError("diversity of an empty set of positions");
    const std::size_t dim = positions.front().size();
    const double count = static_cast<double>(positions.size());
    Vector centroid(dim, 0.0);
    for (const auto& p : positions) {
        if (p.size() != dim)
            throw InputError("positions differ in dimension");
        for (std::size_t d = 0; d < dim; ++d)
            centroid[d] += p[d];
    }
    for (double& c : centroid)
        c /= count;
    double total = 0.0;
    for (const auto& p : positions) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d)
            s += (p[d] - centroid[d]) * (p[d] - centroid[d]);
        total += std::sqrt(s);
    }
    return total / count;
}

inline double diversity(const std::vector<Vector>& positions)
{
    std::vector<std::span<const double>> views(positions.begin(), positions.end());
    return diversity(std::span<const std::span<const double>>(views));
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

enum class Verdict
{
    better,
    worse,
    no_difference,
};

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::better: return "better";
    case Verdict::worse: return "worse";
    case Verdict::no_difference: return "no-difference";
    }
    return "?";
}

/// The (+) / (-) / (=) marks used in comparison tables.
inline char sign_of(Verdict v)
{
    return v == Verdict::better ? '+' : (v == Verdict::worse ? '-' : '=');
}

struct WilcoxonResult
{
    Verdict verdict = Verdict::no_difference;
    double p_value = 1.0;
    double w_plus = 0.0;  // rank sum of pairs with a > b
    double w_minus = 0.0; // rank sum of pairs with a < b
    std::size_t n = 0;    // pairs left after dropping zero differences
    bool exact = true;
};

inline constexpr std::size_t wilcoxon_exact_limit = 25;

/// Two-sided Wilcoxon signed-rank test on paired samples (lower is better).
///
/// `better` means a is significantly smaller than b. Zero differences are
/// dropped. Exact null distribution (ties handled through half-ranks) for
/// n <= 25, normal approximation with tie correction above.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           double alpha = 0.05)
{
    if (a.size() != b.size())
        throw InputError("wilcoxon_signed_rank needs samples of equal length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0)
            diffs.push_back(d);
    }
    WilcoxonResult res;
    res.n = diffs.size();
    if (diffs.empty())
        return res;

    std::vector<double> mags(diffs.size());
    std::transform(diffs.begin(), diffs.end(), mags.begin(), [](double d) { return std::abs(d); });
    const auto ranks = average_ranks(mags);
    for (std::size_t i = 0; i < diffs.size(); ++i)
        (diffs[i] > 0 ? res.w_plus : res.w_minus) += ranks[i];

    const std::size_t n = diffs.size();
    if (n <= wilcoxon_exact_limit) {
        // Distribution of the doubled positive rank sum over all 2^n sign patterns.
        std::vector<int> doubled(n);
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
            total += doubled[i];
        }
        std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
        dist[0] = 1.0;
        for (int r : doubled)
            for (int s = total; s >= r; --s)
                dist[static_cast<std::size_t>(s)] += dist[static_cast<std::size_t>(s - r)];
        const double patterns = std::ldexp(1.0, static_cast<int>(n));
        const int observed = static_cast<int>(std::lround(2.0 * res.w_plus));
        double lower = 0.0, upper = 0.0;
        for (int s = 0; s <= total; ++s) {
            if (s <= observed)
                lower += dist[static_cast<std::size_t>(s)];
            if (s >= observed)
                upper += dist[static_cast<std::size_t>(s)];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / patterns);
        res.exact = true;
    }
    else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double tie = 0.0;
        std::vector<double> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i])
                ++j;
            const double t = static_cast<double>(j - i);
            tie += t * t * t - t;
            i = j;
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie / 48.0;
        const double z = var > 0.0 ? (res.w_plus - mean) / std::sqrt(var) : 0.0;
        res.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
        res.exact = false;
    }
    if (res.p_value < alpha)
        res.verdict = res.w_plus < res.w_minus ? Verdict::better : Verdict::worse;
    return res;
}

inline double mean_of(std::span<const double> v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample standard deviation; 0 for fewer than two values.
inline double stddev_of(std::span<const double> v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Final errors of one algorithm on one function, ordered by seed.
struct ErrorBatch
{
    std::string algorithm;
    std::string function;
    std::vector<double> errors;
};

struct ComparisonCell
{
    double mean = 0.0;
    double std = 0.0;
    double rank = 0.0;
    Verdict verdict = Verdict::no_difference; // reference vs this algorithm
    double p_value = 1.0;
};

struct SignTally
{
    int better = 0; // reference significantly better (+)
    int worse = 0;  // (-)
    int tie = 0;    // (=)
};

struct ComparisonResult
{
    std::vector<std::string> algorithms;
    std::vector<std::string> functions;
    std::string reference;
    // cells[function][algorithm]
    std::vector<std::vector<ComparisonCell>> cells;
    std::vector<double> average_rank;
    std::vector<SignTally> tally;
};

/// Mean/std per (function, algorithm), ranks by mean within each function,
/// average rank across functions and Wilcoxon signs of the reference
/// against every algorithm. Algorithms and functions keep first-seen order.
inline ComparisonResult aggregate(const std::vector<ErrorBatch>& batches, std::string reference = {})
{
    if (batches.empty())
        throw InputError("aggregate needs at least one batch");
    ComparisonResult out;
    auto index_of = [](std::vector<std::string>& names, const std::string& s) {
        auto it = std::find(names.begin(), names.end(), s);
        if (it != names.end())
            return static_cast<std::size_t>(it - names.begin());
        names.push_back(s);
        return names.size() - 1;
    };
    for (const auto& b : batches) {
        index_of(out.algorithms, b.algorithm);
        index_of(out.functions, b.function);
    }
    out.reference = reference.empty() ? out.algorithms.front() : reference;
    const auto ref_it = std::find(out.algorithms.begin(), out.algorithms.end(), out.reference);
    if (ref_it == out.algorithms.end())
        throw InputError("reference algorithm '" + out.reference + "' has no batches");
    const std::size_t ref = static_cast<std::size_t>(ref_it - out.algorithms.begin());

    const std::size_t na = out.algorithms.size(), nf = out.functions.size();
    std::vector<std::vector<const ErrorBatch*>> grid(nf, std::vector<const ErrorBatch*>(na, nullptr));
    for (const auto& b : batches) {
        auto& slot = grid[index_of(out.functions, b.function)][index_of(out.algorithms, b.algorithm)];
        if (slot)
            throw InputError("duplicate batch for " + b.algorithm + " on " + b.function);
        slot = &b;
    }
    const std::size_t reps = batches.front().errors.size();
    for (const auto& row : grid)
        for (const auto* b : row) {
            if (!b)
                throw InputError("every algorithm must cover the same functions");
            if (b->errors.size() != reps || reps == 0)
                throw InputError("replication counts differ between batches");
        }

    out.cells.assign(nf, std::vector<ComparisonCell>(na));
    out.average_rank.assign(na, 0.0);
    out.tally.assign(na, SignTally{});
    for (std::size_t f = 0; f < nf; ++f) {
        std::vector<double> means(na);
        for (std::size_t a = 0; a < na; ++a) {
            auto& cell = out.cells[f][a];
            cell.mean = mean_of(grid[f][a]->errors);
            cell.std = stddev_of(grid[f][a]->errors);
            means[a] = cell.mean;
        }
        const auto ranks = average_ranks(means);
        for (std::size_t a = 0; a < na; ++a) {
            auto& cell = out.cells[f][a];
            cell.rank = ranks[a];
            out.average_rank[a] += ranks[a] / static_cast<double>(nf);
            if (a == ref) {
                ++out.tally[a].tie;
                continue;
            }
            const auto w = wilcoxon_signed_rank(grid[f][ref]->errors, grid[f][a]->errors);
            cell.verdict = w.verdict;
            cell.p_value = w.p_value;
            if (w.verdict == Verdict::better)
                ++out.tally[a].better;
            else if (w.verdict == Verdict::worse)
                ++out.tally[a].worse;
            else
                ++out.tally[a].tie;
        }
    }
    return out;
}

} // namespace chxpso

#endif // CHXPSO_METRICS_HPP
