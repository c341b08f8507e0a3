// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance [criterion numbers...]   (default: all)

#include "chxpso/experiment.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace chxpso;

namespace {

struct Outcome
{
    bool pass;
    std::string detail;
};

const std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());

ProblemSpec problem_of(const std::string& name)
{
    return bench::find_function(name)->problem();
}

RunConfig full_budget(std::uint64_t seed, int m = 6)
{
    RunConfig c;
    c.population = 20;
    c.max_evals = 100000;
    c.threshold_m = m;
    c.seed = seed;
    return c;
}

/// Final errors of `runs` seeded runs (seeds 1..runs).
std::vector<RunRecord> batch(Algorithm a, const ProblemSpec& p, std::size_t runs, int m = 6)
{
    std::vector<RunRecord> out(runs);
    parallel_for(runs, jobs, [&](std::size_t i) { out[i] = run_algorithm(a, p, full_budget(i + 1, m)); });
    return out;
}

std::vector<double> finals(const std::vector<RunRecord>& runs)
{
    std::vector<double> e;
    for (const auto& r : runs)
        e.push_back(r.final_error);
    return e;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome threshold_law()
{
    const std::uint64_t max_evals = 1000;
    for (int m = 1; m <= 20; ++m) {
        Thresholds prev = thresholds_at(m, 0, max_evals);
        for (std::uint64_t fes = 0; fes <= max_evals; ++fes) {
            const Thresholds t = thresholds_at(m, fes, max_evals);
            if (t.non_g + t.g != m || t.non_g > prev.non_g || t.g < prev.g)
                return {false, "violated at M=" + std::to_string(m) + " FEs=" + std::to_string(fes)};
            prev = t;
        }
    }
    return {true, "M=1..20, FEs=0..1000 exhaustive"};
}

Outcome budget_exactness()
{
    testkit::CountingProblem counted(problem_of("sphere_shifted_rotated_10d"));
    for (auto op : {OperatorKind::identity, OperatorKind::comprehensive_learning}) {
        RunConfig c = full_budget(1);
        c.op = op;
        const RunRecord r = run_chxpso_abs(counted.problem, c);
        if (r.total_evals != 100000)
            return {false, "reported " + std::to_string(r.total_evals)};
    }
    const auto calls = counted.count();
    return {calls == 200000, std::to_string(calls / 2) + " objective calls per run (both operators)"};
}

Outcome ordinal_table_claim()
{
    bool pass = true;
    std::ostringstream d;
    for (const std::string fn : {"rastrigin_shifted_rotated_10d", "sphere_shifted_rotated_10d"}) {
        const auto p = problem_of(fn);
        for (auto [ours, base] : {std::pair{Algorithm::chpso_abs, Algorithm::cognitive_pso},
                                  std::pair{Algorithm::chclpso_abs, Algorithm::clpso}}) {
            const auto a = finals(batch(ours, p, 30)), b = finals(batch(base, p, 30));
            const auto w = wilcoxon_signed_rank(a, b);
            const bool ok = w.verdict == chxpso::Verdict::better;
            pass &= ok;
            d << "\n    " << fn << ": " << to_string(ours) << " median " << fmt("%.4g", median(a)) << " vs "
              << to_string(base) << " median " << fmt("%.4g", median(b)) << ", p=" << fmt("%.3g", w.p_value)
              << (ok ? "" : "  <-- not better");
        }
    }
    return {pass, d.str()};
}

Outcome g_usage_trend()
{
    const auto runs = batch(Algorithm::chpso_abs, problem_of("rastrigin_shifted_rotated_10d"), 20);
    const std::size_t iters = runs.front().iterations(), tenth = iters / 10;
    double first = 0.0, last = 0.0;
    for (const auto& r : runs)
        for (std::size_t k = 0; k < iters; ++k) {
            if (r.count_non_g[k] + r.count_g[k] != 20)
                return {false, "count_nonG + count_G != N at iteration " + std::to_string(k + 1)};
            if (k < tenth)
                first += r.count_g[k];
            if (k >= iters - tenth)
                last += r.count_g[k];
        }
    first /= static_cast<double>(runs.size() * tenth);
    last /= static_cast<double>(runs.size() * tenth);
    return {last > 0.0 && last >= 3.0 * first,
            "mean G count first 10% " + fmt("%.3f", first) + ", last 10% " + fmt("%.3f", last) +
                ", counts sum to N everywhere"};
}

bool has_diversity_jump(const std::vector<double>& div)
{
    int decreasing = 0;
    for (std::size_t k = 1; k < div.size(); ++k) {
        if (decreasing >= 10 && div[k] > 1.05 * div[k - 1])
            return true;
        decreasing = div[k] < div[k - 1] ? decreasing + 1 : 0;
    }
    return false;
}

Outcome diversity_jumps()
{
    const auto runs = batch(Algorithm::chpso_abs, problem_of("sphere_shifted_rotated_10d"), 20);
    int seeds = 0;
    for (const auto& r : runs)
        seeds += has_diversity_jump(r.diversity);
    return {seeds >= 15, std::to_string(seeds) + " of 20 seeds show a jump"};
}

Outcome m_insensitivity()
{
    const std::vector<int> ms{3, 4, 5, 6, 7};
    const auto p = problem_of("rastrigin_shifted_rotated_10d");
    bool pass = true;
    std::ostringstream d;
    for (Algorithm a : {Algorithm::chpso_abs, Algorithm::chclpso_abs}) {
        std::vector<std::vector<double>> errors;
        d << "\n    " << to_string(a) << " means:";
        for (int m : ms) {
            errors.push_back(finals(batch(a, p, 30, m)));
            d << " M" << m << "=" << fmt("%.4g", mean_of(errors.back()));
        }
        double min_p = 1.0;
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t k = i + 1; k < ms.size(); ++k) {
                const auto w = wilcoxon_signed_rank(errors[i], errors[k]);
                min_p = std::min(min_p, w.p_value);
                if (w.p_value < 0.05) {
                    pass = false;
                    d << "\n      M" << ms[i] << " vs M" << ms[k] << " differ, p=" << fmt("%.3g", w.p_value);
                }
            }
        d << "; smallest pairwise p=" << fmt("%.3g", min_p);
    }
    return {pass, d.str()};
}

double brute_force_p(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            d.push_back(a[i] - b[i]);
    const std::size_t n = d.size();
    if (n == 0)
        return 1.0;
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        int less = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            less += std::abs(d[j]) < std::abs(d[i]);
            equal += std::abs(d[j]) == std::abs(d[i]);
        }
        rank[i] = less + (equal + 1) / 2.0;
    }
    double obs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (d[i] > 0)
            obs += rank[i];
    double below = 0, above = 0;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1ul)
                w += rank[i];
        below += w <= obs + 1e-9;
        above += w >= obs - 1e-9;
    }
    return std::min(1.0, 2.0 * std::min(below, above) / std::ldexp(1.0, static_cast<int>(n)));
}

Outcome formula_oracles()
{
    std::ostringstream d;
    bool pass = true;
    for (std::size_t n : {2u, 10u, 20u, 40u}) {
        pass &= learning_probability(1, n) == 0.05;
        pass &= std::abs(learning_probability(n, n) - 0.5) <= 1e-15;
    }
    d << "Pc endpoints " << (pass ? "exact" : "WRONG");

    Rng rng(2024);
    double worst = 0.0;
    for (int swarm = 0; swarm < 100; ++swarm) {
        const std::size_t count = 2 + rng.index(40), dim = 1 + rng.index(30);
        std::vector<Vector> pts(count, Vector(dim));
        for (auto& p : pts)
            for (double& x : p)
                x = -100.0 + 200.0 * rng.uniform();
        // recompute: centroid per coordinate, then distance per point
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            long double sq = 0.0L;
            for (std::size_t k = 0; k < dim; ++k) {
                long double c = 0.0L;
                for (std::size_t j = 0; j < count; ++j)
                    c += pts[j][k];
                c /= static_cast<long double>(count);
                sq += (pts[i][k] - c) * (pts[i][k] - c);
            }
            total += static_cast<double>(std::sqrt(sq));
        }
        worst = std::max(worst, std::abs(diversity(pts) - total / static_cast<double>(count)));
    }
    pass &= worst <= 1e-12;
    d << "; diversity max abs deviation " << fmt("%.2e", worst) << " over 100 swarms";

    double worst_p = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.index(8));
            b[i] = trial % 2 ? rng.uniform() * 8.0 : static_cast<double>(rng.index(8));
        }
        worst_p = std::max(worst_p, std::abs(wilcoxon_signed_rank(a, b).p_value - brute_force_p(a, b)));
    }
    pass &= worst_p <= 1e-12;
    d << "; Wilcoxon exact p max deviation " << fmt("%.2e", worst_p) << " over 500 samples (n<=12)";
    return {pass, d.str()};
}

Outcome determinism()
{
    int checked = 0;
    for (const std::string fn : {"rastrigin_shifted_rotated_10d", "composition_1_shifted_rotated_10d"})
        for (Algorithm a : all_algorithms) {
            const auto p = problem_of(fn);
            RunConfig c = full_budget(17);
            c.max_evals = 20000;
            if (serialize(run_algorithm(a, p, c)) != serialize(run_algorithm(a, p, c)))
                return {false, to_string(a) + " on " + fn + " is not reproducible"};
            ++checked;
        }
    return {true, std::to_string(checked) + " algorithm/function pairs bit-identical"};
}

Outcome baseline_sanity()
{
    const auto e = finals(batch(Algorithm::global_pso, problem_of("sphere_shifted_rotated_10d"), 30));
    const auto hits = std::count_if(e.begin(), e.end(), [](double x) { return x < 1e-2; });
    return {hits >= 28, std::to_string(hits) + " of 30 seeds below 1e-2 (median " + fmt("%.3g", median(e)) + ")"};
}

struct Criterion
{
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "threshold law", threshold_law},
        {2, "budget exactness", budget_exactness},
        {3, "CHxPSO-ABS beats its embedded baseline", ordinal_table_claim},
        {4, "G-channel usage grows over the run", g_usage_trend},
        {5, "diversity jumps after declines", diversity_jumps},
        {6, "insensitivity to M in 3..7", m_insensitivity},
        {7, "formula oracles", formula_oracles},
        {8, "determinism", determinism},
        {9, "global PSO sanity on sphere", baseline_sanity},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome v{false, ""};
        try {
            v = c.check();
        }
        catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !v.pass;
        std::printf("%s [%d] %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
