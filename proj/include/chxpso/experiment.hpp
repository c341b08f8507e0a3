#ifndef CHXPSO_EXPERIMENT_HPP
#define CHXPSO_EXPERIMENT_HPP

// Seeded replication batches: configuration, execution and report files.

#include "chxpso/benchmarks.hpp"
#include "chxpso/engine.hpp"
#include "chxpso/metrics.hpp"
#include "chxpso/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace chxpso {

/// An algorithm or function name that does not resolve.
class UnknownNameError : public std::runtime_error
{
public:
    explicit UnknownNameError(const std::string& name)
        : std::runtime_error("unknown name '" + name + "'"), name_(name)
    {
    }
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// The output directory cannot be created or written.
class OutputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* summary_schema = "chxpso-summary/1";
inline constexpr const char* sweep_schema = "chxpso-sweep-m/1";
inline constexpr const char* summary_header = "function,algorithm,mean,std,rank,sign,p_value";
inline constexpr const char* ranks_header = "algorithm,average_rank,plus,minus,equal";

struct ExperimentConfig
{
    std::vector<std::string> algorithms;
    std::vector<std::string> functions; // names or "group:<group>"
    std::size_t dimension = 10;         // used to expand groups
    std::size_t population = 20;
    std::optional<std::uint64_t> max_evals; // default 10000 * D of each function
    int threshold_m = 6;
    std::size_t replications = 30;
    std::uint64_t seed = 1;
    std::string output = "results";
    std::string reference; // default: first algorithm
    std::size_t jobs = 1;
    bool traces = true;
    ChannelSchedule non_g_schedule = non_g_channel_defaults;
    ChannelSchedule g_schedule = g_channel_defaults;

    void validate() const
    {
        if (algorithms.empty())
            throw ConfigError("config lists no algorithms");
        if (functions.empty())
            throw ConfigError("config lists no functions");
        if (replications < 1)
            throw ConfigError("replications must be at least 1");
        if (jobs < 1)
            throw ConfigError("jobs must be at least 1");
    }
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

template <class T>
T parse_unsigned(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size() || value.front() == '-')
            throw std::invalid_argument(value);
        return static_cast<T>(v);
    }
    catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    }
    catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw ConfigError("key '" + key + "' expects true/false, got '" + value + "'");
}

inline double* schedule_field(ExperimentConfig& c, const std::string& key)
{
    static const std::map<std::string, double ChannelSchedule::*> fields{
        {"w_start", &ChannelSchedule::w_start},   {"w_end", &ChannelSchedule::w_end},
        {"c1_start", &ChannelSchedule::c1_start}, {"c1_end", &ChannelSchedule::c1_end},
        {"c2_start", &ChannelSchedule::c2_start}, {"c2_end", &ChannelSchedule::c2_end},
    };
    const auto dot = key.find('.');
    if (dot == std::string::npos)
        return nullptr;
    const std::string channel = key.substr(0, dot);
    const auto it = fields.find(key.substr(dot + 1));
    if (it == fields.end())
        return nullptr;
    if (channel == "non_g")
        return &(c.non_g_schedule.*(it->second));
    if (channel == "g")
        return &(c.g_schedule.*(it->second));
    return nullptr;
}

inline void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value)
{
    if (key == "algorithms")
        c.algorithms = split_list(value);
    else if (key == "functions")
        c.functions = split_list(value);
    else if (key == "dimension")
        c.dimension = parse_unsigned<std::size_t>(key, value);
    else if (key == "population")
        c.population = parse_unsigned<std::size_t>(key, value);
    else if (key == "max_evals")
        c.max_evals = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "threshold_m")
        c.threshold_m = parse_unsigned<int>(key, value);
    else if (key == "replications")
        c.replications = parse_unsigned<std::size_t>(key, value);
    else if (key == "seed")
        c.seed = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "output")
        c.output = value;
    else if (key == "reference")
        c.reference = value;
    else if (key == "jobs")
        c.jobs = parse_unsigned<std::size_t>(key, value);
    else if (key == "traces")
        c.traces = parse_bool(key, value);
    else if (double* field = schedule_field(c, key))
        *field = parse_double(key, value);
    else
        throw UnknownNameError(key);
}

inline std::string json_scalar_text(const nlohmann::json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v)
            out += (out.empty() ? "" : ",") + json_scalar_text(item);
        return out;
    }
    if (v.is_number_float())
        return format_number(v.get<double>());
    return v.dump();
}

} // namespace detail

/// Parses the key-value form: one `key = value` per line, `#` comments,
/// comma-separated lists. Text starting with `{` is read as the JSON mirror
/// (same keys; lists may be arrays; schedule keys nested or dotted).
inline ExperimentConfig parse_experiment_config(const std::string& text)
{
    ExperimentConfig c;
    const std::string body = detail::trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        }
        catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("invalid JSON config: ") + e.what());
        }
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [sub, v] : value.items())
                    detail::apply_key(c, key + "." + sub, detail::json_scalar_text(v));
            }
            else {
                detail::apply_key(c, key, detail::json_scalar_text(value));
            }
        }
        return c;
    }
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        detail::apply_key(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return c;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

inline std::optional<bench::Group> parse_group(const std::string& s)
{
    for (auto g : {bench::Group::unimodal, bench::Group::simple_multimodal,
                   bench::Group::complex_multimodal})
        if (bench::to_string(g) == s)
            return g;
    return std::nullopt;
}

/// Expands names and `group:` selectors into suite entries, first-seen order.
inline std::vector<bench::SuiteEntry> resolve_functions(const ExperimentConfig& c)
{
    std::vector<bench::SuiteEntry> out;
    auto add = [&](bench::SuiteEntry e) {
        for (const auto& existing : out)
            if (existing.name == e.name)
                return;
        out.push_back(std::move(e));
    };
    for (const auto& name : c.functions) {
        if (name.rfind("group:", 0) == 0) {
            const auto group = parse_group(name.substr(6));
            if (!group)
                throw UnknownNameError(name);
            for (auto& e : bench::suite(c.dimension))
                if (e.group == *group)
                    add(std::move(e));
            continue;
        }
        auto e = bench::find_function(name);
        if (!e)
            throw UnknownNameError(name);
        add(std::move(*e));
    }
    return out;
}

inline std::vector<Algorithm> resolve_algorithms(const ExperimentConfig& c)
{
    std::vector<Algorithm> out;
    for (const auto& name : c.algorithms) {
        const auto a = find_algorithm(name);
        if (!a)
            throw UnknownNameError(name);
        out.push_back(*a);
    }
    if (!c.reference.empty() &&
        std::find(c.algorithms.begin(), c.algorithms.end(), c.reference) == c.algorithms.end())
        throw UnknownNameError(c.reference);
    return out;
}

inline RunConfig run_config_for(const ExperimentConfig& c, const bench::SuiteEntry& fn,
                                std::uint64_t seed)
{
    RunConfig rc;
    rc.population = c.population;
    rc.max_evals = c.max_evals.value_or(10000 * static_cast<std::uint64_t>(fn.dimension));
    rc.threshold_m = c.threshold_m;
    rc.non_g_schedule = c.non_g_schedule;
    rc.g_schedule = c.g_schedule;
    rc.seed = seed;
    return rc;
}

/// Runs tasks 0..count-1 on `jobs` threads. Each task writes its own slot,
/// so results come out in task order whatever the scheduling.
template <class Task>
void parallel_for(std::size_t count, std::size_t jobs, Task&& task)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                }
                catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto& w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);
}

/// All runs of one batch, indexed [function][algorithm][replication].
struct BatchResult
{
    std::vector<bench::SuiteEntry> functions;
    std::vector<Algorithm> algorithms;
    std::vector<std::vector<std::vector<RunRecord>>> runs;

    std::vector<ErrorBatch> error_batches() const
    {
        std::vector<ErrorBatch> out;
        for (std::size_t f = 0; f < functions.size(); ++f)
            for (std::size_t a = 0; a < algorithms.size(); ++a) {
                ErrorBatch b{to_string(algorithms[a]), functions[f].name, {}};
                for (const auto& r : runs[f][a])
                    b.errors.push_back(r.final_error);
                out.push_back(std::move(b));
            }
        return out;
    }
};

/// Seeds are base seed + replication index, shared across algorithms so
/// samples are paired.
inline BatchResult run_batch(const ExperimentConfig& c)
{
    c.validate();
    BatchResult out;
    out.algorithms = resolve_algorithms(c);
    out.functions = resolve_functions(c);
    const std::size_t nf = out.functions.size(), na = out.algorithms.size(), nr = c.replications;
    out.runs.assign(nf, std::vector<std::vector<RunRecord>>(na, std::vector<RunRecord>(nr)));
    std::vector<ProblemSpec> problems;
    for (const auto& f : out.functions)
        problems.push_back(f.problem());
    parallel_for(nf * na * nr, c.jobs, [&](std::size_t task) {
        const std::size_t r = task % nr, a = (task / nr) % na, f = task / (nr * na);
        const RunConfig rc = run_config_for(c, out.functions[f], c.seed + r);
        out.runs[f][a][r] = run_algorithm(out.algorithms[a], problems[f], rc);
    });
    return out;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["algorithms"] = c.algorithms;
    j["functions"] = c.functions;
    j["dimension"] = c.dimension;
    j["population"] = c.population;
    j["max_evals"] = c.max_evals ? nlohmann::json(*c.max_evals) : nlohmann::json(nullptr);
    j["threshold_m"] = c.threshold_m;
    j["replications"] = c.replications;
    j["seed"] = c.seed;
    j["reference"] = c.reference.empty() ? c.algorithms.front() : c.reference;
    auto sched = [](const ChannelSchedule& s) {
        return nlohmann::json{{"w_start", s.w_start},   {"w_end", s.w_end},
                              {"c1_start", s.c1_start}, {"c1_end", s.c1_end},
                              {"c2_start", s.c2_start}, {"c2_end", s.c2_end}};
    };
    j["non_g"] = sched(c.non_g_schedule);
    j["g"] = sched(c.g_schedule);
    return j;
}

inline nlohmann::json summary_to_json(const ExperimentConfig& c, const BatchResult& batch,
                                      const ComparisonResult& cmp)
{
    nlohmann::json j;
    j["schema"] = summary_schema;
    j["config"] = config_to_json(c);
    j["reference"] = cmp.reference;
    j["algorithms"] = cmp.algorithms;
    j["functions"] = cmp.functions;
    nlohmann::json results = nlohmann::json::array();
    for (std::size_t f = 0; f < cmp.functions.size(); ++f)
        for (std::size_t a = 0; a < cmp.algorithms.size(); ++a) {
            const auto& cell = cmp.cells[f][a];
            std::vector<double> errors;
            for (const auto& r : batch.runs[f][a])
                errors.push_back(r.final_error);
            const bool is_ref = cmp.algorithms[a] == cmp.reference;
            results.push_back({{"function", cmp.functions[f]},
                               {"algorithm", cmp.algorithms[a]},
                               {"mean", cell.mean},
                               {"std", cell.std},
                               {"rank", cell.rank},
                               {"sign", is_ref ? "" : std::string(1, sign_of(cell.verdict))},
                               {"p_value", is_ref ? nlohmann::json(nullptr) : nlohmann::json(cell.p_value)},
                               {"final_errors", errors}});
        }
    j["results"] = results;
    nlohmann::json overall = nlohmann::json::array();
    for (std::size_t a = 0; a < cmp.algorithms.size(); ++a)
        overall.push_back({{"algorithm", cmp.algorithms[a]},
                           {"average_rank", cmp.average_rank[a]},
                           {"plus", cmp.tally[a].better},
                           {"minus", cmp.tally[a].worse},
                           {"equal", cmp.tally[a].tie}});
    j["overall"] = overall;
    return j;
}

namespace detail {

inline void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw OutputError("cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out)
            throw OutputError("output directory '" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content))
        throw OutputError("cannot write '" + path.string() + "'");
}

inline std::string timestamp_utc()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

} // namespace detail

inline std::string trace_file_name(const RunRecord& r)
{
    return r.algorithm + "__" + r.function + "__seed" + std::to_string(r.seed) + ".csv";
}

/// Writes traces/, summary.csv, ranks.csv, summary.json and metadata.json.
/// Only metadata.json carries a timestamp.
inline ComparisonResult write_batch_outputs(const ExperimentConfig& c, const BatchResult& batch,
                                            const std::filesystem::path& dir)
{
    detail::ensure_directory(dir);
    const ComparisonResult cmp = aggregate(batch.error_batches(), c.reference);

    if (c.traces) {
        const auto traces = dir / "traces";
        detail::ensure_directory(traces);
        for (const auto& per_fn : batch.runs)
            for (const auto& per_alg : per_fn)
                for (const auto& r : per_alg) {
                    std::ostringstream ss;
                    write_trace_csv(ss, r);
                    detail::write_file(traces / trace_file_name(r), ss.str());
                }
    }

    std::ostringstream summary;
    summary << summary_header << '\n';
    for (std::size_t f = 0; f < cmp.functions.size(); ++f)
        for (std::size_t a = 0; a < cmp.algorithms.size(); ++a) {
            const auto& cell = cmp.cells[f][a];
            const bool is_ref = cmp.algorithms[a] == cmp.reference;
            summary << cmp.functions[f] << ',' << cmp.algorithms[a] << ',' << format_number(cell.mean)
                    << ',' << format_number(cell.std) << ',' << format_number(cell.rank) << ','
                    << (is_ref ? std::string() : std::string(1, sign_of(cell.verdict))) << ','
                    << (is_ref ? std::string() : format_number(cell.p_value)) << '\n';
        }
    detail::write_file(dir / "summary.csv", summary.str());

    std::ostringstream ranks;
    ranks << ranks_header << '\n';
    for (std::size_t a = 0; a < cmp.algorithms.size(); ++a)
        ranks << cmp.algorithms[a] << ',' << format_number(cmp.average_rank[a]) << ','
              << cmp.tally[a].better << ',' << cmp.tally[a].worse << ',' << cmp.tally[a].tie << '\n';
    detail::write_file(dir / "ranks.csv", ranks.str());

    detail::write_file(dir / "summary.json", summary_to_json(c, batch, cmp).dump(2) + "\n");
    const nlohmann::json meta{{"generated_at", detail::timestamp_utc()}, {"schema", summary_schema}};
    detail::write_file(dir / "metadata.json", meta.dump(2) + "\n");
    return cmp;
}

/// Mean final error per (function, algorithm, M) plus pairwise Wilcoxon
/// p-values between M values. Only the two-channel algorithms take part.
struct SweepResult
{
    std::vector<int> m_values;
    std::vector<std::string> functions;
    std::vector<std::string> algorithms;
    // means[f][a][m], errors[f][a][m][rep]
    std::vector<std::vector<std::vector<double>>> means;
    std::vector<std::vector<std::vector<std::vector<double>>>> errors;
};

inline SweepResult run_sweep_m(const ExperimentConfig& c, const std::vector<int>& m_values)
{
    if (m_values.empty())
        throw ConfigError("sweep needs at least one M value");
    for (int m : m_values)
        if (m < 1)
            throw ConfigError("M values must be at least 1");
    ExperimentConfig base = c;
    std::vector<std::string> layered;
    for (const auto& name : c.algorithms) {
        const auto a = find_algorithm(name);
        if (!a)
            throw UnknownNameError(name);
        if (*a == Algorithm::chpso_abs || *a == Algorithm::chclpso_abs)
            layered.push_back(name);
    }
    if (layered.empty())
        throw ConfigError("sweep-m needs chpso-abs or chclpso-abs in the algorithm list");
    base.algorithms = layered;
    base.reference.clear();

    SweepResult out;
    out.m_values = m_values;
    out.algorithms = layered;
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        base.threshold_m = m_values[i];
        const BatchResult batch = run_batch(base);
        if (i == 0) {
            for (const auto& f : batch.functions)
                out.functions.push_back(f.name);
            out.means.assign(out.functions.size(),
                             std::vector<std::vector<double>>(layered.size()));
            out.errors.assign(out.functions.size(),
                              std::vector<std::vector<std::vector<double>>>(layered.size()));
        }
        for (std::size_t f = 0; f < out.functions.size(); ++f)
            for (std::size_t a = 0; a < layered.size(); ++a) {
                std::vector<double> e;
                for (const auto& r : batch.runs[f][a])
                    e.push_back(r.final_error);
                out.means[f][a].push_back(mean_of(e));
                out.errors[f][a].push_back(std::move(e));
            }
    }
    return out;
}

inline void write_sweep_outputs(const SweepResult& s, const std::filesystem::path& dir)
{
    detail::ensure_directory(dir);
    std::ostringstream csv;
    csv << "function,algorithm";
    for (int m : s.m_values)
        csv << ",M" << m;
    csv << '\n';
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t f = 0; f < s.functions.size(); ++f)
        for (std::size_t a = 0; a < s.algorithms.size(); ++a) {
            csv << s.functions[f] << ',' << s.algorithms[a];
            for (double mean : s.means[f][a])
                csv << ',' << format_number(mean);
            csv << '\n';
            nlohmann::json pairs = nlohmann::json::array();
            for (std::size_t i = 0; i < s.m_values.size(); ++i)
                for (std::size_t k = i + 1; k < s.m_values.size(); ++k) {
                    const auto w = wilcoxon_signed_rank(s.errors[f][a][i], s.errors[f][a][k]);
                    pairs.push_back({{"m_a", s.m_values[i]},
                                     {"m_b", s.m_values[k]},
                                     {"p_value", w.p_value},
                                     {"verdict", to_string(w.verdict)}});
                }
            rows.push_back({{"function", s.functions[f]},
                            {"algorithm", s.algorithms[a]},
                            {"means", s.means[f][a]},
                            {"pairwise", pairs}});
        }
    detail::write_file(dir / "sweep_m.csv", csv.str());
    const nlohmann::json j{{"schema", sweep_schema}, {"m_values", s.m_values}, {"results", rows}};
    detail::write_file(dir / "sweep_m.json", j.dump(2) + "\n");
}

} // namespace chxpso

#endif // CHXPSO_EXPERIMENT_HPP
