#ifndef CHXPSO_TOOLS_CLI_HPP
#define CHXPSO_TOOLS_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 usage or config error,
// 2 unknown algorithm/function/key name, 3 output directory not writable.

#include "chxpso/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace chxpso::cli {

enum ExitCode
{
    ok = 0,
    usage_error = 1,
    unknown_name = 2,
    output_error = 3,
};

struct BatchFlags
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> jobs;
};

inline void add_batch_flags(CLI::App* cmd, BatchFlags& f)
{
    cmd->add_option("--config", f.config, "experiment config file (key = value, or JSON)")->required();
    cmd->add_option("--out", f.out, "output directory (overrides `output`)");
    cmd->add_option("--seed", f.seed, "base seed (overrides `seed`)");
    cmd->add_option("--reps", f.reps, "replications (overrides `replications`)");
    cmd->add_option("--jobs", f.jobs, "concurrent runs (overrides `jobs`)");
}

inline ExperimentConfig load_with_overrides(const BatchFlags& f)
{
    ExperimentConfig c = load_experiment_config(f.config);
    if (!f.out.empty())
        c.output = f.out;
    if (f.seed)
        c.seed = *f.seed;
    if (f.reps)
        c.replications = *f.reps;
    if (f.jobs)
        c.jobs = *f.jobs;
    return c;
}

inline std::vector<int> parse_m_list(const std::string& s)
{
    std::vector<int> out;
    for (const auto& item : detail::split_list(s))
        out.push_back(detail::parse_unsigned<int>("--m", item));
    return out;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr)
{
    CLI::App app{"Heterogeneous two-channel PSO experiment harness"};
    app.require_subcommand(1);

    BatchFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "run a replication batch and write reports");
    add_batch_flags(run_cmd, run_flags);

    std::string trace_algorithm, trace_function, trace_out;
    std::uint64_t trace_seed = 1;
    std::size_t trace_population = 20;
    std::optional<std::uint64_t> trace_max_evals;
    int trace_m = 6;
    auto* trace_cmd = app.add_subcommand("diversity-trace", "write the diversity trace of one run");
    trace_cmd->add_option("--algorithm", trace_algorithm)->required();
    trace_cmd->add_option("--function", trace_function)->required();
    trace_cmd->add_option("--seed", trace_seed);
    trace_cmd->add_option("--population", trace_population);
    trace_cmd->add_option("--max-evals", trace_max_evals, "default 10000 * D");
    trace_cmd->add_option("--m", trace_m, "total upper threshold");
    trace_cmd->add_option("--out", trace_out, "CSV path (stdout when omitted)");

    BatchFlags sweep_flags;
    std::string sweep_m = "3,4,5,6,7";
    auto* sweep_cmd = app.add_subcommand("sweep-m", "run the batch for several M values");
    add_batch_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--m", sweep_m, "comma-separated M values");

    std::size_t list_dimension = 10;
    auto* list_fn_cmd = app.add_subcommand("list-functions", "print suite function names");
    list_fn_cmd->add_option("--dimension", list_dimension);
    auto* list_alg_cmd = app.add_subcommand("list-algorithms", "print algorithm names");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*run_cmd) {
            const ExperimentConfig c = load_with_overrides(run_flags);
            c.validate();
            resolve_algorithms(c);
            resolve_functions(c);
            detail::ensure_directory(c.output);
            const BatchResult batch = run_batch(c);
            const ComparisonResult cmp = write_batch_outputs(c, batch, c.output);
            out << "wrote " << c.output << " (" << cmp.functions.size() << " functions, "
                << cmp.algorithms.size() << " algorithms, " << c.replications << " replications)\n";
        }
        else if (*trace_cmd) {
            const auto alg = find_algorithm(trace_algorithm);
            if (!alg)
                throw UnknownNameError(trace_algorithm);
            const auto fn = bench::find_function(trace_function);
            if (!fn)
                throw UnknownNameError(trace_function);
            RunConfig rc;
            rc.population = trace_population;
            rc.max_evals = trace_max_evals.value_or(10000 * static_cast<std::uint64_t>(fn->dimension));
            rc.threshold_m = trace_m;
            rc.seed = trace_seed;
            const RunRecord rec = run_algorithm(*alg, fn->problem(), rc);
            if (trace_out.empty()) {
                write_diversity_csv(out, rec);
            }
            else {
                std::ostringstream ss;
                write_diversity_csv(ss, rec);
                std::ofstream file(trace_out, std::ios::binary);
                if (!file || !(file << ss.str()))
                    throw OutputError("cannot write '" + trace_out + "'");
            }
        }
        else if (*sweep_cmd) {
            const ExperimentConfig c = load_with_overrides(sweep_flags);
            const auto m_values = parse_m_list(sweep_m);
            c.validate();
            resolve_algorithms(c);
            resolve_functions(c);
            detail::ensure_directory(c.output);
            const SweepResult s = run_sweep_m(c, m_values);
            write_sweep_outputs(s, c.output);
            out << "wrote " << c.output << "/sweep_m.csv\n";
        }
        else if (*list_fn_cmd) {
            for (const auto& e : bench::suite(list_dimension))
                out << e.name << '\t' << bench::to_string(e.group) << '\t' << e.lower << '\t'
                    << e.upper << '\n';
        }
        else if (*list_alg_cmd) {
            for (Algorithm a : all_algorithms)
                out << to_string(a) << '\n';
        }
    }
    catch (const UnknownNameError& e) {
        err << "error: unknown name: " << e.name() << '\n';
        return unknown_name;
    }
    catch (const OutputError& e) {
        err << "error: " << e.what() << '\n';
        return output_error;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    return ok;
}

} // namespace chxpso::cli

#endif // CHXPSO_TOOLS_CLI_HPP
