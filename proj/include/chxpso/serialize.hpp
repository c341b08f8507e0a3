#ifndef CHXPSO_SERIALIZE_HPP
#define CHXPSO_SERIALIZE_HPP

#include "chxpso/engine.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace chxpso {

/// Shortest round-trip decimal form; NaN becomes the empty string.
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return {};
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline nlohmann::json to_json(const RunRecord& r)
{
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["function"] = r.function;
    j["seed"] = r.seed;
    j["total_evals"] = r.total_evals;
    j["final_error"] = r.final_error;
    j["layered"] = r.layered;
    j["best_error"] = r.best_error;
    j["diversity"] = r.diversity;
    j["diversity_non_g"] = r.diversity_non_g; // NaN serializes as null
    j["diversity_g"] = r.diversity_g;
    j["count_non_g"] = r.count_non_g;
    j["count_g"] = r.count_g;
    return j;
}

/// Canonical text form of a run, used for determinism checks.
inline std::string serialize(const RunRecord& r)
{
    return to_json(r).dump();
}

inline constexpr const char* trace_header =
    "iteration,best_error,diversity_employed,diversity_nonG,diversity_G,count_nonG,count_G";

inline constexpr const char* diversity_trace_header =
    "iteration,diversity_employed,diversity_nonG,diversity_G,count_nonG,count_G";

namespace detail {

inline void write_channel_columns(std::ostream& out, const RunRecord& r, std::size_t k)
{
    if (r.layered)
        out << ',' << format_number(r.diversity_non_g[k]) << ',' << format_number(r.diversity_g[k])
            << ',' << r.count_non_g[k] << ',' << r.count_g[k];
    else
        out << ",,,,"; // single-swarm algorithms have no channels
}

} // namespace detail

/// Per-iteration trace, iterations numbered from 1 (first main-loop iteration).
inline void write_trace_csv(std::ostream& out, const RunRecord& r)
{
    out << trace_header << '\n';
    for (std::size_t k = 0; k < r.iterations(); ++k) {
        out << (k + 1) << ',' << format_number(r.best_error[k]) << ','
            << format_number(r.diversity[k]);
        detail::write_channel_columns(out, r, k);
        out << '\n';
    }
}

inline void write_diversity_csv(std::ostream& out, const RunRecord& r)
{
    out << diversity_trace_header << '\n';
    for (std::size_t k = 0; k < r.iterations(); ++k) {
        out << (k + 1) << ',' << format_number(r.diversity[k]);
        detail::write_channel_columns(out, r, k);
        out << '\n';
    }
}

} // namespace chxpso

#endif // CHXPSO_SERIALIZE_HPP
