#ifndef MARKOV_REPORTS_HPP
#define MARKOV_REPORTS_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "enumeration.hpp"
#include "markov_core.hpp"
#include "muc_checker.hpp"
#include "precision_real.hpp"
#include "precision_series.hpp"
#include "slope_geometry.hpp"

namespace markov {

inline constexpr char const* tool_name = "markov";
inline constexpr char const* tool_version = "1.0.0";
/// Environment variable overriding the default working precision (decimal digits).
inline constexpr char const* precision_env_var = "MARKOV_PRECISION";

using ordered_json = nlohmann::ordered_json;

enum ExitCode : int {
    exit_success = 0,
    exit_usage = 1,
    exit_computation = 2,
    exit_counterexample = 3,
};

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Number formatting

inline constexpr std::size_t csv_integer_max_digits = 60;

/// Scientific notation with `significant` digits.
inline std::string format_real(PrecisionReal const& x, unsigned significant)
{
    return x.to_scientific(significant);
}

inline PrecisionReal parse_real(std::string_view text, unsigned digits)
{
    return PrecisionReal::parse(text, digits);
}

/// Full decimal up to 60 digits; longer values keep a 50-digit prefix and their length.
inline std::string format_integer_csv(Integer const& v)
{
    std::string s = v.get_str();
    if (s.size() <= csv_integer_max_digits)
        return s;
    return s.substr(0, 50) + "...(" + std::to_string(s.size()) + " digits)";
}

/// Parses "123", "1e6" or "10^1000" into an exact integer.
inline Integer parse_integer_bound(std::string const& text)
{
    auto digits_only = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto pow10 = [](std::string const& e) {
        Integer r;
        mpz_ui_pow_ui(r.get_mpz_t(), 10, std::stoul(e));
        return r;
    };
    if (auto caret = text.find('^'); caret != std::string::npos) {
        std::string base = text.substr(0, caret), e = text.substr(caret + 1);
        if (base == "10" && digits_only(e))
            return pow10(e);
    } else if (auto ex = text.find_first_of("eE"); ex != std::string::npos) {
        std::string mant = text.substr(0, ex), e = text.substr(ex + 1);
        if (digits_only(mant) && digits_only(e))
            return Integer(mant) * pow10(e);
    } else if (digits_only(text)) {
        return Integer(text);
    }
    throw usage_error("not a non-negative integer: '" + text + "'");
}

// ---------------------------------------------------------------------------
// CSV

/// RFC 4180 field quoting; rows end in '\n'.
inline std::string csv_field(std::string_view f)
{
    if (f.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(f);
    std::string out = "\"";
    for (char c : f) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, std::vector<std::string> const& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            os << ',';
        os << csv_field(fields[i]);
    }
    os << '\n';
}

// Column orders; documented in README.
inline std::vector<std::string> const enumerate_columns{"n", "m", "x", "y", "z", "duplicate"};
inline std::vector<std::string> const sum_columns{"n", "remainder", "zagier_tail", "ratio"};
inline std::vector<std::string> const mcshane_columns{"N", "partial_sum", "deficit"};
inline std::vector<std::string> const orbit_columns{"slope", "markov", "trace", "orbit_size", "orbit"};

// ---------------------------------------------------------------------------
// Run configuration

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string command;
    std::optional<std::uint64_t> limit_n;
    std::optional<Integer> limit_value;
    std::optional<unsigned> precision;
    std::optional<std::string> checkpoint;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> output;
    std::vector<std::uint64_t> samples;
    std::optional<unsigned> digits; ///< significant digits printed for reals

    void validate() const
    {
        static std::vector<std::string> const known{"enumerate", "sum", "check-muc", "mcshane", "orbits"};
        if (std::find(known.begin(), known.end(), command) == known.end())
            throw usage_error("unknown command '" + command + "'");
        if (limit_n.has_value() == limit_value.has_value())
            throw usage_error(command + ": exactly one of --limit-n / --limit-value is required");
        bool const value_ok = command == "enumerate" || command == "check-muc";
        if (limit_value && !value_ok)
            throw usage_error(command + " accepts only --limit-n");
        if (limit_value && *limit_value < 1 && command == "check-muc")
            throw usage_error("check-muc: --limit-value must be >= 1");
        if ((command == "sum" || command == "check-muc" || command == "mcshane" || command == "orbits")
            && limit_n && *limit_n < 1)
            throw usage_error(command + ": --limit-n must be >= 1");
        if (precision && *precision < 2)
            throw usage_error("--precision must be at least 2 digits");
        if (digits && *digits < 1)
            throw usage_error("--digits must be >= 1");
        if (command == "check-muc" && format != OutputFormat::json)
            throw usage_error("check-muc emits JSON only");
        if (checkpoint && command != "enumerate" && command != "check-muc")
            throw usage_error("--checkpoint applies to enumerate and check-muc");
        if (!samples.empty() && command != "sum")
            throw usage_error("--sample applies to sum only");
        if ((command == "mcshane" || command == "orbits") && limit_n && *limit_n > 100000)
            throw usage_error(command + ": --limit-n is a slope height, at most 100000");
    }

    ordered_json to_json() const
    {
        ordered_json j;
        j["command"] = command;
        j["limit_n"] = limit_n ? ordered_json(*limit_n) : ordered_json(nullptr);
        j["limit_value"] = limit_value ? ordered_json(limit_value->get_str()) : ordered_json(nullptr);
        j["precision"] = precision ? ordered_json(*precision) : ordered_json(nullptr);
        j["checkpoint"] = checkpoint ? ordered_json(*checkpoint) : ordered_json(nullptr);
        j["format"] = format == OutputFormat::csv ? "csv" : "json";
        j["output"] = output ? ordered_json(*output) : ordered_json(nullptr);
        j["samples"] = samples;
        j["digits"] = digits ? ordered_json(*digits) : ordered_json(nullptr);
        return j;
    }
};

/// --precision, else $MARKOV_PRECISION, else `fallback`.
inline unsigned resolve_precision(RunConfig const& config, unsigned fallback)
{
    if (config.precision)
        return *config.precision;
    if (char const* env = std::getenv(precision_env_var); env && *env) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (*end != '\0' || v < 2 || v > 10'000'000)
            throw usage_error(std::string(precision_env_var) + " must be an integer >= 2");
        return static_cast<unsigned>(v);
    }
    return fallback;
}

inline unsigned printed_digits(RunConfig const& config, unsigned precision)
{
    return config.digits ? *config.digits : std::min(precision, 17u);
}

inline ordered_json report_header(RunConfig const& config, std::optional<unsigned> precision)
{
    ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["config"] = config.to_json();
    j["precision_digits"] = precision ? ordered_json(*precision) : ordered_json("exact");
    return j;
}

inline ordered_json triple_json(MarkovTriple const& t)
{
    return ordered_json::array({t.x().get_str(), t.y().get_str(), t.z().get_str()});
}

inline ordered_json limit_json(MucLimit const& limit)
{
    ordered_json j;
    if (auto const* v = std::get_if<ValueLimit>(&limit)) {
        j["mode"] = "value";
        j["bound"] = v->bound.get_str();
    } else {
        j["mode"] = "count";
        j["count"] = std::get<CountLimit>(limit).count;
    }
    return j;
}

/// MUC report as JSON; keys in a fixed order, wall_time last.
inline ordered_json muc_report_json(MucReport const& r, RunConfig const& config)
{
    ordered_json j = report_header(config, std::nullopt);
    j["limit"] = limit_json(r.limit);
    j["verified_distinct"] = r.verified_distinct;
    j["emissions"] = r.emissions;
    j["largest"] = r.largest ? ordered_json(r.largest->get_str()) : ordered_json(nullptr);
    j["holds"] = r.holds();
    ordered_json dups = ordered_json::array();
    for (auto const& w : r.duplicates)
        dups.push_back({{"max", w.max.get_str()}, {"first", triple_json(w.first)}, {"second", triple_json(w.second)}});
    j["duplicates"] = std::move(dups);
    j["wall_time"] = r.wall_time;
    return j;
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline MarkovStream open_stream(RunConfig const& config)
{
    if (config.checkpoint && std::filesystem::exists(*config.checkpoint))
        return MarkovStream::load(*config.checkpoint);
    return MarkovStream{};
}

/// Geometric schedule 1, 2, 4, … ≤ n, the explicit points ≤ n, and n itself.
inline std::vector<std::uint64_t> sample_points(std::uint64_t n, std::vector<std::uint64_t> const& extra)
{
    std::vector<std::uint64_t> pts;
    for (std::uint64_t k = 1; k <= n; k *= 2)
        pts.push_back(k);
    for (auto k : extra)
        if (k >= 1 && k <= n)
            pts.push_back(k);
    pts.push_back(n);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace detail

/// Rows (n, m_n, triple, duplicate) in emission order. Resumes from --checkpoint when it exists.
inline int run_enumerate(RunConfig const& config, std::ostream& out, std::ostream& /*log*/)
{
    MarkovStream stream = detail::open_stream(config);
    auto more = [&] {
        if (config.limit_value)
            return stream.peek_max() <= *config.limit_value;
        if (stream.distinct_count() < *config.limit_n)
            return true;
        return *config.limit_n > 0 && stream.last() && stream.peek_max() == stream.last()->z();
    };

    bool duplicate_seen = false;
    ordered_json rows = ordered_json::array();
    if (config.format == OutputFormat::csv)
        write_csv_row(out, enumerate_columns);
    while (more()) {
        Emission e = stream.next();
        duplicate_seen = duplicate_seen || e.duplicate;
        if (config.format == OutputFormat::csv) {
            write_csv_row(out, {std::to_string(e.index), format_integer_csv(e.value()),
                                format_integer_csv(e.triple.x()), format_integer_csv(e.triple.y()),
                                format_integer_csv(e.triple.z()), e.duplicate ? "1" : "0"});
        } else {
            rows.push_back({{"n", e.index}, {"m", e.value().get_str()}, {"triple", triple_json(e.triple)},
                            {"duplicate", e.duplicate}});
        }
    }
    if (config.format == OutputFormat::json) {
        ordered_json j = report_header(config, std::nullopt);
        j["rows"] = std::move(rows);
        out << j.dump(2) << '\n';
    }
    if (config.checkpoint)
        stream.save(*config.checkpoint);
    return duplicate_seen ? exit_counterexample : exit_success;
}

/// Sampled rows (n, R_n, tail(n), R_n / tail(n)).
inline int run_sum(RunConfig const& config, std::ostream& out, std::ostream& log)
{
    std::uint64_t const n = *config.limit_n;
    unsigned const precision = resolve_precision(config, precision_for_count(n));
    unsigned const shown = printed_digits(config, precision);
    auto const points = detail::sample_points(n, config.samples);

    MarkovStream stream;
    SeriesAccumulator acc(precision);
    ordered_json rows = ordered_json::array();
    if (config.format == OutputFormat::csv)
        write_csv_row(out, sum_columns);
    try {
        for (auto target : points) {
            while (acc.count() < target)
                advance_distinct(stream, acc);
            SeriesReport r = acc.report();
            std::string rem = format_real(r.remainder, shown);
            std::string tail = format_real(r.zagier_tail, shown);
            std::string ratio = format_real(r.ratio, shown);
            if (config.format == OutputFormat::csv)
                write_csv_row(out, {std::to_string(r.n), rem, tail, ratio});
            else
                rows.push_back({{"n", r.n}, {"remainder", rem}, {"zagier_tail", tail}, {"ratio", ratio}});
        }
    } catch (insufficient_precision const& e) {
        log << "error: " << e.what() << " (use --precision " << e.suggested_digits << ")\n";
        return exit_computation;
    }
    if (config.format == OutputFormat::json) {
        ordered_json j = report_header(config, precision);
        j["target"] = format_real(target_constant(precision), shown);
        j["rows"] = std::move(rows);
        out << j.dump(2) << '\n';
    }
    return exit_success;
}

inline int run_check_muc(RunConfig const& config, std::ostream& out, std::ostream& log)
{
    MucLimit limit = config.limit_value ? MucLimit{ValueLimit{*config.limit_value}}
                                        : MucLimit{CountLimit{*config.limit_n}};
    MarkovStream stream = detail::open_stream(config);
    MucReport report = check_muc(limit, std::move(stream), [&](MarkovStream const& s) {
        log << "check-muc: " << s.emitted_count() << " emissions, " << s.distinct_count()
            << " distinct, current max has " << s.last()->z().get_str().size() << " digits\n";
    });
    out << muc_report_json(report, config).dump(2) << '\n';
    if (!report.holds()) {
        log << "check-muc: UNIQUENESS COUNTEREXAMPLE FOUND (" << report.duplicates.size()
            << " repeated maxima)\n";
        return exit_counterexample;
    }
    return exit_success;
}

/// Rows (N, box partial sum, 1/2 − partial sum) for N = 1..limit.
inline int run_mcshane(RunConfig const& config, std::ostream& out, std::ostream& /*log*/)
{
    long const height = static_cast<long>(*config.limit_n);
    unsigned const precision = resolve_precision(config, 50);
    unsigned const shown = printed_digits(config, precision);
    auto sums = mcshane_partials(height, precision);
    PrecisionReal half = PrecisionReal(1, precision) / 2;

    ordered_json rows = ordered_json::array();
    if (config.format == OutputFormat::csv)
        write_csv_row(out, mcshane_columns);
    for (long k = 1; k <= height; ++k) {
        auto const& s = sums[static_cast<std::size_t>(k - 1)];
        std::string sum = format_real(s, shown);
        std::string deficit = format_real(half - s, shown);
        if (config.format == OutputFormat::csv)
            write_csv_row(out, {std::to_string(k), sum, deficit});
        else
            rows.push_back({{"N", k}, {"partial_sum", sum}, {"deficit", deficit}});
    }
    if (config.format == OutputFormat::json) {
        ordered_json j = report_header(config, precision);
        j["rows"] = std::move(rows);
        out << j.dump(2) << '\n';
    }
    return exit_success;
}

/// Rows (slope, Markov number, trace, orbit size, orbit representative) over the box.
inline int run_orbits(RunConfig const& config, std::ostream& out, std::ostream& /*log*/)
{
    long const height = static_cast<long>(*config.limit_n);
    ordered_json rows = ordered_json::array();
    if (config.format == OutputFormat::csv)
        write_csv_row(out, orbit_columns);
    for (auto const& s : slopes_in_box(height)) {
        auto orbit = dihedral_orbit(s);
        Integer m = farey_markov(s);
        Integer trace = holonomy_trace(s);
        std::string rep = orbit.begin()->to_string();
        if (config.format == OutputFormat::csv) {
            write_csv_row(out, {s.to_string(), format_integer_csv(m), format_integer_csv(trace),
                                std::to_string(orbit.size()), rep});
        } else {
            rows.push_back({{"slope", s.to_string()}, {"markov", m.get_str()}, {"trace", trace.get_str()},
                            {"orbit_size", orbit.size()}, {"orbit", rep}});
        }
    }
    if (config.format == OutputFormat::json) {
        ordered_json j = report_header(config, std::nullopt);
        j["rows"] = std::move(rows);
        out << j.dump(2) << '\n';
    }
    return exit_success;
}

/**
 * Validates and dispatches. Usage problems return exit_usage, failed
 * computations exit_computation; a uniqueness counterexample returns
 * exit_counterexample.
 */
inline int run_command(RunConfig const& config, std::ostream& out, std::ostream& log)
{
    try {
        config.validate();
        resolve_precision(config, 2);
    } catch (usage_error const& e) {
        log << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    try {
        std::ofstream file;
        std::ostream* sink = &out;
        if (config.output) {
            file.open(*config.output, std::ios::trunc);
            if (!file)
                throw std::runtime_error("cannot open output file " + *config.output);
            sink = &file;
        }
        int code = exit_success;
        if (config.command == "enumerate")
            code = run_enumerate(config, *sink, log);
        else if (config.command == "sum")
            code = run_sum(config, *sink, log);
        else if (config.command == "check-muc")
            code = run_check_muc(config, *sink, log);
        else if (config.command == "mcshane")
            code = run_mcshane(config, *sink, log);
        else
            code = run_orbits(config, *sink, log);
        sink->flush();
        if (!*sink)
            throw std::runtime_error("write failed");
        return code;
    } catch (std::exception const& e) {
        log << "error: " << e.what() << '\n';
        return exit_computation;
    }
}

} // namespace markov

#endif // MARKOV_REPORTS_HPP
