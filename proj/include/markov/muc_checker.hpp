#ifndef MARKOV_MUC_CHECKER_HPP
#define MARKOV_MUC_CHECKER_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "enumeration.hpp"
#include "markov_core.hpp"

namespace markov {

/// Stop after every Markov number ≤ bound.
struct ValueLimit {
    Integer bound;
};

/// Stop after the first `count` distinct Markov numbers.
struct CountLimit {
    std::uint64_t count;
};

using MucLimit = std::variant<ValueLimit, CountLimit>;

/// Two distinct normalized triples sharing the same maximum.
struct MucWitness {
    Integer max;
    MarkovTriple first;
    MarkovTriple second;
};

struct MucReport {
    MucLimit limit;
    std::uint64_t verified_distinct = 0;
    std::uint64_t emissions = 0;
    std::optional<Integer> largest; ///< largest Markov number checked
    std::vector<MucWitness> duplicates;
    double wall_time = 0.0;         ///< seconds

    bool holds() const noexcept { return duplicates.empty(); }
};

/// Called with the stream after each batch of progress_interval emissions.
using MucProgress = std::function<void(MarkovStream const&)>;

inline constexpr std::uint64_t progress_interval = 10'000;

/**
 * Consumes `stream` up to the limit and collects every repeated maximum.
 *
 * In count mode the trailing duplicates of the last value are drained too,
 * so check_muc(ValueLimit{B}) and check_muc(CountLimit{n}) agree when n is
 * the number of Markov numbers ≤ B.
 */
inline MucReport check_muc(MucLimit const& limit, MarkovStream stream = {}, MucProgress progress = {})
{
    if (auto const* v = std::get_if<ValueLimit>(&limit); v && v->bound < 1)
        throw std::invalid_argument("MUC value bound must be at least 1");
    if (auto const* c = std::get_if<CountLimit>(&limit); c && c->count < 1)
        throw std::invalid_argument("MUC count must be at least 1");

    auto const start = std::chrono::steady_clock::now();
    MucReport report;
    report.limit = limit;

    auto more = [&]() -> bool {
        if (auto const* v = std::get_if<ValueLimit>(&limit))
            return stream.peek_max() <= v->bound;
        auto const& c = std::get<CountLimit>(limit);
        if (stream.distinct_count() < c.count)
            return true;
        return stream.last() && stream.peek_max() == stream.last()->z();
    };

    while (more()) {
        std::optional<MarkovTriple> previous;
        if (stream.last() && stream.peek_max() == stream.last()->z())
            previous = stream.last();
        Emission e = stream.next();
        if (e.duplicate)
            report.duplicates.push_back({e.value(), *previous, e.triple});
        if (progress && stream.emitted_count() % progress_interval == 0)
            progress(stream);
    }

    report.verified_distinct = stream.distinct_count();
    report.emissions = stream.emitted_count();
    if (stream.last())
        report.largest = stream.last()->z();
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace markov

#endif // MARKOV_MUC_CHECKER_HPP
