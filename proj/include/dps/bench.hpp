#pragma once

// Benchmark harness for the three experiment families: left-nested list
// concatenation, breadth-first relabeling and S-expression parsing.
//
// Each case first runs the engine once and checks the result against an
// oracle (OracleMismatch otherwise), then discards `warmup` runs and reports
// the median wall time of `reps` timed runs.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dps/bfs.hpp"
#include "dps/dlist.hpp"
#include "dps/sexpr.hpp"

namespace dps::bench {

enum class CaseKind : std::uint8_t { dlist, bfs, sexpr };
enum class Engine : std::uint8_t { naive, functional_dlist, dps };

constexpr std::string_view to_string(CaseKind c) noexcept {
    switch (c) {
    case CaseKind::dlist: return "dlist";
    case CaseKind::bfs: return "bfs";
    case CaseKind::sexpr: return "sexpr";
    }
    return "?";
}

constexpr std::string_view to_string(Engine e) noexcept {
    switch (e) {
    case Engine::naive: return "naive";
    case Engine::functional_dlist: return "functional_dlist";
    case Engine::dps: return "dps";
    }
    return "?";
}

inline std::optional<CaseKind> parse_case(std::string_view s) {
    for (auto c : {CaseKind::dlist, CaseKind::bfs, CaseKind::sexpr}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

inline std::optional<Engine> parse_engine(std::string_view s) {
    for (auto e : {Engine::naive, Engine::functional_dlist, Engine::dps}) {
        if (to_string(e) == s) return e;
    }
    return std::nullopt;
}

struct KRange {
    int lo;
    int hi;
};

constexpr KRange k_bounds(CaseKind c) noexcept {
    switch (c) {
    case CaseKind::dlist: return {6, 14};
    case CaseKind::bfs: return {6, 16};
    case CaseKind::sexpr: return {10, 22};
    }
    return {0, -1};
}

constexpr bool k_in_bounds(CaseKind c, int k) noexcept { return k >= k_bounds(c).lo && k <= k_bounds(c).hi; }

/// functional_dlist exists only for the dlist case.
constexpr bool engine_applies(CaseKind c, Engine e) noexcept {
    return e != Engine::functional_dlist || c == CaseKind::dlist;
}

struct BenchCase {
    CaseKind kind = CaseKind::dlist;
    Engine engine = Engine::dps;
    int k = 10;
    int reps = 10;
    int warmup = 3;
    std::uint64_t seed = 42;
    std::size_t block_size = Region::kDefaultBlockSize;
};

struct BenchRow {
    CaseKind kind = CaseKind::dlist;
    Engine engine = Engine::dps;
    std::uint64_t size = 0;
    std::uint64_t wall_time_ns = 0;
    std::uint64_t region_bytes = 0;
    std::uint64_t region_cells = 0;
    std::uint64_t leaf_copies = 0;
    // dlist: concatenations, bfs: node visits, sexpr: list reversals.
    std::uint64_t aux_counter = 0;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

namespace detail {

struct Outcome {
    AllocStats region;
    std::uint64_t aux = 0;
};

// Keeps results observable so timed work is not optimised out.
inline volatile std::uint64_t sink_slot = 0;
inline void sink(std::uint64_t v) { sink_slot = v; }

// --- dlist: left-nested concatenation of n singleton lists ---------------

inline List<std::int64_t> concat_naive(std::int64_t n) {
    List<std::int64_t> acc;
    for (std::int64_t x = 0; x < n; ++x) acc = acc + List<std::int64_t>{x};
    return acc;
}

inline List<std::int64_t> concat_functional(std::int64_t n) {
    FunDList<std::int64_t> acc;
    for (std::int64_t x = 0; x < n; ++x) acc = concat(std::move(acc), FunDList<std::int64_t>::singleton(x));
    return acc.to_list();
}

inline List<std::int64_t> concat_dps(std::int64_t n, std::size_t block_size, AllocStats* stats) {
    auto out = with_region(
        [&](Token t) {
            Token rest = std::move(t);
            auto next_token = [&rest] {
                auto [here, next] = token_dup2(std::move(rest));
                rest = std::move(next);
                return std::move(here);
            };
            auto singleton = [&](std::int64_t x) { return dlist_append(dlist_new<std::int64_t>(next_token()), x); };
            DList<std::int64_t> acc = n > 0 ? singleton(0) : dlist_new<std::int64_t>(next_token());
            for (std::int64_t x = 1; x < n; ++x) acc = dlist_concat(std::move(acc), singleton(x));
            auto list = dlist_to_list(std::move(acc));
            if (stats) *stats = region_stats(rest);
            token_consume(std::move(rest));
            return list;
        },
        block_size);
    return std::move(out.value);
}

inline bool is_iota(const List<std::int64_t>& xs, std::int64_t n) {
    std::int64_t want = 0;
    for (auto x : xs) {
        if (x != want++) return false;
    }
    return want == n;
}

// --- bfs ------------------------------------------------------------------

/// True when `out` has the shape of `in` and carries 1..n in level order.
template <class A>
bool is_level_order_labeling(const Tree<A>& in, const Tree<std::int64_t>& out) {
    std::deque<std::pair<const Tree<A>*, const Tree<std::int64_t>*>> queue{{&in, &out}};
    std::int64_t want = 1;
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        if (a->is_nil() != b->is_nil()) return false;
        if (a->is_nil()) continue;
        if (b->value() != want++) return false;
        queue.emplace_back(&a->left(), &b->left());
        queue.emplace_back(&a->right(), &b->right());
    }
    return true;
}

template <class F>
std::uint64_t median_ns(int warmup, int reps, F&& run) {
    for (int i = 0; i < warmup; ++i) run();
    std::vector<std::uint64_t> times;
    times.reserve(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
    std::sort(times.begin(), times.end());
    const std::size_t m = times.size() / 2;
    const std::uint64_t med = times.size() % 2 ? times[m] : (times[m - 1] + times[m]) / 2;
    return std::max<std::uint64_t>(med, 1);
}

[[noreturn]] inline void mismatch(const BenchCase& c) {
    fail(ErrorCode::OracleMismatch, std::string(to_string(c.kind)) + "/" + std::string(to_string(c.engine)) +
                                        " k=" + std::to_string(c.k) + " disagrees with the oracle");
}

} // namespace detail

/// Runs one configured case. Throws std::invalid_argument for a k outside
/// the case's bounds or an engine that does not apply, Error(OracleMismatch)
/// for a wrong result.
inline BenchRow run_case(const BenchCase& c) {
    if (!k_in_bounds(c.kind, c.k)) {
        throw std::invalid_argument("k=" + std::to_string(c.k) + " out of bounds for " + std::string(to_string(c.kind)));
    }
    if (!engine_applies(c.kind, c.engine)) {
        throw std::invalid_argument(std::string(to_string(c.engine)) + " does not apply to " + std::string(to_string(c.kind)));
    }
    if (c.reps < 1 || c.warmup < 0) throw std::invalid_argument("reps must be >= 1 and warmup >= 0");

    const std::uint64_t n = std::uint64_t{1} << c.k;
    BenchRow row{c.kind, c.engine, n};
    detail::Outcome seen;

    switch (c.kind) {
    case CaseKind::dlist: {
        const auto len = static_cast<std::int64_t>(n);
        auto run = [&](AllocStats* stats) {
            switch (c.engine) {
            case Engine::naive: return detail::concat_naive(len);
            case Engine::functional_dlist: return detail::concat_functional(len);
            default: return detail::concat_dps(len, c.block_size, stats);
            }
        };
        if (!detail::is_iota(run(&seen.region), len)) detail::mismatch(c);
        seen.aux = n - 1;
        row.wall_time_ns = detail::median_ns(c.warmup, c.reps, [&] { detail::sink(run(nullptr).empty()); });
        break;
    }
    case CaseKind::bfs: {
        std::mt19937_64 rng(c.seed);
        const Tree<std::int64_t> input = random_tree(n, rng);
        auto run = [&](BfsCounters* counters) {
            return c.engine == Engine::dps ? relabel_dps(input, counters) : relabel_two_pass(input, counters);
        };
        BfsCounters counters;
        if (!detail::is_level_order_labeling(input, run(&counters))) detail::mismatch(c);
        seen.region = counters.region;
        seen.aux = counters.visits;
        row.wall_time_ns = detail::median_ns(c.warmup, c.reps, [&] { detail::sink(run(nullptr).is_nil()); });
        break;
    }
    case CaseKind::sexpr: {
        const std::string input = generate_input(n, c.seed);
        auto run = [&](ParseCounters* counters) {
            return c.engine == Engine::dps ? parse_dps(input, counters, c.block_size) : parse_naive(input, counters);
        };
        ParseCounters counters;
        const ParseResult got = run(&counters);
        const ParseResult oracle =
            c.engine == Engine::dps ? parse_naive(input) : parse_dps(input, nullptr, c.block_size);
        if (!std::holds_alternative<SExpr>(got) || got != oracle) detail::mismatch(c);
        seen.region = counters.region;
        seen.aux = counters.reverse_calls;
        row.wall_time_ns = detail::median_ns(c.warmup, c.reps, [&] { detail::sink(run(nullptr).index()); });
        break;
    }
    }

    row.region_bytes = seen.region.bytes_allocated;
    row.region_cells = seen.region.cells_allocated;
    row.leaf_copies = seen.region.leaf_copies;
    row.aux_counter = seen.aux;
    return row;
}

inline constexpr std::string_view kCsvHeader =
    "case,engine,size,wall_time_ns,region_bytes,region_cells,leaf_copies,aux_counter";

/// CSV with a header line, rows ordered by (case, engine, size) names and
/// values.
inline void emit_report(std::vector<BenchRow> rows, std::ostream& out) {
    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        const auto ka = std::tuple(to_string(a.kind), to_string(a.engine), a.size);
        const auto kb = std::tuple(to_string(b.kind), to_string(b.engine), b.size);
        return ka < kb;
    });
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.kind) << ',' << to_string(r.engine) << ',' << r.size << ',' << r.wall_time_ns << ','
            << r.region_bytes << ',' << r.region_cells << ',' << r.leaf_copies << ',' << r.aux_counter << '\n';
    }
}

inline std::string emit_report(std::vector<BenchRow> rows) {
    std::ostringstream out;
    emit_report(std::move(rows), out);
    return out.str();
}

/// Inverse of emit_report. Throws std::invalid_argument on a malformed
/// header or line.
inline std::vector<BenchRow> parse_report(std::string_view csv) {
    std::vector<BenchRow> rows;
    std::istringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("bad report header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::istringstream fields(line);
        for (std::string col; std::getline(fields, col, ',');) cols.push_back(col);
        if (cols.size() != 8) throw std::invalid_argument("bad report line: " + line);
        const auto kind = parse_case(cols[0]);
        const auto engine = parse_engine(cols[1]);
        if (!kind || !engine) throw std::invalid_argument("bad report line: " + line);
        BenchRow r{*kind, *engine};
        std::uint64_t* nums[] = {&r.size, &r.wall_time_ns, &r.region_bytes, &r.region_cells, &r.leaf_copies, &r.aux_counter};
        for (std::size_t i = 0; i < 6; ++i) {
            const std::string& s = cols[i + 2];
            if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
                throw std::invalid_argument("bad report line: " + line);
            }
            *nums[i] = std::stoull(s);
        }
        rows.push_back(r);
    }
    return rows;
}

} // namespace dps::bench
