#pragma once

// Generators and independent oracles shared by the unit tests and the
// acceptance runner.

#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dps/bfs.hpp"
#include "dps/builder.hpp"
#include "dps/list.hpp"
#include "dps/sexpr.hpp"
#include "dps/tree.hpp"

namespace dps::fixtures {

using Rng = std::mt19937_64;
using IntList = List<std::int64_t>;
using IntTree = Tree<std::int64_t>;

inline std::int64_t pick(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_text(Rng& rng, std::size_t max_len) {
    static constexpr std::string_view kChars = "abcxyz \"\\()-09";
    std::string s(static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(max_len))), ' ');
    for (auto& c : s) c = kChars[static_cast<std::size_t>(pick(rng, 0, kChars.size() - 1))];
    return s;
}

inline IntList random_list(Rng& rng, std::size_t max_len) {
    IntList::Builder b;
    const auto n = pick(rng, 0, static_cast<std::int64_t>(max_len));
    for (std::int64_t i = 0; i < n; ++i) b.push_back(pick(rng, -1000, 1000));
    return std::move(b).finish();
}

inline IntTree random_tree_depth(Rng& rng, int depth) {
    if (depth == 0 || coin(rng, 0.25)) return {};
    return IntTree::node(pick(rng, -1000, 1000), random_tree_depth(rng, depth - 1), random_tree_depth(rng, depth - 1));
}

inline std::string random_symbol(Rng& rng) {
    static constexpr std::string_view kStart = "abcxyz+*/<>=!?_";
    static constexpr std::string_view kRest = "abcxyz09-+*";
    std::string s(1, kStart[static_cast<std::size_t>(pick(rng, 0, kStart.size() - 1))]);
    const auto n = pick(rng, 0, 5);
    for (std::int64_t i = 0; i < n; ++i) s += kRest[static_cast<std::size_t>(pick(rng, 0, kRest.size() - 1))];
    return s;
}

/// Random AST; positions are arbitrary.
inline SExpr random_sexpr(Rng& rng, int depth) {
    const std::int64_t pos = pick(rng, 0, 1 << 20);
    const auto kind = depth == 0 ? pick(rng, 1, 3) : pick(rng, 0, 3);
    switch (kind) {
    case 0: {
        List<SExpr>::Builder b;
        const auto n = pick(rng, 0, 4);
        for (std::int64_t i = 0; i < n; ++i) b.push_back(random_sexpr(rng, depth - 1));
        return SExpr::list(pos, std::move(b).finish());
    }
    case 1: return SExpr::integer_atom(pos, pick(rng, INT64_MIN, INT64_MAX));
    case 2: return SExpr::string_atom(pos, random_text(rng, 12));
    default: return SExpr::symbol_atom(pos, random_symbol(rng));
    }
}

// --- top-down build scripts ----------------------------------------------
//
// A script holds a pool of (expected value, destination) jobs and discharges
// them in random order. Recursive jobs either fill one constructor layer and
// push the children, splice a finished copy with into_incomplete+fill_comp,
// or open a separate incomplete with alloc and plug it in with fill_comp
// before its own hole is filled.

template <class T>
struct Job {
    T value;
    Dest<T> dest;
};

using AnyJob = std::variant<Job<std::int64_t>, Job<std::string>, Job<IntList>, Job<IntTree>, Job<SExpr>, Job<List<SExpr>>>;

class BuildScript {
public:
    BuildScript(Rng& rng, Token&& spare) : rng_(rng), spare_(std::move(spare)) {}

    template <class T>
    void push(T value, Dest<T>&& d) {
        jobs_.push_back(Job<T>{std::move(value), std::move(d)});
    }

    std::size_t pending() const noexcept { return jobs_.size(); }

    /// Discharges one random job.
    void step() {
        const auto k = static_cast<std::size_t>(pick(rng_, 0, static_cast<std::int64_t>(jobs_.size()) - 1));
        std::swap(jobs_[k], jobs_.back());
        AnyJob job = std::move(jobs_.back());
        jobs_.pop_back();
        std::visit([this](auto& j) { run(std::move(j)); }, job);
    }

    void run_all() {
        while (!jobs_.empty()) step();
    }

    /// Removes a random job without discharging it (a deliberately dropped
    /// destination).
    void drop_one() {
        if (jobs_.empty()) return;
        const auto k = static_cast<std::size_t>(pick(rng_, 0, static_cast<std::int64_t>(jobs_.size()) - 1));
        jobs_.erase(jobs_.begin() + static_cast<std::ptrdiff_t>(k));
    }

    Token release_token() { return std::move(spare_); }

private:
    Token token() {
        auto [a, b] = token_dup2(std::move(spare_));
        spare_ = std::move(b);
        return std::move(a);
    }

    template <class T>
    bool try_splice(const T& value, Dest<T>& d) {
        const auto r = pick(rng_, 0, 9);
        if (r == 0) {
            fill_comp(into_incomplete(token(), value), std::move(d));
            return true;
        }
        if (r == 1) {
            Dest<T> inner = fill_comp(alloc<T>(token()), std::move(d));
            push(value, std::move(inner));
            return true;
        }
        return false;
    }

    void run(Job<std::int64_t>&& j) { fill_leaf(j.value, std::move(j.dest)); }
    void run(Job<std::string>&& j) { fill_leaf(j.value, std::move(j.dest)); }

    template <class T>
    void run(Job<List<T>>&& j) {
        if (try_splice(j.value, j.dest)) return;
        if (j.value.empty()) {
            fill<typename List<T>::Nil>(std::move(j.dest));
            return;
        }
        auto [dh, dt] = fill<typename List<T>::Cons>(std::move(j.dest));
        push(j.value.head(), std::move(dh));
        push(j.value.tail(), std::move(dt));
    }

    void run(Job<IntTree>&& j) {
        if (try_splice(j.value, j.dest)) return;
        if (j.value.is_nil()) {
            fill<IntTree::Nil>(std::move(j.dest));
            return;
        }
        auto [dv, dl, dr] = fill<IntTree::NodeC>(std::move(j.dest));
        push(j.value.value(), std::move(dv));
        push(j.value.left(), std::move(dl));
        push(j.value.right(), std::move(dr));
    }

    void run(Job<SExpr>&& j) {
        if (try_splice(j.value, j.dest)) return;
        const SExpr& e = j.value;
        switch (e.kind) {
        case SExpr::Kind::List: {
            auto [dp, dc] = fill<SExpr::ListC>(std::move(j.dest));
            push(e.end_pos, std::move(dp));
            push(e.children, std::move(dc));
            break;
        }
        case SExpr::Kind::Integer: {
            auto [dp, dv] = fill<SExpr::IntegerC>(std::move(j.dest));
            push(e.end_pos, std::move(dp));
            push(e.integer, std::move(dv));
            break;
        }
        case SExpr::Kind::String: {
            auto [dp, ds] = fill<SExpr::StringC>(std::move(j.dest));
            push(e.end_pos, std::move(dp));
            push(e.text, std::move(ds));
            break;
        }
        case SExpr::Kind::Symbol: {
            auto [dp, ds] = fill<SExpr::SymbolC>(std::move(j.dest));
            push(e.end_pos, std::move(dp));
            push(e.text, std::move(ds));
            break;
        }
        }
    }

    Rng& rng_;
    Token spare_;
    std::vector<AnyJob> jobs_;
};

/// Builds `value` top-down with a random script and returns the decoded
/// result.
template <class T>
T build_top_down(const T& value, Rng& rng) {
    auto out = with_region([&](Token t) {
        auto [t_alloc, t_spare] = token_dup2(std::move(t));
        BuildScript script(rng, std::move(t_spare));
        auto done = map_b(alloc<T>(std::move(t_alloc)), [&](Dest<T> d) {
            script.push(value, std::move(d));
            script.run_all();
        });
        token_consume(script.release_token());
        return from_incomplete_(std::move(done));
    });
    return std::move(out.value);
}

enum class Leak : std::uint8_t { none, token, dest, incomplete };

/// build_top_down with one deliberate linearity violation: the script's
/// spare token is dropped, a pending destination is dropped halfway, or the
/// finished incomplete is dropped instead of read.
template <class T>
T build_top_down_leaky(const T& value, Rng& rng, Leak leak) {
    auto out = with_region([&](Token t) {
        auto [t_alloc, t_spare] = token_dup2(std::move(t));
        BuildScript script(rng, std::move(t_spare));
        auto done = map_b(alloc<T>(std::move(t_alloc)), [&](Dest<T> d) {
            script.push(value, std::move(d));
            if (leak == Leak::dest) {
                const auto at = pick(rng, 0, 8);
                for (std::int64_t k = 0; k < at && script.pending() > 1; ++k) script.step();
                script.drop_one();
            }
            script.run_all();
        });
        if (leak != Leak::token) token_consume(script.release_token());
        if (leak == Leak::incomplete) return escape(value);
        return from_incomplete_(std::move(done));
    });
    return std::move(out.value);
}

// --- oracles ---------------------------------------------------------------

/// Trees compared by shape alone.
template <class A, class B>
bool same_tree_shape(const Tree<A>& a, const Tree<B>& b) {
    if (a.is_nil() || b.is_nil()) return a.is_nil() == b.is_nil();
    return same_tree_shape(a.left(), b.left()) && same_tree_shape(a.right(), b.right());
}

/// Node values in level order.
template <class A>
std::vector<A> level_order(const Tree<A>& t) {
    std::vector<A> out;
    std::deque<const Tree<A>*> q{&t};
    while (!q.empty()) {
        const Tree<A>* n = q.front();
        q.pop_front();
        if (n->is_nil()) continue;
        out.push_back(n->value());
        q.push_back(&n->left());
        q.push_back(&n->right());
    }
    return out;
}

/// Two-pass numbering: list the nodes in level order, then rebuild with the
/// index of each node.
template <class A>
IntTree two_pass_numbering(const Tree<A>& t) {
    std::vector<const Tree<A>*> order;
    std::deque<const Tree<A>*> q{&t};
    while (!q.empty()) {
        const Tree<A>* n = q.front();
        q.pop_front();
        if (n->is_nil()) continue;
        order.push_back(n);
        q.push_back(&n->left());
        q.push_back(&n->right());
    }
    std::unordered_map<const Tree<A>*, std::size_t> index;
    for (std::size_t i = 0; i < order.size(); ++i) index.emplace(order[i], i);
    // Children come later in level order, so a reverse sweep sees them
    // built before their parent.
    std::vector<IntTree> built(order.size());
    for (std::size_t i = order.size(); i-- > 0;) {
        const Tree<A>* n = order[i];
        auto sub = [&](const Tree<A>& c) -> IntTree { return c.is_nil() ? IntTree{} : built[index.at(&c)]; };
        built[i] = IntTree::node(static_cast<std::int64_t>(i + 1), sub(n->left()), sub(n->right()));
    }
    return built.empty() ? IntTree{} : built[0];
}

/// Cells a value occupies when written into a region: one per constructor
/// application, nil included.
inline std::uint64_t cell_count(const SExpr& e) {
    if (e.kind != SExpr::Kind::List) return 1;
    std::uint64_t n = 1 + 1;  // SList, nil
    for (const auto& c : e.children) n += 1 + cell_count(c);
    return n;
}

inline std::uint64_t list_count(const SExpr& e) {
    if (e.kind != SExpr::Kind::List) return 0;
    std::uint64_t n = 1;
    for (const auto& c : e.children) n += list_count(c);
    return n;
}

/// Corpus for parser differential tests: generated inputs, prefixes, byte
/// mutations and a few hand-written error cases.
inline std::vector<std::string> parser_corpus(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> out = {"", "(", ")", "((", "(()", "\"", "(\"ab", "(a \"b\\q\")", "99999999999999999999",
                                    "-9223372036854775808", "9223372036854775808", "  \t\n(x)", "-", "(- -1 1-)"};
    static constexpr std::string_view kNoise = "()\" \\-x1\n";
    while (out.size() < count) {
        std::string s = generate_input(static_cast<std::size_t>(pick(rng, 2, 400)), rng());
        switch (pick(rng, 0, 3)) {
        case 0: break;
        case 1: s.resize(static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(s.size())))); break;
        default: {
            const auto edits = pick(rng, 1, 3);
            for (std::int64_t e = 0; e < edits && !s.empty(); ++e) {
                const auto at = static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(s.size()) - 1));
                const char c = kNoise[static_cast<std::size_t>(pick(rng, 0, kNoise.size() - 1))];
                switch (pick(rng, 0, 2)) {
                case 0: s[at] = c; break;
                case 1: s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), c); break;
                default: s.erase(at, 1); break;
                }
            }
        }
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace dps::fixtures
