#pragma once

// Breadth-first relabeling in a single pass. A FIFO holds pairs of (input
// subtree, destination of the matching output subtree); each dequeue plugs
// one hollow output node and enqueues its children.

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <utility>

#include "dps/builder.hpp"
#include "dps/tree.hpp"

namespace dps {

struct BfsCounters {
    std::uint64_t visits = 0;
    AllocStats region;
};

/// Applies `f : (S, const A&) -> (S, B)` to the nodes of `tree` in breadth
/// first order, threading the state. Returns the relabeled tree and the
/// final state.
template <class A, class S, class F>
auto map_accum_bfs(F&& f, S s0, const Tree<A>& tree, BfsCounters* counters = nullptr,
                   std::size_t block_size = Region::kDefaultBlockSize) {
    using B = typename std::invoke_result_t<F&, const S&, const A&>::second_type;
    using Work = std::pair<const Tree<A>*, Dest<Tree<B>>>;

    auto result = with_region(
        [&](Token t) {
            Token stats_token = [&] {
                auto [a, b] = token_dup2(std::move(t));
                t = std::move(a);
                return std::move(b);
            }();
            auto built = map_b(alloc<Tree<B>>(std::move(t)), [&](Dest<Tree<B>> root) {
                std::deque<Work> queue;
                queue.emplace_back(&tree, std::move(root));
                S st = std::move(s0);
                std::uint64_t visits = 0;
                while (!queue.empty()) {
                    auto [in, d] = std::move(queue.front());
                    queue.pop_front();
                    if (in->is_nil()) {
                        fill<typename Tree<B>::Nil>(std::move(d));
                        continue;
                    }
                    ++visits;
                    auto [dy, dl, dr] = fill<typename Tree<B>::NodeC>(std::move(d));
                    queue.emplace_back(&in->left(), std::move(dl));
                    queue.emplace_back(&in->right(), std::move(dr));
                    auto [next, y] = std::invoke(f, std::as_const(st), in->value());
                    st = std::move(next);
                    fill_leaf(y, std::move(dy));
                }
                if (counters) counters->visits = visits;
                return escape(std::move(st));
            });
            auto out = from_incomplete(std::move(built));
            if (counters) counters->region = region_stats(stats_token);
            token_consume(std::move(stats_token));
            return out;
        },
        block_size);
    return std::move(result.value);
}

/// Labels the nodes 1..|tree| in breadth-first order.
template <class A>
Tree<std::int64_t> relabel_dps(const Tree<A>& tree, BfsCounters* counters = nullptr) {
    auto step = [](std::int64_t st, const A&) { return std::pair{st + 1, st}; };
    return map_accum_bfs(step, std::int64_t{1}, tree, counters).first;
}

namespace detail {

template <class A>
Tree<std::int64_t> rebuild_labeled(const Tree<A>& t, const std::unordered_map<const Tree<A>*, std::int64_t>& labels,
                                   std::uint64_t& visits) {
    if (t.is_nil()) return {};
    ++visits;
    auto l = rebuild_labeled(t.left(), labels, visits);
    auto r = rebuild_labeled(t.right(), labels, visits);
    return Tree<std::int64_t>::node(labels.at(&t), std::move(l), std::move(r));
}

} // namespace detail

/// Baseline without destinations: number the nodes in a level-order pass,
/// then rebuild the tree bottom-up in a second pass. Visits count node
/// touches over both passes (2n).
template <class A>
Tree<std::int64_t> relabel_two_pass(const Tree<A>& tree, BfsCounters* counters = nullptr) {
    std::uint64_t visits = 0;
    std::unordered_map<const Tree<A>*, std::int64_t> labels;
    std::deque<const Tree<A>*> queue{&tree};
    std::int64_t next = 1;
    while (!queue.empty()) {
        const Tree<A>* t = queue.front();
        queue.pop_front();
        if (t->is_nil()) continue;
        ++visits;
        labels.emplace(t, next++);
        queue.push_back(&t->left());
        queue.push_back(&t->right());
    }
    Tree<std::int64_t> out = detail::rebuild_labeled(tree, labels, visits);
    if (counters) counters->visits = visits;
    return out;
}

} // namespace dps
