// Builds a few structures top-down through destinations.

#include <iostream>

#include "dps/bfs.hpp"
#include "dps/dlist.hpp"
#include "dps/sexpr.hpp"

using namespace dps;

int main() {
    // [1, 2] written head first: each fill returns the destinations of the
    // new cell's fields.
    auto built = with_region([](Token t) {
        auto i = map_b(alloc<List<int>>(std::move(t)), [](Dest<List<int>> d) {
            auto [h1, t1] = fill<List<int>::Cons>(std::move(d));
            fill_leaf(1, std::move(h1));
            auto [h2, t2] = fill<List<int>::Cons>(std::move(t1));
            fill_leaf(2, std::move(h2));
            fill<List<int>::Nil>(std::move(t2));
        });
        return from_incomplete_(std::move(i));
    });
    std::cout << "list:   " << built.value << '\n';

    // Difference lists: concatenation is a single write into the first
    // list's open tail.
    auto joined = with_region([](Token t) {
        auto [ta, tb] = token_dup2(std::move(t));
        auto a = dlist_from_list<int>(std::move(ta), {1, 2, 3});
        auto b = dlist_from_list<int>(std::move(tb), {4, 5});
        return dlist_to_list(dlist_concat(std::move(a), std::move(b)));
    });
    std::cout << "concat: " << joined.value << '\n';

    // Breadth-first relabeling in one pass.
    const auto tree = Tree<char>::node('a', Tree<char>::node('b', Tree<char>::node('d')), Tree<char>::node('c'));
    std::cout << "bfs:    " << relabel_dps(tree) << '\n';

    const ParseResult r = parse_dps("(define (sq x) (* x x)) trailing bytes are ignored");
    if (const auto* e = std::get_if<SExpr>(&r)) std::cout << "sexpr:  " << print_sexpr(*e) << '\n';
}
