#pragma once

// Difference lists.
//
// DList<T> is a list under construction whose last tail is still a hole:
// append plugs a cons cell into that hole, concat plugs the second list's
// root into the first list's hole (one field write, no allocation), and
// to_list closes the hole with nil.
//
// FunDList<T> is the closure encoding (xs ++ _) used as a baseline.

#include <functional>
#include <utility>

#include "dps/builder.hpp"
#include "dps/list.hpp"

namespace dps {

template <class T>
using DList = Incomplete<List<T>, Dest<List<T>>>;

template <FieldType T>
DList<T> dlist_new(Token&& t) {
    return alloc<List<T>>(std::move(t));
}

template <FieldType T>
DList<T> dlist_append(DList<T>&& i, const std::type_identity_t<T>& x) {
    return map_b(std::move(i), [&x](Dest<List<T>> d) {
        auto [dh, dt] = fill<typename List<T>::Cons>(std::move(d));
        fill_leaf(x, std::move(dh));
        return std::move(dt);
    });
}

template <FieldType T>
DList<T> dlist_concat(DList<T>&& i1, DList<T>&& i2) {
    // fill_comp would reject these inside the callback, after i1 is gone.
    RegionScope& s1 = i1.scope("dlist_concat");
    RegionScope& s2 = i2.scope("dlist_concat");
    if (&s1 != &s2) fail(ErrorCode::RegionMismatch, "dlist_concat: lists come from different regions");
    if (s1.find(i1.lineage()) == s1.find(i2.lineage())) fail(ErrorCode::SelfPlug, "dlist_concat: list concatenated with itself");
    return map_b(std::move(i1), [&i2](Dest<List<T>> dt1) { return fill_comp(std::move(i2), std::move(dt1)); });
}

template <FieldType T>
Escaping<List<T>> dlist_to_list(DList<T>&& i) {
    return from_incomplete_(map_b(std::move(i), [](Dest<List<T>> dt) { fill<typename List<T>::Nil>(std::move(dt)); }));
}

template <FieldType T>
DList<T> dlist_from_list(Token&& t, const List<T>& xs) {
    DList<T> acc = dlist_new<T>(std::move(t));
    for (const auto& x : xs) acc = dlist_append(std::move(acc), x);
    return acc;
}

template <class T>
class FunDList {
public:
    FunDList() : f_([](List<T> ys) { return ys; }) {}

    static FunDList from_list(List<T> xs) {
        return FunDList([xs = std::move(xs)](List<T> ys) { return xs + ys; });
    }

    static FunDList singleton(T x) {
        return FunDList([x = std::move(x)](List<T> ys) { return List<T>::cons(x, std::move(ys)); });
    }

    friend FunDList concat(FunDList a, FunDList b) {
        return FunDList([f = std::move(a.f_), g = std::move(b.f_)](List<T> ys) { return f(g(std::move(ys))); });
    }

    List<T> to_list() const { return f_(List<T>()); }

private:
    explicit FunDList(std::function<List<T>(List<T>)> f) : f_(std::move(f)) {}

    std::function<List<T>(List<T>)> f_;
};

} // namespace dps
