#pragma once

// Immutable binary tree with constructors Nil/Node.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <random>

#include "dps/codec.hpp"

namespace dps {

template <class T>
class Tree {
    struct Node;

public:
    struct Nil : Constructor<Tree, 0> {
        static constexpr std::string_view name = "Nil";
    };
    struct NodeC : Constructor<Tree, 1, T, Tree, Tree> {
        static constexpr std::string_view name = "Node";
    };

    Tree() = default;

    static Tree node(T value, Tree left = {}, Tree right = {}) {
        Tree t;
        t.node_ = std::make_shared<const Node>(Node{std::move(value), std::move(left), std::move(right)});
        return t;
    }

    bool is_nil() const noexcept { return node_ == nullptr; }
    const T& value() const noexcept { return node_->value; }
    const Tree& left() const noexcept { return node_->left; }
    const Tree& right() const noexcept { return node_->right; }

    std::size_t size() const noexcept { return is_nil() ? 0 : 1 + left().size() + right().size(); }

    friend bool operator==(const Tree& a, const Tree& b) {
        if (a.node_ == b.node_) return true;
        if (a.is_nil() || b.is_nil()) return false;
        return a.value() == b.value() && a.left() == b.left() && a.right() == b.right();
    }

    friend std::ostream& operator<<(std::ostream& os, const Tree& t) {
        if (t.is_nil()) return os << '.';
        return os << '(' << t.value() << ' ' << t.left() << ' ' << t.right() << ')';
    }

private:
    std::shared_ptr<const Node> node_;
};

template <class T>
struct Tree<T>::Node {
    T value;
    Tree left;
    Tree right;
};

template <FieldType T>
struct Algebraic<Tree<T>> {
    using constructors = std::tuple<typename Tree<T>::Nil, typename Tree<T>::NodeC>;

    static std::string type_id() { return "tree<" + type_id_of<T>() + ">"; }

    static Tree<T> decode(const Region& region, const Cell& cell) {
        if (cell.tag() == Tree<T>::Nil::tag) return {};
        return Tree<T>::node(decode_field<T>(region, cell.field(0)), decode_field<Tree<T>>(region, cell.field(1)),
                             decode_field<Tree<T>>(region, cell.field(2)));
    }

    static CellRef encode(Region& region, const Tree<T>& t) {
        if (t.is_nil()) return region.alloc_hollow(descriptor_of<typename Tree<T>::Nil>());
        CellRef c = region.alloc_hollow(descriptor_of<typename Tree<T>::NodeC>());
        region.write_field(c, 0, encode_value(region, t.value()));
        region.write_field(c, 1, encode(region, t.left()));
        region.write_field(c, 2, encode(region, t.right()));
        return c;
    }
};

/// A tree with exactly `n` nodes whose shape comes from splitting the
/// remaining nodes uniformly at random between the two subtrees. Node values
/// are drawn from [0, 1000).
template <class URBG>
Tree<std::int64_t> random_tree(std::size_t n, URBG& rng) {
    if (n == 0) return {};
    const std::size_t left = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const auto value = std::uniform_int_distribution<std::int64_t>(0, 999)(rng);
    Tree<std::int64_t> l = random_tree(left, rng);
    Tree<std::int64_t> r = random_tree(n - 1 - left, rng);
    return Tree<std::int64_t>::node(value, std::move(l), std::move(r));
}

} // namespace dps
