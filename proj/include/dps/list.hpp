#pragma once

// Immutable singly linked list with structural sharing, plus its region
// constructors nil/cons.

#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <ostream>
#include <vector>

#include "dps/codec.hpp"

namespace dps {

template <class T>
class List {
    struct Node;

public:
    struct Nil : Constructor<List, 0> {
        static constexpr std::string_view name = "nil";
    };
    struct Cons : Constructor<List, 1, T, List> {
        static constexpr std::string_view name = "cons";
    };

    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = T;
        using difference_type = std::ptrdiff_t;
        using pointer = const T*;
        using reference = const T&;

        const_iterator() = default;
        reference operator*() const noexcept { return node_->head; }
        pointer operator->() const noexcept { return &node_->head; }
        const_iterator& operator++() noexcept {
            node_ = node_->tail.node_.get();
            return *this;
        }
        const_iterator operator++(int) noexcept {
            auto out = *this;
            ++*this;
            return out;
        }
        friend bool operator==(const const_iterator&, const const_iterator&) = default;

    private:
        friend class List;
        explicit const_iterator(const Node* n) noexcept : node_(n) {}
        const Node* node_ = nullptr;
    };

    /// Appends at the end of a list under construction in O(1).
    class Builder {
    public:
        void push_back(T v) {
            auto node = std::make_shared<Node>(Node{std::move(v), List()});
            Node* raw = node.get();
            if (last_ == nullptr) {
                head_.node_ = std::move(node);
            } else {
                last_->tail.node_ = std::move(node);
            }
            last_ = raw;
        }
        /// Finishes the list with `tail` shared as its suffix.
        List finish(List tail = {}) && {
            if (last_ == nullptr) return tail;
            last_->tail = std::move(tail);
            return std::move(head_);
        }

    private:
        List head_;
        Node* last_ = nullptr;
    };

    List() = default;
    List(std::initializer_list<T> xs) : List(from_range(xs)) {}

    template <class R>
    static List from_range(const R& xs) {
        Builder b;
        for (const auto& x : xs) b.push_back(x);
        return std::move(b).finish();
    }

    static List cons(T head, List tail) {
        List out;
        out.node_ = std::make_shared<Node>(Node{std::move(head), std::move(tail)});
        return out;
    }

    List(const List&) = default;
    List(List&&) noexcept = default;
    List& operator=(const List&) = default;
    List& operator=(List&& o) noexcept {
        if (this != &o) {
            List old = std::move(*this);
            node_ = std::move(o.node_);
        }
        return *this;
    }

    // Unlinks uniquely owned nodes one by one so long lists do not recurse.
    ~List() {
        std::shared_ptr<Node> n = std::move(node_);
        while (n && n.use_count() == 1) n = std::move(n->tail.node_);
    }

    bool empty() const noexcept { return node_ == nullptr; }
    const T& head() const noexcept { return node_->head; }
    const List& tail() const noexcept { return node_->tail; }

    std::size_t size() const noexcept {
        std::size_t n = 0;
        for (const Node* p = node_.get(); p; p = p->tail.node_.get()) ++n;
        return n;
    }

    const_iterator begin() const noexcept { return const_iterator(node_.get()); }
    const_iterator end() const noexcept { return const_iterator(); }

    std::vector<T> to_vector() const { return std::vector<T>(begin(), end()); }

    /// xs ++ ys: copies the spine of xs, shares ys.
    friend List operator+(const List& xs, const List& ys) {
        Builder b;
        for (const auto& x : xs) b.push_back(x);
        return std::move(b).finish(ys);
    }

    friend bool operator==(const List& a, const List& b) {
        const Node* p = a.node_.get();
        const Node* q = b.node_.get();
        while (p && q) {
            if (p == q) return true;
            if (!(p->head == q->head)) return false;
            p = p->tail.node_.get();
            q = q->tail.node_.get();
        }
        return p == q;
    }

    friend std::ostream& operator<<(std::ostream& os, const List& xs) {
        os << '[';
        bool first = true;
        for (const auto& x : xs) {
            os << (first ? "" : ",") << x;
            first = false;
        }
        return os << ']';
    }

private:
    std::shared_ptr<Node> node_;
};

template <class T>
struct List<T>::Node {
    T head;
    List tail;
};

template <class T>
List<T> reverse(const List<T>& xs) {
    List<T> out;
    for (const auto& x : xs) out = List<T>::cons(x, std::move(out));
    return out;
}

template <FieldType T>
struct Algebraic<List<T>> {
    using constructors = std::tuple<typename List<T>::Nil, typename List<T>::Cons>;

    static std::string type_id() { return "list<" + type_id_of<T>() + ">"; }

    static List<T> decode(const Region& region, const Cell& first) {
        typename List<T>::Builder out;
        const Cell* cell = &first;
        while (cell->tag() == List<T>::Cons::tag) {
            out.push_back(decode_field<T>(region, cell->field(0)));
            const FieldSlot& tail = look_through(cell->field(1));
            if (tail.state != SlotState::Ref) fail(ErrorCode::IncompleteRead, "list tail is not a cell");
            cell = &expect_cell<List<T>>(*tail.ref);
        }
        return std::move(out).finish();
    }

    static CellRef encode(Region& region, const List<T>& xs) {
        const CtorDescriptor& cons = descriptor_of<typename List<T>::Cons>();
        CellRef root;
        CellRef hole_cell;
        for (const auto& x : xs) {
            CellRef c = region.alloc_hollow(cons);
            region.write_field(c, 0, encode_value(region, x));
            if (hole_cell.valid()) {
                region.write_field(hole_cell, 1, c);
            } else {
                root = c;
            }
            hole_cell = c;
        }
        CellRef nil = region.alloc_hollow(descriptor_of<typename List<T>::Nil>());
        if (hole_cell.valid()) {
            region.write_field(hole_cell, 1, nil);
            return root;
        }
        return nil;
    }
};

} // namespace dps
