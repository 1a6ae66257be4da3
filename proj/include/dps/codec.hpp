#pragma once

// Compile-time constructor descriptors and host <-> region conversion.
//
// An algebraic type T opts in by specializing Algebraic<T> with
//   static std::string type_id();
//   using constructors = std::tuple<C0, C1, ...>;   // each a Constructor<>
//   static T decode(const Region&, const Cell&);
//   static CellRef encode(Region&, const T&);
// Leaf types specialize LeafCodec<T> (arithmetic types, std::string and
// vectors of trivially copyable elements are provided). The runtime
// TypeShape of T, and of every algebraic type reachable from its fields, is
// derived from these and registered on first use.

#include <concepts>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "dps/region.hpp"
#include "dps/shape.hpp"

namespace dps {

template <class T>
struct LeafCodec;

template <class T>
    requires std::is_arithmetic_v<T>
struct LeafCodec<T> {
    static std::string type_id() {
        if constexpr (std::is_same_v<T, bool>) {
            return "bool";
        } else if constexpr (std::is_floating_point_v<T>) {
            return "float" + std::to_string(sizeof(T) * 8);
        } else {
            return (std::is_signed_v<T> ? "int" : "uint") + std::to_string(sizeof(T) * 8);
        }
    }
    static std::span<const std::byte> bytes(const T& v) noexcept { return std::as_bytes(std::span(&v, 1)); }
    static T load(std::span<const std::byte> b) noexcept {
        T v{};
        std::memcpy(&v, b.data(), sizeof(T));
        return v;
    }
};

template <>
struct LeafCodec<std::string> {
    static std::string type_id() { return "string"; }
    static std::span<const std::byte> bytes(const std::string& v) noexcept {
        return std::as_bytes(std::span(v.data(), v.size()));
    }
    static std::string load(std::span<const std::byte> b) {
        return {reinterpret_cast<const char*>(b.data()), b.size()};
    }
};

template <class E>
    requires std::is_trivially_copyable_v<E> && requires { LeafCodec<E>::type_id(); }
struct LeafCodec<std::vector<E>> {
    static std::string type_id() { return "vector<" + LeafCodec<E>::type_id() + ">"; }
    static std::span<const std::byte> bytes(const std::vector<E>& v) noexcept {
        return std::as_bytes(std::span(v.data(), v.size()));
    }
    static std::vector<E> load(std::span<const std::byte> b) {
        std::vector<E> v(b.size() / sizeof(E));
        if (!v.empty()) std::memcpy(v.data(), b.data(), b.size());
        return v;
    }
};

template <class T>
concept LeafType = requires(const T& v, std::span<const std::byte> b) {
    { LeafCodec<T>::type_id() } -> std::convertible_to<std::string>;
    { LeafCodec<T>::bytes(v) } -> std::convertible_to<std::span<const std::byte>>;
    { LeafCodec<T>::load(b) } -> std::convertible_to<T>;
};

template <class T>
struct Algebraic;

template <class T>
concept AlgebraicType = requires { typename Algebraic<T>::constructors; };

template <class T>
concept FieldType = AlgebraicType<T> || LeafType<T>;

/// Base for constructor tags. `Tag` is the constructor's index within T.
/// Derived tags add `static constexpr std::string_view name`.
template <class T, std::uint32_t Tag, class... Fields>
struct Constructor {
    using type = T;
    using fields = std::tuple<Fields...>;
    static constexpr std::uint32_t tag = Tag;
    static constexpr std::uint32_t arity = sizeof...(Fields);
};

template <FieldType F>
std::string type_id_of() {
    if constexpr (AlgebraicType<F>) {
        return Algebraic<F>::type_id();
    } else {
        return LeafCodec<F>::type_id();
    }
}

template <FieldType F>
FieldKind field_kind_of() {
    if constexpr (AlgebraicType<F>) {
        return FieldKind::recursive(type_id_of<F>());
    } else {
        return FieldKind::leaf(type_id_of<F>());
    }
}

namespace detail {

template <class C, class... Fs>
CtorDescriptor make_descriptor(std::type_identity<std::tuple<Fs...>>) {
    return CtorDescriptor{type_id_of<typename C::type>(), std::string(C::name), C::tag, {field_kind_of<Fs>()...}};
}

template <AlgebraicType T>
void collect_shapes(std::vector<TypeShape>& out, std::set<std::string>& seen);

template <class F>
void collect_field(std::vector<TypeShape>& out, std::set<std::string>& seen) {
    if constexpr (AlgebraicType<F>) collect_shapes<F>(out, seen);
}

template <class C, class... Fs>
void collect_ctor_fields(std::vector<TypeShape>& out, std::set<std::string>& seen, std::type_identity<std::tuple<Fs...>>) {
    (collect_field<Fs>(out, seen), ...);
}

template <AlgebraicType T>
void collect_shapes(std::vector<TypeShape>& out, std::set<std::string>& seen) {
    std::string id = Algebraic<T>::type_id();
    if (!seen.insert(id).second) return;
    TypeShape shape{id, {}};
    std::apply(
        [&]<class... Cs>(Cs...) {
            (shape.ctors.push_back(make_descriptor<Cs>(std::type_identity<typename Cs::fields>{})), ...);
        },
        typename Algebraic<T>::constructors{});
    out.push_back(std::move(shape));
    std::apply(
        [&]<class... Cs>(Cs...) {
            (collect_ctor_fields<Cs>(out, seen, std::type_identity<typename Cs::fields>{}), ...);
        },
        typename Algebraic<T>::constructors{});
}

} // namespace detail

/// The registered shape of T. First use registers T together with every
/// algebraic type reachable from its fields.
template <AlgebraicType T>
const TypeShape& shape_of() {
    static const TypeShape* shape = [] {
        std::vector<TypeShape> group;
        std::set<std::string> seen;
        detail::collect_shapes<T>(group, seen);
        return ShapeRegistry::global().register_group(std::move(group)).front();
    }();
    return *shape;
}

template <class C>
const CtorDescriptor& descriptor_of() {
    static const CtorDescriptor* desc = &shape_of<typename C::type>().ctors[C::tag];
    return *desc;
}

inline std::string indirection_type_id(const FieldKind& target) { return "ind<" + target.type_id + ">"; }

/// The root-receiver constructor for holes of kind `target`: one field,
/// looked through by every decoder.
inline const CtorDescriptor& indirection_for(const FieldKind& target) {
    const std::string id = indirection_type_id(target);
    auto& registry = ShapeRegistry::global();
    if (const TypeShape* known = registry.find(id)) return known->ctors.front();
    CtorDescriptor ctor{id, "ind", 0, {target}, true};
    return registry.register_shape(TypeShape{id, {std::move(ctor)}}).ctors.front();
}

template <FieldType A>
const CtorDescriptor& indirection_of() {
    static const CtorDescriptor* desc = [] {
        if constexpr (AlgebraicType<A>) shape_of<A>();
        return &indirection_for(field_kind_of<A>());
    }();
    return *desc;
}

/// Follows root receivers until reaching a slot that holds the value itself.
inline const FieldSlot& look_through(const FieldSlot& slot) noexcept {
    const FieldSlot* s = &slot;
    while (s->state == SlotState::Ref && s->ref->ctor().indirection) s = &s->ref->field(0);
    return *s;
}

template <AlgebraicType T>
bool has_type(const Cell& cell) noexcept {
    static const TypeShape* shape = &shape_of<T>();
    const CtorDescriptor* d = &cell.ctor();
    return d >= shape->ctors.data() && d < shape->ctors.data() + shape->ctors.size();
}

template <AlgebraicType T>
const Cell& expect_cell(const Cell& cell) {
    if (!has_type<T>(cell)) {
        fail(ErrorCode::UnknownCtor, "expected a cell of '" + type_id_of<T>() + "', found '" + cell.ctor().type_id + "'");
    }
    return cell;
}

template <FieldType T>
T decode_field(const Region& region, const FieldSlot& slot) {
    const FieldSlot& s = look_through(slot);
    if (s.state == SlotState::Hole) fail(ErrorCode::IncompleteRead, "hole reached while decoding");
    if constexpr (AlgebraicType<T>) {
        if (s.state != SlotState::Ref) fail(ErrorCode::UnknownCtor, "leaf found where '" + type_id_of<T>() + "' expected");
        return Algebraic<T>::decode(region, expect_cell<T>(*s.ref));
    } else {
        if (s.state != SlotState::Leaf) fail(ErrorCode::LeafTypeMismatch, "cell found where leaf expected");
        return LeafCodec<T>::load(s.leaf_bytes());
    }
}

/// Copies `v` into the region: leaves become a payload, algebraic values
/// become cells.
template <FieldType T>
FieldValue encode_value(Region& region, const T& v) {
    if constexpr (AlgebraicType<T>) {
        return Algebraic<T>::encode(region, v);
    } else {
        return LeafPayload{LeafCodec<T>::bytes(v)};
    }
}

/// Decodes the fully built value rooted at `root`, after checking that no
/// hole or cycle is reachable from it.
template <FieldType T>
T read_value(const Region& region, CellRef root) {
    region.require_complete(root);
    const Cell& cell = region.cell(root);
    if (cell.ctor().indirection) return decode_field<T>(region, cell.field(0));
    if constexpr (AlgebraicType<T>) {
        return Algebraic<T>::decode(region, expect_cell<T>(cell));
    } else {
        fail(ErrorCode::LeafTypeMismatch, "root cell is not a leaf receiver");
    }
}

} // namespace dps
