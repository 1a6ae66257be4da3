#pragma once

// Runtime-typed view of region values: Term is a generic constructor tree
// over registered shapes, and the *_dyn operations fill destinations given a
// CtorDescriptor chosen at runtime. Leaves are int64 or string.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dps/builder.hpp"
#include "dps/codec.hpp"

namespace dps {

using LeafValue = std::variant<std::int64_t, std::string>;

struct Term;
using TermPtr = std::shared_ptr<const Term>;
using TermField = std::variant<std::int64_t, std::string, TermPtr>;

struct Term {
    const CtorDescriptor* ctor = nullptr;
    std::vector<TermField> fields;

    friend bool operator==(const Term& a, const Term& b) {
        if (a.ctor != b.ctor || a.fields.size() != b.fields.size()) return false;
        for (std::size_t i = 0; i < a.fields.size(); ++i) {
            const auto& x = a.fields[i];
            const auto& y = b.fields[i];
            if (x.index() != y.index()) return false;
            if (const auto* p = std::get_if<TermPtr>(&x)) {
                if (!(**p == *std::get<TermPtr>(y))) return false;
            } else if (x != y) {
                return false;
            }
        }
        return true;
    }
};

inline std::string leaf_type_id(const LeafValue& v) {
    return std::holds_alternative<std::int64_t>(v) ? LeafCodec<std::int64_t>::type_id() : LeafCodec<std::string>::type_id();
}

inline std::string to_string(const Term& t) {
    std::string out = "(" + t.ctor->name;
    for (const auto& f : t.fields) {
        out += ' ';
        if (const auto* i = std::get_if<std::int64_t>(&f)) {
            out += std::to_string(*i);
        } else if (const auto* s = std::get_if<std::string>(&f)) {
            out += '"' + *s + '"';
        } else {
            out += to_string(*std::get<TermPtr>(f));
        }
    }
    return out + ")";
}

namespace detail {

inline Term decode_term_cell(const Region& region, const Cell& cell);

inline TermField decode_term_field(const Region& region, const FieldSlot& slot, const FieldKind& kind) {
    const FieldSlot& s = look_through(slot);
    if (s.state == SlotState::Hole) fail(ErrorCode::IncompleteRead, "hole reached while decoding");
    if (s.state == SlotState::Ref) return std::make_shared<const Term>(decode_term_cell(region, *s.ref));
    if (kind.type_id == LeafCodec<std::int64_t>::type_id()) return LeafCodec<std::int64_t>::load(s.leaf_bytes());
    if (kind.type_id == LeafCodec<std::string>::type_id()) return LeafCodec<std::string>::load(s.leaf_bytes());
    fail(ErrorCode::LeafTypeMismatch, "leaf type '" + kind.type_id + "' has no Term representation");
}

inline Term decode_term_cell(const Region& region, const Cell& cell) {
    Term t{&cell.ctor(), {}};
    t.fields.reserve(cell.arity());
    for (std::uint32_t i = 0; i < cell.arity(); ++i) {
        t.fields.push_back(decode_term_field(region, cell.field(i), cell.ctor().fields[i]));
    }
    return t;
}

template <>
struct RootCodec<Term> {
    static Term read(const Region& region, CellRef root);
};

} // namespace detail

/// Generic decoder: works for any registered shape.
inline Term read_term(const Region& region, CellRef root) {
    region.require_complete(root);
    const Cell& cell = region.cell(root);
    if (!cell.ctor().indirection) return detail::decode_term_cell(region, cell);
    TermField f = detail::decode_term_field(region, cell.field(0), cell.ctor().fields[0]);
    if (auto* p = std::get_if<TermPtr>(&f)) return **p;
    fail(ErrorCode::LeafTypeMismatch, "root holds a leaf, not a term");
}

inline Term detail::RootCodec<Term>::read(const Region& region, CellRef root) { return read_term(region, root); }

/// Copies `t` into the region bottom-up.
inline CellRef encode_term(Region& region, const Term& t) {
    CellRef c = region.alloc_hollow(*t.ctor);
    for (std::uint32_t i = 0; i < t.fields.size(); ++i) {
        const TermField& f = t.fields[i];
        if (const auto* n = std::get_if<std::int64_t>(&f)) {
            region.write_field(c, i, LeafPayload{LeafCodec<std::int64_t>::bytes(*n)});
        } else if (const auto* s = std::get_if<std::string>(&f)) {
            region.write_field(c, i, LeafPayload{LeafCodec<std::string>::bytes(*s)});
        } else {
            region.write_field(c, i, encode_term(region, *std::get<TermPtr>(f)));
        }
    }
    return c;
}

/// alloc for a type chosen at runtime.
inline Incomplete<Term, AnyDest> alloc_dyn(Token&& t, const TypeShape& shape) {
    const CtorDescriptor& receiver = indirection_for(FieldKind::recursive(shape.type_id));
    RegionScope& s = t.take("alloc_dyn");
    CellRef root = s.region().alloc_hollow(receiver);
    const LineageId lineage = s.new_lineage(1);
    return {s, root, detail::DestFactory::make_any(s, root, 0, lineage), lineage};
}

/// fill for a constructor chosen at runtime. UnknownCtor if `ctor` is not
/// registered or does not build the type the hole expects.
inline std::vector<AnyDest> fill_dyn(AnyDest&& d, const CtorDescriptor& ctor) {
    RegionScope& s = d.core().scope("fill");
    const CtorDescriptor& desc = ShapeRegistry::global().resolve(ctor);
    const FieldKind& expected = d.expected();
    if (!expected.is_recursive() || expected.type_id != desc.type_id) {
        fail(ErrorCode::UnknownCtor, "constructor '" + desc.name + "' of '" + desc.type_id + "' cannot fill a hole of '" +
                                         expected.type_id + "'");
    }
    const LineageId lineage = d.core().lineage();
    const CellRef cell = s.region().alloc_hollow(desc);
    d.core().write(cell);
    s.holes(lineage) += desc.arity();
    std::vector<AnyDest> out;
    out.reserve(desc.arity());
    for (std::uint32_t i = 0; i < desc.arity(); ++i) out.push_back(detail::DestFactory::make_any(s, cell, i, lineage));
    return out;
}

inline void fill_leaf_dyn(const LeafValue& v, AnyDest&& d) {
    const FieldKind& expected = d.expected();
    if (!expected.is_leaf() || expected.type_id != leaf_type_id(v)) {
        fail(ErrorCode::LeafTypeMismatch, "hole expects '" + expected.type_id + "', got '" + leaf_type_id(v) + "'");
    }
    if (const auto* n = std::get_if<std::int64_t>(&v)) {
        d.core().write(LeafPayload{LeafCodec<std::int64_t>::bytes(*n)});
    } else {
        d.core().write(LeafPayload{LeafCodec<std::string>::bytes(std::get<std::string>(v))});
    }
}

/// Fills `d` with a bottom-up copy of an algebraic term.
inline void fill_term(const Term& t, AnyDest&& d) {
    RegionScope& s = d.core().scope("fill_leaf");
    const FieldKind& expected = d.expected();
    if (!expected.is_recursive() || expected.type_id != t.ctor->type_id) {
        fail(ErrorCode::UnknownCtor, "term of '" + t.ctor->type_id + "' cannot fill a hole of '" + expected.type_id + "'");
    }
    d.core().write(encode_term(s.region(), t));
}

} // namespace dps
