#pragma once

// Constructor metadata for algebraic types stored in regions.
//
// A TypeShape lists the constructors of one (monomorphic) algebraic type.
// Each constructor records its tag and the kind of each field: either a
// recursive reference to another registered algebraic type, or a leaf whose
// bytes are copied into the region. Shapes are registered once, then the
// registry is read-only; descriptors have stable addresses for the lifetime
// of the program so cells can point at them.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "dps/error.hpp"

namespace dps {

struct FieldKind {
    enum class Kind : std::uint8_t { Recursive, Leaf };

    Kind kind = Kind::Leaf;
    std::string type_id;

    static FieldKind recursive(std::string type_id) { return {Kind::Recursive, std::move(type_id)}; }
    static FieldKind leaf(std::string type_id) { return {Kind::Leaf, std::move(type_id)}; }

    bool is_recursive() const noexcept { return kind == Kind::Recursive; }
    bool is_leaf() const noexcept { return kind == Kind::Leaf; }

    friend bool operator==(const FieldKind&, const FieldKind&) = default;
};

struct CtorDescriptor {
    std::string type_id;
    std::string name;
    std::uint32_t tag = 0;
    std::vector<FieldKind> fields;
    // Root receivers: one-field cells that decoding looks through.
    bool indirection = false;

    std::uint32_t arity() const noexcept { return static_cast<std::uint32_t>(fields.size()); }

    friend bool operator==(const CtorDescriptor&, const CtorDescriptor&) = default;
};

struct TypeShape {
    std::string type_id;
    std::vector<CtorDescriptor> ctors;

    const CtorDescriptor* find_ctor(std::string_view name) const noexcept {
        for (const auto& c : ctors) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    friend bool operator==(const TypeShape&, const TypeShape&) = default;
};

struct HoleSpec {
    std::uint32_t index = 0;
    FieldKind kind;

    friend bool operator==(const HoleSpec&, const HoleSpec&) = default;
};

class ShapeRegistry {
public:
    ShapeRegistry() = default;
    ShapeRegistry(const ShapeRegistry&) = delete;
    ShapeRegistry& operator=(const ShapeRegistry&) = delete;

    static ShapeRegistry& global() {
        static ShapeRegistry registry;
        return registry;
    }

    const TypeShape& register_shape(TypeShape shape) {
        std::vector<TypeShape> group;
        group.push_back(std::move(shape));
        return *register_group(std::move(group)).front();
    }

    /// Registers shapes that may refer to each other (e.g. sexpr and
    /// list<sexpr>). Either every shape is registered or none is.
    std::vector<const TypeShape*> register_group(std::vector<TypeShape> group) {
        std::lock_guard lock(mutex_);
        std::map<std::string, const TypeShape*> pending;
        for (auto& shape : group) {
            normalize(shape);
            validate_local(shape);
            if (auto it = shapes_.find(shape.type_id); it != shapes_.end()) {
                if (!(*it->second == shape)) {
                    fail(ErrorCode::ShapeConflict, "type '" + shape.type_id + "' already registered with a different shape");
                }
            }
            if (auto it = pending.find(shape.type_id); it != pending.end() && !(*it->second == shape)) {
                fail(ErrorCode::ShapeConflict, "type '" + shape.type_id + "' appears twice in one group");
            }
            pending[shape.type_id] = &shape;
        }
        for (const auto& shape : group) {
            for (const auto& ctor : shape.ctors) {
                for (const auto& field : ctor.fields) {
                    if (field.is_recursive() && !pending.contains(field.type_id) && !shapes_.contains(field.type_id)) {
                        fail(ErrorCode::UnresolvedShape, "constructor '" + ctor.name + "' of '" + shape.type_id +
                                                             "' refers to unregistered type '" + field.type_id + "'");
                    }
                }
            }
        }
        std::vector<const TypeShape*> out;
        out.reserve(group.size());
        for (auto& shape : group) {
            auto it = shapes_.find(shape.type_id);
            if (it == shapes_.end()) {
                std::string id = shape.type_id;
                it = shapes_.emplace(id, std::make_unique<TypeShape>(std::move(shape))).first;
            }
            out.push_back(it->second.get());
        }
        return out;
    }

    const TypeShape* find(std::string_view type_id) const {
        std::lock_guard lock(mutex_);
        auto it = shapes_.find(std::string(type_id));
        return it == shapes_.end() ? nullptr : it->second.get();
    }

    /// The holes a hollow cell of `ctor` exposes, in declaration order.
    std::vector<HoleSpec> dests_spec_of(const CtorDescriptor& ctor) const {
        const CtorDescriptor& known = resolve(ctor);
        std::vector<HoleSpec> out;
        out.reserve(known.fields.size());
        for (std::uint32_t i = 0; i < known.arity(); ++i) out.push_back({i, known.fields[i]});
        return out;
    }

    /// The registry-owned descriptor equal to `ctor`, or UnknownCtor.
    const CtorDescriptor& resolve(const CtorDescriptor& ctor) const {
        const TypeShape* shape = find(ctor.type_id);
        if (shape != nullptr && ctor.tag < shape->ctors.size() && shape->ctors[ctor.tag] == ctor) {
            return shape->ctors[ctor.tag];
        }
        fail(ErrorCode::UnknownCtor, "constructor '" + ctor.name + "' of '" + ctor.type_id + "' is not registered");
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return shapes_.size();
    }

private:
    static void normalize(TypeShape& shape) {
        for (auto& c : shape.ctors) c.type_id = shape.type_id;
    }

    static void validate_local(const TypeShape& shape) {
        if (shape.ctors.empty()) {
            fail(ErrorCode::ShapeConflict, "type '" + shape.type_id + "' has no constructors");
        }
        for (std::size_t i = 0; i < shape.ctors.size(); ++i) {
            if (shape.ctors[i].tag != i) {
                fail(ErrorCode::ShapeConflict, "type '" + shape.type_id + "': constructor tags must be 0..n-1 in order");
            }
        }
    }

    mutable std::mutex mutex_;
    std::map<std::string, std::unique_ptr<TypeShape>> shapes_;
};

} // namespace dps
