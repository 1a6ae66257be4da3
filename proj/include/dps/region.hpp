#pragma once

// Region heap: an arena of immovable cells with write-once fields.
//
// Storage is a chain of fixed-capacity blocks filled by pointer bumping.
// Blocks are never moved or released before the region itself, so a CellRef
// stays valid for the region's lifetime. A cell is a small header (descriptor
// pointer, arity, scan mark) followed by `arity` field slots; each slot is a
// Hole until written exactly once with either a reference to another cell of
// the same region or a leaf payload copied into region storage.
//
// A region and everything derived from it must be used from one thread at a
// time. Nothing here synchronizes.

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dps/error.hpp"
#include "dps/shape.hpp"

namespace dps {

using RegionId = std::uint64_t;

class Cell;
class Region;

enum class SlotState : std::uint8_t { Hole, Ref, Leaf };

struct FieldSlot {
    static constexpr std::size_t kInlineBytes = 8;

    SlotState state = SlotState::Hole;
    bool inline_leaf = false;
    std::uint32_t leaf_size = 0;
    union {
        Cell* ref;
        const std::byte* leaf_ptr;
        std::byte inline_bytes[kInlineBytes];
    };

    FieldSlot() noexcept : ref(nullptr) {}

    bool is_hole() const noexcept { return state == SlotState::Hole; }

    std::span<const std::byte> leaf_bytes() const noexcept {
        assert(state == SlotState::Leaf);
        return {inline_leaf ? inline_bytes : leaf_ptr, leaf_size};
    }
};

static_assert(sizeof(FieldSlot) == 16);

class Cell {
public:
    const CtorDescriptor& ctor() const noexcept { return *ctor_; }
    std::uint32_t tag() const noexcept { return ctor_->tag; }
    std::uint32_t arity() const noexcept { return arity_; }

    FieldSlot& field(std::uint32_t i) noexcept { return slots()[i]; }
    const FieldSlot& field(std::uint32_t i) const noexcept { return slots()[i]; }

private:
    friend class Region;

    explicit Cell(const CtorDescriptor& ctor) noexcept : ctor_(&ctor), arity_(ctor.arity()) {
        for (std::uint32_t i = 0; i < arity_; ++i) ::new (static_cast<void*>(slots() + i)) FieldSlot();
    }

    FieldSlot* slots() noexcept { return reinterpret_cast<FieldSlot*>(this + 1); }
    const FieldSlot* slots() const noexcept { return reinterpret_cast<const FieldSlot*>(this + 1); }

    const CtorDescriptor* ctor_;
    std::uint32_t arity_;
    mutable std::uint32_t mark_ = 0;
};

inline constexpr std::size_t kCellHeaderBytes = sizeof(Cell);
inline constexpr std::size_t kFieldSlotBytes = sizeof(FieldSlot);

static_assert(kCellHeaderBytes == 16);

constexpr std::size_t cell_bytes(std::uint32_t arity) noexcept {
    return kCellHeaderBytes + kFieldSlotBytes * arity;
}

/// Locator of one cell. Only a Region hands these out.
class CellRef {
public:
    CellRef() = default;

    RegionId region_id() const noexcept { return region_; }
    bool valid() const noexcept { return cell_ != nullptr; }

    friend bool operator==(const CellRef&, const CellRef&) = default;

private:
    friend class Region;

    CellRef(RegionId region, Cell* cell) noexcept : region_(region), cell_(cell) {}

    RegionId region_ = 0;
    Cell* cell_ = nullptr;
};

struct LeafPayload {
    std::span<const std::byte> bytes;
};

using FieldValue = std::variant<CellRef, LeafPayload>;

struct AllocStats {
    std::uint64_t cells_allocated = 0;
    std::uint64_t bytes_allocated = 0;
    std::uint64_t leaf_copies = 0;
    std::uint64_t blocks = 0;
    // Blocks dedicated to a single payload larger than the block size.
    std::uint64_t oversize_blocks = 0;

    friend bool operator==(const AllocStats&, const AllocStats&) = default;
};

class Region {
public:
    static constexpr std::size_t kMinBlockSize = 256;
    static constexpr std::size_t kDefaultBlockSize = 32 * 1024;

    explicit Region(std::size_t block_size = kDefaultBlockSize) : id_(next_id()), block_size_(block_size) {
        if (block_size < kMinBlockSize) {
            fail(ErrorCode::InvalidBlockSize,
                 "block size " + std::to_string(block_size) + " is below the minimum of " + std::to_string(kMinBlockSize));
        }
    }

    Region(const Region&) = delete;
    Region& operator=(const Region&) = delete;

    RegionId id() const noexcept { return id_; }
    std::size_t block_size() const noexcept { return block_size_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t bump_offset() const noexcept { return has_current_ ? blocks_[current_].used : 0; }
    std::uint64_t outstanding_holes() const noexcept { return outstanding_holes_; }
    std::uint64_t cell_count() const noexcept { return stats_.cells_allocated; }
    const AllocStats& stats() const noexcept { return stats_; }

    bool owns(const CellRef& ref) const noexcept { return ref.valid() && ref.region_ == id_; }

    /// Allocates a cell tagged with `ctor` whose fields are all holes.
    CellRef alloc_hollow(const CtorDescriptor& ctor) {
        const std::size_t size = cell_bytes(ctor.arity());
        void* mem = allocate(size);
        Cell* cell = ::new (mem) Cell(ctor);
        stats_.cells_allocated += 1;
        outstanding_holes_ += ctor.arity();
        return {id_, cell};
    }

    void write_field(CellRef target, std::uint32_t index, const FieldValue& value) {
        Cell& cell = checked_cell(target);
        if (index >= cell.arity()) {
            fail(ErrorCode::FieldIndexOutOfRange, "field " + std::to_string(index) + " of '" + cell.ctor().name +
                                                      "' (arity " + std::to_string(cell.arity()) + ")");
        }
        FieldSlot& slot = cell.field(index);
        if (!slot.is_hole()) {
            fail(ErrorCode::DoubleFill, "field " + std::to_string(index) + " of '" + cell.ctor().name + "' already written");
        }
        if (const auto* ref = std::get_if<CellRef>(&value)) {
            if (!owns(*ref)) fail(ErrorCode::RegionMismatch, "reference to a cell of another region");
            slot.ref = ref->cell_;
            slot.state = SlotState::Ref;
        } else {
            const auto bytes = std::get<LeafPayload>(value).bytes;
            if (bytes.size() <= FieldSlot::kInlineBytes) {
                if (!bytes.empty()) std::memcpy(slot.inline_bytes, bytes.data(), bytes.size());
                slot.inline_leaf = true;
            } else {
                auto* copy = static_cast<std::byte*>(allocate(bytes.size()));
                std::memcpy(copy, bytes.data(), bytes.size());
                slot.leaf_ptr = copy;
                slot.inline_leaf = false;
            }
            slot.leaf_size = static_cast<std::uint32_t>(bytes.size());
            slot.state = SlotState::Leaf;
            stats_.leaf_copies += 1;
        }
        outstanding_holes_ -= 1;
    }

    const Cell& cell(CellRef ref) const { return const_cast<Region*>(this)->checked_cell(ref); }

    const FieldSlot& field(CellRef ref, std::uint32_t index) const {
        const Cell& c = cell(ref);
        if (index >= c.arity()) fail(ErrorCode::FieldIndexOutOfRange, "field " + std::to_string(index));
        return c.field(index);
    }

    /// The cell a Ref slot points to, as a handle.
    CellRef ref_of(const FieldSlot& slot) const noexcept {
        assert(slot.state == SlotState::Ref);
        return {id_, slot.ref};
    }

    /// Throws IncompleteRead if a hole is reachable from `root` and
    /// CyclicStructure if a cell is reachable from itself. Shared (DAG)
    /// sub-structures are fine.
    void require_complete(CellRef root) const {
        const Cell& start = cell(root);
        const std::uint32_t grey = next_scan_mark();
        const std::uint32_t black = grey + 1;
        struct Frame {
            const Cell* cell;
            std::uint32_t next;
        };
        std::vector<Frame> stack;
        start.mark_ = grey;
        stack.push_back({&start, 0});
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.next == top.cell->arity()) {
                top.cell->mark_ = black;
                stack.pop_back();
                continue;
            }
            const FieldSlot& slot = top.cell->field(top.next);
            const std::uint32_t index = top.next++;
            switch (slot.state) {
            case SlotState::Hole:
                fail(ErrorCode::IncompleteRead,
                     "field " + std::to_string(index) + " of '" + top.cell->ctor().name + "' is a hole");
            case SlotState::Leaf:
                break;
            case SlotState::Ref: {
                const Cell* child = slot.ref;
                if (child->mark_ == grey) {
                    fail(ErrorCode::CyclicStructure, "cell '" + child->ctor().name + "' is reachable from itself");
                }
                if (child->mark_ != black) {
                    child->mark_ = grey;
                    stack.push_back({child, 0});
                }
                break;
            }
            }
        }
    }

private:
    struct Block {
        std::unique_ptr<std::byte[]> data;
        std::size_t capacity = 0;
        std::size_t used = 0;
    };

    static RegionId next_id() noexcept {
        static std::atomic<RegionId> counter{0};
        return ++counter;
    }

    Cell& checked_cell(CellRef ref) {
        if (!owns(ref)) fail(ErrorCode::RegionMismatch, "cell handle does not belong to this region");
        return *ref.cell_;
    }

    std::uint32_t next_scan_mark() const noexcept {
        scan_epoch_ += 1;
        return scan_epoch_ * 2;
    }

    void* allocate(std::size_t size) {
        size = (size + 7) & ~std::size_t{7};
        if (size > block_size_) {
            auto& block = blocks_.emplace_back(Block{std::make_unique<std::byte[]>(size), size, size});
            stats_.blocks += 1;
            stats_.oversize_blocks += 1;
            stats_.bytes_allocated += size;
            return block.data.get();
        }
        if (!has_current_ || blocks_[current_].capacity - blocks_[current_].used < size) {
            blocks_.push_back(Block{std::make_unique<std::byte[]>(block_size_), block_size_, 0});
            current_ = blocks_.size() - 1;
            has_current_ = true;
            stats_.blocks += 1;
        }
        Block& block = blocks_[current_];
        void* out = block.data.get() + block.used;
        block.used += size;
        stats_.bytes_allocated += size;
        return out;
    }

    RegionId id_;
    std::size_t block_size_;
    // Vector growth moves the owning pointers, never the storage they own.
    std::vector<Block> blocks_;
    std::size_t current_ = 0;
    bool has_current_ = false;
    std::uint64_t outstanding_holes_ = 0;
    AllocStats stats_;
    mutable std::uint32_t scan_epoch_ = 0;
};

inline std::unique_ptr<Region> region_new(std::size_t block_size = Region::kDefaultBlockSize) {
    return std::make_unique<Region>(block_size);
}

inline AllocStats region_stats(const Region& region) noexcept { return region.stats(); }

} // namespace dps
