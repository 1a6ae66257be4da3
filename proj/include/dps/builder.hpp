#pragma once

// Destination-passing construction API.
//
//   with_region(body)      fresh region + token; audits linear values at exit
//   token_dup2 / token_consume
//   alloc<A>(token)        Incomplete<A, Dest<A>> over a root receiver
//   into_incomplete(t, v)  Incomplete<A, Unit> holding a copy of v
//   map_b(i, f)            transform the payload (the obligations) of i
//   from_incomplete_(i)    read a finished Incomplete<A, Unit>
//   from_incomplete(i)     read a finished Incomplete<A, Escaping<C>>
//   fill<Ctor>(d)          plug a hollow constructor, get one Dest per field
//   fill_leaf(v, d)        plug a copy of v
//   fill_comp(child, d)    plug another incomplete's root, get its payload
//
// Token, Dest and Incomplete are move-only, so they cannot be duplicated by
// accident. Each accepts one consuming operation; a moved-from or consumed
// handle is dead and any further consuming operation throws UseAfterConsume
// without side effects. Dropping a live handle is caught by the scope-exit
// audit of with_region (LinearityLeak).
//
// Every Incomplete owns a lineage whose hole counter equals the number of
// live destinations it has handed out. fill_comp merges the child lineage
// into the parent's (union-find), which re-homes all child destinations at
// once.

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "dps/codec.hpp"
#include "dps/error.hpp"
#include "dps/region.hpp"

namespace dps {

struct Unit {
    friend bool operator==(Unit, Unit) = default;
};

template <class T>
class Dest;
class AnyDest;
class Token;
template <class A, class B>
class Incomplete;

template <class T>
struct IsLinear : std::false_type {};
template <class T>
struct IsLinear<Dest<T>> : std::true_type {};
template <>
struct IsLinear<AnyDest> : std::true_type {};
template <>
struct IsLinear<Token> : std::true_type {};
template <class A, class B>
struct IsLinear<Incomplete<A, B>> : std::true_type {};
template <class... Ts>
struct IsLinear<std::tuple<Ts...>> : std::disjunction<IsLinear<Ts>...> {};
template <class X, class Y>
struct IsLinear<std::pair<X, Y>> : std::disjunction<IsLinear<X>, IsLinear<Y>> {};
template <class T>
struct IsLinear<std::vector<T>> : IsLinear<T> {};
template <class T>
struct IsLinear<std::deque<T>> : IsLinear<T> {};
template <class T>
struct IsLinear<std::optional<T>> : IsLinear<T> {};

/// A finished value with no linear obligations attached. This is the only
/// thing a with_region body may hand back.
template <class T>
struct Escaping {
    static_assert(!IsLinear<T>::value, "destinations, tokens and incompletes cannot escape");
    T value;

    friend bool operator==(const Escaping&, const Escaping&) = default;
};

template <class T>
Escaping(T) -> Escaping<T>;

template <class T>
Escaping<std::decay_t<T>> escape(T&& v) {
    return {std::forward<T>(v)};
}

using LineageId = std::uint32_t;

struct LiveCounts {
    std::int64_t tokens = 0;
    std::int64_t dests = 0;
    std::int64_t incompletes = 0;

    bool empty() const noexcept { return tokens == 0 && dests == 0 && incompletes == 0; }
    friend bool operator==(const LiveCounts&, const LiveCounts&) = default;
};

/// A region together with the bookkeeping of the linear values minted in it.
class RegionScope {
public:
    explicit RegionScope(std::size_t block_size = Region::kDefaultBlockSize) : region_(block_size) {}

    RegionScope(const RegionScope&) = delete;
    RegionScope& operator=(const RegionScope&) = delete;

    Region& region() noexcept { return region_; }
    const Region& region() const noexcept { return region_; }
    RegionId id() const noexcept { return region_.id(); }
    const LiveCounts& live() const noexcept { return live_; }

    Token mint_token();

    void audit() const {
        if (!live_.empty()) {
            fail(ErrorCode::LinearityLeak, std::to_string(live_.tokens) + " token(s), " + std::to_string(live_.dests) +
                                               " destination(s), " + std::to_string(live_.incompletes) +
                                               " incomplete(s) left unconsumed at scope exit");
        }
    }

    LineageId new_lineage(std::int64_t holes) {
        lineages_.push_back({holes, static_cast<LineageId>(lineages_.size())});
        return lineages_.back().parent;
    }

    LineageId find(LineageId l) noexcept {
        while (lineages_[l].parent != l) {
            lineages_[l].parent = lineages_[lineages_[l].parent].parent;
            l = lineages_[l].parent;
        }
        return l;
    }

    std::int64_t& holes(LineageId l) noexcept { return lineages_[find(l)].holes; }

    /// Re-homes every destination of `child` into `parent`.
    void merge(LineageId child, LineageId parent) noexcept {
        const LineageId c = find(child);
        const LineageId p = find(parent);
        lineages_[p].holes += lineages_[c].holes;
        lineages_[c].holes = 0;
        lineages_[c].parent = p;
    }

    void on_token(std::int64_t delta) noexcept { live_.tokens += delta; }
    void on_dest(std::int64_t delta) noexcept { live_.dests += delta; }
    void on_incomplete(std::int64_t delta) noexcept { live_.incompletes += delta; }

private:
    struct Lineage {
        std::int64_t holes;
        LineageId parent;
    };

    Region region_;
    LiveCounts live_;
    std::vector<Lineage> lineages_;
};

class Token {
public:
    Token(Token&& other) noexcept : scope_(std::exchange(other.scope_, nullptr)) {}
    Token& operator=(Token&& other) noexcept {
        if (this != &other) scope_ = std::exchange(other.scope_, nullptr);
        return *this;
    }
    Token(const Token&) = delete;
    Token& operator=(const Token&) = delete;
    ~Token() = default;

    bool live() const noexcept { return scope_ != nullptr; }
    RegionId region_id() const noexcept { return scope_ ? scope_->id() : 0; }

    RegionScope& scope(const char* op) const {
        if (scope_ == nullptr) fail(ErrorCode::UseAfterConsume, std::string(op) + ": token already consumed");
        return *scope_;
    }

    /// Marks this token consumed and returns its scope.
    RegionScope& take(const char* op) {
        scope(op).on_token(-1);
        return *std::exchange(scope_, nullptr);
    }

private:
    friend class RegionScope;
    explicit Token(RegionScope& scope) noexcept : scope_(&scope) { scope.on_token(+1); }

    RegionScope* scope_;
};

inline Token RegionScope::mint_token() { return Token(*this); }

namespace detail {

// Untyped part of a destination: one hole (cell, field index) of one region
// plus the lineage that owes it.
class DestCore {
public:
    DestCore() = default;
    DestCore(RegionScope& scope, CellRef cell, std::uint32_t index, LineageId lineage) noexcept
        : scope_(&scope), cell_(cell), index_(index), lineage_(lineage) {
        scope.on_dest(+1);
    }
    DestCore(DestCore&& o) noexcept
        : scope_(std::exchange(o.scope_, nullptr)), cell_(o.cell_), index_(o.index_), lineage_(o.lineage_) {}
    DestCore& operator=(DestCore&& o) noexcept {
        if (this != &o) {
            scope_ = std::exchange(o.scope_, nullptr);
            cell_ = o.cell_;
            index_ = o.index_;
            lineage_ = o.lineage_;
        }
        return *this;
    }
    DestCore(const DestCore&) = delete;
    DestCore& operator=(const DestCore&) = delete;

    bool live() const noexcept { return scope_ != nullptr; }
    RegionScope& scope(const char* op) const {
        if (scope_ == nullptr) fail(ErrorCode::UseAfterConsume, std::string(op) + ": destination already consumed");
        return *scope_;
    }
    CellRef cell() const noexcept { return cell_; }
    std::uint32_t index() const noexcept { return index_; }
    LineageId lineage() const noexcept { return lineage_; }
    RegionId region_id() const noexcept { return scope_ ? scope_->id() : 0; }

    bool owned_by(LineageId root) const noexcept { return scope_ != nullptr && scope_->find(lineage_) == root; }

    const FieldKind& expected() const { return scope("expected").region().cell(cell_).ctor().fields[index_]; }

    /// Writes `value` into the hole and retires this destination.
    void write(const FieldValue& value) {
        RegionScope& s = scope("fill");
        s.region().write_field(cell_, index_, value);
        retire(s);
    }

    void retire(RegionScope& s) noexcept {
        s.holes(lineage_) -= 1;
        s.on_dest(-1);
        scope_ = nullptr;
    }

private:
    RegionScope* scope_ = nullptr;
    CellRef cell_;
    std::uint32_t index_ = 0;
    LineageId lineage_ = 0;
};

struct DestFactory;

} // namespace detail

/// Handle to one unfilled hole of type T.
template <class T>
class Dest {
public:
    Dest(Dest&&) noexcept = default;
    Dest& operator=(Dest&&) noexcept = default;

    bool live() const noexcept { return core_.live(); }
    RegionId region_id() const noexcept { return core_.region_id(); }

    detail::DestCore& core() noexcept { return core_; }
    const detail::DestCore& core() const noexcept { return core_; }

private:
    friend class AnyDest;
    friend struct detail::DestFactory;

    Dest(RegionScope& scope, CellRef cell, std::uint32_t index, LineageId lineage) noexcept
        : core_(scope, cell, index, lineage) {}

    detail::DestCore core_;
};

/// Handle to one unfilled hole whose type is only known at runtime.
class AnyDest {
public:
    AnyDest(AnyDest&&) noexcept = default;
    AnyDest& operator=(AnyDest&&) noexcept = default;

    template <class T>
    explicit AnyDest(Dest<T>&& d) noexcept : core_(std::move(d.core_)) {}

    bool live() const noexcept { return core_.live(); }
    RegionId region_id() const noexcept { return core_.region_id(); }
    /// Kind of value the hole expects. Throws UseAfterConsume if dead.
    const FieldKind& expected() const { return core_.expected(); }

    detail::DestCore& core() noexcept { return core_; }
    const detail::DestCore& core() const noexcept { return core_; }

private:
    friend struct detail::DestFactory;

    AnyDest(RegionScope& scope, CellRef cell, std::uint32_t index, LineageId lineage) noexcept
        : core_(scope, cell, index, lineage) {}

    detail::DestCore core_;
};

namespace detail {

struct DestFactory {
    template <class T>
    static Dest<T> make(RegionScope& scope, CellRef cell, std::uint32_t index, LineageId lineage) noexcept {
        return Dest<T>(scope, cell, index, lineage);
    }
    static AnyDest make_any(RegionScope& scope, CellRef cell, std::uint32_t index, LineageId lineage) noexcept {
        return AnyDest(scope, cell, index, lineage);
    }
};

} // namespace detail

/// A value of type A under construction, paired with the payload B that
/// must be consumed before A can be read.
template <class A, class B>
class Incomplete {
public:
    Incomplete(Incomplete&& o) noexcept
        : scope_(std::exchange(o.scope_, nullptr)), root_(o.root_), payload_(std::move(o.payload_)), lineage_(o.lineage_) {}
    Incomplete& operator=(Incomplete&& o) noexcept {
        if (this != &o) {
            scope_ = std::exchange(o.scope_, nullptr);
            root_ = o.root_;
            payload_ = std::move(o.payload_);
            lineage_ = o.lineage_;
        }
        return *this;
    }
    Incomplete(const Incomplete&) = delete;
    Incomplete& operator=(const Incomplete&) = delete;

    bool live() const noexcept { return scope_ != nullptr; }
    RegionId region_id() const noexcept { return scope_ ? scope_->id() : 0; }
    CellRef root() const noexcept { return root_; }
    LineageId lineage() const noexcept { return lineage_; }

    /// Live destinations this incomplete still owes.
    std::int64_t holes_outstanding() const { return scope("holes_outstanding").holes(lineage_); }

    RegionScope& scope(const char* op) const {
        if (scope_ == nullptr) fail(ErrorCode::UseAfterConsume, std::string(op) + ": incomplete already consumed");
        return *scope_;
    }

    /// Marks this incomplete consumed and hands out its payload.
    B release(RegionScope& s) {
        s.on_incomplete(-1);
        scope_ = nullptr;
        B out = std::move(*payload_);
        payload_.reset();
        return out;
    }

    Incomplete(RegionScope& scope, CellRef root, B payload, LineageId lineage)
        : scope_(&scope), root_(root), payload_(std::move(payload)), lineage_(lineage) {
        scope.on_incomplete(+1);
    }

private:
    RegionScope* scope_;
    CellRef root_;
    std::optional<B> payload_;
    LineageId lineage_;
};

namespace detail {

// Counts live destinations of `lineage` held by a payload, when the payload
// type can be inspected. Used to check that map_b callbacks consumed their
// argument rather than dropping part of it.
template <class T>
struct OwnedDests {
    static constexpr bool known = std::is_arithmetic_v<T> || std::is_enum_v<T> || std::is_same_v<T, Unit>;
    static std::int64_t count(const T&, LineageId) noexcept { return 0; }
};
template <class T>
struct OwnedDests<Escaping<T>> {
    static constexpr bool known = true;
    static std::int64_t count(const Escaping<T>&, LineageId) noexcept { return 0; }
};
template <class T>
struct OwnedDests<Dest<T>> {
    static constexpr bool known = true;
    static std::int64_t count(const Dest<T>& d, LineageId l) noexcept { return d.core().owned_by(l) ? 1 : 0; }
};
template <>
struct OwnedDests<AnyDest> {
    static constexpr bool known = true;
    static std::int64_t count(const AnyDest& d, LineageId l) noexcept { return d.core().owned_by(l) ? 1 : 0; }
};
template <class A, class B>
struct OwnedDests<Incomplete<A, B>> {
    static constexpr bool known = true;
    static std::int64_t count(const Incomplete<A, B>&, LineageId) noexcept { return 0; }
};
template <class... Ts>
struct OwnedDests<std::tuple<Ts...>> {
    static constexpr bool known = (OwnedDests<Ts>::known && ...);
    static std::int64_t count(const std::tuple<Ts...>& t, LineageId l) {
        return std::apply([l](const auto&... xs) { return (std::int64_t{0} + ... + OwnedDests<std::decay_t<decltype(xs)>>::count(xs, l)); }, t);
    }
};
template <class X, class Y>
struct OwnedDests<std::pair<X, Y>> {
    static constexpr bool known = OwnedDests<X>::known && OwnedDests<Y>::known;
    static std::int64_t count(const std::pair<X, Y>& p, LineageId l) {
        return OwnedDests<X>::count(p.first, l) + OwnedDests<Y>::count(p.second, l);
    }
};
template <class Seq>
struct OwnedDestsSeq {
    using E = typename Seq::value_type;
    static constexpr bool known = OwnedDests<E>::known;
    static std::int64_t count(const Seq& s, LineageId l) {
        std::int64_t n = 0;
        for (const auto& x : s) n += OwnedDests<E>::count(x, l);
        return n;
    }
};
template <class T>
struct OwnedDests<std::vector<T>> : OwnedDestsSeq<std::vector<T>> {};
template <class T>
struct OwnedDests<std::deque<T>> : OwnedDestsSeq<std::deque<T>> {};
template <class T>
struct OwnedDests<std::optional<T>> {
    static constexpr bool known = OwnedDests<T>::known;
    static std::int64_t count(const std::optional<T>& o, LineageId l) { return o ? OwnedDests<T>::count(*o, l) : 0; }
};

template <class A>
struct RootCodec {
    static A read(const Region& region, CellRef root) { return read_value<A>(region, root); }
};

template <class T>
struct IsEscaping : std::false_type {};
template <class T>
struct IsEscaping<Escaping<T>> : std::true_type {};

} // namespace detail

/// Runs `body` with a fresh token over a fresh region, then checks that no
/// token, destination or incomplete minted in that region is still live.
template <class F>
auto with_region(F&& body, std::size_t block_size = Region::kDefaultBlockSize) {
    using R = std::invoke_result_t<F, Token>;
    static_assert(detail::IsEscaping<R>::value, "with_region body must return Escaping<T>");
    RegionScope scope(block_size);
    R result = std::invoke(std::forward<F>(body), scope.mint_token());
    scope.audit();
    return result;
}

inline std::pair<Token, Token> token_dup2(Token&& t) {
    RegionScope& s = t.take("token_dup2");
    return {s.mint_token(), s.mint_token()};
}

inline void token_consume(Token&& t) { t.take("token_consume"); }

/// Live tokens, destinations and incompletes of a live token's region.
inline LiveCounts live_counts(const Token& t) { return t.scope("live_counts").live(); }

/// Allocation counters of the region a live token belongs to.
inline const AllocStats& region_stats(const Token& t) { return t.scope("region_stats").region().stats(); }

template <class A>
Incomplete<A, Dest<A>> alloc(Token&& t) {
    const CtorDescriptor& receiver = indirection_of<A>();
    RegionScope& s = t.take("alloc");
    CellRef root = s.region().alloc_hollow(receiver);
    const LineageId lineage = s.new_lineage(1);
    return {s, root, detail::DestFactory::make<A>(s, root, 0, lineage), lineage};
}

template <AlgebraicType A>
Incomplete<A, Unit> into_incomplete(Token&& t, const A& value) {
    RegionScope& s = t.take("into_incomplete");
    const FieldValue copy = encode_value(s.region(), value);
    return {s, std::get<CellRef>(copy), Unit{}, s.new_lineage(0)};
}

template <class A, class B, class F>
auto map_b(Incomplete<A, B>&& i, F&& f) {
    using R = std::invoke_result_t<F, B&&>;
    using C = std::conditional_t<std::is_void_v<R>, Unit, R>;
    RegionScope& s = i.scope("map_b");
    const CellRef root = i.root();
    const LineageId lineage = i.lineage();
    B payload = i.release(s);
    auto result = [&]() -> C {
        if constexpr (std::is_void_v<R>) {
            std::invoke(std::forward<F>(f), std::move(payload));
            return Unit{};
        } else {
            return std::invoke(std::forward<F>(f), std::move(payload));
        }
    }();
    if constexpr (detail::OwnedDests<C>::known) {
        const LineageId l = s.find(lineage);
        const std::int64_t held = detail::OwnedDests<C>::count(result, l);
        if (held != s.holes(l)) {
            fail(ErrorCode::LinearityLeak, "map_b callback returned " + std::to_string(held) + " of " +
                                               std::to_string(s.holes(l)) + " outstanding destination(s)");
        }
    }
    return Incomplete<A, C>(s, root, std::move(result), lineage);
}

template <class A>
Escaping<A> from_incomplete_(Incomplete<A, Unit>&& i) {
    RegionScope& s = i.scope("from_incomplete_");
    if (const auto n = s.holes(i.lineage()); n != 0) {
        fail(ErrorCode::UnfilledHoles, std::to_string(n) + " destination(s) still unfilled");
    }
    A value = detail::RootCodec<A>::read(s.region(), i.root());
    i.release(s);
    return {std::move(value)};
}

template <class A, class C>
Escaping<std::pair<A, C>> from_incomplete(Incomplete<A, Escaping<C>>&& i) {
    RegionScope& s = i.scope("from_incomplete");
    if (const auto n = s.holes(i.lineage()); n != 0) {
        fail(ErrorCode::UnfilledHoles, std::to_string(n) + " destination(s) still unfilled");
    }
    A value = detail::RootCodec<A>::read(s.region(), i.root());
    Escaping<C> extra = i.release(s);
    return {{std::move(value), std::move(extra.value)}};
}

/// Plugs a hollow `Ctor` cell into `d` and returns one destination per field.
template <class Ctor, class T>
auto fill(Dest<T>&& d) {
    static_assert(std::is_same_v<typename Ctor::type, T>, "constructor does not build the destination's type");
    const CtorDescriptor& desc = descriptor_of<Ctor>();
    detail::DestCore& core = d.core();
    RegionScope& s = core.scope("fill");
    const LineageId lineage = core.lineage();
    const CellRef cell = s.region().alloc_hollow(desc);
    core.write(cell);
    s.holes(lineage) += Ctor::arity;
    return [&]<class... Fs, std::size_t... Is>(std::type_identity<std::tuple<Fs...>>, std::index_sequence<Is...>) {
        return std::tuple<Dest<Fs>...>{
            detail::DestFactory::make<Fs>(s, cell, static_cast<std::uint32_t>(Is), lineage)...};
    }(std::type_identity<typename Ctor::fields>{}, std::make_index_sequence<Ctor::arity>{});
}

/// Fills `d` with a copy of `value`.
template <FieldType T>
void fill_leaf(const T& value, Dest<T>&& d) {
    RegionScope& s = d.core().scope("fill_leaf");
    d.core().write(encode_value(s.region(), value));
}

/// Writes the root of `child` into `d`; `child`'s destinations now belong to
/// `d`'s lineage. Returns `child`'s payload.
template <class A, class B>
B fill_comp(Incomplete<A, B>&& child, Dest<A>&& d) {
    RegionScope& cs = child.scope("fill_comp");
    RegionScope& ds = d.core().scope("fill_comp");
    if (&cs != &ds) fail(ErrorCode::RegionMismatch, "fill_comp: incomplete and destination come from different regions");
    if (cs.find(child.lineage()) == cs.find(d.core().lineage())) {
        fail(ErrorCode::SelfPlug, "fill_comp: destination belongs to the incomplete being plugged");
    }
    const LineageId parent = d.core().lineage();
    d.core().write(child.root());
    cs.merge(child.lineage(), parent);
    return child.release(cs);
}

} // namespace dps
