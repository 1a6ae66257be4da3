#pragma once

// S-expressions: AST, two recursive-descent parsers, printer and a seeded
// input generator.
//
// Grammar (bytes): whitespace is space, tab, LF, CR. A list is '(' elements
// ')'. A string is '"'-delimited; inside it, backslash escapes '"' and '\'
// and nothing else. An integer is an optional '-' followed by digits that fit
// in int64. Any other run of bytes other than whitespace, parentheses and '"'
// is a symbol. Only the first expression of the input is parsed.
//
// parse_naive accumulates list elements in reverse and reverses at ')'.
// parse_dps writes every node straight into its final place in a region
// through destinations; functions return the offset of the last consumed
// byte instead of a value.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "dps/builder.hpp"
#include "dps/list.hpp"

namespace dps {

struct SExpr {
    enum class Kind : std::uint8_t { List, Integer, String, Symbol };

    struct ListC : Constructor<SExpr, 0, std::int64_t, List<SExpr>> {
        static constexpr std::string_view name = "SList";
    };
    struct IntegerC : Constructor<SExpr, 1, std::int64_t, std::int64_t> {
        static constexpr std::string_view name = "SInteger";
    };
    struct StringC : Constructor<SExpr, 2, std::int64_t, std::string> {
        static constexpr std::string_view name = "SString";
    };
    struct SymbolC : Constructor<SExpr, 3, std::int64_t, std::string> {
        static constexpr std::string_view name = "SSymbol";
    };

    Kind kind = Kind::Symbol;
    // Offset of the expression's last byte in its source.
    std::int64_t end_pos = 0;
    std::int64_t integer = 0;
    std::string text;
    List<SExpr> children;

    static SExpr list(std::int64_t end, List<SExpr> children) {
        SExpr e;
        e.kind = Kind::List;
        e.end_pos = end;
        e.children = std::move(children);
        return e;
    }
    static SExpr integer_atom(std::int64_t end, std::int64_t v) {
        SExpr e;
        e.kind = Kind::Integer;
        e.end_pos = end;
        e.integer = v;
        return e;
    }
    static SExpr string_atom(std::int64_t end, std::string s) {
        SExpr e;
        e.kind = Kind::String;
        e.end_pos = end;
        e.text = std::move(s);
        return e;
    }
    static SExpr symbol_atom(std::int64_t end, std::string s) {
        SExpr e;
        e.kind = Kind::Symbol;
        e.end_pos = end;
        e.text = std::move(s);
        return e;
    }

    friend bool operator==(const SExpr&, const SExpr&) = default;
};

/// Structural equality ignoring source positions.
inline bool same_shape(const SExpr& a, const SExpr& b) {
    if (a.kind != b.kind || a.integer != b.integer || a.text != b.text) return false;
    auto i = a.children.begin();
    auto j = b.children.begin();
    for (; i != a.children.end() && j != b.children.end(); ++i, ++j) {
        if (!same_shape(*i, *j)) return false;
    }
    return i == a.children.end() && j == b.children.end();
}

template <>
struct Algebraic<SExpr> {
    using constructors = std::tuple<SExpr::ListC, SExpr::IntegerC, SExpr::StringC, SExpr::SymbolC>;

    static std::string type_id() { return "sexpr"; }

    static SExpr decode(const Region& region, const Cell& cell) {
        const auto end = decode_field<std::int64_t>(region, cell.field(0));
        switch (cell.tag()) {
        case SExpr::ListC::tag: return SExpr::list(end, decode_field<List<SExpr>>(region, cell.field(1)));
        case SExpr::IntegerC::tag: return SExpr::integer_atom(end, decode_field<std::int64_t>(region, cell.field(1)));
        case SExpr::StringC::tag: return SExpr::string_atom(end, decode_field<std::string>(region, cell.field(1)));
        default: return SExpr::symbol_atom(end, decode_field<std::string>(region, cell.field(1)));
        }
    }

    static CellRef encode(Region& region, const SExpr& e) {
        CellRef c;
        switch (e.kind) {
        case SExpr::Kind::List:
            c = region.alloc_hollow(descriptor_of<SExpr::ListC>());
            region.write_field(c, 1, encode_value(region, e.children));
            break;
        case SExpr::Kind::Integer:
            c = region.alloc_hollow(descriptor_of<SExpr::IntegerC>());
            region.write_field(c, 1, encode_value(region, e.integer));
            break;
        case SExpr::Kind::String:
            c = region.alloc_hollow(descriptor_of<SExpr::StringC>());
            region.write_field(c, 1, encode_value(region, e.text));
            break;
        case SExpr::Kind::Symbol:
            c = region.alloc_hollow(descriptor_of<SExpr::SymbolC>());
            region.write_field(c, 1, encode_value(region, e.text));
            break;
        }
        region.write_field(c, 0, encode_value(region, e.end_pos));
        return c;
    }
};

struct ParseError {
    enum class Kind : std::uint8_t { UnexpectedEOFSList, UnexpectedEOFAtom, UnterminatedString, InvalidAtom };

    Kind kind;
    std::size_t pos;

    friend bool operator==(const ParseError&, const ParseError&) = default;
};

constexpr std::string_view to_string(ParseError::Kind k) noexcept {
    switch (k) {
    case ParseError::Kind::UnexpectedEOFSList: return "UnexpectedEOFSList";
    case ParseError::Kind::UnexpectedEOFAtom: return "UnexpectedEOFAtom";
    case ParseError::Kind::UnterminatedString: return "UnterminatedString";
    case ParseError::Kind::InvalidAtom: return "InvalidAtom";
    }
    return "?";
}

using ParseResult = std::variant<SExpr, ParseError>;

struct ParseCounters {
    std::uint64_t reverse_calls = 0;
    AllocStats region;
};

namespace sexpr_detail {

constexpr bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
constexpr bool ends_atom(char c) noexcept { return is_space(c) || c == '(' || c == ')' || c == '"'; }

struct Atom {
    bool is_integer = false;
    std::int64_t value = 0;
    std::string text;
    std::size_t end = 0;
};

template <class T>
using Lexed = std::variant<T, ParseError>;

/// `i` is the opening quote; the result ends at the closing quote.
inline Lexed<Atom> lex_string(std::string_view bs, std::size_t i) {
    Atom a;
    for (std::size_t j = i + 1; j < bs.size(); ++j) {
        const char c = bs[j];
        if (c == '"') {
            a.end = j;
            return a;
        }
        if (c == '\\') {
            if (j + 1 == bs.size()) break;
            const char e = bs[j + 1];
            if (e != '"' && e != '\\') return ParseError{ParseError::Kind::InvalidAtom, j};
            a.text += e;
            ++j;
        } else {
            a.text += c;
        }
    }
    return ParseError{ParseError::Kind::UnterminatedString, i};
}

/// `i` is the first byte of an integer or symbol token.
inline Lexed<Atom> lex_token(std::string_view bs, std::size_t i) {
    std::size_t j = i;
    while (j < bs.size() && !ends_atom(bs[j])) ++j;
    Atom a;
    a.end = j - 1;
    const std::string_view tok = bs.substr(i, j - i);
    const bool negative = tok.front() == '-';
    const std::string_view digits = negative ? tok.substr(1) : tok;
    const bool numeric =
        !digits.empty() && digits.find_first_not_of("0123456789") == std::string_view::npos;
    if (!numeric) {
        a.text = std::string(tok);
        return a;
    }
    // Accumulate negatively so INT64_MIN is representable.
    std::int64_t v = 0;
    for (char c : digits) {
        const int d = c - '0';
        if (v < (INT64_MIN + d) / 10) return ParseError{ParseError::Kind::InvalidAtom, i};
        v = v * 10 - d;
    }
    if (!negative) {
        if (v == INT64_MIN) return ParseError{ParseError::Kind::InvalidAtom, i};
        v = -v;
    }
    a.is_integer = true;
    a.value = v;
    return a;
}

inline std::size_t skip_space(std::string_view bs, std::size_t i) noexcept {
    while (i < bs.size() && is_space(bs[i])) ++i;
    return i;
}

// --- bottom-up -----------------------------------------------------------

inline ParseResult parse_sexpr(std::string_view bs, std::size_t i, ParseCounters* counters);

inline ParseResult parse_slist(std::string_view bs, std::size_t i, List<SExpr> acc, ParseCounters* counters) {
    // Tail recursion on (i, acc), written as a loop.
    for (;;) {
        if (i >= bs.size()) return ParseError{ParseError::Kind::UnexpectedEOFSList, i};
        const char x = bs[i];
        if (x == ')') {
            if (counters) counters->reverse_calls += 1;
            return SExpr::list(static_cast<std::int64_t>(i), reverse(acc));
        }
        if (is_space(x)) {
            i += 1;
            continue;
        }
        ParseResult child = parse_sexpr(bs, i, counters);
        if (auto* err = std::get_if<ParseError>(&child)) return *err;
        SExpr& c = std::get<SExpr>(child);
        i = static_cast<std::size_t>(c.end_pos) + 1;
        acc = List<SExpr>::cons(std::move(c), std::move(acc));
    }
}

inline ParseResult parse_sexpr(std::string_view bs, std::size_t i, ParseCounters* counters) {
    if (i >= bs.size()) return ParseError{ParseError::Kind::UnexpectedEOFAtom, i};
    const char c = bs[i];
    if (c == '(') return parse_slist(bs, i + 1, {}, counters);
    if (c == ')') return ParseError{ParseError::Kind::InvalidAtom, i};
    Lexed<Atom> lexed = c == '"' ? lex_string(bs, i) : lex_token(bs, i);
    if (auto* err = std::get_if<ParseError>(&lexed)) return *err;
    Atom& a = std::get<Atom>(lexed);
    const auto end = static_cast<std::int64_t>(a.end);
    if (c == '"') return SExpr::string_atom(end, std::move(a.text));
    if (a.is_integer) return SExpr::integer_atom(end, a.value);
    return SExpr::symbol_atom(end, std::move(a.text));
}

// --- destination passing -------------------------------------------------

using Offset = std::variant<std::size_t, ParseError>;

// Error paths must still consume every destination they hold.
inline void fill_default(Dest<SExpr>&& d, std::size_t pos) {
    auto [de, ds] = fill<SExpr::SymbolC>(std::move(d));
    fill_leaf(static_cast<std::int64_t>(pos), std::move(de));
    fill_leaf(std::string(), std::move(ds));
}

inline Offset parse_sexpr_dps(std::string_view bs, std::size_t i, Dest<SExpr>&& d);

inline Offset parse_slist_dps(std::string_view bs, std::size_t i, Dest<List<SExpr>>&& d) {
    for (;;) {
        if (i >= bs.size()) {
            fill<List<SExpr>::Nil>(std::move(d));
            return ParseError{ParseError::Kind::UnexpectedEOFSList, i};
        }
        const char x = bs[i];
        if (x == ')') {
            fill<List<SExpr>::Nil>(std::move(d));
            return i;
        }
        if (is_space(x)) {
            i += 1;
            continue;
        }
        auto [dh, dt] = fill<List<SExpr>::Cons>(std::move(d));
        Offset r = parse_sexpr_dps(bs, i, std::move(dh));
        if (auto* err = std::get_if<ParseError>(&r)) {
            fill<List<SExpr>::Nil>(std::move(dt));
            return *err;
        }
        i = std::get<std::size_t>(r) + 1;
        d = std::move(dt);
    }
}

inline Offset parse_sexpr_dps(std::string_view bs, std::size_t i, Dest<SExpr>&& d) {
    if (i >= bs.size()) {
        fill_default(std::move(d), i);
        return ParseError{ParseError::Kind::UnexpectedEOFAtom, i};
    }
    const char c = bs[i];
    if (c == '(') {
        auto [de, dc] = fill<SExpr::ListC>(std::move(d));
        Offset r = parse_slist_dps(bs, i + 1, std::move(dc));
        const std::size_t end = std::holds_alternative<std::size_t>(r) ? std::get<std::size_t>(r) : i;
        fill_leaf(static_cast<std::int64_t>(end), std::move(de));
        return r;
    }
    if (c == ')') {
        fill_default(std::move(d), i);
        return ParseError{ParseError::Kind::InvalidAtom, i};
    }
    Lexed<Atom> lexed = c == '"' ? lex_string(bs, i) : lex_token(bs, i);
    if (auto* err = std::get_if<ParseError>(&lexed)) {
        fill_default(std::move(d), i);
        return *err;
    }
    Atom& a = std::get<Atom>(lexed);
    const auto end = static_cast<std::int64_t>(a.end);
    if (a.is_integer && c != '"') {
        auto [de, dv] = fill<SExpr::IntegerC>(std::move(d));
        fill_leaf(end, std::move(de));
        fill_leaf(a.value, std::move(dv));
    } else if (c == '"') {
        auto [de, ds] = fill<SExpr::StringC>(std::move(d));
        fill_leaf(end, std::move(de));
        fill_leaf(a.text, std::move(ds));
    } else {
        auto [de, ds] = fill<SExpr::SymbolC>(std::move(d));
        fill_leaf(end, std::move(de));
        fill_leaf(a.text, std::move(ds));
    }
    return a.end;
}

} // namespace sexpr_detail

inline ParseResult parse_naive(std::string_view input, ParseCounters* counters = nullptr) {
    return sexpr_detail::parse_sexpr(input, sexpr_detail::skip_space(input, 0), counters);
}

inline ParseResult parse_dps(std::string_view input, ParseCounters* counters = nullptr,
                             std::size_t block_size = Region::kDefaultBlockSize) {
    auto out = with_region(
        [&](Token t) {
            auto [t_build, t_stats] = token_dup2(std::move(t));
            auto built = map_b(alloc<SExpr>(std::move(t_build)), [&](Dest<SExpr> d) {
                return escape(sexpr_detail::parse_sexpr_dps(input, sexpr_detail::skip_space(input, 0), std::move(d)));
            });
            auto [value, offset] = from_incomplete(std::move(built)).value;
            if (counters) counters->region = region_stats(t_stats);
            token_consume(std::move(t_stats));
            if (auto* err = std::get_if<ParseError>(&offset)) return escape(ParseResult(*err));
            return escape(ParseResult(std::move(value)));
        },
        block_size);
    return std::move(out.value);
}

namespace sexpr_detail {

inline void print_to(std::string& out, const SExpr& e) {
    switch (e.kind) {
    case SExpr::Kind::Integer: out += std::to_string(e.integer); break;
    case SExpr::Kind::Symbol: out += e.text; break;
    case SExpr::Kind::String:
        out += '"';
        for (char c : e.text) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
        break;
    case SExpr::Kind::List: {
        out += '(';
        bool first = true;
        for (const auto& child : e.children) {
            if (!first) out += ' ';
            print_to(out, child);
            first = false;
        }
        out += ')';
        break;
    }
    }
}

} // namespace sexpr_detail

/// Canonical form: single spaces between siblings, strings quoted with '"'
/// and '\' escaped.
inline std::string print_sexpr(const SExpr& e) {
    std::string out;
    sexpr_detail::print_to(out, e);
    return out;
}

namespace sexpr_detail {

class InputGenerator {
public:
    explicit InputGenerator(std::uint64_t seed) : rng_(seed) {}

    void list(std::string& out, std::size_t budget, int depth) {
        const std::size_t close_at = out.size() + budget - 1;
        out += '(';
        bool first = true;
        for (;;) {
            const std::size_t sep = first ? 0 : 1;
            if (out.size() + sep + 1 > close_at) break;
            const std::size_t avail = close_at - out.size() - sep;
            if (!first) out += ' ';
            first = false;
            if (depth < kMaxDepth && avail >= 2 && below(4) == 0) {
                const std::size_t cap = std::max<std::size_t>(2, std::min(avail, std::max<std::size_t>(avail / 3, 16)));
                list(out, 2 + below(cap - 1), depth + 1);
            } else {
                atom(out, std::min<std::size_t>(avail, 1 + below(10)));
            }
        }
        out += ')';
    }

private:
    static constexpr int kMaxDepth = 12;

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    // Exactly `len` bytes.
    void atom(std::string& out, std::size_t len) {
        static constexpr std::string_view kSymbolStart = "abcdefghijklmnopqrstuvwxyz+*/<>=!?_";
        static constexpr std::string_view kSymbolRest = "abcdefghijklmnopqrstuvwxyz0123456789-+*/<>=!?_";
        static constexpr std::string_view kText = "abcdefghij klmnopqrstuvwxyz0123456789()-";
        const auto kind = below(3);
        if (kind == 0 || (kind == 2 && len < 2)) {
            if (len >= 2 && below(3) == 0) {
                out += '-';
                len -= 1;
            }
            if (len > 18) len = 18;
            for (std::size_t k = 0; k < len; ++k) out += static_cast<char>('0' + (k == 0 ? 1 + below(9) : below(10)));
        } else if (kind == 1) {
            out += kSymbolStart[below(kSymbolStart.size())];
            for (std::size_t k = 1; k < len; ++k) out += kSymbolRest[below(kSymbolRest.size())];
        } else {
            out += '"';
            std::size_t body = len - 2;
            while (body > 0) {
                if (body >= 2 && below(8) == 0) {
                    out += '\\';
                    out += below(2) ? '"' : '\\';
                    body -= 2;
                } else {
                    out += kText[below(kText.size())];
                    body -= 1;
                }
            }
            out += '"';
        }
    }

    std::mt19937_64 rng_;
};

} // namespace sexpr_detail

/// Deterministic well-formed input of about `size` bytes (never more, and
/// "()" for the minimum size 2).
inline std::string generate_input(std::size_t size, std::uint64_t seed) {
    size = std::max<std::size_t>(size, 2);
    std::string out;
    out.reserve(size);
    sexpr_detail::InputGenerator(seed).list(out, size, 0);
    return out;
}

} // namespace dps
