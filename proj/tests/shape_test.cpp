#include <gtest/gtest.h>

#include <random>

#include "dps/term.hpp"
#include "support.hpp"

namespace {

using namespace dps;
using dps::fixtures::IntList;
using dps::fixtures::IntTree;
using dps::fixtures::Rng;

template <class Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::OracleMismatch;
}

TEST(Shape, ListShapeIsDerived) {
    const TypeShape& s = shape_of<IntList>();
    EXPECT_EQ(s.type_id, "list<int64>");
    ASSERT_EQ(s.ctors.size(), 2u);
    EXPECT_EQ(s.ctors[0].name, "nil");
    EXPECT_EQ(s.ctors[0].arity(), 0u);
    EXPECT_EQ(s.ctors[1].name, "cons");
    EXPECT_EQ(s.ctors[1].fields, (std::vector{FieldKind::leaf("int64"), FieldKind::recursive("list<int64>")}));
    EXPECT_EQ(ShapeRegistry::global().find("list<int64>"), &s);
}

TEST(Shape, DestsSpec) {
    auto& reg = ShapeRegistry::global();
    EXPECT_TRUE(reg.dests_spec_of(descriptor_of<IntList::Nil>()).empty());
    EXPECT_EQ(reg.dests_spec_of(descriptor_of<IntList::Cons>()),
              (std::vector<HoleSpec>{{0, FieldKind::leaf("int64")}, {1, FieldKind::recursive("list<int64>")}}));
    const auto node = reg.dests_spec_of(descriptor_of<IntTree::NodeC>());
    ASSERT_EQ(node.size(), 3u);
    EXPECT_EQ(node[1].kind, FieldKind::recursive("tree<int64>"));
    EXPECT_EQ(node[2].index, 2u);
}

TEST(Shape, UnknownCtor) {
    CtorDescriptor ghost{"list<int64>", "snoc", 2, {}};
    EXPECT_EQ(code_of([&] { ShapeRegistry::global().dests_spec_of(ghost); }), ErrorCode::UnknownCtor);
    CtorDescriptor stranger{"nope", "x", 0, {}};
    EXPECT_EQ(code_of([&] { ShapeRegistry::global().dests_spec_of(stranger); }), ErrorCode::UnknownCtor);
}

TEST(Shape, ExplicitRegistration) {
    ShapeRegistry reg;
    TypeShape tree{"tree_a",
                   {{"tree_a", "Nil", 0, {}},
                    {"tree_a", "Node", 1, {FieldKind::leaf("int64"), FieldKind::recursive("tree_a"), FieldKind::recursive("tree_a")}}}};
    const TypeShape& s = reg.register_shape(tree);
    EXPECT_EQ(s.ctors.size(), 2u);
    EXPECT_EQ(&reg.register_shape(tree), &s);  // identical re-registration
    TypeShape other = tree;
    other.ctors[1].fields.pop_back();
    EXPECT_EQ(code_of([&] { reg.register_shape(other); }), ErrorCode::ShapeConflict);
    EXPECT_EQ(reg.size(), 1u);
}

TEST(Shape, RegistrationErrors) {
    ShapeRegistry reg;
    EXPECT_EQ(code_of([&] { reg.register_shape({"empty", {}}); }), ErrorCode::ShapeConflict);
    EXPECT_EQ(code_of([&] { reg.register_shape({"t", {{"t", "A", 1, {}}}}); }), ErrorCode::ShapeConflict);
    EXPECT_EQ(code_of([&] { reg.register_shape({"t", {{"t", "A", 0, {FieldKind::recursive("missing")}}}}); }),
              ErrorCode::UnresolvedShape);
    EXPECT_EQ(reg.size(), 0u);
}

TEST(Shape, MutuallyRecursiveGroup) {
    ShapeRegistry reg;
    std::vector<TypeShape> group{
        {"forest", {{"forest", "Empty", 0, {}}, {"forest", "More", 1, {FieldKind::recursive("rose"), FieldKind::recursive("forest")}}}},
        {"rose", {{"rose", "Rose", 0, {FieldKind::leaf("int64"), FieldKind::recursive("forest")}}}}};
    const auto out = reg.register_group(group);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(reg.size(), 2u);
    // sexpr and list<sexpr> are registered together automatically.
    EXPECT_NE(ShapeRegistry::global().find(shape_of<SExpr>().ctors[0].fields[1].type_id), nullptr);
}

TEST(Shape, CaseStudyTagsResolve) {
    auto& reg = ShapeRegistry::global();
    for (const TypeShape* s : {&shape_of<IntList>(), &shape_of<IntTree>(), &shape_of<SExpr>(), &shape_of<List<SExpr>>()}) {
        for (const auto& c : s->ctors) EXPECT_NO_THROW(reg.dests_spec_of(c)) << s->type_id << " " << c.name;
    }
}

// Writes a field value: leaves by copy, recursive values by splicing a
// finished copy.
template <class T>
void put(const T& v, Dest<T>&& d, Token& spare) {
    if constexpr (AlgebraicType<T>) {
        auto [here, rest] = token_dup2(std::move(spare));
        spare = std::move(rest);
        fill_comp(into_incomplete(std::move(here), v), std::move(d));
    } else {
        fill_leaf(v, std::move(d));
    }
}

// Allocates C hollow, fills field i with std::get<i>(args), reads back.
template <class C, class... Args>
typename C::type fill_and_read(const Args&... args) {
    using T = typename C::type;
    auto out = with_region([&](Token t) {
        auto [t_alloc, spare] = token_dup2(std::move(t));
        auto done = map_b(alloc<T>(std::move(t_alloc)), [&](Dest<T> d) {
            std::apply([&](auto&&... ds) { (put(args, std::move(ds), spare), ...); }, fill<C>(std::move(d)));
        });
        token_consume(std::move(spare));
        return from_incomplete_(std::move(done));
    });
    return std::move(out.value);
}

// Filling a hollow constructor and reading equals applying it bottom-up.
TEST(Shape, DualityTyped) {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t x = fixtures::pick(rng, -100, 100);
        const IntList xs = fixtures::random_list(rng, 5);
        const IntTree l = fixtures::random_tree_depth(rng, 3);
        const IntTree r = fixtures::random_tree_depth(rng, 3);
        const std::string text = fixtures::random_text(rng, 20);
        const SExpr e = fixtures::random_sexpr(rng, 3);
        const List<SExpr> es{e, e};

        EXPECT_EQ(fill_and_read<IntList::Nil>(), IntList{});
        EXPECT_EQ(fill_and_read<IntList::Cons>(x, xs), IntList::cons(x, xs));
        EXPECT_EQ(fill_and_read<IntTree::Nil>(), IntTree{});
        EXPECT_EQ(fill_and_read<IntTree::NodeC>(x, l, r), IntTree::node(x, l, r));
        EXPECT_EQ(fill_and_read<SExpr::ListC>(x, es), SExpr::list(x, es));
        EXPECT_EQ(fill_and_read<SExpr::IntegerC>(x, x * 3), SExpr::integer_atom(x, x * 3));
        EXPECT_EQ(fill_and_read<SExpr::StringC>(x, text), SExpr::string_atom(x, text));
        EXPECT_EQ(fill_and_read<SExpr::SymbolC>(x, text), SExpr::symbol_atom(x, text));
        EXPECT_EQ(fill_and_read<List<SExpr>::Cons>(e, List<SExpr>{}), List<SExpr>{e});
    }
}

// The same through runtime descriptors, for a shape registered by hand.
TEST(Shape, DualityDynamic) {
    auto& reg = ShapeRegistry::global();
    const TypeShape& expr = reg.register_shape(
        {"expr",
         {{"expr", "Lit", 0, {FieldKind::leaf("int64")}},
          {"expr", "Var", 1, {FieldKind::leaf("string")}},
          {"expr", "Add", 2, {FieldKind::recursive("expr"), FieldKind::recursive("expr")}}}});
    const CtorDescriptor* lit = &expr.ctors[0];
    const CtorDescriptor* var = &expr.ctors[1];
    const CtorDescriptor* add = &expr.ctors[2];

    const Term one{lit, {std::int64_t{1}}};
    const Term x{var, {std::string("x")}};
    const Term expected{add, {std::make_shared<const Term>(one), std::make_shared<const Term>(x)}};

    auto got = with_region([&](Token t) {
        auto done = map_b(alloc_dyn(std::move(t), expr), [&](AnyDest d) {
            auto ds = fill_dyn(std::move(d), *add);
            EXPECT_EQ(ds.size(), 2u);
            EXPECT_EQ(code_of([&] { fill_leaf_dyn(std::int64_t{3}, std::move(ds[0])); }), ErrorCode::LeafTypeMismatch);
            EXPECT_EQ(code_of([&] { fill_dyn(std::move(ds[0]), descriptor_of<IntList::Nil>()); }), ErrorCode::UnknownCtor);
            auto l = fill_dyn(std::move(ds[0]), *lit);
            fill_leaf_dyn(std::int64_t{1}, std::move(l[0]));
            fill_term(x, std::move(ds[1]));
        });
        return from_incomplete_(std::move(done));
    });
    EXPECT_EQ(got.value, expected);
    EXPECT_EQ(to_string(got.value), "(Add (Lit 1) (Var \"x\"))");
}

} // namespace
