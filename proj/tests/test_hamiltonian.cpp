#include "doctest.h"

#include "modlie/derout.hpp"
#include "modlie/error.hpp"
#include "modlie/hamiltonian.hpp"

using namespace modlie;

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/// Image of the basis element D_H(x^a) under m, as a sparse vector.
SparseVector image(const HamiltonianAlgebra& g, const FpMatrix& m, const std::vector<int>& a) {
    return to_sparse(m.column(*g.index_of(a)));
}

SparseVector scaled(const HamiltonianAlgebra& g, const std::vector<int>& a, Residue c) {
    SparseVector v = g.element(a);
    for (auto& t : v) t.val = g.field().mul(t.val, c);
    return v;
}

FpMatrix ad_of(const HamiltonianAlgebra& g, const std::vector<int>& a) { return g.algebra().adjoint(g.element(a)); }

FpMatrix br(const Field& f, const FpMatrix& x, const FpMatrix& y) { return commutator(f, x, y); }

}  // namespace

TEST_CASE("the Hamiltonian operator on monomials") {
    const DividedPowers o(3, {1, 1});
    const std::size_t x1 = o.position(o.index({1, 0})), x2 = o.position(o.index({0, 1}));
    WittElement expect;
    add_term(o.field(), expect, x2, 1, 1);
    add_term(o.field(), expect, x1, 0, 2);
    CHECK(d_h(o, o.index({1, 1})) == expect);
    CHECK(d_h(o, o.index({0, 0})).empty());
    WittElement x1d2;
    add_term(o.field(), x1d2, x1, 1, 1);
    CHECK(d_h(o, o.index({2, 0})) == x1d2);
}

TEST_CASE("Hamiltonian dimensions are p^|n| - 2") {
    CHECK(HamiltonianAlgebra(1, {1, 1}, 3).dim() == 7);
    CHECK(HamiltonianAlgebra(1, {1, 2}, 3).dim() == 25);
    CHECK(HamiltonianAlgebra(1, {2, 2}, 3).dim() == 79);
    CHECK(HamiltonianAlgebra(1, {2, 3}, 3).dim() == 241);
    CHECK(HamiltonianAlgebra(2, {1, 1, 1, 1}, 3).dim() == 79);
    CHECK(HamiltonianAlgebra(1, {1, 1}, 5).dim() == 23);
}

TEST_CASE("basis order is ascending x2 exponent, then x1 exponent") {
    const HamiltonianAlgebra g(1, {1, 2}, 3);
    CHECK(g.exponents(0) == std::vector<int>{1, 0});
    CHECK(g.exponents(1) == std::vector<int>{2, 0});
    CHECK(g.exponents(2) == std::vector<int>{0, 1});
    CHECK(g.exponents(3) == std::vector<int>{1, 1});
    CHECK(g.algebra().labels()[3] == "D_H(x1 x2)");
    CHECK_FALSE(g.index_of({0, 0}));
    CHECK_FALSE(g.index_of({2, 8}));
    CHECK_FALSE(g.index_of({3, 0}));
}

TEST_CASE("sample Hamiltonian bracket") {
    const HamiltonianAlgebra g(1, {1, 1}, 3);
    CHECK(g.algebra().bracket(g.element({1, 1}), g.element({2, 0})) == g.element({2, 0}));
    // ad D_H(x1 x2) scales D_H(x1^2) by -2
    CHECK(image(g, ad_of(g, {1, 1}), {2, 0}) == g.element({2, 0}));
}

TEST_CASE("closed-form coefficients") {
    CHECK(f_coeff(1, 0, 0, 1, 3) == 1);
    CHECK(f_coeff(1, 1, 2, 0, 3) == 1);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 9; ++b) CHECK(f_coeff(a, b, a, b, 3) == 0);
    // antisymmetry
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) CHECK(Field(3).add(f_coeff(a, b, c, d, 3), f_coeff(c, d, a, b, 3)) == 0);
}

TEST_CASE("vector-field oracle and closed form produce identical tables") {
    for (const auto& n : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {2, 2}, {1, 3}}) {
        const HamiltonianAlgebra oracle(1, n, 3, HamiltonianAlgebra::Method::Oracle);
        const HamiltonianAlgebra closed(1, n, 3, HamiltonianAlgebra::Method::ClosedForm);
        CHECK(oracle.algebra() == closed.algebra());
    }
    CHECK(HamiltonianAlgebra(1, {1, 1}, 5).algebra() ==
          HamiltonianAlgebra(1, {1, 1}, 5, HamiltonianAlgebra::Method::ClosedForm).algebra());
}

TEST_CASE("Hamiltonian algebras satisfy Jacobi") {
    for (const auto& [r, n] : std::vector<std::pair<std::size_t, std::vector<int>>>{
             {1, {1, 1}}, {1, {1, 2}}, {1, {2, 2}}, {2, {1, 1, 1, 1}}})
        CHECK(validate_lie(HamiltonianAlgebra(r, n, 3).algebra()).empty());
}

TEST_CASE("constructor errors") {
    CHECK_THROWS_AS(HamiltonianAlgebra(2, {1, 1, 1, 1}, 3, HamiltonianAlgebra::Method::ClosedForm), InvalidArgument);
    CHECK_THROWS_AS(HamiltonianAlgebra(0, {}, 3), InvalidArgument);
    CHECK_THROWS_AS(HamiltonianAlgebra(1, {1, 1, 1}, 3), InvalidArgument);
    CHECK_THROWS_AS(translation_pair(HamiltonianAlgebra(1, {1, 1}, 3)), InvalidArgument);
    CHECK_THROWS_AS(sl2_triple(HamiltonianAlgebra(1, {1, 1}, 5)), InvalidArgument);
}

TEST_CASE("sl2 triple values and relations") {
    for (int n = 1; n <= 3; ++n) {
        const HamiltonianAlgebra g(1, {1, n}, 3);
        const Field& f = g.field();
        const Sl2Triple t = sl2_triple(g);
        CHECK(image(g, t.e, {1, 1}).empty());
        CHECK(image(g, t.h, {0, 1}) == g.element({0, 1}));
        if (n >= 2) CHECK(image(g, t.e, {2, 1}) == g.element({0, 2}));
        for (const FpMatrix* m : {&t.e, &t.f, &t.h}) CHECK(is_derivation(g.algebra(), *m));
        CHECK(t.f == g.restricted_adjoint({3, 0}));
        CHECK(br(f, t.e, t.f) == t.h);
        CHECK(br(f, t.e, t.h) == t.e);
        CHECK(add_scaled(f, br(f, t.f, t.h), 1, t.f).is_zero());
    }
}

TEST_CASE("translation pair values, relations and derivation property") {
    for (int n = 2; n <= 3; ++n) {
        const HamiltonianAlgebra g(1, {1, n}, 3);
        const Field& f = g.field();
        const int top = ipow(3, n);
        const TranslationPair vw = translation_pair(g);
        const Sl2Triple t = sl2_triple(g);
        CHECK(is_derivation(g.algebra(), vw.v));
        CHECK(is_derivation(g.algebra(), vw.w));
        CHECK(vw.v == g.restricted_adjoint({0, top}));
        CHECK(vw.w == g.restricted_adjoint({2, top - 1}));
        // restriction convention: V(D_H(x1^a)) = -D_H(x1^(a-1) x2^(3^n-1))
        CHECK(image(g, vw.v, {2, 0}) == scaled(g, {1, top - 1}, 2));
        CHECK(image(g, vw.v, {1, 1}).empty());
        CHECK(image(g, vw.w, {1, 0}) == scaled(g, {2, top - 2}, 2));
        CHECK(br(f, t.e, vw.w) == vw.v);
        CHECK(br(f, t.f, vw.v) == vw.w);
        CHECK(br(f, t.h, vw.v) == vw.v);
        CHECK(br(f, t.h, vw.w) == add_scaled(f, vw.w, 1, vw.w));
        for (int i = 1; i < n; ++i) {
            const FpMatrix d = partial_power_map(g, 1, i);
            CHECK(is_derivation(g.algebra(), d));
            CHECK(br(f, d, vw.v) == ad_of(g, {0, top - ipow(3, i)}));
            CHECK(br(f, d, vw.w) == ad_of(g, {2, top - ipow(3, i) - 1}));
        }
    }
}

TEST_CASE("general outer family values") {
    const HamiltonianAlgebra g(1, {2, 2}, 3);
    const OutFamily fam = general_out_family(g);
    REQUIRE(fam.a.size() == 2);
    CHECK(image(g, fam.a[0].map, {0, 1}) == g.element({8, 0}));
    CHECK(image(g, fam.b.map, {1, 0}) == scaled(g, {8, 7}, 2));
    for (const auto& a : std::vector<std::vector<int>>{{1, 1}, {2, 0}, {0, 2}}) CHECK(image(g, fam.c.map, a).empty());
    CHECK(image(g, fam.c.map, {1, 0}) == scaled(g, {1, 0}, 2));
    CHECK(fam.d.size() == 2);
    CHECK(fam.all().size() == 2 + 2 + 2);
    CHECK_THROWS_AS(general_out_family(HamiltonianAlgebra(1, {1, 2}, 3)), InvalidArgument);
}

TEST_CASE("every named map is a derivation") {
    for (const auto& [r, n] : std::vector<std::pair<std::size_t, std::vector<int>>>{
             {1, {2, 2}}, {1, {2, 3}}, {2, {1, 1, 1, 1}}, {2, {1, 2, 1, 1}}}) {
        const HamiltonianAlgebra g(r, n, 3);
        for (const auto& m : general_out_family(g).all())
            CHECK_MESSAGE(is_derivation(g.algebra(), m.map), m.name << " on n of size " << n.size());
    }
}

TEST_CASE("A and B are restrictions of inner derivations of a larger algebra") {
    for (const auto& [r, n] : std::vector<std::pair<std::size_t, std::vector<int>>>{{1, {2, 2}}, {2, {1, 1, 1, 1}}}) {
        const HamiltonianAlgebra g(r, n, 3);
        const OutFamily fam = general_out_family(g);
        const auto& tau = g.tau();
        for (std::size_t i = 0; i < 2 * r; ++i) {
            std::vector<int> c(2 * r, 0);
            c[i] = tau[i] + 1;
            CHECK_MESSAGE(fam.a[i].map == g.restricted_adjoint(c), fam.a[i].name);
        }
        CHECK(fam.b.map == g.restricted_adjoint(tau));
    }
}
