#include "doctest.h"

#include <sstream>

#include "modlie/catalog.hpp"
#include "modlie/error.hpp"
#include "modlie/hamiltonian.hpp"
#include "modlie/lie_algebra.hpp"
#include "support.hpp"

using namespace modlie;
using testing::Rng;

namespace {

SparseVector unit(std::size_t i, Residue c = 1) { return {{std::uint32_t(i), c}}; }

/// Copy of `l` with [e_i, e_j] replaced.
LieAlgebra with_bracket(const LieAlgebra& l, std::size_t i, std::size_t j, SparseVector v) {
    LieAlgebraBuilder b(l.field(), l.labels());
    for (std::size_t a = 0; a < l.dim(); ++a)
        for (std::size_t c = a + 1; c < l.dim(); ++c) b.set_bracket(a, c, l.structure(a, c));
    b.set_bracket(i, j, std::move(v));
    return std::move(b).build();
}

}  // namespace

TEST_CASE("validate_lie on Br8, an abelian algebra and a corrupted Br8") {
    const LieAlgebra br = brown8();
    CHECK(validate_lie(br).empty());
    CHECK(validate_lie(abelian(4, 3)).empty());
    const LieAlgebra bad = with_bracket(br, 0, 1, unit(7));
    const auto v = validate_lie(bad);
    REQUIRE_FALSE(v.empty());
    for (const auto& t : v) {
        CHECK(t.i < t.j);
        CHECK(t.j < t.k);
        CHECK_FALSE(t.residual.empty());
    }
}

TEST_CASE("Br8 bracket table") {
    const LieAlgebra br = brown8();
    CHECK(br.dim() == 8);
    CHECK(br.bracket_basis(0, 1) == unit(6));
    CHECK(br.bracket_basis(4, 5) == unit(6));
    CHECK(br.bracket_basis(0, 3) == unit(5, 2));
    CHECK(br.bracket_basis(5, 6) == unit(5, 2));
    CHECK(br.bracket_basis(0, 2).empty());
    CHECK(br.bracket_basis(1, 0) == unit(6, 2));  // antisymmetry
    CHECK(br.bracket_basis(3, 3).empty());
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = i + 1; j < 8; ++j) nonzero += !br.structure(i, j).empty();
    CHECK(nonzero == 18);
    const SparseVector x{{0, 1}, {4, 2}, {7, 1}};
    CHECK(br.bracket(x, x).empty());
}

TEST_CASE("bracket and adjoint errors") {
    const LieAlgebra br = brown8();
    CHECK_THROWS_AS(br.bracket(DenseVector(3), DenseVector(8)), DimensionMismatch);
    CHECK_THROWS_AS(br.structure(2, 1), DimensionMismatch);
    CHECK_THROWS_AS(LieAlgebraBuilder(Field(3), {}), DegenerateAlgebra);
    CHECK_THROWS_AS(LieAlgebraBuilder(Field(3), {"a", "a"}), InvalidArgument);
}

TEST_CASE("adjoint matrices") {
    const LieAlgebra br = brown8();
    CHECK(br.adjoint({}).is_zero());
    CHECK(br.adjoint({}).rows() == 8);
    const FpMatrix ad1 = br.adjoint_basis(0);
    for (std::size_t k = 0; k < 8; ++k) CHECK(to_sparse(ad1.column(k)) == br.bracket_basis(0, k));

    const HamiltonianAlgebra h(1, {1, 1}, 3);
    const FpMatrix ad = h.algebra().adjoint(h.element({1, 1}));
    const auto x1sq = *h.index_of({2, 0});
    CHECK(ad.column(x1sq) == to_dense(h.element({2, 0}), h.dim()) );  // coefficient -2 = 1 mod 3
    const auto col = ad.column(x1sq);
    CHECK(col[x1sq] == 1);

    // trace of ad x vanishes on [L, L]
    Rng rng(3);
    for (const LieAlgebra* l : {&br, &h.algebra()}) {
        const Subspace d = bracket_span(*l, Subspace::full(l->dim()), Subspace::full(l->dim()));
        for (const auto& v : d.basis()) CHECK(l->adjoint(v).trace(l->field()) == 0);
    }
}

TEST_CASE("derived series, lower central series and center") {
    CHECK(series_dims(derived_series(heisenberg(3))) == std::vector<std::size_t>{3, 1, 0});
    CHECK(series_dims(lower_central_series(heisenberg(3))) == std::vector<std::size_t>{3, 1, 0});
    CHECK(series_dims(derived_series(abelian(4, 5))) == std::vector<std::size_t>{4, 0});
    CHECK(center(abelian(4, 5)).dim() == 4);
    CHECK(center(sl_psl(3, 3, false).algebra).dim() == 1);
    CHECK(center(brown8()).is_zero());
    const auto h = series_dims(derived_series(HamiltonianAlgebra(1, {1, 1}, 3).algebra()));
    CHECK(h == std::vector<std::size_t>{7, 7});
    CHECK_FALSE(is_solvable_series(h));
    CHECK_FALSE(derived_length(h).has_value());
    CHECK(derived_length({6, 3, 1, 0}) == 3u);
    CHECK(derived_length({0}) == 0u);
}

TEST_CASE("ideal_closure examples and properties") {
    const LieAlgebra sl3 = sl_psl(3, 3, false).algebra;
    const Field& f = sl3.field();
    const Subspace whole = Subspace::full(sl3.dim());
    CHECK(ideal_closure(sl3, whole) == whole);
    const Subspace z = center(sl3);
    CHECK(ideal_closure(sl3, z) == z);
    const LieAlgebra psl3 = sl_psl(3, 3, true).algebra;
    for (std::size_t i = 0; i < psl3.dim(); ++i)
        CHECK(ideal_closure(psl3, Subspace::span(psl3.field(), psl3.dim(), {unit(i)})).dim() == 7);

    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Subspace s = testing::random_subspace(rng, f, sl3.dim(), 1 + rng() % 2, 0.3);
        const Subspace t = subspace_sum(f, s, testing::random_subspace(rng, f, sl3.dim(), 1, 0.3));
        const Subspace is = ideal_closure(sl3, s), it = ideal_closure(sl3, t);
        CHECK(is_subspace_of(f, s, is));
        CHECK(is_subspace_of(f, is, it));  // monotone
        CHECK(ideal_closure(sl3, is) == is);  // idempotent
        CHECK(is_subspace_of(f, bracket_span(sl3, whole, is), is));
    }
}

TEST_CASE("simplicity probe") {
    const auto ab = simplicity_probe(abelian(2, 3));
    CHECK(ab.verdict == Simplicity::NotSimple);
    REQUIRE(ab.witness);
    CHECK(ab.witness->dim() == 1);
    CHECK(simplicity_probe(abelian(1, 3)).verdict == Simplicity::Abelian);
    CHECK(simplicity_probe(sl_psl(3, 3, true).algebra, 20).verdict == Simplicity::ProbablySimple);
    CHECK(simplicity_probe(brown8()).verdict == Simplicity::ProbablySimple);
    for (int n = 1; n <= 3; ++n)
        CHECK(simplicity_probe(HamiltonianAlgebra(1, {1, n}, 3).algebra()).verdict != Simplicity::NotSimple);
    const auto hs = simplicity_probe(heisenberg(3));
    CHECK(hs.verdict == Simplicity::NotSimple);
    REQUIRE(hs.witness);
    // the witness is a verified ideal
    const LieAlgebra h = heisenberg(3);
    CHECK(is_subspace_of(h.field(), bracket_span(h, Subspace::full(3), *hs.witness), *hs.witness));
}

TEST_CASE("dim L - dim Z(L) equals the rank of the stacked adjoint map") {
    for (const LieAlgebra& l : {brown8(), heisenberg(3), sl_psl(3, 3, false).algebra, abelian(3, 3)}) {
        std::vector<SparseVector> ads;
        for (std::size_t i = 0; i < l.dim(); ++i) ads.push_back(l.adjoint_basis(i).flatten());
        CHECK(Subspace::span(l.field(), l.dim() * l.dim(), ads).dim() == l.dim() - center(l).dim());
    }
}

TEST_CASE("derived series is invariant under basis shuffles and changes of basis") {
    Rng rng(2024);
    const std::vector<LieAlgebra> algebras = {brown8(), heisenberg(3), sl_psl(3, 3, true).algebra,
                                              HamiltonianAlgebra(1, {1, 2}, 3).algebra(),
                                              model_out_algebra({ModelKind::H3RtimesLine, 1})};
    for (const auto& l : algebras) {
        const auto dims = series_dims(derived_series(l));
        const auto lcs = series_dims(lower_central_series(l));
        for (int t = 0; t < 3; ++t) {
            const auto perm = testing::shuffled_identity(rng, l.dim());
            const LieAlgebra p = permute_basis(l, perm);
            CHECK(validate_lie(p).empty());
            CHECK(series_dims(derived_series(p)) == dims);
            const LieAlgebra c = change_basis(l, testing::random_invertible(rng, l.field(), l.dim()));
            CHECK(validate_lie(c).empty());
            CHECK(series_dims(derived_series(c)) == dims);
            CHECK(series_dims(lower_central_series(c)) == lcs);
            CHECK(center(c).dim() == center(l).dim());
        }
    }
}

TEST_CASE("text serialization round-trips exactly") {
    const std::vector<LieAlgebra> algebras = {brown8(), HamiltonianAlgebra(1, {1, 2}, 3).algebra(), heisenberg(5),
                                              sl_psl(3, 3, true).algebra};
    for (const auto& l : algebras) {
        const std::map<std::string, std::string> meta{{"family", "x"}, {"n", "1,2"}};
        const std::string text = to_text(l, meta);
        const AlgebraDocument doc = from_text(text);
        CHECK(doc.algebra == l);
        CHECK(doc.meta == meta);
        CHECK(to_text(doc.algebra, doc.meta) == text);
    }
}

TEST_CASE("text parser rejects malformed input") {
    CHECK_THROWS_AS(from_text(""), ParseError);
    CHECK_THROWS_AS(from_text("not an algebra\n"), ParseError);
    std::string text = to_text(heisenberg(3));
    const auto pos = text.find("dim 3");
    REQUIRE(pos != std::string::npos);
    std::string wrong = text;
    wrong.replace(pos, 5, "dim 9");
    CHECK_THROWS_AS(from_text(wrong), ParseError);
}

TEST_CASE("grading violations are caught at build time") {
    LieAlgebraBuilder b(Field(3), {"a", "b", "c"});
    b.add_to_bracket(0, 1, 2, 1);
    b.set_grading({{1}, {1}, {1}});
    CHECK_THROWS_AS(std::move(b).build(), ValidationError);
}
