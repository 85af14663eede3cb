#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "modlie/catalog.hpp"
#include "modlie/derout.hpp"
#include "modlie/divided_power.hpp"
#include "modlie/error.hpp"
#include "modlie/hamiltonian.hpp"
#include "support.hpp"

using namespace modlie;
using testing::Rng;

namespace {

std::vector<std::size_t> out_series(const LieAlgebra& l, unsigned threads = 0) {
    DerivationOptions o;
    o.threads = threads;
    const DerivationAlgebra der = derivation_algebra(l, o);
    const OutAlgebra out(der);
    if (out.dim() == 0) return {0};
    return series_dims(derived_series(*out.lie()));
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("modlie-test-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("sl and psl dimensions") {
    CHECK(sl_psl(3, 3, false).algebra.dim() == 8);
    CHECK(sl_psl(3, 3, true).algebra.dim() == 7);
    CHECK(sl_psl(6, 3, true).algebra.dim() == 34);
    CHECK(sl_psl(2, 5, false).algebra.dim() == 3);
    const SlPsl w = sl_psl(4, 3, true);
    CHECK(w.algebra.dim() == 15);
    CHECK(w.warning.has_value());
    CHECK_FALSE(sl_psl(3, 3, true).warning.has_value());
    CHECK_THROWS_AS(sl_psl(1, 3, false), InvalidArgument);
}

TEST_CASE("quotient by the center") {
    const LieAlgebra q = quotient_by_center(heisenberg(3));
    CHECK(q.dim() == 2);
    CHECK(series_dims(derived_series(q)) == std::vector<std::size_t>{2, 0});
    CHECK_THROWS_AS(quotient_by_center(abelian(3, 3)), DegenerateAlgebra);
    const LieAlgebra psl = quotient_by_center(sl_psl(3, 3, false).algebra);
    CHECK(psl.dim() == 7);
    CHECK(center(psl).is_zero());
    CHECK(validate_lie(psl).empty());
}

TEST_CASE("catalog constructors all satisfy Jacobi") {
    for (const LieAlgebra& l :
         {brown8(), heisenberg(3), heisenberg(5), abelian(3, 3), sl_psl(3, 3, false).algebra, sl_psl(3, 3, true).algebra,
          sl_psl(6, 3, true).algebra, sl_psl(2, 5, false).algebra, model_out_algebra({ModelKind::Sl2SemiV2, 2}),
          model_out_algebra({ModelKind::H3RtimesLine, 2}),
          model_out_algebra({ModelKind::AlmostAbelian, 1, 5, ModelAction::Identity}),
          model_out_algebra({ModelKind::AlmostAbelian, 0, 3, ModelAction::FlipLast})})
        CHECK(validate_lie(l).empty());
}

TEST_CASE("model algebras") {
    CHECK(series_dims(derived_series(model_out_algebra({ModelKind::Sl2SemiV2, 0}))) ==
          std::vector<std::size_t>{5, 5});
    CHECK(series_dims(derived_series(model_out_algebra({ModelKind::H3RtimesLine, 0}))) ==
          std::vector<std::size_t>{4, 3, 1, 0});
    CHECK(model_out_algebra({ModelKind::Sl2SemiV2, 3}).dim() == 8);
    const auto aa = series_dims(derived_series(model_out_algebra({ModelKind::AlmostAbelian, 0, 5, ModelAction::Identity})));
    CHECK(aa.size() == 3);
    CHECK(aa.back() == 0);
    CHECK(derived_length(aa) == 2u);
    const LieAlgebra m = model_out_algebra({ModelKind::Sl2SemiV2, 0});
    // [e1,e5] = e4 and [e2,e4] = e5
    CHECK(m.bracket_basis(0, 4) == SparseVector{{3, 1}});
    CHECK(m.bracket_basis(1, 3) == SparseVector{{4, 1}});
    CHECK(parse_model_kind("h3_rtimes_line") == ModelKind::H3RtimesLine);
    CHECK_THROWS_AS(parse_model_kind("nope"), InvalidArgument);
    CHECK_THROWS_AS(parse_model_action("diag"), InvalidArgument);
}

TEST_CASE("invariant profiles") {
    const InvariantProfile h = invariant_profile(HamiltonianAlgebra(1, {1, 1}, 3).algebra());
    const InvariantProfile p = invariant_profile(sl_psl(3, 3, true).algebra);
    CHECK_FALSE(compare(h, h).has_value());
    CHECK(h.dim == 7);
    CHECK(h.der == 14);
    CHECK(h.out == 7);
    CHECK_FALSE(compare(h, p).has_value());
    const auto diff = compare(invariant_profile(abelian(3, 3)), invariant_profile(heisenberg(3)));
    REQUIRE(diff);
    CHECK(diff->find("derived") != std::string::npos);
    const InvariantProfile br = invariant_profile(brown8());
    CHECK(br.center == 0);
    CHECK(br.out == 2);
}

TEST_CASE("is_derivation examples") {
    const LieAlgebra br = brown8();
    CHECK(is_derivation(br, FpMatrix(8, 8)));
    Rng rng(8);
    for (int t = 0; t < 10; ++t) CHECK(is_derivation(br, br.adjoint(testing::random_sparse(rng, br.field(), 8, 0.5))));
    const HamiltonianAlgebra g(1, {1, 2}, 3);
    CHECK(is_derivation(g.algebra(), sl2_triple(g).e));
    CHECK_FALSE(is_derivation(br, FpMatrix::identity(8)));
    const auto defect = leibniz_defect(br, FpMatrix::identity(8));
    REQUIRE(defect);
    CHECK_FALSE(defect->residual.empty());
    CHECK_THROWS_AS(is_derivation(br, FpMatrix(7, 7)), DimensionMismatch);
}

TEST_CASE("derivation and outer algebra dimensions") {
    struct Case {
        LieAlgebra l;
        std::size_t der, inn, out;
    };
    const std::vector<Case> cases = {
        {witt_algebra(1, {1}, 3), 3, 3, 0},
        {sl_psl(3, 3, true).algebra, 14, 7, 7},
        {HamiltonianAlgebra(1, {1, 2}, 3).algebra(), 31, 25, 6},
        {HamiltonianAlgebra(1, {1, 1}, 3).algebra(), 14, 7, 7},
        {abelian(3, 3), 9, 0, 9},
        {brown8(), 10, 8, 2},
        {sl_psl(2, 5, false).algebra, 3, 3, 0},
    };
    for (const auto& c : cases) {
        const DerivationAlgebra der = derivation_algebra(c.l);
        CHECK(der.dim() == c.der);
        CHECK(der.inn().dim() == c.inn);
        CHECK(der.inn().dim() == c.l.dim() - center(c.l).dim());
        CHECK(OutAlgebra(der).dim() == c.out);
    }
}

TEST_CASE("Der basis maps are derivations and Inn is an ideal") {
    for (const LieAlgebra& l : {brown8(), sl_psl(3, 3, true).algebra, HamiltonianAlgebra(1, {1, 2}, 3).algebra(),
                                heisenberg(3)}) {
        const DerivationAlgebra der = derivation_algebra(l);
        const Field& f = l.field();
        const LieAlgebra as_lie = der.as_lie();
        CHECK(validate_lie(as_lie).empty());
        for (std::size_t k = 0; k < der.dim(); ++k) {
            const FpMatrix d = der.map(k);
            REQUIRE(is_derivation(l, d));
            for (std::size_t i = 0; i < l.dim(); ++i) {
                // [D, ad x] = ad(D x)
                const SparseVector x{{std::uint32_t(i), 1}};
                const FpMatrix lhs = commutator(f, d, l.adjoint_basis(i));
                CHECK(lhs == l.adjoint(to_sparse(d.apply(f, to_dense(x, l.dim())))));
                const auto coords = der.coordinates(lhs);
                REQUIRE(coords);
                CHECK(der.inn().contains(f, to_sparse(*coords)));
            }
        }
    }
}

TEST_CASE("Out brackets are well defined modulo Inn") {
    const HamiltonianAlgebra g(1, {1, 2}, 3);
    const DerivationAlgebra der = derivation_algebra(g.algebra());
    const OutAlgebra out(der);
    const Field& f = g.field();
    REQUIRE(out.lie());
    for (std::size_t a = 0; a < out.dim(); ++a)
        for (std::size_t b = 0; b < out.dim(); ++b) {
            // perturb representatives by inner derivations and compare projections
            const FpMatrix x = add_scaled(f, out.representative(a), 1, g.algebra().adjoint_basis(a % g.dim()));
            const FpMatrix y = add_scaled(f, out.representative(b), 2, g.algebra().adjoint_basis((b + 3) % g.dim()));
            const DenseVector proj = out.project(commutator(f, x, y));
            CHECK(to_sparse(proj) == out.lie()->bracket_basis(a, b));
        }
    for (std::size_t i = 0; i < g.dim(); ++i) CHECK(out.is_inner(g.algebra().adjoint_basis(i)));
    CHECK_FALSE(out.is_inner(sl2_triple(g).e));
}

TEST_CASE("Out dimensions for the Hamiltonian counterexample families") {
    CHECK(OutAlgebra(derivation_algebra(HamiltonianAlgebra(1, {1, 2}, 3).algebra())).dim() == 6);
    const DerivationAlgebra d3 = derivation_algebra(HamiltonianAlgebra(1, {1, 3}, 3).algebra());
    CHECK(d3.dim() == 86);
    CHECK(OutAlgebra(d3).dim() == 7);
    CHECK(OutAlgebra(derivation_algebra(HamiltonianAlgebra(1, {2, 2}, 3).algebra())).dim() == 6);
    CHECK(OutAlgebra(derivation_algebra(HamiltonianAlgebra(2, {1, 1, 1, 1}, 3).algebra())).dim() == 6);
    const DerivationAlgebra d5 = derivation_algebra(HamiltonianAlgebra(1, {1, 1}, 5).algebra());
    CHECK(d5.dim() == 27);
    CHECK(OutAlgebra(d5).dim() == 4);
}

TEST_CASE("Out series is invariant under seeded basis shuffles and thread counts") {
    Rng rng(31337);
    for (const LieAlgebra& l : {HamiltonianAlgebra(1, {1, 2}, 3).algebra(), brown8(), sl_psl(3, 3, true).algebra}) {
        const auto base = out_series(l, 1);
        CHECK(out_series(l, 4) == base);
        for (int t = 0; t < 2; ++t) CHECK(out_series(permute_basis(l, testing::shuffled_identity(rng, l.dim()))) == base);
    }
}

TEST_CASE("Der computation is independent of the thread count") {
    const LieAlgebra l = HamiltonianAlgebra(1, {1, 2}, 3).algebra();
    DerivationOptions one, many;
    one.threads = 1;
    many.threads = 6;
    const DerivationAlgebra a = derivation_algebra(l, one), b = derivation_algebra(l, many);
    CHECK(a.space() == b.space());
    CHECK(a.inn() == b.inn());
    CHECK(a.as_lie() == b.as_lie());
    CHECK(a.stats.threads == 1);
}

TEST_CASE("Der cache hits are bit-identical to recomputation") {
    TempDir dir;
    const LieAlgebra l = HamiltonianAlgebra(1, {1, 2}, 3).algebra();
    DerivationOptions o;
    o.cache_dir = dir.path;
    o.cache_key = "H2;n=1,2;p=3";
    const DerivationAlgebra first = derivation_algebra(l, o);
    CHECK_FALSE(first.stats.cache_hit);
    CHECK(std::filesystem::exists(der_cache_file(dir.path, o.cache_key)));
    const DerivationAlgebra second = derivation_algebra(l, o);
    CHECK(second.stats.cache_hit);
    CHECK(second.space() == first.space());
    CHECK(second.space() == derivation_algebra(l).space());

    // a different algebra under the same key is not served from the cache
    const DerivationAlgebra other = derivation_algebra(brown8(), o);
    CHECK_FALSE(other.stats.cache_hit);
    CHECK(other.dim() == 10);

    o.cache_key = "bad\nkey";
    CHECK_THROWS_AS(derivation_algebra(l, o), InvalidArgument);
}

TEST_CASE("corrupted cache files are ignored") {
    TempDir dir;
    const LieAlgebra l = heisenberg(3);
    DerivationOptions o;
    o.cache_dir = dir.path;
    o.cache_key = "h3";
    const DerivationAlgebra first = derivation_algebra(l, o);
    {
        std::ofstream out(der_cache_file(dir.path, o.cache_key), std::ios::binary | std::ios::trunc);
        out << "garbage";
    }
    const DerivationAlgebra again = derivation_algebra(l, o);
    CHECK_FALSE(again.stats.cache_hit);
    CHECK(again.space() == first.space());
}

TEST_CASE("resource guard interrupts the Der solver") {
    ResourceLimits lim;
    lim.seconds = 1e-9;
    ResourceGuard guard(lim);
    DerivationOptions o;
    o.guard = &guard;
    CHECK_THROWS_AS(derivation_algebra(HamiltonianAlgebra(1, {2, 2}, 3).algebra(), o), ResourceLimitExceeded);
}
