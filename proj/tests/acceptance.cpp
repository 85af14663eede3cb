// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "modlie/catalog.hpp"
#include "modlie/derout.hpp"
#include "modlie/divided_power.hpp"
#include "modlie/field.hpp"
#include "modlie/hamiltonian.hpp"
#include "modlie/report.hpp"
#include "modlie/resources.hpp"
#include "support.hpp"

using namespace modlie;
using Dims = std::vector<std::size_t>;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << what;
        }
    }
    void note(const std::string& s) {
        if (pass) detail << (detail.tellp() > 0 ? "; " : "") << s;
    }
};

std::string fmt(const Dims& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

OutReport ham_report(const HamiltonianAlgebra& g, unsigned threads = 0) {
    ReportOptions o;
    o.hamiltonian = &g;
    o.family = "H2";
    o.der.threads = threads;
    return zassenhaus_report(g.algebra(), o);
}

FpMatrix br(const Field& f, const FpMatrix& a, const FpMatrix& b) { return commutator(f, a, b); }

/// span(maps) meets Inn only in 0: the projections to Out are independent.
bool independent_mod_inn(const OutAlgebra& out, const std::vector<FpMatrix>& maps, const Field& f) {
    std::vector<SparseVector> rows;
    for (const auto& m : maps) rows.push_back(to_sparse(out.project(m)));
    return Subspace::span(f, out.dim(), rows).dim() == maps.size();
}

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Gap series rows up to dimension 79, each under 60 s and 2 GB.
void ac1(Outcome& o) {
    struct Row {
        std::size_t r;
        std::vector<int> n;
        std::size_t dim, der;
        Dims series;
    };
    const std::vector<Row> rows = {{1, {1, 1}, 7, 14, {7, 7}},
                                   {1, {1, 2}, 25, 31, {6, 5, 5}},
                                   {1, {1, 3}, 79, 86, {7, 5, 5}},
                                   {1, {2, 2}, 79, 85, {6, 3, 1, 0}},
                                   {2, {1, 1, 1, 1}, 79, 85, {6, 4, 0}}};
    for (const auto& row : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        const HamiltonianAlgebra g(row.r, row.n, 3);
        const OutReport rep = ham_report(g);
        const double secs = seconds_since(t0);
        const std::uint64_t peak = peak_rss_bytes();
        const std::string name = "H(" + std::to_string(2 * row.r) + ";" + fmt(Dims(row.n.begin(), row.n.end())) + ")";
        o.require(rep.complete, name + " incomplete");
        o.require(rep.dim_g == row.dim && rep.dim_der == row.der && rep.out_derived_series == row.series,
                  name + " gave (" + std::to_string(rep.dim_g) + "," + std::to_string(rep.dim_der) + "," +
                      fmt(rep.out_derived_series) + ")");
        o.require(secs < 60.0, name + " took " + std::to_string(secs) + " s");
        o.require(peak < (std::uint64_t(2) << 30), name + " peak RSS " + std::to_string(peak));
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %.2fs", name.c_str(), secs);
        o.note(buf);
    }
}

// The 241-dimensional case within 30 minutes and the 8 GB default ceiling.
void ac2(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const HamiltonianAlgebra g(1, {2, 3}, 3);
    const OutReport rep = ham_report(g);
    const double secs = seconds_since(t0);
    const std::uint64_t peak = peak_rss_bytes();
    o.require(rep.complete, "incomplete: " + rep.incomplete_reason);
    o.require(rep.dim_g == 241, "dim g " + std::to_string(rep.dim_g));
    o.require(rep.dim_der == 248, "dim Der " + std::to_string(rep.dim_der));
    o.require(rep.out_derived_series == Dims{7, 3, 1, 0}, "Out series " + fmt(rep.out_derived_series));
    o.require(secs < 1800.0, "took " + std::to_string(secs) + " s");
    o.require(peak < (std::uint64_t(8) << 30), "peak RSS " + std::to_string(peak));
    char buf[96];
    std::snprintf(buf, sizeof buf, "dim Der 248, Out (7,3,1,0), %.1fs, peak %.0f MiB", secs, peak / 1048576.0);
    o.note(buf);
}

// E, F, H for n = 1, 2, 3.
void ac3(Outcome& o) {
    for (int n = 1; n <= 3; ++n) {
        const std::string tag = "n=" + std::to_string(n) + ": ";
        const HamiltonianAlgebra g(1, {1, n}, 3);
        const Field& f = g.field();
        const Sl2Triple t = sl2_triple(g);
        o.require(is_derivation(g.algebra(), t.e) && is_derivation(g.algebra(), t.f) &&
                      is_derivation(g.algebra(), t.h),
                  tag + "Leibniz fails");
        o.require(br(f, t.e, t.f) == t.h, tag + "[E,F] != H");
        o.require(br(f, t.e, t.h) == t.e, tag + "[E,H] != E");
        o.require(add_scaled(f, br(f, t.f, t.h), 1, t.f).is_zero(), tag + "[F,H] != -F");
        const DerivationAlgebra der = derivation_algebra(g.algebra());
        const OutAlgebra out(der);
        o.require(independent_mod_inn(out, {t.e, t.f, t.h}, f), tag + "span(E,F,H) meets Inn");
        const Dims s = series_dims(derived_series(*out.lie()));
        o.require(!is_solvable_series(s), tag + "Out reported solvable");
    }
    o.note("n=1,2,3 sl2 copies in Out, Out not solvable");
}

// V, W and the d2 powers for n = 2, 3.
void ac4(Outcome& o) {
    for (int n = 2; n <= 3; ++n) {
        const std::string tag = "n=" + std::to_string(n) + ": ";
        const HamiltonianAlgebra g(1, {1, n}, 3);
        const Field& f = g.field();
        const DerivationAlgebra der = derivation_algebra(g.algebra());
        const OutAlgebra out(der);
        o.require(der.dim() == std::size_t(ipow(3, n + 1) + n + 2), tag + "dim Der " + std::to_string(der.dim()));
        o.require(out.dim() == std::size_t(n + 4), tag + "dim Out " + std::to_string(out.dim()));

        const Sl2Triple t = sl2_triple(g);
        const TranslationPair vw = translation_pair(g);
        std::vector<NamedMap> gens = {{"E", t.e}, {"F", t.f}, {"H", t.h}, {"V", vw.v}, {"W", vw.w}};
        const int top = ipow(3, n);
        for (int i = 1; i < n; ++i) {
            const FpMatrix d = partial_power_map(g, 1, i);
            o.require(is_derivation(g.algebra(), d), tag + "d2 power not a derivation");
            o.require(br(f, d, vw.v) == g.algebra().adjoint(g.element({0, top - ipow(3, i)})), tag + "[d,V] mismatch");
            o.require(br(f, d, vw.w) == g.algebra().adjoint(g.element({2, top - ipow(3, i) - 1})),
                      tag + "[d,W] mismatch");
            for (const auto& x : gens) o.require(out.is_inner(br(f, d, x.map)), tag + "d2 power not central in Out");
            gens.push_back({"d2^" + std::to_string(ipow(3, i)), d});
        }
        const LieAlgebra in_gens = out_in_generators(out, gens);
        o.require(in_gens.same_structure(model_out_algebra({ModelKind::Sl2SemiV2, std::size_t(n - 1)})),
                  tag + "Out does not match sl2 semidirect V(2) model");
    }
    o.note("n=2,3 Out = sl2 x| V(2) + abelian, d2 powers central");
}

// The A, B, C, D family for (1,(2,2)) and (2,(1,1,1,1)).
void ac5(Outcome& o) {
    for (const auto& [r, n] : std::vector<std::pair<std::size_t, std::vector<int>>>{{1, {2, 2}}, {2, {1, 1, 1, 1}}}) {
        const std::string tag = "r=" + std::to_string(r) + ": ";
        const HamiltonianAlgebra g(r, n, 3);
        const Field& f = g.field();
        const DerivationAlgebra der = derivation_algebra(g.algebra());
        const OutAlgebra out(der);
        int total = 0;
        for (int x : n) total += x;
        o.require(out.dim() == std::size_t(total + 2), tag + "dim Out " + std::to_string(out.dim()));
        const OutFamily fam = general_out_family(g);
        for (const auto& m : fam.all()) o.require(is_derivation(g.algebra(), m.map), tag + m.name + " not a derivation");
        for (const auto& a : fam.a)
            o.require(add_scaled(f, br(f, a.map, fam.c.map), 1, a.map).is_zero(), tag + "[" + a.name + ",C] != -A");
        o.require(br(f, fam.b.map, fam.c.map) == add_scaled(f, FpMatrix(g.dim(), g.dim()), Residue((2 * r - 1) % 3),
                                                              fam.b.map),
                  tag + "[B,C] != (2r-1)B");
        if (r == 1) o.require(br(f, fam.a[0].map, fam.a[1].map) == fam.b.map, tag + "[A1,A2] != B");
        for (const auto& d : fam.d) {
            for (const auto& a : fam.a) o.require(out.is_inner(br(f, a.map, d.map)), tag + "[A,D] not inner");
            o.require(out.is_inner(br(f, fam.b.map, d.map)), tag + "[B,D] not inner");
        }
        const Dims s = series_dims(derived_series(*out.lie()));
        const auto len = derived_length(s);
        const std::size_t want = r == 1 ? 3 : 2;
        o.require(len && *len == want, tag + "Out series " + fmt(s));
    }
    o.note("dim Out = |n|+2, derived lengths 3 and 2");
}

// Classical and Witt cross-checks, plus H(2;(1,1)) at p = 5.
void ac6(Outcome& o) {
    const OutReport psl3 = zassenhaus_report(sl_psl(3, 3, true).algebra);
    o.require(psl3.dim_der == 14 && psl3.dim_out == 7, "psl3 dims");
    o.require(psl3.out_derived_series == Dims{7, 7}, "psl3 Out series " + fmt(psl3.out_derived_series));
    o.require(psl3.simplicity == Simplicity::ProbablySimple, "psl3 Out not probably_simple");

    const OutReport psl6 = zassenhaus_report(sl_psl(6, 3, true).algebra);
    o.require(psl6.dim_out == 1 && psl6.simplicity == Simplicity::Abelian, "psl6 Out not 1-dim abelian");

    for (const auto& [m, n] : std::vector<std::pair<std::size_t, std::vector<int>>>{{1, {1}}, {2, {1, 1}}}) {
        const LieAlgebra w = witt_algebra(m, n, 3);
        const DerivationAlgebra der = derivation_algebra(w);
        const OutAlgebra out(der);
        std::size_t total = 0;
        for (int x : n) total += std::size_t(x);
        const std::size_t pn = std::size_t(ipow(3, int(total)));
        o.require(w.dim() == m * pn, "W dim");
        o.require(der.dim() == m * (pn - 1) + total, "W Der " + std::to_string(der.dim()));
        o.require(out.dim() == total - m, "W Out " + std::to_string(out.dim()));
    }

    const OutReport h5 = zassenhaus_report(HamiltonianAlgebra(1, {1, 1}, 5).algebra());
    o.require(h5.dim_der == 27 && h5.dim_out == 4 && h5.solvable, "H(2;(1,1)) p=5");
    o.note("psl3 14/7 simple, psl6 abelian, W formulas, p=5 Der 27 Out 4 solvable");
}

void ac7(Outcome& o) {
    const LieAlgebra br8 = brown8();
    o.require(validate_lie(br8).empty(), "Jacobi fails");
    o.require(center(br8).is_zero(), "center nonzero");
    o.require(simplicity_probe(br8).verdict == Simplicity::ProbablySimple, "probe not probably_simple");
    const OutReport rep = zassenhaus_report(br8);
    o.require(rep.dim_out == 2, "dim Out " + std::to_string(rep.dim_out));
    o.require(rep.out_derived_series == Dims{2, 0}, "Out not abelian " + fmt(rep.out_derived_series));
    o.note("Jacobi ok, center 0, probably simple, Out abelian of dim 2");
}

void ac8(Outcome& o) {
    for (const auto& n : std::vector<std::vector<int>>{{1, 2}, {2, 2}}) {
        const HamiltonianAlgebra oracle(1, n, 3, HamiltonianAlgebra::Method::Oracle);
        const HamiltonianAlgebra closed(1, n, 3, HamiltonianAlgebra::Method::ClosedForm);
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < oracle.dim(); ++i)
            for (std::size_t j = i + 1; j < oracle.dim(); ++j)
                mismatches += oracle.oracle_bracket(i, j) != closed.algebra().structure(i, j);
        o.require(mismatches == 0, std::to_string(mismatches) + " mismatched pairs");
    }
    o.note("all pairs of H(2;(1,2)) and H(2;(2,2)) agree");
}

void ac9(Outcome& o) {
    // Lucas against a Pascal triangle
    const std::size_t top = 729;
    std::vector<std::vector<unsigned char>> pascal(top + 1, std::vector<unsigned char>(top + 1, 0));
    std::size_t lucas_bad = 0;
    for (std::size_t a = 0; a <= top; ++a) {
        pascal[a][0] = 1;
        for (std::size_t b = 1; b <= a; ++b) pascal[a][b] = (pascal[a - 1][b - 1] + pascal[a - 1][b]) % 3;
    }
    for (std::size_t a = 0; a <= top; ++a)
        for (std::size_t b = 0; b <= top; ++b) lucas_bad += lucas_binom(a, b, 3) != pascal[a][b];
    o.require(lucas_bad == 0, "Lucas mismatches " + std::to_string(lucas_bad));

    // rank-nullity
    testing::Rng rng(20240501);
    std::size_t rn_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Field f(trial % 2 ? 3 : 5);
        const std::size_t rows = 1 + rng() % 24, cols = 1 + rng() % 24;
        const FpMatrix m = testing::random_matrix(rng, f, rows, cols, 0.05 + (rng() % 50) / 100.0);
        rn_bad += rref(f, m).rank + nullspace(f, m).dim() != cols;
    }
    o.require(rn_bad == 0, "rank-nullity failures " + std::to_string(rn_bad));

    // derived series under basis shuffles, every catalog algebra
    const std::vector<std::pair<std::string, LieAlgebra>> catalog = {
        {"br8", brown8()},
        {"h3", heisenberg(3)},
        {"abelian3", abelian(3, 3)},
        {"sl3", sl_psl(3, 3, false).algebra},
        {"psl3", sl_psl(3, 3, true).algebra},
        {"psl6", sl_psl(6, 3, true).algebra},
        {"sl2 p5", sl_psl(2, 5, false).algebra},
        {"sl2_semi_v2", model_out_algebra({ModelKind::Sl2SemiV2, 1})},
        {"h3_rtimes_line", model_out_algebra({ModelKind::H3RtimesLine, 1})},
        {"almost_abelian", model_out_algebra({ModelKind::AlmostAbelian, 1, 5, ModelAction::FlipLast})},
        {"W(1;(1))", witt_algebra(1, {1}, 3)},
        {"W(2;(1,1))", witt_algebra(2, {1, 1}, 3)},
        {"H(2;(1,2))", HamiltonianAlgebra(1, {1, 2}, 3).algebra()},
        {"H(4;(1,1,1,1))", HamiltonianAlgebra(2, {1, 1, 1, 1}, 3).algebra()},
    };
    testing::Rng srng(7);
    for (const auto& [name, l] : catalog) {
        const Dims base = series_dims(derived_series(l));
        for (int t = 0; t < 3; ++t) {
            const LieAlgebra p = permute_basis(l, testing::shuffled_identity(srng, l.dim()));
            o.require(series_dims(derived_series(p)) == base, name + " series changed under shuffle");
        }
    }

    // byte-identical reports across thread counts
    for (const auto& n : std::vector<std::vector<int>>{{1, 3}, {2, 2}}) {
        const HamiltonianAlgebra g(1, n, 3);
        const std::string one = render(ham_report(g, 1), Format::Json, false);
        const std::string many = render(ham_report(g, 8), Format::Json, false);
        o.require(one == many, "reports differ between 1 and 8 threads");
    }
    o.note("Lucas 730x730, 1000 rank-nullity, " + std::to_string(catalog.size()) +
           " catalog shuffles, 1 vs 8 threads identical");
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"AC1 gap series rows", ac1},        {"AC2 241-dimensional case", ac2}, {"AC3 sl2 triple", ac3},
        {"AC4 sl2 semidirect V(2)", ac4},     {"AC5 A/B/C/D family", ac5},       {"AC6 classical checks", ac6},
        {"AC7 Br8", ac7},                     {"AC8 oracle equivalence", ac8},   {"AC9 property suites", ac9},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
