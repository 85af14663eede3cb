#include "modlie/hamiltonian.hpp"

#include <algorithm>
#include <numeric>

namespace modlie {

WittElement d_h(const DividedPowers& o, const MultiIndex& a) {
    if (o.vars() % 2 != 0) throw InvalidArgument("D_H needs an even number of variables");
    const SigmaPrime sp{o.vars() / 2};
    const Field& f = o.field();
    WittElement out;
    for (std::size_t i = 0; i < o.vars(); ++i)
        if (auto d = o.partial(i, a)) add_term(f, out, o.position(*d), sp.prime(i), f.reduce(sp.sigma(i)));
    return out;
}

Residue f_coeff(int a, int b, int c, int d, unsigned p) {
    const Field f(p);
    auto binom = [p](int x, int y) -> Residue {
        return (x < 0 || y < 0) ? 0 : lucas_binom(std::uint64_t(x), std::uint64_t(y), p);
    };
    Residue first = 0, second = 0;
    if (a != 0 && d != 0) first = f.mul(binom(a + c - 1, a - 1), binom(b + d - 1, d - 1));
    if (b != 0 && c != 0) second = f.mul(binom(a + c - 1, c - 1), binom(b + d - 1, b - 1));
    return f.sub(first, second);
}

namespace {

std::vector<std::string> hamiltonian_labels(const std::vector<std::vector<int>>& exps) {
    std::vector<std::string> labels;
    labels.reserve(exps.size());
    for (const auto& a : exps) labels.push_back("D_H(" + monomial_label(a) + ")");
    return labels;
}

std::vector<int> plus_one(std::vector<int> n) {
    for (int& h : n) ++h;
    return n;
}

std::vector<std::vector<int>> admissible_indices(const DividedPowers& o) {
    // mixed-radix position order is reversed-index lex; drop positions 0 and tau
    std::vector<std::vector<int>> out;
    for (std::size_t pos = 1; pos + 1 < o.dim(); ++pos) out.push_back(o.at(pos).exponents());
    if (out.empty()) throw DegenerateAlgebra("H(2r;n)^(2) is zero for these parameters");
    return out;
}

DividedPowers checked_divided_powers(std::size_t r, std::vector<int> n, unsigned p) {
    if (r == 0 || n.size() != 2 * r) throw InvalidArgument("H(2r;n) needs r >= 1 and n of length 2r");
    return DividedPowers(p, std::move(n));
}

}  // namespace

HamiltonianAlgebra::HamiltonianAlgebra(std::size_t r, std::vector<int> n, unsigned p, Method method)
    : r_(r),
      o_(checked_divided_powers(r, std::move(n), p)),
      exps_(admissible_indices(o_)),
      algebra_(build_table(method)) {}

LieAlgebra HamiltonianAlgebra::build_table(Method method) const {
    if (method == Method::ClosedForm && r_ != 1)
        throw InvalidArgument("closed-form structure constants exist only for r = 1");
    const Field& f = o_.field();
    LieAlgebraBuilder b(f, hamiltonian_labels(exps_));
    const std::size_t dim = exps_.size();
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            if (method == Method::Oracle) {
                b.set_bracket(i, j, oracle_bracket(i, j));
                continue;
            }
            const auto& x = exps_[i];
            const auto& y = exps_[j];
            const Residue c = f_coeff(x[0], x[1], y[0], y[1], f.prime());
            if (c == 0) continue;
            if (auto k = index_of({x[0] + y[0] - 1, x[1] + y[1] - 1})) b.add_to_bracket(i, j, *k, c);
        }

    // weights a_i - a_{i+r} (i < r) and sum_{i >= r} a_i - 1
    std::vector<Weight> weights;
    for (const auto& a : exps_) {
        Weight w(r_ + 1, 0);
        for (std::size_t i = 0; i < r_; ++i) w[i] = a[i] - a[i + r_];
        w[r_] = std::accumulate(a.begin() + std::ptrdiff_t(r_), a.end(), 0) - 1;
        weights.push_back(std::move(w));
    }
    b.set_grading(std::move(weights));
    return std::move(b).build();
}

const std::vector<int>& HamiltonianAlgebra::exponents(std::size_t basis_index) const {
    return exps_.at(basis_index);
}

std::optional<std::size_t> HamiltonianAlgebra::index_of(const std::vector<int>& a) const {
    if (a.size() != o_.vars()) return std::nullopt;
    auto idx = o_.try_index(a);
    if (!idx) return std::nullopt;
    const std::size_t pos = o_.position(*idx);
    if (pos == 0 || pos + 1 == o_.dim()) return std::nullopt;
    return pos - 1;
}

SparseVector HamiltonianAlgebra::element(const std::vector<int>& a) const {
    auto k = index_of(a);
    if (!k) throw InvalidArgument("D_H(x^(a)) is not a basis element for this index");
    return {Entry{std::uint32_t(*k), 1}};
}

SparseVector HamiltonianAlgebra::oracle_bracket(std::size_t i, std::size_t j) const {
    const WittElement x = d_h(o_, o_.index(exps_.at(i)));
    const DpElement g = apply_vector_field(o_, x, o_.monomial(o_.index(exps_.at(j))));
    SparseVector out;
    for (const auto& [pos, c] : g) {
        if (pos == 0) continue;  // D_H(1) = 0
        if (pos + 1 == o_.dim())
            throw ValidationError("bracket produced D_H(x^tau), which lies outside H(2r;n)^(2)");
        out.push_back({std::uint32_t(pos - 1), c});
    }
    return out;  // map order keeps columns sorted
}

FpMatrix HamiltonianAlgebra::map_from_rule(const Rule& rule) const {
    const Field& f = field();
    FpMatrix m(dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) {
        auto img = rule(exps_[k]);
        if (!img) continue;
        const Residue c = f.reduce(img->first);
        if (c == 0) continue;
        if (auto t = index_of(img->second)) m.add_to(f, *t, k, c);
    }
    return m;
}

FpMatrix HamiltonianAlgebra::restricted_adjoint(const std::vector<int>& c) const {
    const DividedPowers big(prime(), plus_one(n()));
    auto ci = big.try_index(c);
    if (!ci) throw InvalidArgument("index outside the enlarged divided power algebra");
    const WittElement x = d_h(big, *ci);
    FpMatrix m(dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) {
        const DpElement g = apply_vector_field(big, x, big.monomial(big.index(exps_[k])));
        for (const auto& [pos, coeff] : g) {
            const std::vector<int> e = big.at(pos).exponents();
            if (std::all_of(e.begin(), e.end(), [](int v) { return v == 0; })) continue;
            auto t = index_of(e);
            if (!t) throw InvalidArgument("ad D_H(x^(" + monomial_label(c) + ")) does not preserve the subalgebra");
            m.add_to(field(), *t, k, coeff);
        }
    }
    return m;
}

// ---------------------------------------------------------------- named maps

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void require_h2_1n(const HamiltonianAlgebra& g, const char* what) {
    if (g.prime() != 3 || g.r() != 1 || g.n()[0] != 1)
        throw InvalidArgument(std::string(what) + " is defined on H(2;(1,n))^(2) at p = 3");
}

}  // namespace

Sl2Triple sl2_triple(const HamiltonianAlgebra& g) {
    require_h2_1n(g, "the sl2 triple");
    using R = std::optional<std::pair<int, std::vector<int>>>;
    Sl2Triple t;
    t.e = g.map_from_rule([](const std::vector<int>& x) -> R {
        if (x[0] != 2) return std::nullopt;
        return std::pair{1, std::vector<int>{0, x[1] + 1}};
    });
    t.f = g.map_from_rule([](const std::vector<int>& x) -> R {
        if (x[0] != 0) return std::nullopt;
        return std::pair{1, std::vector<int>{2, x[1] - 1}};
    });
    t.h = g.map_from_rule([](const std::vector<int>& x) -> R { return std::pair{1 - x[0], x}; });
    return t;
}

TranslationPair translation_pair(const HamiltonianAlgebra& g) {
    require_h2_1n(g, "the translation pair");
    if (g.n()[1] < 2) throw InvalidArgument("V and W need n >= 2");
    const int top = ipow(3, g.n()[1]);
    using R = std::optional<std::pair<int, std::vector<int>>>;
    TranslationPair t;
    // V is the restriction of ad D_H(x2^(3^n)), which sends D_H(x1^a) to
    // -D_H(x1^(a-1) x2^(3^n-1)); with this sign [E,W] = V and [F,V] = W hold
    t.v = g.map_from_rule([top](const std::vector<int>& x) -> R {
        if (x[1] != 0) return std::nullopt;
        return std::pair{-1, std::vector<int>{x[0] - 1, top - 1}};
    });
    t.w = g.map_from_rule([top](const std::vector<int>& x) -> R {
        if (x[0] + x[1] != 1) return std::nullopt;
        return std::pair{x[0] % 2 ? -1 : 1, std::vector<int>{x[0] + 1, x[1] + top - 2}};
    });
    return t;
}

FpMatrix partial_power_map(const HamiltonianAlgebra& g, std::size_t var, int j) {
    if (var >= g.n().size() || j < 0) throw InvalidArgument("partial power map index out of range");
    const int step = ipow(int(g.prime()), j);
    return g.map_from_rule([var, step](const std::vector<int>& x) -> std::optional<std::pair<int, std::vector<int>>> {
        std::vector<int> t = x;
        t[var] -= step;
        return std::pair{1, std::move(t)};
    });
}

std::vector<NamedMap> OutFamily::all() const {
    std::vector<NamedMap> out = a;
    out.push_back(b);
    out.push_back(c);
    out.insert(out.end(), d.begin(), d.end());
    return out;
}

OutFamily general_out_family(const HamiltonianAlgebra& g) {
    const std::size_t r = g.r();
    const auto& n = g.n();
    const bool case_r1 = r == 1 && 1 < n[0] && n[0] <= n[1];
    if (g.prime() != 3 || !(r > 1 || case_r1))
        throw InvalidArgument("the A/B/C/D family needs p = 3 and r > 1, or r = 1 with 1 < n_1 <= n_2");

    const SigmaPrime sp{r};
    const std::vector<int> tau = g.tau();
    using R = std::optional<std::pair<int, std::vector<int>>>;
    OutFamily fam;
    for (std::size_t i = 0; i < 2 * r; ++i) {
        FpMatrix m = g.map_from_rule([&, i](const std::vector<int>& x) -> R {
            if (x[i] != 0) return std::nullopt;
            std::vector<int> t = x;
            t[i] = tau[i];
            t[sp.prime(i)] -= 1;
            return std::pair{sp.sigma(i), std::move(t)};
        });
        fam.a.push_back({"A" + std::to_string(i + 1), std::move(m)});
    }
    fam.b = {"B", g.map_from_rule([&](const std::vector<int>& x) -> R {
                 if (std::accumulate(x.begin(), x.end(), 0) != 1) return std::nullopt;
                 const std::size_t j = std::size_t(std::find(x.begin(), x.end(), 1) - x.begin());
                 const std::size_t k = sp.prime(j);  // the index with a_{k'} != 0
                 std::vector<int> t = tau;
                 t[k] -= 1;
                 return std::pair{sp.sigma(k), std::move(t)};
             })};
    fam.c = {"C", g.map_from_rule([](const std::vector<int>& x) -> R {
                 return std::pair{std::accumulate(x.begin(), x.end(), 0) - 2, x};
             })};
    for (std::size_t i = 0; i < 2 * r; ++i)
        for (int j = 1; j < n[i]; ++j) {
            fam.d.push_back({"D" + std::to_string(i + 1) + "," + std::to_string(j), partial_power_map(g, i, j)});
            fam.d_index.push_back({i, j});
        }
    return fam;
}

}  // namespace modlie
