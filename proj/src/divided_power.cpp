#include "modlie/divided_power.hpp"

#include <algorithm>
#include <numeric>

namespace modlie {

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> exponents, std::vector<int> bounds)
    : exps_(std::move(exponents)), bounds_(std::move(bounds)) {
    if (exps_.size() != bounds_.size()) throw InvalidArgument("exponent and bound tuples differ in length");
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] < 0 || exps_[i] > bounds_[i])
            throw InvalidArgument("exponent " + std::to_string(exps_[i]) + " outside [0, " +
                                  std::to_string(bounds_[i]) + "]");
}

std::optional<MultiIndex> MultiIndex::make(std::vector<int> exponents, std::vector<int> bounds) {
    if (exponents.size() != bounds.size()) throw InvalidArgument("exponent and bound tuples differ in length");
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i] < 0 || exponents[i] > bounds[i]) return std::nullopt;
    return MultiIndex(std::move(exponents), std::move(bounds));
}

int MultiIndex::degree() const noexcept { return std::accumulate(exps_.begin(), exps_.end(), 0); }

bool MultiIndex::is_zero_index() const noexcept {
    return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
}

bool reversed_lex_less(const std::vector<int>& a, const std::vector<int>& b) noexcept {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

std::string monomial_label(const std::vector<int>& exps) {
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (!s.empty()) s += ' ';
        s += "x" + std::to_string(i + 1);
        if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
    }
    return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------- O(m;n)

DividedPowers::DividedPowers(unsigned p, std::vector<int> n) : field_(p), n_(std::move(n)) {
    if (n_.empty()) throw InvalidArgument("O(m;n) needs m >= 1");
    dim_ = 1;
    for (int h : n_) {
        if (h < 1) throw InvalidArgument("heights n_i must be >= 1");
        std::size_t pk = 1;
        for (int t = 0; t < h; ++t) {
            pk *= p;
            if (pk > (std::size_t(1) << 24)) throw InvalidArgument("divided power algebra too large");
        }
        tau_.push_back(int(pk) - 1);
        dim_ *= pk;
        if (dim_ > (std::size_t(1) << 24)) throw InvalidArgument("divided power algebra too large");
    }
}

void DividedPowers::check(const MultiIndex& a) const {
    if (a.bounds() != tau_) throw InvalidArgument("multi-index belongs to a different O(m;n)");
}

std::optional<MultiIndex> DividedPowers::try_index(std::vector<int> exps) const {
    if (exps.size() != tau_.size()) throw InvalidArgument("multi-index has the wrong number of variables");
    return MultiIndex::make(std::move(exps), tau_);
}

std::size_t DividedPowers::position(const MultiIndex& a) const {
    check(a);
    std::size_t pos = 0;
    for (std::size_t i = a.size(); i-- > 0;) pos = pos * std::size_t(tau_[i] + 1) + std::size_t(a[i]);
    return pos;
}

MultiIndex DividedPowers::at(std::size_t pos) const {
    if (pos >= dim_) throw InvalidArgument("position outside O(m;n)");
    std::vector<int> e(tau_.size());
    for (std::size_t i = 0; i < tau_.size(); ++i) {
        e[i] = int(pos % std::size_t(tau_[i] + 1));
        pos /= std::size_t(tau_[i] + 1);
    }
    return MultiIndex(std::move(e), tau_);
}

std::optional<std::pair<Residue, MultiIndex>> DividedPowers::multiply(const MultiIndex& a,
                                                                       const MultiIndex& b) const {
    check(a);
    check(b);
    std::vector<int> sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
    auto c = MultiIndex::make(sum, tau_);
    if (!c) return std::nullopt;
    const Residue coeff = lucas_binom(sum, b.exponents(), prime());
    if (coeff == 0) return std::nullopt;
    return std::pair{coeff, std::move(*c)};
}

std::optional<MultiIndex> DividedPowers::partial(std::size_t i, const MultiIndex& a) const {
    check(a);
    if (i >= a.size()) throw InvalidArgument("derivative direction out of range");
    if (a[i] == 0) return std::nullopt;
    std::vector<int> e = a.exponents();
    --e[i];
    return MultiIndex(std::move(e), tau_);
}

void DividedPowers::add_term(DpElement& f, std::size_t pos, Residue c) const {
    if (c == 0) return;
    auto [it, fresh] = f.try_emplace(pos, c);
    if (!fresh) {
        it->second = field_.add(it->second, c);
        if (it->second == 0) f.erase(it);
    }
}

DpElement DividedPowers::monomial(const MultiIndex& a, Residue c) const {
    DpElement f;
    add_term(f, position(a), c);
    return f;
}

DpElement DividedPowers::multiply(const DpElement& f, const DpElement& g) const {
    DpElement out;
    for (const auto& [pa, ca] : f)
        for (const auto& [pb, cb] : g)
            if (auto prod = multiply(at(pa), at(pb)))
                add_term(out, position(prod->second), field_.mul(field_.mul(ca, cb), prod->first));
    return out;
}

DpElement DividedPowers::partial(std::size_t i, const DpElement& f) const {
    DpElement out;
    for (const auto& [pa, ca] : f)
        if (auto d = partial(i, at(pa))) add_term(out, position(*d), ca);
    return out;
}

// ---------------------------------------------------------------- vector fields

void add_term(const Field& f, WittElement& x, std::size_t pos, std::size_t dir, Residue c) {
    if (c == 0) return;
    auto [it, fresh] = x.try_emplace({pos, dir}, c);
    if (!fresh) {
        it->second = f.add(it->second, c);
        if (it->second == 0) x.erase(it);
    }
}

DpElement apply_vector_field(const DividedPowers& o, const WittElement& x, const DpElement& g) {
    DpElement out;
    const Field& f = o.field();
    for (const auto& [key, c] : x) {
        const auto& [pos, dir] = key;
        const DpElement dg = o.partial(dir, g);
        for (const auto& [pd, cd] : dg)
            if (auto prod = o.multiply(o.at(pos), o.at(pd)))
                o.add_term(out, o.position(prod->second), f.mul(f.mul(c, cd), prod->first));
    }
    return out;
}

WittElement vector_field_bracket(const DividedPowers& o, const WittElement& x, const WittElement& y) {
    const Field& f = o.field();
    const std::size_t m = o.vars();
    // component functions
    std::vector<DpElement> xf(m), yf(m);
    for (const auto& [k, c] : x) o.add_term(xf[k.second], k.first, c);
    for (const auto& [k, c] : y) o.add_term(yf[k.second], k.first, c);
    WittElement out;
    for (std::size_t j = 0; j < m; ++j) {
        for (const auto& [pos, c] : apply_vector_field(o, x, yf[j])) add_term(f, out, pos, j, c);
        for (const auto& [pos, c] : apply_vector_field(o, y, xf[j])) add_term(f, out, pos, j, f.neg(c));
    }
    return out;
}

// ---------------------------------------------------------------- W(m;n)

std::vector<WittBasisElement> witt_basis(const DividedPowers& o) {
    std::vector<MultiIndex> monos;
    for (std::size_t pos = 0; pos < o.dim(); ++pos) monos.push_back(o.at(pos));
    std::sort(monos.begin(), monos.end(), [](const MultiIndex& a, const MultiIndex& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return reversed_lex_less(a.exponents(), b.exponents());
    });
    std::vector<WittBasisElement> out;
    for (const auto& a : monos)
        for (std::size_t i = 0; i < o.vars(); ++i) out.push_back({a, i});
    return out;
}

LieAlgebra witt_algebra(std::size_t m, const std::vector<int>& n, unsigned p) {
    if (m < 1 || n.size() != m) throw InvalidArgument("W(m;n) needs m >= 1 and n of length m");
    const DividedPowers o(p, n);
    const Field& f = o.field();
    const auto basis = witt_basis(o);
    const std::size_t dim = basis.size();

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> where;  // (position, direction) -> basis index
    std::vector<std::string> labels;
    std::vector<Weight> weights;
    for (std::size_t k = 0; k < dim; ++k) {
        const auto& [a, i] = basis[k];
        where[{o.position(a), i}] = k;
        const std::string mono = a.is_zero_index() ? "" : monomial_label(a.exponents()) + " ";
        labels.push_back(mono + "d" + std::to_string(i + 1));
        Weight w = a.exponents();
        w[i] -= 1;
        weights.push_back(std::move(w));
    }

    // [x^a d_i, x^b d_j] = C(a+b-e_i, a) x^(a+b-e_i) d_j - C(a+b-e_j, b) x^(a+b-e_j) d_i
    auto term = [&](const MultiIndex& a, const MultiIndex& b, std::size_t shift, const MultiIndex& lower)
        -> std::optional<std::pair<Residue, std::size_t>> {
        std::vector<int> s(m);
        for (std::size_t t = 0; t < m; ++t) s[t] = a[t] + b[t] - (t == shift ? 1 : 0);
        auto idx = o.try_index(s);
        if (!idx) return std::nullopt;
        const Residue c = lucas_binom(s, lower.exponents(), p);
        if (!c) return std::nullopt;
        return std::pair{c, o.position(*idx)};
    };

    LieAlgebraBuilder b(f, std::move(labels));
    for (std::size_t u = 0; u < dim; ++u)
        for (std::size_t v = u + 1; v < dim; ++v) {
            const auto& [a, i] = basis[u];
            const auto& [bb, j] = basis[v];
            if (auto t = term(a, bb, i, a)) b.add_to_bracket(u, v, where.at({t->second, j}), t->first);
            if (auto t = term(a, bb, j, bb)) b.add_to_bracket(u, v, where.at({t->second, i}), f.neg(t->first));
        }
    b.set_grading(std::move(weights));
    return std::move(b).build();
}

}  // namespace modlie
