#include "modlie/catalog.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace modlie {

// ---------------------------------------------------------------- sl_n, psl_n

namespace {

using MatEntries = std::map<std::pair<std::size_t, std::size_t>, int>;

MatEntries mat_commutator(const MatEntries& a, const MatEntries& b) {
    MatEntries out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            if (ka.second == kb.first) out[{ka.first, kb.second}] += va * vb;
            if (kb.second == ka.first) out[{kb.first, ka.second}] -= va * vb;
        }
    return out;
}

}  // namespace

SlPsl sl_psl(std::size_t n, unsigned p, bool projective) {
    if (n < 2) throw InvalidArgument("sl_n needs n >= 2");
    const Field f(p);
    std::vector<MatEntries> basis;
    std::vector<std::string> labels;
    std::vector<Weight> weights;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> offdiag;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            offdiag[{i, j}] = basis.size();
            basis.push_back({{{i, j}, 1}});
            labels.push_back("E(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            Weight w(n, 0);
            ++w[i];
            --w[j];
            weights.push_back(std::move(w));
        }
    const std::size_t h0 = basis.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        basis.push_back({{{i, i}, 1}, {{i + 1, i + 1}, -1}});
        labels.push_back("H(" + std::to_string(i + 1) + ")");
        weights.push_back(Weight(n, 0));
    }

    // trace-zero matrix -> coordinates; diagonal d gives H-coefficients h_k = d_1 + ... + d_k
    auto coords = [&](const MatEntries& m) {
        std::map<std::size_t, std::int64_t> acc;
        std::vector<std::int64_t> diag(n, 0);
        for (const auto& [k, v] : m) {
            if (v == 0) continue;
            if (k.first == k.second)
                diag[k.first] += v;
            else
                acc[offdiag.at(k)] += v;
        }
        std::int64_t run = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            run += diag[i];
            acc[h0 + i] += run;
        }
        SparseVector out;
        for (const auto& [c, v] : acc)
            if (Residue r = f.reduce(v)) out.push_back({std::uint32_t(c), r});
        return out;
    };

    LieAlgebraBuilder b(f, labels);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) b.set_bracket(i, j, coords(mat_commutator(basis[i], basis[j])));
    b.set_grading(std::move(weights));
    LieAlgebra sl = std::move(b).build();

    if (!projective) return {std::move(sl), std::nullopt};
    if (n % p != 0)
        return {std::move(sl), "p does not divide n, so sl_n has zero center; returning sl_n unchanged"};
    return {quotient_by_center(sl), std::nullopt};
}

LieAlgebra quotient_by_center(const LieAlgebra& l) {
    const Field& f = l.field();
    const Subspace z = center(l);
    if (z.dim() == l.dim()) throw DegenerateAlgebra("quotient by the center of an abelian algebra is zero");
    if (z.is_zero()) return l;

    std::vector<std::size_t> keep;
    for (std::size_t k = 0, t = 0; k < l.dim(); ++k) {
        if (t < z.pivots().size() && z.pivots()[t] == k) {
            ++t;
            continue;
        }
        keep.push_back(k);
    }
    std::vector<std::int64_t> pos(l.dim(), -1);
    for (std::size_t a = 0; a < keep.size(); ++a) pos[keep[a]] = std::int64_t(a);

    std::vector<std::string> labels;
    for (auto k : keep) labels.push_back(l.label(k));
    LieAlgebraBuilder b(f, std::move(labels));
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t c = a + 1; c < keep.size(); ++c) {
            SparseVector red = z.reduce(f, l.structure(keep[a], keep[c]));
            for (auto& e : red) e.col = std::uint32_t(pos[e.col]);
            b.set_bracket(a, c, std::move(red));
        }

    // keep the grading when the center is spanned by homogeneous vectors
    if (const auto& g = l.grading()) {
        const bool homogeneous = std::all_of(z.basis().begin(), z.basis().end(), [&](const SparseVector& v) {
            return std::all_of(v.begin(), v.end(), [&](const Entry& e) { return (*g)[e.col] == (*g)[v[0].col]; });
        });
        if (homogeneous) {
            std::vector<Weight> w;
            for (auto k : keep) w.push_back((*g)[k]);
            b.set_grading(std::move(w));
        }
    }
    return std::move(b).build();
}

// ---------------------------------------------------------------- small algebras

LieAlgebra brown8() {
    const Field f(3);
    LieAlgebraBuilder b(f, {"K12", "K21", "K13", "K31", "K23", "K32", "H", "K"});
    // (i, j, k, c): [x_i, x_j] = c x_k, 1-based
    const std::tuple<int, int, int, int> table[] = {
        {1, 2, 7, 1}, {1, 4, 6, 2}, {1, 5, 3, 1}, {1, 7, 1, 1}, {2, 3, 5, 1}, {2, 5, 8, 1},
        {2, 6, 4, 2}, {2, 7, 2, 2}, {2, 8, 6, 2}, {3, 4, 7, 2}, {3, 6, 1, 1}, {3, 7, 3, 2},
        {4, 5, 2, 2}, {4, 7, 4, 1}, {5, 6, 7, 1}, {5, 7, 5, 1}, {5, 8, 1, 1}, {6, 7, 6, 2},
    };
    for (const auto& [i, j, k, c] : table) b.add_to_bracket(i - 1, j - 1, k - 1, Residue(c));
    return std::move(b).build();
}

LieAlgebra heisenberg(unsigned p) {
    LieAlgebraBuilder b(Field(p), {"e1", "e2", "e3"});
    b.add_to_bracket(0, 1, 2, 1);
    b.set_grading({{1, 0}, {0, 1}, {1, 1}});
    return std::move(b).build();
}

LieAlgebra abelian(std::size_t k, unsigned p) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back("z" + std::to_string(i + 1));
    return LieAlgebraBuilder(Field(p), std::move(labels)).build();
}

// ---------------------------------------------------------------- model algebras for Out

LieAlgebra model_out_algebra(const ModelSpec& spec) {
    const Field f(3);
    std::vector<std::string> labels;
    std::size_t core = 0;
    switch (spec.kind) {
        case ModelKind::Sl2SemiV2: core = 5; break;
        case ModelKind::H3RtimesLine: core = 4; break;
        case ModelKind::AlmostAbelian:
            if (spec.ideal_dim < 1) throw InvalidArgument("almost abelian model needs an ideal of dimension >= 1");
            core = spec.ideal_dim + 1;
            break;
        default: throw InvalidArgument("unknown model kind");
    }
    if (spec.action != ModelAction::Identity && spec.action != ModelAction::FlipLast)
        throw InvalidArgument("acting derivation must be id or diag(1,...,1,-1)");
    for (std::size_t i = 0; i < core; ++i) labels.push_back("e" + std::to_string(i + 1));
    for (std::size_t i = 0; i < spec.k; ++i) labels.push_back("z" + std::to_string(i + 1));
    LieAlgebraBuilder b(f, std::move(labels));
    auto set = [&](int i, int j, int k, int c) { b.add_to_bracket(i - 1, j - 1, k - 1, f.reduce(c)); };
    switch (spec.kind) {
        case ModelKind::Sl2SemiV2:
            set(1, 2, 3, 1);
            set(1, 3, 1, 1);
            set(2, 3, 2, 2);
            set(3, 4, 4, 1);
            set(2, 4, 5, 1);
            set(3, 5, 5, 2);
            set(1, 5, 4, 1);
            break;
        case ModelKind::H3RtimesLine:
            set(1, 2, 3, 1);
            // [e4, x] = D x with D = diag(1, 1, -1)
            set(1, 4, 1, -1);
            set(2, 4, 2, -1);
            set(3, 4, 3, 1);
            break;
        case ModelKind::AlmostAbelian: {
            const int m = int(spec.ideal_dim);
            for (int i = 1; i <= m; ++i) {
                const int d = (spec.action == ModelAction::FlipLast && i == m) ? -1 : 1;
                set(i, m + 1, i, -d);
            }
            break;
        }
    }
    return std::move(b).build();
}

ModelKind parse_model_kind(const std::string& s) {
    if (s == "sl2_semi_v2") return ModelKind::Sl2SemiV2;
    if (s == "h3_rtimes_line") return ModelKind::H3RtimesLine;
    if (s == "almost_abelian") return ModelKind::AlmostAbelian;
    throw InvalidArgument("unknown model '" + s + "' (expected sl2_semi_v2, h3_rtimes_line or almost_abelian)");
}

ModelAction parse_model_action(const std::string& s) {
    if (s == "id") return ModelAction::Identity;
    if (s == "flip") return ModelAction::FlipLast;
    throw InvalidArgument("unknown acting derivation '" + s + "' (expected id or flip)");
}

const char* to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::Sl2SemiV2: return "sl2_semi_v2";
        case ModelKind::H3RtimesLine: return "h3_rtimes_line";
        case ModelKind::AlmostAbelian: return "almost_abelian";
    }
    return "?";
}

// ---------------------------------------------------------------- profiles

InvariantProfile invariant_profile(const LieAlgebra& l, const DerivationOptions& opts) {
    InvariantProfile p;
    p.dim = l.dim();
    p.derived = series_dims(derived_series(l));
    p.lower_central = series_dims(lower_central_series(l));
    p.center = center(l).dim();
    const DerivationAlgebra d = derivation_algebra(l, opts);
    p.der = d.dim();
    p.out = d.dim() - d.inn().dim();
    return p;
}

std::optional<std::string> compare(const InvariantProfile& a, const InvariantProfile& b) {
    if (a.dim != b.dim) return "dim";
    if (a.derived != b.derived) return "derived_series";
    if (a.lower_central != b.lower_central) return "lower_central_series";
    if (a.center != b.center) return "center";
    if (a.der != b.der) return "der";
    if (a.out != b.out) return "out";
    return std::nullopt;
}

}  // namespace modlie
