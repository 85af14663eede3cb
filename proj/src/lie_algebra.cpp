#include "modlie/lie_algebra.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace modlie {

// ---------------------------------------------------------------- LieAlgebra

SparseVector LieAlgebra::bracket_basis(std::size_t i, std::size_t j) const {
    const std::size_t n = dim();
    if (i >= n || j >= n) throw DimensionMismatch("basis index out of range");
    if (i == j) return {};
    if (i < j) return upper(i, j);
    SparseVector v = upper(j, i);
    for (auto& e : v) e.val = field_.neg(e.val);
    return v;
}

DenseVector LieAlgebra::bracket(std::span<const Residue> x, std::span<const Residue> y) const {
    if (x.size() != dim() || y.size() != dim()) throw DimensionMismatch("bracket operand has wrong length");
    return to_dense(bracket(to_sparse(x), to_sparse(y)), dim());
}

SparseVector LieAlgebra::bracket(const SparseVector& x, const SparseVector& y) const {
    const std::size_t n = dim();
    if ((!x.empty() && x.back().col >= n) || (!y.empty() && y.back().col >= n))
        throw DimensionMismatch("bracket operand outside the algebra");
    if (x.size() * y.size() <= 4) {
        // few terms: merge sparse rows instead of touching a dense accumulator
        SparseVector out, scratch;
        for (const auto& a : x)
            for (const auto& b : y) {
                if (a.col == b.col) continue;
                const Residue c = field_.mul(a.val, b.val);
                const bool flip = a.col > b.col;
                sparse_axpy(field_, out, flip ? field_.neg(c) : c, flip ? upper(b.col, a.col) : upper(a.col, b.col),
                            scratch);
            }
        return out;
    }
    DenseVector acc(n, 0);
    for (const auto& a : x)
        for (const auto& b : y) {
            if (a.col == b.col) continue;
            const Residue c = field_.mul(a.val, b.val);
            const bool flip = a.col > b.col;
            const auto& terms = flip ? upper(b.col, a.col) : upper(a.col, b.col);
            const Residue s = flip ? field_.neg(c) : c;
            for (const auto& t : terms) acc[t.col] = field_.add(acc[t.col], field_.mul(s, t.val));
        }
    return to_sparse(acc);
}

FpMatrix LieAlgebra::adjoint(const SparseVector& x) const {
    const std::size_t n = dim();
    FpMatrix m(n, n);
    std::vector<DenseVector> rows(n, DenseVector(n, 0));
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& a : x) {
            if (a.col >= n) throw DimensionMismatch("adjoint operand outside the algebra");
            if (a.col == k) continue;
            for (const auto& t : bracket_basis(a.col, k))
                rows[t.col][k] = field_.add(rows[t.col][k], field_.mul(a.val, t.val));
        }
    for (std::size_t r = 0; r < n; ++r) m.set_row(r, to_sparse(rows[r]));
    return m;
}

FpMatrix LieAlgebra::adjoint_basis(std::size_t i) const {
    return adjoint(SparseVector{{static_cast<std::uint32_t>(i), 1}});
}

bool LieAlgebra::is_abelian() const noexcept { return nonzero_pairs() == 0; }

std::size_t LieAlgebra::nonzero_pairs() const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            if (!upper(i, j).empty()) ++c;
    return c;
}

bool LieAlgebra::same_structure(const LieAlgebra& other) const noexcept {
    return field_ == other.field_ && dim() == other.dim() && table_ == other.table_;
}

// ---------------------------------------------------------------- builder

LieAlgebraBuilder::LieAlgebraBuilder(const Field& f, std::vector<std::string> labels) : algebra_(f) {
    if (labels.empty()) throw DegenerateAlgebra("a Lie algebra needs at least one basis vector");
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second) throw InvalidArgument("duplicate basis label '" + l + "'");
    const std::size_t n = labels.size();
    algebra_.labels_ = std::move(labels);
    algebra_.table_.assign(n * n, {});
}

LieAlgebraBuilder& LieAlgebraBuilder::set_bracket(std::size_t i, std::size_t j, SparseVector value) {
    const std::size_t n = dim();
    if (i >= n || j >= n) throw DimensionMismatch("basis index out of range");
    if (i == j) {
        if (!value.empty()) throw InvalidArgument("[e_i, e_i] must vanish");
        return *this;
    }
    const Field& f = algebra_.field_;
    std::erase_if(value, [](const Entry& e) { return e.val == 0; });
    for (std::size_t t = 0; t < value.size(); ++t) {
        if (value[t].col >= n) throw DimensionMismatch("bracket value outside the algebra");
        if (value[t].val >= f.prime()) throw InvalidArgument("coefficient not reduced mod p");
        if (t > 0 && value[t].col <= value[t - 1].col) throw InvalidArgument("bracket value not sorted");
    }
    if (i > j) {
        for (auto& e : value) e.val = f.neg(e.val);
        std::swap(i, j);
    }
    algebra_.table_[i * n + j] = std::move(value);
    return *this;
}

LieAlgebraBuilder& LieAlgebraBuilder::add_to_bracket(std::size_t i, std::size_t j, std::size_t k, Residue c) {
    const std::size_t n = dim();
    if (i >= n || j >= n || k >= n) throw DimensionMismatch("basis index out of range");
    if (i == j || c == 0) return *this;
    const Field& f = algebra_.field_;
    if (i > j) {
        std::swap(i, j);
        c = f.neg(c);
    }
    SparseVector add{{static_cast<std::uint32_t>(k), c}}, scratch;
    sparse_axpy(f, algebra_.table_[i * n + j], 1, add, scratch);
    return *this;
}

LieAlgebraBuilder& LieAlgebraBuilder::set_grading(std::vector<Weight> weights) {
    if (weights.size() != dim()) throw DimensionMismatch("one weight per basis vector required");
    for (const auto& w : weights)
        if (w.size() != weights.front().size()) throw InvalidArgument("weights must have equal length");
    algebra_.grading_ = std::move(weights);
    return *this;
}

LieAlgebra LieAlgebraBuilder::build() && {
    if (algebra_.grading_) {
        const auto& w = *algebra_.grading_;
        const std::size_t n = dim(), r = w.front().size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (const auto& t : algebra_.table_[i * n + j])
                    for (std::size_t c = 0; c < r; ++c)
                        if (w[i][c] + w[j][c] != w[t.col][c])
                            throw ValidationError("bracket [" + algebra_.labels_[i] + ", " + algebra_.labels_[j] +
                                                  "] violates the grading");
    }
    return std::move(algebra_);
}

// ---------------------------------------------------------------- analysis

std::vector<JacobiViolation> validate_lie(const LieAlgebra& l) {
    const Field& f = l.field();
    const std::size_t n = l.dim();
    std::vector<JacobiViolation> out;
    auto unit = [](std::size_t i) { return SparseVector{{static_cast<std::uint32_t>(i), 1}}; };
    SparseVector scratch;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const SparseVector ij = l.bracket_basis(i, j);
            for (std::size_t k = j + 1; k < n; ++k) {
                SparseVector acc = l.bracket(ij, unit(k));
                sparse_axpy(f, acc, 1, l.bracket(l.bracket_basis(j, k), unit(i)), scratch);
                sparse_axpy(f, acc, 1, l.bracket(l.bracket_basis(k, i), unit(j)), scratch);
                if (!acc.empty()) out.push_back({i, j, k, std::move(acc)});
            }
        }
    return out;
}

Subspace bracket_span(const LieAlgebra& l, const Subspace& a, const Subspace& b) {
    Echelon e(l.field(), l.dim());
    for (const auto& u : a.basis())
        for (const auto& v : b.basis()) {
            if (e.rank() == l.dim()) break;
            e.insert(l.bracket(u, v));
        }
    return e.to_subspace();
}

std::vector<Subspace> derived_series(const LieAlgebra& l) {
    std::vector<Subspace> out{Subspace::full(l.dim())};
    while (!out.back().is_zero()) {
        Subspace next = bracket_span(l, out.back(), out.back());
        const bool stable = next.dim() == out.back().dim();
        out.push_back(std::move(next));
        if (stable) break;
    }
    return out;
}

std::vector<Subspace> lower_central_series(const LieAlgebra& l) {
    const Subspace whole = Subspace::full(l.dim());
    std::vector<Subspace> out{whole};
    while (!out.back().is_zero()) {
        Subspace next = bracket_span(l, whole, out.back());
        const bool stable = next.dim() == out.back().dim();
        out.push_back(std::move(next));
        if (stable) break;
    }
    return out;
}

std::vector<std::size_t> series_dims(const std::vector<Subspace>& series) {
    std::vector<std::size_t> d;
    for (const auto& s : series) d.push_back(s.dim());
    return d;
}

bool is_solvable_series(const std::vector<std::size_t>& dims) noexcept { return !dims.empty() && dims.back() == 0; }

std::optional<std::size_t> derived_length(const std::vector<std::size_t>& dims) noexcept {
    if (!is_solvable_series(dims)) return std::nullopt;
    return dims.size() - 1;
}

Subspace center(const LieAlgebra& l) {
    const std::size_t n = l.dim();
    // z is central iff [e_i, z] = 0 for all i: one equation per (i, k)
    StreamingNullspace ns(l.field(), n);
    std::vector<DenseVector> rows(n, DenseVector(n, 0));
    for (std::size_t i = 0; i < n && ns.rank() < n; ++i) {
        for (auto& r : rows) std::fill(r.begin(), r.end(), 0);
        for (std::size_t m = 0; m < n; ++m)
            for (const auto& t : l.bracket_basis(i, m)) rows[t.col][m] = t.val;
        for (const auto& r : rows) ns.add_equation(to_sparse(r));
    }
    return ns.solve();
}

Subspace ideal_closure(const LieAlgebra& l, const Subspace& s) {
    if (s.ambient_dim() != l.dim()) throw DimensionMismatch("subspace does not live in the algebra");
    const std::size_t n = l.dim();
    Echelon e(l.field(), n);
    std::vector<SparseVector> queue;
    for (const auto& v : s.basis())
        if (e.insert(v)) queue.push_back(v);
    for (std::size_t q = 0; q < queue.size() && e.rank() < n; ++q)
        for (std::size_t i = 0; i < n && e.rank() < n; ++i) {
            SparseVector w = l.bracket(SparseVector{{static_cast<std::uint32_t>(i), 1}}, queue[q]);
            if (!w.empty() && e.insert(w)) queue.push_back(std::move(w));
        }
    return e.to_subspace();
}

const char* to_string(Simplicity s) noexcept {
    switch (s) {
        case Simplicity::NotSimple: return "not_simple";
        case Simplicity::ProbablySimple: return "probably_simple";
        case Simplicity::Abelian: return "abelian";
        case Simplicity::Skipped: return "skipped";
    }
    return "unknown";
}

SimplicityResult simplicity_probe(const LieAlgebra& l, std::size_t trials, std::uint64_t seed) {
    const std::size_t n = l.dim();
    const Field& f = l.field();
    if (l.is_abelian()) {
        if (n == 1) return {Simplicity::Abelian, std::nullopt, "one-dimensional abelian"};
        return {Simplicity::NotSimple, Subspace::span(f, n, {{{0, 1}}}), "abelian: every line is an ideal"};
    }
    Subspace z = center(l);
    if (!z.is_zero()) return {Simplicity::NotSimple, std::move(z), "nonzero center"};
    const Subspace whole = Subspace::full(n);
    Subspace derived = bracket_span(l, whole, whole);
    if (derived.dim() < n) return {Simplicity::NotSimple, std::move(derived), "[L, L] is a proper ideal"};

    auto try_vector = [&](SparseVector v) -> std::optional<Subspace> {
        if (v.empty()) return std::nullopt;
        Subspace id = ideal_closure(l, Subspace::span(f, n, {std::move(v)}));
        if (id.dim() < n) return id;
        return std::nullopt;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (auto id = try_vector({{static_cast<std::uint32_t>(i), 1}}))
            return {Simplicity::NotSimple, std::move(id), "ideal generated by " + l.label(i)};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        DenseVector v(n);
        for (auto& x : v) x = static_cast<Residue>(rng() % f.prime());
        if (auto id = try_vector(to_sparse(v)))
            return {Simplicity::NotSimple, std::move(id), "ideal generated by a random vector"};
    }
    return {Simplicity::ProbablySimple, std::nullopt, "no proper ideal found over GF(p)"};
}

// ---------------------------------------------------------------- basis changes

LieAlgebra permute_basis(const LieAlgebra& l, std::span<const std::size_t> perm) {
    const std::size_t n = l.dim();
    if (perm.size() != n) throw DimensionMismatch("permutation length differs from dimension");
    std::vector<std::size_t> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || inv[perm[i]] != n) throw InvalidArgument("not a permutation");
        inv[perm[i]] = i;
    }
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = l.label(perm[i]);
    LieAlgebraBuilder b(l.field(), std::move(labels));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            SparseVector v;
            for (const auto& t : l.bracket_basis(perm[i], perm[j]))
                v.push_back({static_cast<std::uint32_t>(inv[t.col]), t.val});
            std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& c) { return a.col < c.col; });
            b.set_bracket(i, j, std::move(v));
        }
    if (l.grading()) {
        std::vector<Weight> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = (*l.grading())[perm[i]];
        b.set_grading(std::move(w));
    }
    return std::move(b).build();
}

LieAlgebra change_basis(const LieAlgebra& l, const FpMatrix& p) {
    const Field& f = l.field();
    const std::size_t n = l.dim();
    if (p.rows() != n || p.cols() != n) throw DimensionMismatch("change of basis must be dim x dim");
    auto pinv = inverse(f, p);
    if (!pinv) throw InvalidArgument("change of basis matrix is singular");
    std::vector<SparseVector> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = to_sparse(p.column(i));
    LieAlgebraBuilder b(f, l.labels());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const SparseVector v = l.bracket(cols[i], cols[j]);
            b.set_bracket(i, j, to_sparse(pinv->apply(f, to_dense(v, n))));
        }
    return std::move(b).build();
}

// ---------------------------------------------------------------- text format

namespace {
constexpr const char* kMagic = "modlie-lie-algebra";
}

void write_algebra(std::ostream& os, const LieAlgebra& l, const std::map<std::string, std::string>& meta) {
    const std::size_t n = l.dim();
    os << kMagic << ' ' << kAlgebraFormatVersion << '\n';
    os << "p " << l.prime() << '\n';
    os << "dim " << n << '\n';
    for (const auto& [k, v] : meta) os << "meta " << k << ' ' << v << '\n';
    for (std::size_t i = 0; i < n; ++i) os << "label " << i << ' ' << l.label(i) << '\n';
    if (l.grading()) {
        os << "grading " << l.grading()->front().size() << '\n';
        for (std::size_t i = 0; i < n; ++i) {
            os << "w " << i;
            for (int x : (*l.grading())[i]) os << ' ' << x;
            os << '\n';
        }
    }
    os << "brackets\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const SparseVector v = l.bracket_basis(i, j);
            if (v.empty()) continue;
            os << i << ' ' << j << " :";
            for (std::size_t t = 0; t < v.size(); ++t)
                os << (t ? ", " : " ") << v[t].col << ' ' << unsigned(v[t].val);
            os << '\n';
        }
    os << "end\n";
}

std::string to_text(const LieAlgebra& l, const std::map<std::string, std::string>& meta) {
    std::ostringstream os;
    write_algebra(os, l, meta);
    return os.str();
}

AlgebraDocument read_algebra(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&](bool required = true) -> bool {
        while (std::getline(is, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        if (required) throw ParseError("unexpected end of algebra file");
        return false;
    };
    auto fail = [&](const std::string& what) {
        throw ParseError("line " + std::to_string(lineno) + ": " + what);
    };
    auto expect_key = [&](const std::string& key) -> std::string {
        next();
        if (line.rfind(key + " ", 0) != 0) fail("expected '" + key + "'");
        return line.substr(key.size() + 1);
    };
    auto to_uint = [&](const std::string& s) -> unsigned long {
        try {
            std::size_t pos = 0;
            const unsigned long v = std::stoul(s, &pos);
            if (pos != s.size()) fail("trailing characters in number '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad number '" + s + "'");
        }
        return 0;
    };

    if (expect_key(kMagic) != std::to_string(kAlgebraFormatVersion)) fail("unsupported format version");
    const unsigned p = unsigned(to_uint(expect_key("p")));
    const std::size_t n = to_uint(expect_key("dim"));
    if (n == 0) throw DegenerateAlgebra("algebra file declares dimension 0");
    Field f(p);

    std::map<std::string, std::string> meta;
    std::vector<std::string> labels(n);
    std::vector<char> have(n, 0);
    next();
    while (line.rfind("meta ", 0) == 0) {
        const auto rest = line.substr(5);
        const auto sp = rest.find(' ');
        if (sp == std::string::npos) fail("meta line needs key and value");
        meta[rest.substr(0, sp)] = rest.substr(sp + 1);
        next();
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (line.rfind("label ", 0) != 0) fail("expected label line");
        const auto rest = line.substr(6);
        const auto sp = rest.find(' ');
        if (sp == std::string::npos) fail("label line needs index and text");
        const std::size_t idx = to_uint(rest.substr(0, sp));
        if (idx != i) fail("labels must be listed in order");
        labels[i] = rest.substr(sp + 1);
        next();
    }
    std::optional<std::vector<Weight>> grading;
    if (line.rfind("grading ", 0) == 0) {
        const std::size_t rank = to_uint(line.substr(8));
        std::vector<Weight> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            next();
            std::istringstream ss(line);
            std::string tag;
            std::size_t idx = 0;
            ss >> tag >> idx;
            if (tag != "w" || idx != i) fail("expected weight line for basis vector " + std::to_string(i));
            w[i].resize(rank);
            for (auto& x : w[i])
                if (!(ss >> x)) fail("short weight line");
        }
        grading = std::move(w);
        next();
    }
    if (line != "brackets") fail("expected 'brackets'");
    LieAlgebraBuilder b(f, std::move(labels));
    std::size_t last_i = 0, last_j = 0;
    bool first = true;
    while (true) {
        next();
        if (line == "end") break;
        const auto colon = line.find(':');
        if (colon == std::string::npos) fail("bracket line needs ':'");
        std::istringstream head(line.substr(0, colon));
        std::size_t i = 0, j = 0;
        if (!(head >> i >> j)) fail("bad bracket indices");
        if (i >= j || j >= n) fail("bracket indices must satisfy i < j < dim");
        if (!first && std::pair(i, j) <= std::pair(last_i, last_j)) fail("bracket lines out of order");
        first = false;
        last_i = i;
        last_j = j;
        SparseVector v;
        std::istringstream body(line.substr(colon + 1));
        std::string term;
        while (std::getline(body, term, ',')) {
            std::istringstream ts(term);
            std::size_t k = 0;
            unsigned c = 0;
            if (!(ts >> k >> c)) fail("bad bracket term");
            if (k >= n || c == 0 || c >= p) fail("bracket term out of range");
            if (!v.empty() && k <= v.back().col) fail("bracket terms out of order");
            v.push_back({static_cast<std::uint32_t>(k), static_cast<Residue>(c)});
        }
        if (v.empty()) fail("empty bracket line");
        b.set_bracket(i, j, std::move(v));
    }
    if (grading) b.set_grading(std::move(*grading));
    return {std::move(b).build(), std::move(meta)};
}

AlgebraDocument from_text(const std::string& text) {
    std::istringstream is(text);
    return read_algebra(is);
}

}  // namespace modlie
