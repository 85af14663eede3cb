#include "modlie/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace modlie {

namespace {

void check_ambient(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim())
        throw DimensionMismatch("ambient dimensions differ: " + std::to_string(u.ambient_dim()) + " vs " +
                                std::to_string(v.ambient_dim()));
}

}  // namespace

// ---------------------------------------------------------------- Echelon

Echelon::Echelon(const Field& field, std::size_t cols)
    : field_(field), cols_(cols), dense_(cols <= kDenseThreshold), pivot_row_(cols, -1) {}

std::size_t Echelon::approx_bytes() const noexcept {
    std::size_t b = pivot_row_.size() * sizeof(std::int32_t);
    if (dense_) return b + dense_rows_.size() * cols_;
    for (const auto& r : sparse_rows_) b += r.size() * sizeof(Entry);
    return b;
}

void Echelon::reduce_dense(DenseVector& buf) const {
    for (std::size_t c = 0; c < cols_; ++c) {
        if (buf[c] == 0) continue;
        const auto r = pivot_row_[c];
        if (r < 0) continue;
        const auto& row = dense_rows_[std::size_t(r)];
        field_.axpy(std::span<Residue>(buf).subspan(c), field_.neg(buf[c]),
                    std::span<const Residue>(row).subspan(c));
    }
}

void Echelon::reduce_sparse(SparseVector& v) const {
    SparseVector scratch;
    std::size_t pos = 0;
    while (pos < v.size()) {
        const auto r = pivot_row_[v[pos].col];
        if (r < 0) {
            ++pos;
            continue;
        }
        // entries before pos precede the pivot row's leading column and are untouched
        sparse_axpy(field_, v, field_.neg(v[pos].val), sparse_rows_[std::size_t(r)], scratch);
    }
}

bool Echelon::insert(SparseVector row) {
    if (!row.empty() && row.back().col >= cols_) throw DimensionMismatch("row wider than echelon");
    if (dense_) {
        DenseVector buf = to_dense(row, cols_);
        return insert_dense(buf);
    }
    reduce_sparse(row);
    if (row.empty()) return false;
    const Residue inv = field_.inv(row.front().val);
    for (auto& e : row) e.val = field_.mul(e.val, inv);
    pivot_row_[row.front().col] = static_cast<std::int32_t>(sparse_rows_.size());
    sparse_rows_.push_back(std::move(row));
    return true;
}

bool Echelon::insert_dense(std::span<const Residue> row) {
    if (row.size() != cols_) throw DimensionMismatch("row length does not match echelon width");
    if (!dense_) return insert(to_sparse(row));
    DenseVector buf(row.begin(), row.end());
    reduce_dense(buf);
    auto lead = std::find_if(buf.begin(), buf.end(), [](Residue x) { return x != 0; });
    if (lead == buf.end()) return false;
    const std::size_t c = std::size_t(lead - buf.begin());
    field_.scale(buf, field_.inv(*lead));
    pivot_row_[c] = static_cast<std::int32_t>(dense_rows_.size());
    dense_rows_.push_back(std::move(buf));
    return true;
}

bool Echelon::contains(SparseVector row) const {
    if (dense_) {
        DenseVector buf = to_dense(row, cols_);
        reduce_dense(buf);
        return std::all_of(buf.begin(), buf.end(), [](Residue x) { return x == 0; });
    }
    reduce_sparse(row);
    return row.empty();
}

Subspace Echelon::to_subspace() const {
    Subspace out(cols_);
    std::vector<std::uint32_t> pivots;
    for (std::size_t c = 0; c < cols_; ++c)
        if (pivot_row_[c] >= 0) pivots.push_back(static_cast<std::uint32_t>(c));
    const std::size_t n = pivots.size();

    if (dense_) {
        std::vector<DenseVector> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = dense_rows_[std::size_t(pivot_row_[pivots[i]])];
        // back substitution from the last pivot upward
        for (std::size_t i = n; i-- > 0;) {
            const std::size_t pc = pivots[i];
            for (std::size_t j = 0; j < i; ++j) {
                const Residue x = rows[j][pc];
                if (x)
                    field_.axpy(std::span<Residue>(rows[j]).subspan(pc), field_.neg(x),
                                std::span<const Residue>(rows[i]).subspan(pc));
            }
        }
        for (auto& r : rows) out.basis_.push_back(to_sparse(r));
    } else {
        std::vector<SparseVector> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = sparse_rows_[std::size_t(pivot_row_[pivots[i]])];
        SparseVector scratch;
        for (std::size_t i = n; i-- > 0;) {
            const auto pc = pivots[i];
            for (std::size_t j = 0; j < i; ++j) {
                const Residue x = sparse_at(rows[j], pc);
                if (x) sparse_axpy(field_, rows[j], field_.neg(x), rows[i], scratch);
            }
        }
        out.basis_ = std::move(rows);
    }
    out.pivots_ = std::move(pivots);
    return out;
}

// ---------------------------------------------------------------- Subspace

Subspace Subspace::full(std::size_t ambient) {
    Subspace s(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
        s.basis_.push_back({{static_cast<std::uint32_t>(i), 1}});
        s.pivots_.push_back(static_cast<std::uint32_t>(i));
    }
    return s;
}

Subspace Subspace::span(const Field& f, std::size_t ambient, const std::vector<SparseVector>& gens) {
    Echelon e(f, ambient);
    for (const auto& g : gens) e.insert(g);
    return e.to_subspace();
}

Subspace Subspace::span_dense(const Field& f, std::size_t ambient, const std::vector<DenseVector>& gens) {
    Echelon e(f, ambient);
    for (const auto& g : gens) e.insert_dense(g);
    return e.to_subspace();
}

Subspace Subspace::from_rref(std::size_t ambient, std::vector<SparseVector> rows) {
    Subspace s(ambient);
    std::vector<std::uint32_t> pivots;
    for (const auto& r : rows) {
        if (r.empty() || r.front().val != 1 || r.back().col >= ambient)
            throw ParseError("row is not a normalized echelon row");
        for (std::size_t i = 1; i < r.size(); ++i)
            if (r[i].col <= r[i - 1].col || r[i].val == 0) throw ParseError("row entries not sorted/nonzero");
        if (!pivots.empty() && r.front().col <= pivots.back()) throw ParseError("pivots not increasing");
        pivots.push_back(r.front().col);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j)
            if (i != j && sparse_at(rows[i], pivots[j]) != 0) throw ParseError("pivot column not cleared");
    s.basis_ = std::move(rows);
    s.pivots_ = std::move(pivots);
    return s;
}

SparseVector Subspace::reduce(const Field& f, SparseVector v) const {
    SparseVector scratch;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        const Residue x = sparse_at(v, pivots_[i]);
        if (x) sparse_axpy(f, v, f.neg(x), basis_[i], scratch);
    }
    return v;
}

bool Subspace::contains(const Field& f, const SparseVector& v) const { return reduce(f, v).empty(); }

DenseVector Subspace::pivot_coordinates(const SparseVector& v) const {
    DenseVector c(basis_.size(), 0);
    for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = sparse_at(v, pivots_[i]);
    return c;
}

std::optional<DenseVector> Subspace::coordinates(const Field& f, const SparseVector& v) const {
    if (!contains(f, v)) return std::nullopt;
    return pivot_coordinates(v);
}

SparseVector Subspace::combine(const Field& f, std::span<const Residue> coeffs) const {
    if (coeffs.size() != basis_.size()) throw DimensionMismatch("coefficient count does not match dimension");
    SparseVector acc, scratch;
    for (std::size_t i = 0; i < coeffs.size(); ++i) sparse_axpy(f, acc, coeffs[i], basis_[i], scratch);
    return acc;
}

// ---------------------------------------------------------------- rref / nullspace

RrefResult rref(const Field& f, const FpMatrix& m) {
    Echelon e(f, m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) e.insert(m.row(r));
    Subspace s = e.to_subspace();
    const std::size_t rank = s.dim();
    return {std::move(s), rank};
}

Subspace kernel_from_rref(const Field& f, const Subspace& constraints) {
    const std::size_t n = constraints.ambient_dim();
    std::vector<char> is_pivot(n, 0);
    for (auto p : constraints.pivots()) is_pivot[p] = 1;
    // free column c -> kernel vector with 1 at c and -R[i][c] at pivot i
    std::vector<SparseVector> kernel(n);
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) kernel[c].push_back({static_cast<std::uint32_t>(c), 1});
    for (std::size_t i = 0; i < constraints.dim(); ++i)
        for (const auto& e : constraints.basis()[i])
            if (!is_pivot[e.col]) kernel[e.col].push_back({constraints.pivots()[i], f.neg(e.val)});
    Echelon out(f, n);
    for (auto& v : kernel) {
        if (v.empty()) continue;
        std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
        out.insert(std::move(v));
    }
    return out.to_subspace();
}

Subspace nullspace(const Field& f, const FpMatrix& m) { return kernel_from_rref(f, rref(f, m).row_space); }

std::optional<FpMatrix> inverse(const Field& f, const FpMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    // RREF of [M | I]; M is invertible iff the pivots are exactly the first n columns
    Echelon e(f, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        SparseVector row = m.row(r);
        row.push_back({static_cast<std::uint32_t>(n + r), 1});
        e.insert(std::move(row));
    }
    const Subspace s = e.to_subspace();
    if (s.dim() != n || (n > 0 && s.pivots().back() != n - 1)) return std::nullopt;
    FpMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (const auto& x : s.basis()[r])
            if (x.col >= n) inv.set(r, x.col - n, x.val);
    return inv;
}

StreamingNullspace::StreamingNullspace(const Field& f, std::size_t unknowns, ResourceGuard* guard)
    : field_(f), echelon_(f, unknowns), guard_(guard) {}

void StreamingNullspace::add_equation(SparseVector eq) {
    ++seen_;
    if (guard_ && (seen_ & 1023) == 0) guard_->check();
    std::erase_if(eq, [](const Entry& e) { return e.val == 0; });
    if (eq.empty()) return;
    // a full-rank echelon absorbs everything
    if (echelon_.rank() == echelon_.cols()) return;
    echelon_.insert(std::move(eq));
}

Subspace StreamingNullspace::solve() const { return kernel_from_rref(field_, echelon_.to_subspace()); }

// ---------------------------------------------------------------- subspace lattice

Subspace subspace_sum(const Field& f, const Subspace& u, const Subspace& v) {
    check_ambient(u, v);
    Echelon e(f, u.ambient_dim());
    for (const auto& r : u.basis()) e.insert(r);
    for (const auto& r : v.basis()) e.insert(r);
    return e.to_subspace();
}

Subspace subspace_intersect(const Field& f, const Subspace& u, const Subspace& v) {
    check_ambient(u, v);
    const std::size_t du = u.dim(), dv = v.dim();
    if (du == 0 || dv == 0) return Subspace(u.ambient_dim());
    // columns are u_1..u_du, -v_1..-v_dv; a kernel vector (a, b) gives sum a_i u_i in both spaces
    FpMatrix stacked(u.ambient_dim(), du + dv);
    for (std::size_t i = 0; i < du; ++i)
        for (const auto& e : u.basis()[i]) stacked.set(e.col, i, e.val);
    for (std::size_t j = 0; j < dv; ++j)
        for (const auto& e : v.basis()[j]) stacked.set(e.col, du + j, f.neg(e.val));
    const Subspace ker = nullspace(f, stacked);
    std::vector<SparseVector> gens;
    for (const auto& k : ker.basis()) {
        DenseVector a(du, 0);
        for (const auto& e : k)
            if (e.col < du) a[e.col] = e.val;
        gens.push_back(u.combine(f, a));
    }
    return Subspace::span(f, u.ambient_dim(), gens);
}

bool is_subspace_of(const Field& f, const Subspace& u, const Subspace& v) {
    check_ambient(u, v);
    return std::all_of(u.basis().begin(), u.basis().end(),
                       [&](const SparseVector& r) { return v.contains(f, r); });
}

Subspace complement_in(const Field& f, const Subspace& u, const Subspace& v) {
    check_ambient(u, v);
    if (!is_subspace_of(f, u, v)) throw ContainmentError("complement_in requires U to be contained in V");
    Echelon e(f, u.ambient_dim());
    for (const auto& r : v.basis()) e.insert(u.reduce(f, r));
    return e.to_subspace();
}

}  // namespace modlie
