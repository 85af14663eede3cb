#include "modlie/matrix.hpp"

#include <algorithm>
#include <string>

namespace modlie {

SparseVector to_sparse(std::span<const Residue> dense) {
    SparseVector out;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i]) out.push_back({static_cast<std::uint32_t>(i), dense[i]});
    return out;
}

DenseVector to_dense(const SparseVector& v, std::size_t n) {
    DenseVector out(n, 0);
    for (const auto& e : v) out[e.col] = e.val;
    return out;
}

Residue sparse_at(const SparseVector& v, std::uint32_t col) noexcept {
    auto it = std::lower_bound(v.begin(), v.end(), col,
                               [](const Entry& e, std::uint32_t c) { return e.col < c; });
    return (it != v.end() && it->col == col) ? it->val : Residue{0};
}

void sparse_axpy(const Field& f, SparseVector& dst, Residue factor, const SparseVector& src,
                 SparseVector& scratch) {
    if (factor == 0 || src.empty()) return;
    scratch.clear();
    scratch.reserve(dst.size() + src.size());
    const Residue* mrow = f.mul_row(factor);
    auto a = dst.begin(), ae = dst.end();
    auto b = src.begin(), be = src.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->col < b->col)) {
            scratch.push_back(*a++);
        } else if (a == ae || b->col < a->col) {
            scratch.push_back({b->col, mrow[b->val]});
            ++b;
        } else {
            Residue s = f.add(a->val, mrow[b->val]);
            if (s) scratch.push_back({a->col, s});
            ++a;
            ++b;
        }
    }
    dst.swap(scratch);
}

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

FpMatrix FpMatrix::identity(std::size_t n) {
    FpMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({static_cast<std::uint32_t>(i), 1});
    return m;
}

FpMatrix FpMatrix::from_dense(std::size_t rows, std::size_t cols,
                              const std::vector<std::vector<int>>& values, const Field& f) {
    if (values.size() != rows) throw DimensionMismatch("row count mismatch in from_dense");
    FpMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (values[r].size() != cols) throw DimensionMismatch("column count mismatch in from_dense");
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, f.reduce(values[r][c]));
    }
    return m;
}

std::size_t FpMatrix::nnz() const noexcept {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
}

Residue FpMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw DimensionMismatch("matrix index out of range");
    return sparse_at(data_[r], static_cast<std::uint32_t>(c));
}

void FpMatrix::set(std::size_t r, std::size_t c, Residue v) {
    if (r >= rows_ || c >= cols_) throw DimensionMismatch("matrix index out of range");
    auto& row = data_[r];
    const auto col = static_cast<std::uint32_t>(c);
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const Entry& e, std::uint32_t x) { return e.col < x; });
    if (it != row.end() && it->col == col) {
        if (v) it->val = v;
        else row.erase(it);
    } else if (v) {
        row.insert(it, {col, v});
    }
}

void FpMatrix::add_to(const Field& f, std::size_t r, std::size_t c, Residue v) {
    if (v == 0) return;
    set(r, c, f.add(at(r, c), v));
}

void FpMatrix::set_row(std::size_t r, SparseVector v) {
    if (r >= rows_) throw DimensionMismatch("row index out of range");
    if (!v.empty() && v.back().col >= cols_) throw DimensionMismatch("row entry beyond column count");
    data_[r] = std::move(v);
}

DenseVector FpMatrix::column(std::size_t c) const {
    DenseVector out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

DenseVector FpMatrix::apply(const Field& f, std::span<const Residue> x) const {
    if (x.size() != cols_) throw DimensionMismatch("vector length does not match matrix columns");
    DenseVector out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        Residue acc = 0;
        for (const auto& e : data_[r]) acc = f.add(acc, f.mul(e.val, x[e.col]));
        out[r] = acc;
    }
    return out;
}

Residue FpMatrix::trace(const Field& f) const {
    Residue t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t = f.add(t, at(i, i));
    return t;
}

SparseVector FpMatrix::flatten() const {
    SparseVector out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            out.push_back({static_cast<std::uint32_t>(r * cols_ + e.col), e.val});
    return out;
}

FpMatrix FpMatrix::unflatten(const SparseVector& v, std::size_t rows, std::size_t cols) {
    FpMatrix m(rows, cols);
    for (const auto& e : v) {
        const std::size_t r = e.col / cols;
        if (r >= rows) throw DimensionMismatch("flattened index beyond matrix size");
        m.data_[r].push_back({static_cast<std::uint32_t>(e.col % cols), e.val});
    }
    return m;
}

FpMatrix multiply(const Field& f, const FpMatrix& a, const FpMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
    FpMatrix out(a.rows(), b.cols());
    SparseVector acc, scratch;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        acc.clear();
        for (const auto& e : a.row(r)) sparse_axpy(f, acc, e.val, b.row(e.col), scratch);
        out.set_row(r, acc);
    }
    return out;
}

FpMatrix add_scaled(const Field& f, const FpMatrix& a, Residue s, const FpMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum shape mismatch");
    FpMatrix out = a;
    SparseVector row, scratch;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        row = a.row(r);
        sparse_axpy(f, row, s, b.row(r), scratch);
        out.set_row(r, row);
    }
    return out;
}

FpMatrix scaled(const Field& f, const FpMatrix& a, Residue s) {
    return add_scaled(f, FpMatrix(a.rows(), a.cols()), s, a);
}

FpMatrix commutator(const Field& f, const FpMatrix& a, const FpMatrix& b) {
    return add_scaled(f, multiply(f, a, b), f.neg(1), multiply(f, b, a));
}

}  // namespace modlie
