#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "modlie/field.hpp"

namespace modlie {

struct Entry {
    std::uint32_t col;
    Residue val;
    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sorted by column, no stored zeros.
using SparseVector = std::vector<Entry>;
using DenseVector = std::vector<Residue>;

SparseVector to_sparse(std::span<const Residue> dense);
DenseVector to_dense(const SparseVector& v, std::size_t n);
Residue sparse_at(const SparseVector& v, std::uint32_t col) noexcept;

/// dst += factor * src. `scratch` is reused storage and is left in an unspecified state.
void sparse_axpy(const Field& f, SparseVector& dst, Residue factor, const SparseVector& src,
                 SparseVector& scratch);

/// Matrix over GF(p) stored as sorted sparse rows.
///
/// Used for endomorphisms of a Lie algebra: column l holds the image of the
/// l-th basis vector, so entry (k, l) is the coefficient of e_k in M e_l.
class FpMatrix {
  public:
    FpMatrix() = default;
    FpMatrix(std::size_t rows, std::size_t cols);

    static FpMatrix identity(std::size_t n);
    static FpMatrix from_dense(std::size_t rows, std::size_t cols,
                               const std::vector<std::vector<int>>& values, const Field& f);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept;
    bool is_zero() const noexcept { return nnz() == 0; }

    Residue at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, Residue v);
    void add_to(const Field& f, std::size_t r, std::size_t c, Residue v);

    const SparseVector& row(std::size_t r) const { return data_[r]; }
    void set_row(std::size_t r, SparseVector v);

    DenseVector column(std::size_t c) const;
    DenseVector apply(const Field& f, std::span<const Residue> x) const;
    Residue trace(const Field& f) const;

    /// Row-major flattening; entry (r, c) lands at r * cols + c.
    SparseVector flatten() const;
    static FpMatrix unflatten(const SparseVector& v, std::size_t rows, std::size_t cols);

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<SparseVector> data_;
};

FpMatrix multiply(const Field& f, const FpMatrix& a, const FpMatrix& b);
/// ab - ba
FpMatrix commutator(const Field& f, const FpMatrix& a, const FpMatrix& b);
/// a + s * b
FpMatrix add_scaled(const Field& f, const FpMatrix& a, Residue s, const FpMatrix& b);
FpMatrix scaled(const Field& f, const FpMatrix& a, Residue s);

}  // namespace modlie
