#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "modlie/field.hpp"
#include "modlie/matrix.hpp"
#include "modlie/resources.hpp"

namespace modlie {

/// Rows wider than this are stored sparse inside Echelon; narrower ones dense.
inline constexpr std::size_t kDenseThreshold = 512;

class Subspace;

/// Incremental row reduction. Rows are kept in semi-echelon form (distinct
/// leading columns, leading entry 1); `to_subspace` produces the reduced
/// row-echelon form, which is unique for the spanned space.
class Echelon {
  public:
    Echelon(const Field& field, std::size_t cols);

    /// Reduces `row` against the current rows and keeps the remainder if nonzero.
    bool insert(SparseVector row);
    bool insert_dense(std::span<const Residue> row);
    bool contains(SparseVector row) const;

    std::size_t rank() const noexcept { return dense_ ? dense_rows_.size() : sparse_rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    bool dense_mode() const noexcept { return dense_; }
    std::size_t approx_bytes() const noexcept;

    Subspace to_subspace() const;

  private:
    void reduce_dense(DenseVector& buf) const;
    void reduce_sparse(SparseVector& v) const;

    Field field_;
    std::size_t cols_;
    bool dense_;
    std::vector<std::int32_t> pivot_row_;  // column -> row index, or -1
    std::vector<DenseVector> dense_rows_;
    std::vector<SparseVector> sparse_rows_;
};

/// Subspace of GF(p)^ambient held as its reduced row-echelon basis.
class Subspace {
  public:
    explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

    static Subspace full(std::size_t ambient);
    static Subspace span(const Field& f, std::size_t ambient, const std::vector<SparseVector>& gens);
    static Subspace span_dense(const Field& f, std::size_t ambient, const std::vector<DenseVector>& gens);
    /// Adopts rows that are already in reduced row-echelon form; throws ParseError otherwise.
    static Subspace from_rref(std::size_t ambient, std::vector<SparseVector> rows);

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    bool is_zero() const noexcept { return basis_.empty(); }
    const std::vector<SparseVector>& basis() const noexcept { return basis_; }
    const std::vector<std::uint32_t>& pivots() const noexcept { return pivots_; }

    /// v minus its combination of basis rows at the pivot columns; the result
    /// vanishes at every pivot column and is zero iff v lies in the subspace.
    SparseVector reduce(const Field& f, SparseVector v) const;
    bool contains(const Field& f, const SparseVector& v) const;
    /// Coordinates of v in this basis, or nullopt if v is not a member.
    std::optional<DenseVector> coordinates(const Field& f, const SparseVector& v) const;
    /// Coordinates read off at pivot columns, without a membership check.
    DenseVector pivot_coordinates(const SparseVector& v) const;
    SparseVector combine(const Field& f, std::span<const Residue> coeffs) const;

    friend bool operator==(const Subspace&, const Subspace&) = default;

  private:
    friend class Echelon;
    std::size_t ambient_;
    std::vector<SparseVector> basis_;
    std::vector<std::uint32_t> pivots_;
};

struct RrefResult {
    Subspace row_space;
    std::size_t rank;
};

RrefResult rref(const Field& f, const FpMatrix& m);
/// Right kernel {v : M v = 0}.
Subspace nullspace(const Field& f, const FpMatrix& m);
/// Inverse of a square matrix, or nullopt when singular.
std::optional<FpMatrix> inverse(const Field& f, const FpMatrix& m);

/// Kernel of a linear system whose equations arrive one at a time. Each
/// equation is reduced against the current echelon and then dropped, so
/// memory is bounded by unknowns x rank.
class StreamingNullspace {
  public:
    StreamingNullspace(const Field& f, std::size_t unknowns, ResourceGuard* guard = nullptr);

    /// `eq` must be sorted by column without duplicates; zero entries are ignored.
    void add_equation(SparseVector eq);
    std::size_t rank() const noexcept { return echelon_.rank(); }
    std::size_t unknowns() const noexcept { return echelon_.cols(); }
    std::uint64_t equations_seen() const noexcept { return seen_; }

    Subspace solve() const;

  private:
    Field field_;
    Echelon echelon_;
    ResourceGuard* guard_;
    std::uint64_t seen_ = 0;
};

Subspace kernel_from_rref(const Field& f, const Subspace& constraints);

Subspace subspace_sum(const Field& f, const Subspace& u, const Subspace& v);
Subspace subspace_intersect(const Field& f, const Subspace& u, const Subspace& v);
bool is_subspace_of(const Field& f, const Subspace& u, const Subspace& v);
/// W with U (+) W = V. W is the echelonized span of V's basis reduced modulo U,
/// so every W vector vanishes on U's pivot columns.
Subspace complement_in(const Field& f, const Subspace& u, const Subspace& v);

}  // namespace modlie
