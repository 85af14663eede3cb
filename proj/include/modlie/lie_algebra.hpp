#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modlie/field.hpp"
#include "modlie/linalg.hpp"
#include "modlie/matrix.hpp"

namespace modlie {

/// Degree of a basis vector in a Z^k grading that the bracket respects.
using Weight = std::vector<int>;

/// Finite-dimensional Lie algebra over GF(p) given by structure constants.
///
/// Only brackets [e_i, e_j] with i < j are stored; the rest follow from
/// antisymmetry. An optional grading assigns each basis vector a weight with
/// [g_a, g_b] contained in g_{a+b}; the derivation solver uses it to split
/// the Leibniz system into independent blocks.
class LieAlgebra {
  public:
    const Field& field() const noexcept { return field_; }
    unsigned prime() const noexcept { return field_.prime(); }
    std::size_t dim() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::optional<std::vector<Weight>>& grading() const noexcept { return grading_; }

    /// [e_i, e_j] as a sparse coefficient vector.
    SparseVector bracket_basis(std::size_t i, std::size_t j) const;
    /// Stored constants of [e_i, e_j] for i < j, without copying.
    const SparseVector& structure(std::size_t i, std::size_t j) const {
        if (i >= j || j >= dim()) throw DimensionMismatch("structure(i, j) needs i < j < dim");
        return upper(i, j);
    }
    SparseVector bracket(const SparseVector& x, const SparseVector& y) const;
    DenseVector bracket(std::span<const Residue> x, std::span<const Residue> y) const;
    /// Column k of the result is [x, e_k].
    FpMatrix adjoint(const SparseVector& x) const;
    FpMatrix adjoint_basis(std::size_t i) const;

    bool is_abelian() const noexcept;
    std::size_t nonzero_pairs() const noexcept;

    /// Equal structure constants, ignoring labels and grading.
    bool same_structure(const LieAlgebra& other) const noexcept;
    friend bool operator==(const LieAlgebra&, const LieAlgebra&) = default;

  private:
    friend class LieAlgebraBuilder;
    LieAlgebra(Field f) : field_(f) {}
    const SparseVector& upper(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }

    Field field_;
    std::vector<std::string> labels_;
    std::vector<SparseVector> table_;  // dim * dim, entries with i < j used
    std::optional<std::vector<Weight>> grading_;
};

class LieAlgebraBuilder {
  public:
    /// Throws DegenerateAlgebra for an empty basis and InvalidArgument for duplicate labels.
    LieAlgebraBuilder(const Field& f, std::vector<std::string> labels);

    std::size_t dim() const noexcept { return algebra_.labels_.size(); }
    const Field& field() const noexcept { return algebra_.field_; }

    /// Sets [e_i, e_j] = value (and implicitly [e_j, e_i] = -value).
    LieAlgebraBuilder& set_bracket(std::size_t i, std::size_t j, SparseVector value);
    LieAlgebraBuilder& add_to_bracket(std::size_t i, std::size_t j, std::size_t k, Residue c);
    /// Fails at build() if some nonzero constant violates the grading.
    LieAlgebraBuilder& set_grading(std::vector<Weight> weights);

    LieAlgebra build() &&;

  private:
    LieAlgebra algebra_;
};

// ---------------------------------------------------------------- analysis

struct JacobiViolation {
    std::size_t i, j, k;
    SparseVector residual;
};

/// All basis triples i < j < k on which the Jacobi identity fails.
std::vector<JacobiViolation> validate_lie(const LieAlgebra& l);

/// span{[u, v] : u in basis(a), v in basis(b)}
Subspace bracket_span(const LieAlgebra& l, const Subspace& a, const Subspace& b);

/// L = L^(0) ⊇ L^(1) ⊇ ... ; stops at zero or at the first repeated term,
/// which is included once so a stationary series reads e.g. (7, 7).
std::vector<Subspace> derived_series(const LieAlgebra& l);
std::vector<Subspace> lower_central_series(const LieAlgebra& l);
std::vector<std::size_t> series_dims(const std::vector<Subspace>& series);

bool is_solvable_series(const std::vector<std::size_t>& dims) noexcept;
/// Number of strict steps to zero, or nullopt for a non-solvable series.
std::optional<std::size_t> derived_length(const std::vector<std::size_t>& dims) noexcept;

Subspace center(const LieAlgebra& l);
/// Smallest ideal containing S.
Subspace ideal_closure(const LieAlgebra& l, const Subspace& s);

enum class Simplicity { NotSimple, ProbablySimple, Abelian, Skipped };
const char* to_string(Simplicity s) noexcept;

struct SimplicityResult {
    Simplicity verdict;
    std::optional<Subspace> witness;  // a proper nonzero ideal when NotSimple
    std::string reason;
};

inline constexpr std::size_t kDefaultProbeTrials = 32;
inline constexpr std::uint64_t kDefaultProbeSeed = 0x5eed3;

/// One-sided Monte Carlo: NotSimple verdicts carry a verified ideal, while
/// ProbablySimple only means no ideal turned up among basis and random spins.
SimplicityResult simplicity_probe(const LieAlgebra& l, std::size_t trials = kDefaultProbeTrials,
                                  std::uint64_t seed = kDefaultProbeSeed);

// ---------------------------------------------------------------- basis changes

/// New basis e'_i = e_{perm[i]}. Labels and weights follow their vectors.
LieAlgebra permute_basis(const LieAlgebra& l, std::span<const std::size_t> perm);
/// New basis e'_i = sum_k P(k, i) e_k for invertible P; grading is dropped.
LieAlgebra change_basis(const LieAlgebra& l, const FpMatrix& p);

// ---------------------------------------------------------------- text format

inline constexpr int kAlgebraFormatVersion = 1;

struct AlgebraDocument {
    LieAlgebra algebra;
    std::map<std::string, std::string> meta;
};

void write_algebra(std::ostream& os, const LieAlgebra& l, const std::map<std::string, std::string>& meta = {});
std::string to_text(const LieAlgebra& l, const std::map<std::string, std::string>& meta = {});
AlgebraDocument read_algebra(std::istream& is);
AlgebraDocument from_text(const std::string& text);

}  // namespace modlie
