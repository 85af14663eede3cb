#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modlie/hamiltonian.hpp"
#include "modlie/lie_algebra.hpp"
#include "modlie/linalg.hpp"
#include "modlie/matrix.hpp"
#include "modlie/resources.hpp"

namespace modlie {

inline constexpr const char* kCodeVersion = "0.1.0";
/// Recorded in reports: Out is spanned by the Der basis vectors at the
/// non-pivot coordinates of Inn.
inline constexpr const char* kComplementRule = "pivot-free-v1";

struct LeibnizDefect {
    std::size_t i, j;
    SparseVector residual;  // M[e_i,e_j] - [M e_i, e_j] - [e_i, M e_j]
};

/// nullopt when M is a derivation; otherwise the first failing pair i < j.
std::optional<LeibnizDefect> leibniz_defect(const LieAlgebra& l, const FpMatrix& m);
bool is_derivation(const LieAlgebra& l, const FpMatrix& m);

struct DerivationOptions {
    /// Worker threads for the block solver; 0 picks the hardware concurrency.
    unsigned threads = 0;
    ResourceGuard* guard = nullptr;
    /// When both are set, Der bases are read from and written to this cache.
    std::optional<std::filesystem::path> cache_dir;
    std::string cache_key;
};

struct DerivationStats {
    std::size_t blocks = 0;
    std::size_t unknowns = 0;
    std::uint64_t equations = 0;
    unsigned threads = 1;
    bool cache_hit = false;
    double seconds = 0.0;
};

/// Der(L) as a subspace of the dim^2 flattened endomorphisms (entry (k, l)
/// at k * dim + l), together with Inn(L) in Der coordinates.
class DerivationAlgebra {
  public:
    DerivationAlgebra(LieAlgebra base, Subspace der);

    const LieAlgebra& base() const noexcept { return base_; }
    std::size_t dim() const noexcept { return der_.dim(); }
    const Subspace& space() const noexcept { return der_; }
    FpMatrix map(std::size_t k) const;

    /// Der coordinates of M, or nullopt if M is not a derivation.
    std::optional<DenseVector> coordinates(const FpMatrix& m) const;
    /// Coordinates read at the Der pivots; valid only for members.
    DenseVector member_coordinates(const SparseVector& flat) const { return der_.pivot_coordinates(flat); }

    /// span of ad(e_i) in Der coordinates.
    const Subspace& inn() const noexcept { return inn_; }
    /// Der as a Lie algebra under the commutator, in the echelon basis.
    LieAlgebra as_lie() const;

    DerivationStats stats;

  private:
    LieAlgebra base_;
    Subspace der_;
    Subspace inn_;
};

DerivationAlgebra derivation_algebra(const LieAlgebra& l, const DerivationOptions& opts = {});
inline const Subspace& inner_derivations(const DerivationAlgebra& d) { return d.inn(); }

/// Der(L)/Inn(L), represented on the Der basis vectors at the non-pivot
/// coordinates of Inn.
class OutAlgebra {
  public:
    explicit OutAlgebra(const DerivationAlgebra& der);

    std::size_t dim() const noexcept { return reps_.size(); }
    /// Der basis indices of the representatives.
    const std::vector<std::size_t>& representatives() const noexcept { return reps_; }
    FpMatrix representative(std::size_t k) const { return der_->map(reps_.at(k)); }
    /// Empty for dim 0.
    const std::optional<LieAlgebra>& lie() const noexcept { return lie_; }

    /// Out coordinates of the class of M; throws InvalidArgument unless M is a derivation.
    DenseVector project(const FpMatrix& m) const;
    bool is_inner(const FpMatrix& m) const;

  private:
    DenseVector project_der(const DenseVector& der_coords) const;

    const DerivationAlgebra* der_;
    std::vector<std::size_t> reps_;
    std::optional<LieAlgebra> lie_;
};

/// Holds a pointer to `der`, which must outlive the result.
inline OutAlgebra outer_algebra(const DerivationAlgebra& der) { return OutAlgebra(der); }

/// Out structure constants in the basis formed by the classes of `gens`.
/// Throws InvalidArgument if those classes are not a basis of Out.
LieAlgebra out_in_generators(const OutAlgebra& out, const std::vector<NamedMap>& gens);

// ---------------------------------------------------------------- cache

/// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view data) noexcept;
std::uint64_t structure_hash(const LieAlgebra& l);

/// Reads a cached Der basis; any mismatch in key, version, structure or
/// shape counts as a miss.
std::optional<Subspace> load_der_cache(const std::filesystem::path& dir, const std::string& key,
                                       std::uint64_t structure, std::size_t ambient);
/// Writes atomically (temp file + rename) under an advisory lock.
void store_der_cache(const std::filesystem::path& dir, const std::string& key, std::uint64_t structure,
                     const Subspace& der);
std::filesystem::path der_cache_file(const std::filesystem::path& dir, const std::string& key);

}  // namespace modlie
