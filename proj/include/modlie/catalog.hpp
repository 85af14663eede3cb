#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "modlie/derout.hpp"
#include "modlie/lie_algebra.hpp"

namespace modlie {

struct SlPsl {
    LieAlgebra algebra;
    /// Set when the projective quotient was requested but the center is zero.
    std::optional<std::string> warning;
};

/// sl_n in the basis E(i,j) (i != j, row-major) followed by
/// H(i) = E(i,i) - E(i+1,i+1); psl_n divides out the scalars when p | n.
SlPsl sl_psl(std::size_t n, unsigned p, bool projective);

/// L / Z(L) on the basis vectors at the non-pivot columns of the center.
/// Throws DegenerateAlgebra when L is abelian.
LieAlgebra quotient_by_center(const LieAlgebra& l);

/// Brown's 8-dimensional algebra over GF(3), basis (K12, K21, K13, K31, K23, K32, H, K).
LieAlgebra brown8();
LieAlgebra heisenberg(unsigned p);
LieAlgebra abelian(std::size_t k, unsigned p);

enum class ModelKind { Sl2SemiV2, H3RtimesLine, AlmostAbelian };
enum class ModelAction { Identity, FlipLast };

struct ModelSpec {
    ModelKind kind = ModelKind::Sl2SemiV2;
    /// Extra abelian direct summands.
    std::size_t k = 0;
    /// AlmostAbelian only: dimension of the abelian ideal and the action on it.
    std::size_t ideal_dim = 0;
    ModelAction action = ModelAction::Identity;
};

/// Reference algebras for Out, over GF(3):
///  - Sl2SemiV2: sl2 ⋉ V(2) on e1..e5 plus z1..zk;
///  - H3RtimesLine: h3 = <e1,e2,e3> with e4 acting as diag(1,1,-1), plus z1..zk;
///  - AlmostAbelian: F^m ⋊ F, the last ideal vector flipped for FlipLast, plus z1..zk.
LieAlgebra model_out_algebra(const ModelSpec& spec);
ModelKind parse_model_kind(const std::string& s);
ModelAction parse_model_action(const std::string& s);
const char* to_string(ModelKind k) noexcept;

struct InvariantProfile {
    std::size_t dim = 0;
    std::vector<std::size_t> derived;
    std::vector<std::size_t> lower_central;
    std::size_t center = 0;
    std::size_t der = 0;
    std::size_t out = 0;
    friend bool operator==(const InvariantProfile&, const InvariantProfile&) = default;
};

InvariantProfile invariant_profile(const LieAlgebra& l, const DerivationOptions& opts = {});
/// nullopt on a match, otherwise the name of the first differing field.
std::optional<std::string> compare(const InvariantProfile& a, const InvariantProfile& b);

}  // namespace modlie
