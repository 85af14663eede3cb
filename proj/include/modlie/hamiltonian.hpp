#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlie/divided_power.hpp"
#include "modlie/lie_algebra.hpp"
#include "modlie/matrix.hpp"

namespace modlie {

/// sigma(i) = +1 for i < r and -1 otherwise; i' = i + r or i - r (0-based).
struct SigmaPrime {
    std::size_t r;
    int sigma(std::size_t i) const noexcept { return i < r ? 1 : -1; }
    std::size_t prime(std::size_t i) const noexcept { return i < r ? i + r : i - r; }
};

/// D_H(x^(a)) = sum_i sigma(i) d_i(x^(a)) d_{i'} as a vector field on O(2r;n).
WittElement d_h(const DividedPowers& o, const MultiIndex& a);

/// Coefficient of [D_H(x1^a x2^b), D_H(x1^c x2^d)] = f * D_H(x1^(a+c-1) x2^(b+d-1)).
Residue f_coeff(int a, int b, int c, int d, unsigned p);

/// H(2r;n)^(2) with basis D_H(x^(a)), 0 < a < tau, in reversed-index lex order.
class HamiltonianAlgebra {
  public:
    enum class Method { Oracle, ClosedForm };

    /// Throws InvalidArgument for r = 0, a wrong-length n, or ClosedForm with r > 1.
    HamiltonianAlgebra(std::size_t r, std::vector<int> n, unsigned p, Method method = Method::Oracle);

    const LieAlgebra& algebra() const noexcept { return algebra_; }
    const DividedPowers& divided_powers() const noexcept { return o_; }
    const Field& field() const noexcept { return o_.field(); }
    std::size_t r() const noexcept { return r_; }
    const std::vector<int>& n() const noexcept { return o_.heights(); }
    unsigned prime() const noexcept { return o_.prime(); }
    const std::vector<int>& tau() const noexcept { return o_.bounds(); }
    std::size_t dim() const noexcept { return algebra_.dim(); }

    const std::vector<int>& exponents(std::size_t basis_index) const;
    /// Basis index of D_H(x^(a)); nullopt when a is out of range, 0 or tau.
    std::optional<std::size_t> index_of(const std::vector<int>& a) const;
    SparseVector element(const std::vector<int>& a) const;

    /// Bracket table entry computed through the vector-field action.
    SparseVector oracle_bracket(std::size_t i, std::size_t j) const;

    /// Endomorphism given by D_H(x^a) -> c * D_H(x^target); targets outside
    /// the basis contribute nothing.
    using Rule = std::function<std::optional<std::pair<int, std::vector<int>>>(const std::vector<int>&)>;
    FpMatrix map_from_rule(const Rule& rule) const;

    /// ad D_H(x^(c)) computed in H(2r; n + 1) and restricted to this algebra.
    /// Throws InvalidArgument if the result leaves the embedded subalgebra.
    FpMatrix restricted_adjoint(const std::vector<int>& c) const;

  private:
    LieAlgebra build_table(Method method) const;

    std::size_t r_;
    DividedPowers o_;
    std::vector<std::vector<int>> exps_;
    LieAlgebra algebra_;
};

struct Sl2Triple {
    FpMatrix e, f, h;
};
/// E, F, H on H(2;(1,n))^(2) at p = 3.
Sl2Triple sl2_triple(const HamiltonianAlgebra& g);

struct TranslationPair {
    FpMatrix v, w;
};
/// V, W on H(2;(1,n))^(2) at p = 3; requires n >= 2. They are the
/// restrictions of ad D_H(x2^(3^n)) and ad D_H(x1^2 x2^(3^n-1)), so
/// V(D_H(x1^a)) = -D_H(x1^(a-1) x2^(3^n-1)).
TranslationPair translation_pair(const HamiltonianAlgebra& g);

/// D_H(x^a) -> D_H(x^(a - p^j e_var)), the action of d_var^(p^j).
FpMatrix partial_power_map(const HamiltonianAlgebra& g, std::size_t var, int j);

struct NamedMap {
    std::string name;
    FpMatrix map;
};

struct OutFamily {
    std::vector<NamedMap> a;  // A_1 .. A_2r
    NamedMap b, c;
    std::vector<NamedMap> d;  // D_{i,j} for 0 < j < n_i, ordered by (i, j)
    struct DIndex {
        std::size_t var;
        int j;
    };
    std::vector<DIndex> d_index;
    /// A_1..A_2r, B, C, then the D maps.
    std::vector<NamedMap> all() const;
};

/// Outer derivation representatives for p = 3 and either r > 1 or r = 1 with
/// 1 < n_1 <= n_2.
OutFamily general_out_family(const HamiltonianAlgebra& g);

}  // namespace modlie
