#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlie/field.hpp"
#include "modlie/lie_algebra.hpp"

namespace modlie {

/// Exponent tuple of a divided-power monomial x^(a), carrying the bounds
/// tau = (p^n_1 - 1, ..., p^n_m - 1) of the algebra it belongs to.
class MultiIndex {
  public:
    /// Throws InvalidArgument when some exponent is negative or above its bound.
    MultiIndex(std::vector<int> exponents, std::vector<int> bounds);
    /// nullopt for tuples outside [0, bounds]; such monomials are zero.
    static std::optional<MultiIndex> make(std::vector<int> exponents, std::vector<int> bounds);

    std::size_t size() const noexcept { return exps_.size(); }
    int operator[](std::size_t i) const { return exps_.at(i); }
    const std::vector<int>& exponents() const noexcept { return exps_; }
    const std::vector<int>& bounds() const noexcept { return bounds_; }
    int degree() const noexcept;
    bool is_zero_index() const noexcept;
    bool is_top() const noexcept { return exps_ == bounds_; }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  private:
    std::vector<int> exps_, bounds_;
};

/// Reversed-index lexicographic order: the last coordinate is most significant.
bool reversed_lex_less(const std::vector<int>& a, const std::vector<int>& b) noexcept;

/// Label such as "x1^2 x2", or "1" for the unit.
std::string monomial_label(const std::vector<int>& exps);

/// Element of O(m;n): position of x^(a) -> coefficient, no zero coefficients.
using DpElement = std::map<std::size_t, Residue>;

/// The divided power algebra O(m;n) over GF(p).
class DividedPowers {
  public:
    DividedPowers(unsigned p, std::vector<int> n);

    const Field& field() const noexcept { return field_; }
    unsigned prime() const noexcept { return field_.prime(); }
    std::size_t vars() const noexcept { return n_.size(); }
    const std::vector<int>& heights() const noexcept { return n_; }
    const std::vector<int>& bounds() const noexcept { return tau_; }
    std::size_t dim() const noexcept { return dim_; }

    MultiIndex index(std::vector<int> exps) const { return MultiIndex(std::move(exps), tau_); }
    std::optional<MultiIndex> try_index(std::vector<int> exps) const;
    /// Mixed-radix position, first coordinate least significant.
    std::size_t position(const MultiIndex& a) const;
    MultiIndex at(std::size_t pos) const;

    /// x^(a) x^(b) = C(a+b, b) x^(a+b); nullopt when the product vanishes.
    std::optional<std::pair<Residue, MultiIndex>> multiply(const MultiIndex& a, const MultiIndex& b) const;
    /// d_i x^(a) = x^(a - e_i); nullopt when a_i = 0.
    std::optional<MultiIndex> partial(std::size_t i, const MultiIndex& a) const;

    DpElement monomial(const MultiIndex& a, Residue c = 1) const;
    DpElement multiply(const DpElement& f, const DpElement& g) const;
    DpElement partial(std::size_t i, const DpElement& f) const;
    void add_term(DpElement& f, std::size_t pos, Residue c) const;

  private:
    void check(const MultiIndex& a) const;

    Field field_;
    std::vector<int> n_, tau_;
    std::size_t dim_;
};

/// sum c * x^(a) d_i, keyed by (position of a, direction i).
using WittElement = std::map<std::pair<std::size_t, std::size_t>, Residue>;

/// (sum f_i d_i)(g) = sum f_i d_i(g)
DpElement apply_vector_field(const DividedPowers& o, const WittElement& x, const DpElement& g);
/// Commutator of vector fields: [X, Y] = sum_j (X(g_j) - Y(f_j)) d_j.
WittElement vector_field_bracket(const DividedPowers& o, const WittElement& x, const WittElement& y);
void add_term(const Field& f, WittElement& x, std::size_t pos, std::size_t dir, Residue c);

struct WittBasisElement {
    MultiIndex monomial;
    std::size_t direction;
};

/// Basis of W(m;n) ordered by (|a|, reversed-index lex of a, direction).
std::vector<WittBasisElement> witt_basis(const DividedPowers& o);

/// Generalized Jacobson-Witt algebra W(m;n), graded by a - e_i in Z^m.
LieAlgebra witt_algebra(std::size_t m, const std::vector<int>& n, unsigned p);

}  // namespace modlie
