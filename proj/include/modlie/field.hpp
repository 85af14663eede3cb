#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modlie/error.hpp"

namespace modlie {

/// A residue in {0, ..., p-1}. The modulus travels with the Field, not the value.
using Residue = std::uint8_t;

/// Prime field GF(p) for 2 <= p <= 251 with table-driven multiply and inverse.
class Field {
  public:
    static constexpr unsigned kMaxPrime = 251;

    explicit Field(unsigned p);

    unsigned prime() const noexcept { return p_; }

    Residue reduce(std::int64_t v) const noexcept {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<Residue>(r < 0 ? r + p_ : r);
    }
    Residue add(Residue a, Residue b) const noexcept {
        unsigned s = unsigned(a) + b;
        return static_cast<Residue>(s >= p_ ? s - p_ : s);
    }
    Residue sub(Residue a, Residue b) const noexcept {
        return static_cast<Residue>(a >= b ? a - b : a + p_ - b);
    }
    Residue neg(Residue a) const noexcept { return static_cast<Residue>(a == 0 ? 0 : p_ - a); }
    Residue mul(Residue a, Residue b) const noexcept { return mul_[std::size_t(a) * p_ + b]; }
    /// Throws DivisionByZero for a == 0.
    Residue inv(Residue a) const;

    /// Row of the multiplication table for a fixed left factor.
    const Residue* mul_row(Residue a) const noexcept { return mul_.data() + std::size_t(a) * p_; }

    /// dst += factor * src, elementwise.
    void axpy(std::span<Residue> dst, Residue factor, std::span<const Residue> src) const noexcept;
    void scale(std::span<Residue> v, Residue factor) const noexcept;

    friend bool operator==(const Field& a, const Field& b) noexcept { return a.p_ == b.p_; }

  private:
    unsigned p_;
    std::vector<Residue> mul_;
    std::vector<Residue> inv_;
};

bool is_prime(unsigned n) noexcept;

/// C(a, b) mod p through the base-p digits of a and b; zero when b > a.
Residue lucas_binom(std::uint64_t a, std::uint64_t b, unsigned p) noexcept;

/// Componentwise product of lucas_binom over two equal-length tuples.
Residue lucas_binom(std::span<const int> a, std::span<const int> b, unsigned p) noexcept;

}  // namespace modlie
