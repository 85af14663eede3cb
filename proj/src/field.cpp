#include "modlie/field.hpp"

#include <string>

namespace modlie {

bool is_prime(unsigned n) noexcept {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(unsigned p) : p_(p) {
    if (!is_prime(p) || p > kMaxPrime)
        throw InvalidArgument("modulus must be a prime in [2, 251], got " + std::to_string(p));
    mul_.resize(std::size_t(p) * p);
    inv_.assign(p, 0);
    for (unsigned a = 0; a < p; ++a)
        for (unsigned b = 0; b < p; ++b) {
            unsigned m = (a * b) % p;
            mul_[std::size_t(a) * p + b] = static_cast<Residue>(m);
            if (m == 1) inv_[a] = static_cast<Residue>(b);
        }
}

Residue Field::inv(Residue a) const {
    if (a == 0) throw DivisionByZero();
    return inv_[a];
}

void Field::axpy(std::span<Residue> dst, Residue factor, std::span<const Residue> src) const noexcept {
    if (factor == 0) return;
    const Residue* row = mul_row(factor);
    const std::size_t n = dst.size();
    for (std::size_t j = 0; j < n; ++j) {
        unsigned s = unsigned(dst[j]) + row[src[j]];
        dst[j] = static_cast<Residue>(s >= p_ ? s - p_ : s);
    }
}

void Field::scale(std::span<Residue> v, Residue factor) const noexcept {
    const Residue* row = mul_row(factor);
    for (auto& x : v) x = row[x];
}

Residue lucas_binom(std::uint64_t a, std::uint64_t b, unsigned p) noexcept {
    if (b > a) return 0;
    std::uint64_t result = 1;
    while (b > 0) {
        const unsigned ad = unsigned(a % p), bd = unsigned(b % p);
        if (bd > ad) return 0;
        // small binomial C(ad, bd) with ad < p, computed exactly then reduced
        std::uint64_t num = 1, den = 1;
        for (unsigned t = 0; t < bd; ++t) {
            num = num * (ad - t) % p;
            den = den * (t + 1) % p;
        }
        // den is a product of values < p, hence invertible; Fermat inverse
        std::uint64_t inv = 1, base = den, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        result = result * (num * inv % p) % p;
        a /= p;
        b /= p;
    }
    return static_cast<Residue>(result);
}

Residue lucas_binom(std::span<const int> a, std::span<const int> b, unsigned p) noexcept {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || b[i] < 0) return 0;
        result = result * lucas_binom(std::uint64_t(a[i]), std::uint64_t(b[i]), p) % p;
        if (result == 0) return 0;
    }
    return static_cast<Residue>(result);
}

}  // namespace modlie
