#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "modlie/lie_algebra.hpp"
#include "modlie/linalg.hpp"
#include "modlie/matrix.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline modlie::SparseVector random_sparse(Rng& rng, const modlie::Field& f, std::size_t n, double density) {
    std::bernoulli_distribution keep(density);
    std::uniform_int_distribution<unsigned> val(1, f.prime() - 1);
    modlie::SparseVector v;
    for (std::size_t c = 0; c < n; ++c)
        if (keep(rng)) v.push_back({std::uint32_t(c), modlie::Residue(val(rng))});
    return v;
}

inline modlie::FpMatrix random_matrix(Rng& rng, const modlie::Field& f, std::size_t rows, std::size_t cols,
                                      double density) {
    modlie::FpMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.set_row(r, random_sparse(rng, f, cols, density));
    return m;
}

/// Matrix of low rank: a product of random rows x k and k x cols factors.
inline modlie::FpMatrix random_low_rank(Rng& rng, const modlie::Field& f, std::size_t rows, std::size_t cols,
                                        std::size_t k) {
    return modlie::multiply(f, random_matrix(rng, f, rows, k, 0.6), random_matrix(rng, f, k, cols, 0.6));
}

inline modlie::Subspace random_subspace(Rng& rng, const modlie::Field& f, std::size_t ambient, std::size_t gens,
                                        double density) {
    std::vector<modlie::SparseVector> g;
    for (std::size_t i = 0; i < gens; ++i) g.push_back(random_sparse(rng, f, ambient, density));
    return modlie::Subspace::span(f, ambient, g);
}

inline std::vector<std::size_t> shuffled_identity(Rng& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

/// Random invertible matrix: identity plus a random strictly upper part, conjugated by a permutation.
inline modlie::FpMatrix random_invertible(Rng& rng, const modlie::Field& f, std::size_t n) {
    std::uniform_int_distribution<unsigned> val(0, f.prime() - 1);
    std::uniform_int_distribution<unsigned> unit(1, f.prime() - 1);
    const auto perm = shuffled_identity(rng, n);
    modlie::FpMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(perm[i], perm[i], modlie::Residue(unit(rng)));
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng() % 3 == 0) m.set(perm[i], perm[j], modlie::Residue(val(rng)));
    }
    return m;
}

inline bool is_zero_dense(const modlie::DenseVector& v) {
    return std::all_of(v.begin(), v.end(), [](modlie::Residue r) { return r == 0; });
}

}  // namespace testing
