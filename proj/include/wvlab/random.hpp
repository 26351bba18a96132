#pragma once

#include <cstdint>
#include <random>

#include "wvlab/matrix.hpp"

namespace wvlab {

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based stream splitting: derives an independent seed for trial
/// `index` of stream `stream` from a master seed. Pure function, so trials
/// can run in any order or concurrently.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Seeded generator. Not thread-safe; one per task.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {
    }

    std::uint64_t seed() const noexcept {
        return seed_;
    }

    double normal() {
        return normal_(engine_);
    }
    double uniform() {
        return uniform_(engine_);
    }
    /// Uniform integer in [lo, hi].
    std::size_t uniform_index(std::size_t lo, std::size_t hi);
    /// Standard complex normal: E|z|^2 = 1.
    Complex complex_normal();

    std::mt19937_64 &engine() noexcept {
        return engine_;
    }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// rows x cols matrix of i.i.d. standard complex normal entries.
Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng &rng);

/// Haar-distributed unitary: QR of a Ginibre matrix, with Q's columns
/// rephased by the phases of R's diagonal.
Matrix random_haar_unitary(std::size_t dim, Rng &rng);

/// Hermitian (G + G^dagger)/2 from a Ginibre draw, rescaled so the largest
/// eigenvalue modulus is 1.
Matrix random_hermitian_unit_radius(std::size_t dim, Rng &rng);

}  // namespace wvlab
