#include "wvlab/random.hpp"

#include <algorithm>
#include <cmath>

#include "wvlab/error.hpp"
#include "wvlab/linalg.hpp"

namespace wvlab {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(master) ^ stream) ^ index);
}

std::size_t Rng::uniform_index(std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> dist(lo, hi);
    return dist(engine_);
}

Complex Rng::complex_normal() {
    const double s = std::sqrt(0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorKind::InvalidArgument, "random_ginibre: dimensions must be positive");
    }
    Matrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            g(i, j) = rng.complex_normal();
        }
    }
    return g;
}

Matrix random_haar_unitary(std::size_t dim, Rng &rng) {
    if (dim == 0) {
        throw Error(ErrorKind::InvalidArgument, "random_haar_unitary: dim must be positive");
    }
    auto [q, r] = qr_decompose(random_ginibre(dim, dim, rng));
    for (std::size_t j = 0; j < dim; ++j) {
        const Complex rjj = r(j, j);
        const Complex phase = rjj / std::abs(rjj);
        for (std::size_t i = 0; i < dim; ++i) {
            q(i, j) *= phase;
        }
    }
    return q;
}

Matrix random_hermitian_unit_radius(std::size_t dim, Rng &rng) {
    const Matrix g = random_ginibre(dim, dim, rng);
    Matrix h = (g + g.adjoint()) * 0.5;
    const auto eig = hermitian_eigendecomposition(h);
    const double radius = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    return h * (1.0 / radius);
}

}  // namespace wvlab
