#pragma once

#include <random>

#include "bordeig/types.hpp"

// Random instance builders used by the verification drivers, the benchmark
// and the test suites. Everything is driven by a caller-owned engine so runs
// are reproducible.

namespace bordeig::gen {

using Rng = std::mt19937_64;

Complex random_complex_scalar(Rng& rng);
ComplexVector random_vector(std::size_t n, Rng& rng);
ComplexMatrix random_matrix(std::size_t n, Rng& rng);
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);

/// Orthonormal columns from modified Gram-Schmidt over random vectors.
ComplexMatrix random_unitary(std::size_t n, Rng& rng);

/// U diag(eigs) U^H with a random unitary U.
ComplexMatrix hermitian_with_spectrum(const std::vector<double>& eigs, Rng& rng);

}  // namespace bordeig::gen
