#pragma once

#include <cstdint>

#include "bordeig/types.hpp"

namespace bordeig {

/// Full spectrum with paired eigenvectors. Vectors are unit norm with a
/// canonical phase (largest-magnitude component real positive). `orthonormal`
/// is set by measuring the Gram matrix, never assumed.
struct EigenDecomposition {
    enum class Source { user_supplied, computed };

    std::vector<Complex> values;          // sorted by (Re, Im)
    std::vector<ComplexVector> vectors;   // vectors[k] pairs with values[k]
    bool orthonormal = false;
    Source source = Source::computed;
    bool vectors_reliable = true;         // all pair residuals <= 1e-9 ||m||_F
    double max_pair_residual = 0.0;
    double gram_deviation = 0.0;

    std::size_t dim() const { return values.size(); }
};

/// Dense brute-force eigensolver, n <= 256. Hermitian input takes the
/// Householder tridiagonalization + implicit-shift QL path; anything else
/// goes through Hessenberg reduction + shifted QR with eigenvectors from
/// inverse iteration. iteration_budget < 0 means the default 100*n.
EigenDecomposition eigen_oracle(const ComplexMatrix& m, long iteration_budget = -1);

struct DecompositionResiduals {
    std::vector<double> pair_residuals;   // ||m v_k - lambda_k v_k|| per pair
    double max_pair_residual = 0.0;
    double gram_deviation = 0.0;
    bool orthonormal = false;
};

/// Eigenvector candidate for a claimed eigenvalue, from a few deterministic
/// inverse-iteration passes. The residual ||m v - lambda v|| measures how
/// good the claim actually is.
struct EigenpairEstimate {
    ComplexVector vector;
    double residual = 0.0;
};

EigenpairEstimate eigenpair_estimate(const ComplexMatrix& m, Complex lambda,
                                     std::uint64_t seed = 0);

DecompositionResiduals validate_decomposition(const ComplexMatrix& m, const EigenDecomposition& d);

struct EigenvalueCluster {
    Complex representative;               // mean of the members
    int multiplicity = 0;
    std::vector<std::size_t> members;     // indices into the input sequence
};

/// Transitive-closure clustering of values within tol.
std::vector<EigenvalueCluster> cluster_degenerate(const std::vector<Complex>& values, double tol);

/// Process-wide count of eigen_oracle calls; lets tests certify that a
/// construction path never consulted the oracle.
std::uint64_t eigen_oracle_invocations();

}  // namespace bordeig
