#pragma once

#include <optional>

#include "bordeig/eigen.hpp"
#include "bordeig/polynomial.hpp"
#include "bordeig/types.hpp"

namespace bordeig {

/// Partition of an M x M matrix A into the leading N x N block B, L border
/// columns/rows and the L x L corner. Reassembling the blocks reproduces the
/// (permuted) A exactly.
struct BorderedView {
    ComplexMatrix B;                        // N x N
    std::vector<ComplexVector> border_cols; // L vectors of dim N: a_{i,N+l}
    std::vector<ComplexVector> border_rows; // L vectors of dim N: a_{N+l,j}
    ComplexMatrix corner;                   // L x L
    std::vector<std::size_t> partition_origin;  // permutation applied to A

    std::size_t n() const { return B.rows(); }
    std::size_t l() const { return border_cols.size(); }
    std::size_t m() const { return n() + l(); }
};

BorderedView partition(const ComplexMatrix& a, std::size_t n);
ComplexMatrix reassemble(const BorderedView& view);

/// Expansion of one border column in B's eigenbasis: alpha[k] = v_k^H nu.
struct BorderCoefficients {
    std::vector<Complex> alpha;
    double reconstruction_residual = 0.0;  // ||nu - sum alpha_k v_k||
    double border_norm = 0.0;              // ||nu||
};

BorderCoefficients decompose_border(const ComplexVector& nu, const EigenDecomposition& eig);

enum class SharedProvenance { vanishing_coefficient, degeneracy_surplus };

struct SharedEigenvalue {
    Complex value;
    int multiplicity = 0;
    SharedProvenance provenance = SharedProvenance::vanishing_coefficient;
    bool approximate = false;  // admitted through the soft tolerance only
};

/// Eigenvalues of B provably transferred to A. Vanishing coefficients are
/// detected per degenerate cluster through the rank of the coefficient block,
/// which subsumes the plain per-index rule and the multiplicity-surplus rule
/// (a cluster of multiplicity Lc against L borders keeps at least Lc - L).
/// cluster_tol_rel scales with the largest eigenvalue magnitude.
std::vector<SharedEigenvalue> detect_shared(const std::vector<BorderCoefficients>& coeffs,
                                            const EigenDecomposition& eig, double tol,
                                            double cluster_tol_rel = 1e-8);

/// L = 1 only: det(A - x I) assembled from the eigenbasis summation identity,
/// then synthetically deflated at each shared root.
Polynomial reduced_polynomial_single(const BorderedView& view, const EigenDecomposition& eig,
                                     const BorderCoefficients& coeffs,
                                     const std::vector<SharedEigenvalue>& shared);

/// Border coordinate of the eigenvector (v_k, mu): mu = (Lambda - lambda_k)/alpha.
Complex compute_mu(Complex lambda_big, Complex lambda_k, Complex alpha);

/// Zero-padded transfer of a preserved eigenvector (Hermitian or almost
/// Hermitian border); the general case solves the eigenvector linear system.
ComplexVector lift_eigenvector(const ComplexVector& upsilon, const BorderedView& view,
                               Complex lambda);

struct DeflationOptions {
    double tol = 1e-10;                 // |alpha| <= tol * ||nu|| counts as vanishing
    std::optional<double> soft_tol;     // additionally admit approximate constraints
    bool transpose_fallback = true;     // retry on A^H when columns give nothing
    double cluster_tol = 1e-8;          // relative degeneracy clustering scale
};

struct DeflationReport {
    std::vector<SharedEigenvalue> shared;
    Polynomial residual_poly;
    std::vector<Complex> residual_roots;
    std::vector<std::pair<Complex, ComplexVector>> lifted;  // shared pairs, dim M
    double spectrum_residual = 0.0;     // max ||A v - Lambda v|| over reported pairs
    bool transpose_fallback_used = false;   // results live in the A^H frame
    bool used_soft_tolerance = false;
    bool coefficient_analysis = true;   // false: non-orthonormal basis, surplus only
    std::vector<BorderCoefficients> coefficients;

    /// Shared values (with multiplicity) followed by residual roots.
    std::vector<Complex> full_spectrum() const;
};

DeflationReport deflate(const BorderedView& view, const EigenDecomposition& eig,
                        const DeflationOptions& options = {});

}  // namespace bordeig
