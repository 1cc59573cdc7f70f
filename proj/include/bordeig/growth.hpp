#pragma once

#include <optional>

#include "bordeig/eigen.hpp"
#include "bordeig/polynomial.hpp"
#include "bordeig/types.hpp"

namespace bordeig {

struct GrowthStep {
    std::vector<std::size_t> indices;     // eigenvector indices used this step
    std::vector<Complex> alphas;          // column-side coefficients
    std::vector<Complex> betas;           // row-side coefficients
    Complex corner = 0.0;                 // new diagonal entry
    std::optional<Complex> chosen_root;   // the recursion root used for couplings
    std::vector<Complex> new_eigenvalues; // eigenvalues this step introduced
    double residual = 0.0;                // max ||A v - Lambda v|| verified this step
};

/// Certificate of an analytically constructed spectrum: every coefficient and
/// root choice, per-step verification residuals, the final matrix and its
/// spectrum (maintained without any oracle call).
struct GrowthTrace {
    std::vector<GrowthStep> steps;
    ComplexMatrix final_matrix;
    std::vector<Complex> analytic_spectrum;  // sorted by (Re, Im)
};

/// Grow b by L bordered rows/columns built on the single eigenvector v_k so
/// that every other eigenvector of b stays an eigenvector of the output after
/// zero-padding. Couplings follow the bordered-growth layout: column m holds
/// alpha_m v_k on top and alpha_m (Lambda_l - lambda_k)/alpha_l at row N+l
/// (l < m); rows mirror through conjugation with the beta coefficients.
std::pair<ComplexMatrix, GrowthTrace> extend_preserving(
    const ComplexMatrix& b, const EigenDecomposition& eig, std::size_t k,
    const std::vector<Complex>& alphas, const std::vector<Complex>& betas,
    const std::vector<Complex>& corners);

struct GrowthStepSpec {
    std::vector<std::size_t> indices;  // 1..3 distinct indices into the current spectrum
    std::vector<Complex> alphas;       // matching nonzero coefficients
    Complex corner = 0.0;              // must be real: the output stays Hermitian
};

/// Hermitian growth: each step appends one column that is a combination of at
/// most 3 current eigenvectors (and its conjugate-transposed row). The <= 4
/// affected eigenvalues come from the arrowhead polynomial in closed form;
/// untouched eigenvalues carry over. The running spectrum is maintained
/// exactly, never by calling the eigensolver.
GrowthTrace grow_analytic(const ComplexMatrix& b, const EigenDecomposition& eig,
                          const std::vector<GrowthStepSpec>& steps);

/// P(x) = (corner - x) prod_i (lambda_i - x) - sum_i |alpha_i|^2 prod_{j != i} (lambda_j - x),
/// the determinant of the 4x4 arrowhead; degree exactly 4.
Polynomial arrowhead_quartic(const std::array<Complex, 3>& lambdas,
                             const std::array<Complex, 3>& alphas, Complex corner);

}  // namespace bordeig
