#pragma once

#include <span>

#include "bordeig/types.hpp"

namespace bordeig {

// Singularity scale for determinants: |det| below tau_det(m) is reported as
// numerically singular. 1e-12 at unit max-norm, scaled by the matrix entries.
double tau_det(const ComplexMatrix& m);

ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v);

/// Conjugate-linear in the FIRST argument: u^H v.
Complex inner_product(const ComplexVector& u, const ComplexVector& v);

Complex determinant(const ComplexMatrix& m);

/// Rows and columns reordered by the same permutation; spectrum invariant.
/// perm[i] = source index placed at position i.
ComplexMatrix permute_symmetric(const ComplexMatrix& m, const std::vector<std::size_t>& perm);

ComplexMatrix conjugate_transpose(const ComplexMatrix& m);

double vector_norm(const ComplexVector& v);
double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol_scale = 1e-12);
bool all_finite(const ComplexMatrix& m);
bool all_finite(const ComplexVector& v);
void require_finite(const ComplexMatrix& m, const char* who);

ComplexVector scaled(const ComplexVector& v, Complex s);
ComplexVector add(const ComplexVector& a, const ComplexVector& b);
ComplexVector sub(const ComplexVector& a, const ComplexVector& b);

/// LU factorization with partial pivoting, shared by determinant() and the
/// shifted solves used for inverse iteration.
class LuFactors {
public:
    explicit LuFactors(ComplexMatrix m);

    Complex det() const;
    bool singular(double tol) const;
    /// Solve (LU) x = b in place of a copy of b.
    ComplexVector solve(const ComplexVector& b) const;

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> piv_;
    int sign_ = 1;
};

}  // namespace bordeig
