#pragma once

#include "bordeig/types.hpp"

// Dense inner-loop kernels. Every kernel exists twice: kernels::ref holds the
// serial reference, kernels::par the OpenMP variant. The par versions split
// work across *independent output elements* only, so they produce bitwise
// identical results to ref (same per-element summation order). The unprefixed
// dispatchers pick par when OpenMP is compiled in, parallelism is enabled and
// the problem is large enough to amortize thread startup.

namespace bordeig::kernels {

bool parallel_enabled() noexcept;
void set_parallel(bool on) noexcept;

namespace ref {

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);
void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out);
void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out);

/// max_{i,j} |v_i^H v_j - delta_ij| over a set of equal-length vectors.
double gram_max_deviation(const std::vector<ComplexVector>& vecs);

/// Apply the Givens rotation [[c, s],[-s, c]] (real c,s) to columns i,j of q.
void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s);

/// Two-sided Hermitian reflector update on the trailing block starting at
/// `lo`: A <- (I - tau v v^H) A (I - tau v v^H), with v indexed from `lo`.
void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau);

/// q[:, lo..] <- q[:, lo..] (I - tau v v^H): right-application, column block.
void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau);

/// a[lo.., :] <- (I - tau v v^H) a[lo.., :]: left-application, row block.
void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau);

}  // namespace ref

namespace par {

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);
void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out);
void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out);
double gram_max_deviation(const std::vector<ComplexVector>& vecs);
void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s);
void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau);
void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau);
void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau);

}  // namespace par

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);
void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out);
void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out);
double gram_max_deviation(const std::vector<ComplexVector>& vecs);
void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s);
void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau);
void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau);
void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau);

}  // namespace bordeig::kernels
