#include "bordeig/kernels.hpp"

#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bordeig::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Below these sizes the OpenMP fork/join overhead dominates; dispatchers fall
// back to the serial kernels.
constexpr std::size_t kMatmulCutoff = 48;
constexpr std::size_t kVectorCutoff = 128;

bool use_par(std::size_t work_size, std::size_t cutoff) noexcept {
#ifdef _OPENMP
    return g_parallel.load(std::memory_order_relaxed) && work_size >= cutoff;
#else
    (void)work_size;
    (void)cutoff;
    return false;
#endif
}

}  // namespace

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) noexcept { g_parallel.store(on, std::memory_order_relaxed); }

namespace ref {

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) {
    if (a.cols() != b.rows()) throw dimension_error("matmul: inner dimensions differ");
    out = ComplexMatrix(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
}

void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out) {
    if (m.cols() != v.size()) throw dimension_error("matvec: dimension mismatch");
    out.assign(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m.cols(); ++k) acc += m(i, k) * v[k];
        out[i] = acc;
    }
}

void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out) {
    out = ComplexMatrix(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
}

double gram_max_deviation(const std::vector<ComplexVector>& vecs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = i; j < vecs.size(); ++j) {
            Complex g = 0.0;
            for (std::size_t t = 0; t < vecs[i].size(); ++t)
                g += std::conj(vecs[i][t]) * vecs[j][t];
            if (i == j) g -= 1.0;
            worst = std::max(worst, std::abs(g));
        }
    return worst;
}

void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s) {
    for (std::size_t r = 0; r < q.rows(); ++r) {
        const Complex qi = q(r, i), qj = q(r, j);
        q(r, i) = c * qi + s * qj;
        q(r, j) = -s * qi + c * qj;
    }
}

void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) {
    const std::size_t n = a.rows();
    const std::size_t m = n - lo;
    if (v.size() != m) throw dimension_error("hermitian_reflect: vector length mismatch");
    // p = tau * A v ; q = p - (tau/2)(v^H p) v ; A <- A - q v^H - v q^H
    ComplexVector p(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += a(lo + i, lo + k) * v[k];
        p[i] = tau * acc;
    }
    Complex vhp = 0.0;
    for (std::size_t k = 0; k < m; ++k) vhp += std::conj(v[k]) * p[k];
    const Complex kappa = 0.5 * tau * vhp;
    ComplexVector q(m);
    for (std::size_t k = 0; k < m; ++k) q[k] = p[k] - kappa * v[k];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            a(lo + i, lo + j) -= q[i] * std::conj(v[j]) + v[i] * std::conj(q[j]);
}

void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau) {
    const std::size_t m = q.cols() - lo;
    if (v.size() != m) throw dimension_error("reflect_right: vector length mismatch");
    for (std::size_t r = 0; r < q.rows(); ++r) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += q(r, lo + k) * v[k];
        acc *= tau;
        for (std::size_t k = 0; k < m; ++k) q(r, lo + k) -= acc * std::conj(v[k]);
    }
}

void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) {
    const std::size_t m = a.rows() - lo;
    if (v.size() != m) throw dimension_error("reflect_left: vector length mismatch");
    for (std::size_t c = 0; c < a.cols(); ++c) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += std::conj(v[k]) * a(lo + k, c);
        acc *= tau;
        for (std::size_t k = 0; k < m; ++k) a(lo + k, c) -= acc * v[k];
    }
}

}  // namespace ref

namespace par {

#ifdef _OPENMP

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) {
    if (a.cols() != b.rows()) throw dimension_error("matmul: inner dimensions differ");
    out = ComplexMatrix(a.rows(), b.cols());
    const long rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
}

void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out) {
    if (m.cols() != v.size()) throw dimension_error("matvec: dimension mismatch");
    out.assign(m.rows(), 0.0);
    const long rows = static_cast<long>(m.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m.cols(); ++k) acc += m(i, k) * v[k];
        out[i] = acc;
    }
}

void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out) {
    out = ComplexMatrix(m.cols(), m.rows());
    const long rows = static_cast<long>(m.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
}

double gram_max_deviation(const std::vector<ComplexVector>& vecs) {
    double worst = 0.0;
    const long n = static_cast<long>(vecs.size());
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
    for (long i = 0; i < n; ++i)
        for (std::size_t j = static_cast<std::size_t>(i); j < vecs.size(); ++j) {
            Complex g = 0.0;
            for (std::size_t t = 0; t < vecs[i].size(); ++t)
                g += std::conj(vecs[i][t]) * vecs[j][t];
            if (static_cast<std::size_t>(i) == j) g -= 1.0;
            worst = std::max(worst, std::abs(g));
        }
    return worst;
}

void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s) {
    const long rows = static_cast<long>(q.rows());
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) {
        const Complex qi = q(r, i), qj = q(r, j);
        q(r, i) = c * qi + s * qj;
        q(r, j) = -s * qi + c * qj;
    }
}

void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) {
    const std::size_t n = a.rows();
    const std::size_t m = n - lo;
    if (v.size() != m) throw dimension_error("hermitian_reflect: vector length mismatch");
    ComplexVector p(m, 0.0);
    const long mm = static_cast<long>(m);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < mm; ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += a(lo + i, lo + k) * v[k];
        p[i] = tau * acc;
    }
    Complex vhp = 0.0;
    for (std::size_t k = 0; k < m; ++k) vhp += std::conj(v[k]) * p[k];
    const Complex kappa = 0.5 * tau * vhp;
    ComplexVector q(m);
    for (std::size_t k = 0; k < m; ++k) q[k] = p[k] - kappa * v[k];
#pragma omp parallel for schedule(static)
    for (long i = 0; i < mm; ++i)
        for (std::size_t j = 0; j < m; ++j)
            a(lo + i, lo + j) -= q[i] * std::conj(v[j]) + v[i] * std::conj(q[j]);
}

void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau) {
    const std::size_t m = q.cols() - lo;
    if (v.size() != m) throw dimension_error("reflect_right: vector length mismatch");
    const long rows = static_cast<long>(q.rows());
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += q(r, lo + k) * v[k];
        acc *= tau;
        for (std::size_t k = 0; k < m; ++k) q(r, lo + k) -= acc * std::conj(v[k]);
    }
}

void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) {
    const std::size_t m = a.rows() - lo;
    if (v.size() != m) throw dimension_error("reflect_left: vector length mismatch");
    const long cols = static_cast<long>(a.cols());
#pragma omp parallel for schedule(static)
    for (long c = 0; c < cols; ++c) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += std::conj(v[k]) * a(lo + k, c);
        acc *= tau;
        for (std::size_t k = 0; k < m; ++k) a(lo + k, c) -= acc * v[k];
    }
}

#else

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) { ref::matmul(a, b, out); }
void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out) { ref::matvec(m, v, out); }
void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out) { ref::conj_transpose(m, out); }
double gram_max_deviation(const std::vector<ComplexVector>& vecs) { return ref::gram_max_deviation(vecs); }
void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s) { ref::rotate_columns(q, i, j, c, s); }
void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) { ref::hermitian_reflect(a, lo, v, tau); }
void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau) { ref::reflect_right(q, lo, v, tau); }
void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) { ref::reflect_left(a, lo, v, tau); }

#endif  // _OPENMP

}  // namespace par

void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) {
    if (use_par(a.rows(), kMatmulCutoff))
        par::matmul(a, b, out);
    else
        ref::matmul(a, b, out);
}

void matvec(const ComplexMatrix& m, const ComplexVector& v, ComplexVector& out) {
    if (use_par(m.rows(), kVectorCutoff))
        par::matvec(m, v, out);
    else
        ref::matvec(m, v, out);
}

void conj_transpose(const ComplexMatrix& m, ComplexMatrix& out) {
    if (use_par(m.rows(), kVectorCutoff))
        par::conj_transpose(m, out);
    else
        ref::conj_transpose(m, out);
}

double gram_max_deviation(const std::vector<ComplexVector>& vecs) {
    if (use_par(vecs.size(), kMatmulCutoff)) return par::gram_max_deviation(vecs);
    return ref::gram_max_deviation(vecs);
}

void rotate_columns(ComplexMatrix& q, std::size_t i, std::size_t j, double c, double s) {
    if (use_par(q.rows(), 4 * kVectorCutoff))
        par::rotate_columns(q, i, j, c, s);
    else
        ref::rotate_columns(q, i, j, c, s);
}

void hermitian_reflect(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) {
    if (use_par(a.rows() - lo, kMatmulCutoff))
        par::hermitian_reflect(a, lo, v, tau);
    else
        ref::hermitian_reflect(a, lo, v, tau);
}

void reflect_right(ComplexMatrix& q, std::size_t lo, const ComplexVector& v, double tau) {
    if (use_par(q.rows(), kMatmulCutoff))
        par::reflect_right(q, lo, v, tau);
    else
        ref::reflect_right(q, lo, v, tau);
}

void reflect_left(ComplexMatrix& a, std::size_t lo, const ComplexVector& v, double tau) {
    if (use_par(a.cols(), kMatmulCutoff))
        par::reflect_left(a, lo, v, tau);
    else
        ref::reflect_left(a, lo, v, tau);
}

}  // namespace bordeig::kernels
