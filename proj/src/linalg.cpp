#include "bordeig/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "bordeig/kernels.hpp"

namespace bordeig {

double tau_det(const ComplexMatrix& m) {
    const double scale = std::max(1.0, max_abs(m));
    double p = 1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) p *= scale;
    return 1e-12 * p;
}

ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v) {
    require_finite(m, "matvec");
    ComplexVector out;
    kernels::matvec(m, v, out);
    return out;
}

Complex inner_product(const ComplexVector& u, const ComplexVector& v) {
    if (u.size() != v.size()) throw dimension_error("inner_product: dimension mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

Complex determinant(const ComplexMatrix& m) {
    if (!m.square()) throw dimension_error("determinant: matrix is not square");
    require_finite(m, "determinant");
    return LuFactors(m).det();
}

ComplexMatrix permute_symmetric(const ComplexMatrix& m, const std::vector<std::size_t>& perm) {
    if (!m.square()) throw dimension_error("permute_symmetric: matrix is not square");
    const std::size_t n = m.rows();
    if (perm.size() != n) throw precondition_error("permute_symmetric: permutation length mismatch");
    std::vector<char> seen(n, 0);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) throw precondition_error("permute_symmetric: not a permutation");
        seen[p] = 1;
    }
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m(perm[i], perm[j]);
    return out;
}

ComplexMatrix conjugate_transpose(const ComplexMatrix& m) {
    ComplexMatrix out;
    kernels::conj_transpose(m, out);
    return out;
}

namespace {

// Scaled two-pass 2-norm; the naive sum of squares overflows around 1e154,
// which inverse iteration actually hits when a shift is nearly exact.
double scaled_norm(const Complex* data, std::size_t count) {
    double top = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        top = std::max({top, std::abs(data[i].real()), std::abs(data[i].imag())});
    if (top == 0.0) return 0.0;
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double re = data[i].real() / top, im = data[i].imag() / top;
        acc += re * re + im * im;
    }
    return top * std::sqrt(acc);
}

}  // namespace

double vector_norm(const ComplexVector& v) { return scaled_norm(v.data(), v.size()); }

double frobenius_norm(const ComplexMatrix& m) {
    return scaled_norm(m.entries().data(), m.entries().size());
}

double max_abs(const ComplexMatrix& m) {
    double worst = 0.0;
    for (const Complex& c : m.entries()) worst = std::max(worst, std::abs(c));
    return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol_scale) {
    if (!m.square()) return false;
    const double tol = tol_scale * std::max(1.0, max_abs(m));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

bool all_finite(const ComplexMatrix& m) {
    for (const Complex& c : m.entries())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

bool all_finite(const ComplexVector& v) {
    for (const Complex& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

void require_finite(const ComplexMatrix& m, const char* who) {
    if (!all_finite(m)) throw precondition_error(std::string(who) + ": matrix has non-finite entries");
}

ComplexVector scaled(const ComplexVector& v, Complex s) {
    ComplexVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

ComplexVector add(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw dimension_error("add: dimension mismatch");
    ComplexVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

ComplexVector sub(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw dimension_error("sub: dimension mismatch");
    ComplexVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

LuFactors::LuFactors(ComplexMatrix m) : lu_(std::move(m)) {
    if (!lu_.square()) throw dimension_error("LuFactors: matrix is not square");
    const std::size_t n = lu_.rows();
    piv_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::abs(lu_(i, k));
            if (cand > best) {
                best = cand;
                p = i;
            }
        }
        piv_[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            sign_ = -sign_;
        }
        const Complex pivot = lu_(k, k);
        if (pivot == Complex(0.0)) continue;  // exactly singular; keep factoring
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Complex LuFactors::det() const {
    Complex d = static_cast<double>(sign_);
    for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
    return d;
}

bool LuFactors::singular(double tol) const {
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lu_.rows(); ++i)
        smallest = std::min(smallest, std::abs(lu_(i, i)));
    return smallest <= tol;
}

ComplexVector LuFactors::solve(const ComplexVector& b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw dimension_error("LuFactors::solve: dimension mismatch");
    ComplexVector x = b;
    // All interchanges first: the stored multipliers were reordered by the
    // pivoting of later steps, so interleaving swaps with elimination is wrong.
    for (std::size_t k = 0; k < n; ++k)
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        const Complex pivot = lu_(i, i);
        // Tiny pivots happen by design when solving near-singular shifted
        // systems in inverse iteration; clamp instead of dividing by zero.
        const double ap = std::abs(pivot);
        x[i] /= (ap > 1e-300) ? pivot : Complex(1e-300);
    }
    return x;
}

}  // namespace bordeig
