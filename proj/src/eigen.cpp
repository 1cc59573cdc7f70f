#include "bordeig/eigen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>

#include "bordeig/kernels.hpp"
#include "bordeig/linalg.hpp"

namespace bordeig {

namespace {

std::atomic<std::uint64_t> g_oracle_calls{0};

constexpr double kEps = 2.220446049250313e-16;

struct Householder {
    ComplexVector v;
    double tau = 0.0;
    Complex beta = 0.0;  // the surviving subdiagonal entry is -beta
    bool trivial = true;
};

// Reflector sending x to -beta e1, with the phase of beta matching x[0] so
// v = x + beta e1 never cancels.
Householder make_reflector(const ComplexVector& x) {
    Householder h;
    double sigma2 = 0.0;
    for (const Complex& c : x) sigma2 += std::norm(c);
    const double sigma = std::sqrt(sigma2);
    if (sigma == 0.0) {
        h.v.assign(x.size(), 0.0);
        return h;
    }
    const double ax0 = std::abs(x[0]);
    const Complex phase = (ax0 > 0.0) ? x[0] / ax0 : Complex(1.0);
    h.beta = phase * sigma;
    h.v = x;
    h.v[0] += h.beta;
    h.tau = 1.0 / (sigma2 + sigma * ax0);  // 2 / ||v||^2
    h.trivial = false;
    return h;
}

void canonical_phase(ComplexVector& v) {
    std::size_t top = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            top = i;
        }
    }
    if (best <= 0.0) return;
    const Complex u = std::conj(v[top]) / best;
    for (Complex& c : v) c *= u;
    v[top] = Complex(std::abs(v[top]), 0.0);
}

void normalize(ComplexVector& v) {
    const double n = vector_norm(v);
    if (n > 0.0)
        for (Complex& c : v) c /= n;
}

// --- Hermitian path -------------------------------------------------------

// Householder tridiagonalization; returns real diagonal/subdiagonal and the
// accumulated unitary in q.
void tridiagonalize(ComplexMatrix a, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix& q) {
    const std::size_t n = a.rows();
    q = ComplexMatrix::identity(n);
    std::vector<Complex> sub(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        ComplexVector x(n - k - 1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = a(k + 1 + i, k);
        Householder h = make_reflector(x);
        if (h.trivial) {
            sub[k] = a(k + 1, k);
            continue;
        }
        kernels::hermitian_reflect(a, k + 1, h.v, h.tau);
        kernels::reflect_right(q, k + 1, h.v, h.tau);
        sub[k] = -h.beta;
        a(k + 1, k) = -h.beta;
        a(k, k + 1) = std::conj(-h.beta);
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0.0;
            a(k, i) = 0.0;
        }
    }
    if (n >= 2) sub[n - 2] = a(n - 1, n - 2);
    // Diagonal phase sweep makes the subdiagonal real nonnegative; the phases
    // fold into q. e gets one extra scratch slot for the QL sweeps.
    d.resize(n);
    e.assign(n, 0.0);
    Complex phi = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a(i, i).real();
        if (i > 0) {
            const Complex t = sub[i - 1];
            const double at = std::abs(t);
            e[i - 1] = at;
            phi = (at > 0.0) ? phi * (t / at) : phi;
            for (std::size_t r = 0; r < n; ++r) q(r, i) *= phi;
        }
    }
}

// Implicit-shift QL on a real symmetric tridiagonal, rotations accumulated
// into the complex columns of q (EISPACK tql2 lineage).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& q,
                    long budget) {
    const std::size_t n = d.size();
    if (n <= 1) return;
    long iter = 0;
    for (std::size_t l = 0; l < n; ++l) {
        for (;;) {
            std::size_t m = l;
            while (m + 1 < n) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
                ++m;
            }
            if (m == l) break;
            if (++iter > budget)
                throw convergence_error("eigen_oracle: QL iteration budget exhausted",
                                        std::abs(e[l]));
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                kernels::rotate_columns(q, i, i + 1, c, -s);
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& m, long budget) {
    const std::size_t n = m.rows();
    std::vector<double> d, e;
    ComplexMatrix q;
    tridiagonalize(m, d, e, q);
    tridiagonal_ql(d, e, q, budget);
    EigenDecomposition dec;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    dec.values.resize(n);
    dec.vectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        dec.values[k] = d[order[k]];
        ComplexVector v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = q(r, order[k]);
        normalize(v);
        canonical_phase(v);
        dec.vectors[k] = std::move(v);
    }
    return dec;
}

// --- General path ---------------------------------------------------------

void hessenberg(ComplexMatrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        ComplexVector x(n - k - 1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = a(k + 1 + i, k);
        Householder h = make_reflector(x);
        if (h.trivial) continue;
        kernels::reflect_left(a, k + 1, h.v, h.tau);
        kernels::reflect_right(a, k + 1, h.v, h.tau);
        a(k + 1, k) = -h.beta;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

void givens(Complex f, Complex g, double& c, Complex& s) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (af == 0.0) {
        c = 0.0;
        s = std::conj(g) / ag;
        return;
    }
    const double denom = std::hypot(af, ag);
    c = af / denom;
    s = (f / af) * std::conj(g) / denom;
}

// Shifted QR sweeps on an upper Hessenberg matrix; eigenvalues end up on the
// diagonal. Off-block couplings are skipped: they do not affect the spectrum.
std::vector<Complex> hessenberg_qr_eigenvalues(ComplexMatrix h, long budget) {
    const std::size_t n = h.rows();
    std::vector<Complex> values(n);
    if (n == 0) return values;
    const double scale = std::max(1.0, max_abs(h));
    long iter = 0;
    std::size_t hi = n - 1;
    int stagnant = 0;
    std::vector<double> cs(n);
    std::vector<Complex> sn(n);
    while (true) {
        // Find the active block [lo..hi].
        std::size_t lo = hi;
        while (lo > 0) {
            const double bound = kEps * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)));
            if (std::abs(h(lo, lo - 1)) <= std::max(bound, kEps * scale * 1e-2)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            values[hi] = h(hi, hi);
            stagnant = 0;
            if (hi == 0) break;
            --hi;
            continue;
        }
        if (lo + 1 == hi) {
            // 2x2 block: closed form, then both entries are eigenvalues.
            const Complex a = h(lo, lo), b = h(lo, hi), c = h(hi, lo), dd = h(hi, hi);
            const Complex tr = a + dd;
            const Complex disc = std::sqrt(tr * tr - 4.0 * (a * dd - b * c));
            Complex r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
            if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
            values[hi] = r1;
            values[lo] = (std::abs(r1) > 0.0) ? (a * dd - b * c) / r1 : r2;
            stagnant = 0;
            if (lo == 0) break;
            hi = lo - 1;
            continue;
        }
        if (++iter > budget)
            throw convergence_error("eigen_oracle: QR iteration budget exhausted",
                                    std::abs(h(hi, hi - 1)));
        // Wilkinson shift from the trailing 2x2; exceptional shift when stuck.
        Complex shift;
        if (++stagnant % 12 == 0) {
            shift = h(hi, hi) + Complex(0.75 * std::abs(h(hi, hi - 1)), 0.0);
        } else {
            const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1),
                          dd = h(hi, hi);
            const Complex tr = a + dd;
            const Complex disc = std::sqrt(tr * tr - 4.0 * (a * dd - b * c));
            const Complex r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
            shift = (std::abs(r1 - dd) < std::abs(r2 - dd)) ? r1 : r2;
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= shift;
        for (std::size_t i = lo; i < hi; ++i) {
            givens(h(i, i), h(i + 1, i), cs[i], sn[i]);
            for (std::size_t j = i; j <= hi; ++j) {
                const Complex t1 = h(i, j), t2 = h(i + 1, j);
                h(i, j) = cs[i] * t1 + sn[i] * t2;
                h(i + 1, j) = -std::conj(sn[i]) * t1 + cs[i] * t2;
            }
            h(i + 1, i) = 0.0;
        }
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t rmax = std::min(i + 2, hi);
            for (std::size_t r = lo; r <= rmax; ++r) {
                const Complex t1 = h(r, i), t2 = h(r, i + 1);
                h(r, i) = cs[i] * t1 + std::conj(sn[i]) * t2;
                h(r, i + 1) = -sn[i] * t1 + cs[i] * t2;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += shift;
    }
    return values;
}

EigenDecomposition general_eigen(const ComplexMatrix& m, long budget) {
    const std::size_t n = m.rows();
    ComplexMatrix h = m;
    hessenberg(h);
    EigenDecomposition dec;
    dec.values = hessenberg_qr_eigenvalues(std::move(h), budget);
    std::sort(dec.values.begin(), dec.values.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    // Eigenvectors by inverse iteration on the original matrix. Duplicates in
    // a cluster get distinct deterministic starts plus orthogonalization
    // against the cluster mates already found (exact for normal matrices,
    // best-effort otherwise; residuals are measured either way).
    const double scale = std::max(1e-300, frobenius_norm(m));
    dec.vectors.resize(n);
    const double cluster_tol = 1e-8 * scale;
    std::size_t cluster_start = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && std::abs(dec.values[k] - dec.values[k - 1]) > cluster_tol) cluster_start = k;
        const std::size_t dup_rank = k - cluster_start;
        const Complex shift =
            dec.values[k] + Complex(static_cast<double>(dup_rank) * 1e-11 * scale, 0.0);
        ComplexMatrix shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;
        LuFactors lu(std::move(shifted));
        std::mt19937_64 rng(0x9E3779B97F4A7C15ull ^ (k * 0x2545F4914F6CDD1Dull));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        ComplexVector x(n);
        for (Complex& c : x) c = Complex(u(rng), u(rng));
        normalize(x);
        for (int it = 0; it < 4; ++it) {
            x = lu.solve(x);
            for (std::size_t j = cluster_start; j < k; ++j) {
                const Complex proj = inner_product(dec.vectors[j], x);
                for (std::size_t t = 0; t < n; ++t) x[t] -= proj * dec.vectors[j][t];
            }
            normalize(x);
            if (!all_finite(x)) {
                for (Complex& c : x) c = Complex(u(rng), u(rng));
                normalize(x);
            }
        }
        canonical_phase(x);
        dec.vectors[k] = std::move(x);
    }
    return dec;
}

}  // namespace

EigenpairEstimate eigenpair_estimate(const ComplexMatrix& m, Complex lambda, std::uint64_t seed) {
    if (!m.square()) throw dimension_error("eigenpair_estimate: matrix is not square");
    const std::size_t n = m.rows();
    ComplexMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    LuFactors lu(std::move(shifted));
    std::mt19937_64 rng(0xD1B54A32D192ED03ull ^ seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexVector x(n);
    for (Complex& c : x) c = Complex(u(rng), u(rng));
    normalize(x);
    for (int it = 0; it < 4; ++it) {
        x = lu.solve(x);
        normalize(x);
        if (!all_finite(x)) {
            for (Complex& c : x) c = Complex(u(rng), u(rng));
            normalize(x);
        }
    }
    ComplexVector ax = matvec(m, x);
    for (std::size_t i = 0; i < n; ++i) ax[i] -= lambda * x[i];
    return {std::move(x), vector_norm(ax)};
}

EigenDecomposition eigen_oracle(const ComplexMatrix& m, long iteration_budget) {
    g_oracle_calls.fetch_add(1, std::memory_order_relaxed);
    if (!m.square()) throw dimension_error("eigen_oracle: matrix is not square");
    const std::size_t n = m.rows();
    if (n == 0 || n > 256) throw precondition_error("eigen_oracle: size must be 1..256");
    require_finite(m, "eigen_oracle");
    const long budget = (iteration_budget < 0) ? 100 * static_cast<long>(n) : iteration_budget;
    EigenDecomposition dec;
    if (n == 1) {
        dec.values = {m(0, 0)};
        dec.vectors = {{Complex(1.0)}};
    } else if (is_hermitian(m)) {
        dec = hermitian_eigen(m, budget);
    } else {
        dec = general_eigen(m, budget);
    }
    dec.source = EigenDecomposition::Source::computed;
    const DecompositionResiduals r = validate_decomposition(m, dec);
    dec.orthonormal = r.orthonormal;
    dec.max_pair_residual = r.max_pair_residual;
    dec.gram_deviation = r.gram_deviation;
    dec.vectors_reliable = r.max_pair_residual <= 1e-9 * std::max(1e-300, frobenius_norm(m));
    return dec;
}

DecompositionResiduals validate_decomposition(const ComplexMatrix& m, const EigenDecomposition& d) {
    if (!m.square() || (d.dim() && d.vectors.size() != d.dim()))
        throw dimension_error("validate_decomposition: malformed inputs");
    DecompositionResiduals out;
    out.pair_residuals.reserve(d.dim());
    for (std::size_t k = 0; k < d.dim(); ++k) {
        if (d.vectors[k].size() != m.rows())
            throw dimension_error("validate_decomposition: vector length mismatch");
        ComplexVector mv = matvec(m, d.vectors[k]);
        for (std::size_t i = 0; i < mv.size(); ++i) mv[i] -= d.values[k] * d.vectors[k][i];
        const double res = vector_norm(mv);
        out.pair_residuals.push_back(res);
        out.max_pair_residual = std::max(out.max_pair_residual, res);
    }
    out.gram_deviation = kernels::gram_max_deviation(d.vectors);
    out.orthonormal = out.gram_deviation <= 1e-10;
    return out;
}

std::vector<EigenvalueCluster> cluster_degenerate(const std::vector<Complex>& values, double tol) {
    if (!(tol > 0.0)) throw precondition_error("cluster_degenerate: tol must be positive");
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) <= tol) {
                const std::size_t a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::vector<EigenvalueCluster> clusters;
    std::vector<long> where(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (where[root] < 0) {
            where[root] = static_cast<long>(clusters.size());
            clusters.push_back({});
        }
        EigenvalueCluster& c = clusters[static_cast<std::size_t>(where[root])];
        c.members.push_back(i);
        c.multiplicity += 1;
    }
    for (EigenvalueCluster& c : clusters) {
        Complex sum = 0.0;
        for (std::size_t idx : c.members) sum += values[idx];
        c.representative = sum / static_cast<double>(c.multiplicity);
    }
    return clusters;
}

std::uint64_t eigen_oracle_invocations() { return g_oracle_calls.load(std::memory_order_relaxed); }

}  // namespace bordeig
