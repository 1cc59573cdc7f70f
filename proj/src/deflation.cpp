#include "bordeig/deflation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bordeig/linalg.hpp"

namespace bordeig {

namespace {

struct BorderSymmetry {
    bool hermitian = false;      // rows are exactly the conjugated columns
    bool almost = false;         // rows = beta * conj(columns)
    Complex beta = 1.0;
    double deviation = 0.0;
};

// Least-squares fit of a_{row} = beta * conj(a_{col}) across all border pairs.
BorderSymmetry border_symmetry(const BorderedView& view) {
    BorderSymmetry sym;
    Complex num = 0.0;
    double den = 0.0, scale = 0.0;
    for (std::size_t l = 0; l < view.l(); ++l)
        for (std::size_t i = 0; i < view.n(); ++i) {
            num += view.border_cols[l][i] * view.border_rows[l][i];
            den += std::norm(view.border_cols[l][i]);
            scale = std::max({scale, std::abs(view.border_cols[l][i]),
                              std::abs(view.border_rows[l][i])});
        }
    if (den == 0.0) {
        sym.almost = scale == 0.0;  // both sides empty
        sym.hermitian = sym.almost;
        return sym;
    }
    sym.beta = num / den;
    for (std::size_t l = 0; l < view.l(); ++l)
        for (std::size_t i = 0; i < view.n(); ++i)
            sym.deviation = std::max(
                sym.deviation, std::abs(view.border_rows[l][i] -
                                        sym.beta * std::conj(view.border_cols[l][i])));
    sym.almost = sym.deviation <= 1e-10 * std::max(1.0, scale);
    sym.hermitian = sym.almost && std::abs(sym.beta - 1.0) <= 1e-10;
    return sym;
}

// Per-cluster rank analysis of the border coefficient block. Returns the
// orthonormal combinations of the cluster's eigenvectors that every border is
// blind to; their count is the transferred multiplicity.
struct ClusterAnalysis {
    int claimed = 0;
    int per_index_vanishing = 0;
    std::vector<ComplexVector> null_combos;  // coordinates over cluster member indices
};

ClusterAnalysis analyze_cluster(const EigenvalueCluster& cluster,
                                const std::vector<BorderCoefficients>& coeffs, double tol) {
    const std::size_t lc = cluster.members.size();
    const std::size_t lb = coeffs.size();
    ClusterAnalysis out;
    // Rows of the block, normalized by each border's norm so `tol` applies
    // uniformly.
    std::vector<ComplexVector> rows(lb, ComplexVector(lc));
    for (std::size_t l = 0; l < lb; ++l) {
        const double nn = std::max(coeffs[l].border_norm, 1e-300);
        for (std::size_t c = 0; c < lc; ++c) rows[l][c] = coeffs[l].alpha[cluster.members[c]] / nn;
    }
    for (std::size_t c = 0; c < lc; ++c) {
        bool vanishes = true;
        for (std::size_t l = 0; l < lb; ++l)
            if (std::abs(rows[l][c]) > tol) vanishes = false;
        if (vanishes) ++out.per_index_vanishing;
    }
    // Gram-Schmidt rank of the rows with the vanishing threshold.
    std::vector<ComplexVector> basis;
    const double drop = tol * std::sqrt(static_cast<double>(lc));
    for (ComplexVector row : rows) {
        for (const ComplexVector& b : basis) {
            const Complex proj = inner_product(b, row);
            for (std::size_t c = 0; c < lc; ++c) row[c] -= proj * b[c];
        }
        const double nn = vector_norm(row);
        if (nn > drop) {
            for (Complex& v : row) v /= nn;
            basis.push_back(std::move(row));
        }
    }
    const std::size_t rank = basis.size();
    out.claimed = static_cast<int>(lc - rank);
    // Null combinations: standard basis minus the row-space projection.
    for (std::size_t c = 0; c < lc && out.null_combos.size() < static_cast<std::size_t>(out.claimed); ++c) {
        ComplexVector w(lc, 0.0);
        w[c] = 1.0;
        for (const ComplexVector& b : basis) {
            const Complex proj = inner_product(b, w);
            for (std::size_t t = 0; t < lc; ++t) w[t] -= proj * b[t];
        }
        for (const ComplexVector& prev : out.null_combos) {
            const Complex proj = inner_product(prev, w);
            for (std::size_t t = 0; t < lc; ++t) w[t] -= proj * prev[t];
        }
        const double nn = vector_norm(w);
        if (nn > 1e-6) {
            for (Complex& v : w) v /= nn;
            out.null_combos.push_back(std::move(w));
        }
    }
    out.claimed = static_cast<int>(out.null_combos.size());
    return out;
}

double cluster_tolerance(const EigenDecomposition& eig, double rel) {
    double top = 1.0;
    for (const Complex& v : eig.values) top = std::max(top, std::abs(v));
    return rel * top;
}

std::vector<SharedEigenvalue> surplus_only_shared(const EigenDecomposition& eig, std::size_t lb,
                                                  double cluster_tol) {
    std::vector<SharedEigenvalue> shared;
    for (const EigenvalueCluster& c : cluster_degenerate(eig.values, cluster_tol)) {
        const int surplus = c.multiplicity - static_cast<int>(lb);
        if (surplus > 0)
            shared.push_back({c.representative, surplus, SharedProvenance::degeneracy_surplus, false});
    }
    return shared;
}

// Division without the root-residual precondition, for approximate
// (soft-tolerance) claims where the quotient is an admitted approximation.
Polynomial synthetic_divide(const Polynomial& p, Complex r) {
    const auto& c = p.coeffs();
    std::vector<Complex> q(c.size() - 1);
    Complex carry = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        carry = c[k] + carry * r;
        q[k - 1] = carry;
    }
    return Polynomial(std::move(q));
}

Polynomial deflate_shared_roots(Polynomial p, const std::vector<SharedEigenvalue>& shared) {
    for (const SharedEigenvalue& s : shared)
        for (int t = 0; t < s.multiplicity; ++t)
            p = s.approximate ? synthetic_divide(p, s.value) : deflate_known_root(p, s.value);
    return p;
}

}  // namespace

BorderedView partition(const ComplexMatrix& a, std::size_t n) {
    if (!a.square()) throw dimension_error("partition: matrix is not square");
    const std::size_t m = a.rows();
    if (n < 1 || n >= m) throw precondition_error("partition: need 1 <= n < dim");
    require_finite(a, "partition");
    BorderedView view;
    const std::size_t lb = m - n;
    view.B = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) view.B(i, j) = a(i, j);
    view.border_cols.assign(lb, ComplexVector(n));
    view.border_rows.assign(lb, ComplexVector(n));
    view.corner = ComplexMatrix(lb, lb);
    for (std::size_t l = 0; l < lb; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            view.border_cols[l][i] = a(i, n + l);
            view.border_rows[l][i] = a(n + l, i);
        }
        for (std::size_t t = 0; t < lb; ++t) view.corner(l, t) = a(n + l, n + t);
    }
    view.partition_origin.resize(m);
    for (std::size_t i = 0; i < m; ++i) view.partition_origin[i] = i;
    return view;
}

ComplexMatrix reassemble(const BorderedView& view) {
    const std::size_t n = view.n(), lb = view.l(), m = view.m();
    ComplexMatrix a(m, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = view.B(i, j);
    for (std::size_t l = 0; l < lb; ++l) {
        if (view.border_cols[l].size() != n || view.border_rows[l].size() != n)
            throw dimension_error("reassemble: border length mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            a(i, n + l) = view.border_cols[l][i];
            a(n + l, i) = view.border_rows[l][i];
        }
        for (std::size_t t = 0; t < lb; ++t) a(n + l, n + t) = view.corner(l, t);
    }
    return a;
}

BorderCoefficients decompose_border(const ComplexVector& nu, const EigenDecomposition& eig) {
    if (!eig.orthonormal)
        throw precondition_error(
            "decompose_border: eigenbasis is not orthonormal-certified; deflation guarantees void");
    if (eig.dim() == 0 || nu.size() != eig.vectors[0].size())
        throw dimension_error("decompose_border: dimension mismatch");
    BorderCoefficients out;
    out.alpha.resize(eig.dim());
    for (std::size_t k = 0; k < eig.dim(); ++k) out.alpha[k] = inner_product(eig.vectors[k], nu);
    ComplexVector recon(nu.size(), 0.0);
    for (std::size_t k = 0; k < eig.dim(); ++k)
        for (std::size_t i = 0; i < nu.size(); ++i) recon[i] += out.alpha[k] * eig.vectors[k][i];
    out.reconstruction_residual = vector_norm(sub(nu, recon));
    out.border_norm = vector_norm(nu);
    return out;
}

std::vector<SharedEigenvalue> detect_shared(const std::vector<BorderCoefficients>& coeffs,
                                            const EigenDecomposition& eig, double tol,
                                            double cluster_tol_rel) {
    if (!(tol > 0.0)) throw precondition_error("detect_shared: tol must be positive");
    std::vector<SharedEigenvalue> shared;
    const auto clusters = cluster_degenerate(eig.values, cluster_tolerance(eig, cluster_tol_rel));
    for (const EigenvalueCluster& c : clusters) {
        const ClusterAnalysis an = analyze_cluster(c, coeffs, tol);
        if (an.claimed <= 0) continue;
        const SharedProvenance prov = (an.per_index_vanishing >= an.claimed)
                                          ? SharedProvenance::vanishing_coefficient
                                          : SharedProvenance::degeneracy_surplus;
        shared.push_back({c.representative, an.claimed, prov, false});
    }
    std::sort(shared.begin(), shared.end(), [](const SharedEigenvalue& a, const SharedEigenvalue& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return shared;
}

Polynomial reduced_polynomial_single(const BorderedView& view, const EigenDecomposition& eig,
                                     const BorderCoefficients& coeffs,
                                     const std::vector<SharedEigenvalue>& shared) {
    if (view.l() != 1) throw precondition_error("reduced_polynomial_single: L must be 1");
    if (!eig.orthonormal)
        throw precondition_error("reduced_polynomial_single: eigenbasis must be orthonormal");
    const std::size_t n = view.n();
    if (eig.dim() != n) throw dimension_error("reduced_polynomial_single: decomposition size");
    const Complex corner = view.corner(0, 0);
    const ComplexVector& row = view.border_rows[0];
    const bool hermitian_a = is_hermitian(reassemble(view));
    // prefix[k] = prod_{j<k} (lambda_j - x), suffix[k] = prod_{j>=k} (lambda_j - x)
    std::vector<Polynomial> prefix(n + 1), suffix(n + 1);
    prefix[0] = Polynomial({1.0});
    for (std::size_t k = 0; k < n; ++k)
        prefix[k + 1] = prefix[k] * Polynomial({eig.values[k], -1.0});
    suffix[n] = Polynomial({1.0});
    for (std::size_t k = n; k-- > 0;)
        suffix[k] = suffix[k + 1] * Polynomial({eig.values[k], -1.0});
    std::vector<Complex> acc(n + 2, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex sk;
        if (hermitian_a) {
            sk = std::conj(coeffs.alpha[k]);
        } else {
            sk = 0.0;
            for (std::size_t i = 0; i < n; ++i) sk += row[i] * eig.vectors[k][i];
        }
        // (corner - x)(lambda_k - x)/N - alpha_k s_k, ascending coefficients
        const Polynomial bracket({corner * eig.values[k] * inv_n - coeffs.alpha[k] * sk,
                                  -(corner + eig.values[k]) * inv_n, Complex(inv_n)});
        const Polynomial term = bracket * prefix[k] * suffix[k + 1];
        for (std::size_t t = 0; t < term.coeffs().size(); ++t) acc[t] += term.coeffs()[t];
    }
    return deflate_shared_roots(Polynomial(std::move(acc)), shared);
}

Complex compute_mu(Complex lambda_big, Complex lambda_k, Complex alpha) {
    if (std::abs(alpha) <= 1e-14)
        throw precondition_error(
            "compute_mu: alpha is (numerically) zero; the lifted eigenvector takes mu = 0 instead");
    return (lambda_big - lambda_k) / alpha;
}

ComplexVector lift_eigenvector(const ComplexVector& upsilon, const BorderedView& view,
                               Complex lambda) {
    if (upsilon.size() != view.n()) throw dimension_error("lift_eigenvector: dimension mismatch");
    const ComplexMatrix a = reassemble(view);
    const double threshold = 1e-9 * std::max(1e-300, frobenius_norm(a));
    const double unorm = vector_norm(upsilon);
    ComplexVector padded(view.m(), 0.0);
    std::copy(upsilon.begin(), upsilon.end(), padded.begin());
    ComplexVector r = matvec(a, padded);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * padded[i];
    const double pad_residual = vector_norm(r);
    if (pad_residual <= threshold * std::max(1.0, unorm)) return padded;
    const BorderSymmetry sym = border_symmetry(view);
    if (sym.almost)
        throw precondition_error(
            "lift_eigenvector: zero-padded lift residual " + std::to_string(pad_residual) +
            " exceeds threshold; the claimed constraint is not actually satisfied");
    // General case: the eigenvector comes from the full linear system instead.
    EigenpairEstimate ii = eigenpair_estimate(a, lambda, 0x11f);
    if (ii.residual > threshold)
        throw precondition_error("lift_eigenvector: no eigenvector at the given eigenvalue (residual " +
                                 std::to_string(ii.residual) + ")");
    if (unorm > 0.0)
        for (Complex& c : ii.vector) c *= unorm;
    return ii.vector;
}

std::vector<Complex> DeflationReport::full_spectrum() const {
    std::vector<Complex> out;
    for (const SharedEigenvalue& s : shared)
        out.insert(out.end(), static_cast<std::size_t>(s.multiplicity), s.value);
    out.insert(out.end(), residual_roots.begin(), residual_roots.end());
    sort_spectrum(out);
    return out;
}

namespace {

// Column-side analysis shared by the direct run and the transpose fallback.
DeflationReport analyze_columns(const BorderedView& view, const EigenDecomposition& eig,
                                const DeflationOptions& options) {
    DeflationReport report;
    const std::size_t n = view.n();
    const ComplexMatrix a = reassemble(view);
    const double cl_tol = cluster_tolerance(eig, options.cluster_tol);
    if (eig.orthonormal) {
        for (const ComplexVector& nu : view.border_cols)
            report.coefficients.push_back(decompose_border(nu, eig));
        report.shared = detect_shared(report.coefficients, eig, options.tol, options.cluster_tol);
        if (options.soft_tol && *options.soft_tol > options.tol) {
            auto soft = detect_shared(report.coefficients, eig, *options.soft_tol, options.cluster_tol);
            // Anything the soft tolerance adds on top of the hard result is
            // reported as approximate, never as an exact claim.
            for (const SharedEigenvalue& s : soft) {
                int already = 0;
                for (const SharedEigenvalue& h : report.shared)
                    if (std::abs(h.value - s.value) <= cl_tol) already += h.multiplicity;
                if (s.multiplicity > already) {
                    SharedEigenvalue extra = s;
                    extra.multiplicity = s.multiplicity - already;
                    extra.approximate = true;
                    report.shared.push_back(extra);
                    report.used_soft_tolerance = true;
                }
            }
        }
    } else {
        report.coefficient_analysis = false;
        report.shared = surplus_only_shared(eig, view.l(), cl_tol);
    }
    int shared_total = 0;
    for (const SharedEigenvalue& s : report.shared) shared_total += s.multiplicity;
    // Residual polynomial: the eigenbasis summation identity when L = 1, the
    // characteristic polynomial otherwise (no closed determinant identity
    // exists for general L).
    if (view.l() == 1 && report.coefficient_analysis) {
        report.residual_poly =
            reduced_polynomial_single(view, eig, report.coefficients[0], report.shared);
    } else {
        report.residual_poly = deflate_shared_roots(char_poly(a), report.shared);
    }
    if (report.residual_poly.degree() >= 1) {
        report.residual_roots = (report.residual_poly.degree() <= 4)
                                    ? roots_closed_form(report.residual_poly)
                                    : roots_iterative(report.residual_poly);
    }
    if (static_cast<std::size_t>(shared_total + report.residual_poly.degree()) != view.m())
        throw error("deflate: internal bookkeeping error, shared + residual degree != M");
    // Lifted eigenvectors for every exactly-claimed shared direction.
    if (report.coefficient_analysis) {
        const auto clusters = cluster_degenerate(eig.values, cluster_tolerance(eig, options.cluster_tol));
        for (const EigenvalueCluster& c : clusters) {
            const ClusterAnalysis an = analyze_cluster(c, report.coefficients, options.tol);
            for (const ComplexVector& combo : an.null_combos) {
                ComplexVector upsilon(n, 0.0);
                for (std::size_t t = 0; t < c.members.size(); ++t)
                    for (std::size_t i = 0; i < n; ++i)
                        upsilon[i] += combo[t] * eig.vectors[c.members[t]][i];
                report.lifted.emplace_back(c.representative,
                                           lift_eigenvector(upsilon, view, c.representative));
            }
        }
    }
    // Residuals for everything we claim.
    double worst = 0.0;
    for (const auto& [lam, vec] : report.lifted) {
        ComplexVector av = matvec(a, vec);
        for (std::size_t i = 0; i < av.size(); ++i) av[i] -= lam * vec[i];
        worst = std::max(worst, vector_norm(av));
    }
    for (std::size_t t = 0; t < report.residual_roots.size(); ++t) {
        const EigenpairEstimate ii = eigenpair_estimate(a, report.residual_roots[t], 0xabc0 + t);
        worst = std::max(worst, ii.residual);
    }
    // Shared claims without a lifted vector (surplus or soft-tolerance) get
    // residual-checked through the solver too; no claim goes unmeasured.
    for (std::size_t t = 0; t < report.shared.size(); ++t) {
        const SharedEigenvalue& s = report.shared[t];
        bool has_lift = false;
        for (const auto& [lam, vec] : report.lifted)
            if (std::abs(lam - s.value) <= 1e-12 * std::max(1.0, std::abs(s.value))) has_lift = true;
        if (has_lift) continue;
        const EigenpairEstimate ii = eigenpair_estimate(a, s.value, 0x51a0 + t);
        worst = std::max(worst, ii.residual);
    }
    report.spectrum_residual = worst;
    return report;
}

bool has_vanishing_share(const DeflationReport& r) {
    for (const SharedEigenvalue& s : r.shared)
        if (s.provenance == SharedProvenance::vanishing_coefficient && !s.approximate) return true;
    return false;
}

}  // namespace

DeflationReport deflate(const BorderedView& view, const EigenDecomposition& eig,
                        const DeflationOptions& options) {
    if (eig.dim() != view.n()) throw dimension_error("deflate: decomposition does not match B");
    if (view.m() > 64)
        throw precondition_error("deflate: total dimension above the coefficient-form cap of 64");
    {
        const DecompositionResiduals check = validate_decomposition(view.B, eig);
        if (check.max_pair_residual > 1e-8 * std::max(1.0, frobenius_norm(view.B)))
            throw precondition_error("deflate: supplied decomposition does not reproduce B");
    }
    DeflationReport direct = analyze_columns(view, eig, options);
    if (has_vanishing_share(direct) || !options.transpose_fallback) return direct;
    // Column side has no satisfied constraint; the same analysis applies to
    // the rows through A^H (eigenvalues conjugate back).
    const ComplexMatrix ah = conjugate_transpose(reassemble(view));
    const BorderedView view_h = partition(ah, view.n());
    EigenDecomposition eig_h;
    if (is_hermitian(view.B)) {
        eig_h = eig;
    } else {
        eig_h = eigen_oracle(view_h.B);
        if (!eig_h.orthonormal) return direct;
    }
    DeflationReport hreport = analyze_columns(view_h, eig_h, options);
    if (!has_vanishing_share(hreport)) return direct;
    hreport.transpose_fallback_used = true;
    // Map eigenvalues back to the A frame; the lifted vectors stay in the
    // A^H frame (they are left eigenvectors of A).
    for (SharedEigenvalue& s : hreport.shared) s.value = std::conj(s.value);
    for (Complex& r : hreport.residual_roots) r = std::conj(r);
    std::vector<Complex> conj_coeffs;
    for (const Complex& c : hreport.residual_poly.coeffs()) conj_coeffs.push_back(std::conj(c));
    hreport.residual_poly = Polynomial(std::move(conj_coeffs));
    for (auto& [lam, vec] : hreport.lifted) lam = std::conj(lam);
    sort_spectrum(hreport.residual_roots);
    return hreport;
}

}  // namespace bordeig
