#include "bordeig/growth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "bordeig/linalg.hpp"

namespace bordeig {

namespace {

Polynomial arrowhead_poly(std::span<const Complex> lambdas, std::span<const Complex> alphas,
                          Complex corner) {
    const std::size_t s = lambdas.size();
    Polynomial p = Polynomial({corner, -1.0});
    for (std::size_t i = 0; i < s; ++i) p = p * Polynomial({lambdas[i], -1.0});
    std::vector<Complex> acc(p.coeffs());
    acc.resize(s + 2, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
        Polynomial q({Complex(-std::norm(alphas[i]))});
        for (std::size_t j = 0; j < s; ++j)
            if (j != i) q = q * Polynomial({lambdas[j], -1.0});
        for (std::size_t t = 0; t < q.coeffs().size(); ++t) acc[t] += q.coeffs()[t];
    }
    return Polynomial(std::move(acc));
}

// Eigenvector of the small core for a known eigenvalue, by inverse iteration
// with orthogonalization against cluster mates.
ComplexVector small_eigenvector(const ComplexMatrix& k, Complex lambda,
                                const std::vector<ComplexVector>& mates, std::uint64_t seed) {
    const std::size_t n = k.rows();
    ComplexMatrix shifted = k;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    LuFactors lu(std::move(shifted));
    std::mt19937_64 rng(0xA24BAED4963EE407ull ^ seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexVector x(n);
    for (Complex& c : x) c = Complex(u(rng), u(rng));
    auto cleanup = [&](ComplexVector& v) {
        for (const ComplexVector& w : mates) {
            const Complex proj = inner_product(w, v);
            for (std::size_t t = 0; t < n; ++t) v[t] -= proj * w[t];
        }
        const double nn = vector_norm(v);
        if (nn > 0.0)
            for (Complex& c : v) c /= nn;
    };
    cleanup(x);
    for (int it = 0; it < 4; ++it) {
        x = lu.solve(x);
        cleanup(x);
        if (!all_finite(x)) {
            for (Complex& c : x) c = Complex(u(rng), u(rng));
            cleanup(x);
        }
    }
    return x;
}

double pair_residual(const ComplexMatrix& a, const ComplexVector& v, Complex lambda) {
    ComplexVector av = matvec(a, v);
    for (std::size_t i = 0; i < av.size(); ++i) av[i] -= lambda * v[i];
    return vector_norm(av);
}

std::vector<Complex> poly_roots_any(const Polynomial& p) {
    if (p.degree() < 1) return {};
    return (p.degree() <= 4) ? roots_closed_form(p) : roots_iterative(p);
}

// Values of `now` that `before` cannot account for (greedy pairing).
std::vector<Complex> new_values(const std::vector<Complex>& before, std::vector<Complex> now,
                                double tol) {
    std::vector<char> taken(now.size(), 0);
    for (const Complex& b : before) {
        std::size_t best = now.size();
        double bd = tol;
        for (std::size_t j = 0; j < now.size(); ++j)
            if (!taken[j] && std::abs(now[j] - b) <= bd) {
                bd = std::abs(now[j] - b);
                best = j;
            }
        if (best < now.size()) taken[best] = 1;
    }
    std::vector<Complex> fresh;
    for (std::size_t j = 0; j < now.size(); ++j)
        if (!taken[j]) fresh.push_back(now[j]);
    sort_spectrum(fresh);
    return fresh;
}

}  // namespace

Polynomial arrowhead_quartic(const std::array<Complex, 3>& lambdas,
                             const std::array<Complex, 3>& alphas, Complex corner) {
    return arrowhead_poly(std::span<const Complex>(lambdas.data(), 3),
                          std::span<const Complex>(alphas.data(), 3), corner);
}

std::pair<ComplexMatrix, GrowthTrace> extend_preserving(
    const ComplexMatrix& b, const EigenDecomposition& eig, std::size_t k,
    const std::vector<Complex>& alphas, const std::vector<Complex>& betas,
    const std::vector<Complex>& corners) {
    const std::size_t n = b.rows();
    const std::size_t lb = alphas.size();
    if (!b.square() || eig.dim() != n) throw dimension_error("extend_preserving: shape mismatch");
    if (k >= n) throw precondition_error("extend_preserving: eigenvector index out of range");
    if (lb < 1 || betas.size() != lb || corners.size() != lb)
        throw precondition_error("extend_preserving: alphas/betas/corners must share a length >= 1");
    for (const Complex& a : alphas)
        if (std::abs(a) <= 1e-14)
            throw precondition_error("extend_preserving: zero alpha coefficient");
    if (!eig.orthonormal)
        throw precondition_error("extend_preserving: eigenbasis must be orthonormal-certified");
    require_finite(b, "extend_preserving");

    const Complex lambda_k = eig.values[k];
    // Root recursion for the couplings: (x - corner_l)(x - Lambda_{l-1}) = alpha_l beta_l,
    // selecting the root with the largest real part at each step.
    std::vector<Complex> chain{lambda_k};
    for (std::size_t l = 0; l < lb; ++l) {
        const Complex prev = chain.back();
        Polynomial quad({corners[l] * prev - alphas[l] * betas[l], -(corners[l] + prev), 1.0});
        const std::vector<Complex> roots = roots_closed_form(quad);
        Complex pick = roots[0];
        for (const Complex& r : roots)
            if (r.real() > pick.real() || (r.real() == pick.real() && r.imag() > pick.imag()))
                pick = r;
        chain.push_back(pick);
    }

    const std::size_t m = n + lb;
    ComplexMatrix out(m, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = b(i, j);
    const ComplexVector& vk = eig.vectors[k];
    for (std::size_t col = 1; col <= lb; ++col) {
        for (std::size_t i = 0; i < n; ++i) out(i, n + col - 1) = alphas[col - 1] * vk[i];
        out(n + col - 1, n + col - 1) = corners[col - 1];
        for (std::size_t row = 1; row < col; ++row) {
            const Complex mu = (chain[row] - lambda_k) / alphas[row - 1];
            out(n + row - 1, n + col - 1) = alphas[col - 1] * mu;
            out(n + col - 1, n + row - 1) = betas[col - 1] * std::conj(mu);
        }
    }
    for (std::size_t row = 1; row <= lb; ++row)
        for (std::size_t i = 0; i < n; ++i) out(n + row - 1, i) = betas[row - 1] * std::conj(vk[i]);

    // The borders live exactly in span{v_k} + the new coordinates, so the
    // non-preserved spectrum is the spectrum of the (L+1) core.
    ComplexMatrix core(lb + 1, lb + 1);
    core(0, 0) = lambda_k;
    for (std::size_t col = 1; col <= lb; ++col) {
        core(0, col) = alphas[col - 1];
        core(col, 0) = betas[col - 1];
        core(col, col) = corners[col - 1];
        for (std::size_t row = 1; row < col; ++row) {
            core(row, col) = out(n + row - 1, n + col - 1);
            core(col, row) = out(n + col - 1, n + row - 1);
        }
    }

    double value_scale = 1.0;
    for (const Complex& v : eig.values) value_scale = std::max(value_scale, std::abs(v));

    GrowthTrace trace;
    std::vector<Complex> core_before;
    for (std::size_t l = 1; l <= lb; ++l) {
        // Leading blocks of the output are exactly the intermediate matrices.
        const std::size_t dim = n + l;
        ComplexMatrix inter(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) inter(i, j) = out(i, j);
        ComplexMatrix kcore(l + 1, l + 1);
        for (std::size_t i = 0; i <= l; ++i)
            for (std::size_t j = 0; j <= l; ++j) kcore(i, j) = core(i, j);
        std::vector<Complex> core_now = poly_roots_any(char_poly(kcore));
        sort_spectrum(core_now);

        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            ComplexVector padded(dim, 0.0);
            std::copy(eig.vectors[j].begin(), eig.vectors[j].end(), padded.begin());
            worst = std::max(worst, pair_residual(inter, padded, eig.values[j]));
        }
        std::vector<ComplexVector> mates;
        for (std::size_t t = 0; t < core_now.size(); ++t) {
            mates.clear();
            const ComplexVector w = small_eigenvector(kcore, core_now[t], mates, 0x5eed + t);
            ComplexVector full(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) full[i] = w[0] * vk[i];
            for (std::size_t r = 1; r <= l; ++r) full[n + r - 1] = w[r];
            worst = std::max(worst, pair_residual(inter, full, core_now[t]));
        }

        GrowthStep step;
        step.indices = {k};
        step.alphas = {alphas[l - 1]};
        step.betas = {betas[l - 1]};
        step.corner = corners[l - 1];
        step.chosen_root = chain[l];
        step.new_eigenvalues = new_values(core_before, core_now, 1e-8 * value_scale);
        step.residual = worst;
        trace.steps.push_back(std::move(step));
        core_before = std::move(core_now);
    }

    trace.final_matrix = out;
    trace.analytic_spectrum.reserve(m);
    for (std::size_t j = 0; j < n; ++j)
        if (j != k) trace.analytic_spectrum.push_back(eig.values[j]);
    trace.analytic_spectrum.insert(trace.analytic_spectrum.end(), core_before.begin(),
                                   core_before.end());
    sort_spectrum(trace.analytic_spectrum);
    return {std::move(out), std::move(trace)};
}

GrowthTrace grow_analytic(const ComplexMatrix& b, const EigenDecomposition& eig,
                          const std::vector<GrowthStepSpec>& steps) {
    if (!b.square() || eig.dim() != b.rows()) throw dimension_error("grow_analytic: shape mismatch");
    if (!is_hermitian(b)) throw precondition_error("grow_analytic: seed matrix must be Hermitian");
    if (!eig.orthonormal)
        throw precondition_error("grow_analytic: eigenbasis must be orthonormal-certified");
    require_finite(b, "grow_analytic");
    const double scale = std::max(1.0, max_abs(b));

    ComplexMatrix a = b;
    std::vector<Complex> values = eig.values;
    std::vector<ComplexVector> vectors = eig.vectors;
    GrowthTrace trace;

    for (std::size_t stepno = 0; stepno < steps.size(); ++stepno) {
        const GrowthStepSpec& spec = steps[stepno];
        const std::size_t s = spec.indices.size();
        const std::size_t n_cur = a.rows();
        if (s < 1 || s > 3)
            throw precondition_error(
                "grow_analytic: each step must combine 1..3 eigenvectors; more would leave a "
                "polynomial above degree 4");
        if (spec.alphas.size() != s)
            throw precondition_error("grow_analytic: alphas must match the index count");
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = i + 1; j < s; ++j)
                if (spec.indices[i] == spec.indices[j])
                    throw precondition_error("grow_analytic: duplicate eigenvector index");
        for (std::size_t idx : spec.indices)
            if (idx >= n_cur) throw precondition_error("grow_analytic: eigenvector index out of range");
        for (const Complex& al : spec.alphas)
            if (std::abs(al) <= 1e-14) throw precondition_error("grow_analytic: zero alpha (degenerate growth)");
        if (std::abs(spec.corner.imag()) > 1e-12 * scale)
            throw precondition_error("grow_analytic: corner entry must be real to keep the matrix Hermitian");
        const Complex corner(spec.corner.real(), 0.0);

        ComplexVector nu(n_cur, 0.0);
        for (std::size_t t = 0; t < s; ++t)
            for (std::size_t i = 0; i < n_cur; ++i) nu[i] += spec.alphas[t] * vectors[spec.indices[t]][i];

        ComplexMatrix grown(n_cur + 1, n_cur + 1);
        for (std::size_t i = 0; i < n_cur; ++i)
            for (std::size_t j = 0; j < n_cur; ++j) grown(i, j) = a(i, j);
        for (std::size_t i = 0; i < n_cur; ++i) {
            grown(i, n_cur) = nu[i];
            grown(n_cur, i) = std::conj(nu[i]);
        }
        grown(n_cur, n_cur) = corner;

        // Affected eigenvalues: the arrowhead polynomial over the chosen ones.
        std::vector<Complex> chosen_vals(s);
        for (std::size_t t = 0; t < s; ++t) chosen_vals[t] = values[spec.indices[t]];
        const Polynomial p = arrowhead_poly(chosen_vals, spec.alphas, corner);
        std::vector<Complex> roots = roots_closed_form(p);
        sort_spectrum(roots);

        // Corresponding vectors from the (s+1) Hermitian arrowhead core.
        ComplexMatrix karr(s + 1, s + 1);
        for (std::size_t t = 0; t < s; ++t) {
            karr(t, t) = chosen_vals[t];
            karr(t, s) = spec.alphas[t];
            karr(s, t) = std::conj(spec.alphas[t]);
        }
        karr(s, s) = corner;
        std::vector<ComplexVector> new_vectors;
        std::vector<ComplexVector> core_coords;
        double worst = 0.0;
        for (std::size_t t = 0; t < roots.size(); ++t) {
            std::vector<ComplexVector> mates;
            for (std::size_t u = 0; u < t; ++u)
                if (std::abs(roots[u] - roots[t]) <= 1e-8 * scale) mates.push_back(core_coords[u]);
            const ComplexVector w =
                small_eigenvector(karr, roots[t], mates, (stepno << 8) ^ (0x6107 + t));
            ComplexVector full(n_cur + 1, 0.0);
            for (std::size_t q = 0; q < s; ++q)
                for (std::size_t i = 0; i < n_cur; ++i) full[i] += w[q] * vectors[spec.indices[q]][i];
            full[n_cur] = w[s];
            const double nn = vector_norm(full);
            if (nn > 0.0)
                for (Complex& c : full) c /= nn;
            worst = std::max(worst, pair_residual(grown, full, roots[t]));
            core_coords.push_back(w);
            new_vectors.push_back(std::move(full));
        }

        // Carry the untouched pairs over (zero-padded) and merge sorted.
        std::vector<Complex> merged_vals;
        std::vector<ComplexVector> merged_vecs;
        std::vector<char> touched(n_cur, 0);
        for (std::size_t idx : spec.indices) touched[idx] = 1;
        for (std::size_t j = 0; j < n_cur; ++j) {
            if (touched[j]) continue;
            ComplexVector padded(n_cur + 1, 0.0);
            std::copy(vectors[j].begin(), vectors[j].end(), padded.begin());
            worst = std::max(worst, pair_residual(grown, padded, values[j]));
            merged_vals.push_back(values[j]);
            merged_vecs.push_back(std::move(padded));
        }
        for (std::size_t t = 0; t < roots.size(); ++t) {
            merged_vals.push_back(roots[t]);
            merged_vecs.push_back(std::move(new_vectors[t]));
        }
        std::vector<std::size_t> order(merged_vals.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (merged_vals[x].real() != merged_vals[y].real())
                return merged_vals[x].real() < merged_vals[y].real();
            return merged_vals[x].imag() < merged_vals[y].imag();
        });
        values.clear();
        vectors.clear();
        for (std::size_t i : order) {
            values.push_back(merged_vals[i]);
            vectors.push_back(std::move(merged_vecs[i]));
        }
        a = std::move(grown);

        if (worst > 1e-8)
            throw error("grow_analytic: step verification residual " + std::to_string(worst) +
                        " exceeds 1e-8; construction aborted");

        GrowthStep rec;
        rec.indices = spec.indices;
        rec.alphas = spec.alphas;
        rec.betas.reserve(s);
        for (const Complex& al : spec.alphas) rec.betas.push_back(std::conj(al));
        rec.corner = corner;
        rec.new_eigenvalues = roots;
        rec.residual = worst;
        trace.steps.push_back(std::move(rec));
    }

    trace.final_matrix = std::move(a);
    trace.analytic_spectrum = std::move(values);
    return trace;
}

}  // namespace bordeig
