#include "bordeig/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bordeig/kernels.hpp"
#include "bordeig/linalg.hpp"

namespace bordeig {

namespace {

constexpr double kTrimRel = 1e-14;

Complex principal_cbrt(Complex z) {
    if (z == Complex(0.0)) return 0.0;
    return std::pow(z, 1.0 / 3.0);
}

// Quadratic a x^2 + b x + c with the cancellation-free variant: the larger
// root comes from -(b + sgn*sqrt(disc))/2 with sgn picked against b.
void quadratic_roots(Complex a, Complex b, Complex c, std::vector<Complex>& out) {
    const Complex disc = b * b - 4.0 * a * c;
    Complex sq = std::sqrt(disc);
    if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
    const Complex q = -0.5 * (b + sq);
    if (std::abs(q) > 0.0) {
        out.push_back(q / a);
        out.push_back(c / q);
    } else {
        out.push_back(-b / (2.0 * a));
        out.push_back(-b / (2.0 * a));
    }
}

// Depressed cubic t^3 + p t + q. Trigonometric branch for real coefficients
// with three real roots (clustered spectra land here constantly), Cardano
// otherwise.
void depressed_cubic_roots(Complex p, Complex q, std::vector<Complex>& out) {
    const double scale = std::max({std::abs(p), std::abs(q), 1.0});
    const bool realish = std::abs(p.imag()) <= 1e-14 * scale && std::abs(q.imag()) <= 1e-14 * scale;
    if (std::abs(p) <= 1e-15 * scale && std::abs(q) <= 1e-15 * scale) {
        out.insert(out.end(), 3, Complex(0.0));
        return;
    }
    if (realish) {
        const double pr = p.real(), qr = q.real();
        const double disc = -4.0 * pr * pr * pr - 27.0 * qr * qr;
        if (disc >= 0.0 && pr < 0.0) {
            const double m = 2.0 * std::sqrt(-pr / 3.0);
            const double arg = std::clamp(3.0 * qr / (pr * m), -1.0, 1.0);
            const double theta = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k)
                out.emplace_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0), 0.0);
            return;
        }
    }
    const Complex half_q = 0.5 * q;
    const Complex inner = std::sqrt(half_q * half_q + p * p * p / 27.0);
    Complex u3 = -half_q + inner;
    if (std::abs(-half_q - inner) > std::abs(u3)) u3 = -half_q - inner;
    const Complex u = principal_cbrt(u3);
    if (std::abs(u) <= 1e-18 * scale) {
        const Complex t0 = principal_cbrt(-q);
        const Complex w(-0.5, std::sqrt(3.0) / 2.0);
        out.push_back(t0);
        out.push_back(t0 * w);
        out.push_back(t0 * std::conj(w));
        return;
    }
    const Complex v = -p / (3.0 * u);
    const Complex w(-0.5, std::sqrt(3.0) / 2.0);
    Complex uk = u, vk = v;
    for (int k = 0; k < 3; ++k) {
        out.push_back(uk + vk);
        uk *= w;
        vk *= std::conj(w);
    }
}

void cubic_roots(Complex a, Complex b, Complex c, Complex d, std::vector<Complex>& out) {
    b /= a;
    c /= a;
    d /= a;
    const Complex shift = b / 3.0;
    const Complex p = c - b * b / 3.0;
    const Complex q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    std::vector<Complex> t;
    depressed_cubic_roots(p, q, t);
    for (const Complex& r : t) out.push_back(r - shift);
}

// Ferrari resolvent. The depressed quartic y^4 + p y^2 + q y + r factors as
// (y^2 + p/2 + m)^2 - 2m (y - q/(4m))^2 once 8m^3 + 8pm^2 + (2p^2-8r)m - q^2 = 0.
void quartic_roots(Complex a4, Complex a3, Complex a2, Complex a1, Complex a0,
                   std::vector<Complex>& out) {
    a3 /= a4;
    a2 /= a4;
    a1 /= a4;
    a0 /= a4;
    const Complex shift = a3 / 4.0;
    const Complex p = a2 - 3.0 * a3 * a3 / 8.0;
    const Complex q = a1 - a3 * a2 / 2.0 + a3 * a3 * a3 / 8.0;
    const Complex r = a0 - a3 * a1 / 4.0 + a3 * a3 * a2 / 16.0 - 3.0 * a3 * a3 * a3 * a3 / 256.0;
    const double scale = std::max({std::abs(p), std::abs(q), std::abs(r), 1.0});
    std::vector<Complex> ys;
    if (std::abs(q) <= 1e-14 * scale) {
        // Biquadratic: y^2 solves z^2 + p z + r.
        std::vector<Complex> zs;
        quadratic_roots(1.0, p, r, zs);
        for (const Complex& z : zs) {
            const Complex s = std::sqrt(z);
            ys.push_back(s);
            ys.push_back(-s);
        }
    } else {
        std::vector<Complex> ms;
        cubic_roots(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q, ms);
        Complex m = ms[0];
        for (const Complex& cand : ms)
            if (std::abs(cand) > std::abs(m)) m = cand;
        const Complex s = std::sqrt(2.0 * m);
        // (y^2 + p/2 + m) = +- s (y - q/(4m))
        quadratic_roots(1.0, -s, p / 2.0 + m + s * q / (4.0 * m), ys);
        quadratic_roots(1.0, s, p / 2.0 + m - s * q / (4.0 * m), ys);
    }
    for (const Complex& y : ys) out.push_back(y - shift);
}

// One Newton polish step per root tightens formula output to ~1 ulp.
void polish(const Polynomial& p, const Polynomial& dp, std::vector<Complex>& roots) {
    for (Complex& r : roots) {
        for (int it = 0; it < 2; ++it) {
            const Complex d = dp.eval(r);
            if (std::abs(d) < 1e-300) break;
            const Complex step = p.eval(r) / d;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            if (std::abs(step) > 0.1 * (1.0 + std::abs(r))) break;
            r -= step;
        }
    }
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    double top = 0.0;
    for (const Complex& c : coeffs_) top = std::max(top, std::abs(c));
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= kTrimRel * top) coeffs_.pop_back();
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, Complex leading) {
    // descending convolution by (x - r), reversed to ascending at the end
    std::vector<Complex> c{leading};
    for (const Complex& r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
    }
    std::reverse(c.begin(), c.end());
    return Polynomial(std::move(c));
}

Complex Polynomial::eval(Complex x) const {
    Complex acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial({0.0});
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<Complex> out(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Complex> out(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) out[k] += o.coeffs_[k];
    return Polynomial(std::move(out));
}

double Polynomial::coeff_norm() const {
    double top = 0.0;
    for (const Complex& c : coeffs_) top = std::max(top, std::abs(c));
    return top;
}

std::vector<Complex> roots_closed_form(const Polynomial& p) {
    const int deg = p.degree();
    if (deg < 1 || deg > 4)
        throw precondition_error("roots_closed_form: degree must be 1..4, got " + std::to_string(deg));
    const auto& c = p.coeffs();
    std::vector<Complex> roots;
    switch (deg) {
        case 1:
            roots.push_back(-c[0] / c[1]);
            break;
        case 2:
            quadratic_roots(c[2], c[1], c[0], roots);
            break;
        case 3:
            cubic_roots(c[3], c[2], c[1], c[0], roots);
            break;
        case 4:
            quartic_roots(c[4], c[3], c[2], c[1], c[0], roots);
            break;
    }
    polish(p, p.derivative(), roots);
    sort_spectrum(roots);
    return roots;
}

std::vector<Complex> roots_iterative(const Polynomial& p, int max_sweeps) {
    if (p.degree() < 1) throw precondition_error("roots_iterative: degree must be >= 1");
    // Roots at the origin come off by inspection; Aberth handles the rest.
    std::vector<Complex> monic(p.coeffs());
    const Complex lead = monic.back();
    for (Complex& c : monic) c /= lead;
    std::vector<Complex> roots;
    std::size_t zero_roots = 0;
    double top = 0.0;
    for (const Complex& c : monic) top = std::max(top, std::abs(c));
    while (monic.size() > 1 && std::abs(monic.front()) <= 1e-14 * top) {
        monic.erase(monic.begin());
        ++zero_roots;
    }
    roots.assign(zero_roots, Complex(0.0));
    const std::size_t n = monic.size() - 1;
    if (n == 0) {
        sort_spectrum(roots);
        return roots;
    }
    const Polynomial q{std::vector<Complex>(monic)};
    const Polynomial dq = q.derivative();
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(monic[k]));
    radius = 1.0 + radius;
    std::vector<Complex> z(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n) + 0.4;
        z[j] = 0.7 * radius * Complex(std::cos(angle), std::sin(angle));
    }
    const double tol = 1e-12 * q.coeff_norm();
    double best_worst = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex pv = q.eval(z[j]);
            worst = std::max(worst, std::abs(pv));
            const Complex dv = dq.eval(z[j]);
            if (pv == Complex(0.0)) continue;
            Complex w = (std::abs(dv) > 1e-300) ? pv / dv : pv;
            Complex s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (i != j) {
                    const Complex diff = z[j] - z[i];
                    s += (std::abs(diff) > 1e-300) ? 1.0 / diff : Complex(1e150);
                }
            const Complex denom = 1.0 - w * s;
            const Complex step = (std::abs(denom) > 1e-300) ? w / denom : w;
            z[j] -= step;
        }
        best_worst = std::min(best_worst, worst);
        if (worst <= tol) break;
        if (sweep == max_sweeps - 1 && worst > 1e-8 * q.coeff_norm())
            throw convergence_error("roots_iterative: no convergence after " +
                                        std::to_string(max_sweeps) + " sweeps",
                                    best_worst);
    }
    roots.insert(roots.end(), z.begin(), z.end());
    sort_spectrum(roots);
    return roots;
}

Polynomial deflate_known_root(const Polynomial& p, Complex r) {
    if (p.degree() < 1) throw precondition_error("deflate_known_root: degree must be >= 1");
    const double resid = std::abs(p.eval(r));
    if (resid > 1e-8 * p.coeff_norm())
        throw precondition_error("deflate_known_root: value is not a root (|p(r)| = " +
                                 std::to_string(resid) + ")");
    const auto& c = p.coeffs();
    std::vector<Complex> q(c.size() - 1);
    Complex carry = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        carry = c[k] + carry * r;
        q[k - 1] = carry;
    }
    return Polynomial(std::move(q));
}

Polynomial char_poly(const ComplexMatrix& m) {
    if (!m.square()) throw dimension_error("char_poly: matrix is not square");
    const std::size_t n = m.rows();
    if (n == 0 || n > 64)
        throw precondition_error("char_poly: size must be 1..64 (coefficient form degrades beyond)");
    require_finite(m, "char_poly");
    // Faddeev-LeVerrier on det(xI - A): M_k = A M_{k-1} + c_{n-k+1} I,
    // c_{n-k} = -tr(A M_k)/k, starting from M_1 = I.
    std::vector<Complex> c(n + 1, 0.0);
    c[n] = 1.0;
    ComplexMatrix mk = ComplexMatrix::identity(n);
    ComplexMatrix am;
    for (std::size_t k = 1; k <= n; ++k) {
        kernels::matmul(m, mk, am);
        Complex tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / static_cast<double>(k);
        if (k < n) {
            mk = am;
            for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k];
        }
    }
    // det(A - xI) = (-1)^n det(xI - A)
    if (n % 2 == 1)
        for (Complex& v : c) v = -v;
    return Polynomial(std::move(c));
}

MultisetMatch match_multisets(std::span<const Complex> a, std::span<const Complex> b, double tol) {
    MultisetMatch result;
    if (a.size() != b.size()) {
        result.matched = false;
        return result;
    }
    struct Cand {
        double d;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    cands.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) cands.push_back({std::abs(a[i] - b[j]), i, j});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });
    std::vector<char> ua(a.size(), 0), ub(b.size(), 0);
    for (const Cand& c : cands) {
        if (ua[c.i] || ub[c.j]) continue;
        ua[c.i] = 1;
        ub[c.j] = 1;
        result.pairs.emplace_back(c.i, c.j);
        result.max_distance = std::max(result.max_distance, c.d);
    }
    result.matched = result.pairs.size() == a.size() && result.max_distance <= tol;
    // A pairing is ambiguous when some matched value had a second partner
    // within tolerance; callers resolve by index order but get told.
    for (const auto& [i, j] : result.pairs) {
        int close = 0;
        for (std::size_t jj = 0; jj < b.size(); ++jj)
            if (std::abs(a[i] - b[jj]) <= tol) ++close;
        if (close > 1) {
            result.ambiguous = true;
            break;
        }
    }
    return result;
}

void sort_spectrum(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

}  // namespace bordeig
