#pragma once

#include <span>

#include "bordeig/types.hpp"

namespace bordeig {

/// Coefficients stored ascending: coeffs[k] multiplies x^k. Trailing
/// coefficients below 1e-14 of the largest are trimmed on construction so the
/// leading coefficient is always meaningful.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<Complex> coeffs);
    Polynomial(std::initializer_list<Complex> coeffs)
        : Polynomial(std::vector<Complex>(coeffs)) {}

    static Polynomial from_roots(std::span<const Complex> roots, Complex leading = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex leading() const { return coeffs_.back(); }
    Complex eval(Complex x) const;
    Polynomial derivative() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator+(const Polynomial& o) const;
    /// max |c_k|, the scale used in all residual tolerances.
    double coeff_norm() const;

private:
    std::vector<Complex> coeffs_;
};

/// All roots (with multiplicity) of a polynomial of degree 1..4, by formula.
std::vector<Complex> roots_closed_form(const Polynomial& p);

/// Aberth simultaneous iteration; any degree >= 1. Throws convergence_error
/// (with the best residual) if not every root satisfies |p(r)| <= 1e-8 |p|
/// after max_sweeps.
std::vector<Complex> roots_iterative(const Polynomial& p, int max_sweeps = 500);

/// Synthetic division by (x - r). Requires |p(r)| <= 1e-8 |p|.
Polynomial deflate_known_root(const Polynomial& p, Complex r);

/// Coefficients of det(A - x I) via the Faddeev-LeVerrier recurrence.
/// Leading coefficient is (-1)^n. Capped at n = 64: the coefficient form is
/// not trustworthy beyond that.
Polynomial char_poly(const ComplexMatrix& m);

struct MultisetMatch {
    bool matched = false;         // every value paired within tol
    double max_distance = 0.0;    // over the pairs actually formed
    bool ambiguous = false;       // a pairing had an alternative within tol
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Greedy minimal-distance pairing of two equal-length value multisets.
MultisetMatch match_multisets(std::span<const Complex> a, std::span<const Complex> b, double tol);

/// Sort order used everywhere values are reported: by real part, then imaginary.
void sort_spectrum(std::vector<Complex>& values);

}  // namespace bordeig
