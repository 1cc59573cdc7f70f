#pragma once

// Bordered-matrix instance builders shared by the unit tests, the acceptance
// suite and the benchmark. Everything is deterministic in the passed engine.

#include <algorithm>

#include "bordeig/eigen.hpp"
#include "bordeig/gen.hpp"
#include "bordeig/linalg.hpp"

namespace builders {

using namespace bordeig;

struct PlantedSingleBorder {
    ComplexMatrix a;                   // (n+1) x (n+1)
    ComplexMatrix b;                   // the leading block
    EigenDecomposition eig;            // decomposition of b
    std::vector<std::size_t> planted;  // coefficient indices forced to zero
};

/// Hermitian (or almost-Hermitian with row scale beta) bordered instance with
/// the border column built in B's eigenbasis minus the planted components.
inline PlantedSingleBorder plant_single_border(std::size_t n,
                                               const std::vector<std::size_t>& zero_idx,
                                               gen::Rng& rng, bool hermitian = true,
                                               Complex beta = Complex(1.0)) {
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::vector<double> eigs;
    for (std::size_t k = 0; k < n; ++k) eigs.push_back(u(rng));
    PlantedSingleBorder out;
    out.b = gen::hermitian_with_spectrum(eigs, rng);
    out.eig = eigen_oracle(out.b);
    out.planted = zero_idx;
    ComplexVector nu(n, 0.0);
    std::uniform_real_distribution<double> mag(0.4, 1.2);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::find(zero_idx.begin(), zero_idx.end(), k) != zero_idx.end()) continue;
        const Complex c = std::polar(mag(rng), u(rng));
        for (std::size_t i = 0; i < n; ++i) nu[i] += c * out.eig.vectors[k][i];
    }
    out.a = ComplexMatrix(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.a(i, j) = out.b(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        out.a(i, n) = nu[i];
        out.a(n, i) = hermitian ? std::conj(nu[i]) : beta * std::conj(nu[i]);
    }
    out.a(n, n) = Complex(u(rng), 0.0);
    return out;
}

/// Border column proportional to a single eigenvector v_k (the step-1 case).
inline PlantedSingleBorder plant_proportional_border(std::size_t n, std::size_t k, gen::Rng& rng,
                                                     bool hermitian = true,
                                                     Complex beta = Complex(1.0)) {
    std::vector<std::size_t> zeros;
    for (std::size_t j = 0; j < n; ++j)
        if (j != k) zeros.push_back(j);
    return plant_single_border(n, zeros, rng, hermitian, beta);
}

/// Non-Hermitian instance whose rows satisfy constraints while the columns do
/// not: the A^H path is the only way to detect the shared eigenvalue.
struct RowConstrainedInstance {
    ComplexMatrix a;
    ComplexMatrix b;
    EigenDecomposition eig;
    std::vector<std::size_t> planted;  // row-side zero coefficients (A^H frame)
};

inline RowConstrainedInstance plant_row_constraints(std::size_t n,
                                                    const std::vector<std::size_t>& zero_idx,
                                                    gen::Rng& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> eigs;
    for (std::size_t k = 0; k < n; ++k) eigs.push_back(u(rng));
    RowConstrainedInstance out;
    out.b = gen::hermitian_with_spectrum(eigs, rng);
    out.eig = eigen_oracle(out.b);
    out.planted = zero_idx;
    ComplexVector nu_row(n, 0.0);
    std::uniform_real_distribution<double> mag(0.4, 1.2);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::find(zero_idx.begin(), zero_idx.end(), k) != zero_idx.end()) continue;
        const Complex c = std::polar(mag(rng), u(rng));
        for (std::size_t i = 0; i < n; ++i) nu_row[i] += c * out.eig.vectors[k][i];
    }
    out.a = ComplexMatrix(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.a(i, j) = out.b(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        out.a(i, n) = gen::random_complex_scalar(rng);  // unconstrained column
        out.a(n, i) = std::conj(nu_row[i]);             // constrained row
    }
    out.a(n, n) = gen::random_complex_scalar(rng);
    return out;
}

inline const ComplexMatrix kWorked3x3 = [] {
    ComplexMatrix a(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    a(0, 2) = 1.0;
    a(2, 0) = 1.0;
    a(2, 2) = 3.0;
    return a;
}();

}  // namespace builders
