#include "bordeig/gen.hpp"

#include "bordeig/linalg.hpp"

namespace bordeig::gen {

Complex random_complex_scalar(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Complex(u(rng), u(rng));
}

ComplexVector random_vector(std::size_t n, Rng& rng) {
    ComplexVector v(n);
    for (Complex& c : v) c = random_complex_scalar(rng);
    return v;
}

ComplexMatrix random_matrix(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (Complex& c : m.entries()) c = random_complex_scalar(rng);
    return m;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Complex(u(rng), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex c(u(rng), u(rng));
            m(i, j) = c;
            m(j, i) = std::conj(c);
        }
    }
    return m;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
    // MGS twice keeps the columns orthonormal to machine precision.
    std::vector<ComplexVector> cols(n);
    for (std::size_t k = 0; k < n; ++k) {
        cols[k] = random_vector(n, rng);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < k; ++j) {
                const Complex proj = inner_product(cols[j], cols[k]);
                for (std::size_t i = 0; i < n; ++i) cols[k][i] -= proj * cols[j][i];
            }
        const double nn = vector_norm(cols[k]);
        if (nn < 1e-8) {
            --k;  // essentially dependent draw; try again
            continue;
        }
        for (Complex& c : cols[k]) c /= nn;
    }
    ComplexMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
    return u;
}

ComplexMatrix hermitian_with_spectrum(const std::vector<double>& eigs, Rng& rng) {
    const std::size_t n = eigs.size();
    const ComplexMatrix u = random_unitary(n, rng);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += u(i, k) * eigs[k] * std::conj(u(j, k));
            m(i, j) = acc;
        }
    // Symmetrize away the last rounding bits so is_hermitian holds exactly.
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Complex(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex c = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = c;
            m(j, i) = std::conj(c);
        }
    }
    return m;
}

}  // namespace bordeig::gen
