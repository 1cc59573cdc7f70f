#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace bordeig {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class dimension_error : public error {
public:
    using error::error;
};

class precondition_error : public error {
public:
    using error::error;
};

// Thrown by iterative solvers; carries the best residual reached so the
// caller can report how close the run got.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, double best_residual)
        : error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_ = 0.0;
};

class parse_error : public error {
public:
    using error::error;
};

/// Dense square-or-rectangular complex matrix, row-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw dimension_error("ComplexMatrix: entry count does not match rows*cols");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix diagonal(const ComplexVector& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return a_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Complex>& entries() noexcept { return a_; }
    const std::vector<Complex>& entries() const noexcept { return a_; }

    bool operator==(const ComplexMatrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

}  // namespace bordeig
