#pragma once

#include <doctest.h>

#include "bordeig/gen.hpp"
#include "bordeig/linalg.hpp"
#include "bordeig/types.hpp"

namespace testutil {

using namespace bordeig;

inline double complex_dist(Complex a, Complex b) { return std::abs(a - b); }

inline bool approx_eq(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

inline double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
    return worst;
}

}  // namespace testutil
