#include "test_main.hpp"

#include "bordeig/eigen.hpp"
#include "bordeig/polynomial.hpp"

using namespace bordeig;

namespace {

// Independent expansion oracle: convolve (x - r) factors by hand, ascending
// coefficients. Test-side on purpose; it is the reference the root solvers
// are checked against.
std::vector<Complex> expand_ascending(const std::vector<Complex>& roots, Complex lead = 1.0) {
    std::vector<Complex> c{lead};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];   // x * c_k
            next[k] -= r * c[k];   // -r * c_k
        }
        c = std::move(next);
    }
    return c;
}

bool roots_match(const std::vector<Complex>& got, std::vector<Complex> want, double tol) {
    const MultisetMatch mm = match_multisets(got, want, tol);
    return mm.matched;
}

}  // namespace

TEST_CASE("closed-form roots: quadratic and biquadratic") {
    CHECK(roots_match(roots_closed_form(Polynomial({-1.0, 0.0, 1.0})), {1.0, -1.0}, 1e-12));
    // x^4 - 5x^2 + 4 = (x^2-1)(x^2-4)
    CHECK(roots_match(roots_closed_form(Polynomial({4.0, 0.0, -5.0, 0.0, 1.0})),
                      {1.0, -1.0, 2.0, -2.0}, 1e-10));
}

TEST_CASE("closed-form quartic recovers planted roots") {
    const std::vector<Complex> want{1.0, 2.0, 3.0, 4.0};
    const Polynomial p{std::vector<Complex>(expand_ascending(want))};
    CHECK(roots_match(roots_closed_form(p), want, 1e-10));
}

TEST_CASE("closed-form cubic with three close real roots uses the stable branch") {
    // spacing 1e-3 keeps the cluster conditioning ~1e-10, well inside 1e-7
    const std::vector<Complex> want{1.0, 1.001, 0.999};
    const Polynomial p{std::vector<Complex>(expand_ascending(want))};
    CHECK(roots_match(roots_closed_form(p), want, 1e-7));
}

TEST_CASE("closed-form rejects degree 0 and degree 5") {
    CHECK_THROWS_AS(roots_closed_form(Polynomial({1.0})), precondition_error);
    CHECK_THROWS_AS(roots_closed_form(Polynomial({1, 1, 1, 1, 1, 1})), precondition_error);
}

TEST_CASE("iterative roots: linear, planted integer roots, random quartics") {
    CHECK(roots_match(roots_iterative(Polynomial({-4.0, 2.0})), {2.0}, 1e-12));
    const std::vector<Complex> want{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const Polynomial p6{std::vector<Complex>(expand_ascending(want))};
    CHECK(roots_match(roots_iterative(p6), want, 1e-8));

    gen::Rng rng(1234);
    for (int t = 0; t < 200; ++t) {
        std::vector<Complex> coeffs;
        for (int k = 0; k < 5; ++k) coeffs.push_back(gen::random_complex_scalar(rng));
        if (std::abs(coeffs[4]) < 0.1) coeffs[4] += 1.0;
        const Polynomial p{std::vector<Complex>(coeffs)};
        const std::vector<Complex> closed = roots_closed_form(p);
        const std::vector<Complex> iter = roots_iterative(p);
        CHECK(roots_match(closed, iter, 1e-7));
    }
}

TEST_CASE("roots satisfy the residual contract") {
    gen::Rng rng(777);
    for (int deg = 2; deg <= 4; ++deg) {
        for (int t = 0; t < 100; ++t) {
            std::vector<Complex> coeffs;
            for (int k = 0; k <= deg; ++k) coeffs.push_back(gen::random_complex_scalar(rng));
            if (std::abs(coeffs.back()) < 0.1) coeffs.back() += 1.0;
            const Polynomial p{std::vector<Complex>(coeffs)};
            for (const Complex& r : roots_closed_form(p))
                CHECK(std::abs(p.eval(r)) <= 1e-9 * p.coeff_norm());
        }
    }
}

TEST_CASE("deflate_known_root: the zero-root quartic reduction") {
    // x^4 + b1 x^3 + b2 x^2 + b3 x with a known root at 0 drops to
    // x^3 + b1 x^2 + b2 x + b3
    const Complex b1(2.0, 1.0), b2(-3.0, 0.5), b3(0.25, -2.0);
    const Polynomial p({0.0, b3, b2, b1, 1.0});
    const Polynomial q = deflate_known_root(p, 0.0);
    REQUIRE(q.degree() == 3);
    CHECK(std::abs(q.coeffs()[0] - b3) < 1e-15);
    CHECK(std::abs(q.coeffs()[1] - b2) < 1e-15);
    CHECK(std::abs(q.coeffs()[2] - b1) < 1e-15);
    CHECK(std::abs(q.coeffs()[3] - 1.0) < 1e-15);
}

TEST_CASE("deflate_known_root basics and round trip") {
    // (x-1)(x-2) deflated at 1 -> (x-2)
    const Polynomial p({2.0, -3.0, 1.0});
    const Polynomial q = deflate_known_root(p, 1.0);
    REQUIRE(q.degree() == 1);
    CHECK(std::abs(q.eval(2.0)) < 1e-14);
    CHECK_THROWS_AS(deflate_known_root(p, 5.0), precondition_error);

    gen::Rng rng(88);
    for (int t = 0; t < 50; ++t) {
        std::vector<Complex> roots;
        for (int k = 0; k < 5; ++k) roots.push_back(gen::random_complex_scalar(rng));
        const Polynomial full{std::vector<Complex>(expand_ascending(roots))};
        const Polynomial rest = deflate_known_root(full, roots[2]);
        const Polynomial back = rest * Polynomial({-roots[2], 1.0});
        REQUIRE(back.coeffs().size() == full.coeffs().size());
        for (std::size_t k = 0; k < back.coeffs().size(); ++k)
            CHECK(std::abs(back.coeffs()[k] - full.coeffs()[k]) <= 1e-10);
    }
}

TEST_CASE("char_poly small cases") {
    const Polynomial p = char_poly(ComplexMatrix::diagonal({1.0, 2.0}));
    REQUIRE(p.degree() == 2);
    CHECK(std::abs(p.coeffs()[0] - 2.0) < 1e-14);
    CHECK(std::abs(p.coeffs()[1] + 3.0) < 1e-14);
    CHECK(std::abs(p.coeffs()[2] - 1.0) < 1e-14);

    // companion matrix of x^3 - 6x^2 + 11x - 6
    ComplexMatrix c(3, 3);
    c(0, 2) = 6.0;
    c(1, 0) = 1.0;
    c(1, 2) = -11.0;
    c(2, 1) = 1.0;
    c(2, 2) = 6.0;
    const Polynomial pc = char_poly(c);
    // leading coefficient (-1)^3: normalize and compare
    const Complex lead = pc.leading();
    CHECK(std::abs(lead + 1.0) < 1e-12);
    CHECK(std::abs(pc.coeffs()[0] / lead - (-6.0)) < 1e-9);
    CHECK(std::abs(pc.coeffs()[1] / lead - 11.0) < 1e-9);
    CHECK(std::abs(pc.coeffs()[2] / lead - (-6.0)) < 1e-9);
    CHECK_THROWS_AS(char_poly(ComplexMatrix::identity(65)), precondition_error);
}

TEST_CASE("char_poly roots agree with the eigensolver oracle") {
    gen::Rng rng(909);
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix m = gen::random_matrix(5, rng);
        const std::vector<Complex> roots = roots_iterative(char_poly(m));
        const EigenDecomposition d = eigen_oracle(m);
        CHECK(roots_match(roots, d.values, 1e-8));
    }
}

TEST_CASE("re-expansion of computed roots reproduces the coefficients") {
    gen::Rng rng(4242);
    for (int deg = 2; deg <= 6; ++deg) {
        for (int t = 0; t < 40; ++t) {
            std::vector<Complex> coeffs;
            for (int k = 0; k <= deg; ++k) coeffs.push_back(gen::random_complex_scalar(rng));
            if (std::abs(coeffs.back()) < 0.2) coeffs.back() += 1.0;
            const Polynomial p{std::vector<Complex>(coeffs)};
            const std::vector<Complex> roots =
                (deg <= 4) ? roots_closed_form(p) : roots_iterative(p);
            const std::vector<Complex> re = expand_ascending(roots, p.leading());
            REQUIRE(re.size() == p.coeffs().size());
            for (std::size_t k = 0; k < re.size(); ++k)
                CHECK(std::abs(re[k] - p.coeffs()[k]) <= 1e-7 * p.coeff_norm());
        }
    }
}

TEST_CASE("from_roots agrees with the independent expansion oracle") {
    gen::Rng rng(616);
    for (int t = 0; t < 30; ++t) {
        std::vector<Complex> roots;
        for (int k = 0; k < 4; ++k) roots.push_back(gen::random_complex_scalar(rng));
        const Complex lead = gen::random_complex_scalar(rng) + Complex(1.0, 0.0);
        const Polynomial p = Polynomial::from_roots(roots, lead);
        const std::vector<Complex> want = expand_ascending(roots, lead);
        REQUIRE(p.coeffs().size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k)
            CHECK(std::abs(p.coeffs()[k] - want[k]) <= 1e-13);
        for (const Complex& r : roots) CHECK(std::abs(p.eval(r)) <= 1e-12 * p.coeff_norm());
    }
}

TEST_CASE("root multiset is invariant under coefficient scaling") {
    gen::Rng rng(515);
    for (int t = 0; t < 30; ++t) {
        std::vector<Complex> coeffs;
        for (int k = 0; k <= 4; ++k) coeffs.push_back(gen::random_complex_scalar(rng));
        if (std::abs(coeffs.back()) < 0.2) coeffs.back() += 1.0;
        const Complex scale = gen::random_complex_scalar(rng) + Complex(2.0, 0.0);
        std::vector<Complex> scaled_coeffs = coeffs;
        for (Complex& c : scaled_coeffs) c *= scale;
        CHECK(roots_match(roots_closed_form(Polynomial{std::vector<Complex>(coeffs)}),
                          roots_closed_form(Polynomial{std::vector<Complex>(scaled_coeffs)}),
                          1e-8));
    }
}

TEST_CASE("multiset matching flags ambiguity") {
    const std::vector<Complex> a{1.0, 1.0 + 1e-12};
    const std::vector<Complex> b{1.0 + 5e-13, 1.0 - 5e-13};
    const MultisetMatch mm = match_multisets(a, b, 1e-9);
    CHECK(mm.matched);
    CHECK(mm.ambiguous);
    const std::vector<Complex> one{1.0}, two{2.0};
    const MultisetMatch far = match_multisets(one, two, 1e-3);
    CHECK_FALSE(far.matched);
}
