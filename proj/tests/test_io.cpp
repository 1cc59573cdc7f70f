#include "test_main.hpp"

#include <sstream>

#include "bordeig/matrix_io.hpp"

using namespace bordeig;

TEST_CASE("complex literal grammar") {
    CHECK(parse_complex("1.5") == Complex(1.5, 0.0));
    CHECK(parse_complex("-2e-3") == Complex(-2e-3, 0.0));
    CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
    CHECK(parse_complex("1-2i") == Complex(1.0, -2.0));
    CHECK(parse_complex("2.5i") == Complex(0.0, 2.5));
    CHECK(parse_complex("-2.5i") == Complex(0.0, -2.5));
    CHECK(parse_complex("1e-3+2.5e+4i") == Complex(1e-3, 2.5e4));
    CHECK(parse_complex("3.25E2-1E-2i") == Complex(325.0, -0.01));
    CHECK_THROWS_AS(parse_complex("abc"), parse_error);
    CHECK_THROWS_AS(parse_complex("1+2"), parse_error);
    CHECK_THROWS_AS(parse_complex(""), parse_error);
    CHECK_THROWS_AS(parse_complex("inf"), parse_error);
}

TEST_CASE("canonical complex formatting") {
    CHECK(format_complex(Complex(1.5, 0.0)) == "1.5");
    CHECK(format_complex(Complex(0.0, -2.0)) == "-2i");
    CHECK(format_complex(Complex(1.0, 2.0)) == "1+2i");
    CHECK(format_complex(Complex(1.0, -2.0)) == "1-2i");
    CHECK(format_complex(Complex(-0.0, 0.0)) == "0");
}

TEST_CASE("parse then serialize round trips exactly") {
    gen::Rng rng(2718);
    const ComplexMatrix m = gen::random_matrix(5, rng);
    std::stringstream s1;
    write_matrix(m, s1);
    const ComplexMatrix back = read_matrix(s1);
    CHECK(back == m);
    // serialize(parse(file)) is the canonical form
    std::stringstream s2;
    write_matrix(back, s2);
    std::stringstream s1b;
    write_matrix(m, s1b);
    CHECK(s1b.str() == s2.str());
}

TEST_CASE("matrix files accept comments and reject malformed input") {
    std::stringstream good("# a comment\ncmat 2 2\n1 2i\n# another\n3-1i 0\n");
    const ComplexMatrix m = read_matrix(good);
    CHECK(m(0, 1) == Complex(0.0, 2.0));
    CHECK(m(1, 0) == Complex(3.0, -1.0));

    std::stringstream bad_header("cmatrix 2 2\n1 2 3 4\n");
    CHECK_THROWS_AS(read_matrix(bad_header), parse_error);
    std::stringstream bad_count("cmat 2 2\n1 2 3\n");
    CHECK_THROWS_AS(read_matrix(bad_count), parse_error);
    std::stringstream bad_dim("cmat 0 2\n");
    CHECK_THROWS_AS(read_matrix(bad_dim), parse_error);
}

TEST_CASE("digest is stable and content-sensitive") {
    gen::Rng rng(3);
    const ComplexMatrix m = gen::random_matrix(3, rng);
    const std::string d1 = matrix_digest(m);
    CHECK(d1 == matrix_digest(m));
    CHECK(d1.size() == 16);
    ComplexMatrix m2 = m;
    m2(0, 0) += 1.0;
    CHECK(d1 != matrix_digest(m2));
}
