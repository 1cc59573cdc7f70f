#include "bordeig/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bordeig/linalg.hpp"

namespace bordeig {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex c) {
    double re = c.real(), im = c.imag();
    if (re == 0.0) re = 0.0;  // normalize -0
    if (im == 0.0) return fmt17(re);
    if (re == 0.0) return fmt17(im) + "i";
    if (im < 0.0 || (im == 0.0 && std::signbit(im))) return fmt17(re) + fmt17(im) + "i";
    return fmt17(re) + "+" + fmt17(im) + "i";
}

namespace {

double parse_double_strict(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // from_chars rejects a leading '+'
    if (s.empty()) throw parse_error("bad complex literal: '" + std::string(whole) + "'");
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw parse_error("bad numeric part in complex literal: '" + std::string(whole) + "'");
    if (!std::isfinite(value))
        throw parse_error("non-finite value in complex literal: '" + std::string(whole) + "'");
    return value;
}

}  // namespace

Complex parse_complex(std::string_view token) {
    if (token.empty()) throw parse_error("empty complex literal");
    const bool has_i = token.back() == 'i';
    std::string_view body = has_i ? token.substr(0, token.size() - 1) : token;
    if (!has_i) return Complex(parse_double_strict(body, token), 0.0);
    // Split at the last sign that does not belong to an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t p = body.size(); p-- > 1;) {
        const char ch = body[p];
        if ((ch == '+' || ch == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string_view::npos) {
        // pure imaginary: `bi`, including the shorthands `i`, `+i`, `-i`
        if (body.empty()) return Complex(0.0, 1.0);
        if (body == "+") return Complex(0.0, 1.0);
        if (body == "-") return Complex(0.0, -1.0);
        return Complex(0.0, parse_double_strict(body, token));
    }
    const double re = parse_double_strict(body.substr(0, split), token);
    std::string_view imag = body.substr(split);
    double im;
    if (imag == "+")
        im = 1.0;
    else if (imag == "-")
        im = -1.0;
    else
        im = parse_double_strict(imag, token);
    return Complex(re, im);
}

ComplexMatrix read_matrix(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.size() < 3 || tokens[0] != "cmat")
        throw parse_error("matrix file must start with a 'cmat <rows> <cols>' header");
    auto parse_dim = [](const std::string& s) -> std::size_t {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
            throw parse_error("bad dimension in matrix header: '" + s + "'");
        return v;
    };
    const std::size_t rows = parse_dim(tokens[1]);
    const std::size_t cols = parse_dim(tokens[2]);
    if (tokens.size() - 3 != rows * cols)
        throw parse_error("matrix file has " + std::to_string(tokens.size() - 3) +
                          " entries, expected " + std::to_string(rows * cols));
    ComplexMatrix m(rows, cols);
    for (std::size_t t = 0; t < rows * cols; ++t) m.entries()[t] = parse_complex(tokens[3 + t]);
    return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open matrix file: " + path);
    return read_matrix(in);
}

void write_matrix(const ComplexMatrix& m, std::ostream& out) {
    require_finite(m, "write_matrix");
    out << "cmat " << m.rows() << " " << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << format_complex(m(i, j));
        }
        out << "\n";
    }
}

void write_matrix_file(const ComplexMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error("cannot write matrix file: " + path);
    write_matrix(m, out);
}

std::string matrix_digest(const ComplexMatrix& m) {
    std::ostringstream canon;
    write_matrix(m, canon);
    const std::string bytes = canon.str();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bordeig
