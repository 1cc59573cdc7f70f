// bordeig command line: deflation reports, analytic-spectrum generation,
// eigenvector lifting and oracle verification over cmat files.
//
// Exit codes: 0 success, 1 parse/usage error, 2 verification failure,
// 3 numerical non-convergence.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bordeig/deflation.hpp"
#include "bordeig/eigen.hpp"
#include "bordeig/growth.hpp"
#include "bordeig/linalg.hpp"
#include "bordeig/matrix_io.hpp"
#include "bordeig/polynomial.hpp"

using namespace bordeig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitNonConvergence = 3;

std::string join_complex(const std::vector<Complex>& vals) {
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ",";
        out += format_complex(vals[i]);
    }
    return out;
}

std::string format_vector(const ComplexVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_complex(v[i]);
    }
    return out + ")";
}

double spectrum_scale(const std::vector<Complex>& values) {
    double top = 1.0;
    for (const Complex& v : values) top = std::max(top, std::abs(v));
    return top;
}

const char* provenance_name(SharedProvenance p) {
    return p == SharedProvenance::vanishing_coefficient ? "vanishing-coefficient"
                                                        : "degeneracy-surplus";
}

int run_deflate(const std::string& input, std::size_t split, double tol,
                std::optional<double> soft_tol, bool oracle, bool transpose_fallback) {
    const ComplexMatrix a = read_matrix_file(input);
    if (!a.square()) throw parse_error("deflate: input matrix must be square");
    if (split < 1 || split >= a.rows()) throw parse_error("deflate: need 1 <= split < dim");
    const BorderedView view = partition(a, split);
    const EigenDecomposition eig = eigen_oracle(view.B);
    DeflationOptions opts;
    opts.tol = tol;
    opts.soft_tol = soft_tol;
    opts.transpose_fallback = transpose_fallback;
    const DeflationReport report = deflate(view, eig, opts);

    std::cout << "bordeig deflate report\n";
    std::cout << "input: " << input << "\n";
    std::cout << "digest: " << matrix_digest(a) << "\n";
    std::cout << "dimension: " << a.rows() << "\n";
    std::cout << "split: " << split << " (B " << split << "x" << split << ", L=" << view.l()
              << " border column" << (view.l() == 1 ? "" : "s") << ")\n";
    std::cout << "eigenbasis of B: computed, "
              << (eig.orthonormal ? "orthonormal" : "NOT orthonormal")
              << " (gram deviation " << fmt17(eig.gram_deviation) << ")\n";
    if (report.transpose_fallback_used)
        std::cout << "analysis frame: A^H row-side fallback; eigenvalues mapped back, lifted "
                     "vectors are left eigenvectors\n";
    if (!report.coefficient_analysis)
        std::cout << "coefficient analysis: unavailable (non-orthonormal basis); "
                     "degeneracy-surplus detection only\n";
    if (!report.coefficients.empty()) {
        std::cout << "border coefficients (alpha[l][k] = v_k^H nu_l, k by ascending eigenvalue):\n";
        for (std::size_t l = 0; l < report.coefficients.size(); ++l) {
            std::cout << "  l=" << (l + 1) << ":";
            for (const Complex& c : report.coefficients[l].alpha)
                std::cout << " " << format_complex(c);
            std::cout << "\n";
            std::cout << "    border norm: " << fmt17(report.coefficients[l].border_norm)
                      << "  reconstruction residual: "
                      << fmt17(report.coefficients[l].reconstruction_residual) << "\n";
        }
    }
    const ComplexMatrix frame_matrix =
        report.transpose_fallback_used ? conjugate_transpose(a) : a;
    std::cout << "shared eigenvalues (value, multiplicity, provenance):\n";
    if (report.shared.empty()) std::cout << "  none\n";
    for (const SharedEigenvalue& s : report.shared) {
        const Complex frame_value = report.transpose_fallback_used ? std::conj(s.value) : s.value;
        const EigenpairEstimate est = eigenpair_estimate(frame_matrix, frame_value);
        std::cout << "  " << format_complex(s.value) << " x" << s.multiplicity << " "
                  << provenance_name(s.provenance)
                  << (s.approximate ? " (approximate, soft tolerance)" : "") << "  (residual "
                  << fmt17(est.residual) << ")\n";
    }
    std::cout << "residual polynomial coefficients (ascending):\n  ";
    for (std::size_t t = 0; t < report.residual_poly.coeffs().size(); ++t) {
        if (t) std::cout << " ";
        std::cout << format_complex(report.residual_poly.coeffs()[t]);
    }
    std::cout << "\nresidual roots:\n";
    if (report.residual_roots.empty()) std::cout << "  none\n";
    for (const Complex& r : report.residual_roots) {
        const Complex frame_root = report.transpose_fallback_used ? std::conj(r) : r;
        const EigenpairEstimate est = eigenpair_estimate(frame_matrix, frame_root);
        std::cout << "  " << format_complex(r) << "  (residual " << fmt17(est.residual) << ")\n";
    }
    std::cout << "lifted eigenvectors:\n";
    if (report.lifted.empty()) std::cout << "  none\n";
    for (const auto& [lam, vec] : report.lifted) {
        ComplexVector res = matvec(report.transpose_fallback_used ? conjugate_transpose(a) : a, vec);
        const Complex frame_lambda = report.transpose_fallback_used ? std::conj(lam) : lam;
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= frame_lambda * vec[i];
        std::cout << "  lambda = " << format_complex(lam) << ": " << format_vector(vec)
                  << "  residual = " << fmt17(vector_norm(res)) << "\n";
    }
    std::cout << "max residual: " << fmt17(report.spectrum_residual) << "\n";
    if (oracle) {
        const EigenDecomposition full = eigen_oracle(a);
        std::vector<Complex> claimed = report.full_spectrum();
        const double mtol = 1e-7 * spectrum_scale(full.values);
        const MultisetMatch mm = match_multisets(claimed, full.values, mtol);
        std::cout << "oracle comparison: " << (mm.matched ? "MATCH" : "MISMATCH")
                  << " (max pairing distance " << fmt17(mm.max_distance) << ", tolerance "
                  << fmt17(mtol) << ")" << (mm.ambiguous ? " [ambiguous pairing resolved by index order]" : "")
                  << "\n";
        if (!mm.matched) return kExitVerification;
    }
    return kExitOk;
}

int run_lift(const std::string& input, std::size_t split, const std::string& eigenvalue_text,
             double tol) {
    const ComplexMatrix a = read_matrix_file(input);
    if (!a.square()) throw parse_error("lift: input matrix must be square");
    if (split < 1 || split >= a.rows()) throw parse_error("lift: need 1 <= split < dim");
    const std::size_t comma = eigenvalue_text.find(',');
    if (comma == std::string::npos)
        throw parse_error("lift: --eigenvalue expects \"re,im\"");
    const Complex target(parse_complex(eigenvalue_text.substr(0, comma)).real(),
                         parse_complex(eigenvalue_text.substr(comma + 1)).real());
    const BorderedView view = partition(a, split);
    const EigenDecomposition eig = eigen_oracle(view.B);
    const DeflationReport report = deflate(view, eig);
    std::cout << "bordeig lift report\n";
    std::cout << "input: " << input << "\n";
    std::cout << "digest: " << matrix_digest(a) << "\n";
    std::cout << "eigenvalue: " << format_complex(target) << "  (tolerance " << fmt17(tol) << ")\n";
    bool any = false;
    for (const auto& [lam, vec] : report.lifted) {
        if (std::abs(lam - target) > tol) continue;
        any = true;
        ComplexVector res = matvec(report.transpose_fallback_used ? conjugate_transpose(a) : a, vec);
        const Complex frame_lambda = report.transpose_fallback_used ? std::conj(lam) : lam;
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= frame_lambda * vec[i];
        std::cout << "lifted: lambda = " << format_complex(lam) << " " << format_vector(vec)
                  << "  residual = " << fmt17(vector_norm(res)) << "\n";
    }
    if (!any) {
        std::cout << "no shared eigenvalue within tolerance\n";
        return kExitVerification;
    }
    return kExitOk;
}

int run_verify(const std::string& input, const std::string& against, double tol) {
    const ComplexMatrix a = read_matrix_file(input);
    const EigenDecomposition da = eigen_oracle(a);
    std::cout << "bordeig verify report\n";
    std::cout << "input: " << input << "\n";
    std::cout << "digest: " << matrix_digest(a) << "\n";
    std::cout << "spectrum (sorted by real part, then imaginary):\n";
    for (const Complex& v : da.values) std::cout << "  " << format_complex(v) << "\n";
    std::cout << "max pair residual: " << fmt17(da.max_pair_residual) << "\n";
    if (against.empty()) return kExitOk;
    const ComplexMatrix b = read_matrix_file(against);
    const EigenDecomposition db = eigen_oracle(b);
    std::cout << "against: " << against << "\n";
    std::cout << "against digest: " << matrix_digest(b) << "\n";
    const double mtol = tol * std::max(spectrum_scale(da.values), spectrum_scale(db.values));
    const MultisetMatch direct = match_multisets(da.values, db.values, mtol);
    if (direct.matched) {
        std::cout << "comparison: MATCH (max pairing distance " << fmt17(direct.max_distance)
                  << ", tolerance " << fmt17(mtol) << ")\n";
        return kExitOk;
    }
    std::vector<Complex> conj_b = db.values;
    for (Complex& c : conj_b) c = std::conj(c);
    const MultisetMatch conj = match_multisets(da.values, conj_b, mtol);
    if (conj.matched) {
        std::cout << "comparison: CONJUGATE-MATCH (max pairing distance " << fmt17(conj.max_distance)
                  << ", tolerance " << fmt17(mtol) << ")\n";
        return kExitOk;
    }
    std::cout << "comparison: MISMATCH (best direct distance " << fmt17(direct.max_distance)
              << ", best conjugate distance " << fmt17(conj.max_distance) << ", tolerance "
              << fmt17(mtol) << ")\n";
    return kExitVerification;
}

std::vector<GrowthStepSpec> parse_steps(const std::string& spec) {
    std::vector<GrowthStepSpec> steps;
    std::stringstream ss(spec);
    std::string step_text;
    while (std::getline(ss, step_text, ';')) {
        if (step_text.empty()) continue;
        std::stringstream fs(step_text);
        std::string idx_text, alpha_text, corner_text;
        if (!std::getline(fs, idx_text, ':') || !std::getline(fs, alpha_text, ':') ||
            !std::getline(fs, corner_text))
            throw parse_error("generate: each step must be idx1[,idx2[,idx3]]:a1[,a2[,a3]]:corner");
        GrowthStepSpec step;
        std::stringstream is(idx_text);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(tok);
            } catch (...) {
                throw parse_error("generate: bad index '" + tok + "'");
            }
            if (idx == 0) throw parse_error("generate: indices are 1-based");
            step.indices.push_back(idx - 1);
        }
        std::stringstream as(alpha_text);
        while (std::getline(as, tok, ',')) step.alphas.push_back(parse_complex(tok));
        step.corner = parse_complex(corner_text);
        if (step.indices.size() > 3)
            throw parse_error("generate: at most 3 indices per step (degree-4 solvability)");
        if (step.indices.empty() || step.indices.size() != step.alphas.size())
            throw parse_error("generate: index and alpha counts must match");
        for (const Complex& al : step.alphas)
            if (std::abs(al) <= 1e-14) throw parse_error("generate: zero alpha (degenerate growth)");
        steps.push_back(std::move(step));
    }
    if (steps.empty()) throw parse_error("generate: empty step specification");
    return steps;
}

int run_generate(const std::string& seed_matrix, const std::string& seed_diag,
                 const std::string& steps_text, const std::string& out_path,
                 const std::string& trace_path, std::uint64_t rng_seed) {
    (void)rng_seed;  // reserved for instance-generation helpers; core math is deterministic
    ComplexMatrix seed;
    EigenDecomposition eig;
    if (!seed_diag.empty() && !seed_matrix.empty())
        throw parse_error("generate: --seed-matrix and --seed-diag are mutually exclusive");
    if (!seed_diag.empty()) {
        std::vector<double> diag;
        std::stringstream ss(seed_diag);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const Complex c = parse_complex(tok);
            if (c.imag() != 0.0) throw parse_error("generate: --seed-diag entries must be real");
            diag.push_back(c.real());
        }
        if (diag.empty()) throw parse_error("generate: empty --seed-diag");
        std::vector<std::size_t> order(diag.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
        seed = ComplexMatrix(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) seed(i, i) = diag[i];
        // Exact decomposition of a diagonal seed; no oracle involved.
        eig.values.resize(diag.size());
        eig.vectors.resize(diag.size());
        for (std::size_t k = 0; k < diag.size(); ++k) {
            eig.values[k] = diag[order[k]];
            ComplexVector e(diag.size(), 0.0);
            e[order[k]] = 1.0;
            eig.vectors[k] = std::move(e);
        }
        eig.orthonormal = true;
        eig.source = EigenDecomposition::Source::user_supplied;
    } else if (!seed_matrix.empty()) {
        seed = read_matrix_file(seed_matrix);
        if (!is_hermitian(seed)) throw parse_error("generate: seed matrix must be Hermitian");
        eig = eigen_oracle(seed);
    } else {
        throw parse_error("generate: one of --seed-matrix / --seed-diag is required");
    }
    const std::vector<GrowthStepSpec> steps = parse_steps(steps_text);
    const GrowthTrace trace = grow_analytic(seed, eig, steps);
    // Self-verification against the oracle before anything is written.
    const EigenDecomposition full = eigen_oracle(trace.final_matrix);
    const double mtol = 1e-7 * spectrum_scale(full.values);
    const MultisetMatch mm = match_multisets(trace.analytic_spectrum, full.values, mtol);
    if (!mm.matched) {
        std::cout << "self-verification FAILED: analytic spectrum vs oracle distance "
                  << fmt17(mm.max_distance) << " exceeds " << fmt17(mtol) << "\n";
        return kExitVerification;
    }
    write_matrix_file(trace.final_matrix, out_path);
    std::ofstream tf(trace_path);
    if (!tf) throw error("generate: cannot write trace file " + trace_path);
    tf << "# bordeig growth trace\n";
    tf << "seed dimension: " << seed.rows() << "\n";
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const GrowthStep& st = trace.steps[s];
        tf << "step " << (s + 1) << ": indices=";
        for (std::size_t i = 0; i < st.indices.size(); ++i)
            tf << (i ? "," : "") << (st.indices[i] + 1);
        tf << " alphas=" << join_complex(st.alphas);
        tf << " corner=" << format_complex(st.corner);
        tf << " roots=" << join_complex(st.new_eigenvalues);
        tf << " residual=" << fmt17(st.residual) << "\n";
    }
    tf << "final dimension: " << trace.final_matrix.rows() << "\n";
    tf << "analytic spectrum: " << join_complex(trace.analytic_spectrum) << "\n";
    tf << "self-verification: max pairing distance " << fmt17(mm.max_distance)
       << " (oracle, tolerance " << fmt17(mtol) << ")\n";
    std::cout << "generated " << trace.final_matrix.rows() << "x" << trace.final_matrix.cols()
              << " matrix -> " << out_path << "\n";
    std::cout << "trace -> " << trace_path << "\n";
    std::cout << "self-verification: max pairing distance " << fmt17(mm.max_distance) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bordeig: eigenvalue deflation of bordered matrices"};
    app.require_subcommand(1);

    std::string input, against, out_path, trace_path, seed_matrix, seed_diag, steps_text,
        eigenvalue_text;
    std::size_t split = 0;
    double tol = 1e-10;
    double lift_tol = 1e-8;
    double verify_tol = 1e-8;
    std::optional<double> soft_tol;
    double soft_tol_value = 0.0;
    bool oracle = false, transpose_fallback = false;
    std::uint64_t rng_seed = 0;

    CLI::App* deflate_cmd = app.add_subcommand("deflate", "deflate a bordered matrix");
    deflate_cmd->add_option("--input", input, "matrix file")->required();
    deflate_cmd->add_option("--split", split, "size N of the leading block B")->required();
    deflate_cmd->add_option("--tol", tol, "vanishing-coefficient tolerance (relative)");
    CLI::Option* soft_opt =
        deflate_cmd->add_option("--soft-tol", soft_tol_value, "approximate-constraint tolerance");
    deflate_cmd->add_flag("--oracle", oracle, "append an eigensolver oracle comparison");
    deflate_cmd->add_flag("--transpose-fallback", transpose_fallback,
                          "retry on A^H when no column constraint holds");

    CLI::App* generate_cmd = app.add_subcommand("generate", "grow a matrix with an analytic spectrum");
    generate_cmd->add_option("--seed-matrix", seed_matrix, "Hermitian seed matrix file");
    generate_cmd->add_option("--seed-diag", seed_diag, "comma-separated real diagonal seed");
    generate_cmd->add_option("--steps", steps_text, "semicolon-separated idx:alpha:corner steps")
        ->required();
    generate_cmd->add_option("--out", out_path, "output matrix file")->required();
    generate_cmd->add_option("--trace", trace_path, "growth trace file")->required();
    generate_cmd->add_option("--rng-seed", rng_seed, "seed for instance-generation helpers");

    CLI::App* lift_cmd = app.add_subcommand("lift", "lift preserved eigenvectors");
    lift_cmd->add_option("--input", input, "matrix file")->required();
    lift_cmd->add_option("--split", split, "size N of the leading block B")->required();
    lift_cmd->add_option("--eigenvalue", eigenvalue_text, "target eigenvalue \"re,im\"")->required();
    lift_cmd->add_option("--tol", lift_tol, "eigenvalue matching tolerance");

    CLI::App* verify_cmd = app.add_subcommand("verify", "print and compare spectra");
    verify_cmd->add_option("--input", input, "matrix file")->required();
    verify_cmd->add_option("--against", against, "second matrix file to compare spectra");
    verify_cmd->add_option("--tol", verify_tol, "multiset matching tolerance (relative)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*deflate_cmd) {
            if (*soft_opt) soft_tol = soft_tol_value;
            return run_deflate(input, split, tol, soft_tol, oracle, transpose_fallback);
        }
        if (*generate_cmd)
            return run_generate(seed_matrix, seed_diag, steps_text, out_path, trace_path, rng_seed);
        if (*lift_cmd) return run_lift(input, split, eigenvalue_text, lift_tol);
        if (*verify_cmd) return run_verify(input, against, verify_tol);
    } catch (const convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const dimension_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitUsage;
}
