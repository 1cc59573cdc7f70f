// Timing harness comparing the serial reference kernels against the OpenMP
// variants, plus end-to-end deflation throughput with batch parallelism.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bordeig/deflation.hpp"
#include "bordeig/eigen.hpp"
#include "bordeig/gen.hpp"
#include "bordeig/kernels.hpp"
#include "bordeig/linalg.hpp"

using namespace bordeig;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void bench_matmul(std::size_t n, gen::Rng& rng) {
    const ComplexMatrix a = gen::random_matrix(n, rng);
    const ComplexMatrix b = gen::random_matrix(n, rng);
    ComplexMatrix out;
    const double ts = time_best_of(3, [&] { kernels::ref::matmul(a, b, out); });
    ComplexMatrix out_p;
    const double tp = time_best_of(3, [&] { kernels::par::matmul(a, b, out_p); });
    const bool same = out == out_p;
    std::printf("matmul            n=%4zu  serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  bitwise_equal=%s\n",
                n, ts * 1e3, tp * 1e3, ts / tp, same ? "yes" : "NO");
}

void bench_matvec(std::size_t n, gen::Rng& rng) {
    const ComplexMatrix a = gen::random_matrix(n, rng);
    const ComplexVector v = gen::random_vector(n, rng);
    ComplexVector out, out_p;
    const double ts = time_best_of(5, [&] {
        for (int r = 0; r < 50; ++r) kernels::ref::matvec(a, v, out);
    });
    const double tp = time_best_of(5, [&] {
        for (int r = 0; r < 50; ++r) kernels::par::matvec(a, v, out_p);
    });
    const bool same = out == out_p;
    std::printf("matvec (x50)      n=%4zu  serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  bitwise_equal=%s\n",
                n, ts * 1e3, tp * 1e3, ts / tp, same ? "yes" : "NO");
}

void bench_gram(std::size_t n, gen::Rng& rng) {
    std::vector<ComplexVector> vecs;
    for (std::size_t k = 0; k < n; ++k) vecs.push_back(gen::random_vector(n, rng));
    double gs = 0, gp = 0;
    const double ts = time_best_of(3, [&] { gs = kernels::ref::gram_max_deviation(vecs); });
    const double tp = time_best_of(3, [&] { gp = kernels::par::gram_max_deviation(vecs); });
    std::printf("gram deviation    n=%4zu  serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  bitwise_equal=%s\n",
                n, ts * 1e3, tp * 1e3, ts / tp, gs == gp ? "yes" : "NO");
}

void bench_eigen(std::size_t n) {
    gen::Rng rng(2024);
    const ComplexMatrix a = gen::random_hermitian(n, rng);
    kernels::set_parallel(false);
    const double ts = time_best_of(2, [&] { (void)eigen_oracle(a); });
    kernels::set_parallel(true);
    const double tp = time_best_of(2, [&] { (void)eigen_oracle(a); });
    std::printf("hermitian eigen   n=%4zu  serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx\n",
                n, ts * 1e3, tp * 1e3, ts / tp);
}

// Independent deflation instances fanned out with OpenMP; the pure-value core
// makes this safe by construction.
void bench_deflation_batch(int count) {
    const std::size_t n = 8;
    std::vector<ComplexMatrix> instances(count);
    for (int t = 0; t < count; ++t) {
        gen::Rng rng(7000 + t);
        ComplexMatrix a = gen::random_hermitian(n + 1, rng);
        instances[t] = a;
    }
    auto run_one = [&](int t) {
        const BorderedView view = partition(instances[t], n);
        const EigenDecomposition eig = eigen_oracle(view.B);
        (void)deflate(view, eig);
    };
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < count; ++t) run_one(t);
    const double ts = seconds_since(t0);
    const auto t1 = std::chrono::steady_clock::now();
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < count; ++t) run_one(t);
    const double tp = seconds_since(t1);
    std::printf("deflate batch     %4d x 9x9   serial %8.1f/s       parallel %8.1f/s       speedup %5.2fx\n",
                count, count / ts, count / tp, ts / tp);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel variants fall back to serial\n");
#endif
    gen::Rng rng(99);
    for (std::size_t n : {64u, 128u, 256u, 384u}) bench_matmul(n, rng);
    for (std::size_t n : {256u, 512u, 1024u}) bench_matvec(n, rng);
    for (std::size_t n : {128u, 256u}) bench_gram(n, rng);
    for (std::size_t n : {64u, 128u, 256u}) bench_eigen(n);
    bench_deflation_batch(400);
    return 0;
}
