// Benchmark of the row-reduction kernels: the serial reference implementation
// against the OpenMP variant, on random dense matrices over small fields.
// The serial path is the oracle — both modes must produce identical pivots
// and reduced rows, and the benchmark re-checks that on every input.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "qv/fqmat.hpp"
#include "qv/gfq.hpp"

using qv::fqmat::Mat;
using qv::fqmat::Mode;
using qv::gfq::Elt;
using qv::gfq::Field;

namespace {

Mat random_mat(const Field& F, int rows, int cols, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> dist(0, F.q() - 1);
    Mat M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M.at(i, j) = Elt(dist(rng));
    return M;
}

double bench_ms(const Field& F, const Mat& input, Mode mode, int reps, Mat& out) {
    double best = 1e100;
    for (int t = 0; t < reps; ++t) {
        Mat M = input;
        auto t0 = std::chrono::steady_clock::now();
        qv::fqmat::rref(F, M, mode);
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
        out = M;
    }
    return best;
}

}  // namespace

int main() {
    std::mt19937_64 rng(20260822);
    std::printf("%-8s %-10s %12s %12s %9s\n", "field", "size", "serial(ms)", "openmp(ms)",
                "speedup");
    for (long q : {2L, 3L, 4L}) {
        const Field& F = Field::get_order(q);
        for (int n : {64, 128, 256, 512}) {
            Mat M = random_mat(F, n, n + 16, rng);
            Mat a, b;
            double ts = bench_ms(F, M, Mode::Serial, 3, a);
            double tp = bench_ms(F, M, Mode::Parallel, 3, b);
            if (!(a == b)) {
                std::fprintf(stderr, "MISMATCH: serial and parallel rref disagree (q=%ld n=%d)\n",
                             q, n);
                return 1;
            }
            std::printf("F_%-6ld %4dx%-5d %12.3f %12.3f %8.2fx\n", q, n, n + 16, ts, tp,
                        ts / tp);
        }
    }
    return 0;
}
