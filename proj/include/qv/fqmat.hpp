// Dense exact linear algebra over F_q: RREF, rank, row-space solving,
// kernels, determinants.  These are the library's hot kernels; each has a
// serial reference implementation and an OpenMP variant selected by Mode
// (identical output bit-for-bit: the pivot walk is fixed, only independent
// row updates are parallelized).  A GF(2) bit-packed path is used
// automatically when q == 2.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qv/gfq.hpp"

namespace qv::fqmat {

using gfq::Elt;
using gfq::Field;

struct Mat {
    int rows = 0, cols = 0;
    std::vector<Elt> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0) {}

    Elt& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
    Elt at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
    Elt* row(int i) { return a.data() + std::size_t(i) * cols; }
    const Elt* row(int i) const { return a.data() + std::size_t(i) * cols; }
    std::vector<Elt> row_vec(int i) const {
        return std::vector<Elt>(row(i), row(i) + cols);
    }
    bool operator==(const Mat&) const = default;
};

enum class Mode { Serial, Parallel, Auto };

// In-place reduced row echelon form; returns the pivot columns.
std::vector<int> rref(const Field& F, Mat& M, Mode mode = Mode::Auto);
int rank(const Field& F, Mat M, Mode mode = Mode::Auto);

// Right kernel: rows of the result form a basis of {x : M x = 0}.
Mat right_kernel(const Field& F, const Mat& M);

Mat mat_mul(const Field& F, const Mat& A, const Mat& B);
std::vector<Elt> mat_vec(const Field& F, const Mat& A, const std::vector<Elt>& x);
Mat identity(int n);
Elt det(const Field& F, Mat M);
std::optional<Mat> inverse(const Field& F, const Mat& M);

// Echelon factorization of A answering "is w in the row space, and as which
// combination of the original rows": solve_row(w) returns c with c*A = w.
class Ech {
public:
    Ech() = default;
    Ech(const Field& F, const Mat& A, Mode mode = Mode::Auto);

    int rank() const { return int(piv_.size()); }
    const std::vector<int>& pivots() const { return piv_; }
    bool in_rowspace(const std::vector<Elt>& w) const { return bool(solve_row(w)); }
    std::optional<std::vector<Elt>> solve_row(const std::vector<Elt>& w) const;

private:
    const Field* F_ = nullptr;
    int nrows_ = 0, cols_ = 0;
    bool bit_ = false;
    // Augmented eliminated rows [R | T] with R = T * A, rank rows kept.
    Mat R_;                         // generic path
    int bwords_ = 0;                // bit path: words per augmented row
    std::vector<std::uint64_t> B_;  // bit path rows
    std::vector<int> piv_;
};

}  // namespace qv::fqmat
