#include "qv/fqmat.hpp"

#include <cstring>
#include <stdexcept>

namespace qv::fqmat {

namespace {

constexpr std::size_t kParallelThreshold = std::size_t(1) << 16;

bool use_parallel(Mode mode, std::size_t work) {
#ifdef QV_HAVE_OPENMP
    if (mode == Mode::Parallel) return true;
    if (mode == Mode::Auto) return work >= kParallelThreshold;
#else
    (void)mode;
    (void)work;
#endif
    return false;
}

// ---------- GF(2) bit-packed elimination ----------

struct BitRows {
    int rows = 0, cols = 0, words = 0;
    std::vector<std::uint64_t> w;
    BitRows(int r, int c)
        : rows(r), cols(c), words((c + 63) / 64), w(std::size_t(r) * words, 0) {}
    std::uint64_t* row(int i) { return w.data() + std::size_t(i) * words; }
    const std::uint64_t* row(int i) const { return w.data() + std::size_t(i) * words; }
    bool get(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1; }
    void set(int i, int j) { row(i)[j >> 6] |= std::uint64_t(1) << (j & 63); }
};

BitRows to_bits(const Mat& M, int extra_identity_cols) {
    BitRows B(M.rows, M.cols + extra_identity_cols);
    for (int i = 0; i < M.rows; ++i) {
        for (int j = 0; j < M.cols; ++j)
            if (M.at(i, j)) B.set(i, j);
        if (extra_identity_cols > 0) B.set(i, M.cols + i);
    }
    return B;
}

// Pivot walk restricted to the first `main_cols` columns; full reduction.
std::vector<int> bit_eliminate(BitRows& B, int main_cols, bool parallel) {
    std::vector<int> piv;
    int pr = 0;
    for (int c = 0; c < main_cols && pr < B.rows; ++c) {
        int sel = -1;
        for (int i = pr; i < B.rows; ++i)
            if (B.get(i, c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != pr)
            for (int k = 0; k < B.words; ++k) std::swap(B.row(sel)[k], B.row(pr)[k]);
        const std::uint64_t* prow = B.row(pr);
        const int w0 = c >> 6;
        if (parallel) {
#ifdef QV_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (int i = 0; i < B.rows; ++i) {
                if (i == pr || !B.get(i, c)) continue;
                std::uint64_t* r = B.row(i);
                for (int k = w0; k < B.words; ++k) r[k] ^= prow[k];
            }
        } else {
            for (int i = 0; i < B.rows; ++i) {
                if (i == pr || !B.get(i, c)) continue;
                std::uint64_t* r = B.row(i);
                for (int k = w0; k < B.words; ++k) r[k] ^= prow[k];
            }
        }
        piv.push_back(c);
        ++pr;
    }
    return piv;
}

// ---------- generic table-driven elimination ----------

std::vector<int> gen_eliminate(const Field& F, Mat& M, int main_cols, bool parallel) {
    std::vector<int> piv;
    int pr = 0;
    const int cols = M.cols;
    for (int c = 0; c < main_cols && pr < M.rows; ++c) {
        int sel = -1;
        for (int i = pr; i < M.rows; ++i)
            if (M.at(i, c) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != pr)
            for (int k = 0; k < cols; ++k) std::swap(M.at(sel, k), M.at(pr, k));
        Elt lead = M.at(pr, c);
        if (lead != 1) {
            Elt li = F.inv(lead);
            Elt* r = M.row(pr);
            for (int k = c; k < cols; ++k) r[k] = F.mul(li, r[k]);
        }
        const Elt* prow = M.row(pr);
        auto update = [&](int i) {
            Elt f = M.at(i, c);
            if (i == pr || f == 0) return;
            Elt* r = M.row(i);
            for (int k = c; k < cols; ++k)
                if (prow[k] != 0) r[k] = F.sub(r[k], F.mul(f, prow[k]));
        };
        if (parallel) {
#ifdef QV_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (int i = 0; i < M.rows; ++i) update(i);
        } else {
            for (int i = 0; i < M.rows; ++i) update(i);
        }
        piv.push_back(c);
        ++pr;
    }
    return piv;
}

}  // namespace

std::vector<int> rref(const Field& F, Mat& M, Mode mode) {
    std::size_t work = std::size_t(M.rows) * M.cols;
    bool par = use_parallel(mode, work);
    if (F.q() == 2) {
        BitRows B = to_bits(M, 0);
        auto piv = bit_eliminate(B, M.cols, par);
        for (int i = 0; i < M.rows; ++i)
            for (int j = 0; j < M.cols; ++j) M.at(i, j) = B.get(i, j) ? 1 : 0;
        return piv;
    }
    return gen_eliminate(F, M, M.cols, par);
}

int rank(const Field& F, Mat M, Mode mode) { return int(rref(F, M, mode).size()); }

Mat right_kernel(const Field& F, const Mat& M) {
    Mat R = M;
    auto piv = rref(F, R, Mode::Serial);
    std::vector<bool> is_piv(M.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < M.cols; ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    Mat K(int(free_cols.size()), M.cols);
    for (int t = 0; t < int(free_cols.size()); ++t) {
        int fc = free_cols[t];
        K.at(t, fc) = 1;
        for (int i = 0; i < int(piv.size()); ++i)
            K.at(t, piv[i]) = F.neg(R.at(i, fc));
    }
    return K;
}

Mat mat_mul(const Field& F, const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            Elt f = A.at(i, k);
            if (f == 0) continue;
            for (int j = 0; j < B.cols; ++j)
                if (B.at(k, j) != 0) C.at(i, j) = F.add(C.at(i, j), F.mul(f, B.at(k, j)));
        }
    return C;
}

std::vector<Elt> mat_vec(const Field& F, const Mat& A, const std::vector<Elt>& x) {
    if (int(x.size()) != A.cols) throw std::invalid_argument("mat_vec: shape mismatch");
    std::vector<Elt> y(A.rows, 0);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            if (A.at(i, j) != 0 && x[j] != 0) y[i] = F.add(y[i], F.mul(A.at(i, j), x[j]));
    return y;
}

Mat identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

Elt det(const Field& F, Mat M) {
    if (M.rows != M.cols) throw std::invalid_argument("det: not square");
    Elt d = 1;
    int n = M.rows;
    for (int c = 0; c < n; ++c) {
        int sel = -1;
        for (int i = c; i < n; ++i)
            if (M.at(i, c) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) return 0;
        if (sel != c) {
            for (int k = 0; k < n; ++k) std::swap(M.at(sel, k), M.at(c, k));
            d = F.neg(d);
        }
        d = F.mul(d, M.at(c, c));
        Elt li = F.inv(M.at(c, c));
        for (int i = c + 1; i < n; ++i) {
            Elt f = F.mul(M.at(i, c), li);
            if (f == 0) continue;
            for (int k = c; k < n; ++k) M.at(i, k) = F.sub(M.at(i, k), F.mul(f, M.at(c, k)));
        }
    }
    return d;
}

std::optional<Mat> inverse(const Field& F, const Mat& M) {
    if (M.rows != M.cols) throw std::invalid_argument("inverse: not square");
    int n = M.rows;
    Mat A(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A.at(i, j) = M.at(i, j);
        A.at(i, n + i) = 1;
    }
    auto piv = gen_eliminate(F, A, n, false);
    if (int(piv.size()) != n) return std::nullopt;
    Mat R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R.at(i, j) = A.at(i, n + j);
    return R;
}

// ---------- Ech ----------

Ech::Ech(const Field& F, const Mat& A, Mode mode) : F_(&F), nrows_(A.rows), cols_(A.cols) {
    std::size_t work = std::size_t(A.rows) * (A.cols + A.rows);
    bool par = use_parallel(mode, work);
    bit_ = (F.q() == 2);
    if (bit_) {
        BitRows B = to_bits(A, A.rows);
        piv_ = bit_eliminate(B, A.cols, par);
        bwords_ = B.words;
        B_.assign(B.w.begin(), B.w.begin() + std::size_t(piv_.size()) * B.words);
    } else {
        Mat B(A.rows, A.cols + A.rows);
        for (int i = 0; i < A.rows; ++i) {
            std::memcpy(B.row(i), A.row(i), sizeof(Elt) * A.cols);
            B.at(i, A.cols + i) = 1;
        }
        piv_ = gen_eliminate(F, B, A.cols, par);
        R_ = Mat(int(piv_.size()), B.cols);
        for (int i = 0; i < int(piv_.size()); ++i) std::memcpy(R_.row(i), B.row(i), sizeof(Elt) * B.cols);
    }
}

std::optional<std::vector<Elt>> Ech::solve_row(const std::vector<Elt>& w) const {
    if (int(w.size()) != cols_) throw std::invalid_argument("Ech::solve_row: length mismatch");
    const Field& F = *F_;
    if (bit_) {
        int aug = cols_ + nrows_;
        std::vector<std::uint64_t> v((aug + 63) / 64, 0);
        for (int j = 0; j < cols_; ++j)
            if (w[j]) v[j >> 6] ^= std::uint64_t(1) << (j & 63);
        for (std::size_t i = 0; i < piv_.size(); ++i) {
            int c = piv_[i];
            if ((v[c >> 6] >> (c & 63)) & 1) {
                const std::uint64_t* r = B_.data() + i * bwords_;
                for (int k = 0; k < bwords_; ++k) v[k] ^= r[k];
            }
        }
        for (int j = 0; j < cols_; ++j)
            if ((v[j >> 6] >> (j & 63)) & 1) return std::nullopt;
        std::vector<Elt> c(nrows_, 0);
        for (int i = 0; i < nrows_; ++i) {
            int j = cols_ + i;
            if ((v[j >> 6] >> (j & 63)) & 1) c[i] = 1;  // -1 == 1 in GF(2)
        }
        return c;
    }
    std::vector<Elt> v(cols_ + nrows_, 0);
    std::copy(w.begin(), w.end(), v.begin());
    for (int i = 0; i < int(piv_.size()); ++i) {
        Elt f = v[piv_[i]];
        if (f == 0) continue;
        const Elt* r = R_.row(i);
        for (int k = piv_[i]; k < cols_ + nrows_; ++k)
            if (r[k] != 0) v[k] = F.sub(v[k], F.mul(f, r[k]));
    }
    for (int j = 0; j < cols_; ++j)
        if (v[j] != 0) return std::nullopt;
    std::vector<Elt> c(nrows_, 0);
    for (int i = 0; i < nrows_; ++i) c[i] = F.neg(v[cols_ + i]);
    return c;
}

}  // namespace qv::fqmat
