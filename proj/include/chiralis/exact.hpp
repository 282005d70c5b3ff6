#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chiralis {

using Scalar = mpq_class;

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline Scalar parse_scalar(const std::string& s) {
    Scalar q;
    if (q.set_str(s, 10) != 0) throw input_error("malformed rational: " + s);
    if (q.get_den() == 0) throw input_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Scalar& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Scalar binomial(long n, long k) {
    // generalized: n may be negative
    if (k < 0) return 0;
    Scalar r = 1;
    for (long i = 0; i < k; ++i) {
        r *= Scalar(n - i);
        r /= Scalar(i + 1);
    }
    return r;
}

inline Scalar factorial(long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(f);
}

struct ParityDegree {
    int parity = 0;
    int degree = 0;

    friend ParityDegree operator+(ParityDegree a, ParityDegree b) {
        return {(a.parity + b.parity) & 1, a.degree + b.degree};
    }
    friend bool operator==(const ParityDegree&, const ParityDegree&) = default;
};

// Permutations are 1-indexed: p[k-1] = sigma(k).
using Perm = std::vector<int>;

inline Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 1);
    return p;
}

inline bool is_perm(const Perm& p) {
    std::vector<char> seen(p.size() + 1, 0);
    for (int v : p) {
        if (v < 1 || v > static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

// (s o t)(k) = s(t(k))
inline Perm compose(const Perm& s, const Perm& t) {
    Perm r(t.size());
    for (size_t k = 0; k < t.size(); ++k) r[k] = s[t[k] - 1];
    return r;
}

inline Perm inverse(const Perm& p) {
    Perm r(p.size());
    for (size_t k = 0; k < p.size(); ++k) r[p[k] - 1] = static_cast<int>(k) + 1;
    return r;
}

inline int perm_sign(const Perm& p) {
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

// Sign of x_1...x_n -> x_{s1}...x_{sn}; only parities of the degrees matter.
inline int koszul_sign_int(const Perm& sigma, const std::vector<int>& degrees) {
    if (sigma.size() != degrees.size()) throw input_error("koszul_sign: length mismatch");
    if (!is_perm(sigma)) throw input_error("koszul_sign: not a permutation");
    int s = 1;
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j] && (degrees[sigma[i] - 1] & 1) && (degrees[sigma[j] - 1] & 1)) s = -s;
    return s;
}

inline Scalar koszul_sign(const Perm& sigma, const std::vector<int>& degrees) {
    return koszul_sign_int(sigma, degrees);
}

// (i, n-i) unshuffles, lexicographic in the first block.
inline std::vector<Perm> unshuffles(int i, int n) {
    if (n < 0 || i < 0 || i > n) throw input_error("unshuffles: block size out of range");
    std::vector<Perm> out;
    std::vector<int> pick(i);
    std::iota(pick.begin(), pick.end(), 1);
    while (true) {
        Perm p(pick.begin(), pick.end());
        std::vector<char> used(n + 1, 0);
        for (int v : pick) used[v] = 1;
        for (int v = 1; v <= n; ++v)
            if (!used[v]) p.push_back(v);
        out.push_back(std::move(p));
        int k = i - 1;
        while (k >= 0 && pick[k] == n - i + k + 1) --k;
        if (k < 0) break;
        ++pick[k];
        for (int t = k + 1; t < i; ++t) pick[t] = pick[t - 1] + 1;
    }
    return out;
}

inline std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = identity_perm(n);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

using Vec = std::vector<Scalar>;

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw input_error("negative matrix shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, const Scalar& v) {
        check(r, c);
        if (sgn(v) == 0)
            entries_.erase({r, c});
        else
            entries_[{r, c}] = v;
    }
    void add(int r, int c, const Scalar& v) {
        check(r, c);
        auto it = entries_.find({r, c});
        if (it == entries_.end()) {
            if (sgn(v) != 0) entries_.emplace(std::make_pair(r, c), v);
            return;
        }
        it->second += v;
        if (sgn(it->second) == 0) entries_.erase(it);
    }
    Scalar get(int r, int c) const {
        auto it = entries_.find({r, c});
        return it == entries_.end() ? Scalar(0) : it->second;
    }
    const std::map<std::pair<int, int>, Scalar>& entries() const { return entries_; }
    size_t nnz() const { return entries_.size(); }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (auto& [rc, v] : entries_) t.entries_[{rc.second, rc.first}] = v;
        return t;
    }

    Vec apply(const Vec& x) const {
        if (static_cast<int>(x.size()) != cols_) throw input_error("matrix-vector shape mismatch");
        Vec y(rows_, Scalar(0));
        for (auto& [rc, v] : entries_) y[rc.first] += v * x[rc.second];
        return y;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw input_error("matrix product shape mismatch");
        SparseMatrix c(a.rows_, b.cols_);
        std::vector<std::vector<std::pair<int, Scalar>>> brow(b.rows_);
        for (auto& [rc, v] : b.entries_) brow[rc.first].emplace_back(rc.second, v);
        for (auto& [rc, v] : a.entries_)
            for (auto& [col, w] : brow[rc.second]) c.add(rc.first, col, v * w);
        return c;
    }

    bool is_zero() const { return entries_.empty(); }

private:
    void check(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw input_error("matrix index out of bounds");
    }
    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, Scalar> entries_;
};

struct RankKernel {
    int rank = 0;
    std::vector<Vec> kernel;
    std::vector<int> pivot_cols;
};

inline size_t bit_size(const Scalar& q) {
    mpz_class p = q.get_num() * q.get_den();
    return mpz_sizeinbase(p.get_mpz_t(), 2);
}

// Reduced row echelon form by pivoted elimination; pivot = smallest bit size of
// numerator*denominator in the leftmost unprocessed column, ties to lowest row.
inline RankKernel rank_kernel(const SparseMatrix& m) {
    using Row = std::map<int, Scalar>;
    std::vector<Row> rows(m.rows());
    for (auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;

    std::vector<char> done(m.rows(), 0);
    std::vector<int> pivot_row_of_col(m.cols(), -1);
    std::vector<int> order;
    RankKernel out;

    for (int c = 0; c < m.cols(); ++c) {
        int best = -1;
        size_t best_size = 0;
        for (int r = 0; r < m.rows(); ++r) {
            if (done[r]) continue;
            auto it = rows[r].find(c);
            if (it == rows[r].end()) continue;
            size_t s = bit_size(it->second);
            if (best < 0 || s < best_size) {
                best = r;
                best_size = s;
            }
        }
        if (best < 0) continue;
        done[best] = 1;
        pivot_row_of_col[c] = best;
        out.pivot_cols.push_back(c);
        Scalar inv = 1 / rows[best][c];
        for (auto& [k, v] : rows[best]) v *= inv;
        const Row prow = rows[best];
        for (int r = 0; r < m.rows(); ++r) {
            if (r == best) continue;
            auto it = rows[r].find(c);
            if (it == rows[r].end()) continue;
            Scalar f = it->second;
            for (auto& [k, v] : prow) {
                Scalar& t = rows[r][k];
                t -= f * v;
                if (sgn(t) == 0) rows[r].erase(k);
            }
        }
    }
    out.rank = static_cast<int>(out.pivot_cols.size());
    for (int f = 0; f < m.cols(); ++f) {
        if (pivot_row_of_col[f] >= 0) continue;
        Vec k(m.cols(), Scalar(0));
        k[f] = 1;
        for (int pc : out.pivot_cols) {
            auto it = rows[pivot_row_of_col[pc]].find(f);
            if (it != rows[pivot_row_of_col[pc]].end()) k[pc] = -it->second;
        }
        out.kernel.push_back(std::move(k));
    }
    return out;
}

inline int rank(const SparseMatrix& m) { return rank_kernel(m).rank; }

}  // namespace chiralis
