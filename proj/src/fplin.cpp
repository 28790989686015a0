#include "pclass/fplin.hpp"

#include <algorithm>

namespace pclass::fplin {

std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    std::uint64_t s = std::uint64_t(a) + b;
    return std::uint32_t(s >= p ? s - p : s);
}

std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return a >= b ? a - b : a + p - b;
}

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return std::uint32_t((std::uint64_t(a) * b) % p);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    if (a == 0) fail(errc::dimension_mismatch, "inverse of zero in F_p");
    // extended Euclid
    long long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (t < 0) t += p;
    return std::uint32_t(t);
}

std::uint32_t norm_mod(long long a, std::uint32_t p) {
    long long r = a % (long long)p;
    if (r < 0) r += p;
    return std::uint32_t(r);
}

bool FpVector::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](std::uint32_t x) { return x == 0; });
}

static void check_same_p(std::uint32_t a, std::uint32_t b) {
    if (a != b) fail(errc::dimension_mismatch, "mixed moduli");
}

FpVector vec_add(const FpVector& a, const FpVector& b) {
    check_same_p(a.p, b.p);
    if (a.size() != b.size()) fail(errc::dimension_mismatch, "vector sizes differ");
    FpVector r(a.p, a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = add_mod(a.c[i], b.c[i], a.p);
    return r;
}

FpVector vec_sub(const FpVector& a, const FpVector& b) {
    check_same_p(a.p, b.p);
    if (a.size() != b.size()) fail(errc::dimension_mismatch, "vector sizes differ");
    FpVector r(a.p, a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = sub_mod(a.c[i], b.c[i], a.p);
    return r;
}

FpVector vec_scale(const FpVector& a, std::uint32_t s) {
    FpVector r(a.p, a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = mul_mod(a.c[i], s % a.p, a.p);
    return r;
}

FpVector unit_vector(std::uint32_t p, std::size_t n, std::size_t i) {
    FpVector r(p, n);
    r.c.at(i) = 1;
    return r;
}

FpMatrix identity(std::uint32_t p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b) {
    check_same_p(a.p, b.p);
    if (a.rows != b.rows || a.cols != b.cols) fail(errc::dimension_mismatch, "mat_add shapes");
    FpMatrix r(a.p, a.rows, a.cols);
    for (std::size_t i = 0; i < a.a.size(); ++i) r.a[i] = add_mod(a.a[i], b.a[i], a.p);
    return r;
}

FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b) {
    check_same_p(a.p, b.p);
    if (a.rows != b.rows || a.cols != b.cols) fail(errc::dimension_mismatch, "mat_sub shapes");
    FpMatrix r(a.p, a.rows, a.cols);
    for (std::size_t i = 0; i < a.a.size(); ++i) r.a[i] = sub_mod(a.a[i], b.a[i], a.p);
    return r;
}

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
    check_same_p(a.p, b.p);
    if (a.cols != b.rows) fail(errc::dimension_mismatch, "mat_mul shapes");
    FpMatrix r(a.p, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            std::uint32_t aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                r.at(i, j) = add_mod(r.at(i, j), mul_mod(aik, b.at(k, j), a.p), a.p);
            }
        }
    }
    return r;
}

FpMatrix mat_pow(const FpMatrix& m, std::size_t e) {
    if (m.rows != m.cols) fail(errc::dimension_mismatch, "mat_pow needs a square matrix");
    FpMatrix acc = identity(m.p, m.rows);
    FpMatrix base = m;
    while (e > 0) {
        if (e & 1) acc = mat_mul(acc, base);
        e >>= 1;
        if (e) base = mat_mul(base, base);
    }
    return acc;
}

FpVector mat_vec(const FpMatrix& m, const FpVector& v) {
    check_same_p(m.p, v.p);
    if (m.cols != v.size()) fail(errc::dimension_mismatch, "mat_vec shapes");
    FpVector r(m.p, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += std::uint64_t(m.at(i, j)) * v.c[j];
        r.c[i] = std::uint32_t(acc % m.p);
    }
    return r;
}

FpMatrix mat_scale(const FpMatrix& m, std::uint32_t s) {
    FpMatrix r(m.p, m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = mul_mod(m.a[i], s % m.p, m.p);
    return r;
}

FpMatrix stack_rows(std::uint32_t p, std::size_t cols, const std::vector<FpVector>& vs) {
    FpMatrix m(p, vs.size(), cols);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        check_same_p(p, vs[i].p);
        if (vs[i].size() != cols) fail(errc::dimension_mismatch, "stack_rows sizes");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = vs[i].c[j];
    }
    return m;
}

// row echelon, in place; returns pivot columns
static std::vector<std::size_t> echelon(FpMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != row) {
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
        }
        std::uint32_t inv = inv_mod(m.at(row, col), m.p);
        for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) = mul_mod(m.at(row, j), inv, m.p);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            std::uint32_t f = m.at(i, col);
            if (f == 0) continue;
            for (std::size_t j = col; j < m.cols; ++j) {
                m.at(i, j) = sub_mod(m.at(i, j), mul_mod(f, m.at(row, j), m.p), m.p);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(const FpMatrix& m) {
    FpMatrix w = m;
    return echelon(w).size();
}

std::vector<FpVector> kernel_basis(const FpMatrix& m) {
    FpMatrix w = m;
    std::vector<std::size_t> pivots = echelon(w);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::vector<FpVector> basis;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        FpVector v(m.p, m.cols);
        v.c[free_col] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            // pivot row r has leading one at pivots[r]
            v.c[pivots[r]] = sub_mod(0, w.at(r, free_col), m.p);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<FpVector> solve(const FpMatrix& m, const FpVector& b) {
    check_same_p(m.p, b.p);
    if (m.rows != b.size()) fail(errc::dimension_mismatch, "solve shapes");
    FpMatrix aug(m.p, m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b.c[i];
    }
    std::vector<std::size_t> pivots = echelon(aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt; // pivot in b column
    FpVector x(m.p, m.cols);
    for (std::size_t r = 0; r < pivots.size(); ++r) x.c[pivots[r]] = aug.at(r, m.cols);
    return x;
}

std::vector<FpVector> image_basis(const FpMatrix& m) {
    FpMatrix w = m;
    std::vector<std::size_t> pivots = echelon(w);
    std::vector<FpVector> basis;
    basis.reserve(pivots.size());
    for (std::size_t c : pivots) {
        FpVector v(m.p, m.rows);
        for (std::size_t i = 0; i < m.rows; ++i) v.c[i] = m.at(i, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<FpMatrix> inverse(const FpMatrix& m) {
    if (m.rows != m.cols) fail(errc::dimension_mismatch, "inverse needs a square matrix");
    FpMatrix aug(m.p, m.rows, 2 * m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols + i) = 1;
    }
    std::vector<std::size_t> pivots = echelon(aug);
    if (pivots.size() != m.rows) return std::nullopt;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] != r) return std::nullopt;
    }
    FpMatrix inv(m.p, m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) inv.at(i, j) = aug.at(i, m.cols + j);
    }
    return inv;
}

bool in_span(const std::vector<FpVector>& span, const FpVector& v) {
    if (span.empty()) return v.is_zero();
    // columns are the span vectors
    FpMatrix m(v.p, v.size(), span.size());
    for (std::size_t j = 0; j < span.size(); ++j) {
        if (span[j].size() != v.size()) fail(errc::dimension_mismatch, "in_span sizes");
        for (std::size_t i = 0; i < v.size(); ++i) m.at(i, j) = span[j].c[i];
    }
    return solve(m, v).has_value();
}

std::vector<std::size_t> extend_basis(const std::vector<FpVector>& base,
                                      const std::vector<FpVector>& pool,
                                      std::size_t dim, std::uint32_t p) {
    std::vector<FpVector> cur = base;
    std::vector<std::size_t> chosen;
    std::size_t r = rank_of(cur, dim, p);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        cur.push_back(pool[i]);
        std::size_t nr = rank_of(cur, dim, p);
        if (nr > r) {
            chosen.push_back(i);
            r = nr;
        } else {
            cur.pop_back();
        }
    }
    return chosen;
}

std::vector<FpVector> intersect_spans(const std::vector<FpVector>& a,
                                      const std::vector<FpVector>& b,
                                      std::size_t dim, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    // x = a-combination = b-combination: kernel of [A | -B] columns
    FpMatrix m(p, dim, a.size() + b.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) m.at(i, j) = a[j].c[i];
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) m.at(i, a.size() + j) = sub_mod(0, b[j].c[i], p);
    std::vector<FpVector> raw;
    for (const FpVector& k : kernel_basis(m)) {
        FpVector x(p, dim);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (k.c[j] == 0) continue;
            x = vec_add(x, vec_scale(a[j], k.c[j]));
        }
        if (!x.is_zero()) raw.push_back(std::move(x));
    }
    // prune to an independent set
    std::vector<FpVector> basis;
    for (const FpVector& v : raw) {
        if (!in_span(basis, v)) basis.push_back(v);
    }
    return basis;
}

std::size_t rank_of(const std::vector<FpVector>& vs, std::size_t dim, std::uint32_t p) {
    if (vs.empty()) return 0;
    return rank(stack_rows(p, dim, vs));
}

} // namespace pclass::fplin
