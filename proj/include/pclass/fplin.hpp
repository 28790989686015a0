#pragma once

// Dense exact linear algebra over the prime field F_p.
//
// Everything is elimination-based with deterministic pivoting (first nonzero
// entry in column order), so kernel and complement bases are reproducible
// across runs. All dimensions at play are tiny (<= ~32); no attempt is made
// at asymptotically fast algorithms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pclass/errors.hpp"

namespace pclass::fplin {

// residue in [0, p)
struct FpScalar {
    std::uint32_t value = 0;
    std::uint32_t p = 2;
};

std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);
std::uint32_t norm_mod(long long a, std::uint32_t p);

struct FpVector {
    std::uint32_t p = 2;
    std::vector<std::uint32_t> c;

    FpVector() = default;
    FpVector(std::uint32_t p_, std::size_t n) : p(p_), c(n, 0) {}
    FpVector(std::uint32_t p_, std::vector<std::uint32_t> coords) : p(p_), c(std::move(coords)) {}

    std::size_t size() const { return c.size(); }
    bool is_zero() const;
    bool operator==(const FpVector& o) const { return p == o.p && c == o.c; }
};

FpVector vec_add(const FpVector& a, const FpVector& b);
FpVector vec_sub(const FpVector& a, const FpVector& b);
FpVector vec_scale(const FpVector& a, std::uint32_t s);
FpVector unit_vector(std::uint32_t p, std::size_t n, std::size_t i);

struct FpMatrix {
    std::uint32_t p = 2;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> a; // row-major

    FpMatrix() = default;
    FpMatrix(std::uint32_t p_, std::size_t r, std::size_t c) : p(p_), rows(r), cols(c), a(r * c, 0) {}

    std::uint32_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    bool operator==(const FpMatrix& o) const {
        return p == o.p && rows == o.rows && cols == o.cols && a == o.a;
    }
};

FpMatrix identity(std::uint32_t p, std::size_t n);
FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_pow(const FpMatrix& m, std::size_t e);
FpVector mat_vec(const FpMatrix& m, const FpVector& v);
FpMatrix mat_scale(const FpMatrix& m, std::uint32_t s);

// rows of the matrix are the given vectors
FpMatrix stack_rows(std::uint32_t p, std::size_t cols, const std::vector<FpVector>& vs);

std::size_t rank(const FpMatrix& m);

// basis of the right kernel {x : m x = 0}; size == cols - rank
std::vector<FpVector> kernel_basis(const FpMatrix& m);

// any solution of m x = b, or nullopt
std::optional<FpVector> solve(const FpMatrix& m, const FpVector& b);

// basis of the column space, as vectors of length rows
std::vector<FpVector> image_basis(const FpMatrix& m);

std::optional<FpMatrix> inverse(const FpMatrix& m);

bool in_span(const std::vector<FpVector>& span, const FpVector& v);

// indices into `pool` of vectors that extend span(base) to span(base + pool),
// chosen greedily in pool order
std::vector<std::size_t> extend_basis(const std::vector<FpVector>& base,
                                      const std::vector<FpVector>& pool,
                                      std::size_t dim, std::uint32_t p);

// basis of span(a) ∩ span(b)
std::vector<FpVector> intersect_spans(const std::vector<FpVector>& a,
                                      const std::vector<FpVector>& b,
                                      std::size_t dim, std::uint32_t p);

std::size_t rank_of(const std::vector<FpVector>& vs, std::size_t dim, std::uint32_t p);

} // namespace pclass::fplin
