#pragma once

// F_p[G]-modules for cyclic G = <sigma> of order p, given as a dimension and
// the matrix of sigma. Socle series, norm operator, Jordan decomposition of
// the nilpotent operator sigma - 1, and direct-sum verification. This module
// is the independent oracle against which the arithmetic constructions are
// cross-checked.

#include <cstdint>
#include <map>
#include <vector>

#include "pclass/fplin.hpp"

namespace pclass::gmodule {

using fplin::FpMatrix;
using fplin::FpVector;

struct GModule {
    std::uint32_t p = 2;
    std::size_t dim = 0;
    FpMatrix sigma;

    // validates: sigma square and invertible, sigma^p = I
    static GModule make(std::uint32_t p, FpMatrix sigma);

    // no validation; for fault-injection tests only
    static GModule make_unchecked(std::uint32_t p, FpMatrix sigma);

    FpMatrix sigma_minus_one() const;
};

struct CyclicSummand {
    FpVector generator;
    std::uint32_t length = 0;
    std::vector<FpVector> basis; // generator, (sigma-1) generator, ...
};

struct Decomposition {
    std::vector<CyclicSummand> parts;
};

// m[i] = number of cyclic summands of length i, i in 1..p
struct MultiplicityVector {
    std::uint32_t p = 2;
    std::vector<std::size_t> counts; // counts[i-1] = m_i

    MultiplicityVector() = default;
    MultiplicityVector(std::uint32_t p_, std::vector<std::size_t> c) : p(p_), counts(std::move(c)) {}
    static MultiplicityVector zero(std::uint32_t p) {
        return MultiplicityVector(p, std::vector<std::size_t>(p, 0));
    }

    std::size_t& m(std::uint32_t length) { return counts.at(length - 1); }
    std::size_t m(std::uint32_t length) const { return counts.at(length - 1); }
    std::size_t total_dim() const;
    bool operator==(const MultiplicityVector& o) const { return p == o.p && counts == o.counts; }
};

// [dim ker(sigma-1)^1, ..., dim ker(sigma-1)^p]; weakly increasing, ends at dim
std::vector<std::size_t> socle_series(const GModule& m);

// N = 1 + sigma + ... + sigma^{p-1}; equals (sigma-1)^{p-1} over F_p
FpMatrix norm_operator(const GModule& m);

// m_i = r_{i-1} - 2 r_i + r_{i+1} with r_j = rank (sigma-1)^j
MultiplicityVector jordan_multiplicities(const GModule& m);

// chain through v: length = min i with (sigma-1)^i v = 0
CyclicSummand cyclic_submodule(const GModule& m, const FpVector& v);

// deterministic Jordan-chain basis adapted to the kernel filtration
Decomposition decompose_jordan(const GModule& m);

// true iff all part bases stack to rank sum-of-lengths = dim, each part is a
// well-formed chain, and each part is sigma-stable; false on malformed input
bool verify_direct_sum(const GModule& m, const std::vector<CyclicSummand>& parts);

// basis of ker(sigma - 1)
std::vector<FpVector> fixed_submodule(const GModule& m);

// block-diagonal normal form with the given profile, conjugated by a seeded
// random invertible matrix
GModule random_module(std::uint32_t p, const MultiplicityVector& profile, std::uint64_t seed);

MultiplicityVector profile_of(std::uint32_t p, const std::vector<CyclicSummand>& parts);

} // namespace pclass::gmodule
