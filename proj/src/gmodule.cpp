#include "pclass/gmodule.hpp"

#include <random>

namespace pclass::gmodule {

using namespace fplin;

GModule GModule::make(std::uint32_t p, FpMatrix sigma) {
    if (sigma.rows != sigma.cols) fail(errc::invalid_module, "sigma must be square");
    if (sigma.p != p) fail(errc::invalid_module, "sigma modulus mismatch");
    GModule m;
    m.p = p;
    m.dim = sigma.rows;
    m.sigma = std::move(sigma);
    if (!inverse(m.sigma)) fail(errc::invalid_module, "sigma not invertible");
    if (!(mat_pow(m.sigma, p) == identity(p, m.dim))) fail(errc::invalid_module, "sigma^p != I");
    return m;
}

GModule GModule::make_unchecked(std::uint32_t p, FpMatrix sigma) {
    GModule m;
    m.p = p;
    m.dim = sigma.rows;
    m.sigma = std::move(sigma);
    return m;
}

FpMatrix GModule::sigma_minus_one() const {
    return mat_sub(sigma, identity(p, dim));
}

std::size_t MultiplicityVector::total_dim() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += (i + 1) * counts[i];
    return t;
}

std::vector<std::size_t> socle_series(const GModule& m) {
    std::vector<std::size_t> out;
    FpMatrix t = m.sigma_minus_one();
    FpMatrix power = t;
    for (std::uint32_t i = 1; i <= m.p; ++i) {
        out.push_back(m.dim - rank(power));
        if (i < m.p) power = mat_mul(power, t);
    }
    return out;
}

FpMatrix norm_operator(const GModule& m) {
    FpMatrix acc = identity(m.p, m.dim);
    FpMatrix pw = identity(m.p, m.dim);
    for (std::uint32_t i = 1; i < m.p; ++i) {
        pw = mat_mul(pw, m.sigma);
        acc = mat_add(acc, pw);
    }
    return acc;
}

MultiplicityVector jordan_multiplicities(const GModule& m) {
    FpMatrix t = m.sigma_minus_one();
    // r[j] = rank t^j, j = 0..p+1 (r_j = 0 for j >= p by sigma^p = I)
    std::vector<std::size_t> r(m.p + 2, 0);
    r[0] = m.dim;
    FpMatrix power = identity(m.p, m.dim);
    for (std::uint32_t j = 1; j <= m.p; ++j) {
        power = mat_mul(power, t);
        r[j] = rank(power);
    }
    if (r[m.p] != 0) fail(errc::invalid_module, "(sigma-1)^p != 0");
    MultiplicityVector mv = MultiplicityVector::zero(m.p);
    for (std::uint32_t i = 1; i <= m.p; ++i) {
        mv.m(i) = r[i - 1] - 2 * r[i] + r[i + 1];
    }
    return mv;
}

CyclicSummand cyclic_submodule(const GModule& m, const FpVector& v) {
    if (v.is_zero()) fail(errc::zero_vector, "cyclic_submodule of the zero vector");
    if (v.size() != m.dim) fail(errc::dimension_mismatch, "vector size");
    FpMatrix t = m.sigma_minus_one();
    CyclicSummand s;
    s.generator = v;
    FpVector w = v;
    while (!w.is_zero()) {
        s.basis.push_back(w);
        if (s.basis.size() > m.p) fail(errc::invalid_module, "(sigma-1) not nilpotent of order p");
        w = mat_vec(t, w);
    }
    s.length = std::uint32_t(s.basis.size());
    return s;
}

Decomposition decompose_jordan(const GModule& m) {
    FpMatrix t = m.sigma_minus_one();

    // kernel bases of t^i, i = 0..p
    std::vector<std::vector<FpVector>> ker(m.p + 1);
    FpMatrix power = identity(m.p, m.dim);
    for (std::uint32_t i = 1; i <= m.p; ++i) {
        power = mat_mul(power, t);
        ker[i] = kernel_basis(power);
    }

    // pick chain tops from the highest length down; `carried` holds the
    // images under t of all chains chosen at strictly higher lengths
    std::vector<std::pair<FpVector, std::uint32_t>> tops; // (top, length)
    std::vector<FpVector> carried;
    for (std::uint32_t level = m.p; level >= 1; --level) {
        std::vector<FpVector> spanned = ker[level - 1];
        spanned.insert(spanned.end(), carried.begin(), carried.end());
        std::vector<std::size_t> chosen = extend_basis(spanned, ker[level], m.dim, m.p);
        for (std::size_t idx : chosen) {
            tops.emplace_back(ker[level][idx], level);
            carried.push_back(ker[level][idx]);
        }
        if (level > 1) {
            for (FpVector& w : carried) w = mat_vec(t, w);
        }
    }

    Decomposition d;
    for (const auto& [top, len] : tops) {
        CyclicSummand s = cyclic_submodule(m, top);
        if (s.length != len) fail(errc::invalid_module, "chain length mismatch in decomposition");
        d.parts.push_back(std::move(s));
    }
    return d;
}

bool verify_direct_sum(const GModule& m, const std::vector<CyclicSummand>& parts) {
    if (parts.empty()) return m.dim == 0;
    FpMatrix t = m.sigma_minus_one();
    std::vector<FpVector> all;
    std::size_t total = 0;
    for (const CyclicSummand& s : parts) {
        if (s.length == 0 || s.length > m.p) return false;
        if (s.basis.size() != s.length) return false;
        if (s.generator.size() != m.dim || s.generator.is_zero()) return false;
        if (!(s.basis[0] == s.generator)) return false;
        // chain structure: basis[j+1] = t basis[j], and t basis[last] = 0
        for (std::uint32_t j = 0; j + 1 < s.length; ++j) {
            if (s.basis[j].size() != m.dim) return false;
            if (!(mat_vec(t, s.basis[j]) == s.basis[j + 1])) return false;
        }
        if (!mat_vec(t, s.basis[s.length - 1]).is_zero()) return false;
        // sigma-stability up to span
        for (const FpVector& b : s.basis) {
            if (!in_span(s.basis, mat_vec(m.sigma, b))) return false;
        }
        total += s.length;
        all.insert(all.end(), s.basis.begin(), s.basis.end());
    }
    if (total != m.dim) return false;
    return rank_of(all, m.dim, m.p) == m.dim;
}

std::vector<FpVector> fixed_submodule(const GModule& m) {
    return kernel_basis(m.sigma_minus_one());
}

GModule random_module(std::uint32_t p, const MultiplicityVector& profile, std::uint64_t seed) {
    std::size_t dim = profile.total_dim();
    // block-diagonal unipotent normal form
    FpMatrix nf(p, dim, dim);
    std::size_t off = 0;
    for (std::uint32_t len = p; len >= 1; --len) {
        for (std::size_t k = 0; k < profile.m(len); ++k) {
            for (std::uint32_t i = 0; i < len; ++i) {
                nf.at(off + i, off + i) = 1;
                if (i + 1 < len) nf.at(off + i + 1, off + i) = 1; // (sigma-1) maps e_i -> e_{i+1}
            }
            off += len;
        }
        if (len == 1) break;
    }
    if (dim == 0) return GModule::make(p, nf);

    std::mt19937_64 eng(seed);
    for (;;) {
        FpMatrix s(p, dim, dim);
        for (std::size_t i = 0; i < dim * dim; ++i) s.a[i] = std::uint32_t(eng() % p);
        auto inv = inverse(s);
        if (!inv) continue;
        return GModule::make(p, mat_mul(mat_mul(s, nf), *inv));
    }
}

MultiplicityVector profile_of(std::uint32_t p, const std::vector<CyclicSummand>& parts) {
    MultiplicityVector mv = MultiplicityVector::zero(p);
    for (const CyclicSummand& s : parts) mv.m(s.length) += 1;
    return mv;
}

} // namespace pclass::gmodule
