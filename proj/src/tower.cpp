#include "pclass/tower.hpp"

#include <algorithm>

#include "pclass/par.hpp"

namespace pclass::tower {

using fplin::FpVector;

FieldElem TowerContext::pow(const FieldElem& x, long long e) const {
    if (e < 0) return pow(inv(x), -e);
    FieldElem acc = one();
    FieldElem base = x;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return acc;
}

FieldElem TowerContext::sigma_pow(const FieldElem& x, unsigned k) const {
    FieldElem r = x;
    for (unsigned i = 0; i < k; ++i) r = sigma(r);
    return r;
}

std::size_t class_count(unsigned p, std::size_t dim) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < dim; ++i) n *= p;
    return n;
}

void decode_exponents(std::size_t index, unsigned p, std::size_t dim, std::vector<std::uint32_t>& e) {
    e.assign(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
        e[i] = std::uint32_t(index % p);
        index /= p;
    }
}

std::size_t encode_exponents(const FpVector& e) {
    std::size_t idx = 0;
    for (std::size_t i = e.size(); i-- > 0;) idx = idx * e.p + e.c[i];
    return idx;
}

struct PresCache {
    std::vector<std::vector<FieldElem>> jpow, jinv; // [i][k] = b_i^{+-k}, k < p
    std::vector<std::vector<FieldElem>> fpow, finv;
    std::vector<int> j_vfp, f_vfp; // valuation fingerprints mod p (empty if unavailable)
    mutable std::mutex mu;
    mutable std::map<std::string, FpVector> j_memo, f_memo;
};

namespace {

std::vector<std::vector<FieldElem>> power_table(const TowerContext& ctx,
                                                const std::vector<FieldElem>& basis, bool inverse) {
    std::vector<std::vector<FieldElem>> t(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        FieldElem b = inverse ? ctx.inv(basis[i]) : basis[i];
        t[i].push_back(ctx.one());
        for (unsigned k = 1; k < ctx.p(); ++k) t[i].push_back(ctx.mul(t[i].back(), b));
    }
    return t;
}

std::vector<int> fingerprints(const TowerContext& ctx, const std::vector<FieldElem>& basis) {
    std::vector<int> v;
    for (const FieldElem& b : basis) {
        auto f = ctx.val_fingerprint(b);
        if (!f) return {};
        v.push_back(*f);
    }
    return v;
}

// exhaustive class search for gamma * prod basis^{-e} in (K^x)^p
template <typename PthTest>
std::optional<FpVector> reduce_search(const TowerContext& ctx, const FieldElem& gamma,
                                      const std::vector<std::vector<FieldElem>>& inv_pows,
                                      const std::vector<int>& vfp, const PthTest& pth) {
    const unsigned p = ctx.p();
    const std::size_t dim = inv_pows.size();
    if (pth(gamma)) return FpVector(p, dim);
    std::optional<int> gfp;
    if (!vfp.empty()) gfp = ctx.val_fingerprint(gamma);

    const std::size_t n = class_count(p, dim);
    auto pred = [&](std::size_t m) {
        if (m == 0) return false;
        std::vector<std::uint32_t> e;
        decode_exponents(m, p, dim, e);
        if (gfp) {
            long s = 0;
            for (std::size_t i = 0; i < dim; ++i) s += (long)e[i] * vfp[i];
            if (((s - *gfp) % (long)p + p) % p != 0) return false;
        }
        FieldElem x = gamma;
        for (std::size_t i = 0; i < dim; ++i) {
            if (e[i]) x = ctx.mul(x, inv_pows[i][e[i]]);
        }
        return pth(x);
    };
    auto idx = par::find_first(n, pred);
    if (!idx) return std::nullopt;
    std::vector<std::uint32_t> e;
    decode_exponents(*idx, p, dim, e);
    return FpVector(p, std::vector<std::uint32_t>(e.begin(), e.end()));
}

// greedy pruning of a candidate pool to an independence-certified basis
template <typename PthTest>
std::vector<FieldElem> certify_generators(const TowerContext& ctx,
                                          const std::vector<FieldElem>& pool,
                                          std::size_t expected, const PthTest& pth,
                                          const char* what) {
    const unsigned p = ctx.p();
    std::vector<FieldElem> basis;
    std::vector<std::vector<FieldElem>> pows; // positive powers of chosen basis
    std::vector<int> vfp;
    bool use_vfp = true;

    for (const FieldElem& cand : pool) {
        if (basis.size() == expected) break;
        if (pth(cand)) continue;
        std::optional<int> cfp = ctx.val_fingerprint(cand);
        if (!cfp) use_vfp = false;

        const std::size_t k = basis.size();
        const std::size_t n = class_count(p, k);
        auto pred = [&](std::size_t m) {
            if (m == 0) return false; // cand itself already tested
            std::vector<std::uint32_t> e;
            decode_exponents(m, p, k, e);
            if (use_vfp) {
                long s = *cfp;
                for (std::size_t i = 0; i < k; ++i) s += (long)e[i] * vfp[i];
                if ((s % (long)p + (long)p) % (long)p != 0) return false;
            }
            FieldElem x = cand;
            for (std::size_t i = 0; i < k; ++i) {
                if (e[i]) x = ctx.mul(x, pows[i][e[i]]);
            }
            return pth(x);
        };
        bool dependent = par::find_first(n, pred).has_value();
        if (dependent) continue;

        basis.push_back(cand);
        pows.emplace_back();
        pows.back().push_back(ctx.one());
        for (unsigned kk = 1; kk < p; ++kk) pows.back().push_back(ctx.mul(pows.back().back(), cand));
        vfp.push_back(use_vfp ? *cfp : 0);
    }
    if (basis.size() != expected) {
        fail(errc::backend_failure,
             std::string(what) + ": candidate pool yielded " + std::to_string(basis.size()) +
                 " independent classes, expected " + std::to_string(expected));
    }
    return basis;
}

} // namespace

std::vector<FieldElem> unit_class_generators_K(const TowerContext& ctx) {
    if (!ctx.j_finite()) fail(errc::infinite_j, "J is infinite for this backend");
    return certify_generators(
        ctx, ctx.j_candidate_generators(), ctx.j_expected_dim(),
        [&](const FieldElem& x) { return ctx.is_pth_power(x); }, "unit_class_generators(K)");
}

std::vector<FieldElem> unit_class_generators_F(const TowerContext& ctx) {
    if (!ctx.j_finite()) fail(errc::infinite_j, "J is infinite for this backend");
    return certify_generators(
        ctx, ctx.f_candidate_generators(), ctx.f_expected_dim(),
        [&](const FieldElem& x) { return ctx.is_pth_power_in_F(x); }, "unit_class_generators(F)");
}

JPresentation build_J(const TowerContext& ctx) {
    if (!ctx.j_finite()) fail(errc::infinite_j, "build_J requires a finite J (local backend)");
    JPresentation pres;
    pres.p = ctx.p();

    pres.f_basis_reps = unit_class_generators_F(ctx);
    pres.f_dim = pres.f_basis_reps.size();
    pres.basis_reps = unit_class_generators_K(ctx);

    auto cache = std::make_shared<PresCache>();
    cache->jpow = power_table(ctx, pres.basis_reps, false);
    cache->jinv = power_table(ctx, pres.basis_reps, true);
    cache->fpow = power_table(ctx, pres.f_basis_reps, false);
    cache->finv = power_table(ctx, pres.f_basis_reps, true);
    cache->j_vfp = fingerprints(ctx, pres.basis_reps);
    cache->f_vfp = fingerprints(ctx, pres.f_basis_reps);
    pres.cache = cache;

    for (std::size_t i = 0; i < pres.basis_reps.size(); ++i) {
        if (ctx.is_in_F(pres.basis_reps[i])) pres.epsilon_basis.push_back(i);
    }

    const std::size_t dim = pres.dim();
    fplin::FpMatrix sig(pres.p, dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        FpVector col = reduce(ctx, pres, ctx.sigma(pres.basis_reps[j]));
        for (std::size_t i = 0; i < dim; ++i) sig.at(i, j) = col.c[i];
    }
    pres.module = gmodule::GModule::make(pres.p, std::move(sig));

    pres.a_class_f = reduce_F(ctx, pres, ctx.a_elem());
    if (pres.a_class_f.is_zero()) fail(errc::a_pth_power, "a is a p-th power in F");
    pres.zeta_class_f = reduce_F(ctx, pres, ctx.zeta());
    pres.zeta_class_j = reduce(ctx, pres, ctx.zeta());
    pres.root_a_class_j = reduce(ctx, pres, ctx.root_a());
    for (const FieldElem& b : pres.basis_reps) {
        pres.f_norm_classes.push_back(reduce_F(ctx, pres, ctx.norm(b)));
    }
    return pres;
}

FpVector reduce(const TowerContext& ctx, const JPresentation& pres, const FieldElem& gamma) {
    if (ctx.is_zero(gamma)) fail(errc::backend_failure, "reduce of zero");
    std::string key;
    {
        key = ctx.canonical_form(gamma);
        std::lock_guard<std::mutex> lk(pres.cache->mu);
        auto it = pres.cache->j_memo.find(key);
        if (it != pres.cache->j_memo.end()) return it->second;
    }
    auto r = reduce_search(ctx, gamma, pres.cache->jinv, pres.cache->j_vfp,
                           [&](const FieldElem& x) { return ctx.is_pth_power(x); });
    if (!r) fail(errc::not_in_span, "class not in the presentation span (broken presentation)");
    {
        std::lock_guard<std::mutex> lk(pres.cache->mu);
        pres.cache->j_memo.emplace(std::move(key), *r);
    }
    return *r;
}

ClassVector reduce_class(const TowerContext& ctx, const JPresentation& pres, const FieldElem& gamma) {
    return ClassVector{reduce(ctx, pres, gamma), gamma};
}

FieldElem lift(const TowerContext& ctx, const JPresentation& pres, const FpVector& coords) {
    if (coords.size() != pres.dim()) fail(errc::dimension_mismatch, "lift coords size");
    FieldElem x = ctx.one();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords.c[i]) x = ctx.mul(x, pres.cache->jpow[i][coords.c[i]]);
    }
    return x;
}

FpVector reduce_F(const TowerContext& ctx, const JPresentation& pres, const FieldElem& x) {
    if (ctx.is_zero(x)) fail(errc::backend_failure, "reduce_F of zero");
    if (!ctx.is_in_F(x)) fail(errc::backend_failure, "reduce_F of an element outside F");
    std::string key;
    {
        key = ctx.canonical_form(x);
        std::lock_guard<std::mutex> lk(pres.cache->mu);
        auto it = pres.cache->f_memo.find(key);
        if (it != pres.cache->f_memo.end()) return it->second;
    }
    auto r = reduce_search(ctx, x, pres.cache->finv, pres.cache->f_vfp,
                           [&](const FieldElem& y) { return ctx.is_pth_power_in_F(y); });
    if (!r) fail(errc::not_in_span, "F-class not in the presentation span");
    {
        std::lock_guard<std::mutex> lk(pres.cache->mu);
        pres.cache->f_memo.emplace(std::move(key), *r);
    }
    return *r;
}

FieldElem lift_F(const TowerContext& ctx, const JPresentation& pres, const FpVector& coords) {
    if (coords.size() != pres.f_dim) fail(errc::dimension_mismatch, "lift_F coords size");
    FieldElem x = ctx.one();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords.c[i]) x = ctx.mul(x, pres.cache->fpow[i][coords.c[i]]);
    }
    return x;
}

std::vector<FpVector> norm_class_map(const TowerContext& ctx, const JPresentation& pres) {
    (void)ctx;
    return pres.f_norm_classes;
}

std::vector<FpVector> epsilon_image(const TowerContext& ctx, const JPresentation& pres) {
    std::vector<FpVector> out;
    out.reserve(pres.f_dim);
    for (const FieldElem& f : pres.f_basis_reps) out.push_back(reduce(ctx, pres, f));
    return out;
}

namespace {

FpVector linear_norm_class(const JPresentation& pres, const std::vector<std::uint32_t>& e) {
    FpVector cls(pres.p, pres.f_dim);
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        cls = fplin::vec_add(cls, fplin::vec_scale(pres.f_norm_classes[i], e[i]));
    }
    return cls;
}

} // namespace

CertifiedProfile certify_and_profile(const TowerContext& ctx, const JPresentation& pres) {
    const unsigned p = pres.p;
    const std::size_t dim = pres.dim();
    const std::size_t n = class_count(p, dim);

    // independence: no nontrivial exponent combination is a p-th power
    auto bad = par::find_first(n - 1, [&](std::size_t m) {
        std::vector<std::uint32_t> e;
        decode_exponents(m + 1, p, dim, e);
        return ctx.is_pth_power(lift(ctx, pres, FpVector(p, std::vector<std::uint32_t>(e.begin(), e.end()))));
    });
    if (bad) fail(errc::backend_failure, "presentation independence certification failed");

    // norm classes of all p^dim classes via the (checked) norm-class homomorphism
    const std::size_t fn = class_count(p, pres.f_dim);
    std::vector<char> hits(fn, 0);
    std::vector<std::uint32_t> e;
    for (std::size_t m = 0; m < n; ++m) {
        decode_exponents(m, p, dim, e);
        hits[encode_exponents(linear_norm_class(pres, e))] = 1;
    }
    std::size_t count = 0;
    for (char h : hits) count += (h != 0);
    std::size_t rank = 0;
    {
        std::size_t c = count;
        while (c > 1) {
            c /= p;
            ++rank;
        }
        if (count != class_count(p, rank)) {
            fail(errc::backend_failure, "norm-class image is not a subgroup (arithmetic bug)");
        }
    }

    // field-level cross-check of the homomorphism on a sample of classes
    std::size_t samples = std::min<std::size_t>(n, 96);
    std::size_t stride = std::max<std::size_t>(1, n / samples);
    std::size_t checked = 0;
    for (std::size_t m = 0; m < n; m += stride) {
        decode_exponents(m, p, dim, e);
        FpVector expect = linear_norm_class(pres, e);
        FieldElem x = lift(ctx, pres, FpVector(p, std::vector<std::uint32_t>(e.begin(), e.end())));
        FpVector got = reduce_F(ctx, pres, ctx.norm(x));
        if (!(got == expect)) fail(errc::backend_failure, "norm-class map failed field-level cross-check");
        ++checked;
    }

    CertifiedProfile cp;
    cp.combos_tested = n - 1;
    cp.norm_samples = checked;
    cp.norm_class_rank = rank;
    cp.invariants.p = p;
    cp.invariants.upsilon = hits[encode_exponents(pres.zeta_class_f)] ? 1 : 0;
    cp.invariants.dim_nj = fplin::rank(gmodule::norm_operator(pres.module));
    cp.invariants.dim_f_mod_nk = pres.f_dim - rank;
    cp.invariants.dim_epsilon =
        fplin::rank_of(epsilon_image(ctx, pres), pres.dim(), p);
    return cp;
}

std::optional<FpVector> find_class_with_norm_class(const TowerContext& ctx,
                                                   const JPresentation& pres,
                                                   const FpVector& target) {
    (void)ctx;
    const unsigned p = pres.p;
    const std::size_t dim = pres.dim();
    const std::size_t n = class_count(p, dim);
    std::vector<std::uint32_t> e;
    for (std::size_t m = 0; m < n; ++m) {
        decode_exponents(m, p, dim, e);
        if (linear_norm_class(pres, e) == target) {
            return FpVector(p, std::vector<std::uint32_t>(e.begin(), e.end()));
        }
    }
    return std::nullopt;
}

} // namespace pclass::tower
