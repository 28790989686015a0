#include <doctest.h>

#include "pclass/local.hpp"
#include "pclass/par.hpp"
#include "pclass/quadratic.hpp"
#include "pclass/tower.hpp"

using namespace pclass;
using namespace pclass::tower;
using fplin::FpVector;

namespace {

std::shared_ptr<TowerContext> ctx_of(unsigned ell, unsigned p, const char* a) {
    return local::make_K(local::make_base(ell, p), a);
}

} // namespace

TEST_CASE("build_J: dimensions of the flagship cases") {
    auto c1 = ctx_of(3, 2, "3");
    CHECK(build_J(*c1).dim() == 2);
    auto c2 = ctx_of(7, 3, "7");
    CHECK(build_J(*c2).dim() == 2);
    auto c3 = ctx_of(2, 2, "2");
    CHECK(build_J(*c3).dim() == 4);
}

TEST_CASE("build_J rejects infinite J") {
    auto q = quadratic::make_quadratic_tower(2);
    CHECK_THROWS_AS((void)build_J(*q), error);
}

TEST_CASE("reduce: basis vectors, p-th powers, homomorphism") {
    auto ctx = ctx_of(3, 2, "3");
    JPresentation pres = build_J(*ctx);

    for (std::size_t i = 0; i < pres.dim(); ++i) {
        FpVector e = reduce(*ctx, pres, pres.basis_reps[i]);
        CHECK(e == fplin::unit_vector(pres.p, pres.dim(), i));
    }

    FieldElem k = ctx->random_element(5);
    CHECK(reduce(*ctx, pres, ctx->mul(k, k)).is_zero());

    FieldElem prod = ctx->mul(pres.basis_reps[0], pres.basis_reps[1]);
    CHECK(reduce(*ctx, pres, prod) == FpVector(2, {1, 1}));

    for (std::uint64_t s = 1; s <= 6; ++s) {
        FieldElem x = ctx->random_element(s);
        FieldElem y = ctx->random_element(s + 100);
        FpVector sum = fplin::vec_add(reduce(*ctx, pres, x), reduce(*ctx, pres, y));
        CHECK(reduce(*ctx, pres, ctx->mul(x, y)) == sum);
    }
}

TEST_CASE("reduce round-trips lift") {
    auto ctx = ctx_of(2, 2, "5");
    JPresentation pres = build_J(*ctx);
    const std::size_t n = class_count(pres.p, pres.dim());
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<std::uint32_t> e;
        decode_exponents(m, pres.p, pres.dim(), e);
        FpVector coords(pres.p, std::vector<std::uint32_t>(e.begin(), e.end()));
        CHECK(reduce(*ctx, pres, lift(*ctx, pres, coords)) == coords);
    }
}

TEST_CASE("sigma matrix satisfies the module axioms and the norm identity on classes") {
    for (auto [ell, p, a] : std::vector<std::tuple<unsigned, unsigned, const char*>>{
             {3, 2, "3"}, {7, 3, "7"}, {13, 3, "13*u"}, {2, 2, "-1"}}) {
        auto ctx = ctx_of(ell, p, a);
        JPresentation pres = build_J(*ctx);
        // GModule::make already validated sigma^p = 1 and invertibility
        CHECK(pres.module.dim == pres.dim());

        // product formula on classes: reduce(N(gamma)) = N_op reduce(gamma)
        fplin::FpMatrix nop = gmodule::norm_operator(pres.module);
        for (std::uint64_t s = 1; s <= 5; ++s) {
            FieldElem g = ctx->random_element(s);
            FpVector lhs = reduce(*ctx, pres, ctx->norm(g));
            FpVector rhs = fplin::mat_vec(nop, reduce(*ctx, pres, g));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("norm_class_map: trivial on p-th powers, root_a maps to [a] (odd p)") {
    auto ctx = ctx_of(7, 3, "7");
    JPresentation pres = build_J(*ctx);
    FieldElem k = ctx->random_element(9);
    CHECK(reduce_F(*ctx, pres, ctx->norm(ctx->pow(k, 3))).is_zero());
    CHECK(reduce_F(*ctx, pres, ctx->norm(ctx->root_a())) == pres.a_class_f);

    auto c2 = ctx_of(3, 2, "3");
    JPresentation p2 = build_J(*c2);
    // full norm-class image for Q_3(sqrt 3)/Q_3 has dimension 1
    CHECK(fplin::rank_of(p2.f_norm_classes, p2.f_dim, 2) == 1);
}

TEST_CASE("epsilon image: p-th powers vanish, [a] vanishes, dim for Q_3(sqrt 3)") {
    auto ctx = ctx_of(3, 2, "3");
    JPresentation pres = build_J(*ctx);
    CHECK(reduce(*ctx, pres, ctx->from_integer(4)).is_zero()); // 4 = 2^2 in F
    CHECK(reduce(*ctx, pres, ctx->a_elem()).is_zero());        // a = root_a^p
    std::vector<FpVector> eps = epsilon_image(*ctx, pres);
    CHECK(fplin::rank_of(eps, pres.dim(), pres.p) == 1);
    CHECK(pres.epsilon_basis.size() == 1);
}

TEST_CASE("epsilon_basis indices really span the epsilon image") {
    for (auto [ell, p, a] : std::vector<std::tuple<unsigned, unsigned, const char*>>{
             {3, 2, "3"}, {2, 2, "2"}, {7, 3, "u"}}) {
        auto ctx = ctx_of(ell, p, a);
        JPresentation pres = build_J(*ctx);
        std::vector<FpVector> from_idx;
        for (std::size_t i : pres.epsilon_basis) {
            from_idx.push_back(fplin::unit_vector(pres.p, pres.dim(), i));
        }
        std::vector<FpVector> eps = epsilon_image(*ctx, pres);
        std::size_t r_eps = fplin::rank_of(eps, pres.dim(), pres.p);
        CHECK(from_idx.size() == r_eps);
        std::vector<FpVector> both = eps;
        both.insert(both.end(), from_idx.begin(), from_idx.end());
        CHECK(fplin::rank_of(both, pres.dim(), pres.p) == r_eps);
    }
}

TEST_CASE("certified profile: Q_3(sqrt 3) measurements and certificates") {
    auto ctx = ctx_of(3, 2, "3");
    JPresentation pres = build_J(*ctx);
    CertifiedProfile cp = certify_and_profile(*ctx, pres);
    CHECK(cp.invariants.upsilon == 0);
    CHECK(cp.invariants.dim_nj == 1);
    CHECK(cp.invariants.dim_f_mod_nk == std::size_t(1));
    CHECK(cp.invariants.dim_epsilon == std::size_t(1));
    CHECK(cp.combos_tested == 3); // 2^2 - 1
    CHECK(cp.norm_samples > 0);
}

TEST_CASE("zeta and root_a classes: fixed-line membership (Lemma 2 shape)") {
    for (auto [ell, p, a] : std::vector<std::tuple<unsigned, unsigned, const char*>>{
             {3, 2, "3"}, {7, 3, "7"}, {2, 2, "2"}, {11, 5, "11"}}) {
        auto ctx = ctx_of(ell, p, a);
        JPresentation pres = build_J(*ctx);
        // all sigma-fixed class vectors lie in J_1 = ker(sigma - 1)
        std::vector<FpVector> j1 = gmodule::fixed_submodule(pres.module);
        for (const FpVector& v : epsilon_image(*ctx, pres)) {
            if (!v.is_zero()) CHECK(fplin::in_span(j1, v));
        }
        // [root_a]^{sigma-1} = [zeta]
        FpVector step = fplin::mat_vec(pres.module.sigma_minus_one(), pres.root_a_class_j);
        CHECK(step == pres.zeta_class_j);
    }
}

TEST_CASE("parallel and serial enumeration agree bit-for-bit") {
    par::force_serial(true);
    auto ctx1 = ctx_of(2, 2, "2");
    JPresentation pres1 = build_J(*ctx1);
    CertifiedProfile cp1 = certify_and_profile(*ctx1, pres1);
    par::force_serial(false);
    auto ctx2 = ctx_of(2, 2, "2");
    JPresentation pres2 = build_J(*ctx2);
    CertifiedProfile cp2 = certify_and_profile(*ctx2, pres2);

    CHECK(pres1.module.sigma == pres2.module.sigma);
    CHECK(pres1.a_class_f == pres2.a_class_f);
    CHECK(pres1.zeta_class_j == pres2.zeta_class_j);
    CHECK(cp1.invariants.upsilon == cp2.invariants.upsilon);
    CHECK(cp1.invariants.dim_nj == cp2.invariants.dim_nj);
    CHECK(cp1.invariants.dim_f_mod_nk == cp2.invariants.dim_f_mod_nk);
    for (std::size_t i = 0; i < pres1.dim(); ++i) {
        CHECK(ctx1->canonical_form(pres1.basis_reps[i]) == ctx2->canonical_form(pres2.basis_reps[i]));
    }
}
