#pragma once

// Abstract interface to a concrete tower F ⊂ K = F(a^{1/p}) together with the
// generic machinery that turns a finite J = K^x/K^{x p} into a certified
// presentation: an independence-certified class basis, the sigma action as a
// GModule, the F-side class group, and the norm/epsilon data every structure
// check consumes.

#include <any>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pclass/fplin.hpp"
#include "pclass/gmodule.hpp"
#include "pclass/invariants.hpp"

namespace pclass::tower {

// opaque element handle; payload type is owned by the backend
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(std::any v, const void* tag) : v_(std::move(v)), tag_(tag) {}

    const std::any& payload() const { return v_; }
    const void* tag() const { return tag_; }
    bool empty() const { return !v_.has_value(); }

private:
    std::any v_;
    const void* tag_ = nullptr;
};

class TowerContext {
public:
    virtual ~TowerContext() = default;

    virtual unsigned p() const = 0;
    virtual std::string backend_name() const = 0;
    virtual int precision() const = 0; // 0 for exact backends

    virtual FieldElem one() const = 0;
    virtual FieldElem from_integer(long long v) const = 0;
    virtual FieldElem add(const FieldElem& x, const FieldElem& y) const = 0;
    virtual FieldElem neg(const FieldElem& x) const = 0;
    virtual FieldElem mul(const FieldElem& x, const FieldElem& y) const = 0;
    virtual FieldElem inv(const FieldElem& x) const = 0;
    virtual bool eq(const FieldElem& x, const FieldElem& y) const = 0;
    virtual bool is_zero(const FieldElem& x) const = 0;

    virtual FieldElem sigma(const FieldElem& x) const = 0;
    virtual FieldElem norm(const FieldElem& x) const = 0; // lies in F
    virtual FieldElem trace(const FieldElem& x) const = 0;

    virtual bool is_pth_power(const FieldElem& x) const = 0;
    virtual bool is_in_F(const FieldElem& x) const = 0;
    virtual bool is_pth_power_in_F(const FieldElem& x, FieldElem* witness = nullptr) const = 0;

    virtual FieldElem zeta() const = 0;   // the recorded primitive p-th root of unity
    virtual FieldElem root_a() const = 0; // y with y^{sigma-1} = zeta_p
    virtual FieldElem a_elem() const = 0;

    virtual bool j_finite() const = 0;
    virtual std::vector<FieldElem> j_candidate_generators() const = 0;
    virtual std::vector<FieldElem> f_candidate_generators() const = 0;
    virtual std::size_t j_expected_dim() const = 0;
    virtual std::size_t f_expected_dim() const = 0;

    virtual std::vector<FieldElem> k_over_f_basis() const = 0;
    virtual FieldElem random_element(std::uint64_t seed) const = 0;
    virtual std::string canonical_form(const FieldElem& x) const = 0;

    // v_K mod p when the backend has a valuation (search prefilter); else nullopt
    virtual std::optional<int> val_fingerprint(const FieldElem& x) const = 0;

    FieldElem sub(const FieldElem& x, const FieldElem& y) const { return add(x, neg(y)); }
    FieldElem div(const FieldElem& x, const FieldElem& y) const { return mul(x, inv(y)); }
    FieldElem pow(const FieldElem& x, long long e) const;
    FieldElem sigma_pow(const FieldElem& x, unsigned k) const;
};

struct ClassVector {
    fplin::FpVector coords;
    FieldElem representative;
};

struct PresCache; // reduce memos and power tables

struct JPresentation {
    unsigned p = 2;
    std::vector<FieldElem> basis_reps;
    gmodule::GModule module;
    std::vector<std::size_t> epsilon_basis; // indices of basis positions spanning eps(F^x)

    std::vector<FieldElem> f_basis_reps; // basis of F^x / F^{x p}
    std::size_t f_dim = 0;

    fplin::FpVector a_class_f;
    fplin::FpVector zeta_class_f;
    fplin::FpVector zeta_class_j;
    fplin::FpVector root_a_class_j;
    std::vector<fplin::FpVector> f_norm_classes; // class of N(b_j) in F^x/F^{x p}

    std::shared_ptr<PresCache> cache;

    std::size_t dim() const { return basis_reps.size(); }
};

// exponent-vector enumeration over [0, p)^dim
std::size_t class_count(unsigned p, std::size_t dim);
void decode_exponents(std::size_t index, unsigned p, std::size_t dim, std::vector<std::uint32_t>& e);
std::size_t encode_exponents(const fplin::FpVector& e);

// certified generating sets: candidate pools pruned to an independent set by
// exhaustive p-th power testing
std::vector<FieldElem> unit_class_generators_K(const TowerContext& ctx);
std::vector<FieldElem> unit_class_generators_F(const TowerContext& ctx);

JPresentation build_J(const TowerContext& ctx);

fplin::FpVector reduce(const TowerContext& ctx, const JPresentation& pres, const FieldElem& gamma);
ClassVector reduce_class(const TowerContext& ctx, const JPresentation& pres, const FieldElem& gamma);
FieldElem lift(const TowerContext& ctx, const JPresentation& pres, const fplin::FpVector& coords);

fplin::FpVector reduce_F(const TowerContext& ctx, const JPresentation& pres, const FieldElem& x);
FieldElem lift_F(const TowerContext& ctx, const JPresentation& pres, const fplin::FpVector& coords);

std::vector<fplin::FpVector> norm_class_map(const TowerContext& ctx, const JPresentation& pres);
std::vector<fplin::FpVector> epsilon_image(const TowerContext& ctx, const JPresentation& pres);

struct CertifiedProfile {
    structure::InvariantProfile invariants;
    std::size_t combos_tested = 0;     // independence certificate
    std::size_t norm_samples = 0;      // field-level cross-checks of the norm-class map
    std::size_t norm_class_rank = 0;   // dim of N(K^x) F^{x p} / F^{x p}
};

// exhaustive certification pass over all p^dim classes: re-verifies basis
// independence, enumerates the norm classes, measures Upsilon and
// dim F^x/N(K^x), and cross-checks the norm-class homomorphism at field level
CertifiedProfile certify_and_profile(const TowerContext& ctx, const JPresentation& pres);

// first class index (lexicographically minimal exponent vector) whose
// norm class equals the target F-side class, if any
std::optional<fplin::FpVector> find_class_with_norm_class(const TowerContext& ctx,
                                                          const JPresentation& pres,
                                                          const fplin::FpVector& target_f_class);

} // namespace pclass::tower
