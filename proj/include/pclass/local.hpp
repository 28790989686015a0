#pragma once

// Concrete towers K/F of local fields with finite J. Supported bases:
//   - F = Q_ell for ell != p with p | ell - 1 (tame), and for ell = p = 2
//   - F = Q_3(zeta_3) for ell = p = 3
// K = F[y]/(y^p - a) with sigma(y) = zeta_p y.

#include <memory>
#include <string>

#include "pclass/invariants.hpp"
#include "pclass/padic.hpp"
#include "pclass/tower.hpp"

namespace pclass::local {

// c0 + c1 z with z^2 = -1 - z (z = zeta_3)
struct CycloElem {
    Padic c0, c1;
};

// Q_3(zeta_3), totally ramified quadratic over Q_3, pi = z - 1
class CycloField {
public:
    explicit CycloField(int prec);

    using Elem = CycloElem;

    unsigned ell() const { return 3; }
    unsigned p() const { return 3; }
    int prec() const { return q3_->prec(); }
    const PadicField& q3() const { return *q3_; }

    Elem zero() const { return Elem{q3_->zero(), q3_->zero()}; }
    Elem one() const { return Elem{q3_->one(), q3_->zero()}; }
    Elem from_int(long long v) const { return Elem{q3_->from_int(v), q3_->zero()}; }
    Elem make(Padic c0, Padic c1) const { return Elem{std::move(c0), std::move(c1)}; }

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    Elem pow(const Elem& a, long long e) const;
    Elem conj(const Elem& a) const; // z -> z^2

    bool is_zero(const Elem& a) const { return q3_->is_zero(a.c0) && q3_->is_zero(a.c1); }
    bool eq(const Elem& a, const Elem& b) const { return is_zero(sub(a, b)); }

    Padic norm_to_q3(const Elem& a) const; // c0^2 - c0 c1 + c1^2
    long long val(const Elem& a) const;    // = v_3(norm)

    Elem uniformizer() const { return Elem{q3_->from_int(-1), q3_->one()}; } // z - 1
    long e_abs() const { return 2; }
    long f_abs() const { return 1; }
    long d_abs() const { return 2; }

    std::vector<Elem> residue_lifts() const;
    std::uint32_t residue(const Elem& a) const; // unit residue in F_3 (z -> 1)

    Elem zeta() const { return Elem{q3_->zero(), q3_->one()}; } // z

    bool is_pth_power(const Elem& a, Elem* witness = nullptr) const;

    std::string canonical(const Elem& a) const;
    Elem random_unit(std::uint64_t seed) const;

private:
    std::shared_ptr<const PadicField> q3_;
};

// handle to a constructed base field F
struct LocalBase {
    unsigned ell = 0;
    unsigned p = 0;
    int prec = 0;
    std::shared_ptr<const PadicField> ql;     // non-null iff F = Q_ell
    std::shared_ptr<const CycloField> cyclo;  // non-null iff F = Q_3(zeta_3)
    bool is_cyclo() const { return cyclo != nullptr; }
};

inline constexpr int kDefaultPrecision = 40;
inline constexpr int kMaxPrecision = 640;

// F = Q_ell extended by zeta_p where needed; rejects unsupported (ell, p)
LocalBase make_base(unsigned ell, unsigned p, int prec = kDefaultPrecision);

// K = F[y]/(y^p - a) with a given by the element grammar
// (integers, pi, u, zeta combined with * and ^); a is normalized by stripping
// p-th powers of the uniformizer, and rejected if it is a p-th power in F
std::shared_ptr<tower::TowerContext> make_K(const LocalBase& base, const std::string& a_expr);

// measured invariants, certified by the exhaustive enumeration pass
structure::InvariantProfile norm_group_profile(const tower::TowerContext& ctx,
                                               const tower::JPresentation& pres);
tower::CertifiedProfile norm_group_profile_certified(const tower::TowerContext& ctx,
                                                     const tower::JPresentation& pres);

} // namespace pclass::local
