#pragma once

// Truncated l-adic arithmetic over Q_l: elements carry a valuation, a unit
// mantissa known to a tracked number of significant digits, and (for zeros)
// the absolute precision to which zeroness is known. Cancellation below the
// relative-precision floor raises PrecisionExhausted; callers rebuild the
// field at doubled precision and retry.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pclass/errors.hpp"

namespace pclass::local {

struct Padic {
    bool zero = true;
    long long val = 0;   // valid iff !zero
    mpz_class mant;      // unit part, 0 < mant < ell^rel, mant % ell != 0
    int rel = 0;         // significant digits of mant
    long long zero_abs = LLONG_MAX; // if zero: v(x) >= zero_abs (LLONG_MAX = exact zero)

    long long abs_prec() const { return zero ? zero_abs : val + rel; }
};

class PadicField {
public:
    PadicField(unsigned ell, unsigned p, int prec);

    unsigned ell() const { return ell_; }
    unsigned p() const { return p_; }
    int prec() const { return prec_; }
    int canon_digits() const { return canon_digits_; }

    using Elem = Padic;

    Padic zero() const { return Padic{}; }
    Padic one() const { return from_int(1); }
    Padic from_int(long long v) const;
    Padic from_mpz(const mpz_class& v) const;

    Padic add(const Padic& a, const Padic& b) const;
    Padic sub(const Padic& a, const Padic& b) const;
    Padic neg(const Padic& a) const;
    Padic mul(const Padic& a, const Padic& b) const;
    Padic inv(const Padic& a) const;
    Padic div(const Padic& a, const Padic& b) const;
    Padic pow(const Padic& a, long long e) const;
    Padic shift(const Padic& a, long long k) const; // multiply by ell^k

    bool is_zero(const Padic& a) const { return a.zero; }
    bool eq(const Padic& a, const Padic& b) const;
    long long val(const Padic& a) const;

    // residue of a unit as an integer in [0, ell)
    std::uint32_t residue(const Padic& a) const;

    Padic uniformizer() const { return from_int((long long)ell_); }
    long e_abs() const { return 1; }
    long f_abs() const { return 1; }
    long d_abs() const { return 1; }

    std::vector<Padic> residue_lifts() const;

    // the distinguished primitive p-th root of unity (p | ell-1, or -1 for p=2)
    Padic zeta() const;

    bool is_pth_power(const Padic& a, Padic* witness = nullptr) const;

    std::string canonical(const Padic& a) const;

    Padic random_unit(std::uint64_t seed) const;

    const mpz_class& ell_pow(long k) const;

private:
    Padic normalize(const mpz_class& raw, long long val_base, long long abs_cap) const;

    unsigned ell_;
    unsigned p_;
    int prec_;
    int canon_digits_;
    std::vector<mpz_class> pow_cache_;
};

// Digit-by-digit search for a unit x with v(x^p - u) >= target, u a unit.
// Level n holds candidates known mod pi^n whose residual clears
// min(p n, n + e, target); every exact root survives each filter, and at
// min(p n, n + e) >= 2e + 1 a survivor Hensel-lifts to an exact root. Shared
// by the residue-characteristic-p power tests of every field layer.
template <class F>
std::optional<typename F::Elem> power_approx(const F& f, unsigned p, const typename F::Elem& u,
                                             long target) {
    using Elem = typename F::Elem;
    const long e = f.e_abs();
    auto level_bound = [&](long n) { return std::min((long)p * n, n + e); };
    auto clears = [&](const Elem& x, long bound) {
        Elem r = f.sub(f.pow(x, p), u);
        return f.is_zero(r) || f.val(r) >= std::min(bound, target);
    };

    const std::vector<Elem> lifts = f.residue_lifts();
    std::vector<Elem> frontier;
    for (const Elem& t : lifts) {
        if (f.is_zero(t)) continue;
        if (clears(t, level_bound(1))) frontier.push_back(t);
    }
    const Elem pi = f.uniformizer();
    for (long n = 1; !frontier.empty(); ++n) {
        if (level_bound(n) >= target) return frontier.front();
        std::vector<Elem> next;
        Elem pin = f.pow(pi, n);
        for (const Elem& x : frontier) {
            for (const Elem& t : lifts) {
                Elem x2 = f.is_zero(t) ? x : f.add(x, f.mul(t, pin));
                if (clears(x2, level_bound(n + 1))) next.push_back(std::move(x2));
            }
        }
        if (next.size() > 4096) fail(errc::backend_failure, "power_approx frontier blowup");
        frontier = std::move(next);
    }
    return std::nullopt;
}

// Newton refinement of an approximate p-th root (requires v(x0^p - u) > 2e)
template <class F>
typename F::Elem newton_pth_root(const F& f, unsigned p, const typename F::Elem& u,
                                 const typename F::Elem& x0) {
    using Elem = typename F::Elem;
    Elem x = x0;
    Elem pc = f.from_int((long long)p);
    for (int it = 0; it < 14; ++it) {
        Elem r = f.sub(f.pow(x, p), u);
        if (f.is_zero(r)) return x;
        x = f.sub(x, f.div(r, f.mul(pc, f.pow(x, p - 1))));
    }
    Elem r = f.sub(f.pow(x, p), u);
    if (!f.is_zero(r)) fail(errc::precision_exhausted, "newton refinement did not converge");
    return x;
}

} // namespace pclass::local
