#include "pclass/padic.hpp"

#include <random>

namespace pclass::local {

namespace {
constexpr int kMinRel = 6;
}

PadicField::PadicField(unsigned ell, unsigned p, int prec) : ell_(ell), p_(p), prec_(prec) {
    if (prec < 2 * kMinRel) fail(errc::unsupported_configuration, "precision too small");
    canon_digits_ = std::min(20, prec / 2);
    pow_cache_.reserve(2 * prec + 8);
    mpz_class acc = 1;
    for (int i = 0; i <= 2 * prec + 6; ++i) {
        pow_cache_.push_back(acc);
        acc *= ell;
    }
}

const mpz_class& PadicField::ell_pow(long k) const {
    if (k < 0 || k >= (long)pow_cache_.size()) fail(errc::precision_exhausted, "power cache exceeded");
    return pow_cache_[(std::size_t)k];
}

Padic PadicField::normalize(const mpz_class& raw, long long val_base, long long abs_cap) const {
    long long digits = abs_cap - val_base;
    if (digits <= 0) fail(errc::precision_exhausted, "no significant digits left");
    mpz_class m;
    mpz_mod(m.get_mpz_t(), raw.get_mpz_t(), ell_pow(digits).get_mpz_t());
    if (m == 0) {
        Padic z;
        z.zero = true;
        z.zero_abs = abs_cap;
        return z;
    }
    long long s = (long long)mpz_remove(m.get_mpz_t(), m.get_mpz_t(), mpz_class(ell_).get_mpz_t());
    long long val = val_base + s;
    long long rel = abs_cap - val;
    if (rel < kMinRel) fail(errc::precision_exhausted, "catastrophic cancellation");
    Padic r;
    r.zero = false;
    r.val = val;
    r.rel = (int)std::min<long long>(rel, prec_);
    mpz_mod(r.mant.get_mpz_t(), m.get_mpz_t(), ell_pow(r.rel).get_mpz_t());
    return r;
}

Padic PadicField::from_int(long long v) const { return from_mpz(mpz_class((long)v)); }

Padic PadicField::from_mpz(const mpz_class& v) const {
    if (v == 0) return Padic{};
    mpz_class m = v;
    long long s = (long long)mpz_remove(m.get_mpz_t(), m.get_mpz_t(), mpz_class(ell_).get_mpz_t());
    Padic r;
    r.zero = false;
    r.val = s;
    r.rel = prec_;
    mpz_mod(r.mant.get_mpz_t(), m.get_mpz_t(), ell_pow(prec_).get_mpz_t());
    return r;
}

Padic PadicField::add(const Padic& a, const Padic& b) const {
    if (a.zero && b.zero) {
        Padic z;
        z.zero_abs = std::min(a.zero_abs, b.zero_abs);
        return z;
    }
    if (a.zero || b.zero) {
        const Padic& x = a.zero ? b : a;
        long long cap = (a.zero ? a : b).zero_abs;
        if (cap == LLONG_MAX) return x;
        if (x.val >= cap) {
            Padic z;
            z.zero_abs = cap;
            return z;
        }
        long long rel = std::min<long long>(x.rel, cap - x.val);
        if (rel < kMinRel) fail(errc::precision_exhausted, "add against approximate zero");
        Padic r = x;
        r.rel = (int)rel;
        mpz_mod(r.mant.get_mpz_t(), r.mant.get_mpz_t(), ell_pow(rel).get_mpz_t());
        return r;
    }
    long long v = std::min(a.val, b.val);
    long long abs_cap = std::min(a.abs_prec(), b.abs_prec());
    mpz_class raw = a.mant * ell_pow(a.val - v) + b.mant * ell_pow(b.val - v);
    return normalize(raw, v, abs_cap);
}

Padic PadicField::neg(const Padic& a) const {
    if (a.zero) return a;
    Padic r = a;
    r.mant = ell_pow(a.rel) - a.mant;
    return r;
}

Padic PadicField::sub(const Padic& a, const Padic& b) const { return add(a, neg(b)); }

Padic PadicField::mul(const Padic& a, const Padic& b) const {
    if (a.zero || b.zero) {
        Padic z;
        long long za = a.zero ? a.zero_abs : a.val;
        long long zb = b.zero ? b.zero_abs : b.val;
        z.zero_abs = (za == LLONG_MAX || zb == LLONG_MAX) ? LLONG_MAX : za + zb;
        return z;
    }
    Padic r;
    r.zero = false;
    r.val = a.val + b.val;
    r.rel = std::min(a.rel, b.rel);
    mpz_class m = a.mant * b.mant;
    mpz_mod(r.mant.get_mpz_t(), m.get_mpz_t(), ell_pow(r.rel).get_mpz_t());
    return r;
}

Padic PadicField::inv(const Padic& a) const {
    if (a.zero) fail(errc::backend_failure, "inverse of zero");
    Padic r;
    r.zero = false;
    r.val = -a.val;
    r.rel = a.rel;
    if (mpz_invert(r.mant.get_mpz_t(), a.mant.get_mpz_t(), ell_pow(a.rel).get_mpz_t()) == 0) {
        fail(errc::backend_failure, "non-invertible mantissa");
    }
    return r;
}

Padic PadicField::div(const Padic& a, const Padic& b) const { return mul(a, inv(b)); }

Padic PadicField::pow(const Padic& a, long long e) const {
    if (e < 0) return pow(inv(a), -e);
    Padic acc = one();
    Padic base = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return acc;
}

Padic PadicField::shift(const Padic& a, long long k) const {
    Padic r = a;
    if (r.zero) {
        if (r.zero_abs != LLONG_MAX) r.zero_abs += k;
        return r;
    }
    r.val += k;
    return r;
}

bool PadicField::eq(const Padic& a, const Padic& b) const { return sub(a, b).zero; }

long long PadicField::val(const Padic& a) const {
    if (a.zero) fail(errc::precision_exhausted, "valuation of a (possibly approximate) zero");
    return a.val;
}

std::uint32_t PadicField::residue(const Padic& a) const {
    if (a.zero) return 0;
    if (a.val > 0) return 0;
    if (a.val < 0) fail(errc::backend_failure, "residue of a non-integral element");
    mpz_class m = a.mant % ell_;
    return (std::uint32_t)m.get_ui();
}

std::vector<Padic> PadicField::residue_lifts() const {
    std::vector<Padic> out;
    out.reserve(ell_);
    for (unsigned i = 0; i < ell_; ++i) out.push_back(from_int((long long)i));
    return out;
}

Padic PadicField::zeta() const {
    if (p_ == 2) return from_int(-1);
    if ((ell_ - 1) % p_ != 0) fail(errc::unsupported_configuration, "no p-th roots of unity in Q_ell");
    unsigned r0 = 0;
    for (unsigned r = 2; r < ell_; ++r) {
        unsigned long long acc = 1;
        for (unsigned i = 0; i < p_; ++i) acc = acc * r % ell_;
        if (acc == 1) {
            r0 = r;
            break;
        }
    }
    if (r0 == 0) fail(errc::unsupported_configuration, "no primitive p-th root found");
    Padic z = newton_pth_root(*this, p_, one(), from_int((long long)r0));
    if (!eq(pow(z, p_), one()) || eq(z, one())) fail(errc::backend_failure, "zeta certification failed");
    return z;
}

bool PadicField::is_pth_power(const Padic& a, Padic* witness) const {
    if (a.zero) fail(errc::backend_failure, "p-th power test of zero");
    if (a.val % (long long)p_ != 0) return false;
    Padic u = shift(a, -a.val);
    if (ell_ % p_ != 0 && ell_ != p_) {
        // tame: unit is a p-th power iff its residue is one in F_ell
        std::uint32_t r = residue(u);
        unsigned long long acc = 1, e = (ell_ - 1) / p_;
        unsigned long long base = r;
        while (e) {
            if (e & 1) acc = acc * base % ell_;
            base = base * base % ell_;
            e >>= 1;
        }
        if (acc != 1) return false;
        if (witness) {
            unsigned c0 = 0;
            for (unsigned c = 1; c < ell_; ++c) {
                unsigned long long cp = 1;
                for (unsigned i = 0; i < p_; ++i) cp = cp * c % ell_;
                if (cp == r) {
                    c0 = c;
                    break;
                }
            }
            Padic w = newton_pth_root(*this, p_, u, from_int((long long)c0));
            *witness = shift(w, a.val / p_);
        }
        return true;
    }
    // residue characteristic p (only ell = p = 2 arises for this layer)
    long target = 2 * (long)e_abs() + 1;
    auto x = power_approx(*this, p_, u, target);
    if (!x) return false;
    if (witness) {
        Padic w = newton_pth_root(*this, p_, u, *x);
        *witness = shift(w, a.val / p_);
    }
    return true;
}

std::string PadicField::canonical(const Padic& a) const {
    if (a.zero) return "z";
    if (a.rel < canon_digits_) fail(errc::precision_exhausted, "element too imprecise to serialize");
    std::string s = "v" + std::to_string(a.val) + ":";
    mpz_class m = a.mant;
    for (int i = 0; i < canon_digits_; ++i) {
        mpz_class d = m % ell_;
        s += std::to_string(d.get_ui());
        if (i + 1 < canon_digits_) s += ",";
        m /= ell_;
    }
    return s;
}

Padic PadicField::random_unit(std::uint64_t seed) const {
    std::mt19937_64 eng(seed);
    for (;;) {
        long long n = 1 + (long long)(eng() % 197);
        if (n % ell_ == 0) continue;
        return from_int(n);
    }
}

} // namespace pclass::local
