#include "pclass/local.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace pclass::local {

// ---------------------------------------------------------------- CycloField

CycloField::CycloField(int prec) : q3_(std::make_shared<const PadicField>(3, 3, prec)) {}

CycloField::Elem CycloField::add(const Elem& a, const Elem& b) const {
    return Elem{q3_->add(a.c0, b.c0), q3_->add(a.c1, b.c1)};
}

CycloField::Elem CycloField::sub(const Elem& a, const Elem& b) const {
    return Elem{q3_->sub(a.c0, b.c0), q3_->sub(a.c1, b.c1)};
}

CycloField::Elem CycloField::neg(const Elem& a) const {
    return Elem{q3_->neg(a.c0), q3_->neg(a.c1)};
}

CycloField::Elem CycloField::mul(const Elem& a, const Elem& b) const {
    // (a0 + a1 z)(b0 + b1 z) with z^2 = -1 - z
    Padic t00 = q3_->mul(a.c0, b.c0);
    Padic t01 = q3_->mul(a.c0, b.c1);
    Padic t10 = q3_->mul(a.c1, b.c0);
    Padic t11 = q3_->mul(a.c1, b.c1);
    return Elem{q3_->sub(t00, t11), q3_->sub(q3_->add(t01, t10), t11)};
}

CycloField::Elem CycloField::conj(const Elem& a) const {
    // z -> -1 - z
    return Elem{q3_->sub(a.c0, a.c1), q3_->neg(a.c1)};
}

Padic CycloField::norm_to_q3(const Elem& a) const {
    Padic t = q3_->mul(a.c0, a.c1);
    return q3_->sub(q3_->add(q3_->mul(a.c0, a.c0), q3_->mul(a.c1, a.c1)), t);
}

CycloField::Elem CycloField::inv(const Elem& a) const {
    if (is_zero(a)) fail(errc::backend_failure, "inverse of zero");
    Padic n = q3_->inv(norm_to_q3(a));
    Elem c = conj(a);
    return Elem{q3_->mul(c.c0, n), q3_->mul(c.c1, n)};
}

CycloField::Elem CycloField::pow(const Elem& a, long long e) const {
    if (e < 0) return pow(inv(a), -e);
    Elem acc = one();
    Elem base = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return acc;
}

long long CycloField::val(const Elem& a) const {
    if (is_zero(a)) fail(errc::precision_exhausted, "valuation of zero");
    return q3_->val(norm_to_q3(a));
}

std::vector<CycloField::Elem> CycloField::residue_lifts() const {
    return {from_int(0), from_int(1), from_int(2)};
}

std::uint32_t CycloField::residue(const Elem& a) const {
    // z = 1 in the residue field
    return (q3_->residue(a.c0) + q3_->residue(a.c1)) % 3;
}

bool CycloField::is_pth_power(const Elem& a, Elem* witness) const {
    if (is_zero(a)) fail(errc::backend_failure, "p-th power test of zero");
    long long v = val(a);
    if (v % 3 != 0) return false;
    Elem u = mul(a, pow(uniformizer(), -v));
    auto x = power_approx(*this, 3, u, 2 * e_abs() + 1);
    if (!x) return false;
    if (witness) {
        Elem w = newton_pth_root(*this, 3, u, *x);
        *witness = mul(w, pow(uniformizer(), v / 3));
    }
    return true;
}

std::string CycloField::canonical(const Elem& a) const {
    return q3_->canonical(a.c0) + "|" + q3_->canonical(a.c1);
}

CycloField::Elem CycloField::random_unit(std::uint64_t seed) const {
    std::mt19937_64 eng(seed);
    long long n0 = 1 + (long long)(eng() % 197);
    while (n0 % 3 == 0) n0 += 1;
    long long n1 = (long long)(eng() % 19) - 9;
    return Elem{q3_->from_int(n0), q3_->from_int(n1)};
}

// ------------------------------------------------------- residue field F_q

namespace {

// F_{ell^f} presented as F_ell[x]/(x^f - c)
struct Fq {
    std::uint32_t ell = 2;
    unsigned f = 1;
    std::uint32_t c = 1;

    using E = std::vector<std::uint32_t>;

    E one() const {
        E e(f, 0);
        e[0] = 1;
        return e;
    }

    bool is_one(const E& a) const {
        if (a[0] != 1) return false;
        for (unsigned i = 1; i < f; ++i) {
            if (a[i] != 0) return false;
        }
        return true;
    }

    bool is_zero(const E& a) const {
        return std::all_of(a.begin(), a.end(), [](std::uint32_t x) { return x == 0; });
    }

    E mul(const E& a, const E& b) const {
        std::vector<std::uint64_t> conv(2 * f - 1, 0);
        for (unsigned i = 0; i < f; ++i) {
            if (!a[i]) continue;
            for (unsigned j = 0; j < f; ++j) conv[i + j] += (std::uint64_t)a[i] * b[j];
        }
        E r(f, 0);
        for (unsigned k = 2 * f - 2; k >= f; --k) {
            conv[k - f] += conv[k] % ell * c;
            if (k == f) break;
        }
        for (unsigned k = 0; k < f; ++k) r[k] = (std::uint32_t)(conv[k] % ell);
        return r;
    }

    E pow(E a, unsigned long long e) const {
        E acc = one();
        while (e) {
            if (e & 1) acc = mul(acc, a);
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    unsigned long long q() const {
        unsigned long long r = 1;
        for (unsigned i = 0; i < f; ++i) r *= ell;
        return r;
    }
};

unsigned smallest_nonresidue(std::uint32_t ell, unsigned p) {
    for (std::uint32_t r = 2; r < ell; ++r) {
        unsigned long long acc = 1, base = r, e = (ell - 1) / p;
        while (e) {
            if (e & 1) acc = acc * base % ell;
            base = base * base % ell;
            e >>= 1;
        }
        if (acc != 1) return r;
    }
    fail(errc::unsupported_configuration, "no non-residue in F_ell (p does not divide ell-1?)");
}

long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

} // namespace

// ------------------------------------------------------------ KummerField

namespace {

enum class ValMode { ramified_min, unram_coeff, norm_based };

template <class B>
class KummerField {
public:
    using BElem = typename B::Elem;
    using Elem = std::vector<BElem>; // coefficients in the basis 1, y, ..., y^{p-1}

    KummerField(std::shared_ptr<const B> base, unsigned p, BElem a, long long va);

    const B& base() const { return *base_; }
    unsigned p() const { return p_; }
    const BElem& a() const { return a_; }
    long long va() const { return va_; }
    bool wild() const { return base_->ell() == p_; }
    bool ramified() const { return ekf_ == (int)p_; }
    long e_abs() const { return e_abs_; }
    long f_abs() const { return f_abs_; }

    Elem zero() const { return Elem(p_, base_->zero()); }
    Elem one() const {
        Elem e = zero();
        e[0] = base_->one();
        return e;
    }
    Elem from_int(long long v) const {
        Elem e = zero();
        e[0] = base_->from_int(v);
        return e;
    }
    Elem embed(const BElem& b) const {
        Elem e = zero();
        e[0] = b;
        return e;
    }
    Elem y() const {
        Elem e = zero();
        e[1] = base_->one();
        return e;
    }

    bool is_zero(const Elem& x) const {
        return std::all_of(x.begin(), x.end(), [&](const BElem& c) { return base_->is_zero(c); });
    }
    bool in_base(const Elem& x) const {
        for (unsigned i = 1; i < p_; ++i) {
            if (!base_->is_zero(x[i])) return false;
        }
        return true;
    }

    Elem add(const Elem& x, const Elem& y_) const {
        Elem r = zero();
        for (unsigned i = 0; i < p_; ++i) r[i] = base_->add(x[i], y_[i]);
        return r;
    }
    Elem sub(const Elem& x, const Elem& y_) const {
        Elem r = zero();
        for (unsigned i = 0; i < p_; ++i) r[i] = base_->sub(x[i], y_[i]);
        return r;
    }
    Elem neg(const Elem& x) const {
        Elem r = zero();
        for (unsigned i = 0; i < p_; ++i) r[i] = base_->neg(x[i]);
        return r;
    }
    Elem scale(const Elem& x, const BElem& s) const {
        Elem r = zero();
        for (unsigned i = 0; i < p_; ++i) r[i] = base_->mul(x[i], s);
        return r;
    }

    Elem mul(const Elem& x, const Elem& y_) const {
        Elem r = zero();
        for (unsigned i = 0; i < p_; ++i) {
            if (base_->is_zero(x[i])) continue;
            for (unsigned j = 0; j < p_; ++j) {
                BElem t = base_->mul(x[i], y_[j]);
                unsigned k = i + j;
                if (k < p_) {
                    r[k] = base_->add(r[k], t);
                } else {
                    r[k - p_] = base_->add(r[k - p_], base_->mul(t, a_));
                }
            }
        }
        return r;
    }

    Elem sigma(const Elem& x) const {
        Elem r = zero();
        for (unsigned i = 0; i < p_; ++i) r[i] = base_->mul(x[i], zeta_pows_[i]);
        return r;
    }

    // product of all conjugates; asserts the result lies in the base field
    BElem norm_to_base(const Elem& x) const {
        Elem acc = x;
        Elem cur = x;
        for (unsigned i = 1; i < p_; ++i) {
            cur = sigma(cur);
            acc = mul(acc, cur);
        }
        if (!in_base(acc)) fail(errc::precision_exhausted, "norm has non-vanishing K-components");
        return acc[0];
    }

    BElem trace_to_base(const Elem& x) const {
        Elem acc = x;
        Elem cur = x;
        for (unsigned i = 1; i < p_; ++i) {
            cur = sigma(cur);
            acc = add(acc, cur);
        }
        if (!in_base(acc)) fail(errc::precision_exhausted, "trace has non-vanishing K-components");
        return acc[0];
    }

    Elem inv(const Elem& x) const {
        if (is_zero(x)) fail(errc::backend_failure, "inverse of zero");
        if (p_ == 2) {
            Elem cj = sigma(x);
            Elem nn = mul(x, cj);
            if (!in_base(nn)) fail(errc::precision_exhausted, "norm has non-vanishing K-components");
            return scale(cj, base_->inv(nn[0]));
        }
        Elem conj_prod = sigma(x);
        Elem cur = conj_prod;
        for (unsigned i = 2; i < p_; ++i) {
            cur = sigma(cur);
            conj_prod = mul(conj_prod, cur);
        }
        Elem nn = mul(x, conj_prod);
        if (!in_base(nn)) fail(errc::precision_exhausted, "norm has non-vanishing K-components");
        return scale(conj_prod, base_->inv(nn[0]));
    }

    Elem div(const Elem& x, const Elem& y_) const { return mul(x, inv(y_)); }

    Elem pow(const Elem& x, long long e) const {
        if (e < 0) return pow(inv(x), -e);
        Elem acc = one();
        Elem base = x;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            e >>= 1;
            if (e) base = mul(base, base);
        }
        return acc;
    }

    bool eq(const Elem& x, const Elem& y_) const { return is_zero(sub(x, y_)); }

    long long val(const Elem& x) const {
        if (is_zero(x)) fail(errc::precision_exhausted, "valuation of zero");
        switch (mode_) {
        case ValMode::ramified_min: {
            bool any = false;
            long long best = 0;
            for (unsigned i = 0; i < p_; ++i) {
                if (base_->is_zero(x[i])) continue;
                long long t = (long long)p_ * base_->val(x[i]) + (long long)i * va_;
                if (!any || t < best) best = t;
                any = true;
            }
            return best;
        }
        case ValMode::unram_coeff: {
            bool any = false;
            long long best = 0;
            for (unsigned i = 0; i < p_; ++i) {
                if (base_->is_zero(x[i])) continue;
                long long t = base_->val(x[i]);
                if (!any || t < best) best = t;
                any = true;
            }
            return best;
        }
        case ValMode::norm_based: {
            long long vn = base_->val(norm_to_base(x));
            if (vn % fkf_ != 0) fail(errc::backend_failure, "norm valuation not divisible by f");
            return vn / fkf_;
        }
        }
        fail(errc::backend_failure, "unreachable");
    }

    const Elem& uniformizer() const { return pi_; }

    Elem pi_pow(long long k) const { return k >= 0 ? pow(pi_, k) : pow(pi_inv_, -k); }

    const std::vector<Elem>& residue_lifts() const {
        if (residue_lifts_.empty()) fail(errc::backend_failure, "residue lifts unavailable (tame)");
        return residue_lifts_;
    }

    Elem zeta_elem() const { return embed(base_->zeta()); }

    bool is_pth_power(const Elem& x) const {
        if (is_zero(x)) fail(errc::backend_failure, "p-th power test of zero");
        long long v = val(x);
        if (v % (long long)p_ != 0) return false;
        Elem u = mul(x, pi_pow(-v));
        if (!wild()) {
            if (fkf_ == 1) {
                std::uint32_t r = base_->residue(u[0]);
                unsigned long long acc = 1, bb = r, e = (base_->ell() - 1) / p_;
                while (e) {
                    if (e & 1) acc = acc * bb % base_->ell();
                    bb = bb * bb % base_->ell();
                    e >>= 1;
                }
                return acc == 1;
            }
            typename Fq::E r(fq_.f, 0);
            for (unsigned i = 0; i < p_; ++i) r[i] = residue_of_coeff(u[i]);
            if (fq_.is_zero(r)) fail(errc::precision_exhausted, "unit with zero residue");
            return fq_.is_one(fq_.pow(r, (fq_.q() - 1) / p_));
        }
        return power_approx(*this, p_, u, 2 * e_abs_ + 1).has_value();
    }

    std::string canonical(const Elem& x) const {
        if (is_zero(x)) return "val:zero;digits:";
        long long v = val(x);
        Elem u = mul(x, pi_pow(-v));
        std::string s = "val:" + std::to_string(v) + ";digits:";
        std::vector<long long> ds;
        for (unsigned i = 0; i < p_; ++i) coeff_digits(u[i], ds);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            s += std::to_string(ds[i]);
            if (i + 1 < ds.size()) s += ",";
        }
        return s;
    }

    Elem random_element(std::uint64_t seed) const {
        std::mt19937_64 eng(seed);
        Elem e = zero();
        long long n0 = 1 + (long long)(eng() % 197);
        while (n0 % base_->ell() == 0) n0 += 1;
        e[0] = base_->from_int(n0);
        for (unsigned i = 1; i < p_; ++i) {
            e[i] = base_->from_int((long long)(eng() % 19) - 9);
        }
        return e;
    }

    const std::vector<Elem>& j_pool() const { return j_pool_; }
    const std::vector<Elem>& f_pool() const { return f_pool_; }
    std::size_t j_expected_dim() const { return wild() ? p_ * base_->d_abs() + 2 : 2; }
    std::size_t f_expected_dim() const { return wild() ? base_->d_abs() + 2 : 2; }

private:
    std::uint32_t residue_of_coeff(const BElem& c) const {
        // tame unramified only: coefficients of units are integral
        return base_->is_zero(c) ? 0 : base_->residue(c);
    }

    void coeff_digits(const BElem& c, std::vector<long long>& out) const;

    void build_pools();
    void find_wild_uniformizer();
    void build_wild_unram_lifts();

    std::shared_ptr<const B> base_;
    unsigned p_;
    BElem a_;
    long long va_;
    std::vector<BElem> zeta_pows_;
    ValMode mode_ = ValMode::ramified_min;
    int ekf_ = 1, fkf_ = 1;
    long e_abs_ = 1, f_abs_ = 1;
    Elem pi_;
    Elem pi_inv_;
    std::vector<Elem> residue_lifts_;
    Fq fq_;
    std::vector<Elem> j_pool_, f_pool_;
};

template <>
void KummerField<PadicField>::coeff_digits(const Padic& c, std::vector<long long>& out) const {
    if (base_->is_zero(c)) {
        out.push_back(888888888);
        for (int i = 0; i < base_->canon_digits(); ++i) out.push_back(0);
        return;
    }
    out.push_back(c.val);
    mpz_class m = c.mant;
    for (int i = 0; i < base_->canon_digits(); ++i) {
        mpz_class d = m % base_->ell();
        out.push_back((long long)d.get_ui());
        m /= base_->ell();
    }
}

template <>
void KummerField<CycloField>::coeff_digits(const CycloElem& c, std::vector<long long>& out) const {
    const PadicField& q3 = base_->q3();
    for (const Padic* part : {&c.c0, &c.c1}) {
        if (q3.is_zero(*part)) {
            out.push_back(888888888);
            for (int i = 0; i < q3.canon_digits(); ++i) out.push_back(0);
            continue;
        }
        out.push_back(part->val);
        mpz_class m = part->mant;
        for (int i = 0; i < q3.canon_digits(); ++i) {
            mpz_class d = m % 3;
            out.push_back((long long)d.get_ui());
            m /= 3;
        }
    }
}

// candidate class generators of the base field F
template <class B>
std::vector<typename B::Elem> base_class_pool(const B& f, unsigned p) {
    std::vector<typename B::Elem> out;
    if (f.ell() != p) {
        out.push_back(f.uniformizer());
        out.push_back(f.from_int((long long)smallest_nonresidue(f.ell(), p)));
        return out;
    }
    // residue characteristic p: uniformizer and principal units through the
    // last level p e/(p-1) at which classes survive
    long n0 = (long)p * f.e_abs() / ((long)p - 1);
    out.push_back(f.uniformizer());
    auto lifts = f.residue_lifts();
    for (long i = 1; i <= n0; ++i) {
        auto pin = f.pow(f.uniformizer(), i);
        for (std::size_t r = 1; r < lifts.size(); ++r) {
            out.push_back(f.add(f.one(), f.mul(lifts[r], pin)));
        }
    }
    return out;
}

template <class B>
KummerField<B>::KummerField(std::shared_ptr<const B> base, unsigned p, BElem a, long long va)
    : base_(std::move(base)), p_(p), a_(std::move(a)), va_(va) {
    zeta_pows_.push_back(base_->one());
    BElem z = base_->zeta();
    for (unsigned i = 1; i < p_; ++i) zeta_pows_.push_back(base_->mul(zeta_pows_.back(), z));

    if (va_ != 0) {
        mode_ = ValMode::ramified_min;
        ekf_ = (int)p_;
        fkf_ = 1;
    } else if (!wild()) {
        mode_ = ValMode::unram_coeff;
        ekf_ = 1;
        fkf_ = (int)p_;
        fq_.ell = base_->ell();
        fq_.f = p_;
        fq_.c = base_->residue(a_);
    } else {
        long n0 = (long)p_ * base_->e_abs() / ((long)p_ - 1);
        bool unram = power_approx(*base_, p_, a_, n0).has_value();
        mode_ = ValMode::norm_based;
        if (unram) {
            ekf_ = 1;
            fkf_ = (int)p_;
        } else {
            ekf_ = (int)p_;
            fkf_ = 1;
        }
    }
    e_abs_ = base_->e_abs() * ekf_;
    f_abs_ = base_->f_abs() * fkf_;

    // uniformizer
    if (mode_ == ValMode::ramified_min) {
        long long s = 1;
        while ((s * va_) % p_ != 1 % p_) ++s;
        long long t = (1 - s * va_) / (long long)p_;
        Elem ys = pow(y(), s);
        pi_ = mul(ys, pow(embed(base_->uniformizer()), t));
    } else if (ekf_ == 1) {
        pi_ = embed(base_->uniformizer());
    } else {
        find_wild_uniformizer();
    }
    pi_inv_ = inv(pi_);

    // residue lifts
    if (fkf_ == 1) {
        for (unsigned r = 0; r < base_->ell(); ++r) residue_lifts_.push_back(from_int((long long)r));
    } else if (wild()) {
        build_wild_unram_lifts();
    } // tame unramified: residue work happens in F_q, no lifts materialized

    build_pools();

    // construction sanity: sigma has order p, zeta^p = 1, norm is sigma-invariant
    if (!eq(pow(embed(base_->zeta()), p_), one())) fail(errc::backend_failure, "zeta^p != 1");
    Elem probe = random_element(0x9e3779b97f4a7c15ULL);
    Elem s = probe;
    for (unsigned i = 0; i < p_; ++i) s = sigma(s);
    if (!eq(s, probe)) fail(errc::backend_failure, "sigma^p != id");
    if (!base_->eq(norm_to_base(sigma(probe)), norm_to_base(probe))) {
        fail(errc::backend_failure, "norm not sigma-invariant");
    }
}

template <class B>
void KummerField<B>::find_wild_uniformizer() {
    // scan y - c for an element of valuation coprime to p
    long long limit = (long long)base_->ell() * base_->ell() + 2;
    for (long long c = 0; c <= limit; ++c) {
        Elem w = sub(y(), from_int(c));
        if (is_zero(w)) continue;
        long long v;
        try {
            v = val(w);
        } catch (const error&) {
            continue;
        }
        long long r = ((v % p_) + p_) % p_;
        if (r == 0) continue;
        long long s = 1;
        while (((s * r) % p_) != 1 % p_) ++s;
        long long t = (1 - s * v) / (long long)p_;
        pi_ = mul(pow(w, s), pow(embed(base_->uniformizer()), t));
        if (val(pi_) != 1) fail(errc::backend_failure, "uniformizer construction failed");
        return;
    }
    fail(errc::unsupported_configuration, "no uniformizer found for this a (unreachable shape)");
}

template <class B>
void KummerField<B>::build_wild_unram_lifts() {
    // peel base-field digits off y until a residue generator appears
    Elem x = y();
    Elem w;
    bool found = false;
    auto base_lifts = base_->residue_lifts();
    for (int step = 0; step < base_->prec() && !found; ++step) {
        if (is_zero(x)) break;
        long long v = val(x);
        Elem u = mul(x, pi_pow(-v));
        bool peeled = false;
        for (const auto& c : base_lifts) {
            Elem d = sub(u, embed(c));
            if (is_zero(d) || val(d) >= 1) {
                x = sub(x, mul(embed(c), pi_pow(v)));
                peeled = true;
                break;
            }
        }
        if (!peeled) {
            w = u;
            found = true;
        }
    }
    if (!found) fail(errc::precision_exhausted, "no residue generator found while peeling y");

    // lifts: all F_ell-combinations of 1, w, ..., w^{p-1}
    std::vector<Elem> wpow{one()};
    for (unsigned i = 1; i < p_; ++i) wpow.push_back(mul(wpow.back(), w));
    std::size_t count = 1;
    for (unsigned i = 0; i < p_; ++i) count *= base_->ell();
    for (std::size_t m = 0; m < count; ++m) {
        std::size_t idx = m;
        Elem acc = zero();
        for (unsigned i = 0; i < p_; ++i) {
            long long digit = (long long)(idx % base_->ell());
            idx /= base_->ell();
            if (digit) acc = add(acc, scale(wpow[i], base_->from_int(digit)));
        }
        residue_lifts_.push_back(std::move(acc));
    }
}

template <class B>
void KummerField<B>::build_pools() {
    for (const auto& b : base_class_pool(*base_, p_)) f_pool_.push_back(embed(b));
    j_pool_ = f_pool_;
    if (!wild()) {
        if (ramified()) {
            j_pool_.push_back(pi_);
        } else {
            // a non-p-th-power of the residue field F_{ell^p}, lifted coefficientwise
            unsigned long long q = fq_.q();
            unsigned long long e = (q - 1) / p_;
            bool found = false;
            for (unsigned long long m = 1; m < q && !found; ++m) {
                typename Fq::E r(fq_.f, 0);
                unsigned long long idx = m;
                for (unsigned i = 0; i < fq_.f; ++i) {
                    r[i] = (std::uint32_t)(idx % fq_.ell);
                    idx /= fq_.ell;
                }
                if (!fq_.is_one(fq_.pow(r, e))) {
                    Elem tau = zero();
                    for (unsigned i = 0; i < p_; ++i) tau[i] = base_->from_int((long long)r[i]);
                    j_pool_.push_back(tau);
                    found = true;
                }
            }
            if (!found) fail(errc::backend_failure, "no non-residue in the residue field");
        }
        return;
    }
    j_pool_.push_back(pi_);
    long n0 = (long)p_ * e_abs_ / ((long)p_ - 1);
    for (long i = 1; i <= n0; ++i) {
        Elem pin = pow(pi_, i);
        for (std::size_t r = 1; r < residue_lifts_.size(); ++r) {
            j_pool_.push_back(add(one(), mul(residue_lifts_[r], pin)));
        }
    }
}

// --------------------------------------------------------------- LocalTower

template <class B>
class LocalTower : public tower::TowerContext {
public:
    using K = KummerField<B>;
    using KElem = typename K::Elem;

    explicit LocalTower(std::shared_ptr<const K> k) : k_(std::move(k)) {}

    unsigned p() const override { return k_->p(); }
    std::string backend_name() const override { return "local"; }
    int precision() const override { return k_->base().prec(); }

    tower::FieldElem one() const override { return wrap(k_->one()); }
    tower::FieldElem from_integer(long long v) const override { return wrap(k_->from_int(v)); }
    tower::FieldElem add(const tower::FieldElem& x, const tower::FieldElem& y) const override {
        return wrap(k_->add(el(x), el(y)));
    }
    tower::FieldElem neg(const tower::FieldElem& x) const override { return wrap(k_->neg(el(x))); }
    tower::FieldElem mul(const tower::FieldElem& x, const tower::FieldElem& y) const override {
        return wrap(k_->mul(el(x), el(y)));
    }
    tower::FieldElem inv(const tower::FieldElem& x) const override { return wrap(k_->inv(el(x))); }
    bool eq(const tower::FieldElem& x, const tower::FieldElem& y) const override {
        return k_->eq(el(x), el(y));
    }
    bool is_zero(const tower::FieldElem& x) const override { return k_->is_zero(el(x)); }

    tower::FieldElem sigma(const tower::FieldElem& x) const override {
        return wrap(k_->sigma(el(x)));
    }
    tower::FieldElem norm(const tower::FieldElem& x) const override {
        return wrap(k_->embed(k_->norm_to_base(el(x))));
    }
    tower::FieldElem trace(const tower::FieldElem& x) const override {
        return wrap(k_->embed(k_->trace_to_base(el(x))));
    }

    bool is_pth_power(const tower::FieldElem& x) const override { return k_->is_pth_power(el(x)); }
    bool is_in_F(const tower::FieldElem& x) const override { return k_->in_base(el(x)); }
    bool is_pth_power_in_F(const tower::FieldElem& x, tower::FieldElem* witness) const override {
        const KElem& e = el(x);
        if (!k_->in_base(e)) fail(errc::backend_failure, "is_pth_power_in_F outside F");
        if (k_->base().is_zero(e[0])) fail(errc::backend_failure, "p-th power test of zero");
        typename B::Elem w;
        bool ok = k_->base().is_pth_power(e[0], witness ? &w : nullptr);
        if (ok && witness) *witness = wrap(k_->embed(w));
        return ok;
    }

    tower::FieldElem zeta() const override { return wrap(k_->zeta_elem()); }
    tower::FieldElem root_a() const override { return wrap(k_->y()); }
    tower::FieldElem a_elem() const override { return wrap(k_->embed(k_->a())); }

    bool j_finite() const override { return true; }
    std::vector<tower::FieldElem> j_candidate_generators() const override {
        return wrap_all(k_->j_pool());
    }
    std::vector<tower::FieldElem> f_candidate_generators() const override {
        return wrap_all(k_->f_pool());
    }
    std::size_t j_expected_dim() const override { return k_->j_expected_dim(); }
    std::size_t f_expected_dim() const override { return k_->f_expected_dim(); }

    std::vector<tower::FieldElem> k_over_f_basis() const override {
        std::vector<tower::FieldElem> out;
        KElem cur = k_->one();
        for (unsigned i = 0; i < k_->p(); ++i) {
            out.push_back(wrap(cur));
            if (i + 1 < k_->p()) cur = k_->mul(cur, k_->y());
        }
        return out;
    }

    tower::FieldElem random_element(std::uint64_t seed) const override {
        return wrap(k_->random_element(seed));
    }
    std::string canonical_form(const tower::FieldElem& x) const override {
        return k_->canonical(el(x));
    }
    std::optional<int> val_fingerprint(const tower::FieldElem& x) const override {
        long long v = k_->val(el(x));
        long long pp = (long long)k_->p();
        return (int)(((v % pp) + pp) % pp);
    }

private:
    const KElem& el(const tower::FieldElem& x) const {
        if (x.tag() != (const void*)k_.get()) {
            fail(errc::backend_failure, "element does not belong to this context");
        }
        return std::any_cast<const KElem&>(x.payload());
    }
    tower::FieldElem wrap(KElem e) const {
        return tower::FieldElem(std::any(std::move(e)), (const void*)k_.get());
    }
    std::vector<tower::FieldElem> wrap_all(const std::vector<KElem>& es) const {
        std::vector<tower::FieldElem> out;
        out.reserve(es.size());
        for (const KElem& e : es) out.push_back(wrap(e));
        return out;
    }

    std::shared_ptr<const K> k_;
};

// ------------------------------------------------------------- the a-grammar

// factors: signed integer | pi | u | zeta, each with an optional ^exponent,
// joined by '*'; whitespace-insensitive
template <class B>
typename B::Elem eval_a_expr(const B& base, unsigned p, const std::string& expr) {
    std::string s;
    for (char ch : expr) {
        if (!std::isspace((unsigned char)ch)) s += ch;
    }
    if (s.empty()) fail(errc::parse_error, "empty element expression");

    typename B::Elem acc = base.one();
    std::size_t pos = 0;
    bool first = true;
    while (pos < s.size()) {
        if (!first) {
            if (s[pos] != '*') fail(errc::parse_error, "expected '*' in element expression");
            ++pos;
        }
        first = false;
        long long sign = 1;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        typename B::Elem atom = base.one();
        if (pos >= s.size()) fail(errc::parse_error, "dangling sign in element expression");
        if (std::isdigit((unsigned char)s[pos])) {
            long long v = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                v = v * 10 + (s[pos] - '0');
                if (v > (1LL << 40)) fail(errc::parse_error, "integer literal too large");
                ++pos;
            }
            atom = base.from_int(v);
        } else if (s.compare(pos, 2, "pi") == 0) {
            atom = base.uniformizer();
            pos += 2;
        } else if (s.compare(pos, 4, "zeta") == 0) {
            atom = base.zeta();
            pos += 4;
        } else if (s[pos] == 'u') {
            if (base.ell() == p) {
                fail(errc::parse_error, "symbol 'u' unavailable: residue field has no non-p-th-power");
            }
            atom = base.from_int((long long)smallest_nonresidue(base.ell(), p));
            pos += 1;
        } else {
            fail(errc::parse_error, std::string("unexpected token at '") + s.substr(pos, 4) + "'");
        }
        long long e = 1;
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            long long es = 1;
            if (pos < s.size() && s[pos] == '-') {
                es = -1;
                ++pos;
            }
            if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) {
                fail(errc::parse_error, "missing exponent");
            }
            long long v = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                v = v * 10 + (s[pos] - '0');
                if (v > 1000) fail(errc::parse_error, "exponent too large");
                ++pos;
            }
            e = es * v;
        }
        if (sign < 0) atom = base.neg(atom);
        if (base.is_zero(atom)) fail(errc::parse_error, "element expression evaluates to zero");
        acc = base.mul(acc, base.pow(atom, e));
    }
    return acc;
}

} // namespace

// ------------------------------------------------------------ factory layer

namespace {

bool is_small_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

template <class B>
std::shared_ptr<tower::TowerContext> make_tower(std::shared_ptr<const B> base, unsigned p,
                                                const std::string& a_expr) {
    typename B::Elem a = eval_a_expr(*base, p, a_expr);
    if (base->is_zero(a)) fail(errc::parse_error, "a must be nonzero");
    long long v = base->val(a);
    long long k = floor_div(v, (long long)p);
    if (k != 0) a = base->mul(a, base->pow(base->uniformizer(), -(long long)p * k));
    long long va = v - (long long)p * k;
    if (va == 0 && base->is_pth_power(a)) {
        fail(errc::a_pth_power, "a is a p-th power in F: the extension is degenerate");
    }
    auto kf = std::make_shared<const KummerField<B>>(std::move(base), p, std::move(a), va);
    return std::make_shared<LocalTower<B>>(std::move(kf));
}

} // namespace

LocalBase make_base(unsigned ell, unsigned p, int prec) {
    if (!is_small_prime(ell) || !is_small_prime(p)) {
        fail(errc::unsupported_configuration, "ell and p must be (small) primes");
    }
    if (prec < 16 || prec > kMaxPrecision) {
        fail(errc::unsupported_configuration, "precision out of supported range");
    }
    LocalBase b;
    b.ell = ell;
    b.p = p;
    b.prec = prec;
    if (ell != p) {
        if ((ell - 1) % p != 0) {
            fail(errc::unsupported_configuration,
                 "unsupported (ell, p): need p | ell - 1 or ell = p in {2, 3}");
        }
        b.ql = std::make_shared<const PadicField>(ell, p, prec);
        return b;
    }
    if (p == 2) {
        b.ql = std::make_shared<const PadicField>(2, 2, prec);
        return b;
    }
    if (p == 3) {
        b.cyclo = std::make_shared<const CycloField>(prec);
        return b;
    }
    fail(errc::unsupported_configuration, "ell = p > 3 is not supported");
}

std::shared_ptr<tower::TowerContext> make_K(const LocalBase& base, const std::string& a_expr) {
    if (base.is_cyclo()) return make_tower<CycloField>(base.cyclo, base.p, a_expr);
    if (!base.ql) fail(errc::unsupported_configuration, "empty base");
    return make_tower<PadicField>(base.ql, base.p, a_expr);
}

tower::CertifiedProfile norm_group_profile_certified(const tower::TowerContext& ctx,
                                                     const tower::JPresentation& pres) {
    return tower::certify_and_profile(ctx, pres);
}

structure::InvariantProfile norm_group_profile(const tower::TowerContext& ctx,
                                               const tower::JPresentation& pres) {
    return tower::certify_and_profile(ctx, pres).invariants;
}

} // namespace pclass::local
