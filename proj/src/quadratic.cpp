#include "pclass/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pclass::quadratic {

namespace {

long long checked(__int128 v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN) fail(errc::backend_failure, std::string("integer overflow in ") + what);
    return (long long)v;
}

long long mul_ll(long long a, long long b) { return checked(__int128(a) * b, "rational arithmetic"); }
long long add_ll(long long a, long long b) { return checked(__int128(a) + b, "rational arithmetic"); }

long long g_witness_bound = 10000;

} // namespace

Rational::Rational(long long n) : num(n), den(1) {}

Rational::Rational(long long n, long long d) {
    if (d == 0) fail(errc::backend_failure, "zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(add_ll(mul_ll(a.num, b.den), mul_ll(b.num, a.den)), mul_ll(a.den, b.den));
}
Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num, b.den); }
Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mul_ll(a.num, b.num), mul_ll(a.den, b.den));
}
Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(errc::backend_failure, "division by zero");
    return Rational(mul_ll(a.num, b.den), mul_ll(a.den, b.num));
}
Rational operator-(const Rational& a) { return Rational(-a.num, a.den); }

std::string to_string(const Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

QuadElement make_elem(long long a, Rational u, Rational v) {
    QuadElement e;
    e.a = a;
    e.u = std::move(u);
    e.v = std::move(v);
    return e;
}

static void check_same_field(const QuadElement& x, const QuadElement& y) {
    if (x.a != y.a) fail(errc::dimension_mismatch, "elements of different quadratic fields");
}

QuadElement qmul(const QuadElement& x, const QuadElement& y) {
    check_same_field(x, y);
    Rational a(x.a);
    return make_elem(x.a, x.u * y.u + a * x.v * y.v, x.u * y.v + x.v * y.u);
}

QuadElement conjugate(const QuadElement& x) { return make_elem(x.a, x.u, -x.v); }

Rational norm(const QuadElement& x) { return x.u * x.u - Rational(x.a) * x.v * x.v; }

Rational trace_rat(const QuadElement& x) { return x.u + x.u; }

QuadElement qinv(const QuadElement& x) {
    Rational n = norm(x);
    if (n.is_zero()) fail(errc::backend_failure, "inverse of zero (or of a zero-norm element)");
    return make_elem(x.a, x.u / n, -x.v / n);
}

QuadElement qdiv(const QuadElement& x, const QuadElement& y) { return qmul(x, qinv(y)); }

static std::optional<long long> integer_sqrt(long long n) {
    if (n < 0) return std::nullopt;
    long long r = (long long)std::llround(std::sqrt((double)n));
    for (long long c = std::max(0LL, r - 2); c <= r + 2; ++c) {
        if (c * c == n) return c;
    }
    return std::nullopt;
}

std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r.num < 0) return std::nullopt;
    auto sn = integer_sqrt(r.num);
    auto sd = integer_sqrt(r.den);
    if (!sn || !sd) return std::nullopt;
    return Rational(*sn, *sd);
}

std::optional<std::pair<Rational, Rational>> is_square(const QuadElement& gamma) {
    const Rational& u = gamma.u;
    const Rational& v = gamma.v;
    if (gamma.is_zero()) return std::make_pair(Rational(0), Rational(0));
    if (v.is_zero()) {
        if (auto s = rational_sqrt(u)) return std::make_pair(*s, Rational(0));
        if (auto t = rational_sqrt(u / Rational(gamma.a))) return std::make_pair(Rational(0), *t);
        return std::nullopt;
    }
    auto n = rational_sqrt(norm(gamma));
    if (!n) return std::nullopt;
    Rational half(1, 2);
    for (const Rational& cand : {(u + *n) * half, (u - *n) * half}) {
        auto s = rational_sqrt(cand);
        if (!s || s->is_zero()) continue;
        Rational t = v / (*s + *s);
        // verify (s + t sqrt a)^2 == gamma
        if (*s * *s + Rational(gamma.a) * t * t == u && (*s * t + *s * t) == v) {
            return std::make_pair(*s, t);
        }
    }
    return std::nullopt;
}

std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n == 0) fail(errc::backend_failure, "factorize(0)");
    if (n < 0) n = -n;
    std::vector<std::pair<long long, int>> fs;
    for (long long d = 2; d * d <= n && d <= 1000000; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        fs.emplace_back(d, e);
    }
    if (n > 1) {
        // no factor <= 10^6 remains, so a cofactor below 10^12 is prime
        if (n >= 1000000000000LL) {
            fail(errc::backend_failure, "input too large to factor by trial division");
        }
        fs.emplace_back(n, 1);
    }
    return fs;
}

long long squarefree_part(long long a) {
    if (a == 0) fail(errc::backend_failure, "squarefree_part(0)");
    long long sign = a < 0 ? -1 : 1;
    long long r = 1;
    for (auto [p, e] : factorize(a)) {
        if (e % 2) r = mul_ll(r, p);
    }
    return sign * r;
}

namespace {

int legendre(long long a, long long p) {
    // (a/p) for odd prime p, p does not divide a
    a %= p;
    if (a < 0) a += p;
    long long r = 1, base = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = (__int128)r * base % p;
        base = (__int128)base * base % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

// strip v_p and return (valuation, unit part)
std::pair<int, long long> split_at(long long n, long long p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return {v, n};
}

int eps4(long long u) { // (u-1)/2 mod 2 for odd u
    long long m = ((u % 4) + 4) % 4;
    return m == 3 ? 1 : 0;
}

int omega8(long long u) { // (u^2-1)/8 mod 2 for odd u
    long long m = ((u % 8) + 8) % 8;
    return (m == 3 || m == 5) ? 1 : 0;
}

int hilbert_int(long long b, long long c, const Place& v) {
    if (b == 0 || c == 0) fail(errc::backend_failure, "hilbert symbol of zero");
    if (v.real) return (b < 0 && c < 0) ? -1 : 1;
    long long p = v.prime;
    if (p < 2) fail(errc::invalid_place, "place must be the real place or a prime");
    if (p == 2) {
        auto [alpha, u] = split_at(b, 2);
        auto [beta, w] = split_at(c, 2);
        int e = eps4(u) * eps4(w) + alpha * omega8(w) + beta * omega8(u);
        return (e % 2) ? -1 : 1;
    }
    auto [alpha, u] = split_at(b, p);
    auto [beta, w] = split_at(c, p);
    int s = 1;
    if ((alpha % 2) && (beta % 2) && ((p - 1) / 2) % 2) s = -s;
    if (beta % 2) s *= legendre(u, p);
    if (alpha % 2) s *= legendre(w, p);
    return s;
}

long long symbol_rep(const Rational& r) {
    // num*den is in the same square class
    return mul_ll(r.num, r.den);
}

std::vector<Place> support(long long b, long long c) {
    std::vector<Place> ps;
    ps.push_back(Place::real_place());
    std::vector<long long> primes{2};
    for (long long n : {b, c}) {
        for (auto [p, e] : factorize(n)) {
            (void)e;
            primes.push_back(p);
        }
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (long long p : primes) ps.push_back(Place::at(p));
    return ps;
}

void check_reciprocity(long long b, long long c) {
    int prod = 1;
    for (const Place& v : support(b, c)) prod *= hilbert_int(b, c, v);
    if (prod != 1) fail(errc::backend_failure, "hilbert reciprocity violated (arithmetic bug)");
}

} // namespace

int hilbert_symbol(const Rational& b, const Rational& c, const Place& v) {
    if (b.is_zero() || c.is_zero()) fail(errc::backend_failure, "hilbert symbol of zero");
    if (!v.real && v.prime < 2) fail(errc::invalid_place, "invalid place");
    if (!v.real && v.prime > 2 && v.prime % 2 == 0) fail(errc::invalid_place, "place must be prime");
    long long bi = symbol_rep(b), ci = symbol_rep(c);
    check_reciprocity(bi, ci);
    return hilbert_int(bi, ci, v);
}

void set_witness_bound(long long b) { g_witness_bound = b; }
long long witness_bound() { return g_witness_bound; }

namespace {

// bounded search for u, v with u^2 - a v^2 = c; never affects the boolean answer
std::optional<std::pair<Rational, Rational>> norm_witness(const Rational& c, long long a) {
    long long qmax = std::min<long long>(32, g_witness_bound);
    long long xmax = std::min<long long>(2000, g_witness_bound);
    for (long long q = 1; q <= qmax; ++q) {
        for (long long x = 0; x <= xmax; ++x) {
            for (long long sx : {1LL, -1LL}) {
                if (x == 0 && sx < 0) continue;
                Rational u(sx * x, q);
                Rational rem = (u * u - c) / Rational(a);
                if (rem.num < 0) continue;
                if (auto t = rational_sqrt(rem)) return std::make_pair(u, *t);
            }
        }
    }
    return std::nullopt;
}

} // namespace

NormDecision is_norm(const Rational& c, long long a) {
    if (c.is_zero()) fail(errc::backend_failure, "is_norm(0)");
    if (a == 0 || a == 1) fail(errc::backend_failure, "field tag must be squarefree and != 0, 1");
    long long ci = symbol_rep(c);
    NormDecision d;
    d.is_norm = true;
    for (const Place& v : support(ci, a)) {
        if (hilbert_int(ci, a, v) != 1) {
            d.is_norm = false;
            break;
        }
    }
    check_reciprocity(ci, a);
    if (d.is_norm) d.witness = norm_witness(c, a);
    return d;
}

NormDecision minus_one_is_norm(long long a) { return is_norm(Rational(-1), a); }

} // namespace pclass::quadratic

// --------------------------------------------------------- tower interface

namespace pclass::quadratic {

namespace {

class QuadTower : public tower::TowerContext {
public:
    explicit QuadTower(long long a) : a_(a) {}

    unsigned p() const override { return 2; }
    std::string backend_name() const override { return "quadratic"; }
    int precision() const override { return 0; }

    tower::FieldElem one() const override { return wrap(make_elem(a_, Rational(1), Rational(0))); }
    tower::FieldElem from_integer(long long v) const override {
        return wrap(make_elem(a_, Rational(v), Rational(0)));
    }
    tower::FieldElem add(const tower::FieldElem& x, const tower::FieldElem& y) const override {
        const QuadElement &a = el(x), &b = el(y);
        return wrap(make_elem(a_, a.u + b.u, a.v + b.v));
    }
    tower::FieldElem neg(const tower::FieldElem& x) const override {
        const QuadElement& a = el(x);
        return wrap(make_elem(a_, -a.u, -a.v));
    }
    tower::FieldElem mul(const tower::FieldElem& x, const tower::FieldElem& y) const override {
        return wrap(qmul(el(x), el(y)));
    }
    tower::FieldElem inv(const tower::FieldElem& x) const override { return wrap(qinv(el(x))); }
    bool eq(const tower::FieldElem& x, const tower::FieldElem& y) const override {
        return el(x) == el(y);
    }
    bool is_zero(const tower::FieldElem& x) const override { return el(x).is_zero(); }

    tower::FieldElem sigma(const tower::FieldElem& x) const override {
        return wrap(conjugate(el(x)));
    }
    tower::FieldElem norm(const tower::FieldElem& x) const override {
        return wrap(make_elem(a_, quadratic::norm(el(x)), Rational(0)));
    }
    tower::FieldElem trace(const tower::FieldElem& x) const override {
        return wrap(make_elem(a_, trace_rat(el(x)), Rational(0)));
    }

    bool is_pth_power(const tower::FieldElem& x) const override {
        return is_square(el(x)).has_value();
    }
    bool is_in_F(const tower::FieldElem& x) const override { return el(x).v.is_zero(); }
    bool is_pth_power_in_F(const tower::FieldElem& x, tower::FieldElem* witness) const override {
        const QuadElement& e = el(x);
        if (!e.v.is_zero()) fail(errc::backend_failure, "is_pth_power_in_F outside Q");
        auto s = rational_sqrt(e.u);
        if (!s) return false;
        if (witness) *witness = wrap(make_elem(a_, *s, Rational(0)));
        return true;
    }

    tower::FieldElem zeta() const override { return from_integer(-1); }
    tower::FieldElem root_a() const override { return wrap(make_elem(a_, Rational(0), Rational(1))); }
    tower::FieldElem a_elem() const override { return from_integer(a_); }

    bool j_finite() const override { return false; }
    std::vector<tower::FieldElem> j_candidate_generators() const override {
        fail(errc::infinite_j, "J = K^x/K^{x2} is infinite over Q");
    }
    std::vector<tower::FieldElem> f_candidate_generators() const override {
        fail(errc::infinite_j, "Q^x/Q^{x2} is infinite");
    }
    std::size_t j_expected_dim() const override {
        fail(errc::infinite_j, "J = K^x/K^{x2} is infinite over Q");
    }
    std::size_t f_expected_dim() const override {
        fail(errc::infinite_j, "Q^x/Q^{x2} is infinite");
    }

    std::vector<tower::FieldElem> k_over_f_basis() const override {
        return {one(), root_a()};
    }
    tower::FieldElem random_element(std::uint64_t seed) const override {
        std::uint64_t s = seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
        long long u = (long long)((s >> 17) % 19) - 9;
        long long v = (long long)((s >> 41) % 19) - 9;
        if (u == 0 && v == 0) u = 1;
        QuadElement e = make_elem(a_, Rational(u), Rational(v));
        if (quadratic::norm(e).is_zero()) e = make_elem(a_, Rational(u + 1), Rational(v));
        return wrap(e);
    }
    std::string canonical_form(const tower::FieldElem& x) const override {
        const QuadElement& e = el(x);
        return to_string(e.u) + "|" + to_string(e.v);
    }
    std::optional<int> val_fingerprint(const tower::FieldElem&) const override {
        return std::nullopt;
    }

private:
    const QuadElement& el(const tower::FieldElem& x) const {
        if (x.tag() != (const void*)this) {
            fail(errc::backend_failure, "element does not belong to this context");
        }
        return std::any_cast<const QuadElement&>(x.payload());
    }
    tower::FieldElem wrap(QuadElement e) const {
        return tower::FieldElem(std::any(std::move(e)), (const void*)this);
    }

    long long a_;
};

} // namespace

std::shared_ptr<tower::TowerContext> make_quadratic_tower(long long a) {
    long long sf = squarefree_part(a);
    if (sf == 0 || sf == 1) fail(errc::a_pth_power, "a is a square: the extension is degenerate");
    return std::make_shared<QuadTower>(sf);
}

} // namespace pclass::quadratic
