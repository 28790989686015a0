#pragma once

// Exact arithmetic in K = Q(sqrt(a)) for squarefree a != 0, 1, plus the local
// norm tests (Hilbert symbols) that decide norm membership globally. Used for
// the p = 2 membership predicates where J is infinite.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pclass/errors.hpp"

namespace pclass::quadratic {

// int64 rational, always reduced, denominator > 0; overflow checked via __int128
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n); // NOLINT(google-explicit-constructor)
    Rational(long long n, long long d);

    bool is_zero() const { return num == 0; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
Rational operator-(const Rational& a);
std::string to_string(const Rational& r);

// u + v sqrt(a); a is a field tag, squarefree, != 0, 1
struct QuadElement {
    Rational u;
    Rational v;
    long long a = 2;

    bool is_zero() const { return u.is_zero() && v.is_zero(); }
    bool operator==(const QuadElement& o) const { return a == o.a && u == o.u && v == o.v; }
};

QuadElement make_elem(long long a, Rational u, Rational v);
QuadElement qmul(const QuadElement& x, const QuadElement& y);
QuadElement qinv(const QuadElement& x);
QuadElement qdiv(const QuadElement& x, const QuadElement& y);
QuadElement conjugate(const QuadElement& x); // u - v sqrt(a)

// u^2 - a v^2
Rational norm(const QuadElement& x);
Rational trace_rat(const QuadElement& x);

std::optional<Rational> rational_sqrt(const Rational& r); // nonnegative root if a perfect square

// gamma = (s + t sqrt(a))^2? returns witness (s, t) when true
std::optional<std::pair<Rational, Rational>> is_square(const QuadElement& gamma);

// places: the real place or a rational prime
struct Place {
    bool real = false;
    long long prime = 0;
    static Place real_place() { return Place{true, 0}; }
    static Place at(long long p) { return Place{false, p}; }
};

// quadratic Hilbert symbol (b, c)_v in {+1, -1}; exact residue formulas.
// Every call verifies the product formula over the support of b and c.
int hilbert_symbol(const Rational& b, const Rational& c, const Place& v);

// -1 = u^2 - a v^2 solvable over Q; witness by bounded search when true
struct NormDecision {
    bool is_norm = false;
    std::optional<std::pair<Rational, Rational>> witness;
};

NormDecision minus_one_is_norm(long long a);
NormDecision is_norm(const Rational& c, long long a);

long long squarefree_part(long long a); // trial division <= 10^6; rejects harder inputs

// factorization support (shared with the symbol code)
std::vector<std::pair<long long, int>> factorize(long long n);

// search bound for norm witnesses (numerators/denominators)
void set_witness_bound(long long b);
long long witness_bound();

} // namespace pclass::quadratic

#include "pclass/tower.hpp"

namespace pclass::quadratic {

// K = Q(sqrt(a)) as a TowerContext (p = 2, J infinite: membership predicates
// and Hilbert-90 solving only)
std::shared_ptr<tower::TowerContext> make_quadratic_tower(long long a);

} // namespace pclass::quadratic
