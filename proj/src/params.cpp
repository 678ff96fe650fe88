#include "ec/params.hpp"

#include <cmath>
#include <stdexcept>

namespace ec {

namespace {
BigInt big_gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt r = a % b;
        a = b;
        b = r;
    }
    return a;
}
}  // namespace

Rational::Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    BigInt g = big_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("rational division by zero");
    return Rational(num * o.den, den * o.num);
}

bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }
bool Rational::operator<=(const Rational& o) const { return num * o.den <= o.num * den; }

Rational Rational::pow(unsigned e) const {
    Rational base = *this;
    Rational acc(1);
    while (e) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

BigInt Rational::floor() const {
    BigInt q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

BigInt Rational::ceil() const {
    BigInt q = num / den;
    if (num > 0 && q * den != num) q += 1;
    return q;
}

std::string Rational::str() const {
    return num.str() + "/" + den.str();
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    if (x == 0.0) return Rational(0);
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 53));  // exact 53-bit integer
    int shift = e - 53;
    BigInt n = mant;
    BigInt d = 1;
    if (shift >= 0)
        n <<= shift;
    else
        d <<= -shift;
    return Rational(n, d);
}

int log2_ceil(long long n) {
    if (n < 1) throw std::invalid_argument("log2_ceil needs n >= 1");
    int l = 0;
    long long p = 1;
    while (p < n) {
        p <<= 1;
        ++l;
    }
    return l;
}

int sqrt_ceil(int x) {
    if (x < 0) throw std::invalid_argument("sqrt_ceil needs x >= 0");
    int r = 0;
    while (r * r < x) ++r;
    return r;
}

int sqrt_log(long long n) { return sqrt_ceil(log2_ceil(n)); }

BigInt pow2(int e) {
    BigInt one = 1;
    return one << e;
}

BigInt eta_value(const Rational& eps, long long dmax, long long t, long long n) {
    int L = log2_ceil(n);
    Rational v = eps * eps * Rational(dmax) / Rational(128 * t * static_cast<long long>(L));
    return v.floor();
}

BigInt stride_value(long long dmax, const BigInt& eta) {
    if (eta <= 0) throw std::invalid_argument("stride needs eta >= 1");
    BigInt num = BigInt(500) * dmax;
    return (num + eta - 1) / eta;
}

BigInt t1_value(long long n) { return pow2(10 * sqrt_log(n)); }

BigInt t2_value(long long n, const Rational& eps) {
    return (Rational(log2_ceil(n)) / eps).floor();
}

BigInt stop_threshold_value(long long n, const Rational& eps) {
    BigInt L = log2_ceil(n);
    Rational v = Rational(BigInt(10000000) * L * L * L * L * L, 1) / (eps * eps * eps);
    return v.ceil();
}

BigInt level_divisor_value(long long n) { return pow2(sqrt_log(n)); }

Rational mu_value(long long n, const Rational& eps) {
    return eps / Rational(128 * static_cast<long long>(log2_ceil(n)));
}

bool claim_est_holds(long long n, const Rational& eps) {
    int L = log2_ceil(n);
    Rational lhs = (Rational(1) + mu_value(n, eps)).pow(static_cast<unsigned>(4 * L));
    Rational rhs = Rational(1) + eps / Rational(16);
    return lhs <= rhs;
}

int h_bound(long long n) { return 4 * sqrt_log(n); }

Rational sched_mu(const Rational& eps) { return eps / Rational(7); }

int sched_copies(long long n, const Rational& eps) {
    Rational base = Rational(1) + sched_mu(eps);
    Rational acc(1);
    Rational target(n);
    int s = 0;
    while (acc < target) {
        acc = acc * base;
        ++s;
    }
    return s;
}

BigInt pow1p_floor(const Rational& mu, unsigned e) {
    return (Rational(1) + mu).pow(e).floor();
}

BigInt pow1p_ceil(const Rational& mu, unsigned e) {
    return (Rational(1) + mu).pow(e).ceil();
}

}  // namespace ec
