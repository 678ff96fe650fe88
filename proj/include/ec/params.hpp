#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace ec {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic used for every parameter/threshold formula.
// Invariants: den > 0, gcd(|num|, den) == 1.
struct Rational {
    BigInt num{0};
    BigInt den{1};

    Rational() = default;
    Rational(BigInt n, BigInt d);
    Rational(long long n) : num(n), den(1) {}

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const;

    Rational pow(unsigned e) const;
    BigInt floor() const;
    BigInt ceil() const;
    std::string str() const;
};

// Exact binary expansion of an IEEE double (no decimal round-trip).
Rational rational_from_double(double x);

// ceil(log2(n)) for n >= 1; 0 for n == 1.
int log2_ceil(long long n);
// smallest r >= 0 with r*r >= x.
int sqrt_ceil(int x);
// ceil(sqrt(ceil(log2 n)))
int sqrt_log(long long n);

BigInt pow2(int e);

// floor(eps^2 * dmax / (128 * t * ceil(log2 n)))
BigInt eta_value(const Rational& eps, long long dmax, long long t, long long n);
// ceil(500 * dmax / eta), eta >= 1
BigInt stride_value(long long dmax, const BigInt& eta);
// 2^(10 * sqrt_log n)
BigInt t1_value(long long n);
// floor(ceil(log2 n) / eps)
BigInt t2_value(long long n, const Rational& eps);
// ceil(1e7 * L^5 / eps^3), L = ceil(log2 n): instances at or above keep splitting
BigInt stop_threshold_value(long long n, const Rational& eps);
// 2^(sqrt_log n): per-level degree divisor used by the level-type rule
BigInt level_divisor_value(long long n);
// eps / (128 * L)
Rational mu_value(long long n, const Rational& eps);
// (1 + mu)^(4L) <= 1 + eps/16
bool claim_est_holds(long long n, const Rational& eps);
// 4 * sqrt_log n
int h_bound(long long n);

// Degree scheduler: growth ratio eps/7 and minimal s with (1+eps/7)^s >= n.
Rational sched_mu(const Rational& eps);
int sched_copies(long long n, const Rational& eps);
// floor((1+mu)^i) and ceil((1+mu)^(i+1)) used for admit/evict/cap thresholds.
BigInt pow1p_floor(const Rational& mu, unsigned e);
BigInt pow1p_ceil(const Rational& mu, unsigned e);

// Integer knobs a run may pin (absent = use the closed forms above).
struct Overrides {
    std::optional<long long> eta;
    std::optional<long long> ell;
    std::optional<long long> a;
    std::optional<long long> t1;
    std::optional<long long> t2;
    std::optional<long long> stop_threshold;
    std::optional<long long> level_threshold;
    std::optional<long long> level_divisor;
};

}  // namespace ec
