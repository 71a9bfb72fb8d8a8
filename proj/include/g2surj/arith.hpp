#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace g2surj::arith {

using Integer = mpz_class;

/// Dense univariate polynomial over Z, coefficients in ascending degree.
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and has degree -1.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coefficients);
  IntPolynomial(std::initializer_list<long> coefficients);

  /// c * t^degree.
  static IntPolynomial monomial(const Integer& c, unsigned degree);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !is_zero() && coeffs_.back() == 1; }

  /// Coefficient of t^i; zero beyond the degree.
  const Integer& coeff(std::size_t i) const;
  const Integer& leading() const;
  const std::vector<Integer>& coefficients() const { return coeffs_; }

  Integer evaluate(const Integer& x) const;
  IntPolynomial derivative() const;

  IntPolynomial& operator+=(const IntPolynomial& other);
  IntPolynomial& operator-=(const IntPolynomial& other);
  IntPolynomial& operator*=(const Integer& c);

  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(IntPolynomial a, const Integer& c) { return a *= c; }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) = default;

  /// Human-readable form such as "t^4 - 3*t^3 + 25".
  std::string to_string(char var = 't') const;

 private:
  void trim();

  std::vector<Integer> coeffs_;
};

/// Res(P, Q) = lc(P)^deg(Q) * prod Q(alpha) over the roots alpha of P.
/// Computed with the subresultant pseudo-remainder sequence.
/// Throws std::invalid_argument if either input is zero.
Integer resultant(const IntPolynomial& p, const IntPolynomial& q);

/// Discriminant with the usual sign convention
/// (-1)^(n(n-1)/2) Res(P, P') / lc(P). Requires degree >= 1.
Integer discriminant(const IntPolynomial& p);

/// Pseudo-remainder: lc(B)^(deg A - deg B + 1) A mod B.
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);

/// Monic polynomial whose roots are the f-th powers of the roots of P,
/// with multiplicity. P must be monic; f must be positive.
IntPolynomial power_roots(const IntPolynomial& p, unsigned f);

/// Prime factorization with multiplicity, ascending. Throws on n = 0.
std::vector<std::uint64_t> factorize(std::uint64_t n);

/// Distinct prime divisors of |n|, ascending. Throws on n = 0.
std::vector<Integer> prime_divisors(const Integer& n);

/// Distinct primes of factorize(n).
std::vector<std::uint64_t> distinct_primes(std::uint64_t n);

/// Largest m with m^2 | n.
std::uint64_t square_part(std::uint64_t n);

/// Product of the distinct primes dividing n.
std::uint64_t radical(std::uint64_t n);

/// Least k >= 1 with p^k = 1 mod m. Throws if gcd(p, m) != 1.
std::uint64_t multiplicative_order(std::int64_t p, std::uint64_t m);

/// Deterministic for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// All primes strictly below bound, ascending.
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

/// Every prime factor of n is at most 7. n must be nonzero.
bool is_7_smooth(const Integer& n);

/// Legendre symbol (a | p) for odd prime p, in {-1, 0, 1}.
int legendre(std::int64_t a, std::uint64_t p);

/// Kronecker symbol (d | n) for n >= 1.
int kronecker(std::int64_t d, std::uint64_t n);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

}  // namespace g2surj::arith
