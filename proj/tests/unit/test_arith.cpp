#include <doctest.h>

#include <numeric>
#include <random>

#include "g2surj/arith.hpp"
#include "oracles.hpp"

using namespace g2surj::arith;

namespace {

IntPolynomial random_poly(std::mt19937_64& rng, int degree, long range) {
  std::uniform_int_distribution<long> d(-range, range);
  std::vector<Integer> c(degree + 1);
  for (auto& x : c) x = d(rng);
  if (c.back() == 0) c.back() = 1;
  return IntPolynomial(c);
}

bool naive_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const IntPolynomial p{1, 2, 3};
  const IntPolynomial q{-1, 0, 1};
  CHECK((p * q) == IntPolynomial{-1, -2, -2, 2, 3});
  CHECK((p - p).is_zero());
  CHECK((p + q) == IntPolynomial{0, 2, 4});
  CHECK(p.evaluate(2) == 17);
  CHECK(p.derivative() == IntPolynomial{2, 6});
  CHECK(IntPolynomial{0, 0, 0}.degree() == -1);
  CHECK(IntPolynomial{1, 0, 1}.to_string('z') == "z^2 + 1");
  CHECK(IntPolynomial::monomial(3, 2) == IntPolynomial{0, 0, 3});
}

TEST_CASE("resultant matches the Sylvester determinant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int da = 1 + static_cast<int>(rng() % 6), db = 1 + static_cast<int>(rng() % 6);
    auto a = random_poly(rng, da, 9), b = random_poly(rng, db, 9);
    CHECK(resultant(a, b) == oracles::sylvester_resultant(a.coefficients(), b.coefficients()));
  }
}

TEST_CASE("resultant edge cases") {
  CHECK(resultant(IntPolynomial{-2, 0, 1}, IntPolynomial{3}) == 9);
  CHECK(resultant(IntPolynomial{3}, IntPolynomial{-2, 0, 1}) == 9);
  CHECK(resultant(IntPolynomial{-1, 1}, IntPolynomial{-1, 0, 1}) == 0);
  // res(x - a, g) = g(a)
  CHECK(resultant(IntPolynomial{-3, 1}, IntPolynomial{5, 0, 2, 1}) == 5 + 18 + 27);
}

TEST_CASE("discriminant") {
  CHECK(discriminant(IntPolynomial{3, 5, 1}) == 25 - 12);
  // x^3 + p x + q: -4p^3 - 27q^2
  CHECK(discriminant(IntPolynomial{2, -3, 0, 1}) == -4 * -27 - 27 * 4);
  CHECK(discriminant(IntPolynomial{1, -2, 1}) == 0);
}

TEST_CASE("power_roots matches companion matrix powers") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int deg = 1 + static_cast<int>(rng() % 4);
    auto p = random_poly(rng, deg, 7);
    std::vector<Integer> c = p.coefficients();
    c.back() = 1;
    const IntPolynomial monic(c);
    const unsigned f = 1 + static_cast<unsigned>(rng() % 6);
    CHECK(power_roots(monic, f).coefficients() == oracles::companion_power_charpoly(c, f));
  }
  CHECK(power_roots(IntPolynomial{-2, 0, 1}, 2) == IntPolynomial{4, -4, 1});
}

TEST_CASE("factorization and primality") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t n = 2 + rng() % 100000;
    CHECK(is_prime(n) == naive_prime(n));
    auto fs = factorize(n);
    CHECK(std::accumulate(fs.begin(), fs.end(), std::uint64_t{1}, std::multiplies<>()) == n);
    for (auto p : fs) CHECK(naive_prime(p));
  }
  const std::uint64_t big = 1000000007ULL * 998244353ULL;
  CHECK(factorize(big) == std::vector<std::uint64_t>{998244353ULL, 1000000007ULL});
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  const Integer m61("2305843009213693951");  // 2^61 - 1
  const Integer n = Integer(83) * 83 * 1000003 * Integer("1000000007") * m61;
  CHECK(prime_divisors(n) == std::vector<Integer>{83, 1000003, Integer("1000000007"), m61});
  CHECK(prime_divisors(Integer(-12)) == std::vector<Integer>{2, 3});
  CHECK(primes_below(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}

TEST_CASE("square part, radical, order") {
  for (std::uint64_t n = 1; n < 3000; ++n) {
    std::uint64_t sq = 1, rad = 1;
    for (std::uint64_t d = 1; d * d <= n; ++d)
      if (n % (d * d) == 0) sq = d;
    for (std::uint64_t p = 2; p <= n; ++p)
      if (n % p == 0 && naive_prime(p)) rad *= p;
    CHECK(square_part(n) == sq);
    CHECK(radical(n) == rad);
  }
  for (std::uint64_t m = 1; m < 200; ++m)
    for (std::int64_t p : {3, 5, 7, 11, 13, 101}) {
      if (std::gcd<std::uint64_t>(p, m) != 1) continue;
      std::uint64_t k = 1, x = p % m;
      while (x % m != 1 % m) {
        x = x * p % m;
        ++k;
      }
      CHECK(multiplicative_order(p, m) == k);
    }
  CHECK(distinct_primes(249) == std::vector<std::uint64_t>{3, 83});
}

TEST_CASE("Legendre and Kronecker symbols") {
  for (std::uint64_t p : {3, 5, 7, 11, 13, 101, 997}) {
    for (std::int64_t a = -50; a <= 50; ++a) {
      std::int64_t e = 0;
      const std::int64_t r = ((a % static_cast<std::int64_t>(p)) + p) % p;
      if (r != 0) e = powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
      CHECK(legendre(a, p) == e);
      CHECK(kronecker(a, p) == e);
    }
  }
  // (d | 2) for odd d: +1 if d = +-1 mod 8
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(17, 2) == 1);
  CHECK(kronecker(-4, 3) == -1);
  CHECK(kronecker(8, 7) == 1);
  // multiplicative in the bottom argument
  for (std::int64_t d : {-83, -4, 5, 8, -8, 249})
    for (std::uint64_t m = 1; m < 60; m += 2)
      for (std::uint64_t n = 1; n < 60; n += 2) CHECK(kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n));
}

TEST_CASE("7-smooth") {
  CHECK(is_7_smooth(Integer(2 * 2 * 3 * 5 * 7)));
  CHECK_FALSE(is_7_smooth(Integer(22)));
  CHECK_THROWS(is_7_smooth(Integer(0)));
  CHECK(is_7_smooth(Integer(1)));
}

TEST_CASE("modular helpers") {
  CHECK(mulmod(1ULL << 63, 4, 1000000007ULL) == static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 65) % 1000000007ULL));
  CHECK(powmod(2, 10, 1000) == 24);
}
