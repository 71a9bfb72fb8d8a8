#include "g2surj/arith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace g2surj::arith {

namespace {

const Integer kZero = 0;

Integer pow_integer(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Integer exact_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<Integer> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients) {
  coeffs_.reserve(coefficients.size());
  for (long c : coefficients) coeffs_.emplace_back(c);
  trim();
}

IntPolynomial IntPolynomial::monomial(const Integer& c, unsigned degree) {
  std::vector<Integer> v(degree + 1);
  v[degree] = c;
  return IntPolynomial(std::move(v));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Integer& IntPolynomial::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : kZero;
}

const Integer& IntPolynomial::leading() const {
  if (coeffs_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
  return coeffs_.back();
}

Integer IntPolynomial::evaluate(const Integer& x) const {
  Integer acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Integer> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return IntPolynomial(std::move(d));
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  trim();
  return *this;
}

IntPolynomial& IntPolynomial::operator*=(const Integer& c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> r(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPolynomial(std::move(r));
}

std::string IntPolynomial::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int e = degree(); e >= 0; --e) {
    const Integer& c = coeffs_[e];
    if (c == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      out << mag;
      continue;
    }
    if (mag != 1) out << mag << '*';
    out << var;
    if (e > 1) out << '^' << e;
  }
  return out.str();
}

IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw std::invalid_argument("pseudo-remainder by zero polynomial");
  if (a.degree() < b.degree()) return a;
  std::vector<Integer> r = a.coefficients();
  const auto& bc = b.coefficients();
  const int db = b.degree();
  const Integer& lb = b.leading();
  for (int top = a.degree(); top >= db; --top) {
    Integer lead = r[top];
    for (auto& x : r) x *= lb;
    for (int i = 0; i <= db; ++i) r[top - db + i] -= lead * bc[i];
  }
  return IntPolynomial(std::move(r));
}

Integer resultant(const IntPolynomial& p, const IntPolynomial& q) {
  if (p.is_zero() || q.is_zero()) throw std::invalid_argument("resultant of zero polynomial");
  IntPolynomial a = p;
  IntPolynomial b = q;
  int sign = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() * b.degree()) % 2 != 0) sign = -sign;
  }
  if (b.degree() == 0) return sign * pow_integer(b.leading(), a.degree());

  Integer g = 1;
  Integer h = 1;
  for (;;) {
    const int delta = a.degree() - b.degree();
    if (a.degree() % 2 != 0 && b.degree() % 2 != 0) sign = -sign;
    IntPolynomial r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.is_zero()) return 0;
    const Integer divisor = g * pow_integer(h, delta);
    std::vector<Integer> rc = r.coefficients();
    for (auto& c : rc) c = exact_div(c, divisor);
    b = IntPolynomial(std::move(rc));
    g = a.leading();
    if (delta >= 1) h = exact_div(pow_integer(g, delta), pow_integer(h, delta - 1));
    if (b.degree() == 0) {
      const int da = a.degree();
      return sign * exact_div(pow_integer(b.leading(), da), pow_integer(h, da - 1));
    }
  }
}

Integer discriminant(const IntPolynomial& p) {
  if (p.degree() < 1) throw std::invalid_argument("discriminant needs degree >= 1");
  const long n = p.degree();
  Integer r = exact_div(resultant(p, p.derivative()), p.leading());
  return (n * (n - 1) / 2) % 2 == 0 ? r : Integer(-r);
}

IntPolynomial power_roots(const IntPolynomial& p, unsigned f) {
  if (!p.is_monic()) throw std::invalid_argument("power_roots requires a monic polynomial");
  if (f == 0) throw std::invalid_argument("power_roots requires a positive exponent");
  if (f == 1) return p;
  const unsigned n = static_cast<unsigned>(p.degree());
  if (n == 0) return p;
  const auto& c = p.coefficients();

  // Newton's identities: power sums s_1 .. s_{nf} of the roots.
  const unsigned top = n * f;
  std::vector<Integer> s(top + 1);
  for (unsigned m = 1; m <= top; ++m) {
    Integer acc = 0;
    const unsigned lim = std::min(m - 1, n);
    for (unsigned i = 1; i <= lim; ++i) acc += c[n - i] * s[m - i];
    if (m <= n) acc += c[n - m] * m;
    s[m] = -acc;
  }

  std::vector<Integer> out(n + 1);
  out[n] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    Integer acc = s[m * f];
    for (unsigned i = 1; i < m; ++i) acc += out[n - i] * s[(m - i) * f];
    out[n - m] = exact_div(-acc, Integer(m));
  }
  return IntPolynomial(std::move(out));
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

// Brent's variant of Pollard rho; n odd composite.
std::uint64_t rho_split(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
    std::uint64_t r = 1;
    const std::uint64_t batch = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(batch, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += batch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = rho_split(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> primes = primes_below(100000);
  return primes;
}

void big_factor_into(const Integer& n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (n.fits_ulong_p()) {
    std::vector<std::uint64_t> f;
    factor_into(n.get_ui(), f);
    for (auto q : f) out.emplace_back(static_cast<unsigned long>(q));
    return;
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    out.push_back(n);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1;
    auto step = [&](const Integer& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      Integer diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) {
      big_factor_into(d, out);
      big_factor_into(Integer(n / d), out);
      return;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize(0)");
  std::vector<std::uint64_t> out;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    while (n % q == 0) {
      out.push_back(q);
      n /= q;
    }
  }
  for (std::uint64_t q = 53; q * q <= n && q < 10000; q += 2) {
    while (n % q == 0) {
      out.push_back(q);
      n /= q;
    }
  }
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> distinct_primes(std::uint64_t n) {
  auto f = factorize(n);
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::vector<Integer> prime_divisors(const Integer& n) {
  if (n == 0) throw std::invalid_argument("prime_divisors(0)");
  Integer m = abs(n);
  std::vector<Integer> out;
  for (std::uint64_t q : small_primes()) {
    if (m == 1) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
      out.emplace_back(static_cast<unsigned long>(q));
      while (mpz_divisible_ui_p(m.get_mpz_t(), q)) mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
    }
  }
  big_factor_into(m, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t square_part(std::uint64_t n) {
  std::uint64_t m = 1;
  auto f = factorize(n);
  for (std::size_t i = 0; i + 1 < f.size();) {
    if (f[i] == f[i + 1]) {
      m *= f[i];
      i += 2;
    } else {
      ++i;
    }
  }
  return m;
}

std::uint64_t radical(std::uint64_t n) {
  std::uint64_t r = 1;
  for (auto q : distinct_primes(n)) r *= q;
  return r;
}

std::uint64_t multiplicative_order(std::int64_t p, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("multiplicative_order: modulus 0");
  if (m == 1) return 1;
  std::int64_t sm = static_cast<std::int64_t>(m);
  std::uint64_t a = static_cast<std::uint64_t>(((p % sm) + sm) % sm);
  if (std::gcd(a, m) != 1) throw std::invalid_argument("multiplicative_order: not a unit");

  // Carmichael lambda(m), then strip superfluous prime factors.
  std::uint64_t lambda = 1;
  auto f = factorize(m);
  for (std::size_t i = 0; i < f.size();) {
    std::size_t j = i;
    std::uint64_t pk = 1;
    while (j < f.size() && f[j] == f[i]) pk *= f[j++];
    const std::uint64_t q = f[i];
    const unsigned k = static_cast<unsigned>(j - i);
    std::uint64_t l = pk / q * (q - 1);
    if (q == 2 && k >= 3) l /= 2;
    lambda = std::lcm(lambda, l);
    i = j;
  }
  std::uint64_t order = lambda;
  for (auto q : distinct_primes(lambda)) {
    while (order % q == 0 && powmod(a, order / q, m) == 1) order /= q;
  }
  return order;
}

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound <= 2) return out;
  std::vector<bool> composite(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

bool is_7_smooth(const Integer& n) {
  if (n == 0) throw std::invalid_argument("is_7_smooth(0)");
  Integer m = abs(n);
  for (unsigned long q : {2UL, 3UL, 5UL, 7UL}) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), q)) mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
  }
  return m == 1;
}

namespace {

int jacobi(std::uint64_t a, std::uint64_t n) {
  a %= n;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::uint64_t r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::uint64_t reduce_signed(std::int64_t a, std::uint64_t n) {
  const std::int64_t sn = static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(((a % sn) + sn) % sn);
}

}  // namespace

int legendre(std::int64_t a, std::uint64_t p) {
  return jacobi(reduce_signed(a, p), p);
}

int kronecker(std::int64_t d, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("kronecker: n = 0");
  int result = 1;
  while ((n & 1) == 0) {
    n >>= 1;
    if ((d & 1) == 0) return 0;
    const std::int64_t r = ((d % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  return result * jacobi(reduce_signed(d, n), n);
}

}  // namespace g2surj::arith
