#include "g2surj/frobenius.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace g2surj::frobenius {

using arith::legendre;

CurveModel::CurveModel(IntPolynomial f, IntPolynomial h, std::uint64_t conductor, std::string label)
    : f_(std::move(f)), h_(std::move(h)), conductor_(conductor), label_(std::move(label)) {
  if (f_.degree() > 6) throw std::invalid_argument("deg f exceeds 6");
  if (h_.degree() > 3) throw std::invalid_argument("deg h exceeds 3");
  if (conductor_ == 0) throw std::invalid_argument("conductor must be positive");
  g_ = f_ * Integer(4) + h_ * h_;
  if (g_.degree() != 5 && g_.degree() != 6)
    throw std::invalid_argument("4f + h^2 must have degree 5 or 6");
  disc_ = arith::discriminant(g_);
  if (disc_ == 0) throw std::invalid_argument("4f + h^2 is not squarefree");
}

IntPolynomial FrobeniusPoly::quartic() const {
  const Integer pp(static_cast<unsigned long>(p));
  const Integer aa(static_cast<long>(a));
  const Integer bb(static_cast<long>(b));
  return IntPolynomial({pp * pp, -pp * aa, bb, -aa, Integer(1)});
}

bool is_good_prime(const CurveModel& curve, std::uint64_t p) {
  if (p < 3) return false;
  const unsigned long up = static_cast<unsigned long>(p);
  if (mpz_divisible_ui_p(curve.g().leading().get_mpz_t(), up)) return false;
  return !mpz_divisible_ui_p(curve.discriminant().get_mpz_t(), up);
}

namespace {

struct Fp2 {
  std::uint32_t re;
  std::uint32_t im;
};

class SmallField {
 public:
  explicit SmallField(std::uint32_t p) : p_(p), chi_(p), square_(p), c_square_(p) {
    for (std::uint32_t x = 0; x < p; ++x) chi_[x] = -1;
    chi_[0] = 0;
    for (std::uint32_t x = 1; x < p; ++x) chi_[mul(x, x)] = 1;
    nonresidue_ = 2;
    while (chi_[nonresidue_] != -1) ++nonresidue_;
    for (std::uint32_t x = 0; x < p; ++x) {
      square_[x] = mul(x, x);
      c_square_[x] = mul(nonresidue_, square_[x]);
    }
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }

  Fp2 add(Fp2 a, Fp2 b) const { return {add(a.re, b.re), add(a.im, b.im)}; }
  Fp2 sub(Fp2 a, Fp2 b) const { return {sub(a.re, b.re), sub(a.im, b.im)}; }
  Fp2 mul(Fp2 a, Fp2 b) const {
    return {add(mul(a.re, b.re), mul(nonresidue_, mul(a.im, b.im))),
            add(mul(a.re, b.im), mul(a.im, b.re))};
  }

  int chi(std::uint32_t x) const { return chi_[x]; }

  // Quadratic character of F_{p^2}, via the norm to F_p.
  int chi2(Fp2 z) const { return chi_[sub(square_[z.re], c_square_[z.im])]; }

 private:
  std::uint32_t p_;
  std::uint32_t nonresidue_ = 0;
  std::vector<int> chi_;
  std::vector<std::uint32_t> square_;
  std::vector<std::uint32_t> c_square_;
};

std::vector<std::uint32_t> reduce(const IntPolynomial& g, std::uint32_t p) {
  std::vector<std::uint32_t> out;
  for (const auto& c : g.coefficients()) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
    out.push_back(static_cast<std::uint32_t>(r.get_ui()));
  }
  return out;
}

std::uint64_t count_over_prime_field(const SmallField& k, const std::vector<std::uint32_t>& g,
                                     std::uint32_t p) {
  std::int64_t total = 0;
  for (std::uint32_t x = 0; x < p; ++x) {
    std::uint32_t v = 0;
    for (auto it = g.rbegin(); it != g.rend(); ++it) v = k.add(k.mul(v, x), *it);
    total += 1 + k.chi(v);
  }
  const int deg = static_cast<int>(g.size()) - 1;
  total += deg == 5 ? 1 : 1 + k.chi(g.back());
  return static_cast<std::uint64_t>(total);
}

// Rows x = x0 + x1 u with x1 fixed are walked by forward differences in x0.
std::uint64_t count_over_quadratic_field(const SmallField& k, const std::vector<std::uint32_t>& g,
                                         std::uint32_t p) {
  const int deg = static_cast<int>(g.size()) - 1;
  auto eval = [&](Fp2 x) {
    Fp2 v{0, 0};
    for (auto it = g.rbegin(); it != g.rend(); ++it) v = k.add(k.mul(v, x), Fp2{*it, 0});
    return v;
  };
  std::int64_t total = 0;
  std::vector<Fp2> diff(deg + 1);
  for (std::uint32_t x1 = 0; x1 < p; ++x1) {
    for (int j = 0; j <= deg; ++j) diff[j] = eval(Fp2{static_cast<std::uint32_t>(j) % p, x1});
    for (int level = 1; level <= deg; ++level)
      for (int j = deg; j >= level; --j) diff[j] = k.sub(diff[j], diff[j - 1]);
    for (std::uint32_t x0 = 0; x0 < p; ++x0) {
      total += 1 + k.chi2(diff[0]);
      for (int j = 0; j < deg; ++j) diff[j] = k.add(diff[j], diff[j + 1]);
    }
  }
  // Every element of F_p is a square in F_{p^2}.
  total += deg == 5 ? 1 : 2;
  return static_cast<std::uint64_t>(total);
}

}  // namespace

std::uint64_t count_points(const CurveModel& curve, std::uint64_t p, int r) {
  if (r != 1 && r != 2) throw std::invalid_argument("count_points: r must be 1 or 2");
  if (p >= (1ULL << 31)) throw std::invalid_argument("count_points: prime too large");
  if (!is_good_prime(curve, p)) throw std::invalid_argument("count_points: bad prime");
  const auto p32 = static_cast<std::uint32_t>(p);
  const SmallField k(p32);
  const auto g = reduce(curve.g(), p32);
  return r == 1 ? count_over_prime_field(k, g, p32) : count_over_quadratic_field(k, g, p32);
}

FrobeniusPoly frobenius_poly(const CurveModel& curve, std::uint64_t p) {
  const auto n1 = static_cast<std::int64_t>(count_points(curve, p, 1));
  const auto n2 = static_cast<std::int64_t>(count_points(curve, p, 2));
  const auto sp = static_cast<std::int64_t>(p);
  const std::int64_t a = sp + 1 - n1;
  const std::int64_t s2 = sp * sp + 1 - n2;
  const std::int64_t twice_b = a * a - s2;
  if (twice_b % 2 != 0) throw std::logic_error("frobenius_poly: odd middle coefficient");
  const std::int64_t b = twice_b / 2;
  if (static_cast<double>(a * a) > 16.0 * static_cast<double>(p) || std::llabs(b) > 6 * sp)
    throw std::logic_error("frobenius_poly: Weil bound violated");
  return {p, a, b};
}

const FrobeniusPoly& FrobeniusCache::get(std::uint64_t p) {
  {
    std::lock_guard lock(mutex_);
    auto it = polys_.find(p);
    if (it != polys_.end()) return it->second;
  }
  FrobeniusPoly poly = frobenius_poly(curve_, p);
  std::lock_guard lock(mutex_);
  return polys_.emplace(p, poly).first->second;
}

void FrobeniusCache::prefetch(const std::vector<std::uint64_t>& primes, unsigned threads) {
  if (threads <= 1) {
    for (auto p : primes) get(p);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < primes.size(); i = next++) get(primes[i]);
    });
  }
  for (auto& th : pool) th.join();
}

std::size_t FrobeniusCache::size() const {
  std::lock_guard lock(mutex_);
  return polys_.size();
}

}  // namespace g2surj::frobenius
