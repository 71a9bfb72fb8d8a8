#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "g2surj/arith.hpp"

namespace g2surj::frobenius {

using arith::Integer;
using arith::IntPolynomial;

/// Genus-2 curve y^2 + h(x) y = f(x) together with its conductor.
/// Construction validates the model and throws std::invalid_argument when
/// g = 4f + h^2 is not a squarefree polynomial of degree 5 or 6.
class CurveModel {
 public:
  CurveModel(IntPolynomial f, IntPolynomial h, std::uint64_t conductor, std::string label = {});

  const IntPolynomial& f() const { return f_; }
  const IntPolynomial& h() const { return h_; }
  std::uint64_t conductor() const { return conductor_; }
  const std::string& label() const { return label_; }

  /// g = 4f + h^2.
  const IntPolynomial& g() const { return g_; }
  /// disc(g), nonzero.
  const Integer& discriminant() const { return disc_; }

 private:
  IntPolynomial f_;
  IntPolynomial h_;
  std::uint64_t conductor_;
  std::string label_;
  IntPolynomial g_;
  Integer disc_;
};

/// P_p(t) = t^4 - a t^3 + b t^2 - p a t + p^2.
struct FrobeniusPoly {
  std::uint64_t p = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;

  IntPolynomial quartic() const;
  friend bool operator==(const FrobeniusPoly&, const FrobeniusPoly&) = default;
};

/// p odd and p divides neither lc(g) nor disc(g).
bool is_good_prime(const CurveModel& curve, std::uint64_t p);

/// Points on the smooth projective model over the field with p^r elements,
/// r in {1, 2}. Requires a good prime p < 2^31.
std::uint64_t count_points(const CurveModel& curve, std::uint64_t p, int r);

FrobeniusPoly frobenius_poly(const CurveModel& curve, std::uint64_t p);

/// Memoizes frobenius_poly for one curve. Safe for concurrent use; the
/// referenced curve must outlive the cache.
class FrobeniusCache {
 public:
  explicit FrobeniusCache(const CurveModel& curve) : curve_(curve) {}

  const CurveModel& curve() const { return curve_; }
  const FrobeniusPoly& get(std::uint64_t p);

  /// Fills the cache for the given primes using up to `threads` workers.
  void prefetch(const std::vector<std::uint64_t>& primes, unsigned threads);

  /// Number of distinct primes computed so far.
  std::size_t size() const;

 private:
  const CurveModel& curve_;
  mutable std::mutex mutex_;
  std::map<std::uint64_t, FrobeniusPoly> polys_;
};

}  // namespace g2surj::frobenius
