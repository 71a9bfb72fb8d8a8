#include "polymod.hpp"

#include <algorithm>
#include <stdexcept>

#include "g2surj/arith.hpp"

namespace g2surj::detail {

using arith::mulmod;

void trim(PolyMod& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw std::domain_error("inverse of zero");
  return arith::powmod(a, p - 2, p);
}

PolyMod make_monic(PolyMod a, std::uint64_t p) {
  trim(a);
  if (a.empty()) return a;
  const std::uint64_t inv = inverse_mod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

PolyMod sub(PolyMod a, const PolyMod& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

PolyMod mul(const PolyMod& a, const PolyMod& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyMod r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

void divmod(const PolyMod& a, const PolyMod& b, std::uint64_t p, PolyMod& q, PolyMod& r) {
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
  const std::uint64_t inv = inverse_mod(b.back(), p);
  while (r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const std::uint64_t c = mulmod(r.back(), inv, p);
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i)
      r[shift + i] = (r[shift + i] + p - mulmod(c, b[i], p)) % p;
    trim(r);
  }
}

PolyMod rem(const PolyMod& a, const PolyMod& b, std::uint64_t p) {
  PolyMod q, r;
  divmod(a, b, p, q, r);
  return r;
}

PolyMod gcd(PolyMod a, PolyMod b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyMod r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

PolyMod derivative(const PolyMod& a, std::uint64_t p) {
  if (a.size() <= 1) return {};
  PolyMod d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % p, p);
  trim(d);
  return d;
}

PolyMod powmod(PolyMod base, std::uint64_t e, const PolyMod& m, std::uint64_t p) {
  PolyMod result = rem({1}, m, p);
  base = rem(base, m, p);
  while (e) {
    if (e & 1) result = rem(mul(result, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

std::vector<int> factor_degrees(const PolyMod& f_in, std::uint64_t p) {
  PolyMod g = make_monic(f_in, p);
  std::vector<int> degrees;
  const PolyMod x{0, 1};
  PolyMod h = rem(x, g, p);
  for (int d = 1; 2 * d <= static_cast<int>(g.size()) - 1; ++d) {
    h = powmod(h, p, g, p);
    PolyMod common = gcd(g, sub(h, x, p), p);
    const int cdeg = static_cast<int>(common.size()) - 1;
    if (cdeg > 0) {
      for (int k = 0; k < cdeg / d; ++k) degrees.push_back(d);
      PolyMod q, r;
      divmod(g, common, p, q, r);
      g = std::move(q);
      h = rem(h, g, p);
    }
  }
  if (g.size() > 1) degrees.push_back(static_cast<int>(g.size()) - 1);
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

}  // namespace g2surj::detail
