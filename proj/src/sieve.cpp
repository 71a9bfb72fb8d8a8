#include "g2surj/sieve.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "g2surj/errors.hpp"

namespace g2surj::sieve {

using arith::power_roots;

std::string Reason::to_string() const {
  switch (kind) {
    case ReasonKind::AlwaysIncluded:
      return "always_included";
    case ReasonKind::DividesConductor:
      return "divides_conductor";
    case ReasonKind::OddSubquotient:
      return "odd_subquotient";
    case ReasonKind::RelatedSubquotients:
      return "related_subquotients";
    case ReasonKind::SelfDual:
      return "self_dual(" + std::to_string(detail) + ")";
    case ReasonKind::QuadCharacter:
      return "quad_character(" + std::to_string(detail) + ")";
  }
  return "unknown";
}

QuadraticCharacter::QuadraticCharacter(std::uint64_t modulus, std::vector<std::uint64_t> odd_primes,
                                       bool minus4, bool eight)
    : modulus_(modulus), odd_primes_(std::move(odd_primes)), minus4_(minus4), eight_(eight) {
  std::sort(odd_primes_.begin(), odd_primes_.end());
}

std::int64_t QuadraticCharacter::discriminant() const {
  std::int64_t d = 1;
  for (auto q : odd_primes_) {
    const auto sq = static_cast<std::int64_t>(q);
    d *= (q % 4 == 1) ? sq : -sq;
  }
  if (minus4_ && eight_) return d * -8;
  if (minus4_) return d * -4;
  if (eight_) return d * 8;
  return d;
}

int QuadraticCharacter::operator()(std::uint64_t n) const {
  int v = 1;
  for (auto q : odd_primes_) v *= arith::legendre(static_cast<std::int64_t>(n % q), q);
  if (minus4_) v *= (n % 4 == 1) ? 1 : -1;
  if (eight_) v *= (n % 8 == 1 || n % 8 == 7) ? 1 : -1;
  return v;
}

namespace {

unsigned two_adic_valuation(std::uint64_t n) {
  unsigned v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  return v;
}

}  // namespace

unsigned character_space_dimension(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("modulus must be positive");
  unsigned odd = 0;
  for (auto q : n == 1 ? std::vector<std::uint64_t>{} : arith::distinct_primes(n))
    if (q != 2) ++odd;
  const unsigned v2 = two_adic_valuation(n);
  return odd + (v2 <= 1 ? 0 : v2 == 2 ? 1 : 2);
}

std::vector<QuadraticCharacter> quadratic_characters(std::uint64_t n) {
  std::vector<std::uint64_t> odd;
  if (n > 1)
    for (auto q : arith::distinct_primes(n))
      if (q != 2) odd.push_back(q);
  const unsigned v2 = two_adic_valuation(n);
  const unsigned gens = static_cast<unsigned>(odd.size()) + (v2 <= 1 ? 0 : v2 == 2 ? 1 : 2);
  std::vector<QuadraticCharacter> out;
  for (std::uint64_t mask = 1; mask < (1ULL << gens); ++mask) {
    std::vector<std::uint64_t> chosen;
    for (std::size_t i = 0; i < odd.size(); ++i)
      if (mask >> i & 1) chosen.push_back(odd[i]);
    const bool m4 = v2 >= 2 && (mask >> odd.size() & 1);
    const bool e8 = v2 >= 3 && (mask >> (odd.size() + 1) & 1);
    out.emplace_back(n, std::move(chosen), m4, e8);
  }
  return out;
}

IntPolynomial related_quartic(const FrobeniusPoly& frob) {
  const Integer p(static_cast<unsigned long>(frob.p));
  const Integer a(static_cast<long>(frob.a));
  const Integer b(static_cast<long>(frob.b));
  const Integer c3 = -(b - 2 * p);
  return IntPolynomial({p * p * p * p, p * p * c3, p * (a * a - 2 * b + 2 * p), c3, Integer(1)});
}

IntPolynomial hecke_q_poly(const IntPolynomial& h, std::uint64_t p) {
  if (h.is_zero()) throw std::invalid_argument("hecke_q_poly: zero polynomial");
  const unsigned n = static_cast<unsigned>(h.degree());
  const IntPolynomial shift({Integer(static_cast<unsigned long>(p)), Integer(0), Integer(1)});
  IntPolynomial power({1});
  IntPolynomial out;
  for (unsigned k = 0; k <= n; ++k) {
    if (h.coeff(k) != 0) out += power * IntPolynomial::monomial(h.coeff(k), n - k);
    power = power * shift;
  }
  return out;
}

namespace {

template <class Term>
GcdResult running_gcd(const std::vector<std::uint64_t>& aux, const EarlyExit& policy, Term term) {
  GcdResult result;
  result.value = 0;
  unsigned stable = 0;
  for (auto p : aux) {
    std::optional<Integer> t = term(p);
    if (!t) continue;
    result.used.push_back(p);
    Integer next;
    mpz_gcd(next.get_mpz_t(), result.value.get_mpz_t(), t->get_mpz_t());
    if (next == result.value) {
      ++stable;
    } else {
      stable = 0;
      result.value = next;
    }
    if (policy.enabled && result.value != 0 && stable >= policy.stable_run &&
        arith::is_7_smooth(result.value))
      break;
  }
  return result;
}

unsigned reduced_order(std::uint64_t p, std::uint64_t n_sq) {
  return static_cast<unsigned>(
      std::gcd(arith::multiplicative_order(static_cast<std::int64_t>(p), n_sq), std::uint64_t{120}));
}

Integer to_integer(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

}  // namespace

GcdResult alg_odd(FrobeniusCache& cache, const std::vector<std::uint64_t>& aux, const EarlyExit& policy) {
  const std::uint64_t n_sq = arith::square_part(cache.curve().conductor());
  auto result = running_gcd(aux, policy, [&](std::uint64_t p) -> std::optional<Integer> {
    const unsigned f = reduced_order(p, n_sq);
    return to_integer(p) * power_roots(cache.get(p).quartic(), f).evaluate(1);
  });
  if (result.value == 0) throw EndomorphismSuspected(std::vector<EndomorphismSuspected::Site>{{"alg_odd", ""}});
  return result;
}

GcdResult alg_related(FrobeniusCache& cache, const std::vector<std::uint64_t>& aux,
                      const EarlyExit& policy) {
  const std::uint64_t n_sq = arith::square_part(cache.curve().conductor());
  auto result = running_gcd(aux, policy, [&](std::uint64_t p) -> std::optional<Integer> {
    const unsigned f = reduced_order(p, n_sq);
    const IntPolynomial q = power_roots(related_quartic(cache.get(p)), f);
    Integer pf;
    mpz_ui_pow_ui(pf.get_mpz_t(), p, f);
    return to_integer(p) * q.evaluate(1) * q.evaluate(pf);
  });
  if (result.value == 0) throw EndomorphismSuspected(std::vector<EndomorphismSuspected::Site>{{"alg_related", ""}});
  return result;
}

std::map<std::uint64_t, GcdResult> alg_selfdual(FrobeniusCache& cache,
                                                const std::vector<std::uint64_t>& aux,
                                                const hecke_data::HeckeSource& hecke,
                                                const EarlyExit& policy) {
  std::map<std::uint64_t, GcdResult> out;
  std::vector<EndomorphismSuspected::Site> stuck;
  for (auto d : hecke_data::small_divisors(cache.curve().conductor())) {
    const bool zero_dim = hecke_data::is_zero_dimensional_level(d);
    auto result = running_gcd(aux, policy, [&](std::uint64_t p) -> std::optional<Integer> {
      const IntPolynomial h = zero_dim ? IntPolynomial({1}) : hecke.polynomial(d, p);
      return to_integer(p) * arith::resultant(cache.get(p).quartic(), hecke_q_poly(h, p));
    });
    if (result.value == 0) stuck.push_back({"alg_selfdual", "level " + std::to_string(d)});
    out.emplace(d, std::move(result));
  }
  if (!stuck.empty()) throw EndomorphismSuspected(std::move(stuck));
  return out;
}

std::vector<CharacterResult> alg_quad(FrobeniusCache& cache, const std::vector<std::uint64_t>& aux,
                                      const EarlyExit& policy) {
  std::vector<CharacterResult> out;
  std::vector<EndomorphismSuspected::Site> stuck;
  for (auto& chi : quadratic_characters(cache.curve().conductor())) {
    bool any_minus = false;
    auto result = running_gcd(aux, policy, [&](std::uint64_t p) -> std::optional<Integer> {
      if (chi(p) != -1) return std::nullopt;
      any_minus = true;
      const auto a = cache.get(p).a;
      if (a == 0) return std::nullopt;
      return to_integer(p) * Integer(static_cast<long>(std::llabs(a)));
    });
    if (result.used.empty()) {
      const std::string id = "character " + std::to_string(chi.discriminant());
      stuck.push_back({"alg_quad", any_minus ? id : id + " unconstrained"});
    }
    out.push_back({chi, std::move(result)});
  }
  if (!stuck.empty()) throw EndomorphismSuspected(std::move(stuck));
  return out;
}

std::vector<std::uint64_t> auxiliary_primes(const CurveModel& curve, std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (auto p : arith::primes_below(bound))
    if (curve.conductor() % p != 0 && frobenius::is_good_prime(curve, p)) out.push_back(p);
  return out;
}

namespace {

void add_reason(SieveReport& report, std::uint64_t prime, Reason reason) {
  report.possibly_nonsurjective.insert(prime);
  auto& reasons = report.provenance[prime];
  if (std::find(reasons.begin(), reasons.end(), reason) == reasons.end()) reasons.push_back(reason);
}

void add_divisors(SieveReport& report, const Integer& m, Reason reason) {
  for (const auto& q : arith::prime_divisors(m)) {
    if (!q.fits_ulong_p()) throw std::overflow_error("sieve produced a prime beyond 64 bits");
    add_reason(report, q.get_ui(), reason);
  }
}

}  // namespace

SieveReport possibly_nonsurjective(FrobeniusCache& cache, const hecke_data::HeckeSource& hecke,
                                   const SieveConfig& config) {
  const CurveModel& curve = cache.curve();
  const auto aux = auxiliary_primes(curve, config.aux_bound);
  const auto& policy = config.early_exit;

  SieveReport report;
  std::vector<EndomorphismSuspected::Site> stuck;
  std::set<std::uint64_t> used;
  auto guarded = [&](auto&& step) {
    try {
      step();
    } catch (const EndomorphismSuspected& e) {
      stuck.insert(stuck.end(), e.sites().begin(), e.sites().end());
    }
  };
  auto note_used = [&](const GcdResult& r) { used.insert(r.used.begin(), r.used.end()); };

  guarded([&] {
    auto r = alg_odd(cache, aux, policy);
    note_used(r);
    report.m_odd = r.value;
  });
  guarded([&] {
    auto r = alg_related(cache, aux, policy);
    note_used(r);
    report.m_related = r.value;
  });
  guarded([&] {
    for (auto& [d, r] : alg_selfdual(cache, aux, hecke, policy)) {
      note_used(r);
      report.m_selfdual.emplace(d, r.value);
    }
  });
  guarded([&] {
    for (auto& r : alg_quad(cache, aux, policy)) {
      note_used(r.gcd);
      report.m_quad.emplace_back(r.character, r.gcd.value);
    }
  });
  if (!stuck.empty()) throw EndomorphismSuspected(std::move(stuck));

  for (std::uint64_t q : {2, 3, 5, 7}) add_reason(report, q, {ReasonKind::AlwaysIncluded});
  if (curve.conductor() > 1)
    for (auto q : arith::distinct_primes(curve.conductor()))
      add_reason(report, q, {ReasonKind::DividesConductor});
  add_divisors(report, report.m_odd, {ReasonKind::OddSubquotient});
  add_divisors(report, report.m_related, {ReasonKind::RelatedSubquotients});
  for (const auto& [d, m] : report.m_selfdual)
    add_divisors(report, m, {ReasonKind::SelfDual, static_cast<std::int64_t>(d)});
  for (const auto& [chi, m] : report.m_quad)
    add_divisors(report, m, {ReasonKind::QuadCharacter, chi.discriminant()});
  report.auxiliary_primes_used.assign(used.begin(), used.end());
  return report;
}

}  // namespace g2surj::sieve
