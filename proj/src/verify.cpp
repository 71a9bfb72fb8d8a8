#include "g2surj/verify.hpp"

#include <algorithm>
#include <mpfr.h>
#include <stdexcept>

#include "polymod.hpp"

namespace g2surj::verify {

using arith::mulmod;
using arith::powmod;

namespace {

constexpr std::uint64_t kExhaustiveLimit = 1 << 16;

std::uint64_t reduce(std::int64_t x, std::uint64_t ell) {
  const auto m = static_cast<__int128>(ell);
  return static_cast<std::uint64_t>(((x % m) + m) % m);
}

bool is_square(std::uint64_t x, std::uint64_t ell) {
  return x == 0 || powmod(x, (ell - 1) / 2, ell) == 1;
}

detail::PolyMod as_poly(const ModQuartic& q) { return {q.c[0], q.c[1], q.c[2], q.c[3], 1}; }

void require_odd(std::uint64_t ell, std::uint64_t p) {
  if (ell == 2) throw std::invalid_argument("tests are defined for odd ell only");
  if (p % ell == 0) throw std::invalid_argument("ell must differ from p");
}

}  // namespace

std::uint64_t ModQuartic::evaluate(std::uint64_t x) const {
  std::uint64_t v = 1;
  for (int i = 3; i >= 0; --i) v = (mulmod(v, x, ell) + c[i]) % ell;
  return v;
}

std::uint64_t ModQuartic::evaluate_derivative(std::uint64_t x) const {
  std::uint64_t v = 4 % ell;
  for (int i = 3; i >= 1; --i) v = (mulmod(v, x, ell) + mulmod(c[i], i, ell)) % ell;
  return v;
}

ModQuartic charpoly_mod(const FrobeniusPoly& frob, std::uint64_t ell) {
  if (ell < 2) throw std::invalid_argument("ell must be prime");
  if (frob.p % ell == 0) throw std::invalid_argument("ell must differ from p");
  const std::uint64_t p = frob.p % ell;
  const std::uint64_t a = reduce(frob.a, ell);
  ModQuartic q;
  q.ell = ell;
  q.c[3] = (ell - a) % ell;
  q.c[2] = reduce(frob.b, ell);
  q.c[1] = (ell - mulmod(p, a, ell)) % ell;
  q.c[0] = mulmod(p, p, ell);
  return q;
}

bool is_irreducible(const ModQuartic& q) {
  const std::uint64_t ell = q.ell;
  if (ell >= kExhaustiveLimit) {
    const auto f = as_poly(q);
    return detail::factor_degrees(f, ell) == std::vector<int>{4} &&
           detail::gcd(f, detail::derivative(f, ell), ell).size() == 1;
  }
  for (std::uint64_t r = 0; r < ell; ++r)
    if (q.evaluate(r) == 0) return false;
  // No roots, so any factorization is (t^2 + u t + v)(t^2 + (c3 - u) t + w), v w = c0.
  const auto [c0, c1, c2, c3] = q.c;
  if (c0 == 0) return false;
  for (std::uint64_t v = 1; v < ell; ++v) {
    const std::uint64_t w = mulmod(c0, detail::inverse_mod(v, ell), ell);
    const std::uint64_t c3v = mulmod(c3, v, ell);
    if (v != w) {
      const std::uint64_t num = (c1 + ell - c3v) % ell;
      const std::uint64_t u = mulmod(num, detail::inverse_mod((w + ell - v) % ell, ell), ell);
      const std::uint64_t rhs = (v + w + mulmod(u, (c3 + ell - u) % ell, ell)) % ell;
      if (rhs == c2) return false;
    } else if (c1 == c3v) {
      // u^2 - c3 u + (c2 - 2v) = 0 must be solvable.
      const std::uint64_t disc =
          (mulmod(c3, c3, ell) + ell - mulmod(4, (c2 + 2 * ell - 2 * v % ell) % ell, ell)) % ell;
      if (is_square(disc, ell)) return false;
    }
  }
  return true;
}

bool has_simple_root(const ModQuartic& q) {
  const std::uint64_t ell = q.ell;
  if (ell >= kExhaustiveLimit) {
    const auto f = as_poly(q);
    const detail::PolyMod x{0, 1};
    const auto linear = detail::gcd(f, detail::sub(detail::powmod(x, ell, f, ell), x, ell), ell);
    if (linear.size() <= 1) return false;
    const auto shared = detail::gcd(linear, detail::derivative(f, ell), ell);
    return shared.size() < linear.size();
  }
  for (std::uint64_t r = 0; r < ell; ++r)
    if (q.evaluate(r) == 0 && q.evaluate_derivative(r) != 0) return true;
  return false;
}

const std::vector<std::pair<int, int>>& exceptional_set(Exceptional variant) {
  static const std::vector<std::pair<int, int>> c1920{{0, -2}, {0, -1}, {0, 0}, {0, 1}, {0, 2},
                                                      {1, 1},  {2, 1},  {2, 2}, {4, 2}, {4, 3},
                                                      {8, 4},  {16, 6}};
  static const std::vector<std::pair<int, int>> c720{{0, 1}, {0, 0}, {4, 3}, {1, 1}, {16, 6},
                                                     {0, 2}, {1, 0}, {3, 2}, {0, -2}};
  static const std::vector<std::pair<int, int>> c5040{{0, 0}, {0, 1}, {0, 2}, {0, 5}, {0, 6},
                                                      {1, 0}, {1, 1}, {2, 6}, {3, 2}, {4, 3},
                                                      {5, 3}, {6, 3}};
  switch (variant) {
    case Exceptional::G1920:
      return c1920;
    case Exceptional::G720:
      return c720;
    case Exceptional::G5040:
      return c5040;
  }
  throw std::logic_error("unknown variant");
}

bool exceptional_auto_pass(std::uint64_t ell, Exceptional variant) {
  switch (variant) {
    case Exceptional::G1920:
      return ell % 8 == 1 || ell % 8 == 7;
    case Exceptional::G720:
      return ell % 12 == 1 || ell % 12 == 11;
    case Exceptional::G5040:
      return ell != 7;
  }
  return false;
}

bool test_exceptional(const FrobeniusPoly& frob, std::uint64_t ell, Exceptional variant) {
  require_odd(ell, frob.p);
  if (exceptional_auto_pass(ell, variant)) return true;
  const std::uint64_t p_inv = detail::inverse_mod(frob.p % ell, ell);
  const std::uint64_t a = reduce(frob.a, ell);
  const std::uint64_t u = mulmod(mulmod(a, a, ell), p_inv, ell);
  const std::uint64_t v = mulmod(reduce(frob.b, ell), p_inv, ell);
  for (auto [x, y] : exceptional_set(variant))
    if (reduce(x, ell) == u && reduce(y, ell) == v) return false;
  return true;
}

bool test_irreducible(const FrobeniusPoly& frob, std::uint64_t ell) {
  require_odd(ell, frob.p);
  return is_irreducible(charpoly_mod(frob, ell));
}

bool test_linear(const FrobeniusPoly& frob, std::uint64_t ell) {
  require_odd(ell, frob.p);
  return reduce(frob.a, ell) != 0 && has_simple_root(charpoly_mod(frob, ell));
}

const char* flag_name(Flag flag) {
  switch (flag) {
    case Flag::Exc1920:
      return "exc_1920";
    case Flag::Exc720:
      return "exc_720";
    case Flag::Exc5040:
      return "exc_5040";
    case Flag::Irreducible:
      return "nonexc_irreducible";
    case Flag::Linear:
      return "nonexc_linear";
  }
  return "unknown";
}

bool run_test(Flag flag, const FrobeniusPoly& frob, std::uint64_t ell) {
  switch (flag) {
    case Flag::Exc1920:
      return test_exceptional(frob, ell, Exceptional::G1920);
    case Flag::Exc720:
      return test_exceptional(frob, ell, Exceptional::G720);
    case Flag::Exc5040:
      return test_exceptional(frob, ell, Exceptional::G5040);
    case Flag::Irreducible:
      return test_irreducible(frob, ell);
    case Flag::Linear:
      return test_linear(frob, ell);
  }
  return false;
}

bool TestState::all_passed() const {
  return std::all_of(witnesses.begin(), witnesses.end(), [](const Witness& w) { return w.passed(); });
}

namespace {

// Proper subset sums of a factor-degree pattern.
std::set<int> subset_sums(const std::vector<int>& pattern, int total) {
  std::set<int> sums{0};
  for (int d : pattern) {
    std::set<int> next = sums;
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  sums.erase(0);
  sums.erase(total);
  return sums;
}

}  // namespace

GaloisCertificate is_galois_s6(const IntPolynomial& g, std::uint64_t effort_bound) {
  GaloisCertificate cert;
  if (g.degree() == 5) {
    cert.note = "degree-5 model: inconclusive";
    return cert;
  }
  if (g.degree() != 6) throw std::invalid_argument("is_galois_s6 expects degree 5 or 6");
  const Integer disc = arith::discriminant(g);
  if (disc == 0) throw std::invalid_argument("is_galois_s6 expects a squarefree polynomial");
  const Integer bad = disc * g.leading();

  std::set<int> factor_degrees{1, 2, 3, 4, 5};
  for (auto p : arith::primes_below(effort_bound)) {
    if (p == 2 || mpz_divisible_ui_p(bad.get_mpz_t(), p)) continue;
    detail::PolyMod gp;
    for (const auto& c : g.coefficients()) {
      Integer r;
      mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
      gp.push_back(r.get_ui());
    }
    const auto pattern = detail::factor_degrees(gp, p);
    if (pattern == std::vector<int>{6} && cert.six_cycle == 0) cert.six_cycle = p;
    if (!factor_degrees.empty()) {
      std::set<int> kept;
      const auto sums = subset_sums(pattern, 6);
      std::set_intersection(factor_degrees.begin(), factor_degrees.end(), sums.begin(), sums.end(),
                            std::inserter(kept, kept.begin()));
      if (kept.size() < factor_degrees.size()) cert.irreducibility.push_back(p);
      factor_degrees = std::move(kept);
    }
    if (pattern == std::vector<int>{1, 5} && cert.five_cycle == 0) cert.five_cycle = p;
    if ((pattern == std::vector<int>{1, 1, 1, 1, 2} || pattern == std::vector<int>{1, 2, 3}) &&
        cert.transposition == 0) {
      cert.transposition = p;
      cert.transposition_pattern = pattern;
    }
    const bool transitive = cert.six_cycle != 0 || factor_degrees.empty();
    if (transitive && cert.five_cycle != 0 && cert.transposition != 0) {
      cert.is_s6 = true;
      if (cert.six_cycle != 0) cert.irreducibility.clear();
      return cert;
    }
  }
  if (!factor_degrees.empty() && cert.six_cycle == 0)
    cert.note = "no irreducibility certificate; g may have a rational factor";
  else
    cert.note = "no complete cycle-type certificate below the effort bound";
  return cert;
}

VerifyReport likely_nonsurjective(FrobeniusCache& cache, const std::set<std::uint64_t>& possibly,
                                  const VerifyOptions& options) {
  const auto& curve = cache.curve();
  VerifyReport report;
  report.bound = options.bound;
  report.likely_nonsurjective = possibly;

  if (possibly.count(2)) {
    report.galois = is_galois_s6(curve.g(), options.galois_effort);
    if (report.galois->is_s6) report.likely_nonsurjective.erase(2);
  }

  std::set<std::uint64_t> open;
  for (auto ell : possibly) {
    if (ell == 2) continue;
    TestState state;
    state.ell = ell;
    auto auto_pass = [&](Flag f, bool cond, const char* why) {
      if (cond) state.at(f) = {Witness::Kind::Auto, 0, why};
    };
    auto_pass(Flag::Exc1920, exceptional_auto_pass(ell, Exceptional::G1920), "ell = +-1 mod 8");
    auto_pass(Flag::Exc720, exceptional_auto_pass(ell, Exceptional::G720), "ell = +-1 mod 12");
    auto_pass(Flag::Exc5040, exceptional_auto_pass(ell, Exceptional::G5040), "ell != 7");
    if (options.shortcut_1441 && ell > 1441) {
      for (Flag f : {Flag::Exc1920, Flag::Exc720, Flag::Exc5040})
        if (!state.at(f).passed()) state.at(f) = {Witness::Kind::Auto, 0, "ell > 1441"};
    }
    report.states.emplace(ell, state);
    open.insert(ell);
  }

  auto retire = [&](std::uint64_t ell) {
    const auto& state = report.states.at(ell);
    if (!state.all_passed()) return false;
    report.likely_nonsurjective.erase(ell);
    for (const auto& w : state.witnesses)
      if (w.kind == Witness::Kind::Prime) report.largest_witness = std::max(report.largest_witness, w.prime);
    return true;
  };
  for (auto it = open.begin(); it != open.end();) it = retire(*it) ? open.erase(it) : std::next(it);

  for (auto p : arith::primes_below(options.bound)) {
    if (open.empty()) break;
    if (curve.conductor() % p == 0 || !frobenius::is_good_prime(curve, p)) continue;
    const FrobeniusPoly& frob = cache.get(p);
    for (auto it = open.begin(); it != open.end();) {
      const std::uint64_t ell = *it;
      if (ell == p) {
        ++it;
        continue;
      }
      auto& state = report.states.at(ell);
      for (Flag f : kFlags) {
        if (!state.at(f).passed() && run_test(f, frob, ell)) state.at(f) = {Witness::Kind::Prime, p, {}};
      }
      it = retire(ell) ? open.erase(it) : std::next(it);
    }
  }
  return report;
}

Integer grh_bound(std::uint64_t q, std::uint64_t n) {
  if (!arith::is_prime(q)) throw std::invalid_argument("q must be prime");
  if (n == 0) throw std::invalid_argument("N must be positive");
  std::set<std::uint64_t> primes{2, q};
  if (n > 1)
    for (auto r : arith::distinct_primes(n)) primes.insert(r);
  Integer rad = 1;
  for (auto r : primes) rad *= Integer(static_cast<unsigned long>(r));

  const mpfr_prec_t prec = 256;
  mpfr_t x, t, lr, l2q, acc;
  mpfr_inits2(prec, x, t, lr, l2q, acc, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(x, static_cast<unsigned long>(q), MPFR_RNDN);
  mpfr_pow_ui(x, x, 11, MPFR_RNDN);  // q^11, exact at this precision
  mpfr_set_z(lr, rad.get_mpz_t(), MPFR_RNDN);
  mpfr_log(lr, lr, MPFR_RNDN);
  mpfr_set_ui(l2q, static_cast<unsigned long>(2 * q), MPFR_RNDN);
  mpfr_log(l2q, l2q, MPFR_RNDN);

  mpfr_mul_ui(acc, x, 2, MPFR_RNDN);
  mpfr_sub_ui(acc, acc, 1, MPFR_RNDN);
  mpfr_mul(acc, acc, lr, MPFR_RNDN);  // (2q^11 - 1) log rad
  mpfr_mul_ui(t, x, 22, MPFR_RNDN);
  mpfr_mul(t, t, l2q, MPFR_RNDN);     // 22 q^11 log 2q
  mpfr_add(acc, acc, t, MPFR_RNDN);
  mpfr_mul_ui(acc, acc, 4, MPFR_RNDN);
  mpfr_mul_ui(t, x, 5, MPFR_RNDN);
  mpfr_add(acc, acc, t, MPFR_RNDN);
  mpfr_add_ui(acc, acc, 5, MPFR_RNDN);
  mpfr_sqr(acc, acc, MPFR_RNDN);

  Integer out;
  mpfr_get_z(out.get_mpz_t(), acc, MPFR_RNDU);
  mpfr_clears(x, t, lr, l2q, acc, static_cast<mpfr_ptr>(nullptr));
  return out;
}

std::string format_scientific(const Integer& value, int digits) {
  if (digits < 1) throw std::invalid_argument("digits must be positive");
  if (value == 0) return "0";
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_z(x, value.get_mpz_t(), MPFR_RNDN);
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(digits), x, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  mpfr_clear(x);
  std::string sign;
  if (mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  return out + "e" + std::to_string(exp10 - 1);
}

}  // namespace g2surj::verify
