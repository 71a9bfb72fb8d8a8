#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "g2surj/hecke_data.hpp"
#include "g2surj/sieve.hpp"
#include "g2surj/verify.hpp"
#include "oracles.hpp"

using namespace g2surj;
using namespace g2surj::verify;

namespace {

oracles::ModPoly as_mod_poly(const ModQuartic& q) {
  return {static_cast<std::int64_t>(q.c[0]), static_cast<std::int64_t>(q.c[1]), static_cast<std::int64_t>(q.c[2]),
          static_cast<std::int64_t>(q.c[3]), 1};
}

ModQuartic quartic(std::uint64_t ell, std::array<std::uint64_t, 4> c) { return ModQuartic{ell, c}; }

}  // namespace

TEST_CASE("reduction of P_p") {
  CHECK(charpoly_mod(FrobeniusPoly{5, 2, 3}, 3) == quartic(3, {1, 2, 0, 1}));
  CHECK(charpoly_mod(FrobeniusPoly{7, 0, 0}, 5) == quartic(5, {4, 0, 0, 0}));
  CHECK(charpoly_mod(FrobeniusPoly{7, -3, 5}, 11) == quartic(11, {49 % 11, 21 % 11, 5, 3}));
  CHECK_THROWS(charpoly_mod(FrobeniusPoly{5, 2, 3}, 5));
  // trace is a mod ell
  for (std::int64_t a = -12; a <= 12; ++a) {
    const auto q = charpoly_mod(FrobeniusPoly{13, a, 4}, 7);
    CHECK((7 - q.c[3]) % 7 == static_cast<std::uint64_t>(oracles::md(a, 7)));
  }
}

TEST_CASE("factorization predicates agree with trial division on every quartic") {
  for (std::uint64_t ell : {3, 5, 7}) {
    for (const auto& f : oracles::monic_polys(4, ell)) {
      const ModQuartic q = quartic(ell, {static_cast<std::uint64_t>(f[0]), static_cast<std::uint64_t>(f[1]),
                                         static_cast<std::uint64_t>(f[2]), static_cast<std::uint64_t>(f[3])});
      CHECK(is_irreducible(q) == (oracles::trial_factor_degrees(f, ell) == std::vector<int>{4}));
      bool simple = false;
      for (std::int64_t r = 0; r < static_cast<std::int64_t>(ell); ++r) simple = simple || oracles::root_multiplicity(f, r, ell) == 1;
      CHECK(has_simple_root(q) == simple);
    }
  }
}

TEST_CASE("factorization predicates on random quartics over larger fields") {
  std::mt19937_64 rng(9);
  for (std::uint64_t ell : {11, 13, 101, 65537, 70001}) {
    for (int trial = 0; trial < 200; ++trial) {
      ModQuartic q{ell, {rng() % ell, rng() % ell, rng() % ell, rng() % ell}};
      const auto f = as_mod_poly(q);
      if (ell < 200) CHECK(is_irreducible(q) == (oracles::trial_factor_degrees(f, ell) == std::vector<int>{4}));
      bool simple = false;
      if (ell < 200) {
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(ell); ++r)
          simple = simple || oracles::root_multiplicity(f, r, ell) == 1;
        CHECK(has_simple_root(q) == simple);
      }
    }
    // products with a known shape
    for (int trial = 0; trial < 50; ++trial) {
      const std::int64_t r = rng() % ell, s = rng() % ell;
      // (t - r)^2 (t - s)^2 has no simple root and is reducible
      oracles::ModPoly f{1};
      for (auto root : {r, r, s, s}) {
        oracles::ModPoly next(f.size() + 1, 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
          next[i + 1] = oracles::md(next[i + 1] + f[i], ell);
          next[i] = oracles::md(next[i] - static_cast<std::int64_t>(root) * f[i], ell);
        }
        f = next;
      }
      ModQuartic q{ell, {static_cast<std::uint64_t>(f[0]), static_cast<std::uint64_t>(f[1]), static_cast<std::uint64_t>(f[2]),
                         static_cast<std::uint64_t>(f[3])}};
      CHECK_FALSE(is_irreducible(q));
      CHECK_FALSE(has_simple_root(q));
    }
  }
}

TEST_CASE("exceptional tests") {
  CHECK(exceptional_auto_pass(17, Exceptional::G1920));
  CHECK(exceptional_auto_pass(23, Exceptional::G1920));
  CHECK_FALSE(exceptional_auto_pass(13, Exceptional::G1920));
  CHECK(exceptional_auto_pass(13, Exceptional::G720));
  CHECK_FALSE(exceptional_auto_pass(7, Exceptional::G5040));
  CHECK(exceptional_auto_pass(11, Exceptional::G5040));
  CHECK(test_exceptional(FrobeniusPoly{3, 0, 0}, 17, Exceptional::G1920));
  CHECK_FALSE(test_exceptional(FrobeniusPoly{3, 0, 0}, 7, Exceptional::G5040));
  // (a^2/p, b/p) = (2, 2) mod 5 via p = 2, a = 2, b = 4
  std::set<std::pair<int, int>> reduced;
  for (auto [x, y] : exceptional_set(Exceptional::G720)) reduced.emplace(oracles::md(x, 5), oracles::md(y, 5));
  CHECK(test_exceptional(FrobeniusPoly{2, 2, 4}, 5, Exceptional::G720) == (reduced.count({2, 2}) == 0));
  CHECK(exceptional_set(Exceptional::G1920).size() == 12);
  CHECK(exceptional_set(Exceptional::G720).size() == 9);
  CHECK(exceptional_set(Exceptional::G5040).size() == 12);
  CHECK_THROWS(test_exceptional(FrobeniusPoly{3, 1, 1}, 2, Exceptional::G1920));
  CHECK_THROWS(test_irreducible(FrobeniusPoly{3, 1, 1}, 3));
  CHECK_THROWS(test_linear(FrobeniusPoly{3, 1, 1}, 3));
  // trace zero never passes either non-exceptional test
  for (std::int64_t b = -10; b <= 10; ++b) {
    CHECK_FALSE(test_irreducible(FrobeniusPoly{7, 0, b}, 5));
    CHECK_FALSE(test_linear(FrobeniusPoly{7, 0, b}, 5));
  }
}

namespace {

struct Analysed {
  frobenius::CurveModel model;
  frobenius::FrobeniusCache cache;
  sieve::SieveReport sieve;
  explicit Analysed(const std::string& label)
      : model(oracles::fixture_curves().at(label).model()), cache(model) {
    const auto fixture = hecke_data::load(oracles::data_path("hecke_fixture.csv"));
    sieve = sieve::possibly_nonsurjective(cache, fixture);
  }
};

}  // namespace

TEST_CASE("worked example verification") {
  Analysed c("249.a.249.1");
  VerifyOptions o;
  o.bound = 100;
  const auto r = likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective, o);
  CHECK(r.likely_nonsurjective.count(83) == 0);
  CHECK(std::includes(c.sieve.possibly_nonsurjective.begin(), c.sieve.possibly_nonsurjective.end(),
                      r.likely_nonsurjective.begin(), r.likely_nonsurjective.end()));
  o.bound = 3;
  CHECK(likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective, o).likely_nonsurjective ==
        c.sieve.possibly_nonsurjective);
}

TEST_CASE("witnesses replay and are minimal") {
  for (const char* label : {"249.a.249.1", "1923.a.1923.1", "976.a.999424.1"}) {
    Analysed c(label);
    const auto r = likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective);
    for (const auto& [ell, state] : r.states) {
      for (Flag f : kFlags) {
        const auto& w = state.at(f);
        if (w.kind == Witness::Kind::Auto) CHECK_FALSE(w.reason.empty());
        if (w.kind != Witness::Kind::Prime) continue;
        CHECK(run_test(f, c.cache.get(w.prime), ell));
        for (auto p : arith::primes_below(w.prime))
          if (p != ell && c.model.conductor() % p != 0 && frobenius::is_good_prime(c.model, p))
            CHECK_FALSE(run_test(f, c.cache.get(p), ell));
      }
      CHECK(state.all_passed() == (r.likely_nonsurjective.count(ell) == 0));
    }
  }
}

TEST_CASE("dataset curves at the default bound") {
  const std::map<std::string, std::set<std::uint64_t>> expected = {
      {"1923.a.1923.1", {5}},
      {"976.a.999424.1", {2, 29}},
      {"743.a.743.1", {}},
      {"15876.a.15876.1", {2, 3, 5}},
  };
  for (const auto& [label, likely] : expected) {
    CAPTURE(label);
    Analysed c(label);
    CHECK(likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective).likely_nonsurjective == likely);
  }
}

TEST_CASE("larger bounds only shrink the output") {
  Analysed c("47089.1295541485872879");
  std::set<std::uint64_t> previous = c.sieve.possibly_nonsurjective;
  for (std::uint64_t b : {10, 30, 100, 300, 1000}) {
    VerifyOptions o;
    o.bound = b;
    const auto now = likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective, o).likely_nonsurjective;
    CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
  }
  CHECK(previous == std::set<std::uint64_t>{2, 31});
}

TEST_CASE("shortcut never changes the fixture outputs") {
  for (const char* label : {"249.a.249.1", "743.a.743.1", "1923.a.1923.1"}) {
    Analysed c(label);
    VerifyOptions on;
    on.shortcut_1441 = true;
    CHECK(likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective, on).likely_nonsurjective ==
          likely_nonsurjective(c.cache, c.sieve.possibly_nonsurjective).likely_nonsurjective);
  }
}

TEST_CASE("S6 certificate") {
  const auto curves = oracles::fixture_curves();
  const auto g743 = curves.at("743.a.743.1").model().g();
  const auto cert = is_galois_s6(g743);
  REQUIRE(cert.is_s6);
  auto pattern = [&](std::uint64_t p) {
    oracles::ModPoly f;
    for (const auto& c : g743.coefficients()) f.push_back(oracles::md(c.get_si(), static_cast<std::int64_t>(p)));
    return oracles::trial_factor_degrees(f, static_cast<std::int64_t>(p));
  };
  if (cert.six_cycle) CHECK(pattern(cert.six_cycle) == std::vector<int>{6});
  CHECK(pattern(cert.five_cycle) == std::vector<int>{1, 5});
  CHECK(pattern(cert.transposition) == cert.transposition_pattern);

  CHECK_FALSE(is_galois_s6(curves.at("464.a.464.1").model().g()).is_s6);  // degree 5
  CHECK_FALSE(is_galois_s6(curves.at("249.a.249.1").model().g()).is_s6);
  CHECK_FALSE(is_galois_s6(IntPolynomial{-1, 0, 0, 0, 0, 0, 1}).is_s6);  // x^6 - 1
  CHECK_FALSE(is_galois_s6(g743, 3).is_s6);
}

TEST_CASE("GRH bound") {
  const auto b = grh_bound(7, 249);
  CHECK(b >= Integer("357400000000000000000000"));
  CHECK(b <= Integer("358200000000000000000000"));
  CHECK(grh_bound(2, 1) == 73680903639);
  CHECK(grh_bound(11, 249) > b);
  CHECK(format_scientific(b, 4) == "3.577e23");
  CHECK(format_scientific(Integer(12345), 2) == "1.2e4");
  CHECK(format_scientific(Integer(7), 3) == "7.00e0");
}
