#include <doctest.h>

#include <algorithm>
#include <complex>

#include "g2surj/errors.hpp"
#include "g2surj/hecke_data.hpp"
#include "g2surj/sieve.hpp"
#include "oracles.hpp"

using namespace g2surj;
using namespace g2surj::sieve;

namespace {

using cplx = std::complex<double>;

// Durand-Kerner iteration for the roots of a monic polynomial.
std::vector<cplx> complex_roots(const IntPolynomial& p) {
  const int n = p.degree();
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(cplx(0.4, 0.9), i) * 3.0;
  auto eval = [&](cplx x) {
    cplx acc = 0;
    for (int i = n; i >= 0; --i) acc = acc * x + p.coeff(i).get_d();
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter)
    for (int i = 0; i < n; ++i) {
      cplx denom = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      z[i] -= eval(z[i]) / denom;
    }
  return z;
}

std::vector<double> monic_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1};
  for (auto r : roots) {
    std::vector<cplx> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  std::vector<double> out;
  for (auto x : c) out.push_back(x.real());
  return out;
}

struct Prepared {
  frobenius::CurveModel model;
  explicit Prepared(const std::string& label) : model(oracles::fixture_curves().at(label).model()) {}
};

std::vector<EndomorphismSuspected::Site> sites_of(const std::string& label, const hecke_data::HeckeSource& src) {
  Prepared c(label);
  frobenius::FrobeniusCache cache(c.model);
  try {
    possibly_nonsurjective(cache, src);
  } catch (const EndomorphismSuspected& e) {
    return e.sites();
  }
  return {};
}

}  // namespace

TEST_CASE("quadratic characters are Kronecker symbols of their discriminant") {
  for (std::uint64_t n : {249ULL, 976ULL, 15876ULL, 3125ULL, 47089ULL, 8ULL, 4ULL, 2ULL, 120ULL, 1ULL}) {
    const auto chars = quadratic_characters(n);
    CHECK(chars.size() == (1ULL << character_space_dimension(n)) - 1);
    std::set<std::int64_t> ids;
    for (const auto& chi : chars) {
      const std::int64_t d = chi.discriminant();
      ids.insert(d);
      CHECK(n % static_cast<std::uint64_t>(std::llabs(d)) == 0);
      for (std::uint64_t m = 1; m < 400; ++m)
        if (std::gcd(m, n) == 1) CHECK(chi(m) == arith::kronecker(d, m));
    }
    CHECK(ids.size() == chars.size());
  }
  CHECK(character_space_dimension(249) == 2);
  CHECK(character_space_dimension(976) == 3);
  CHECK(character_space_dimension(4) == 1);
  CHECK(character_space_dimension(2) == 0);
}

TEST_CASE("related quartic has the pairwise root products") {
  Prepared c("1923.a.1923.1");
  for (std::uint64_t p : {5, 7, 11, 13, 17, 19}) {
    if (!frobenius::is_good_prime(c.model, p)) continue;
    const auto frob = frobenius::frobenius_poly(c.model, p);
    auto r = complex_roots(frob.quartic());
    // pair each root with its partner p / root
    std::vector<cplx> a{r[0]}, pd;
    const double dp = static_cast<double>(p);
    std::size_t partner = 1;
    for (std::size_t i = 1; i < 4; ++i)
      if (std::abs(r[0] * r[i] - dp) < 1e-6) partner = i;
    std::vector<cplx> rest;
    for (std::size_t i = 1; i < 4; ++i)
      if (i != partner) rest.push_back(r[i]);
    const std::vector<cplx> products{r[0] * rest[0], r[0] * rest[1], r[partner] * rest[0], r[partner] * rest[1]};
    const auto expected = monic_from_roots(products);
    const auto q = related_quartic(frob);
    for (int i = 0; i <= 4; ++i) CHECK(q.coeff(i).get_d() == doctest::Approx(expected[i]).epsilon(1e-6));
  }
}

TEST_CASE("Hecke Q polynomial") {
  CHECK(hecke_q_poly(IntPolynomial{-1, 1, 1}, 2) == IntPolynomial{4, 2, 3, 1, 1});
  CHECK(hecke_q_poly(IntPolynomial{-3, 1}, 5) == IntPolynomial{5, -3, 1});
  CHECK(hecke_q_poly(IntPolynomial{1}, 5) == IntPolynomial{1});
}

TEST_CASE("auxiliary primes avoid bad primes") {
  Prepared c("249.a.249.1");
  const auto aux = auxiliary_primes(c.model, 100);
  CHECK(std::find(aux.begin(), aux.end(), 3) == aux.end());
  CHECK(std::find(aux.begin(), aux.end(), 83) == aux.end());
  CHECK(std::is_sorted(aux.begin(), aux.end()));
  for (auto p : aux) CHECK(frobenius::is_good_prime(c.model, p));
}

TEST_CASE("early exit does not change the gcd on the fixtures") {
  for (const char* label : {"249.a.249.1", "743.a.743.1", "1923.a.1923.1"}) {
    Prepared c(label);
    frobenius::FrobeniusCache cache(c.model);
    const auto aux = auxiliary_primes(c.model, 1000);
    EarlyExit off{false, 5};
    const auto fast = alg_odd(cache, aux), full = alg_odd(cache, aux, off);
    CHECK(fast.value == full.value);
    CHECK(fast.used.size() <= full.used.size());
    CHECK(alg_related(cache, aux).value == alg_related(cache, aux, off).value);
  }
}

TEST_CASE("worked example sieve") {
  Prepared c("249.a.249.1");
  frobenius::FrobeniusCache cache(c.model);
  hecke_data::HeckeTable none;
  const auto report = possibly_nonsurjective(cache, none);
  CHECK(report.possibly_nonsurjective == std::set<std::uint64_t>{2, 3, 5, 7, 83});
  const auto& why83 = report.provenance.at(83);
  CHECK(std::find(why83.begin(), why83.end(), Reason{ReasonKind::DividesConductor, 0}) != why83.end());
  CHECK(Reason{ReasonKind::SelfDual, 31}.to_string() == "self_dual(31)");
  CHECK(Reason{ReasonKind::QuadCharacter, -4}.to_string() == "quad_character(-4)");
}

TEST_CASE("stuck sub-algorithms are reported by site") {
  const auto fixture = hecke_data::load(oracles::data_path("hecke_fixture.csv"));
  auto s169 = sites_of("169.a.169.1", fixture);
  REQUIRE(s169.size() == 1);
  CHECK(s169[0].algorithm == "alg_related");

  auto s3125 = sites_of("3125.a.3125.1", fixture);
  REQUIRE(s3125.size() == 1);
  CHECK(s3125[0].algorithm == "alg_quad");
  CHECK(s3125[0].detail == "character 5");

  auto s529 = sites_of("529.a.529.1", fixture);
  REQUIRE(s529.size() == 1);
  CHECK(s529[0].algorithm == "alg_selfdual");
  CHECK(s529[0].detail == "level 23");
}

TEST_CASE("missing Hecke data is loud") {
  Prepared c("529.a.529.1");
  frobenius::FrobeniusCache cache(c.model);
  hecke_data::HeckeTable none;
  CHECK_THROWS_AS(possibly_nonsurjective(cache, none), MissingHeckeData);
}

TEST_CASE("showcase curve: 31 comes from the related subquotient test") {
  Prepared c("47089.1295541485872879");
  frobenius::FrobeniusCache cache(c.model);
  const auto fixture = hecke_data::load(oracles::data_path("hecke_fixture.csv"));
  const auto report = possibly_nonsurjective(cache, fixture);
  CHECK(report.m_related % 31 == 0);
  const auto& why = report.provenance.at(31);
  CHECK(std::find(why.begin(), why.end(), Reason{ReasonKind::RelatedSubquotients, 0}) != why.end());
}
