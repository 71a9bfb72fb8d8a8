// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            run all criteria, exit 1 if any fails
//   acceptance N [N ...]  run the listed criteria only

#include <chrono>
#include <iomanip>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "g2surj/cli.hpp"
#include "g2surj/errors.hpp"
#include "g2surj/hecke_data.hpp"
#include "g2surj/oracle.hpp"
#include "g2surj/sieve.hpp"
#include "g2surj/verify.hpp"
#include "oracles.hpp"

using namespace g2surj;

namespace {

// Pinned tolerances and limits.
constexpr double kLimit1Seconds = 30;
constexpr double kLimit2Seconds = 300;
const char* const kGrhLow = "357400000000000000000000";   // 3.574e23
const char* const kGrhHigh = "358200000000000000000000";  // 3.582e23
constexpr double kLimit4Seconds = 600;
constexpr double kLimit5Seconds = 60;
constexpr double kLimit6Seconds = 120;
constexpr std::uint64_t kFrobeniusPrimeMax = 50;
constexpr double kLimit7Seconds = 120;
constexpr std::uint64_t kMaxWitness = 89;

using Set = std::set<std::uint64_t>;

std::string show(const Set& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (auto x : s) {
    out << (first ? "" : ",") << x;
    first = false;
  }
  out << "}";
  return out.str();
}

struct Outcome {
  bool pass;
  std::string detail;
};

const hecke_data::HeckeTable& fixture_table() {
  static const auto table = hecke_data::load(oracles::data_path("hecke_fixture.csv"));
  return table;
}

const cli::CurveRecord& curve(const std::string& label) {
  static const auto curves = oracles::fixture_curves();
  return curves.at(label);
}

Outcome criterion1() {
  const auto model = curve("249.a.249.1").model();
  frobenius::FrobeniusCache cache(model);
  hecke_data::HeckeTable offline;
  const auto sieve = sieve::possibly_nonsurjective(cache, offline);
  verify::VerifyOptions o;
  o.bound = 100;
  const auto v = verify::likely_nonsurjective(cache, sieve.possibly_nonsurjective, o);
  const bool ok = sieve.possibly_nonsurjective == Set{2, 3, 5, 7, 83} && v.likely_nonsurjective.count(83) == 0;
  return {ok, "sieve " + show(sieve.possibly_nonsurjective) + ", after B=100 " + show(v.likely_nonsurjective)};
}

Outcome criterion2() {
  const auto model = curve("47089.1295541485872879").model();
  frobenius::FrobeniusCache cache(model);
  const auto sieve = sieve::possibly_nonsurjective(cache, fixture_table());
  const auto v = verify::likely_nonsurjective(cache, sieve.possibly_nonsurjective);
  const bool related31 = sieve.m_related % 31 == 0;
  const bool ok = related31 && v.likely_nonsurjective == Set{2, 31};
  return {ok, std::string("31 | M_related: ") + (related31 ? "yes" : "no") + ", likely(B=1000) " +
                  show(v.likely_nonsurjective)};
}

Outcome criterion3() {
  const auto b = verify::grh_bound(7, 249);
  const bool ok = b >= arith::Integer(kGrhLow) && b <= arith::Integer(kGrhHigh);
  return {ok, "grh_bound(7, 249) = " + b.get_str() + " (" + verify::format_scientific(b, 4) + ")"};
}

Outcome criterion4() {
  const auto s = oracle::enumerate_gsp4_f3(std::max(1u, std::thread::hardware_concurrency()));
  const mpq_class alpha(static_cast<unsigned long>(s.alpha), static_cast<unsigned long>(s.order));
  const mpq_class beta(static_cast<unsigned long>(s.beta), static_cast<unsigned long>(s.order));
  mpq_class a = alpha, b = beta;
  a.canonicalize();
  b.canonicalize();
  const bool ok = s.order == 103680 && a == mpq_class(1, 5) && b == mpq_class(1, 8) &&
                  a == oracle::alpha_closed_form(3) && b == oracle::beta_closed_form(3) &&
                  s.trace_zero == s.trace_zero_reducible;
  return {ok, "|G| = " + std::to_string(s.order) + ", alpha = " + a.get_str() + ", beta = " + b.get_str() +
                  ", trace-zero reducible " + std::to_string(s.trace_zero_reducible) + "/" +
                  std::to_string(s.trace_zero)};
}

Outcome criterion5() {
  struct Case {
    verify::Exceptional variant;
    oracle::ExceptionalRow row;
    std::uint32_t ell;
    std::size_t order;
  };
  std::vector<Case> cases;
  for (std::uint32_t ell : {3u, 5u, 11u, 13u, 19u, 29u})
    cases.push_back({verify::Exceptional::G1920, *oracle::row_1920(ell), ell, 1920});
  for (std::uint32_t ell : {5u, 17u, 29u}) cases.push_back({verify::Exceptional::G720, *oracle::row_720(ell), ell, 720});
  cases.push_back({verify::Exceptional::G5040, oracle::ExceptionalRow::G5040, 7, 5040});
  int good = 0;
  std::string bad;
  for (const auto& c : cases) {
    const auto gens = *oracle::exceptional_generators(c.row, c.ell);
    const auto form = oracle::invariant_form(gens, c.ell);
    const auto group = oracle::generate_projective_group(gens, c.ell);
    const bool ok = group.size() == c.order &&
                    oracle::compute_c_set(group, form, c.ell) ==
                        oracle::reduce_pairs(verify::exceptional_set(c.variant), c.ell);
    if (ok)
      ++good;
    else
      bad += " order" + std::to_string(c.order) + "@" + std::to_string(c.ell);
  }
  return {good == static_cast<int>(cases.size()),
          std::to_string(good) + "/" + std::to_string(cases.size()) + " sets and orders match" + bad};
}

Outcome criterion6() {
  int checks = 0, failures = 0;
  for (const char* label : {"249.a.249.1", "743.a.743.1", "1923.a.1923.1", "464.a.464.1", "976.a.999424.1"}) {
    const auto& rec = curve(label);
    const auto model = rec.model();
    const auto f = oracles::small_coeffs(rec.f), h = oracles::small_coeffs(rec.h);
    for (auto p : arith::primes_below(kFrobeniusPrimeMax + 1)) {
      if (!frobenius::is_good_prime(model, p)) continue;
      const auto n1 = oracles::naive_count(f, h, static_cast<std::int64_t>(p), 1);
      const auto n2 = oracles::naive_count(f, h, static_cast<std::int64_t>(p), 2);
      const auto frob = frobenius::frobenius_poly(model, p);
      const std::int64_t ip = static_cast<std::int64_t>(p);
      const bool ok = ip + 1 - frob.a == static_cast<std::int64_t>(n1) &&
                      ip * ip + 1 - (frob.a * frob.a - 2 * frob.b) == static_cast<std::int64_t>(n2) &&
                      static_cast<double>(frob.a * frob.a) <= 16.0 * static_cast<double>(p) &&
                      frobenius::count_points(model, p, 2) == n2 && frobenius::count_points(model, p, 1) == n1;
      ++checks;
      if (!ok) ++failures;
    }
  }
  return {failures == 0 && checks > 0,
          std::to_string(checks - failures) + "/" + std::to_string(checks) + " (curve, p) pairs agree"};
}

std::string site_string(const std::string& label) {
  const auto model = curve(label).model();
  frobenius::FrobeniusCache cache(model);
  try {
    sieve::possibly_nonsurjective(cache, fixture_table());
  } catch (const EndomorphismSuspected& e) {
    std::string out;
    for (const auto& s : e.sites()) out += (out.empty() ? "" : "; ") + s.algorithm + (s.detail.empty() ? "" : " " + s.detail);
    return out;
  }
  return "no error";
}

Outcome criterion7() {
  const auto a = site_string("169.a.169.1"), b = site_string("3125.a.3125.1"), c = site_string("529.a.529.1");
  const bool ok = a == "alg_related" && b == "alg_quad character 5" && c == "alg_selfdual level 23";
  return {ok, "169: " + a + " | 3125: " + b + " | 529: " + c};
}

Outcome criterion8() {
  const std::vector<std::pair<std::string, Set>> expected{{"1923.a.1923.1", {5}},
                                                          {"976.a.999424.1", {2, 29}},
                                                          {"743.a.743.1", {}},
                                                          {"15876.a.15876.1", {2, 3, 5}}};
  bool sets_ok = true;
  std::uint64_t largest = 0;
  std::string largest_at, detail;
  for (const auto& [label, want] : expected) {
    const auto model = curve(label).model();
    frobenius::FrobeniusCache cache(model);
    const auto sieve = sieve::possibly_nonsurjective(cache, fixture_table());
    const auto v = verify::likely_nonsurjective(cache, sieve.possibly_nonsurjective);
    sets_ok = sets_ok && v.likely_nonsurjective == want;
    detail += label + " " + show(v.likely_nonsurjective) + "; ";
    if (v.largest_witness > largest) {
      largest = v.largest_witness;
      largest_at = label;
    }
  }
  const bool witness_ok = largest <= kMaxWitness;
  detail += "sets " + std::string(sets_ok ? "match" : "differ") + ", largest witness " + std::to_string(largest) +
            " (" + largest_at + ")" + (witness_ok ? "" : " exceeds " + std::to_string(kMaxWitness));
  return {sets_ok && witness_ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "worked example sieve and B=100 verification", kLimit1Seconds, criterion1},
      {2, "showcase curve of conductor 47089", kLimit2Seconds, criterion2},
      {3, "GRH bound for (7, 249)", 1, criterion3},
      {4, "exhaustive GSp4(F_3) statistics", kLimit4Seconds, criterion4},
      {5, "exceptional C-sets from generators", kLimit5Seconds, criterion5},
      {6, "Frobenius polynomials against naive counts", kLimit6Seconds, criterion6},
      {7, "endomorphism failure sites", kLimit7Seconds, criterion7},
      {8, "dataset spot checks", kLimit2Seconds, criterion8},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    all_pass = all_pass && pass;
    std::cout << "criterion " << c.id << " " << (pass ? "PASS" : "FAIL") << ": " << c.name << ": " << o.detail
              << " [" << std::fixed << std::setprecision(2) << secs << "s of " << c.limit_seconds << "s]"
              << (in_time ? "" : " over time limit") << std::endl;
  }
  return all_pass ? 0 : 1;
}
