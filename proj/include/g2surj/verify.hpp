#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "g2surj/arith.hpp"
#include "g2surj/frobenius.hpp"

namespace g2surj::verify {

using arith::Integer;
using arith::IntPolynomial;
using frobenius::FrobeniusCache;
using frobenius::FrobeniusPoly;

/// Monic quartic t^4 + c[3] t^3 + c[2] t^2 + c[1] t + c[0] over F_ell.
struct ModQuartic {
  std::uint64_t ell = 0;
  std::array<std::uint64_t, 4> c{};

  std::uint64_t evaluate(std::uint64_t x) const;
  std::uint64_t evaluate_derivative(std::uint64_t x) const;
  friend bool operator==(const ModQuartic&, const ModQuartic&) = default;
};

/// Coefficientwise reduction of P_p. Throws if ell = p.
ModQuartic charpoly_mod(const FrobeniusPoly& frob, std::uint64_t ell);

bool is_irreducible(const ModQuartic& q);
bool has_simple_root(const ModQuartic& q);

enum class Exceptional { G1920, G720, G5040 };

/// The compiled-in sets of pairs (tr^2/mult, mid/mult).
const std::vector<std::pair<int, int>>& exceptional_set(Exceptional variant);

/// The congruence classes of ell for which the variant never applies.
bool exceptional_auto_pass(std::uint64_t ell, Exceptional variant);

/// (a^2/p, b/p) mod ell lies outside the reduced set (or auto-pass applies).
bool test_exceptional(const FrobeniusPoly& frob, std::uint64_t ell, Exceptional variant);
bool test_irreducible(const FrobeniusPoly& frob, std::uint64_t ell);
bool test_linear(const FrobeniusPoly& frob, std::uint64_t ell);

enum class Flag { Exc1920, Exc720, Exc5040, Irreducible, Linear };
inline constexpr std::array<Flag, 5> kFlags{Flag::Exc1920, Flag::Exc720, Flag::Exc5040,
                                            Flag::Irreducible, Flag::Linear};
const char* flag_name(Flag flag);

/// Runs the test behind one flag.
bool run_test(Flag flag, const FrobeniusPoly& frob, std::uint64_t ell);

struct Witness {
  enum class Kind { None, Prime, Auto };
  Kind kind = Kind::None;
  std::uint64_t prime = 0;
  std::string reason;  // for Auto

  bool passed() const { return kind != Kind::None; }
};

struct TestState {
  std::uint64_t ell = 0;
  std::array<Witness, 5> witnesses;

  Witness& at(Flag f) { return witnesses[static_cast<std::size_t>(f)]; }
  const Witness& at(Flag f) const { return witnesses[static_cast<std::size_t>(f)]; }
  bool all_passed() const;
};

struct GaloisCertificate {
  bool is_s6 = false;
  std::uint64_t six_cycle = 0;                   // prime with pattern (6)
  std::vector<std::uint64_t> irreducibility;     // primes whose patterns rule out every factor degree
  std::uint64_t five_cycle = 0;                  // pattern (1,5)
  std::uint64_t transposition = 0;               // pattern (1,1,1,1,2) or (1,2,3)
  std::vector<int> transposition_pattern;
  std::string note;
};

/// Certifies Gal(g) = S_6 from Frobenius cycle types at primes below
/// effort_bound. Degree-5 input is always inconclusive.
GaloisCertificate is_galois_s6(const IntPolynomial& g, std::uint64_t effort_bound = 1000);

struct VerifyOptions {
  std::uint64_t bound = 1000;
  bool shortcut_1441 = false;
  std::uint64_t galois_effort = 1000;
};

struct VerifyReport {
  std::set<std::uint64_t> likely_nonsurjective;
  std::map<std::uint64_t, TestState> states;  // odd candidates
  std::optional<GaloisCertificate> galois;    // present when 2 was a candidate
  std::uint64_t bound = 0;
  std::uint64_t largest_witness = 0;          // over removed primes; 0 if none
};

VerifyReport likely_nonsurjective(FrobeniusCache& cache, const std::set<std::uint64_t>& possibly,
                                  const VerifyOptions& options = {});

/// ceil((4[(2q^11 - 1) log rad(2qN) + 22 q^11 log(2q)] + 5q^11 + 5)^2).
Integer grh_bound(std::uint64_t q, std::uint64_t n);

/// "3.578e23"-style rendering with the given number of significant digits.
std::string format_scientific(const Integer& value, int digits);

}  // namespace g2surj::verify
