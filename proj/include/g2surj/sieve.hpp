#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "g2surj/arith.hpp"
#include "g2surj/frobenius.hpp"
#include "g2surj/hecke_data.hpp"

namespace g2surj::sieve {

using arith::Integer;
using arith::IntPolynomial;
using frobenius::CurveModel;
using frobenius::FrobeniusCache;
using frobenius::FrobeniusPoly;

enum class ReasonKind {
  AlwaysIncluded,
  DividesConductor,
  OddSubquotient,
  RelatedSubquotients,
  SelfDual,
  QuadCharacter,
};

struct Reason {
  ReasonKind kind;
  std::int64_t detail = 0;  // level for SelfDual, character id for QuadCharacter

  /// "always_included", "self_dual(31)", "quad_character(-4)", ...
  std::string to_string() const;
  friend bool operator==(const Reason&, const Reason&) = default;
};

/// Quadratic Dirichlet character of modulus N, written as a product of
/// local generators: Legendre symbols at odd q | N and the characters of
/// conductor 4 and 8 when v_2(N) allows them.
class QuadraticCharacter {
 public:
  QuadraticCharacter(std::uint64_t modulus, std::vector<std::uint64_t> odd_primes, bool minus4,
                     bool eight);

  std::uint64_t modulus() const { return modulus_; }
  const std::vector<std::uint64_t>& odd_primes() const { return odd_primes_; }
  bool uses_minus4() const { return minus4_; }
  bool uses_eight() const { return eight_; }

  /// Discriminant D of the associated quadratic field; the character is the
  /// Kronecker symbol (D | .). Used as the character id.
  std::int64_t discriminant() const;

  /// Value at n, gcd(n, N) = 1.
  int operator()(std::uint64_t n) const;

 private:
  std::uint64_t modulus_;
  std::vector<std::uint64_t> odd_primes_;
  bool minus4_;
  bool eight_;
};

/// d(N): number of independent quadratic generators.
unsigned character_space_dimension(std::uint64_t n);

/// The 2^d(N) - 1 nontrivial characters, in a fixed order.
std::vector<QuadraticCharacter> quadratic_characters(std::uint64_t n);

/// Stop once the running gcd is unchanged for `stable_run` consecutive
/// primes and is 7-smooth.
struct EarlyExit {
  bool enabled = true;
  unsigned stable_run = 5;
};

/// Running gcd of one sub-algorithm.
struct GcdResult {
  Integer value;                    // 0 if no contributing prime was nonzero
  std::vector<std::uint64_t> used;  // auxiliary primes consumed
};

/// t^4 - (b - 2p) t^3 + p(a^2 - 2b + 2p) t^2 - p^2 (b - 2p) t + p^4.
IntPolynomial related_quartic(const FrobeniusPoly& frob);

/// sum_k c_k (t^2 + p)^k t^(n-k) for H = sum_k c_k z^k of degree n.
IntPolynomial hecke_q_poly(const IntPolynomial& h, std::uint64_t p);

/// gcd of p * P_p^(f')(1); f' = gcd(ord_{N_sq}(p), 120).
GcdResult alg_odd(FrobeniusCache& cache, const std::vector<std::uint64_t>& aux,
                  const EarlyExit& policy = {});

/// gcd of p * Q_p^(f')(1) * Q_p^(f')(p^f').
GcdResult alg_related(FrobeniusCache& cache, const std::vector<std::uint64_t>& aux,
                      const EarlyExit& policy = {});

/// M(d) for every divisor d of N with d^2 <= N.
std::map<std::uint64_t, GcdResult> alg_selfdual(FrobeniusCache& cache,
                                                const std::vector<std::uint64_t>& aux,
                                                const hecke_data::HeckeSource& hecke,
                                                const EarlyExit& policy = {});

struct CharacterResult {
  QuadraticCharacter character;
  GcdResult gcd;
};

/// M_phi for every nontrivial character of modulus N.
std::vector<CharacterResult> alg_quad(FrobeniusCache& cache, const std::vector<std::uint64_t>& aux,
                                      const EarlyExit& policy = {});

/// Good primes below bound that do not divide N, ascending.
std::vector<std::uint64_t> auxiliary_primes(const CurveModel& curve, std::uint64_t bound);

struct SieveConfig {
  std::uint64_t aux_bound = 1000;
  EarlyExit early_exit;
};

struct SieveReport {
  std::set<std::uint64_t> possibly_nonsurjective;
  std::map<std::uint64_t, std::vector<Reason>> provenance;
  Integer m_odd;
  Integer m_related;
  std::map<std::uint64_t, Integer> m_selfdual;
  std::vector<std::pair<QuadraticCharacter, Integer>> m_quad;
  std::vector<std::uint64_t> auxiliary_primes_used;
};

/// Runs all four sub-algorithms. Throws EndomorphismSuspected listing every
/// stuck site, or MissingHeckeData.
SieveReport possibly_nonsurjective(FrobeniusCache& cache, const hecke_data::HeckeSource& hecke,
                                   const SieveConfig& config = {});

}  // namespace g2surj::sieve
