#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2surj {

/// Malformed textual input (curve records, polynomials, Hecke files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sieve gcd that never became nonzero, or a quadratic character with no
/// qualifying auxiliary prime. Each site names the sub-algorithm and, where
/// relevant, the level or character responsible.
class EndomorphismSuspected : public std::runtime_error {
 public:
  struct Site {
    std::string algorithm;  // "alg_odd", "alg_related", "alg_selfdual", "alg_quad"
    std::string detail;     // "level 23", "character 5", or empty
  };

  explicit EndomorphismSuspected(std::vector<Site> sites);

  const std::vector<Site>& sites() const { return sites_; }

 private:
  std::vector<Site> sites_;
};

class MissingHeckeData : public std::runtime_error {
 public:
  MissingHeckeData(std::uint64_t level, std::uint64_t prime);

  std::uint64_t level() const { return level_; }
  std::uint64_t prime() const { return prime_; }

 private:
  std::uint64_t level_;
  std::uint64_t prime_;
};

/// Remote source has no newform data for the requested level.
class MissingLevel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoCommonForm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateForm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace g2surj
