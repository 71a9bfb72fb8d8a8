#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "g2surj/arith.hpp"

namespace g2surj::hecke_data {

using arith::IntPolynomial;

/// Anything that can hand out the characteristic polynomial H_{d,p} of T_p
/// on the weight-2 new subspace of level d.
class HeckeSource {
 public:
  virtual ~HeckeSource() = default;
  /// Throws MissingHeckeData if the pair is unavailable.
  virtual IntPolynomial polynomial(std::uint64_t level, std::uint64_t prime) const = 0;
};

/// In-memory table keyed by (level, prime). Every inserted polynomial is
/// validated: monic, degree equal to the newspace dimension, and all roots
/// real in [-2 sqrt(p), 2 sqrt(p)].
class HeckeTable : public HeckeSource {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  HeckeTable() = default;
  explicit HeckeTable(std::string source) : source_(std::move(source)) {}

  /// Throws std::invalid_argument describing the violated invariant.
  void insert(std::uint64_t level, std::uint64_t prime, IntPolynomial poly);

  const IntPolynomial* find(std::uint64_t level, std::uint64_t prime) const;
  IntPolynomial polynomial(std::uint64_t level, std::uint64_t prime) const override;

  const std::map<Key, IntPolynomial>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<Key, IntPolynomial> entries_;
  std::map<std::uint64_t, int> degree_;
};

/// CSV lines "level,prime,polynomial"; blank lines and lines starting with
/// '#' are skipped. Errors carry the 1-based line number.
HeckeTable parse(std::istream& in, const std::string& source_name);
HeckeTable load(const std::filesystem::path& path);

/// Canonical form sorted by (level, prime).
void write(const HeckeTable& table, std::ostream& out);
void save(const HeckeTable& table, const std::filesystem::path& path);

/// Polynomials in z such as "z^2+2*z-4". Whitespace is ignored.
IntPolynomial parse_polynomial(std::string_view text);
std::string format_polynomial(const IntPolynomial& poly);

/// Levels whose weight-2 newspace is known to be zero-dimensional.
bool is_zero_dimensional_level(std::uint64_t level);

/// Divisors d of n with d^2 <= n, ascending.
std::vector<std::uint64_t> small_divisors(std::uint64_t n);

/// small_divisors(n) minus the built-in zero-dimensional levels.
std::set<std::uint64_t> required_levels(std::uint64_t n);

/// dim S_2^new(Gamma_0(level)) from the genus formula for X_0 and
/// Moebius-style removal of old forms.
std::uint64_t newspace_dimension(std::uint64_t level);

/// All roots of H are real with |root| <= 2 sqrt(p). Exact (Sturm sequences).
bool satisfies_weil_bound(const IntPolynomial& h, std::uint64_t p);

/// Inverse of the substitution z = t + p/t: given prod (t^2 - a_i t + p),
/// returns prod (z - a_i). Throws std::invalid_argument if the input does
/// not have that shape.
IntPolynomial hecke_poly_from_q(const IntPolynomial& q, std::uint64_t p);

struct RemoteConfig {
  std::string base_url = "https://www.lmfdb.org";
  std::filesystem::path cache_dir = ".g2surj-cache";
  int timeout_seconds = 30;
};

/// Base URL from G2SURJ_LMFDB_URL when set, default otherwise.
RemoteConfig remote_config_from_environment(std::filesystem::path cache_dir);

/// Fetches H_{d,p} from the modular forms database (see docs/hecke_remote.md)
/// and caches it under cache_dir. Cached pairs never touch the network.
/// Throws MissingLevel, NetworkError, or ParseError.
IntPolynomial fetch_remote(std::uint64_t level, std::uint64_t prime, const RemoteConfig& config);

/// Local table first, then fetch_remote.
class RemoteBackedSource : public HeckeSource {
 public:
  RemoteBackedSource(const HeckeTable& local, RemoteConfig config)
      : local_(local), config_(std::move(config)) {}
  IntPolynomial polynomial(std::uint64_t level, std::uint64_t prime) const override;

 private:
  const HeckeTable& local_;
  RemoteConfig config_;
};

}  // namespace g2surj::hecke_data
