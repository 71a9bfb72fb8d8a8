#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "g2surj/arith.hpp"
#include "g2surj/frobenius.hpp"
#include "g2surj/hecke_data.hpp"

namespace g2surj::cli {

enum ExitCode : int {
  kSuccess = 0,
  kParseFailure = 2,
  kMissingData = 3,
  kEndomorphism = 4,
  kOracleMismatch = 5,
};

/// label,f,h,conductor with ';'-separated ascending coefficients.
struct CurveRecord {
  std::string label;
  arith::IntPolynomial f;
  arith::IntPolynomial h;
  std::uint64_t conductor = 0;

  /// Throws ParseError if the model is invalid.
  frobenius::CurveModel model() const;
};

/// Throws ParseError.
CurveRecord parse_curve_record(std::string_view line);

struct RunOptions {
  std::uint64_t bound = 1000;
  std::uint64_t aux_bound = 1000;
  bool verbose = false;
  bool shortcut_1441 = false;
  bool timing = true;
};

struct RunResult {
  nlohmann::json report;
  int exit_code = kSuccess;
};

/// Sieve then verify one curve. Failures are reported inside the JSON.
RunResult run_curve(const CurveRecord& record, const hecke_data::HeckeSource& hecke,
                    const RunOptions& options);

/// One JSON line per input record in input order, then a summary line.
/// Output does not depend on `parallel`.
void run_batch(std::istream& in, std::ostream& out, const hecke_data::HeckeSource& hecke,
               RunOptions options, unsigned parallel);

/// Histogram of the number of likely nonsurjective primes and per-prime
/// counts over the successful reports.
nlohmann::json summarize(const std::vector<nlohmann::json>& reports);

struct OracleResult {
  nlohmann::json report;
  bool passed = true;
};

OracleResult oracle_enumerate_f3(unsigned threads);
OracleResult oracle_enumerate_f5(unsigned threads);
OracleResult oracle_c_sets(std::uint32_t ell_max);
OracleResult oracle_sample(std::uint32_t ell, std::uint64_t count, std::uint64_t seed, unsigned threads);

}  // namespace g2surj::cli
