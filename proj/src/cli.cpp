#include "g2surj/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "g2surj/errors.hpp"
#include "g2surj/oracle.hpp"
#include "g2surj/sieve.hpp"
#include "g2surj/verify.hpp"

namespace g2surj::cli {

using nlohmann::json;
using arith::Integer;
using arith::IntPolynomial;

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(strip(s.substr(0, pos)));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

IntPolynomial parse_coefficients(std::string_view cell, const char* what) {
  if (cell.empty()) return {};
  std::vector<Integer> coeffs;
  for (auto part : split(cell, ';')) {
    std::string text(part);
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    const bool digits = !text.empty() && std::all_of(text.begin() + (text.front() == '-' ? 1 : 0), text.end(),
                                                     [](unsigned char c) { return std::isdigit(c); });
    if (!digits || text == "-") throw ParseError(std::string("bad ") + what + " coefficient '" + std::string(part) + "'");
    coeffs.emplace_back(text);
  }
  return IntPolynomial(std::move(coeffs));
}

json to_json(const Integer& v) { return v.get_str(); }

json coefficients_json(const IntPolynomial& p) {
  json out = json::array();
  for (const auto& c : p.coefficients()) out.push_back(to_json(c));
  return out;
}

json sorted_array(const std::set<std::uint64_t>& s) { return json(std::vector<std::uint64_t>(s.begin(), s.end())); }

json skeleton(const std::string& label) {
  return {{"label", label},
          {"possibly_nonsurjective", json::array()},
          {"likely_nonsurjective", json::array()},
          {"provenance", json::object()},
          {"errors", json::array()}};
}

json galois_json(const verify::GaloisCertificate& g) {
  return {{"is_s6", g.is_s6},
          {"six_cycle", g.six_cycle},
          {"irreducibility", g.irreducibility},
          {"five_cycle", g.five_cycle},
          {"transposition", g.transposition},
          {"transposition_pattern", g.transposition_pattern},
          {"note", g.note}};
}

json witnesses_json(const verify::VerifyReport& report) {
  json out = json::object();
  for (const auto& [ell, state] : report.states) {
    json flags = json::object();
    for (auto f : verify::kFlags) {
      const auto& w = state.at(f);
      switch (w.kind) {
        case verify::Witness::Kind::None: flags[verify::flag_name(f)] = nullptr; break;
        case verify::Witness::Kind::Prime: flags[verify::flag_name(f)] = w.prime; break;
        case verify::Witness::Kind::Auto: flags[verify::flag_name(f)] = "auto: " + w.reason; break;
      }
    }
    out[std::to_string(ell)] = flags;
  }
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

frobenius::CurveModel CurveRecord::model() const {
  try {
    return frobenius::CurveModel(f, h, conductor, label);
  } catch (const std::invalid_argument& e) {
    throw ParseError(label + ": " + e.what());
  }
}

CurveRecord parse_curve_record(std::string_view line) {
  const auto fields = split(strip(line), ',');
  if (fields.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(fields.size()));
  CurveRecord r;
  r.label = std::string(fields[0]);
  if (r.label.empty()) throw ParseError("empty label");
  r.f = parse_coefficients(fields[1], "f");
  r.h = parse_coefficients(fields[2], "h");
  const auto n = fields[3];
  auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), r.conductor);
  if (ec != std::errc() || ptr != n.data() + n.size() || r.conductor == 0)
    throw ParseError("bad conductor '" + std::string(n) + "'");
  return r;
}

RunResult run_curve(const CurveRecord& record, const hecke_data::HeckeSource& hecke, const RunOptions& options) {
  RunResult result;
  json& out = result.report;
  out = skeleton(record.label);
  out["curve"] = {{"f", coefficients_json(record.f)},
                  {"h", coefficients_json(record.h)},
                  {"conductor", record.conductor}};
  try {
    const auto curve = record.model();
    frobenius::FrobeniusCache cache(curve);

    const auto t0 = std::chrono::steady_clock::now();
    sieve::SieveConfig config;
    config.aux_bound = options.aux_bound;
    const auto sieve_report = sieve::possibly_nonsurjective(cache, hecke, config);
    const double sieve_ms = elapsed_ms(t0);

    const auto t1 = std::chrono::steady_clock::now();
    verify::VerifyOptions vopts;
    vopts.bound = options.bound;
    vopts.shortcut_1441 = options.shortcut_1441;
    const auto verify_report = verify::likely_nonsurjective(cache, sieve_report.possibly_nonsurjective, vopts);
    const double verify_ms = elapsed_ms(t1);

    out["possibly_nonsurjective"] = sorted_array(sieve_report.possibly_nonsurjective);
    out["likely_nonsurjective"] = sorted_array(verify_report.likely_nonsurjective);
    for (const auto& [ell, reasons] : sieve_report.provenance) {
      json list = json::array();
      for (const auto& r : reasons) list.push_back(r.to_string());
      out["provenance"][std::to_string(ell)] = list;
    }
    json selfdual = json::object();
    for (const auto& [d, v] : sieve_report.m_selfdual) selfdual[std::to_string(d)] = to_json(v);
    json quad = json::array();
    for (const auto& [chi, v] : sieve_report.m_quad)
      quad.push_back({{"character", chi.discriminant()}, {"value", to_json(v)}});
    out["sieve"] = {{"m_odd", to_json(sieve_report.m_odd)},
                    {"m_related", to_json(sieve_report.m_related)},
                    {"m_selfdual", selfdual},
                    {"m_quad", quad},
                    {"auxiliary_primes_used", sieve_report.auxiliary_primes_used.size()}};
    out["verify"] = {{"bound", verify_report.bound},
                     {"largest_witness", verify_report.largest_witness},
                     {"galois", verify_report.galois ? galois_json(*verify_report.galois) : json(nullptr)}};
    if (options.verbose) out["witnesses"] = witnesses_json(verify_report);
    if (options.timing) out["timing_ms"] = {{"sieve", sieve_ms}, {"verify", verify_ms}};
  } catch (const EndomorphismSuspected& e) {
    json sites = json::array();
    for (const auto& s : e.sites()) sites.push_back({{"algorithm", s.algorithm}, {"detail", s.detail}});
    out["errors"].push_back({{"kind", "EndomorphismSuspected"}, {"message", e.what()}, {"sites", sites}});
    result.exit_code = kEndomorphism;
  } catch (const MissingHeckeData& e) {
    out["errors"].push_back(
        {{"kind", "MissingHeckeData"}, {"message", e.what()}, {"level", e.level()}, {"prime", e.prime()}});
    result.exit_code = kMissingData;
  } catch (const MissingLevel& e) {
    out["errors"].push_back({{"kind", "MissingLevel"}, {"message", e.what()}});
    result.exit_code = kMissingData;
  } catch (const NetworkError& e) {
    out["errors"].push_back({{"kind", "NetworkError"}, {"message", e.what()}});
    result.exit_code = kMissingData;
  } catch (const ParseError& e) {
    out["errors"].push_back({{"kind", "ParseError"}, {"message", e.what()}});
    result.exit_code = kParseFailure;
  }
  return result;
}

void run_batch(std::istream& in, std::ostream& out, const hecke_data::HeckeSource& hecke, RunOptions options,
               unsigned parallel) {
  options.timing = false;
  struct Job {
    std::size_t line_no;
    std::string text;
  };
  std::vector<Job> jobs;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto s = strip(line);
    if (s.empty() || s.front() == '#') continue;
    jobs.push_back({n, std::string(s)});
  }

  std::vector<std::optional<json>> results(jobs.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      json report;
      try {
        report = run_curve(parse_curve_record(jobs[i].text), hecke, options).report;
      } catch (const ParseError& e) {
        report = skeleton(std::string(split(jobs[i].text, ',').front()));
        report["errors"].push_back({{"kind", "ParseError"}, {"message", e.what()}});
      } catch (const std::exception& e) {
        report = skeleton(std::string(split(jobs[i].text, ',').front()));
        report["errors"].push_back({{"kind", "InternalError"}, {"message", e.what()}});
      }
      report["line"] = jobs[i].line_no;
      {
        std::lock_guard lock(mu);
        results[i] = std::move(report);
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1u, parallel); ++t) pool.emplace_back(worker);

  std::vector<json> done;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::unique_lock lock(mu);
    ready.wait(lock, [&] { return results[i].has_value(); });
    json report = std::move(*results[i]);
    lock.unlock();
    out << report.dump() << '\n';
    done.push_back(std::move(report));
  }
  for (auto& t : pool) t.join();
  out << json{{"summary", summarize(done)}}.dump() << '\n';
}

json summarize(const std::vector<json>& reports) {
  std::map<std::size_t, std::uint64_t> histogram;
  std::map<std::uint64_t, std::uint64_t> per_prime;
  std::uint64_t failed = 0;
  for (const auto& r : reports) {
    if (!r.at("errors").empty()) {
      ++failed;
      continue;
    }
    const auto& likely = r.at("likely_nonsurjective");
    ++histogram[likely.size()];
    for (const auto& ell : likely) ++per_prime[ell.get<std::uint64_t>()];
  }
  json h = json::object(), p = json::object();
  for (auto [k, v] : histogram) h[std::to_string(k)] = v;
  for (auto [k, v] : per_prime) p[std::to_string(k)] = v;
  return {{"curves", reports.size()},
          {"succeeded", reports.size() - failed},
          {"failed", failed},
          {"histogram", h},
          {"per_prime", p}};
}

namespace {

struct Checks {
  json list = json::array();
  bool passed = true;

  void add(const std::string& name, bool ok, json detail = nullptr) {
    list.push_back({{"check", name}, {"passed", ok}, {"detail", std::move(detail)}});
    passed = passed && ok;
  }
};

json stats_json(const oracle::Gsp4Stats& s) {
  return {{"ell", s.ell},
          {"scanned", s.scanned},
          {"order", s.order},
          {"alpha", s.alpha},
          {"beta", s.beta},
          {"gamma", s.gamma},
          {"trace_zero", s.trace_zero},
          {"trace_zero_reducible", s.trace_zero_reducible}};
}

std::string frac(std::uint64_t num, std::uint64_t den) {
  mpq_class q(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q.get_str();
}

void exact_checks(Checks& c, const oracle::Gsp4Stats& s, std::uint64_t expected_order) {
  const std::uint32_t ell = s.ell;
  auto ratio = [&](std::uint64_t hits) {
    mpq_class q(static_cast<unsigned long>(hits), static_cast<unsigned long>(s.order));
    q.canonicalize();
    return q;
  };
  const mpq_class alpha = ratio(s.alpha), beta = ratio(s.beta), gamma = ratio(s.gamma);
  c.add("order", s.order == expected_order, s.order);
  c.add("alpha", alpha == oracle::alpha_closed_form(ell),
        {{"observed", frac(s.alpha, s.order)}, {"expected", oracle::alpha_closed_form(ell).get_str()}});
  c.add("beta", beta == oracle::beta_closed_form(ell),
        {{"observed", frac(s.beta, s.order)}, {"expected", oracle::beta_closed_form(ell).get_str()}});
  c.add("gamma_lower_bound", gamma >= oracle::gamma_lower_bound(ell),
        {{"observed", frac(s.gamma, s.order)}, {"bound", oracle::gamma_lower_bound(ell).get_str()}});
  c.add("trace_zero_reducible", s.trace_zero == s.trace_zero_reducible,
        {{"trace_zero", s.trace_zero}, {"reducible", s.trace_zero_reducible}});
}

bool same_counts(const oracle::Gsp4Stats& a, const oracle::Gsp4Stats& b) {
  return a.order == b.order && a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma &&
         a.trace_zero == b.trace_zero && a.trace_zero_reducible == b.trace_zero_reducible;
}

}  // namespace

OracleResult oracle_enumerate_f3(unsigned threads) {
  Checks c;
  const auto flat = oracle::enumerate_gsp4_f3(threads);
  c.add("scanned", flat.scanned == 43046721ULL, flat.scanned);
  exact_checks(c, flat, 103680);
  const auto bases = oracle::enumerate_gsp4_by_bases(3, threads);
  c.add("basis_walk_agrees", same_counts(flat, bases), stats_json(bases));
  return {{{"mode", "enumerate-f3"}, {"stats", stats_json(flat)}, {"checks", c.list}, {"passed", c.passed}},
          c.passed};
}

OracleResult oracle_enumerate_f5(unsigned threads) {
  Checks c;
  const auto s = oracle::enumerate_gsp4_by_bases(5, threads);
  exact_checks(c, s, 37440000);
  return {{{"mode", "enumerate-f5"}, {"stats", stats_json(s)}, {"checks", c.list}, {"passed", c.passed}},
          c.passed};
}

OracleResult oracle_c_sets(std::uint32_t ell_max) {
  Checks c;
  struct Case {
    verify::Exceptional variant;
    std::optional<oracle::ExceptionalRow> row;
    std::uint64_t order;
    const char* name;
  };
  for (auto ell : arith::primes_below(static_cast<std::uint64_t>(ell_max) + 1)) {
    if (ell < 3) continue;
    const std::uint32_t l = static_cast<std::uint32_t>(ell);
    std::vector<Case> cases;
    if (auto row = oracle::row_1920(l)) cases.push_back({verify::Exceptional::G1920, row, 1920, "C_1920"});
    if (auto row = oracle::row_720(l)) cases.push_back({verify::Exceptional::G720, row, 720, "C_720"});
    if (l == 7) cases.push_back({verify::Exceptional::G5040, oracle::ExceptionalRow::G5040, 5040, "C_5040"});
    for (const auto& cs : cases) {
      const std::string name = std::string(cs.name) + " ell=" + std::to_string(l);
      try {
        const auto gens = oracle::exceptional_generators(*cs.row, l);
        if (!gens) {
          c.add(name, false, "no generator parameter");
          continue;
        }
        const auto form = oracle::invariant_form(*gens, l);
        const auto group = oracle::generate_projective_group(*gens, l);
        const auto computed = oracle::compute_c_set(group, form, l);
        const auto expected = oracle::reduce_pairs(verify::exceptional_set(cs.variant), l);
        c.add(name, group.size() == cs.order && computed == expected,
              {{"projective_order", group.size()}, {"c_set_size", computed.size()}, {"expected_size", expected.size()}});
      } catch (const std::exception& e) {
        c.add(name, false, e.what());
      }
    }
  }
  return {{{"mode", "c-sets"}, {"ell_max", ell_max}, {"checks", c.list}, {"passed", c.passed}}, c.passed};
}

OracleResult oracle_sample(std::uint32_t ell, std::uint64_t count, std::uint64_t seed, unsigned threads) {
  Checks c;
  const auto s = oracle::sample_gsp4(ell, count, seed, threads);
  const double n = static_cast<double>(s.order);
  auto within = [&](const char* name, std::uint64_t hits, const mpq_class& expected) {
    const double p = expected.get_d();
    const double sigma = std::sqrt(p * (1 - p) / n);
    const double observed = static_cast<double>(hits) / n;
    c.add(name, std::abs(observed - p) <= 3 * sigma, {{"observed", observed}, {"expected", p}, {"sigma", sigma}});
  };
  within("alpha", s.alpha, oracle::alpha_closed_form(ell));
  within("beta", s.beta, oracle::beta_closed_form(ell));
  const double gl = oracle::gamma_lower_bound(ell).get_d();
  const double gobs = static_cast<double>(s.gamma) / n;
  c.add("gamma_lower_bound", gobs >= gl - 3 * std::sqrt(gl * (1 - gl) / n), {{"observed", gobs}, {"bound", gl}});
  c.add("trace_zero_reducible", s.trace_zero == s.trace_zero_reducible,
        {{"trace_zero", s.trace_zero}, {"reducible", s.trace_zero_reducible}});
  return {{{"mode", "sample"}, {"seed", seed}, {"stats", stats_json(s)}, {"checks", c.list}, {"passed", c.passed}},
          c.passed};
}

}  // namespace g2surj::cli
