#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "g2surj/cli.hpp"
#include "g2surj/errors.hpp"
#include "g2surj/hecke_data.hpp"
#include "g2surj/verify.hpp"

namespace {

using namespace g2surj;

struct Common {
  cli::RunOptions run;
  std::string hecke_path;
  bool fetch = false;
  std::string cache_dir = ".g2surj-cache";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--bound", c.run.bound, "Frobenius witness bound B")->capture_default_str();
  cmd->add_option("--aux-bound", c.run.aux_bound, "auxiliary prime bound for the sieve")->capture_default_str();
  cmd->add_option("--hecke-data", c.hecke_path, "Hecke polynomial CSV");
  cmd->add_flag("--fetch", c.fetch, "fetch missing Hecke data from the remote database");
  cmd->add_option("--cache-dir", c.cache_dir, "disk cache for fetched Hecke data")->capture_default_str();
  cmd->add_flag("--verbose", c.run.verbose, "include per-prime witnesses");
  cmd->add_flag("--shortcut-1441", c.run.shortcut_1441, "skip exceptional tests above 1441");
}

struct Sources {
  hecke_data::HeckeTable local;
  std::unique_ptr<hecke_data::RemoteBackedSource> remote;

  const hecke_data::HeckeSource& get() const {
    if (remote) return *remote;
    return local;
  }
};

std::unique_ptr<Sources> make_sources(const Common& c) {
  auto s = std::make_unique<Sources>();
  if (!c.hecke_path.empty()) s->local = hecke_data::load(c.hecke_path);
  if (c.fetch)
    s->remote = std::make_unique<hecke_data::RemoteBackedSource>(
        s->local, hecke_data::remote_config_from_environment(c.cache_dir));
  return s;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonsurjective primes of genus 2 Jacobians"};
  app.require_subcommand(1);

  Common run_opts;
  std::string curve_line;
  auto* run = app.add_subcommand("run", "analyse one curve");
  run->add_option("curve", curve_line, "label,f,h,N with ';'-separated ascending coefficients")->required();
  add_common(run, run_opts);

  Common batch_opts;
  std::string batch_input;
  unsigned parallel = 1;
  auto* batch = app.add_subcommand("batch", "analyse a CSV of curves, one JSON line each");
  batch->add_option("input", batch_input, "curve CSV, '-' for stdin")->required();
  batch->add_option("--parallel", parallel, "curves processed concurrently")->capture_default_str();
  add_common(batch, batch_opts);

  bool enumerate_f3 = false, enumerate_f5 = false;
  std::optional<std::uint32_t> c_sets;
  std::vector<std::uint64_t> sample;
  unsigned threads = default_threads();
  auto* oracle_cmd = app.add_subcommand("oracle", "cross-check group-theoretic constants");
  oracle_cmd->add_flag("--enumerate-f3", enumerate_f3, "exhaustive scan of GSp4(F_3)");
  oracle_cmd->add_flag("--enumerate-f5", enumerate_f5, "exhaustive walk of GSp4(F_5), slow");
  oracle_cmd->add_option("--c-sets", c_sets, "check exceptional C-sets for ell up to this bound");
  oracle_cmd->add_option("--sample", sample, "ell count seed")->expected(3);
  oracle_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();

  std::uint64_t q = 0, n = 0;
  bool exact = false;
  auto* grh = app.add_subcommand("grh-bound", "conditional bound on nonsurjective primes");
  grh->add_option("q", q, "auxiliary prime")->required();
  grh->add_option("N", n, "conductor")->required();
  grh->add_flag("--exact", exact, "print the exact integer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kParseFailure;
  }

  try {
    if (*run) {
      auto sources = make_sources(run_opts);
      auto result = cli::run_curve(cli::parse_curve_record(curve_line), sources->get(), run_opts.run);
      std::cout << result.report.dump(2) << '\n';
      return result.exit_code;
    }
    if (*batch) {
      auto sources = make_sources(batch_opts);
      if (batch_input == "-") {
        cli::run_batch(std::cin, std::cout, sources->get(), batch_opts.run, parallel);
      } else {
        std::ifstream in(batch_input);
        if (!in) throw ParseError("cannot open " + batch_input);
        cli::run_batch(in, std::cout, sources->get(), batch_opts.run, parallel);
      }
      return cli::kSuccess;
    }
    if (*oracle_cmd) {
      std::vector<cli::OracleResult> results;
      if (enumerate_f3) results.push_back(cli::oracle_enumerate_f3(threads));
      if (enumerate_f5) results.push_back(cli::oracle_enumerate_f5(threads));
      if (c_sets) results.push_back(cli::oracle_c_sets(*c_sets));
      if (!sample.empty())
        results.push_back(cli::oracle_sample(static_cast<std::uint32_t>(sample[0]), sample[1], sample[2], threads));
      if (results.empty()) throw ParseError("oracle: choose at least one check");
      bool ok = true;
      for (const auto& r : results) {
        std::cout << r.report.dump() << '\n';
        ok = ok && r.passed;
      }
      return ok ? cli::kSuccess : cli::kOracleMismatch;
    }
    if (*grh) {
      const auto value = verify::grh_bound(q, n);
      std::cout << (exact ? value.get_str() : verify::format_scientific(value, 4)) << '\n';
      return cli::kSuccess;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kParseFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kParseFailure;
  }
  return cli::kSuccess;
}
