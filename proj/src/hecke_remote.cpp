#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "g2surj/errors.hpp"
#include "g2surj/hecke_data.hpp"

namespace g2surj::hecke_data {

using arith::Integer;
using json = nlohmann::json;

namespace {

std::filesystem::path cache_path(const RemoteConfig& config, std::uint64_t level, std::uint64_t prime) {
  return config.cache_dir / ("hecke_" + std::to_string(level) + "_" + std::to_string(prime) + ".txt");
}

void write_cache(const std::filesystem::path& target, const std::string& line) {
  std::filesystem::create_directories(target.parent_path());
  std::random_device rd;
  const auto tmp = target.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp);
    out << line << '\n';
  }
  std::filesystem::rename(tmp, target);
}

json get_json(httplib::Client& client, const std::string& path) {
  auto res = client.Get(path);
  if (!res) throw NetworkError("request " + path + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw NetworkError("request " + path + " returned HTTP " + std::to_string(res->status));
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw ParseError("malformed response for " + path + ": " + e.what());
  }
}

Integer to_integer(const json& v) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<std::int64_t>()));
  if (v.is_string()) return Integer(v.get<std::string>());
  throw ParseError("expected an integer, got " + v.dump());
}

struct Orbit {
  std::string code;
  std::uint64_t dim;
};

std::vector<Orbit> list_orbits(httplib::Client& client, std::uint64_t level) {
  std::vector<Orbit> orbits;
  std::string path = "/api/mf_newforms/?level=i" + std::to_string(level) +
                     "&weight=i2&char_order=i1&_format=json&_fields=label,dim,hecke_orbit_code";
  while (!path.empty()) {
    const json body = get_json(client, path);
    try {
      for (const auto& row : body.at("data")) {
        const json& code = row.at("hecke_orbit_code");
        orbits.push_back({code.is_string() ? code.get<std::string>() : code.dump(),
                          row.at("dim").get<std::uint64_t>()});
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed newform listing: ") + e.what());
    }
    auto next = body.find("next");
    path = (next != body.end() && next->is_string()) ? next->get<std::string>() : "";
  }
  return orbits;
}

IntPolynomial orbit_q_poly(httplib::Client& client, const Orbit& orbit, std::uint64_t prime) {
  const std::string path = "/api/mf_hecke_lpolys/?hecke_orbit_code=i" + orbit.code + "&p=i" +
                           std::to_string(prime) + "&_format=json&_fields=lpoly";
  const json body = get_json(client, path);
  try {
    const json& data = body.at("data");
    if (data.empty()) throw MissingLevel("no L-polynomial for orbit " + orbit.code + " at p = " +
                                         std::to_string(prime));
    const json& lpoly = data.at(0).at("lpoly");
    if (lpoly.size() != 2 * orbit.dim + 1) throw ParseError("L-polynomial degree does not match orbit dimension");
    // t^(2 dim) L(1/t): reverse the ascending coefficient list.
    std::vector<Integer> coeffs;
    for (auto it = lpoly.rbegin(); it != lpoly.rend(); ++it) coeffs.push_back(to_integer(*it));
    return IntPolynomial(std::move(coeffs));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed L-polynomial response: ") + e.what());
  }
}

}  // namespace

RemoteConfig remote_config_from_environment(std::filesystem::path cache_dir) {
  RemoteConfig config;
  if (const char* url = std::getenv("G2SURJ_LMFDB_URL"); url && *url) config.base_url = url;
  config.cache_dir = std::move(cache_dir);
  return config;
}

IntPolynomial fetch_remote(std::uint64_t level, std::uint64_t prime, const RemoteConfig& config) {
  const auto cached = cache_path(config, level, prime);
  if (std::filesystem::exists(cached)) {
    std::ifstream in(cached);
    std::string line;
    std::getline(in, line);
    IntPolynomial h = parse_polynomial(line);
    if (static_cast<std::uint64_t>(h.degree()) != newspace_dimension(level) || !h.is_monic() ||
        !satisfies_weil_bound(h, prime))
      throw ParseError("corrupt cache file " + cached.string());
    return h;
  }

  httplib::Client client(config.base_url);
  client.set_connection_timeout(config.timeout_seconds);
  client.set_read_timeout(config.timeout_seconds);
  client.set_follow_location(true);

  const auto orbits = list_orbits(client, level);
  if (orbits.empty()) throw MissingLevel("no newforms listed for level " + std::to_string(level));
  IntPolynomial q({1});
  std::uint64_t total_dim = 0;
  for (const auto& orbit : orbits) {
    q = q * orbit_q_poly(client, orbit, prime);
    total_dim += orbit.dim;
  }
  if (total_dim != newspace_dimension(level))
    throw ParseError("orbit dimensions sum to " + std::to_string(total_dim) + ", expected " +
                     std::to_string(newspace_dimension(level)));
  IntPolynomial h;
  try {
    h = hecke_poly_from_q(q, prime);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inconsistent L-polynomials: ") + e.what());
  }
  if (!satisfies_weil_bound(h, prime)) throw ParseError("fetched polynomial violates the Weil bound");
  write_cache(cached, format_polynomial(h));
  return h;
}

IntPolynomial RemoteBackedSource::polynomial(std::uint64_t level, std::uint64_t prime) const {
  if (const auto* h = local_.find(level, prime)) return *h;
  return fetch_remote(level, prime, config_);
}

}  // namespace g2surj::hecke_data
