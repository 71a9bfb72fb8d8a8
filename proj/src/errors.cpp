#include "g2surj/errors.hpp"

namespace g2surj {

namespace {

std::string describe(const std::vector<EndomorphismSuspected::Site>& sites) {
  std::string msg = "endomorphism suspected:";
  for (const auto& s : sites) {
    msg += ' ' + s.algorithm;
    if (!s.detail.empty()) msg += " (" + s.detail + ")";
    msg += ';';
  }
  if (!sites.empty()) msg.pop_back();
  return msg;
}

}  // namespace

EndomorphismSuspected::EndomorphismSuspected(std::vector<Site> sites)
    : std::runtime_error(describe(sites)), sites_(std::move(sites)) {}

MissingHeckeData::MissingHeckeData(std::uint64_t level, std::uint64_t prime)
    : std::runtime_error("missing Hecke data for level " + std::to_string(level) + ", prime " +
                         std::to_string(prime)),
      level_(level),
      prime_(prime) {}

}  // namespace g2surj
