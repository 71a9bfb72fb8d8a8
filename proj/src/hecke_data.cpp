#include "g2surj/hecke_data.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "g2surj/errors.hpp"

namespace g2surj::hecke_data {

using arith::Integer;

void HeckeTable::insert(std::uint64_t level, std::uint64_t prime, IntPolynomial poly) {
  if (level == 0) throw std::invalid_argument("level must be positive");
  if (!arith::is_prime(prime)) throw std::invalid_argument(std::to_string(prime) + " is not prime");
  if (level % prime == 0) throw std::invalid_argument("prime divides the level");
  if (!poly.is_monic()) throw std::invalid_argument("polynomial is not monic");
  if (entries_.count({level, prime})) throw std::invalid_argument("duplicate entry");
  auto known = degree_.find(level);
  if (known != degree_.end() && known->second != poly.degree())
    throw std::invalid_argument("degree " + std::to_string(poly.degree()) + " differs from degree " +
                                std::to_string(known->second) + " seen earlier for this level");
  const auto dim = newspace_dimension(level);
  if (static_cast<std::uint64_t>(poly.degree()) != dim)
    throw std::invalid_argument("degree " + std::to_string(poly.degree()) +
                                " differs from the newspace dimension " + std::to_string(dim));
  if (!satisfies_weil_bound(poly, prime))
    throw std::invalid_argument("roots violate the bound |a_p| <= 2 sqrt(p)");
  degree_[level] = poly.degree();
  entries_.emplace(Key{level, prime}, std::move(poly));
}

const IntPolynomial* HeckeTable::find(std::uint64_t level, std::uint64_t prime) const {
  auto it = entries_.find({level, prime});
  return it == entries_.end() ? nullptr : &it->second;
}

IntPolynomial HeckeTable::polynomial(std::uint64_t level, std::uint64_t prime) const {
  if (const auto* h = find(level, prime)) return *h;
  throw MissingHeckeData(level, prime);
}

namespace {

std::uint64_t parse_unsigned(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError("expected a positive integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range: '" + s + "'");
  }
}

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

IntPolynomial parse_polynomial(std::string_view text) {
  const std::string s = strip(text);
  if (s.empty()) throw ParseError("empty polynomial");
  std::vector<Integer> coeffs;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-' at position " + std::to_string(i));
    }
    first = false;
    Integer c = 1;
    bool have_digits = false;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) {
      c = Integer(s.substr(start, i - start));
      have_digits = true;
    }
    unsigned exponent = 0;
    bool have_var = false;
    if (have_digits && i < s.size() && s[i] == '*') {
      ++i;
      if (i >= s.size() || s[i] != 'z') throw ParseError("expected 'z' after '*'");
    } else if (have_digits && i < s.size() && s[i] == 'z') {
      throw ParseError("missing '*' before 'z' at position " + std::to_string(i));
    }
    if (i < s.size() && s[i] == 'z') {
      have_var = true;
      exponent = 1;
      ++i;
      if (i < s.size() && s[i] == '^') {
        ++i;
        start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw ParseError("missing exponent");
        exponent = static_cast<unsigned>(std::stoul(s.substr(start, i - start)));
      }
    }
    if (!have_digits && !have_var) throw ParseError("empty term at position " + std::to_string(i));
    if (coeffs.size() <= exponent) coeffs.resize(exponent + 1);
    coeffs[exponent] += sign * c;
  }
  return IntPolynomial(std::move(coeffs));
}

std::string format_polynomial(const IntPolynomial& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  for (int e = poly.degree(); e >= 0; --e) {
    const Integer& c = poly.coeff(e);
    if (c == 0) continue;
    if (c < 0)
      out += '-';
    else if (!out.empty())
      out += '+';
    const Integer mag = abs(c);
    if (e == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += 'z';
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

HeckeTable parse(std::istream& in, const std::string& source_name) {
  HeckeTable table(source_name);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string compact = strip(line);
    if (compact.empty() || compact[0] == '#') continue;
    try {
      std::vector<std::string> fields;
      std::stringstream ss(compact);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (fields.size() != 3) throw ParseError("expected 3 comma-separated fields");
      table.insert(parse_unsigned(fields[0]), parse_unsigned(fields[1]), parse_polynomial(fields[2]));
    } catch (const std::exception& e) {
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

HeckeTable load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse(in, path.string());
}

void write(const HeckeTable& table, std::ostream& out) {
  for (const auto& [key, poly] : table.entries())
    out << key.first << ',' << key.second << ',' << format_polynomial(poly) << '\n';
}

void save(const HeckeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write(table, out);
}

bool is_zero_dimensional_level(std::uint64_t level) {
  static constexpr std::uint64_t kLevels[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 22, 25, 28, 60};
  return std::find(std::begin(kLevels), std::end(kLevels), level) != std::end(kLevels);
}

std::vector<std::uint64_t> small_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n / d; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::set<std::uint64_t> required_levels(std::uint64_t n) {
  std::set<std::uint64_t> out;
  for (auto d : small_divisors(n))
    if (!is_zero_dimensional_level(d)) out.insert(d);
  return out;
}

namespace {

std::vector<std::pair<std::uint64_t, unsigned>> prime_powers(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  if (n == 1) return out;
  for (auto q : arith::factorize(n)) {
    if (!out.empty() && out.back().first == q)
      ++out.back().second;
    else
      out.emplace_back(q, 1);
  }
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (auto [q, e] : prime_powers(n)) r = r / q * (q - 1);
  return r;
}

// Genus of X_0(n).
std::int64_t genus_x0(std::uint64_t n) {
  const auto pp = prime_powers(n);
  std::int64_t mu = static_cast<std::int64_t>(n);
  for (auto [q, e] : pp) mu = mu / static_cast<std::int64_t>(q) * static_cast<std::int64_t>(q + 1);
  std::int64_t nu2 = n % 4 == 0 ? 0 : 1;
  std::int64_t nu3 = n % 9 == 0 ? 0 : 1;
  for (auto [q, e] : pp) {
    nu2 *= 1 + (q == 2 ? 0 : arith::legendre(-1, q));
    nu3 *= 1 + (q == 3 ? 0 : arith::kronecker(-3, q));
  }
  std::int64_t cusps = 0;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) cusps += static_cast<std::int64_t>(euler_phi(std::gcd(d, n / d)));
  const std::int64_t twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
  return twelve_g / 12;
}

// Multiplicative weight removing old forms: -2 at p, 1 at p^2, 0 beyond.
std::int64_t old_form_weight(std::uint64_t m) {
  std::int64_t w = 1;
  for (auto [q, e] : prime_powers(m)) w *= e == 1 ? -2 : e == 2 ? 1 : 0;
  return w;
}

}  // namespace

std::uint64_t newspace_dimension(std::uint64_t level) {
  if (level == 0) throw std::invalid_argument("level must be positive");
  std::int64_t dim = 0;
  for (std::uint64_t m = 1; m <= level; ++m)
    if (level % m == 0) dim += old_form_weight(level / m) * genus_x0(m);
  return static_cast<std::uint64_t>(dim);
}

namespace {

IntPolynomial primitive_part(const IntPolynomial& p) {
  Integer g = 0;
  for (const auto& c : p.coefficients()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g <= 1) return p;
  std::vector<Integer> out = p.coefficients();
  for (auto& c : out) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return IntPolynomial(std::move(out));
}

// Sign of S(x) at x = s * 2 sqrt(p), s = +-1, computed exactly.
int sign_at(const IntPolynomial& poly, std::uint64_t p, int s) {
  const Integer x2 = Integer(static_cast<unsigned long>(4 * p));
  Integer even = 0, odd = 0;
  for (int e = poly.degree(); e >= 0; --e) {
    if (e % 2 == 0)
      even = even * x2 + poly.coeff(e);
    else
      odd = odd * x2 + poly.coeff(e);
  }
  // S(x) = even + x * odd with x = 2 s sqrt(p): even + (2 s odd) sqrt(p).
  const Integer a = even;
  const Integer b = 2 * s * odd;
  const int sa = sgn(a), sb = sgn(b);
  if (sa >= 0 && sb >= 0) return (sa > 0 || sb > 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  const Integer lhs = a * a;
  const Integer rhs = Integer(static_cast<unsigned long>(p)) * b * b;
  const int cmp = lhs > rhs ? 1 : lhs < rhs ? -1 : 0;
  return sa > 0 ? cmp : -cmp;
}

int sign_changes(const std::vector<IntPolynomial>& chain, std::uint64_t p, int s) {
  int changes = 0, last = 0;
  for (const auto& poly : chain) {
    const int v = sign_at(poly, p, s);
    if (v == 0) continue;
    if (last != 0 && v != last) ++changes;
    last = v;
  }
  return changes;
}

// Divides by z^2 - 4p while it divides exactly.
IntPolynomial strip_endpoint_factor(IntPolynomial h, std::uint64_t p) {
  const Integer four_p(static_cast<unsigned long>(4 * p));
  while (h.degree() >= 2) {
    std::vector<Integer> r = h.coefficients();
    const int n = h.degree();
    std::vector<Integer> q(n - 1);
    for (int k = n; k >= 2; --k) {
      q[k - 2] = r[k];
      r[k - 2] += four_p * r[k];
      r[k] = 0;
    }
    if (r[0] != 0 || r[1] != 0) break;
    h = IntPolynomial(std::move(q));
  }
  return h;
}

}  // namespace

bool satisfies_weil_bound(const IntPolynomial& h_in, std::uint64_t p) {
  if (h_in.is_zero()) return false;
  const IntPolynomial h = strip_endpoint_factor(h_in, p);
  if (h.degree() <= 0) return true;
  std::vector<IntPolynomial> chain{h, h.derivative()};
  while (chain.back().degree() > 0) {
    const IntPolynomial& a = chain[chain.size() - 2];
    const IntPolynomial& b = chain.back();
    IntPolynomial r = arith::pseudo_remainder(a, b);
    if (r.is_zero()) break;
    const int delta = a.degree() - b.degree();
    const bool lc_power_positive = b.leading() > 0 || (delta + 1) % 2 == 0;
    if (lc_power_positive) r *= Integer(-1);
    chain.push_back(primitive_part(r));
  }
  const int gcd_degree = chain.back().degree();
  const int distinct = h.degree() - gcd_degree;
  return sign_changes(chain, p, -1) - sign_changes(chain, p, 1) == distinct;
}

IntPolynomial hecke_poly_from_q(const IntPolynomial& q, std::uint64_t p) {
  if (!q.is_monic() || q.degree() % 2 != 0)
    throw std::invalid_argument("expected a monic polynomial of even degree");
  const int k = q.degree() / 2;
  const IntPolynomial shift({Integer(static_cast<unsigned long>(p)), Integer(0), Integer(1)});
  std::vector<IntPolynomial> powers{IntPolynomial({1})};
  for (int j = 1; j <= k; ++j) powers.push_back(powers.back() * shift);
  IntPolynomial rest = q;
  std::vector<Integer> h(k + 1);
  for (int j = k; j >= 0; --j) {
    h[j] = rest.coeff(k + j);
    if (h[j] != 0) rest -= powers[j] * IntPolynomial::monomial(h[j], k - j);
  }
  if (!rest.is_zero()) throw std::invalid_argument("polynomial is not of the form prod(t^2 - a t + p)");
  return IntPolynomial(std::move(h));
}

}  // namespace g2surj::hecke_data
