#include "g2surj/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

#include "g2surj/errors.hpp"
#include "g2surj/verify.hpp"

namespace g2surj::oracle {

namespace {

std::uint32_t mulm(std::uint32_t a, std::uint32_t b, std::uint32_t ell) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % ell);
}

std::uint32_t addm(std::uint32_t a, std::uint32_t b, std::uint32_t ell) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % ell);
}

std::uint32_t subm(std::uint32_t a, std::uint32_t b, std::uint32_t ell) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + ell - b % ell) % ell);
}

std::uint32_t from_int(std::int64_t x, std::uint32_t ell) {
  const std::int64_t m = ell;
  return static_cast<std::uint32_t>(((x % m) + m) % m);
}

std::uint32_t inv(std::uint32_t a, std::uint32_t ell) {
  if (a % ell == 0) throw std::domain_error("inverse of zero");
  std::uint32_t r = 1, base = a % ell;
  for (std::uint32_t e = ell - 2; e; e >>= 1) {
    if (e & 1) r = mulm(r, base, ell);
    base = mulm(base, base, ell);
  }
  return r;
}

std::optional<std::uint32_t> sqrt_mod(std::uint32_t a, std::uint32_t ell, int root_index) {
  std::vector<std::uint32_t> roots;
  for (std::uint32_t x = 0; x < ell; ++x)
    if (mulm(x, x, ell) == a % ell) roots.push_back(x);
  if (roots.empty()) return std::nullopt;
  return roots[std::min<std::size_t>(root_index, roots.size() - 1)];
}

struct Mat4Hash {
  std::size_t operator()(const Mat4& m) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : m) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

// Rank-revealing elimination; returns a basis of the nullspace of rows.
std::vector<std::vector<std::uint32_t>> nullspace(std::vector<std::vector<std::uint32_t>> rows,
                                                  std::size_t cols, std::uint32_t ell) {
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const std::uint32_t s = inv(rows[r][c], ell);
    for (auto& x : rows[r]) x = mulm(x, s, ell);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::uint32_t f = rows[i][c];
      for (std::size_t k = 0; k < cols; ++k) rows[i][k] = subm(rows[i][k], mulm(f, rows[r][k], ell), ell);
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<std::vector<std::uint32_t>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(free)) != pivot_col.end()) continue;
    std::vector<std::uint32_t> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = subm(0, rows[i][free], ell);
    basis.push_back(std::move(v));
  }
  return basis;
}

constexpr std::array<std::pair<int, int>, 6> kSkewSlots{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Mat4 skew_from(const std::vector<std::uint32_t>& v, std::uint32_t ell) {
  Mat4 j{};
  for (std::size_t k = 0; k < kSkewSlots.size(); ++k) {
    auto [a, b] = kSkewSlots[k];
    j[a * 4 + b] = v[k];
    j[b * 4 + a] = subm(0, v[k], ell);
  }
  return j;
}

}  // namespace

Mat4 identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i * 5] = 1;
  return m;
}

Mat4 multiply(const Mat4& a, const Mat4& b, std::uint32_t ell) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::uint64_t s = 0;
      for (int k = 0; k < 4; ++k) s += static_cast<std::uint64_t>(a[i * 4 + k]) * b[k * 4 + j];
      c[i * 4 + j] = static_cast<std::uint32_t>(s % ell);
    }
  return c;
}

Mat4 transpose(const Mat4& a) {
  Mat4 t{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[j * 4 + i] = a[i * 4 + j];
  return t;
}

Mat4 scale(const Mat4& a, std::uint32_t c, std::uint32_t ell) {
  Mat4 r{};
  for (int i = 0; i < 16; ++i) r[i] = mulm(a[i], c, ell);
  return r;
}

std::uint32_t determinant(const Mat4& a_in, std::uint32_t ell) {
  Mat4 a = a_in;
  std::uint32_t det = 1;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    while (piv < 4 && a[piv * 4 + c] == 0) ++piv;
    if (piv == 4) return 0;
    if (piv != c) {
      for (int k = 0; k < 4; ++k) std::swap(a[piv * 4 + k], a[c * 4 + k]);
      det = subm(0, det, ell);
    }
    det = mulm(det, a[c * 5], ell);
    const std::uint32_t s = inv(a[c * 5], ell);
    for (int r = c + 1; r < 4; ++r) {
      const std::uint32_t f = mulm(a[r * 4 + c], s, ell);
      for (int k = c; k < 4; ++k) a[r * 4 + k] = subm(a[r * 4 + k], mulm(f, a[c * 4 + k], ell), ell);
    }
  }
  return det;
}

std::optional<Mat4> inverse(const Mat4& a_in, std::uint32_t ell) {
  Mat4 a = a_in;
  Mat4 r = identity();
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    while (piv < 4 && a[piv * 4 + c] == 0) ++piv;
    if (piv == 4) return std::nullopt;
    for (int k = 0; k < 4; ++k) {
      std::swap(a[piv * 4 + k], a[c * 4 + k]);
      std::swap(r[piv * 4 + k], r[c * 4 + k]);
    }
    const std::uint32_t s = inv(a[c * 5], ell);
    for (int k = 0; k < 4; ++k) {
      a[c * 4 + k] = mulm(a[c * 4 + k], s, ell);
      r[c * 4 + k] = mulm(r[c * 4 + k], s, ell);
    }
    for (int i = 0; i < 4; ++i) {
      if (i == c || a[i * 4 + c] == 0) continue;
      const std::uint32_t f = a[i * 4 + c];
      for (int k = 0; k < 4; ++k) {
        a[i * 4 + k] = subm(a[i * 4 + k], mulm(f, a[c * 4 + k], ell), ell);
        r[i * 4 + k] = subm(r[i * 4 + k], mulm(f, r[c * 4 + k], ell), ell);
      }
    }
  }
  return r;
}

Mat4 canonical(const Mat4& a, std::uint32_t ell) {
  for (auto x : a)
    if (x != 0) return scale(a, inv(x, ell), ell);
  throw std::invalid_argument("canonical form of the zero matrix");
}

Mat4 standard_form(std::uint32_t ell) {
  Mat4 j{};
  j[0 * 4 + 3] = 1;
  j[1 * 4 + 2] = 1;
  j[2 * 4 + 1] = ell - 1;
  j[3 * 4 + 0] = ell - 1;
  return j;
}

std::optional<std::uint32_t> similitude_factor(const Mat4& m, const Mat4& form, std::uint32_t ell) {
  const Mat4 g = multiply(multiply(transpose(m), form, ell), m, ell);
  for (int i = 0; i < 16; ++i) {
    if (form[i] == 0) continue;
    const std::uint32_t lambda = mulm(g[i], inv(form[i], ell), ell);
    if (lambda == 0 || g != scale(form, lambda, ell)) return std::nullopt;
    return lambda;
  }
  return std::nullopt;
}

Mat4 invariant_form(const std::vector<Mat4>& generators, std::uint32_t ell) {
  if (generators.empty()) throw NoCommonForm("no generators");
  // For each generator, both square roots of det(G) are candidate multipliers.
  std::vector<std::array<std::uint32_t, 2>> lambdas;
  for (const auto& g : generators) {
    const std::uint32_t d = determinant(g, ell);
    if (d == 0) throw std::invalid_argument("generator is singular");
    auto r = sqrt_mod(d, ell, 0);
    if (!r) throw NoCommonForm("a generator has non-square determinant");
    lambdas.push_back({*r, subm(0, *r, ell)});
  }
  std::size_t total_dim = 0;
  std::vector<std::uint32_t> solution;
  for (std::uint64_t mask = 0; mask < (1ULL << generators.size()); ++mask) {
    std::vector<std::vector<std::uint32_t>> rows;
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
      const auto& g = generators[gi];
      const std::uint32_t lambda = lambdas[gi][mask >> gi & 1];
      std::array<Mat4, 6> images;
      for (std::size_t k = 0; k < 6; ++k) {
        std::vector<std::uint32_t> unit(6, 0);
        unit[k] = 1;
        const Mat4 basis = skew_from(unit, ell);
        const Mat4 gjg = multiply(multiply(transpose(g), basis, ell), g, ell);
        for (int i = 0; i < 16; ++i) images[k][i] = subm(gjg[i], mulm(lambda, basis[i], ell), ell);
      }
      for (auto [a, b] : kSkewSlots) {
        std::vector<std::uint32_t> row(6);
        for (std::size_t k = 0; k < 6; ++k) row[k] = images[k][a * 4 + b];
        rows.push_back(std::move(row));
      }
    }
    auto basis = nullspace(rows, 6, ell);
    total_dim += basis.size();
    if (basis.size() == 1) solution = basis[0];
  }
  if (total_dim != 1)
    throw NoCommonForm("solution space has dimension " + std::to_string(total_dim));
  const Mat4 j = skew_from(solution, ell);
  const auto& v = solution;
  const std::uint32_t pfaffian =
      addm(subm(mulm(v[0], v[5], ell), mulm(v[1], v[4], ell), ell), mulm(v[2], v[3], ell), ell);
  if (pfaffian == 0) throw DegenerateForm("invariant form is degenerate");
  return j;
}

std::vector<Mat4> generate_projective_group(const std::vector<Mat4>& generators, std::uint32_t ell,
                                            std::size_t cap) {
  std::vector<Mat4> gens;
  for (const auto& g : generators) {
    auto gi = inverse(g, ell);
    if (!gi) throw std::invalid_argument("generator is singular");
    gens.push_back(canonical(g, ell));
    gens.push_back(canonical(*gi, ell));
  }
  std::unordered_set<Mat4, Mat4Hash> seen;
  std::vector<Mat4> elements{identity()};
  seen.insert(identity());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : gens) {
      Mat4 next = canonical(multiply(elements[i], g, ell), ell);
      if (seen.insert(next).second) {
        elements.push_back(next);
        if (elements.size() > cap) throw std::runtime_error("projective closure exceeded the safety cap");
      }
    }
  }
  return elements;
}

std::array<std::uint32_t, 4> charpoly(const Mat4& m, std::uint32_t ell) {
  auto at = [&](int i, int j) { return static_cast<std::int64_t>(m[i * 4 + j]); };
  const std::int64_t mod = ell;
  std::int64_t e1 = 0, e2 = 0, e3 = 0;
  for (int i = 0; i < 4; ++i) e1 += at(i, i);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) e2 = (e2 + at(i, i) * at(j, j) - at(i, j) * at(j, i)) % mod;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const std::int64_t d = at(i, i) * (at(j, j) * at(k, k) - at(j, k) * at(k, j)) -
                               at(i, j) * (at(j, i) * at(k, k) - at(j, k) * at(k, i)) +
                               at(i, k) * (at(j, i) * at(k, j) - at(j, j) * at(k, i));
        e3 = (e3 + d) % mod;
      }
  return {from_int(e1, ell), from_int(e2, ell), from_int(e3, ell), determinant(m, ell)};
}

std::set<ProjectivePoint> compute_c_set(const std::vector<Mat4>& group, const Mat4& form,
                                        std::uint32_t ell) {
  std::set<ProjectivePoint> out;
  for (const auto& m : group) {
    auto mult = similitude_factor(m, form, ell);
    if (!mult) throw std::invalid_argument("group element does not preserve the form");
    const auto e = charpoly(m, ell);
    const std::uint32_t minv = inv(*mult, ell);
    out.emplace(mulm(mulm(e[0], e[0], ell), minv, ell), mulm(e[1], minv, ell));
  }
  return out;
}

std::set<ProjectivePoint> reduce_pairs(const std::vector<std::pair<int, int>>& pairs, std::uint32_t ell) {
  std::set<ProjectivePoint> out;
  for (auto [x, y] : pairs) out.emplace(from_int(x, ell), from_int(y, ell));
  return out;
}

std::optional<ExceptionalRow> row_1920(std::uint32_t ell) {
  if (ell % 8 == 5) return ExceptionalRow::G1920Mod8Is5;
  if (ell % 8 == 3) return ExceptionalRow::G1920Mod8Is3;
  return std::nullopt;
}

std::optional<ExceptionalRow> row_720(std::uint32_t ell) {
  if (ell % 12 == 7) return ExceptionalRow::G720Mod12Is7;
  if (ell % 12 == 5) return ExceptionalRow::G720Mod12Is5;
  return std::nullopt;
}

namespace {

// Entry x + y * param.
using Affine = std::pair<int, int>;
using AffineMat = std::array<Affine, 16>;

Mat4 instantiate(const AffineMat& a, std::uint32_t param, std::uint32_t ell) {
  Mat4 m{};
  for (int i = 0; i < 16; ++i)
    m[i] = addm(from_int(a[i].first, ell), mulm(from_int(a[i].second, ell), param, ell), ell);
  return m;
}

AffineMat constant(std::array<int, 16> v) {
  AffineMat a{};
  for (int i = 0; i < 16; ++i) a[i] = {v[i], 0};
  return a;
}

const AffineMat kA1 = constant({1, 0, 0, -1, 0, 1, -1, 0, 0, 1, 1, 0, 1, 0, 0, 1});
const AffineMat kA3 = constant({1, 0, 0, -1, 0, 1, 1, 0, 0, -1, 1, 0, 1, 0, 0, 1});
const AffineMat kA4 = constant({1, 0, 1, 0, 0, 1, 0, 1, -1, 0, 1, 0, 0, -1, 0, 1});
const AffineMat kA2 = {{{1, 0}, {0, 0}, {0, 0}, {0, 1}, {0, 0}, {1, 0}, {0, 1}, {0, 0},
                        {0, 0}, {0, 1}, {1, 0}, {0, 0}, {0, 1}, {0, 0}, {0, 0}, {1, 0}}};
const AffineMat kB2 = {{{0, 0}, {0, 0}, {0, 0}, {0, 1}, {0, 0}, {0, 0}, {0, 1}, {0, 0},
                        {0, 0}, {0, 1}, {2, 0}, {0, 0}, {0, 1}, {0, 0}, {0, 0}, {2, 0}}};

const AffineMat kC1 = {{{0, 1}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 1}, {0, 0}, {0, 0},
                        {0, 0}, {0, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}}};
const AffineMat kC2 = {{{0, 1}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}, {0, 0}, {0, 0},
                        {0, 0}, {0, 0}, {0, 1}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}}};
const AffineMat kC3 = {{{0, 1}, {0, 0}, {-1, -1}, {1, 1},
                        {0, 0}, {0, 1}, {-1, -1}, {-1, -1},
                        {-1, -1}, {-1, -1}, {-1, 0}, {0, 0},
                        {1, 1}, {-1, -1}, {0, 0}, {-1, 0}}};
const AffineMat kC4 = constant({0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0});

const AffineMat kD1 = constant({-1, 0, 0, -1, 0, -1, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0});
const AffineMat kD2 = constant({0, 0, 0, 1, 0, -1, -1, 0, 0, 1, 0, 0, -1, 0, 0, -1});
const AffineMat kD3 = {{{-1, -1}, {0, 1}, {0, 2}, {1, -2},
                        {0, 1}, {-1, 1}, {1, 2}, {0, 2},
                        {0, 1}, {-1, 1}, {-2, -1}, {0, -1},
                        {-1, -1}, {0, 1}, {0, -1}, {-2, 1}}};
const AffineMat kD4 = {{{0, 0}, {0, -1}, {0, -2}, {0, 0},
                        {0, 1}, {0, 0}, {0, 0}, {0, 2},
                        {0, -2}, {0, 0}, {0, 0}, {0, -1},
                        {0, 0}, {0, 2}, {0, 1}, {0, 0}}};

const std::array<std::array<int, 16>, 5> kG5040 = {{
    {2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1},
    {2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1},
    {6, 0, 5, 2, 0, 6, 5, 5, 5, 5, 4, 0, 2, 5, 0, 4},
    {0, 6, 0, 0, 1, 0, 0, 0, 0, 0, 0, 6, 0, 0, 1, 0},
    {4, 6, 0, 0, 6, 6, 0, 0, 0, 0, 4, 1, 0, 0, 1, 6},
}};

std::optional<std::uint32_t> root_of_x2_x_1(std::uint32_t ell, int root_index) {
  std::vector<std::uint32_t> roots;
  for (std::uint32_t x = 0; x < ell; ++x)
    if (addm(addm(mulm(x, x, ell), x, ell), 1, ell) == 0) roots.push_back(x);
  if (roots.empty()) return std::nullopt;
  return roots[std::min<std::size_t>(root_index, roots.size() - 1)];
}

}  // namespace

std::optional<std::vector<Mat4>> exceptional_generators(ExceptionalRow row, std::uint32_t ell,
                                                        int root_index) {
  std::optional<std::uint32_t> param;
  std::vector<const AffineMat*> shape;
  switch (row) {
    case ExceptionalRow::G1920Mod8Is5:
      param = sqrt_mod(from_int(-1, ell), ell, root_index);
      shape = {&kA1, &kA2, &kA3, &kA4};
      break;
    case ExceptionalRow::G1920Mod8Is3:
      param = sqrt_mod(from_int(-2, ell), ell, root_index);
      shape = {&kA1, &kB2, &kA3, &kA4};
      break;
    case ExceptionalRow::G720Mod12Is7:
      param = root_of_x2_x_1(ell, root_index);
      shape = {&kC1, &kC2, &kC3, &kC4};
      break;
    case ExceptionalRow::G720Mod12Is5:
      param = sqrt_mod(from_int(-1, ell), ell, root_index);
      shape = {&kD1, &kD2, &kD3, &kD4};
      break;
    case ExceptionalRow::G5040: {
      if (ell != 7) return std::nullopt;
      std::vector<Mat4> out;
      for (const auto& m : kG5040) out.push_back(instantiate(constant(m), 0, ell));
      return out;
    }
  }
  if (!param || *param == 0) return std::nullopt;
  std::vector<Mat4> out;
  for (const auto* a : shape) out.push_back(instantiate(*a, *param, ell));
  return out;
}

QuarticTable::QuarticTable(std::uint32_t ell) : ell_(ell) {
  const std::size_t n = static_cast<std::size_t>(ell) * ell * ell * ell;
  reducible_.assign(n, 0);
  simple_root_.assign(n, 0);
  auto idx = [&](std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3) {
    return ((static_cast<std::size_t>(c3) * ell + c2) * ell + c1) * ell + c0;
  };
  // (t + r)(t^3 + d2 t^2 + d1 t + d0)
  for (std::uint32_t r = 0; r < ell; ++r)
    for (std::uint32_t d0 = 0; d0 < ell; ++d0)
      for (std::uint32_t d1 = 0; d1 < ell; ++d1)
        for (std::uint32_t d2 = 0; d2 < ell; ++d2)
          reducible_[idx(mulm(r, d0, ell), addm(d0, mulm(r, d1, ell), ell), addm(d1, mulm(r, d2, ell), ell),
                         addm(d2, r, ell))] = 1;
  // (t^2 + a1 t + a0)(t^2 + b1 t + b0)
  for (std::uint32_t a0 = 0; a0 < ell; ++a0)
    for (std::uint32_t a1 = 0; a1 < ell; ++a1)
      for (std::uint32_t b0 = 0; b0 < ell; ++b0)
        for (std::uint32_t b1 = 0; b1 < ell; ++b1)
          reducible_[idx(mulm(a0, b0, ell), addm(mulm(a1, b0, ell), mulm(a0, b1, ell), ell),
                         addm(addm(a0, b0, ell), mulm(a1, b1, ell), ell), addm(a1, b1, ell))] = 1;
  for (std::uint32_t c3 = 0; c3 < ell; ++c3)
    for (std::uint32_t c2 = 0; c2 < ell; ++c2)
      for (std::uint32_t c1 = 0; c1 < ell; ++c1)
        for (std::uint32_t c0 = 0; c0 < ell; ++c0)
          for (std::uint32_t r = 0; r < ell; ++r) {
            const std::uint32_t r2 = mulm(r, r, ell), r3 = mulm(r2, r, ell);
            const std::uint32_t value =
                addm(addm(addm(addm(mulm(r3, r, ell), mulm(c3, r3, ell), ell), mulm(c2, r2, ell), ell),
                          mulm(c1, r, ell), ell),
                     c0, ell);
            const std::uint32_t slope = addm(
                addm(addm(mulm(4 % ell, r3, ell), mulm(mulm(3, c3, ell), r2, ell), ell), mulm(mulm(2, c2, ell), r, ell),
                     ell),
                c1, ell);
            if (value == 0 && slope != 0) {
              simple_root_[idx(c0, c1, c2, c3)] = 1;
              break;
            }
          }
}

std::size_t QuarticTable::index(const std::array<std::uint32_t, 4>& e) const {
  // t^4 - e1 t^3 + e2 t^2 - e3 t + e4
  const std::uint32_t c3 = subm(0, e[0], ell_), c2 = e[1], c1 = subm(0, e[2], ell_), c0 = e[3];
  return ((static_cast<std::size_t>(c3) * ell_ + c2) * ell_ + c1) * ell_ + c0;
}

bool QuarticTable::irreducible(const std::array<std::uint32_t, 4>& e) const { return !reducible_[index(e)]; }

bool QuarticTable::simple_root(const std::array<std::uint32_t, 4>& e) const { return simple_root_[index(e)]; }

namespace {

struct GammaSets {
  std::uint32_t ell;
  std::vector<std::set<ProjectivePoint>> active;  // sets not auto-passed at ell

  explicit GammaSets(std::uint32_t l) : ell(l) {
    using verify::Exceptional;
    for (auto v : {Exceptional::G1920, Exceptional::G720, Exceptional::G5040})
      if (!verify::exceptional_auto_pass(l, v)) active.push_back(reduce_pairs(verify::exceptional_set(v), l));
  }
};

void tally(Gsp4Stats& s, const Mat4& m, std::uint32_t mult, const QuarticTable& table, const GammaSets& gamma) {
  const std::uint32_t ell = gamma.ell;
  const auto e = charpoly(m, ell);
  ++s.order;
  const bool irreducible = table.irreducible(e);
  if (irreducible) ++s.alpha;
  if (e[0] != 0 && table.simple_root(e)) ++s.beta;
  if (e[0] == 0) {
    ++s.trace_zero;
    if (!irreducible) ++s.trace_zero_reducible;
  }
  const std::uint32_t minv = inv(mult, ell);
  const ProjectivePoint pt{mulm(mulm(e[0], e[0], ell), minv, ell), mulm(e[1], minv, ell)};
  bool outside = true;
  for (const auto& set : gamma.active)
    if (set.count(pt)) outside = false;
  if (outside) ++s.gamma;
}

void merge(Gsp4Stats& into, const Gsp4Stats& part) {
  into.scanned += part.scanned;
  into.order += part.order;
  into.alpha += part.alpha;
  into.beta += part.beta;
  into.gamma += part.gamma;
  into.trace_zero += part.trace_zero;
  into.trace_zero_reducible += part.trace_zero_reducible;
}

Gsp4Stats run_partitioned(std::uint32_t ell, unsigned threads, std::uint64_t parts,
                          const std::function<void(std::uint64_t, Gsp4Stats&)>& work) {
  threads = std::max(1u, threads);
  std::vector<Gsp4Stats> partial(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint64_t part = t; part < parts; part += threads) work(part, partial[t]);
    });
  }
  for (auto& th : pool) th.join();
  Gsp4Stats total;
  total.ell = ell;
  for (const auto& p : partial) merge(total, p);
  return total;
}

// omega(x, y) = x0 y3 + x1 y2 - x2 y1 - x3 y0 for the standard form.
std::int64_t omega(const std::array<std::uint32_t, 4>& x, const std::array<std::uint32_t, 4>& y) {
  return static_cast<std::int64_t>(x[0]) * y[3] + static_cast<std::int64_t>(x[1]) * y[2] -
         static_cast<std::int64_t>(x[2]) * y[1] - static_cast<std::int64_t>(x[3]) * y[0];
}

std::vector<std::array<std::uint32_t, 4>> all_vectors(std::uint32_t ell) {
  std::vector<std::array<std::uint32_t, 4>> out;
  for (std::uint32_t i = 0; i < ell * ell * ell * ell; ++i) {
    std::uint32_t x = i;
    std::array<std::uint32_t, 4> v{};
    for (auto& c : v) {
      c = x % ell;
      x /= ell;
    }
    out.push_back(v);
  }
  return out;
}

Mat4 from_columns(const std::array<std::array<std::uint32_t, 4>, 4>& cols) {
  Mat4 m{};
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) m[r * 4 + c] = cols[c][r];
  return m;
}

}  // namespace

Gsp4Stats enumerate_gsp4_f3(unsigned threads) {
  constexpr std::uint32_t ell = 3;
  const auto vecs = all_vectors(ell);  // 81 columns
  std::array<std::array<std::uint8_t, 81>, 81> w{};
  for (int i = 0; i < 81; ++i)
    for (int j = 0; j < 81; ++j) w[i][j] = static_cast<std::uint8_t>(from_int(omega(vecs[i], vecs[j]), ell));
  const QuarticTable table(ell);
  const GammaSets gamma(ell);
  // One part per (c3, c2) pair: 81^2 parts of 81^2 matrices each.
  return run_partitioned(ell, threads, 81 * 81, [&](std::uint64_t part, Gsp4Stats& s) {
    const std::size_t c3 = part / 81, c2 = part % 81;
    for (std::size_t c1 = 0; c1 < 81; ++c1)
      for (std::size_t c0 = 0; c0 < 81; ++c0) {
        ++s.scanned;
        const std::uint8_t lambda = w[c0][c3];
        const bool member = lambda != 0 && w[c1][c2] == lambda && w[c0][c1] == 0 && w[c0][c2] == 0 &&
                            w[c1][c3] == 0 && w[c2][c3] == 0;
        if (!member) continue;
        tally(s, from_columns({vecs[c0], vecs[c1], vecs[c2], vecs[c3]}), lambda, table, gamma);
      }
  });
}

Gsp4Stats enumerate_gsp4_by_bases(std::uint32_t ell, unsigned threads) {
  if (ell % 2 == 0 || ell > 13) throw std::invalid_argument("enumeration supports odd ell <= 13");
  const auto vecs = all_vectors(ell);
  const QuarticTable table(ell);
  const GammaSets gamma(ell);
  auto w = [&](const auto& x, const auto& y) { return from_int(omega(x, y), ell); };
  return run_partitioned(ell, threads, vecs.size(), [&](std::uint64_t i1, Gsp4Stats& s) {
    const auto& e1 = vecs[i1];
    if (i1 == 0) return;
    for (const auto& f1 : vecs) {
      if (w(e1, f1) != 1) continue;
      std::vector<std::array<std::uint32_t, 4>> perp;
      for (const auto& v : vecs)
        if (w(e1, v) == 0 && w(f1, v) == 0) perp.push_back(v);
      for (const auto& e2 : perp) {
        if (e2 == std::array<std::uint32_t, 4>{}) continue;
        for (const auto& f2 : perp) {
          if (w(e2, f2) != 1) continue;
          for (std::uint32_t lambda = 1; lambda < ell; ++lambda) {
            std::array<std::uint32_t, 4> sf2{}, sf1{};
            for (int k = 0; k < 4; ++k) {
              sf2[k] = mulm(f2[k], lambda, ell);
              sf1[k] = mulm(f1[k], lambda, ell);
            }
            ++s.scanned;
            tally(s, from_columns({e1, e2, sf2, sf1}), lambda, table, gamma);
          }
        }
      }
    }
  });
}

SymplecticMatrix random_gsp4(std::uint32_t ell, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> coord(0, ell - 1);
  std::uniform_int_distribution<std::uint32_t> unit(1, ell - 1);
  using Vec = std::array<std::uint32_t, 4>;
  auto draw = [&] {
    Vec v;
    for (auto& c : v) c = coord(rng);
    return v;
  };
  auto w = [&](const Vec& x, const Vec& y) { return from_int(omega(x, y), ell); };
  auto combo = [&](const Vec& v, std::uint32_t a, const Vec& x, std::uint32_t b, const Vec& y) {
    Vec r;
    for (int k = 0; k < 4; ++k) r[k] = addm(addm(v[k], mulm(a, x[k], ell), ell), mulm(b, y[k], ell), ell);
    return r;
  };
  auto scaled = [&](const Vec& v, std::uint32_t c) {
    Vec r;
    for (int k = 0; k < 4; ++k) r[k] = mulm(v[k], c, ell);
    return r;
  };
  const Vec zero{};
  for (;;) {
    const Vec e1 = draw();
    if (e1 == zero) continue;
    const Vec v1 = draw();
    const std::uint32_t w1 = w(e1, v1);
    if (w1 == 0) continue;
    const Vec f1 = scaled(v1, inv(w1, ell));
    // Projection onto the complement of span(e1, f1).
    auto project = [&](const Vec& v) { return combo(v, subm(0, w(v, f1), ell), e1, w(v, e1), f1); };
    const Vec e2 = project(draw());
    if (e2 == zero) continue;
    const Vec v2 = project(draw());
    const std::uint32_t w2 = w(e2, v2);
    if (w2 == 0) continue;
    const Vec f2 = scaled(v2, inv(w2, ell));
    const std::uint32_t lambda = unit(rng);
    return {from_columns({e1, e2, scaled(f2, lambda), scaled(f1, lambda)}), lambda};
  }
}

Gsp4Stats sample_gsp4(std::uint32_t ell, std::uint64_t count, std::uint64_t seed, unsigned threads) {
  threads = std::max(1u, threads);
  const QuarticTable table(ell);
  const GammaSets gamma(ell);
  return run_partitioned(ell, threads, threads, [&](std::uint64_t part, Gsp4Stats& s) {
    std::seed_seq seq{seed, part};
    std::mt19937_64 rng(seq);
    const std::uint64_t n = count / threads + (part < count % threads ? 1 : 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto m = random_gsp4(ell, rng);
      ++s.scanned;
      tally(s, m.entries, m.mult, table, gamma);
    }
  });
}

mpq_class alpha_closed_form(std::uint32_t ell) {
  mpq_class l(ell);
  return mpq_class(1, 4) - 1 / (2 * (l * l + 1));
}

mpq_class beta_closed_form(std::uint32_t ell) {
  mpq_class l1(ell - 1);
  return mpq_class(3, 8) - 3 / (4 * l1) + 1 / (2 * l1 * l1);
}

mpq_class gamma_lower_bound(std::uint32_t ell) {
  mpq_class l(ell);
  return 1 - 3 * l / (l * l + 1);
}

namespace {

mpq_class power(const mpq_class& x, std::uint64_t n) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), n);
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

mpq_class failure_probability_bound(std::uint64_t n, std::uint32_t ell) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (ell % 2 == 0) throw std::invalid_argument("ell must be odd");
  return power(1 - alpha_closed_form(ell), n) + power(1 - beta_closed_form(ell), n) +
         power(mpq_class(9, 10), n);
}

}  // namespace g2surj::oracle
