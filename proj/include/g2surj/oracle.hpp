#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace g2surj::oracle {

/// 4x4 matrix over F_ell, row-major.
using Mat4 = std::array<std::uint32_t, 16>;

Mat4 identity();
Mat4 multiply(const Mat4& a, const Mat4& b, std::uint32_t ell);
Mat4 transpose(const Mat4& a);
Mat4 scale(const Mat4& a, std::uint32_t c, std::uint32_t ell);
std::uint32_t determinant(const Mat4& a, std::uint32_t ell);
std::optional<Mat4> inverse(const Mat4& a, std::uint32_t ell);

/// Representative of the scalar class: first nonzero entry scaled to 1.
Mat4 canonical(const Mat4& a, std::uint32_t ell);

/// The fixed enumeration form: antidiagonal with J[0][3] = J[1][2] = 1.
Mat4 standard_form(std::uint32_t ell);

struct SymplecticMatrix {
  Mat4 entries;
  std::uint32_t mult;
};

/// If M^T J M = lambda J with lambda != 0, returns lambda.
std::optional<std::uint32_t> similitude_factor(const Mat4& m, const Mat4& form, std::uint32_t ell);

/// Common skew form preserved up to scalars by every generator.
/// Throws NoCommonForm (solution set not a single line) or DegenerateForm.
Mat4 invariant_form(const std::vector<Mat4>& generators, std::uint32_t ell);

/// Closure modulo scalars, elements in canonical form. Throws
/// std::runtime_error past `cap` elements.
std::vector<Mat4> generate_projective_group(const std::vector<Mat4>& generators, std::uint32_t ell,
                                            std::size_t cap = 1000000);

using ProjectivePoint = std::pair<std::uint32_t, std::uint32_t>;

/// {(tr^2/mult, mid/mult)} over the group.
std::set<ProjectivePoint> compute_c_set(const std::vector<Mat4>& group, const Mat4& form,
                                        std::uint32_t ell);

/// Integer pairs reduced into F_ell.
std::set<ProjectivePoint> reduce_pairs(const std::vector<std::pair<int, int>>& pairs, std::uint32_t ell);

enum class ExceptionalRow { G1920Mod8Is5, G1920Mod8Is3, G720Mod12Is7, G720Mod12Is5, G5040 };

/// The row of the generator table that applies to a group type at ell, if any.
std::optional<ExceptionalRow> row_1920(std::uint32_t ell);
std::optional<ExceptionalRow> row_720(std::uint32_t ell);

/// Generators of an exceptional subgroup. The row parameter is a root of
/// its defining quadratic; root_index 0 picks the least residue, 1 the other.
/// Returns nothing if the quadratic has no root mod ell.
std::optional<std::vector<Mat4>> exceptional_generators(ExceptionalRow row, std::uint32_t ell,
                                                        int root_index = 0);

/// Charpoly t^4 - e1 t^3 + e2 t^2 - e3 t + e4 as {e1, e2, e3, e4}.
std::array<std::uint32_t, 4> charpoly(const Mat4& m, std::uint32_t ell);

/// Irreducibility / simple-root lookup for every monic quartic over F_ell,
/// built by multiplying out all reducible products.
class QuarticTable {
 public:
  explicit QuarticTable(std::uint32_t ell);
  bool irreducible(const std::array<std::uint32_t, 4>& e) const;
  bool simple_root(const std::array<std::uint32_t, 4>& e) const;

 private:
  std::size_t index(const std::array<std::uint32_t, 4>& e) const;
  std::uint32_t ell_;
  std::vector<std::uint8_t> reducible_;
  std::vector<std::uint8_t> simple_root_;
};

struct Gsp4Stats {
  std::uint32_t ell = 0;
  std::uint64_t scanned = 0;
  std::uint64_t order = 0;
  std::uint64_t alpha = 0;  // irreducible charpoly
  std::uint64_t beta = 0;   // nonzero trace and a simple linear factor
  std::uint64_t gamma = 0;  // outside every applicable exceptional set
  std::uint64_t trace_zero = 0;
  std::uint64_t trace_zero_reducible = 0;
};

/// Filters all 3^16 matrices over F_3.
Gsp4Stats enumerate_gsp4_f3(unsigned threads);

/// Walks every symplectic basis and similitude factor.
Gsp4Stats enumerate_gsp4_by_bases(std::uint32_t ell, unsigned threads);

/// Uniform element of GSp_4(F_ell) for the standard form.
SymplecticMatrix random_gsp4(std::uint32_t ell, std::mt19937_64& rng);

/// `count` samples split over `threads` streams seeded from `seed`.
Gsp4Stats sample_gsp4(std::uint32_t ell, std::uint64_t count, std::uint64_t seed, unsigned threads);

mpq_class alpha_closed_form(std::uint32_t ell);
mpq_class beta_closed_form(std::uint32_t ell);
/// 1 - 3 ell / (ell^2 + 1), the lower bound for gamma.
mpq_class gamma_lower_bound(std::uint32_t ell);

/// (1 - alpha)^n + (1 - beta)^n + (9/10)^n.
mpq_class failure_probability_bound(std::uint64_t n, std::uint32_t ell);

}  // namespace g2surj::oracle
