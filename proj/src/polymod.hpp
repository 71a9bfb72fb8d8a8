#pragma once

// Dense polynomials over F_p (p < 2^32), ascending coefficients, used for
// distinct-degree factorization of small-degree polynomials.

#include <cstdint>
#include <vector>

namespace g2surj::detail {

using PolyMod = std::vector<std::uint64_t>;

void trim(PolyMod& a);
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p);
PolyMod make_monic(PolyMod a, std::uint64_t p);
PolyMod sub(PolyMod a, const PolyMod& b, std::uint64_t p);
PolyMod mul(const PolyMod& a, const PolyMod& b, std::uint64_t p);
/// Quotient and remainder; b nonzero.
void divmod(const PolyMod& a, const PolyMod& b, std::uint64_t p, PolyMod& q, PolyMod& r);
PolyMod rem(const PolyMod& a, const PolyMod& b, std::uint64_t p);
PolyMod gcd(PolyMod a, PolyMod b, std::uint64_t p);
PolyMod derivative(const PolyMod& a, std::uint64_t p);
/// base^e mod m.
PolyMod powmod(PolyMod base, std::uint64_t e, const PolyMod& m, std::uint64_t p);

/// Degrees of the irreducible factors of a squarefree polynomial, ascending.
std::vector<int> factor_degrees(const PolyMod& f, std::uint64_t p);

}  // namespace g2surj::detail
