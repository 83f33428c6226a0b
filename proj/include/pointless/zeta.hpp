#pragma once

// Zeta-function bookkeeping for curves over F_q.
//
// L(T) = sum a_i T^i = prod (1 - alpha_i T) over the 2g reciprocal roots. The
// roots are never materialised: everything runs through the power sums
// S_m = sum alpha_i^m = q^m + 1 - N_m and Newton's identities, in exact
// integers.

#include <cstdint>
#include <string>
#include <vector>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"

namespace pointless::zeta {

/// Numerator of the zeta function of a genus-g curve over F_q.
struct LPoly {
  BigInt q;
  unsigned genus = 0;
  std::vector<BigInt> coeffs;  // a_0 .. a_{2g}

  friend bool operator==(const LPoly&, const LPoly&) = default;

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0 && i != 0) continue;
      std::string term = coeffs[i].str();
      if (i > 0) term += "*T" + (i > 1 ? "^" + std::to_string(i) : std::string());
      if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
      else s = term;
    }
    return s;
  }
};

/// (N - (q^m + 1))^2 <= 4 g^2 q^m.
inline bool hasse_weil_ok(const BigInt& q, unsigned g, unsigned m, const BigInt& n) {
  const BigInt qm = ipow(q, m);
  const BigInt dev = n - (qm + 1);
  return dev * dev <= 4 * BigInt(g) * g * qm;
}

/// a_{2g-i} = q^{g-i} a_i for all 0 <= i <= g.
inline bool functional_equation_ok(const LPoly& l) {
  if (l.coeffs.size() != 2 * static_cast<std::size_t>(l.genus) + 1) return false;
  if (l.coeffs[0] != 1) return false;
  for (unsigned i = 0; i <= l.genus; ++i) {
    if (l.coeffs[2 * l.genus - i] != ipow(l.q, l.genus - i) * l.coeffs[i]) return false;
  }
  return true;
}

/// Power sums S_1..S_count of the reciprocal roots of L.
inline std::vector<BigInt> power_sums(const LPoly& l, unsigned count) {
  std::vector<BigInt> s(count + 1, 0);
  const auto a = [&](unsigned i) -> BigInt { return i < l.coeffs.size() ? l.coeffs[i] : BigInt(0); };
  for (unsigned m = 1; m <= count; ++m) {
    // S_m + a_1 S_{m-1} + ... + a_{m-1} S_1 + m a_m = 0
    BigInt acc = BigInt(m) * a(m);
    for (unsigned i = 1; i < m; ++i) acc += a(i) * s[m - i];
    s[m] = -acc;
  }
  return s;
}

/// N_m = q^m + 1 - S_m.
inline BigInt counts_from_l(const LPoly& l, unsigned m) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  const BigInt n = ipow(l.q, m) + 1 - power_sums(l, m)[m];
  if (n < 0) throw Error(Errc::negative_count, "L-polynomial yields N_" + std::to_string(m) + " = " + n.str());
  return n;
}

/// Recovers L from N_1..N_g. Each S_m is checked against the Weil bound and
/// every Newton step must divide exactly.
inline LPoly l_from_counts(const BigInt& q, unsigned g, const std::vector<BigInt>& counts) {
  if (counts.size() != g) {
    throw Error(Errc::invalid_argument,
                "expected " + std::to_string(g) + " point counts, got " + std::to_string(counts.size()));
  }
  std::vector<BigInt> s(g + 1, 0);
  for (unsigned m = 1; m <= g; ++m) {
    if (counts[m - 1] < 0) throw Error(Errc::inconsistent_counts, "negative point count");
    s[m] = ipow(q, m) + 1 - counts[m - 1];
    if (!hasse_weil_ok(q, g, m, counts[m - 1])) {
      throw Error(Errc::inconsistent_counts,
                  "N_" + std::to_string(m) + " = " + counts[m - 1].str() + " violates the Weil bound");
    }
  }
  // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} S_i
  std::vector<BigInt> e(g + 1, 0);
  e[0] = 1;
  for (unsigned k = 1; k <= g; ++k) {
    BigInt acc = 0;
    for (unsigned i = 1; i <= k; ++i) {
      const BigInt term = e[k - i] * s[i];
      if (i % 2 == 1) acc += term;
      else acc -= term;
    }
    if (acc % k != 0) {
      throw Error(Errc::inconsistent_counts, "Newton step " + std::to_string(k) + " is not integral");
    }
    e[k] = acc / k;
  }
  LPoly l{q, g, std::vector<BigInt>(2 * g + 1, 0)};
  for (unsigned i = 0; i <= g; ++i) l.coeffs[i] = (i % 2 == 0) ? e[i] : BigInt(-e[i]);
  for (unsigned i = 0; i < g; ++i) l.coeffs[2 * g - i] = ipow(q, g - i) * l.coeffs[i];
  return l;
}

/// Least m0 >= 1 with q^m + 1 - 2g q^{m/2} > 0 for every m >= m0, i.e. with
/// (q^m + 1)^2 > 4 g^2 q^m. The left side minus the right grows with m, so the
/// first m satisfying the inequality is the threshold.
inline unsigned lang_weil_threshold(const BigInt& q, const BigInt& g) {
  for (unsigned m = 1;; ++m) {
    const BigInt qm = ipow(q, m);
    if ((qm + 1) * (qm + 1) > 4 * g * g * qm) return m;
  }
}

}  // namespace pointless::zeta
