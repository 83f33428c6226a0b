#pragma once

// The Weil restriction V = R_{F_{q^n}/F_q}(C) of a pointless curve C over
// F_{q^n}. V(F_{q^m}) is C(F_{q^m} (x) F_{q^n}) = C(F_{q^lcm})^gcd, so every
// answer comes from C's L-polynomial.
//
// When F_{q^n} is too large to search, the variety is "bullet-backed": the
// curve is not constructed and only two facts are available: empty for
// m | n, nonempty for lcm(m, n) >= 4n.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/hyperell.hpp"
#include "pointless/mpoly.hpp"
#include "pointless/search.hpp"
#include "pointless/serialize.hpp"
#include "pointless/weilres.hpp"
#include "pointless/zeta.hpp"

namespace pointless::testvar {

enum class Backing { certificate, bullets };

inline const char* to_string(Backing b) { return b == Backing::certificate ? "certificate" : "bullets"; }

enum class PointStatus { empty, nonempty, unknown };

inline const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::empty: return "empty";
    case PointStatus::nonempty: return "nonempty";
    case PointStatus::unknown: return "unknown";
  }
  return "?";
}

struct TestVariety {
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  unsigned n = 0;
  Backing backing = Backing::certificate;
  std::optional<search::PointlessCertificate> cert;
  /// Genus of C, or the Becker-Glass genus for a bullet-backed variety.
  BigInt genus;
  /// Lang-Weil threshold of a curve of that genus over F_{q^n}.
  unsigned lang_weil = 0;
  /// Restriction of the affine chart of C, when small enough to enumerate.
  std::optional<weilres::RestrictedSystem> compiled;
};

struct BuildOptions {
  search::SearchOptions search;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  /// Empty disables the cache.
  std::string cache_path;
  /// Fall back to a bullet-backed variety when F_{q^n} cannot be searched.
  bool allow_bullets = true;
  bool compile = true;
};

struct BuildInfo {
  bool from_cache = false;
  std::size_t cache_rejected = 0;
};

namespace detail {

inline TestVariety bullet_variety(std::uint64_t q, std::uint64_t p, unsigned n) {
  TestVariety v;
  v.q = q;
  v.p = p;
  v.n = n;
  v.backing = Backing::bullets;
  const BigInt big_q = ipow(BigInt(q), n);
  v.genus = search::becker_glass_genus(big_q, p);
  v.lang_weil = zeta::lang_weil_threshold(big_q, v.genus);
  if (v.lang_weil > 4) {
    throw Error(Errc::invalid_argument, "Lang-Weil threshold " + std::to_string(v.lang_weil) + " exceeds 4 over F_" +
                                            big_q.str() + "; the second bullet is not guaranteed");
  }
  return v;
}

// find_pointless_auto with every genus looked up in the cache first.
inline search::PointlessCertificate cached_search(std::uint64_t big_q, std::uint64_t p, const BuildOptions& opts,
                                                  BuildInfo& info) {
  std::optional<io::CurveCache> cache;
  if (!opts.cache_path.empty()) cache.emplace(opts.cache_path, opts.search.count_cap);
  std::vector<unsigned> genera;
  unsigned g = search::becker_glass_genus(big_q, p);
  for (unsigned i = 0; i <= opts.search.max_fallbacks; ++i, g += static_cast<unsigned>(p)) genera.push_back(g);
  if (cache) {
    const auto entries = cache->load();
    info.cache_rejected = cache->rejected();
    for (unsigned gg : genera) {
      for (const auto& c : entries) {
        if (c.curve.q() == big_q && c.curve.genus() == gg) {
          info.from_cache = true;
          return c;
        }
      }
    }
  }
  std::vector<unsigned> tried;
  for (std::size_t i = 0; i < genera.size(); ++i) {
    tried.push_back(genera[i]);
    try {
      auto cert = search::find_pointless(big_q, genera[i], opts.search);
      cert.genera_tried = tried;
      if (cache) cache->store(cert);
      return cert;
    } catch (const BudgetExhausted& e) {
      if (!e.space_exhausted() || i + 1 == genera.size()) throw;
    }
  }
  throw Error(Errc::invalid_argument, "no genus to try");
}

}  // namespace detail

/// V for (q, n): a pointless curve over F_{q^n} from the cache or a fresh
/// search, or the bullet-backed fallback when F_{q^n} is out of reach.
inline TestVariety build_test_variety(std::uint64_t q, unsigned n, const BuildOptions& opts = {},
                                      BuildInfo* info_out = nullptr) {
  const auto pk = gf::prime_power(q);
  if (!pk) throw Error(Errc::invalid_argument, std::to_string(q) + " is not a prime power");
  if (n == 0) throw Error(Errc::invalid_argument, "n must be positive");
  if (opts.search.budget == 0) throw BudgetExhausted(false, 0, "search budget is zero");
  const std::uint64_t p = pk->first;
  BuildInfo info;

  const auto big = gf::checked_field_size(p, pk->second * n);
  std::optional<search::PointlessCertificate> cert;
  if (big) {
    try {
      cert = detail::cached_search(*big, p, opts, info);
    } catch (const Error& e) {
      if (e.code() != Errc::size_cap_exceeded || !opts.allow_bullets) throw;
    }
  } else if (!opts.allow_bullets) {
    throw Error(Errc::size_cap_exceeded, "F_" + std::to_string(q) + "^" + std::to_string(n) + " exceeds the field cap");
  }
  if (info_out) *info_out = info;
  if (!cert) return detail::bullet_variety(q, p, n);

  TestVariety v;
  v.q = q;
  v.p = p;
  v.n = n;
  v.backing = Backing::certificate;
  v.genus = cert->curve.genus();
  v.lang_weil = zeta::lang_weil_threshold(cert->l_poly.q, v.genus);
  if (opts.compile) {
    const BigInt space = ipow(BigInt(q), 2 * std::uint64_t{n});
    if (space <= opts.enumeration_cap) v.compiled = weilres::restrict(weilres::curve_chart(cert->curve), n);
  }
  v.cert = std::move(cert);
  return v;
}

/// |C(F_{q^{n e}})| from the L-polynomial.
inline BigInt curve_count(const TestVariety& v, unsigned e) {
  if (!v.cert) throw Error(Errc::undetermined, "bullet-backed variety has no curve");
  return zeta::counts_from_l(v.cert->l_poly, e);
}

/// |V(F_{q^m})| = N_C(lcm(m,n)/n)^gcd(m,n).
inline BigInt count(const TestVariety& v, unsigned m) {
  if (m == 0) throw Error(Errc::invalid_argument, "m must be positive");
  const auto ts = gf::tensor_split(m, v.n);
  return ipow(curve_count(v, static_cast<unsigned>(ts.lcm_degree / v.n)), ts.copies);
}

inline PointStatus point_status(const TestVariety& v, unsigned m) {
  if (m == 0) throw Error(Errc::invalid_argument, "m must be positive");
  if (v.cert) return count(v, m) > 0 ? PointStatus::nonempty : PointStatus::empty;
  const std::uint64_t l = std::lcm(std::uint64_t{m}, std::uint64_t{v.n});
  if (l == v.n) return PointStatus::empty;
  if (l >= 4 * std::uint64_t{v.n}) return PointStatus::nonempty;
  return PointStatus::unknown;
}

/// Whether V(F_{q^m}) is nonempty; Undetermined in the gap of a bullet-backed variety.
inline bool has_point(const TestVariety& v, unsigned m) {
  const PointStatus s = point_status(v, m);
  if (s == PointStatus::unknown) {
    throw Error(Errc::undetermined, "V(F_q^" + std::to_string(m) + ") is not determined without a curve");
  }
  return s == PointStatus::nonempty;
}

struct CrossCheck {
  unsigned m = 0;
  /// (N_C(e) - points at infinity)^gcd with e = lcm(m,n)/n.
  BigInt expected;
  BigInt enumerated;
};

struct SmoothCheck {
  unsigned m = 0;
  std::size_t points = 0;
  bool smooth = true;
};

struct Prop21Report {
  std::uint64_t q = 0;
  unsigned n = 0;
  unsigned m_max = 0;
  Backing backing = Backing::certificate;
  std::vector<unsigned> bullet1;
  std::vector<unsigned> bullet2;
  std::vector<std::pair<unsigned, PointStatus>> gap;
  std::vector<CrossCheck> cross_checks;
  std::optional<SmoothCheck> smoothness;
};

/// Asserts both bullets for every m <= m_max, records the gap, and compares
/// the L-polynomial oracle with enumeration of the compiled chart wherever
/// 2 q^{2nm} <= cap.
inline Prop21Report verify_prop21(const TestVariety& v, unsigned m_max, std::uint64_t cap = kDefaultEnumerationCap,
                                  std::size_t smooth_points = 8) {
  if (m_max < 4 * v.n) {
    throw Error(Errc::invalid_argument, "m_max must be at least 4n = " + std::to_string(4 * v.n));
  }
  Prop21Report r;
  r.q = v.q;
  r.n = v.n;
  r.m_max = m_max;
  r.backing = v.backing;
  for (unsigned m = 1; m <= m_max; ++m) {
    const PointStatus s = point_status(v, m);
    if (v.n % m == 0) {
      if (s != PointStatus::empty) {
        throw AssertionFailed(m, "bullet 1 fails: V(F_q^" + std::to_string(m) + ") is not empty although m | n");
      }
      r.bullet1.push_back(m);
    } else if (std::lcm(m, v.n) >= 4 * v.n) {
      if (s != PointStatus::nonempty) {
        throw AssertionFailed(m, "bullet 2 fails: V(F_q^" + std::to_string(m) + ") is empty although lcm(m,n) >= 4n");
      }
      r.bullet2.push_back(m);
    } else {
      r.gap.emplace_back(m, s);
    }
  }
  if (!v.compiled) return r;
  const hyperell::Curve& c = v.cert->curve;
  for (unsigned m = 1; m <= m_max; ++m) {
    if (2 * ipow(BigInt(v.q), std::uint64_t{2} * v.n * m) > cap) break;
    const auto ts = gf::tensor_split(m, v.n);
    const auto e = static_cast<unsigned>(ts.lcm_degree / v.n);
    const BigInt affine = curve_count(v, e) - hyperell::infinity_points(c, e);
    CrossCheck cc{m, ipow(affine, ts.copies), count_solutions(v.compiled->target, m, cap)};
    if (cc.expected != cc.enumerated) {
      throw AssertionFailed(m, "compiled restriction has " + cc.enumerated.str() + " points over F_q^" +
                                   std::to_string(m) + ", the L-polynomial predicts " + cc.expected.str());
    }
    const bool has_points = cc.expected > 0;
    r.cross_checks.push_back(std::move(cc));
    if (!r.smoothness && has_points) {
      const auto pts = find_solutions(v.compiled->target, m, smooth_points, cap);
      SmoothCheck sc{m, pts.size(), true};
      for (const auto& pt : pts) sc.smooth = sc.smooth && weilres::jacobian_smooth_at(v.compiled->target, pt, v.n);
      if (!sc.smooth) throw AssertionFailed(m, "compiled restriction is singular at a rational point");
      r.smoothness = sc;
    }
  }
  return r;
}

inline io::json to_json(const TestVariety& v) {
  io::json j = {{"q", v.q},
                {"n", v.n},
                {"p", v.p},
                {"backing", to_string(v.backing)},
                {"genus", v.genus.str()},
                {"lang_weil_threshold", v.lang_weil}};
  j["certificate"] = v.cert ? io::certificate_to_json(*v.cert) : io::json(nullptr);
  if (v.compiled) {
    j["compiled"] = {{"num_vars", v.compiled->target.num_vars()},
                     {"num_equations", v.compiled->target.equations.size()},
                     {"variables", v.compiled->target.var_names}};
  } else {
    j["compiled"] = nullptr;
  }
  return j;
}

inline io::json to_json(const Prop21Report& r) {
  io::json gap = io::json::array();
  for (const auto& [m, s] : r.gap) gap.push_back({{"m", m}, {"status", to_string(s)}});
  io::json cross = io::json::array();
  for (const auto& c : r.cross_checks) {
    cross.push_back({{"m", c.m}, {"expected", c.expected.str()}, {"enumerated", c.enumerated.str()}});
  }
  io::json j = {{"q", r.q},         {"n", r.n},           {"m_max", r.m_max}, {"backing", to_string(r.backing)},
                {"bullet1", r.bullet1}, {"bullet2", r.bullet2}, {"gap", gap},        {"cross_checks", cross}};
  if (r.smoothness) {
    j["smoothness"] = {{"m", r.smoothness->m}, {"points", r.smoothness->points}, {"smooth", r.smoothness->smooth}};
  } else {
    j["smoothness"] = nullptr;
  }
  j["passed"] = true;
  return j;
}

}  // namespace pointless::testvar
