#pragma once

// Search for pointless hyperelliptic curves and their certificates.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/hyperell.hpp"
#include "pointless/zeta.hpp"

namespace pointless::search {

using gf::Elem;
using gf::FieldRef;
using gf::UniPoly;

inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ULL;
/// Spaces with at most this many candidates are scanned exhaustively.
inline constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 24;
/// Least verified horizon of a certificate.
inline constexpr unsigned kMinHorizon = 8;

enum class SearchMode { automatic, exhaustive, randomized };

inline const char* to_string(SearchMode m) {
  switch (m) {
    case SearchMode::automatic: return "automatic";
    case SearchMode::exhaustive: return "exhaustive";
    case SearchMode::randomized: return "randomized";
  }
  return "?";
}

struct SearchOptions {
  std::uint64_t budget = 1'000'000;
  SearchMode mode = SearchMode::automatic;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  std::uint64_t count_cap = hyperell::kDefaultCountCap;
  /// Number of genus increments by p tried after an exhausted genus.
  unsigned max_fallbacks = 4;
};

struct SearchStats {
  std::uint64_t candidates_examined = 0;
  double elapsed_seconds = 0.0;
};

struct PointlessCertificate {
  hyperell::Curve curve;
  zeta::LPoly l_poly;
  /// N_e > 0 has been checked for every 4 <= e <= verified_horizon.
  unsigned verified_horizon = 0;
  SearchStats stats;
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t seed = kDefaultSeed;
  /// Genera attempted, in order; the last one is the curve's genus.
  std::vector<unsigned> genera_tried;
};

/// Least g > (q-3)/2 with g = -1 mod p.
inline unsigned becker_glass_genus(std::uint64_t q, std::uint64_t p) {
  // 2g > q - 3  <=>  2g >= q - 2
  std::uint64_t g = q >= 2 ? (q - 2 + 1) / 2 : 0;
  while (g % p != p - 1) ++g;
  return static_cast<unsigned>(g);
}

/// becker_glass_genus for fields too large to build.
inline BigInt becker_glass_genus(const BigInt& q, std::uint64_t p) {
  BigInt g = q >= 2 ? BigInt((q - 1) / 2) : BigInt(0);
  const BigInt r = g % p;
  g += (BigInt(p - 1) - r + p) % p;
  return g;
}

/// Horizon up to which N_e > 0 is checked: at least kMinHorizon and at least
/// the Lang-Weil threshold, so positivity is then known for every e >= 4.
inline unsigned certificate_horizon(const BigInt& q, unsigned g) {
  return std::max(kMinHorizon, zeta::lang_weil_threshold(q, g));
}

struct CertificateCheck {
  bool ok = false;
  std::string reason;
};

/// Re-derives every certificate invariant from the curve: N_1 = 0 by brute
/// force, the L-polynomial from brute-force N_1..N_g, the functional equation,
/// Hasse-Weil for m <= 12 and N_e > 0 for 4 <= e <= horizon.
inline CertificateCheck check_certificate(const PointlessCertificate& cert,
                                          std::uint64_t count_cap = hyperell::kDefaultCountCap) {
  const auto& c = cert.curve;
  const BigInt q = c.q();
  if (hyperell::count_points(c, 1, {count_cap, 1}) != 0) return {false, "curve has F_q-rational points"};
  std::vector<BigInt> counts{0};
  for (unsigned m = 2; m <= c.genus(); ++m) counts.emplace_back(hyperell::count_points(c, m, {count_cap, 1}));
  if (zeta::l_from_counts(q, c.genus(), counts) != cert.l_poly) return {false, "L-polynomial does not match counts"};
  if (!zeta::functional_equation_ok(cert.l_poly)) return {false, "functional equation fails"};
  for (unsigned m = 1; m <= 12; ++m) {
    if (!zeta::hasse_weil_ok(q, c.genus(), m, zeta::counts_from_l(cert.l_poly, m))) {
      return {false, "Hasse-Weil fails at m = " + std::to_string(m)};
    }
  }
  if (cert.verified_horizon < certificate_horizon(q, c.genus())) return {false, "verified horizon too small"};
  for (unsigned e = 4; e <= cert.verified_horizon; ++e) {
    if (zeta::counts_from_l(cert.l_poly, e) == 0) return {false, "no points over degree " + std::to_string(e)};
  }
  return {true, ""};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

class CandidateSpace {
 public:
  CandidateSpace(FieldRef base, unsigned g) : base_(std::move(base)), g_(g) {
    h_len_ = base_->characteristic() == 2 ? g + 2 : 0;
    f_len_ = 2 * g + 3;
    size_ = ipow(base_->size(), h_len_ + f_len_);
  }

  const BigInt& size() const noexcept { return size_; }

  /// Coefficient digits of candidate `index` in the exhaustive order: the
  /// index written in base q, least significant digit first, h before f.
  std::vector<Elem> exhaustive_digits(std::uint64_t index) const {
    std::vector<Elem> d(h_len_ + f_len_);
    const std::uint64_t q = base_->size();
    for (auto& e : d) {
      e = Elem{index % q};
      index /= q;
    }
    return d;
  }

  std::vector<Elem> random_digits(std::uint64_t seed, std::uint64_t index) const {
    std::uint64_t state = seed ^ (index * 0xd1b54a32d192ed03ULL);
    std::vector<Elem> d(h_len_ + f_len_);
    const std::uint64_t q = base_->size();
    for (auto& e : d) e = Elem{splitmix64(state) % q};
    return d;
  }

  std::pair<UniPoly, UniPoly> polys(const std::vector<Elem>& digits) const {
    std::vector<Elem> h(digits.begin(), digits.begin() + h_len_);
    std::vector<Elem> f(digits.begin() + h_len_, digits.end());
    return {UniPoly(base_, std::move(h)), UniPoly(base_, std::move(f))};
  }

  /// Cheap filter: no F_q-rational point, at infinity or above any x.
  bool fibres_empty(const std::vector<Elem>& digits) const {
    const gf::Field& F = *base_;
    const Elem h_inf = h_len_ ? digits[h_len_ - 1] : Elem{0};
    const Elem f_inf = digits.back();
    if (gf::solve_quadratic_count(F, h_inf, f_inf) != 0) return false;
    for (std::uint64_t x = 0; x < F.size(); ++x) {
      Elem hx{0}, fx{0};
      for (std::size_t i = h_len_; i-- > 0;) hx = F.add(F.mul(hx, Elem{x}), digits[i]);
      for (std::size_t i = digits.size(); i-- > h_len_;) fx = F.add(F.mul(fx, Elem{x}), digits[i]);
      if (gf::solve_quadratic_count(F, hx, fx) != 0) return false;
    }
    return true;
  }

 private:
  FieldRef base_;
  unsigned g_;
  unsigned h_len_;
  unsigned f_len_;
  BigInt size_;
};

/// Full test of one candidate; returns the certificate on success.
inline std::optional<PointlessCertificate> try_candidate(const FieldRef& base, unsigned g, const CandidateSpace& space,
                                                         const std::vector<Elem>& digits,
                                                         const SearchOptions& opts) {
  if (!space.fibres_empty(digits)) return std::nullopt;
  auto [h, f] = space.polys(digits);
  if (!hyperell::is_nonsingular(base, g, h, f).nonsingular) return std::nullopt;
  const hyperell::Curve curve = hyperell::new_curve(base, g, std::move(h), std::move(f));
  std::vector<BigInt> counts{0};
  for (unsigned m = 2; m <= g; ++m) counts.emplace_back(hyperell::count_points(curve, m, {opts.count_cap, 1}));
  const BigInt q = base->size();
  zeta::LPoly l = zeta::l_from_counts(q, g, counts);
  const unsigned horizon = certificate_horizon(q, g);
  for (unsigned e = 4; e <= horizon; ++e) {
    if (zeta::counts_from_l(l, e) == 0) return std::nullopt;
  }
  PointlessCertificate cert{curve, std::move(l), horizon, {}, SearchMode::exhaustive, opts.seed, {g}};
  return cert;
}

}  // namespace detail

/// Searches genus-g models y^2 + h y = f over F_q with no F_q-point. Odd
/// characteristic uses h = 0 (every model is isomorphic to one of those).
/// Candidates are scanned in a fixed order; the lowest-index success wins, so
/// results do not depend on opts.jobs.
inline PointlessCertificate find_pointless(std::uint64_t q, unsigned g, const SearchOptions& opts = {}) {
  const auto pk = gf::prime_power(q);
  if (!pk) throw Error(Errc::invalid_argument, std::to_string(q) + " is not a prime power");
  if (g == 0) throw Error(Errc::invalid_argument, "genus must be at least 1");
  const FieldRef base = gf::make_field(pk->first, pk->second);
  const auto cap_check = gf::checked_field_size(pk->first, pk->second * g);
  if (!cap_check || *cap_check > opts.count_cap) {
    throw Error(Errc::size_cap_exceeded, "certifying genus " + std::to_string(g) + " over F_" + std::to_string(q) +
                                             " needs counts over F_q^g beyond the counting cap");
  }
  const auto start = std::chrono::steady_clock::now();
  const detail::CandidateSpace space(base, g);
  SearchMode mode = opts.mode;
  if (mode == SearchMode::automatic) {
    mode = space.size() <= kExhaustiveLimit ? SearchMode::exhaustive : SearchMode::randomized;
  }
  std::uint64_t limit = opts.budget;
  bool covers_space = false;
  if (mode == SearchMode::exhaustive && space.size() <= opts.budget) {
    limit = static_cast<std::uint64_t>(space.size());
    covers_space = true;
  }

  constexpr std::uint64_t kBlock = 4096;
  std::atomic<std::uint64_t> next_block{0};
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  std::mutex mu;
  std::optional<PointlessCertificate> found;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      while (true) {
        const std::uint64_t b = next_block.fetch_add(1);
        const std::uint64_t begin = b * kBlock;
        if (begin >= limit || begin > best.load()) return;
        const std::uint64_t end = std::min(limit, begin + kBlock);
        for (std::uint64_t i = begin; i < end && i < best.load(); ++i) {
          const auto digits =
              mode == SearchMode::exhaustive ? space.exhaustive_digits(i) : space.random_digits(opts.seed, i);
          if (auto cert = detail::try_candidate(base, g, space, digits, opts)) {
            std::lock_guard lock(mu);
            if (i < best.load()) {
              best.store(i);
              found = std::move(cert);
            }
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      best.store(0);
    }
  };
  const unsigned jobs = std::max(1U, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!found) {
    const std::string what = covers_space
                                 ? "space exhausted at g=" + std::to_string(g) + ": no pointless genus-" +
                                       std::to_string(g) + " model over F_" + std::to_string(q)
                                 : "budget of " + std::to_string(limit) + " candidates exhausted at g=" +
                                       std::to_string(g) + " without a pointless model";
    throw BudgetExhausted(covers_space, g, what);
  }
  found->mode = mode;
  found->seed = opts.seed;
  found->stats = {best.load() + 1, elapsed};
  return std::move(*found);
}

/// find_pointless at the Becker-Glass genus, falling back to g + p, g + 2p, ...
/// whenever a genus is exhausted without success.
inline PointlessCertificate find_pointless_auto(std::uint64_t q, std::uint64_t p, const SearchOptions& opts = {}) {
  unsigned g = becker_glass_genus(q, p);
  std::vector<unsigned> tried;
  for (unsigned attempt = 0;; ++attempt) {
    tried.push_back(g);
    try {
      PointlessCertificate cert = find_pointless(q, g, opts);
      cert.genera_tried = tried;
      return cert;
    } catch (const BudgetExhausted& e) {
      if (!e.space_exhausted() || attempt >= opts.max_fallbacks) throw;
    }
    g += static_cast<unsigned>(p);
  }
}

}  // namespace pointless::search
