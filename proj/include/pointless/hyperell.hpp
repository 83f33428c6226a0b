#pragma once

// Hyperelliptic curves y^2 + h(x) y = f(x) over F_q, in every characteristic.
//
// The smooth projective model is glued from two affine charts: the one above
// and, at infinity, v^2 + h~(u) v = f~(u) with h~(u) = u^{g+1} h(1/u) and
// f~(u) = u^{2g+2} f(1/u).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/parallel.hpp"
#include "pointless/unipoly.hpp"

namespace pointless::hyperell {

using gf::Elem;
using gf::FieldRef;
using gf::UniPoly;

/// Default limit on q^m for brute-force counting.
inline constexpr std::uint64_t kDefaultCountCap = std::uint64_t{1} << 22;

struct NonsingularityCheck {
  bool nonsingular = false;
  /// Chart on which a singularity was detected ("affine" or "infinity").
  std::string chart;
  /// Packed coordinate (x on the affine chart, u at infinity) of an
  /// F_q-rational singular point, when one exists.
  std::optional<std::uint64_t> witness;
};

namespace detail {

inline std::optional<std::uint64_t> rational_root(const UniPoly& a) {
  if (a.is_zero()) return 0;
  const auto roots = gf::roots_in_field(a);
  if (roots.empty()) return std::nullopt;
  return roots.front().v;
}

// Singular locus of one chart, as the polynomial whose roots are the
// x-coordinates of singular points. Constant nonzero means smooth.
inline UniPoly singular_locus(const UniPoly& h, const UniPoly& f) {
  const gf::Field& F = *f.field();
  if (F.characteristic() != 2) {
    const UniPoly disc = h * h + f.scale(F.from_int(4));
    if (disc.is_zero()) return disc;
    return gf::poly_gcd(disc, gf::poly_derivative(disc));
  }
  // y-partial is h(x); x-partial is h'(x) y - f'(x); y^2 = f(x) when h(x) = 0.
  const UniPoly df = gf::poly_derivative(f);
  const UniPoly dh = gf::poly_derivative(h);
  return gf::poly_gcd(h, df * df + dh * dh * f);
}

}  // namespace detail

/// Smoothness of both charts. Odd characteristic: h^2 + 4f (and its reversal
/// in a window of 2g+3 slots) must be squarefree. Characteristic 2:
/// gcd(h, f'^2 + h'^2 f) = 1 on each chart; h = 0 is always singular.
inline NonsingularityCheck is_nonsingular(const FieldRef& base, unsigned g, const UniPoly& h, const UniPoly& f) {
  if (!(*h.field() == *base) || !(*f.field() == *base)) {
    throw Error(Errc::field_mismatch, "curve polynomials must live over the base field");
  }
  if (h.degree() > static_cast<std::ptrdiff_t>(g) + 1 || f.degree() > 2 * static_cast<std::ptrdiff_t>(g) + 2) {
    throw Error(Errc::degree_bound_violated, "deg h <= g+1 and deg f <= 2g+2 required");
  }
  NonsingularityCheck out;
  if (base->characteristic() == 2 && h.is_zero()) {
    out.chart = "affine";
    out.witness = detail::rational_root(gf::poly_derivative(f));
    return out;
  }
  const UniPoly affine = detail::singular_locus(h, f);
  if (affine.degree() != 0) {
    out.chart = "affine";
    out.witness = detail::rational_root(affine);
    return out;
  }
  const UniPoly at_infinity = detail::singular_locus(h.reversed(g + 2), f.reversed(2 * g + 3));
  if (at_infinity.degree() != 0) {
    out.chart = "infinity";
    out.witness = detail::rational_root(at_infinity);
    return out;
  }
  out.nonsingular = true;
  return out;
}

/// A validated hyperelliptic model of genus g over F_q.
class Curve {
 public:
  const FieldRef& base() const noexcept { return base_; }
  unsigned genus() const noexcept { return g_; }
  const UniPoly& h() const noexcept { return h_; }
  const UniPoly& f() const noexcept { return f_; }
  std::uint64_t q() const noexcept { return base_->size(); }

  /// Coefficients (h~(0), f~(0)) describing the fibre over u = 0.
  std::pair<Elem, Elem> infinity_fibre() const noexcept { return {h_.coeff(g_ + 1), f_.coeff(2 * g_ + 2)}; }

  std::string to_string() const {
    const std::string lhs = h_.is_zero() ? "y^2" : "y^2 + (" + h_.to_string() + ")*y";
    return lhs + " = " + f_.to_string() + " over F_" + std::to_string(q()) +
           " (genus " + std::to_string(g_) + ")";
  }

  friend bool operator==(const Curve& a, const Curve& b) {
    return *a.base_ == *b.base_ && a.g_ == b.g_ && a.h_ == b.h_ && a.f_ == b.f_;
  }

 private:
  friend Curve new_curve(FieldRef base, unsigned g, UniPoly h, UniPoly f);
  Curve(FieldRef base, unsigned g, UniPoly h, UniPoly f)
      : base_(std::move(base)), g_(g), h_(std::move(h)), f_(std::move(f)) {}

  FieldRef base_;
  unsigned g_;
  UniPoly h_;
  UniPoly f_;
};

/// Validates degree bounds and smoothness of both charts.
inline Curve new_curve(FieldRef base, unsigned g, UniPoly h, UniPoly f) {
  if (g == 0) throw Error(Errc::invalid_argument, "genus must be at least 1");
  const NonsingularityCheck check = is_nonsingular(base, g, h, f);
  if (!check.nonsingular) {
    std::string msg = "singular model on the " + check.chart + " chart";
    if (check.witness) msg += " (singular point over coordinate " + base->to_string(Elem{*check.witness}) + ")";
    throw SingularModel(check.chart, check.witness, msg);
  }
  return Curve(std::move(base), g, std::move(h), std::move(f));
}

struct CountOptions {
  std::uint64_t cap = kDefaultCountCap;
  unsigned jobs = 1;
};

/// Points of the curve lying over u = 0 in the infinity chart, over F_{q^m}.
inline int infinity_points(const Curve& c, unsigned m) {
  const FieldRef ext = gf::make_field(c.base()->characteristic(), c.base()->degree() * m);
  const gf::Embedding emb(c.base(), ext);
  const auto [h0, f0] = c.infinity_fibre();
  return gf::solve_quadratic_count(*ext, emb(h0), emb(f0));
}

/// |C(F_{q^m})| for the smooth projective model, by iterating over x only.
inline std::uint64_t count_points(const Curve& c, unsigned m, const CountOptions& opts = {}) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  const auto size = gf::checked_field_size(c.base()->characteristic(), c.base()->degree() * m);
  if (!size || *size > opts.cap) {
    throw Error(Errc::cap_exceeded, "q^m = " + std::to_string(c.q()) + "^" + std::to_string(m) +
                                        " exceeds the counting cap " + std::to_string(opts.cap));
  }
  const FieldRef ext = gf::make_field(c.base()->characteristic(), c.base()->degree() * m);
  const gf::Field& E = *ext;
  const gf::Embedding emb(c.base(), ext);
  const UniPoly h = emb(c.h());
  const UniPoly f = emb(c.f());
  std::uint64_t affine = 0;
  if (E.characteristic() != 2) {
    const UniPoly disc = h * h + f.scale(E.from_int(4));
    affine = parallel_sum(E.size(), opts.jobs, [&](std::uint64_t begin, std::uint64_t end) {
      std::uint64_t n = 0;
      for (std::uint64_t x = begin; x < end; ++x) n += 1 + E.quadratic_character(disc.eval(Elem{x}));
      return n;
    });
  } else {
    affine = parallel_sum(E.size(), opts.jobs, [&](std::uint64_t begin, std::uint64_t end) {
      std::uint64_t n = 0;
      for (std::uint64_t x = begin; x < end; ++x) {
        n += static_cast<std::uint64_t>(gf::solve_quadratic_count(E, h.eval(Elem{x}), f.eval(Elem{x})));
      }
      return n;
    });
  }
  const auto [h0, f0] = c.infinity_fibre();
  return affine + static_cast<std::uint64_t>(gf::solve_quadratic_count(E, emb(h0), emb(f0)));
}

}  // namespace pointless::hyperell
