#pragma once

// Restriction of scalars from F_{q^n} to F_q, by expanding every variable in
// the power basis 1, b, ..., b^{n-1} of the owner field (b the class of x).

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/hyperell.hpp"
#include "pointless/mpoly.hpp"
#include "pointless/unipoly.hpp"

namespace pointless::weilres {

struct RestrictedSystem {
  PolySystem source;
  PolySystem target;
  unsigned n = 1;
  /// b^0 .. b^{n-1} as elements of the source owner.
  std::vector<Elem> basis;
};

namespace detail {

// Coordinates of F_{p^{kn}} elements along e_j b^i, where e_j runs over the
// embedded power basis of F_{p^k}.
class Decomposer {
 public:
  Decomposer(const FieldRef& big, const FieldRef& small, unsigned n)
      : big_(big), small_(small), n_(n), k_(small->degree()), p_(big->characteristic()) {
    const gf::Embedding emb(small, big);
    const unsigned dim = big->degree();
    // Columns: F_p coordinates of e_j b^i.
    std::vector<std::vector<std::uint64_t>> a(dim, std::vector<std::uint64_t>(2 * dim, 0));
    Elem bi = big->one();
    for (unsigned i = 0; i < n; ++i) {
      for (unsigned j = 0; j < k_; ++j) {
        std::vector<std::uint64_t> unit(k_, 0);
        unit[j] = 1;
        const auto col = big->coeffs(big->mul(emb(small->from_coeffs(unit)), bi));
        for (unsigned r = 0; r < dim; ++r) a[r][i * k_ + j] = col[r];
      }
      bi = big->mul(bi, big->gen());
    }
    for (unsigned r = 0; r < dim; ++r) a[r][dim + r] = 1;
    // Gauss-Jordan over F_p.
    for (unsigned c = 0; c < dim; ++c) {
      unsigned piv = c;
      while (piv < dim && a[piv][c] == 0) ++piv;
      if (piv == dim) throw Error(Errc::field_mismatch, "power basis is degenerate");
      std::swap(a[piv], a[c]);
      const std::uint64_t inv = gf::detail::powmod(a[c][c], p_ - 2, p_);
      for (auto& v : a[c]) v = gf::detail::mulmod(v, inv, p_);
      for (unsigned r = 0; r < dim; ++r) {
        if (r == c || a[r][c] == 0) continue;
        const std::uint64_t factor = a[r][c];
        for (unsigned x = 0; x < 2 * dim; ++x) {
          a[r][x] = (a[r][x] + p_ - gf::detail::mulmod(factor, a[c][x], p_)) % p_;
        }
      }
    }
    inverse_.assign(dim, std::vector<std::uint64_t>(dim));
    for (unsigned r = 0; r < dim; ++r) {
      for (unsigned c = 0; c < dim; ++c) inverse_[r][c] = a[r][dim + c];
    }
  }

  std::vector<Elem> operator()(Elem c) const {
    const auto v = big_->coeffs(c);
    const unsigned dim = big_->degree();
    std::vector<Elem> out(n_);
    std::vector<std::uint64_t> w(k_);
    for (unsigned i = 0; i < n_; ++i) {
      for (unsigned j = 0; j < k_; ++j) {
        std::uint64_t acc = 0;
        const auto& row = inverse_[i * k_ + j];
        for (unsigned r = 0; r < dim; ++r) acc = (acc + gf::detail::mulmod(row[r], v[r], p_)) % p_;
        w[j] = acc;
      }
      out[i] = small_->from_coeffs(w);
    }
    return out;
  }

 private:
  FieldRef big_;
  FieldRef small_;
  unsigned n_;
  unsigned k_;
  std::uint64_t p_;
  std::vector<std::vector<std::uint64_t>> inverse_;
};

}  // namespace detail

/// Restriction of `sys` (over F_{q^n}) to F_q. Variable j becomes
/// sum_i X_{j,i} b^i; target variable j*n + i is named "<name_j>_<i>" and
/// equation t splits into target equations t*n .. t*n + n - 1.
inline RestrictedSystem restrict(const PolySystem& sys, unsigned n) {
  const FieldRef& big = sys.owner;
  if (n == 0 || big->degree() % n != 0) {
    throw Error(Errc::field_mismatch, "owner F_" + std::to_string(big->size()) + " is not a degree-" +
                                          std::to_string(n) + " extension of a subfield");
  }
  const FieldRef small = gf::make_field(big->characteristic(), big->degree() / n);
  const detail::Decomposer split(big, small, n);
  const std::size_t nv = sys.num_vars();
  const std::size_t tv = nv * n;

  std::vector<Elem> basis(n);
  basis[0] = big->one();
  for (unsigned i = 1; i < n; ++i) basis[i] = big->mul(basis[i - 1], big->gen());

  std::vector<MPoly> subst;
  for (std::size_t j = 0; j < nv; ++j) {
    MPoly s(big, tv);
    for (unsigned i = 0; i < n; ++i) s = s + MPoly::variable(big, tv, j * n + i).scale(basis[i]);
    subst.push_back(std::move(s));
  }
  std::map<std::pair<std::size_t, std::uint32_t>, MPoly> power_cache;
  const auto power = [&](std::size_t j, std::uint32_t e) -> const MPoly& {
    auto it = power_cache.find({j, e});
    if (it == power_cache.end()) it = power_cache.emplace(std::make_pair(j, e), subst[j].pow(e)).first;
    return it->second;
  };

  std::vector<MPoly> equations;
  for (const auto& eq : sys.equations) {
    MPoly expanded(big, tv);
    for (const auto& [mono, c] : eq.terms()) {
      MPoly term = MPoly::constant(big, tv, c);
      for (std::size_t j = 0; j < nv; ++j) {
        if (mono[j]) term = term * power(j, mono[j]);
      }
      expanded = expanded + term;
    }
    std::vector<MPoly> parts(n, MPoly(small, tv));
    for (const auto& [mono, c] : expanded.terms()) {
      const auto coords = split(c);
      for (unsigned i = 0; i < n; ++i) parts[i].add_term(mono, coords[i]);
    }
    for (auto& part : parts) equations.push_back(std::move(part));
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < nv; ++j) {
    for (unsigned i = 0; i < n; ++i) names.push_back(sys.var_names[j] + "_" + std::to_string(i));
  }
  return {sys, PolySystem(small, std::move(names), std::move(equations)), n, std::move(basis)};
}

struct BijectionCheck {
  unsigned m = 0;
  BigInt target_count;
  /// Solutions of the source over F_{q^lcm(m,n)}.
  BigInt source_count;
  /// gcd(m, n): number of factors in F_{q^m} (x) F_{q^n}.
  std::uint64_t copies = 1;
  bool holds = false;
};

/// |target(F_{q^m})| = |source(F_{q^lcm(m,n)})|^gcd(m,n), both sides enumerated.
inline BijectionCheck verify_bijection(const RestrictedSystem& r, unsigned m,
                                       std::uint64_t cap = kDefaultEnumerationCap) {
  const auto ts = gf::tensor_split(m, r.n);
  BijectionCheck out;
  out.m = m;
  out.copies = ts.copies;
  out.target_count = brute_solutions(r.target, m, cap).size();
  out.source_count = brute_solutions(r.source, static_cast<unsigned>(ts.lcm_degree / r.n), cap).size();
  out.holds = out.target_count == ipow(out.source_count, ts.copies);
  return out;
}

/// The affine chart y^2 + h(x) y - f(x) = 0 of a curve, in variables X0 = x, X1 = y.
inline PolySystem curve_chart(const hyperell::Curve& c) {
  const FieldRef& F = c.base();
  MPoly eq = MPoly::variable(F, 2, 1).pow(2);
  const MPoly x = MPoly::variable(F, 2, 0);
  const MPoly y = MPoly::variable(F, 2, 1);
  for (std::size_t i = 0; i < c.h().coeffs().size(); ++i) {
    eq = eq + (x.pow(i) * y).scale(c.h().coeff(i));
  }
  for (std::size_t i = 0; i < c.f().coeffs().size(); ++i) eq = eq - x.pow(i).scale(c.f().coeff(i));
  return PolySystem(F, {"X0", "X1"}, {eq});
}

namespace detail {

inline Elem eval_over(const MPoly& f, const gf::Embedding& emb, const gf::Field& E, const std::vector<Elem>& pt) {
  Elem acc{0};
  for (const auto& [mono, c] : f.terms()) {
    Elem t = emb(c);
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i]) t = E.mul(t, E.pow(pt[i], mono[i]));
    }
    acc = E.add(acc, t);
  }
  return acc;
}

inline std::size_t rank(const gf::Field& E, std::vector<std::vector<Elem>> rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c].v == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    const Elem inv = E.inv(rows[r][c]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c].v == 0) continue;
      const Elem factor = E.mul(rows[i][c], inv);
      for (std::size_t x = c; x < cols; ++x) rows[i][x] = E.sub(rows[i][x], E.mul(factor, rows[r][x]));
    }
    ++r;
  }
  return r;
}

}  // namespace detail

/// Rank of the Jacobian at `pt` is at least `expected_codim`. The point's
/// field must contain the owner.
inline bool jacobian_smooth_at(const PolySystem& sys, const Point& pt, std::size_t expected_codim) {
  if (pt.coords.size() != sys.num_vars()) throw Error(Errc::invalid_argument, "point has wrong dimension");
  const gf::Embedding emb(sys.owner, pt.field);
  const gf::Field& E = *pt.field;
  for (const auto& eq : sys.equations) {
    if (detail::eval_over(eq, emb, E, pt.coords).v != 0) {
      throw Error(Errc::not_a_solution, "point does not satisfy the system");
    }
  }
  std::vector<std::vector<Elem>> jac;
  for (const auto& eq : sys.equations) {
    std::vector<Elem> row;
    for (std::size_t v = 0; v < sys.num_vars(); ++v) row.push_back(detail::eval_over(eq.derivative(v), emb, E, pt.coords));
    jac.push_back(std::move(row));
  }
  return detail::rank(E, std::move(jac)) >= expected_codim;
}

}  // namespace pointless::weilres
