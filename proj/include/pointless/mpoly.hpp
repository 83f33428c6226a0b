#pragma once

// Sparse multivariate polynomials over a Field, polynomial systems, and the
// brute-force solver used as the oracle throughout.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/unipoly.hpp"

namespace pointless {

using gf::Elem;
using gf::FieldRef;

using Monomial = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
}

/// Graded lexicographic order: total degree first, then lexicographic.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

class MPoly {
 public:
  using Terms = std::map<Monomial, Elem, GrlexLess>;

  MPoly(FieldRef field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {}

  static MPoly constant(FieldRef field, std::size_t nvars, Elem c) {
    MPoly r(std::move(field), nvars);
    if (c.v != 0) r.terms_[Monomial(nvars, 0)] = c;
    return r;
  }

  static MPoly variable(FieldRef field, std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw Error(Errc::invalid_argument, "variable index out of range");
    MPoly r(field, nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    r.terms_[m] = field->one();
    return r;
  }

  const FieldRef& field() const noexcept { return field_; }
  std::size_t num_vars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  std::uint64_t degree() const {
    return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
  }

  /// Adds c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, Elem c) {
    if (m.size() != nvars_) throw Error(Errc::invalid_argument, "exponent vector has wrong length");
    if (c.v == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = field_->add(it->second, c);
      if (it->second.v == 0) terms_.erase(it);
    }
  }

  /// Same polynomial in a larger variable space (new variables appended).
  MPoly extended(std::size_t nvars) const {
    if (nvars < nvars_) throw Error(Errc::invalid_argument, "cannot shrink variable space");
    MPoly r(field_, nvars);
    for (const auto& [m, c] : terms_) {
      Monomial e = m;
      e.resize(nvars, 0);
      r.terms_.emplace(std::move(e), c);
    }
    return r;
  }

  MPoly scale(Elem c) const {
    MPoly r(field_, nvars_);
    if (c.v == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, field_->mul(v, c));
    return r;
  }

  MPoly derivative(std::size_t var) const {
    MPoly r(field_, nvars_);
    const std::uint64_t p = field_->characteristic();
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0 || m[var] % p == 0) continue;
      Monomial e = m;
      e[var] -= 1;
      r.add_term(e, field_->mul(c, field_->from_int(static_cast<std::int64_t>(m[var] % p))));
    }
    return r;
  }

  MPoly pow(std::uint64_t e) const {
    MPoly r = constant(field_, nvars_, field_->one());
    MPoly b = *this;
    while (e != 0) {
      if (e & 1U) r = r * b;
      e >>= 1U;
      if (e != 0) b = b * b;
    }
    return r;
  }

  /// Value at a point of the owner field.
  Elem eval(const std::vector<Elem>& point) const {
    const gf::Field& F = *field_;
    Elem acc{0};
    for (const auto& [m, c] : terms_) {
      Elem t = c;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (m[i]) t = F.mul(t, F.pow(point[i], m[i]));
      }
      acc = F.add(acc, t);
    }
    return acc;
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    check_same(a, b);
    MPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }

  friend MPoly operator-(const MPoly& a, const MPoly& b) {
    check_same(a, b);
    MPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, a.field_->neg(c));
    return r;
  }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    check_same(a, b);
    MPoly r(a.field_, a.nvars_);
    Monomial e(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ma[i] + mb[i];
        r.add_term(e, a.field_->mul(ca, cb));
      }
    }
    return r;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return *a.field_ == *b.field_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  static void check_same(const MPoly& a, const MPoly& b) {
    if (a.nvars_ != b.nvars_) throw Error(Errc::invalid_argument, "polynomials in different variable spaces");
    if (a.field_ != b.field_ && !(*a.field_ == *b.field_)) {
      throw Error(Errc::field_mismatch, "polynomials over different fields");
    }
  }

  FieldRef field_;
  std::size_t nvars_;
  Terms terms_;
};

/// A conjunction of polynomial equations f_i = 0 over `owner`.
struct PolySystem {
  FieldRef owner;
  std::vector<std::string> var_names;
  std::vector<MPoly> equations;

  std::size_t num_vars() const noexcept { return var_names.size(); }

  PolySystem(FieldRef owner_field, std::vector<std::string> names, std::vector<MPoly> eqs = {})
      : owner(std::move(owner_field)), var_names(std::move(names)), equations(std::move(eqs)) {
    for (const auto& e : equations) {
      if (e.num_vars() != var_names.size()) throw Error(Errc::invalid_argument, "equation arity mismatch");
      if (!(*e.field() == *owner)) throw Error(Errc::field_mismatch, "equation over a different field");
    }
  }

  friend bool operator==(const PolySystem& a, const PolySystem& b) {
    return *a.owner == *b.owner && a.var_names == b.var_names && a.equations == b.equations;
  }
};

/// Default limit on enumerated assignments.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

namespace detail {

// Equations compiled for evaluation over an extension field.
struct CompiledTerm {
  Elem coeff;
  std::vector<std::pair<std::size_t, std::uint32_t>> factors;  // (variable, exponent)
};

struct CompiledEquation {
  std::vector<CompiledTerm> terms;
  std::vector<std::size_t> vars;
};

class Enumerator {
 public:
  Enumerator(const PolySystem& sys, unsigned m, std::uint64_t node_cap, bool reorder)
      : node_cap_(node_cap) {
    const auto& owner = *sys.owner;
    ext_ = gf::make_field(owner.characteristic(), owner.degree() * m);
    const gf::Embedding emb(sys.owner, ext_);
    nvars_ = sys.num_vars();
    std::vector<CompiledEquation> eqs;
    max_exp_.assign(nvars_, 0);
    for (const auto& eq : sys.equations) {
      CompiledEquation ce;
      std::vector<bool> used(nvars_, false);
      for (const auto& [mono, c] : eq.terms()) {
        CompiledTerm t{emb(c), {}};
        for (std::size_t i = 0; i < nvars_; ++i) {
          if (mono[i] == 0) continue;
          t.factors.emplace_back(i, mono[i]);
          used[i] = true;
          max_exp_[i] = std::max(max_exp_[i], mono[i]);
        }
        ce.terms.push_back(std::move(t));
      }
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (used[i]) ce.vars.push_back(i);
      }
      eqs.push_back(std::move(ce));
    }
    // Variable order: natural, or greedily closing the smallest equations first.
    std::vector<bool> placed(nvars_, false);
    if (reorder) {
      std::vector<std::size_t> idx(eqs.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return eqs[a].vars.size() < eqs[b].vars.size(); });
      for (std::size_t e : idx) {
        for (std::size_t v : eqs[e].vars) {
          if (!placed[v]) {
            placed[v] = true;
            order_.push_back(v);
          }
        }
      }
      free_vars_ = 0;
      for (std::size_t v = 0; v < nvars_; ++v) {
        if (!placed[v]) ++free_vars_;
      }
    } else {
      for (std::size_t v = 0; v < nvars_; ++v) order_.push_back(v);
    }
    std::vector<std::size_t> level_of(nvars_, 0);
    for (std::size_t l = 0; l < order_.size(); ++l) level_of[order_[l]] = l;
    // An equation is checked at the level of its last variable; constant ones up front.
    at_level_.assign(order_.size() + 1, {});
    for (auto& ce : eqs) {
      std::size_t lvl = 0;
      for (std::size_t v : ce.vars) lvl = std::max(lvl, level_of[v] + 1);
      at_level_[lvl].push_back(std::move(ce));
    }
    units_.assign(order_.size(), std::nullopt);
    if (reorder) {
      for (std::size_t l = 0; l < order_.size(); ++l) units_[l] = find_unit(order_[l], at_level_[l + 1]);
    }
    powers_.assign(nvars_, {});
    for (std::size_t v = 0; v < nvars_; ++v) powers_[v].assign(max_exp_[v] + 1, Elem{1});
    point_.assign(nvars_, Elem{0});
  }

  const FieldRef& field() const noexcept { return ext_; }
  std::size_t free_vars() const noexcept { return free_vars_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

  /// Visits every solution of the ordered variables; `visit` returns false to stop.
  template <typename Visit>
  void run(Visit&& visit) {
    if (!level_ok(0)) return;
    stopped_ = false;
    dfs(0, visit);
  }

  const std::vector<Elem>& point() const noexcept { return point_; }

 private:
  bool level_ok(std::size_t level) const {
    for (const auto& ce : at_level_[level]) {
      if (value(ce).v != 0) return false;
    }
    return true;
  }

  // An equation a*v + b = 0 closing at v's level, with a, b free of v.
  struct Unit {
    CompiledEquation a, b;
  };

  static std::optional<Unit> find_unit(std::size_t var, const std::vector<CompiledEquation>& eqs) {
    for (const auto& ce : eqs) {
      bool linear = true;
      for (const auto& t : ce.terms) {
        for (auto [v, e] : t.factors) {
          if (v == var && e != 1) linear = false;
        }
      }
      if (!linear) continue;
      Unit u;
      for (const auto& t : ce.terms) {
        CompiledTerm rest{t.coeff, {}};
        bool has_var = false;
        for (auto f : t.factors) {
          if (f.first == var) has_var = true;
          else rest.factors.push_back(f);
        }
        (has_var ? u.a : u.b).terms.push_back(std::move(rest));
      }
      return u;
    }
    return std::nullopt;
  }

  Elem value(const CompiledEquation& ce) const {
    const gf::Field& E = *ext_;
    Elem acc{0};
    for (const auto& t : ce.terms) {
      Elem v = t.coeff;
      for (auto [var, e] : t.factors) v = E.mul(v, powers_[var][e]);
      acc = E.add(acc, v);
    }
    return acc;
  }

  template <typename Visit>
  void try_value(std::size_t level, std::size_t var, std::uint64_t x, Visit& visit) {
    if (++nodes_ > node_cap_) {
      throw Error(Errc::cap_exceeded, "enumeration exceeded " + std::to_string(node_cap_) + " assignments");
    }
    const gf::Field& E = *ext_;
    point_[var] = Elem{x};
    auto& pw = powers_[var];
    for (std::size_t e = 1; e < pw.size(); ++e) pw[e] = E.mul(pw[e - 1], Elem{x});
    if (level_ok(level + 1)) dfs(level + 1, visit);
  }

  template <typename Visit>
  void dfs(std::size_t level, Visit& visit) {
    if (level == order_.size()) {
      if (!visit(point_)) stopped_ = true;
      return;
    }
    const gf::Field& E = *ext_;
    const std::size_t var = order_[level];
    if (const auto& u = units_[level]) {
      const Elem a = value(u->a);
      const Elem b = value(u->b);
      if (a.v != 0) {
        try_value(level, var, E.neg(E.div(b, a)).v, visit);
        return;
      }
      if (b.v != 0) return;
    }
    for (std::uint64_t x = 0; x < E.size() && !stopped_; ++x) try_value(level, var, x, visit);
  }

  FieldRef ext_;
  std::size_t nvars_ = 0;
  std::uint64_t node_cap_;
  std::uint64_t nodes_ = 0;
  std::size_t free_vars_ = 0;
  bool stopped_ = false;
  std::vector<std::size_t> order_;
  std::vector<std::uint32_t> max_exp_;
  std::vector<std::vector<CompiledEquation>> at_level_;
  std::vector<std::optional<Unit>> units_;
  std::vector<std::vector<Elem>> powers_;
  std::vector<Elem> point_;
};

inline void check_space(const PolySystem& sys, unsigned m, std::uint64_t cap) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  const BigInt space = ipow(BigInt(sys.owner->size()), std::uint64_t{m} * sys.num_vars());
  if (space > cap) {
    throw Error(Errc::cap_exceeded, "enumeration space " + space.str() + " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace detail

/// A point together with the field its coordinates live in.
struct Point {
  FieldRef field;
  std::vector<Elem> coords;
};

/// Every common zero over the degree-m extension of the owner field, in
/// lexicographic order of coordinate vectors.
inline std::vector<Point> brute_solutions(const PolySystem& sys, unsigned m,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  detail::check_space(sys, m, cap);
  detail::Enumerator en(sys, m, std::numeric_limits<std::uint64_t>::max(), false);
  std::vector<Point> out;
  en.run([&](const std::vector<Elem>& pt) {
    out.push_back({en.field(), pt});
    return true;
  });
  return out;
}

/// Number of common zeros over the degree-m extension. Variables occurring in
/// no equation are counted, not enumerated; `node_cap` bounds the search.
inline BigInt count_solutions(const PolySystem& sys, unsigned m, std::uint64_t node_cap = kDefaultEnumerationCap) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  detail::Enumerator en(sys, m, node_cap, true);
  std::uint64_t n = 0;
  en.run([&](const std::vector<Elem>&) {
    ++n;
    return true;
  });
  return BigInt(n) * ipow(BigInt(en.field()->size()), en.free_vars());
}

/// Whether a common zero exists over the degree-m extension.
inline bool has_solution(const PolySystem& sys, unsigned m, std::uint64_t node_cap = kDefaultEnumerationCap) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  detail::Enumerator en(sys, m, node_cap, true);
  bool found = false;
  en.run([&](const std::vector<Elem>&) {
    found = true;
    return false;
  });
  return found;
}

/// Up to `limit` common zeros over the degree-m extension, found by the pruned
/// search (in no particular order).
inline std::vector<Point> find_solutions(const PolySystem& sys, unsigned m, std::size_t limit,
                                         std::uint64_t node_cap = kDefaultEnumerationCap) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  std::vector<Point> out;
  if (limit == 0) return out;
  detail::Enumerator en(sys, m, node_cap, true);
  en.run([&](const std::vector<Elem>& pt) {
    out.push_back({en.field(), pt});
    return out.size() < limit;
  });
  return out;
}

}  // namespace pointless
