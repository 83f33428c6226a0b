#pragma once

// Independent oracles shared by the test binaries: schoolbook polynomial
// arithmetic over F_p, a naive extension field, (x, y) point enumeration and
// random generators for curves and formulas.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pointless/gf.hpp"
#include "pointless/hyperell.hpp"
#include "pointless/sentence.hpp"
#include "pointless/unipoly.hpp"

namespace oracle {

using Poly = std::vector<std::uint64_t>;  // low degree first, no trailing zeros
using PK = std::pair<std::uint64_t, unsigned>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

/// Remainder of a modulo a monic m.
inline Poly rem(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  while (a.size() >= m.size()) {
    const std::uint64_t c = a.back();
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}

/// Monic polynomial of degree d with the given lower digits packed base p.
inline Poly monic_from_index(std::uint64_t index, unsigned d, std::uint64_t p) {
  Poly r(d + 1, 0);
  for (unsigned i = 0; i < d; ++i) {
    r[i] = index % p;
    index /= p;
  }
  r[d] = 1;
  return r;
}

/// No monic factor of degree 1 .. deg/2, by trial division.
inline bool irreducible(const Poly& f, std::uint64_t p) {
  const unsigned d = static_cast<unsigned>(f.size() - 1);
  for (unsigned e = 1; 2 * e <= d; ++e) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < e; ++i) total *= p;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      if (rem(f, monic_from_index(idx, e, p), p).empty()) return false;
    }
  }
  return true;
}

/// Lexicographically smallest monic irreducible of degree k, scanning the
/// coefficient vectors (c_{k-1}, ..., c_0) in lexicographic order.
inline Poly smallest_irreducible(std::uint64_t p, unsigned k) {
  std::uint64_t total = 1;
  for (unsigned i = 0; i < k; ++i) total *= p;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Poly f(k + 1, 0);
    std::uint64_t t = idx;
    for (unsigned i = 0; i < k; ++i) {
      f[i] = t % p;
      t /= p;
    }
    f[k] = 1;
    if (irreducible(f, p)) return f;
  }
  return {};
}

/// F_p[x]/(modulus) with packed integers as elements.
struct NaiveField {
  std::uint64_t p;
  Poly modulus;

  unsigned k() const { return static_cast<unsigned>(modulus.size() - 1); }

  Poly unpack(std::uint64_t v) const {
    Poly r;
    while (v) {
      r.push_back(v % p);
      v /= p;
    }
    return r;
  }

  std::uint64_t pack(const Poly& a) const {
    std::uint64_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * p + a[i];
    return v;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return pack(rem(oracle::mul(unpack(a), unpack(b), p), modulus, p));
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    Poly x = unpack(a), y = unpack(b);
    x.resize(std::max(x.size(), y.size()), 0);
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = (x[i] + y[i]) % p;
    trim(x);
    return pack(x);
  }
};

/// Points of a curve over F_{q^m}: every affine (x, y) plus the fibre at
/// infinity, each found by trying all values.
inline std::uint64_t brute_count(const pointless::hyperell::Curve& c, unsigned m) {
  using pointless::gf::Elem;
  const auto E = pointless::gf::make_field(c.base()->characteristic(), c.base()->degree() * m);
  const pointless::gf::Embedding emb(c.base(), E);
  const auto h = emb(c.h());
  const auto f = emb(c.f());
  std::uint64_t n = 0;
  for (std::uint64_t x = 0; x < E->size(); ++x) {
    const Elem hx = h.eval(Elem{x});
    const Elem fx = f.eval(Elem{x});
    for (std::uint64_t y = 0; y < E->size(); ++y) {
      const Elem lhs = E->add(E->mul(Elem{y}, Elem{y}), E->mul(hx, Elem{y}));
      if (lhs == fx) ++n;
    }
  }
  const Elem h0 = emb(c.h().coeff(c.genus() + 1));
  const Elem f0 = emb(c.f().coeff(2 * c.genus() + 2));
  for (std::uint64_t v = 0; v < E->size(); ++v) {
    if (E->add(E->mul(Elem{v}, Elem{v}), E->mul(h0, Elem{v})) == f0) ++n;
  }
  return n;
}

/// Uniform random nonsingular curve of genus g over F_q; h = 0 when p is odd.
inline pointless::hyperell::Curve random_curve(const pointless::gf::FieldRef& F, unsigned g, std::mt19937_64& rng) {
  using pointless::gf::Elem;
  std::uniform_int_distribution<std::uint64_t> coeff(0, F->size() - 1);
  for (;;) {
    std::vector<Elem> h, f;
    if (F->characteristic() == 2) {
      for (unsigned i = 0; i <= g + 1; ++i) h.push_back(Elem{coeff(rng)});
    }
    for (unsigned i = 0; i <= 2 * g + 2; ++i) f.push_back(Elem{coeff(rng)});
    try {
      return pointless::hyperell::new_curve(F, g, {F, h}, {F, f});
    } catch (const pointless::SingularModel&) {
    }
  }
}

/// Random polynomial expression of total degree at most `degree` in `vars`.
inline pointless::logic::Expr random_expr(const std::vector<std::string>& vars, std::uint64_t p, unsigned degree,
                                          std::mt19937_64& rng) {
  using pointless::logic::Expr;
  std::uniform_int_distribution<std::int64_t> c(0, static_cast<std::int64_t>(p) - 1);
  std::uniform_int_distribution<unsigned> nterms(1, 3);
  std::vector<Expr> terms;
  const unsigned t = nterms(rng);
  for (unsigned i = 0; i < t; ++i) {
    std::vector<Expr> factors{Expr::integer(c(rng))};
    std::uniform_int_distribution<unsigned> deg(0, degree);
    unsigned left = deg(rng);
    while (left > 0 && !vars.empty()) {
      std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
      std::uniform_int_distribution<unsigned> e(1, left);
      const unsigned ex = e(rng);
      factors.push_back(ex == 1 ? Expr::var(vars[v(rng)]) : Expr::pow(Expr::var(vars[v(rng)]), ex));
      left -= ex;
    }
    terms.push_back(Expr::mul(std::move(factors)));
  }
  return Expr::add(std::move(terms));
}

/// Random and/or tree with at most `atoms` (in)equalities.
inline pointless::logic::Formula random_formula(const std::vector<std::string>& vars, std::uint64_t p, unsigned atoms,
                                                unsigned degree, std::mt19937_64& rng) {
  using pointless::logic::Formula;
  std::bernoulli_distribution coin(0.5);
  if (atoms <= 1) {
    auto l = random_expr(vars, p, degree, rng);
    auto r = random_expr(vars, p, degree, rng);
    return coin(rng) ? Formula::eq(std::move(l), std::move(r)) : Formula::neq(std::move(l), std::move(r));
  }
  std::uniform_int_distribution<unsigned> split(1, atoms - 1);
  const unsigned left = split(rng);
  std::vector<Formula> kids{random_formula(vars, p, left, degree, rng),
                            random_formula(vars, p, atoms - left, degree, rng)};
  return coin(rng) ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
}

/// A temporary file path removed on destruction, together with its lock file.
class TempPath {
 public:
  explicit TempPath(const std::string& stem) {
    std::random_device rd;
    path_ = (std::filesystem::temp_directory_path() /
             (stem + "-" + std::to_string(rd()) + "-" + std::to_string(rd()) + ".json"))
                .string();
  }
  ~TempPath() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
    std::filesystem::remove(path_ + ".lock", ec);
    std::filesystem::remove(path_ + ".tmp", ec);
  }
  TempPath(const TempPath&) = delete;
  TempPath& operator=(const TempPath&) = delete;

  const std::string& str() const { return path_; }

 private:
  std::string path_;
};

}  // namespace oracle
