#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pointless/gf.hpp"

namespace pointless::gf {

/// Degree reported for the zero polynomial.
inline constexpr std::ptrdiff_t kDegreeMinusInfinity = std::numeric_limits<std::ptrdiff_t>::min();

/// Dense univariate polynomial over a Field, low degree first, trailing
/// zeros trimmed.
class UniPoly {
 public:
  explicit UniPoly(FieldRef field) : field_(std::move(field)) {}
  UniPoly(FieldRef field, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    for (Elem c : coeffs_) {
      if (!field_->contains(c)) throw Error(Errc::invalid_argument, "coefficient outside field");
    }
    trim();
  }

  /// Polynomial with prime-field integer coefficients, low degree first.
  static UniPoly from_ints(FieldRef field, const std::vector<std::int64_t>& coeffs) {
    std::vector<Elem> c;
    c.reserve(coeffs.size());
    for (std::int64_t v : coeffs) c.push_back(field->from_int(v));
    return {std::move(field), std::move(c)};
  }

  static UniPoly monomial(FieldRef field, Elem c, std::size_t degree) {
    std::vector<Elem> v(degree + 1, Elem{0});
    v[degree] = c;
    return {std::move(field), std::move(v)};
  }

  const FieldRef& field() const noexcept { return field_; }
  const std::vector<Elem>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::ptrdiff_t degree() const noexcept {
    return coeffs_.empty() ? kDegreeMinusInfinity : static_cast<std::ptrdiff_t>(coeffs_.size()) - 1;
  }
  Elem coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : Elem{0}; }
  Elem leading() const noexcept { return coeffs_.empty() ? Elem{0} : coeffs_.back(); }

  Elem eval(Elem x) const {
    const Field& f = *field_;
    Elem r{0};
    for (std::size_t i = coeffs_.size(); i-- > 0;) r = f.add(f.mul(r, x), coeffs_[i]);
    return r;
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    return scale(field_->inv(leading()));
  }

  UniPoly scale(Elem c) const {
    std::vector<Elem> r(coeffs_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->mul(coeffs_[i], c);
    return {field_, std::move(r)};
  }

  /// u^len * a(1/u), i.e. coefficients reversed inside a window of `len` slots.
  UniPoly reversed(std::size_t len) const {
    if (coeffs_.size() > len) throw Error(Errc::invalid_argument, "reversal window too small");
    std::vector<Elem> r(len, Elem{0});
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r[len - 1 - i] = coeffs_[i];
    return {field_, std::move(r)};
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    check_same(a, b);
    const Field& f = *a.field_;
    std::vector<Elem> r(std::max(a.coeffs_.size(), b.coeffs_.size()), Elem{0});
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(a.coeff(i), b.coeff(i));
    return {a.field_, std::move(r)};
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    check_same(a, b);
    const Field& f = *a.field_;
    std::vector<Elem> r(std::max(a.coeffs_.size(), b.coeffs_.size()), Elem{0});
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.sub(a.coeff(i), b.coeff(i));
    return {a.field_, std::move(r)};
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return UniPoly(a.field_);
    const Field& f = *a.field_;
    std::vector<Elem> r(a.coeffs_.size() + b.coeffs_.size() - 1, Elem{0});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].v == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        r[i + j] = f.add(r[i + j], f.mul(a.coeffs_[i], b.coeffs_[j]));
      }
    }
    return {a.field_, std::move(r)};
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return *a.field_ == *b.field_ && a.coeffs_ == b.coeffs_;
  }

  /// (quotient, remainder) of a by nonzero b.
  friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    check_same(a, b);
    if (b.is_zero()) throw Error(Errc::invalid_argument, "division by zero polynomial");
    const Field& f = *a.field_;
    std::vector<Elem> rem = a.coeffs_;
    const std::size_t db = b.coeffs_.size() - 1;
    if (rem.size() <= db) return {UniPoly(a.field_), a};
    std::vector<Elem> quot(rem.size() - db, Elem{0});
    const Elem inv_lead = f.inv(b.leading());
    for (std::size_t i = rem.size(); i-- > db;) {
      const Elem c = f.mul(rem[i], inv_lead);
      quot[i - db] = c;
      if (c.v == 0) continue;
      for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] = f.sub(rem[i - db + j], f.mul(c, b.coeffs_[j]));
    }
    rem.resize(db);
    return {UniPoly(a.field_, std::move(quot)), UniPoly(a.field_, std::move(rem))};
  }

  friend UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      if (coeffs_[i].v == 0) continue;
      if (!s.empty()) s += " + ";
      const bool unit = coeffs_[i].v == 1;
      if (!unit || i == 0) s += field_->to_string(coeffs_[i]);
      if (i > 0) s += (unit ? "" : "*") + std::string("x") + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
  }

 private:
  static void check_same(const UniPoly& a, const UniPoly& b) {
    if (a.field_ != b.field_ && !(*a.field_ == *b.field_)) {
      throw Error(Errc::field_mismatch, "polynomials over different fields");
    }
  }

  void trim() {
    while (!coeffs_.empty() && coeffs_.back().v == 0) coeffs_.pop_back();
  }

  FieldRef field_;
  std::vector<Elem> coeffs_;
};

/// Monic gcd; zero when both inputs are zero.
inline UniPoly poly_gcd(UniPoly a, UniPoly b) {
  if (!(*a.field() == *b.field())) throw Error(Errc::field_mismatch, "gcd of polynomials over different fields");
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Formal derivative; in characteristic p the derivative of x^p vanishes.
inline UniPoly poly_derivative(const UniPoly& a) {
  const Field& f = *a.field();
  if (a.degree() < 1) return UniPoly(a.field());
  std::vector<Elem> r(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
    r[i - 1] = f.mul(f.from_int(static_cast<std::int64_t>(i % f.characteristic())), a.coeffs()[i]);
  }
  return {a.field(), std::move(r)};
}

/// base^e mod m.
inline UniPoly poly_powmod(UniPoly base, std::uint64_t e, const UniPoly& m) {
  UniPoly r = UniPoly::monomial(m.field(), m.field()->one(), 0) % m;
  base = base % m;
  while (e != 0) {
    if (e & 1U) r = (r * base) % m;
    e >>= 1U;
    if (e != 0) base = (base * base) % m;
  }
  return r;
}

inline bool is_squarefree(const UniPoly& a) {
  if (a.is_zero()) return false;
  return poly_gcd(a, poly_derivative(a)).degree() == 0;
}

namespace detail {

// Cantor-Zassenhaus splitting of a squarefree polynomial whose roots all lie
// in the field. Appends the roots to `out`.
inline void split_linear(const UniPoly& f, std::mt19937_64& rng, std::vector<Elem>& out) {
  const Field& F = *f.field();
  if (f.degree() <= 0) return;
  if (f.degree() == 1) {
    const UniPoly m = f.monic();
    out.push_back(F.neg(m.coeff(0)));
    return;
  }
  const FieldRef& field = f.field();
  std::uniform_int_distribution<std::uint64_t> pick(0, F.size() - 1);
  while (true) {
    const UniPoly shift(field, {Elem{pick(rng)}, F.one()});
    UniPoly t(field);
    if (F.characteristic() == 2) {
      // sum_{i<K} (c*(x+d))^{2^i}
      const UniPoly lin = shift.scale(Elem{pick(rng) | 1U});
      UniPoly cur = lin % f;
      t = cur;
      for (std::uint64_t i = 1; i < F.degree(); ++i) {
        cur = (cur * cur) % f;
        t = t + cur;
      }
    } else {
      t = poly_powmod(shift, (F.size() - 1) / 2, f) - UniPoly(field, {F.one()});
    }
    UniPoly g = poly_gcd(f, t);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      split_linear(g, rng, out);
      split_linear(divmod(f, g).first, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// All roots in the polynomial's field, ascending by packed value.
inline std::vector<Elem> roots_in_field(const UniPoly& a) {
  if (a.is_zero()) throw Error(Errc::invalid_argument, "roots of the zero polynomial");
  const FieldRef& field = a.field();
  const Field& F = *field;
  std::vector<Elem> out;
  if (a.degree() <= 0) return out;
  // product of distinct linear factors: gcd(a, x^Q - x)
  const UniPoly x(field, {F.zero(), F.one()});
  UniPoly xq = x % a;
  for (unsigned i = 0; i < F.degree(); ++i) xq = poly_powmod(xq, F.characteristic(), a);
  const UniPoly lin = poly_gcd(a, xq - x);
  std::mt19937_64 rng(0x5eed);
  detail::split_linear(lin, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// sum_i c_i root^i where c is the coefficient vector of `a` in `source`.
inline Elem evaluate_at_root(const Field& source, Elem a, const Field& target, Elem root) {
  if (source.degree() == 1) return target.from_int(static_cast<std::int64_t>(a.v));
  const auto c = source.coeffs(a);
  Elem r = target.zero();
  for (std::size_t i = c.size(); i-- > 0;) {
    r = target.add(target.mul(r, root), target.from_int(static_cast<std::int64_t>(c[i])));
  }
  return r;
}

/// Image of the generator of F_{p^k} in F_{p^big} under the canonical
/// embedding. The choices form a compatible system: for k | d | big the
/// composite through F_{p^d} equals the direct map. For each target the
/// maximal subfields are fixed in ascending degree order, each taking the
/// packed-smallest root of its modulus that agrees with the subfields already
/// fixed on their intersections; smaller subfields go through a maximal one.
inline Elem compatible_root(std::uint64_t p, unsigned k, unsigned big) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint64_t, unsigned, unsigned>, Elem> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find({p, k, big}); it != memo.end()) return it->second;
  }
  const FieldRef target = make_field(p, big);
  const Field& T = *target;
  Elem result{0};
  if (k == big) {
    result = T.gen();
  } else if (k == 1) {
    result = T.from_int(static_cast<std::int64_t>(make_field(p, 1)->gen().v));
  } else {
    std::vector<unsigned> maximal;
    for (std::uint64_t r : prime_factors(big)) maximal.push_back(big / static_cast<unsigned>(r));
    std::sort(maximal.begin(), maximal.end());
    const FieldRef source = make_field(p, k);
    if (std::find(maximal.begin(), maximal.end(), k) == maximal.end()) {
      const unsigned d = *std::find_if(maximal.begin(), maximal.end(), [k](unsigned m) { return m % k == 0; });
      const Elem inner = compatible_root(p, k, d);
      result = evaluate_at_root(*make_field(p, d), inner, T, compatible_root(p, d, big));
    } else {
      std::vector<Elem> mod;
      for (std::uint64_t c : source->modulus()) mod.push_back(T.from_int(static_cast<std::int64_t>(c)));
      const auto candidates = roots_in_field(UniPoly(target, std::move(mod)));
      bool found = false;
      for (Elem cand : candidates) {
        bool ok = true;
        for (unsigned d : maximal) {
          if (d >= k) break;
          const unsigned g = std::gcd(d, k);
          if (g == 1) continue;
          const Elem via_k = evaluate_at_root(*source, compatible_root(p, g, k), T, cand);
          const Elem via_d =
              evaluate_at_root(*make_field(p, d), compatible_root(p, g, d), T, compatible_root(p, d, big));
          if (!(via_k == via_d)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          result = cand;
          found = true;
          break;
        }
      }
      if (!found) throw Error(Errc::invalid_argument, "no compatible embedding root");
    }
  }
  std::lock_guard lock(mu);
  memo.emplace(std::make_tuple(p, k, big), result);
  return result;
}

}  // namespace detail

/// The embedding F_{p^k} -> F_{p^K} (k | K) sending the source's generator to
/// detail::compatible_root. When F_{p^k} is the smallest maximal subfield of
/// F_{p^K} this is the packed-smallest root of the source modulus.
class Embedding {
 public:
  Embedding(FieldRef source, FieldRef target) : source_(std::move(source)), target_(std::move(target)) {
    if (source_->characteristic() != target_->characteristic()) {
      throw Error(Errc::field_mismatch, "embedding between fields of different characteristic");
    }
    const unsigned k = source_->degree();
    const unsigned big = target_->degree();
    if (big % k != 0) {
      throw Error(Errc::degree_not_dividing,
                  "degree " + std::to_string(k) + " does not divide " + std::to_string(big));
    }
    const Field& T = *target_;
    const Elem root = detail::compatible_root(source_->characteristic(), k, big);
    basis_images_.resize(k);
    Elem pw = T.one();
    for (unsigned i = 0; i < k; ++i) {
      basis_images_[i] = pw;
      pw = T.mul(pw, root);
    }
    image_of_gen_ = root;
  }

  const FieldRef& source() const noexcept { return source_; }
  const FieldRef& target() const noexcept { return target_; }
  Elem image_of_generator() const noexcept { return image_of_gen_; }

  Elem operator()(Elem a) const {
    const Field& S = *source_;
    const Field& T = *target_;
    if (S.degree() == 1) return T.from_int(static_cast<std::int64_t>(a.v));
    Elem r = T.zero();
    const std::uint64_t p = S.characteristic();
    for (unsigned i = 0; i < S.degree(); ++i) {
      const std::uint64_t c = a.v % p;
      a.v /= p;
      if (c != 0) r = T.add(r, T.mul(T.from_int(static_cast<std::int64_t>(c)), basis_images_[i]));
    }
    return r;
  }

  UniPoly operator()(const UniPoly& a) const {
    std::vector<Elem> c;
    c.reserve(a.coeffs().size());
    for (Elem e : a.coeffs()) c.push_back((*this)(e));
    return {target_, std::move(c)};
  }

 private:
  FieldRef source_;
  FieldRef target_;
  std::vector<Elem> basis_images_;
  Elem image_of_gen_{};
};

inline FieldElem embed(const FieldElem& a, const FieldRef& target) {
  return {target, Embedding(a.field(), target)(a.value())};
}

}  // namespace pointless::gf
