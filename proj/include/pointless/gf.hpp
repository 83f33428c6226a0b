#pragma once

// Arithmetic in explicit finite fields F_{p^k}.
//
// An element is stored packed as the integer sum c_i p^i of its coefficient
// vector with respect to the power basis 1, x, ..., x^{k-1}. Comparing packed
// values therefore compares coefficient tuples (c_{k-1}, ..., c_0)
// lexicographically. In characteristic 2 the packed value is the bitmask.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pointless/error.hpp"

namespace pointless::gf {

/// Largest representable field size.
inline constexpr std::uint64_t kMaxFieldSize = std::uint64_t{1} << 40;
/// Fields at most this large get discrete-log tables on first multiplication.
inline constexpr std::uint64_t kLogTableThreshold = std::uint64_t{1} << 20;
/// Maximum extension degree supported (2^40 caps it anyway).
inline constexpr unsigned kMaxDegree = 40;

struct Elem {
  std::uint64_t v = 0;
  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1U;
  }
  return r;
}

/// Prime factors of n (distinct, ascending) by trial division.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p with machine-word coefficients, low degree first.
// Used only to select the field modulus.
using PolyP = std::vector<std::uint64_t>;

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP poly_mod(PolyP a, const PolyP& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t inv_lead = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const std::uint64_t c = mulmod(a.back(), inv_lead, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t j = 0; j <= dm; ++j) {
      a[shift + j] = (a[shift + j] + p - mulmod(c, m[j], p)) % p;
    }
    trim(a);
  }
  return a;
}

inline PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
  }
  return poly_mod(std::move(r), m, p);
}

inline PolyP poly_powmod(PolyP base, std::uint64_t e, const PolyP& m, std::uint64_t p) {
  PolyP r{1};
  base = poly_mod(std::move(base), m, p);
  while (e != 0) {
    if (e & 1U) r = poly_mulmod(r, base, m, p);
    e >>= 1U;
    if (e != 0) base = poly_mulmod(base, base, m, p);
  }
  return r;
}

inline PolyP poly_gcd(PolyP a, PolyP b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's test: f (monic, degree k) is irreducible over F_p iff
/// x^{p^k} = x mod f and gcd(x^{p^{k/r}} - x, f) = 1 for every prime r | k.
inline bool is_irreducible(const PolyP& f, std::uint64_t p) {
  const std::size_t k = f.size() - 1;
  if (k == 1) return true;
  // x^{p^i} mod f for i = 0..k
  std::vector<PolyP> frob(k + 1);
  frob[0] = poly_mod(PolyP{0, 1}, f, p);
  for (std::size_t i = 1; i <= k; ++i) frob[i] = poly_powmod(frob[i - 1], p, f, p);
  if (frob[k] != frob[0]) return false;
  for (std::uint64_t r : prime_factors(k)) {
    PolyP d = frob[k / r];
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    trim(d);
    if (d.empty()) return false;
    if (poly_gcd(d, f, p).size() != 1) return false;
  }
  return true;
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// If q = p^k for a prime p, returns (p, k).
inline std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  for (std::uint64_t p : detail::prime_factors(q)) {
    unsigned k = 0;
    std::uint64_t r = q;
    while (r % p == 0) {
      r /= p;
      ++k;
    }
    if (r == 1) return std::make_pair(p, k);
    return std::nullopt;
  }
  return std::nullopt;
}

class Field;
using FieldRef = std::shared_ptr<const Field>;

FieldRef make_field(std::uint64_t p, unsigned k);

/// The finite field F_p[x]/(modulus). Immutable once built; obtain through
/// make_field.
class Field {
 public:
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  std::uint64_t characteristic() const noexcept { return p_; }
  unsigned degree() const noexcept { return k_; }
  std::uint64_t size() const noexcept { return q_; }
  /// Coefficients c_0..c_k of the monic modulus.
  const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }

  Elem zero() const noexcept { return {0}; }
  Elem one() const noexcept { return {1}; }
  /// The class of x, i.e. the root of the modulus defining the field.
  Elem gen() const noexcept { return k_ == 1 ? Elem{(p_ - modulus_[0]) % p_} : Elem{p_}; }
  bool contains(Elem a) const noexcept { return a.v < q_; }

  /// Image of an integer in the prime field.
  Elem from_int(std::int64_t n) const noexcept {
    const auto p = static_cast<std::int64_t>(p_);
    std::int64_t r = n % p;
    if (r < 0) r += p;
    return {static_cast<std::uint64_t>(r)};
  }

  Elem from_coeffs(std::span<const std::uint64_t> c) const {
    if (c.size() > k_) throw Error(Errc::invalid_argument, "too many coefficients for field element");
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= p_) throw Error(Errc::invalid_argument, "coefficient out of range");
      v = v * p_ + c[i];
    }
    return {v};
  }

  std::vector<std::uint64_t> coeffs(Elem a) const {
    std::vector<std::uint64_t> c(k_, 0);
    if (p_ == 2) {
      for (unsigned i = 0; i < k_; ++i) c[i] = (a.v >> i) & 1U;
    } else {
      for (unsigned i = 0; i < k_; ++i) {
        c[i] = a.v % p_;
        a.v /= p_;
      }
    }
    return c;
  }

  Elem add(Elem a, Elem b) const noexcept {
    if (p_ == 2) return {a.v ^ b.v};
    if (k_ == 1) {
      const std::uint64_t s = a.v + b.v;
      return {s >= p_ ? s - p_ : s};
    }
    std::uint64_t r = 0, scale = 1;
    for (unsigned i = 0; i < k_; ++i) {
      std::uint64_t d = a.v % p_ + b.v % p_;
      if (d >= p_) d -= p_;
      r += d * scale;
      scale *= p_;
      a.v /= p_;
      b.v /= p_;
    }
    return {r};
  }

  Elem neg(Elem a) const noexcept {
    if (p_ == 2) return a;
    if (k_ == 1) return {a.v == 0 ? 0 : p_ - a.v};
    std::uint64_t r = 0, scale = 1;
    for (unsigned i = 0; i < k_; ++i) {
      const std::uint64_t d = a.v % p_;
      r += (d == 0 ? 0 : p_ - d) * scale;
      scale *= p_;
      a.v /= p_;
    }
    return {r};
  }

  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a.v == 0 || b.v == 0) return {0};
    if (k_ == 1) return {detail::mulmod(a.v, b.v, p_)};
    if (const Tables* t = tables()) {
      std::uint64_t e = t->log[a.v] + t->log[b.v];
      if (e >= q_ - 1) e -= q_ - 1;
      return {t->exp[e]};
    }
    return mul_slow(a, b);
  }

  Elem sqr(Elem a) const { return mul(a, a); }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e != 0) {
      if (e & 1U) r = mul(r, a);
      e >>= 1U;
      if (e != 0) a = mul(a, a);
    }
    return r;
  }

  Elem inv(Elem a) const {
    if (a.v == 0) throw Error(Errc::invalid_argument, "inverse of zero");
    if (k_ > 1) {
      if (const Tables* t = tables()) {
        const std::uint64_t l = t->log[a.v];
        return {t->exp[l == 0 ? 0 : q_ - 1 - l]};
      }
    }
    return pow(a, q_ - 2);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// x -> x^p.
  Elem frobenius(Elem a) const { return pow(a, p_); }

  /// Absolute trace to F_p, returned as an integer in [0, p).
  std::uint64_t absolute_trace(Elem a) const noexcept {
    if (p_ == 2) return static_cast<std::uint64_t>(std::popcount(a.v & trace_mask_) & 1);
    std::uint64_t t = 0;
    for (unsigned i = 0; i < k_; ++i) {
      t = (t + detail::mulmod(a.v % p_, trace_basis_[i], p_)) % p_;
      a.v /= p_;
    }
    return t;
  }

  /// Quadratic character for odd p: 0 at zero, 1 on nonzero squares, -1 otherwise.
  /// In characteristic 2 every element is a square.
  int quadratic_character(Elem a) const {
    if (a.v == 0) return 0;
    if (p_ == 2) return 1;
    if (k_ > 1) {
      if (const Tables* t = tables()) return (t->log[a.v] & 1U) ? -1 : 1;
    }
    return pow(a, (q_ - 1) / 2) == one() ? 1 : -1;
  }

  /// Unique square root in characteristic 2 (the inverse Frobenius).
  Elem sqrt_char2(Elem a) const { return pow(a, q_ / 2); }

  std::uint64_t multiplicative_order(Elem a) const {
    if (a.v == 0) throw Error(Errc::invalid_argument, "order of zero");
    std::uint64_t order = q_ - 1;
    for (std::uint64_t r : detail::prime_factors(q_ - 1)) {
      while (order % r == 0 && pow(a, order / r) == one()) order /= r;
    }
    return order;
  }

  /// Smallest packed element generating the multiplicative group.
  Elem primitive_element() const {
    if (q_ == 2) return one();
    const auto factors = detail::prime_factors(q_ - 1);
    for (std::uint64_t v = 2; v < q_; ++v) {
      const Elem g{v};
      bool ok = true;
      for (std::uint64_t r : factors) {
        if (pow(g, (q_ - 1) / r) == one()) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    throw Error(Errc::invalid_argument, "no primitive element found");
  }

  std::string to_string(Elem a) const {
    if (k_ == 1) return std::to_string(a.v);
    std::string s = "[";
    const auto c = coeffs(a);
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
    return s + "]";
  }

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.p_ == b.p_ && a.k_ == b.k_ && a.modulus_ == b.modulus_;
  }

  /// Schoolbook product, bypassing the log tables.
  Elem mul_slow(Elem a, Elem b) const noexcept {
    if (p_ == 2) {
      std::uint64_t r = 0, x = a.v, y = b.v;
      const std::uint64_t top = std::uint64_t{1} << k_;
      while (y != 0) {
        if (y & 1U) r ^= x;
        y >>= 1U;
        x <<= 1U;
        if (x & top) x ^= modmask_;
      }
      return {r};
    }
    if (k_ == 1) return {detail::mulmod(a.v, b.v, p_)};
    std::array<std::uint64_t, kMaxDegree> da{}, db{};
    std::array<std::uint64_t, 2 * kMaxDegree> prod{};
    for (unsigned i = 0; i < k_; ++i) {
      da[i] = a.v % p_;
      a.v /= p_;
      db[i] = b.v % p_;
      b.v /= p_;
    }
    for (unsigned i = 0; i < k_; ++i) {
      if (da[i] == 0) continue;
      for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    }
    for (unsigned i = 2 * k_ - 2; i >= k_; --i) {
      const std::uint64_t c = prod[i];
      if (c == 0) continue;
      // x^k = -(c_0 + ... + c_{k-1} x^{k-1})
      for (unsigned j = 0; j < k_; ++j) {
        prod[i - k_ + j] = (prod[i - k_ + j] + c * (p_ - modulus_[j])) % p_;
      }
    }
    std::uint64_t r = 0;
    for (unsigned i = k_; i-- > 0;) r = r * p_ + prod[i];
    return {r};
  }

 private:
  friend FieldRef make_field(std::uint64_t p, unsigned k);

  struct Tables {
    std::vector<std::uint32_t> exp;  // exp[i] = g^i, i < q-1
    std::vector<std::uint32_t> log;  // log[g^i] = i, log[0] unused
  };

  Field(std::uint64_t p, unsigned k, std::vector<std::uint64_t> modulus)
      : p_(p), k_(k), modulus_(std::move(modulus)) {
    q_ = 1;
    for (unsigned i = 0; i < k_; ++i) q_ *= p_;
    if (p_ == 2) {
      for (unsigned i = 0; i <= k_; ++i) {
        if (modulus_[i]) modmask_ |= std::uint64_t{1} << i;
      }
    }
    // Tr(x^i) for each basis element.
    trace_basis_.assign(k_, 0);
    for (unsigned i = 0; i < k_; ++i) {
      Elem basis{0};
      if (p_ == 2) {
        basis.v = std::uint64_t{1} << i;
      } else {
        std::uint64_t v = 1;
        for (unsigned j = 0; j < i; ++j) v *= p_;
        basis.v = v;
      }
      Elem acc{0}, cur = basis;
      for (unsigned j = 0; j < k_; ++j) {
        acc = add(acc, cur);
        cur = pow_slow(cur, p_);
      }
      trace_basis_[i] = acc.v;  // lies in F_p, packed value is the integer
      if (p_ == 2 && acc.v) trace_mask_ |= std::uint64_t{1} << i;
    }
  }

  Elem pow_slow(Elem a, std::uint64_t e) const noexcept {
    Elem r{1};
    while (e != 0) {
      if (e & 1U) r = mul_slow(r, a);
      e >>= 1U;
      if (e != 0) a = mul_slow(a, a);
    }
    return r;
  }

  const Tables* tables() const {
    if (q_ > kLogTableThreshold || k_ == 1) return nullptr;
    std::call_once(tables_once_, [this] {
      auto t = std::make_unique<Tables>();
      t->exp.resize(q_ - 1);
      t->log.assign(q_, 0);
      // primitive element via slow arithmetic
      const auto factors = detail::prime_factors(q_ - 1);
      Elem g{1};
      for (std::uint64_t v = 2; v < q_; ++v) {
        bool ok = true;
        for (std::uint64_t r : factors) {
          if (pow_slow(Elem{v}, (q_ - 1) / r) == Elem{1}) {
            ok = false;
            break;
          }
        }
        if (ok) {
          g = Elem{v};
          break;
        }
      }
      Elem cur{1};
      for (std::uint64_t i = 0; i < q_ - 1; ++i) {
        t->exp[i] = static_cast<std::uint32_t>(cur.v);
        t->log[cur.v] = static_cast<std::uint32_t>(i);
        cur = mul_slow(cur, g);
      }
      tables_ = std::move(t);
    });
    return tables_.get();
  }

  std::uint64_t p_;
  unsigned k_;
  std::uint64_t q_ = 1;
  std::vector<std::uint64_t> modulus_;
  std::uint64_t modmask_ = 0;
  std::uint64_t trace_mask_ = 0;
  std::vector<std::uint64_t> trace_basis_;
  mutable std::once_flag tables_once_;
  mutable std::unique_ptr<const Tables> tables_;
};

/// Checked p^k; nullopt when it exceeds kMaxFieldSize.
inline std::optional<std::uint64_t> checked_field_size(std::uint64_t p, unsigned k) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (q > kMaxFieldSize / p) return std::nullopt;
    q *= p;
  }
  return q;
}

/// The canonical F_{p^k}: its modulus is the lexicographically smallest monic
/// irreducible of degree k, comparing (c_{k-1}, ..., c_0). Repeated calls
/// return the same shared instance.
inline FieldRef make_field(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
  if (k == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  if (!checked_field_size(p, k)) {
    throw Error(Errc::size_cap_exceeded,
                "F_" + std::to_string(p) + "^" + std::to_string(k) + " exceeds the 2^40 size cap");
  }
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, FieldRef> registry;
  {
    std::lock_guard lock(mu);
    if (auto it = registry.find({p, k}); it != registry.end()) return it->second;
  }
  std::vector<std::uint64_t> modulus(k + 1, 0);
  modulus[k] = 1;
  if (k > 1) {
    // candidate t enumerates (c_{k-1}, ..., c_0) in ascending lexicographic order
    const std::uint64_t count = *checked_field_size(p, k);
    bool found = false;
    for (std::uint64_t t = 0; t < count && !found; ++t) {
      std::uint64_t v = t;
      for (unsigned i = 0; i < k; ++i) {
        modulus[i] = v % p;
        v /= p;
      }
      if (modulus[0] == 0) continue;
      found = detail::is_irreducible(modulus, p);
    }
    if (!found) throw Error(Errc::invalid_argument, "no irreducible polynomial found");
  }
  FieldRef field(new Field(p, k, std::move(modulus)));
  std::lock_guard lock(mu);
  return registry.try_emplace({p, k}, std::move(field)).first->second;
}

/// Element bundled with its field, for convenient value-style arithmetic.
class FieldElem {
 public:
  FieldElem(FieldRef field, Elem value) : field_(std::move(field)), value_(value) {
    if (!field_->contains(value_)) throw Error(Errc::invalid_argument, "element outside field");
  }

  const FieldRef& field() const noexcept { return field_; }
  Elem value() const noexcept { return value_; }
  std::vector<std::uint64_t> coeffs() const { return field_->coeffs(value_); }
  bool is_zero() const noexcept { return value_.v == 0; }

  FieldElem pow(std::uint64_t e) const { return {field_, field_->pow(value_, e)}; }
  FieldElem inv() const { return {field_, field_->inv(value_)}; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->add(a.value_, b.value_)};
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->sub(a.value_, b.value_)};
  }
  friend FieldElem operator-(const FieldElem& a) { return {a.field_, a.field_->neg(a.value_)}; }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->mul(a.value_, b.value_)};
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->div(a.value_, b.value_)};
  }
  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return *a.field_ == *b.field_ && a.value_ == b.value_;
  }

 private:
  static void check_same(const FieldElem& a, const FieldElem& b) {
    if (a.field_ != b.field_ && !(*a.field_ == *b.field_)) {
      throw Error(Errc::field_mismatch, "operands live in different fields");
    }
  }

  FieldRef field_;
  Elem value_;
};

/// Number of y in F with y^2 + h0*y = c.
inline int solve_quadratic_count(const Field& field, Elem h0, Elem c) {
  if (field.characteristic() != 2) {
    const Elem disc = field.add(field.sqr(h0), field.mul(field.from_int(4), c));
    return 1 + field.quadratic_character(disc);
  }
  if (h0.v == 0) return 1;
  const Elem t = field.div(c, field.sqr(h0));
  return field.absolute_trace(t) == 0 ? 2 : 0;
}

inline int solve_quadratic_count(const FieldElem& h0, const FieldElem& c) {
  if (!(*h0.field() == *c.field())) throw Error(Errc::field_mismatch, "h0 and c in different fields");
  return solve_quadratic_count(*h0.field(), h0.value(), c.value());
}

struct TensorSplit {
  std::uint64_t lcm_degree;
  std::uint64_t copies;
  friend bool operator==(const TensorSplit&, const TensorSplit&) = default;
};

/// F_{q^m} (x)_{F_q} F_{q^n} is a product of `copies` copies of F_{q^lcm_degree}.
inline TensorSplit tensor_split(std::uint64_t m, std::uint64_t n) {
  if (m == 0 || n == 0) throw Error(Errc::invalid_argument, "tensor_split needs positive degrees");
  const std::uint64_t l = std::lcm(m, n);
  return {l, m * n / l};
}

}  // namespace pointless::gf
