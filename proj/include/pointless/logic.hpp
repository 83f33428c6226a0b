#pragma once

// Normalisation of existential sentences into polynomial systems, and the
// simulated reduction from sets of primes to existential theories, where a
// field is abstracted by the residue degrees of its places.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/mpoly.hpp"
#include "pointless/sentence.hpp"
#include "pointless/testvar.hpp"

namespace pointless::logic {

// ---------------------------------------------------------------------------
// Normal form

struct Atom {
  bool equality = true;
  Expr lhs, rhs;
};

/// Disjunctive normal form: a list of conjunctions of atoms.
inline std::vector<std::vector<Atom>> dnf(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::eq:
    case Formula::Kind::neq:
      return {{Atom{f.kind == Formula::Kind::eq, f.sides[0], f.sides[1]}}};
    case Formula::Kind::disj: {
      std::vector<std::vector<Atom>> out;
      for (const auto& c : f.children) {
        auto sub = dnf(c);
        out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
      }
      return out;
    }
    case Formula::Kind::conj: {
      std::vector<std::vector<Atom>> out{{}};
      for (const auto& c : f.children) {
        const auto sub = dnf(c);
        std::vector<std::vector<Atom>> next;
        for (const auto& a : out) {
          for (const auto& b : sub) {
            auto merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
          }
        }
        out = std::move(next);
      }
      return out;
    }
  }
  return {};
}

/// One system per disjunct of the DNF; each inequality f != g becomes
/// (f - g) z - 1 = 0 in a fresh variable z. The sentence is satisfiable over
/// an extension of F_{p^k} iff one of the systems has a zero there.
inline std::vector<PolySystem> normalize(const Sentence& s) {
  const FieldRef F = gf::make_field(s.p, s.k);
  const std::set<std::string> taken(s.vars.begin(), s.vars.end());
  std::vector<PolySystem> out;
  for (const auto& conj : dnf(s.body)) {
    std::vector<std::string> names = s.vars;
    for (const auto& a : conj) {
      if (a.equality) continue;
      std::string z = "z" + std::to_string(names.size() - s.vars.size());
      while (taken.count(z)) z = "_" + z;
      names.push_back(z);
    }
    std::vector<MPoly> eqs;
    std::size_t fresh = s.vars.size();
    for (const auto& a : conj) {
      MPoly f = to_mpoly(a.lhs, F, names) - to_mpoly(a.rhs, F, names);
      if (!a.equality) f = f * MPoly::variable(F, names.size(), fresh++) - MPoly::constant(F, names.size(), F->one());
      eqs.push_back(std::move(f));
    }
    out.emplace_back(F, std::move(names), std::move(eqs));
  }
  return out;
}

/// Whether some assignment over the degree-m extension satisfies the body,
/// by direct evaluation of the formula (no normal form involved).
inline bool satisfiable_brute(const Sentence& s, unsigned m, std::uint64_t cap = kDefaultEnumerationCap) {
  if (m == 0) throw Error(Errc::invalid_argument, "extension degree must be positive");
  const FieldRef F = gf::make_field(s.p, s.k);
  const FieldRef E = gf::make_field(s.p, s.k * m);
  const gf::Embedding emb(F, E);
  const std::size_t nv = s.vars.size();
  if (ipow(BigInt(E->size()), nv) > cap) {
    throw Error(Errc::cap_exceeded, "assignment space exceeds cap " + std::to_string(cap));
  }
  struct Node {
    Formula::Kind kind;
    std::vector<Node> children;
    std::vector<std::pair<Elem, Monomial>> terms;
  };
  std::function<Node(const Formula&)> compile = [&](const Formula& f) {
    Node n{f.kind, {}, {}};
    if (f.kind == Formula::Kind::eq || f.kind == Formula::Kind::neq) {
      const MPoly d = to_mpoly(f.sides[0], F, s.vars) - to_mpoly(f.sides[1], F, s.vars);
      for (const auto& [mono, c] : d.terms()) n.terms.emplace_back(emb(c), mono);
    } else {
      for (const auto& c : f.children) n.children.push_back(compile(c));
    }
    return n;
  };
  const Node root = compile(s.body);
  const gf::Field& K = *E;
  std::vector<Elem> pt(nv, Elem{0});
  std::function<bool(const Node&)> holds = [&](const Node& n) -> bool {
    switch (n.kind) {
      case Formula::Kind::conj:
        return std::all_of(n.children.begin(), n.children.end(), holds);
      case Formula::Kind::disj:
        return std::any_of(n.children.begin(), n.children.end(), holds);
      case Formula::Kind::eq:
      case Formula::Kind::neq: {
        Elem acc{0};
        for (const auto& [c, mono] : n.terms) {
          Elem t = c;
          for (std::size_t i = 0; i < nv; ++i) {
            if (mono[i]) t = K.mul(t, K.pow(pt[i], mono[i]));
          }
          acc = K.add(acc, t);
        }
        return (acc.v == 0) == (n.kind == Formula::Kind::eq);
      }
    }
    return false;
  };
  while (true) {
    if (holds(root)) return true;
    std::size_t i = 0;
    while (i < nv && ++pt[i].v == K.size()) pt[i++].v = 0;
    if (i == nv) return false;
  }
}

// ---------------------------------------------------------------------------
// Place-degree profiles

/// Number of monic irreducible polynomials of degree d over F_p.
inline BigInt degree_count(std::uint64_t p, std::uint64_t d) {
  if (d == 0) throw Error(Errc::invalid_argument, "degree must be positive");
  const auto mobius = [](std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
      if (n % f) continue;
      n /= f;
      if (n % f == 0) return 0;
      mu = -mu;
    }
    return n > 1 ? -mu : mu;
  };
  BigInt sum = 0;
  for (std::uint64_t e = 1; e <= d; ++e) {
    if (d % e) continue;
    const int mu = mobius(e);
    if (mu) sum += mu * ipow(BigInt(p), d / e);
  }
  return sum / d;
}

/// The residue degrees realised by the places of a field, as a predicate.
struct PlaceProfile {
  std::uint64_t p = 2;
  std::function<bool(std::uint64_t)> rule;
  /// Explicit answers taking precedence over the rule.
  std::map<std::uint64_t, bool> overrides;
  std::string provenance;

  bool occurs(std::uint64_t d) const {
    if (d == 0) return false;
    if (auto it = overrides.find(d); it != overrides.end()) return it->second;
    return rule(d);
  }
};

/// Places of F_p(t) above F_p[t]: one per monic irreducible, so every degree occurs.
inline PlaceProfile base_profile(std::uint64_t p) {
  if (!gf::is_prime(p)) throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
  return {p, [p](std::uint64_t d) { return degree_count(p, d) > 0; }, {}, "base"};
}

struct Prescription {
  std::set<std::uint64_t> s1;  // split completely
  std::set<std::uint64_t> s2;  // inert below 4 max(S2)
  /// Degree multiplier for places above 4 max(S2): 1, 2 or 4.
  unsigned multiplier = 4;

  std::uint64_t inert_bound() const { return s2.empty() ? 0 : 4 * *s2.rbegin(); }
};

inline std::string to_string(const std::set<std::uint64_t>& s) {
  std::string out = "{";
  for (auto it = s.begin(); it != s.end(); ++it) out += (it == s.begin() ? "" : ",") + std::to_string(*it);
  return out + "}";
}

inline void validate(const Prescription& pres) {
  for (const auto* set : {&pres.s1, &pres.s2}) {
    for (std::uint64_t l : *set) {
      if (l <= 4 || !gf::is_prime(l)) {
        throw Error(Errc::prescription_invalid, "prescription member " + std::to_string(l) + " is not a prime > 4");
      }
    }
  }
  for (std::uint64_t l : pres.s1) {
    if (pres.s2.count(l)) throw Error(Errc::prescription_invalid, "S1 and S2 share " + std::to_string(l));
  }
  if (pres.multiplier != 1 && pres.multiplier != 2 && pres.multiplier != 4) {
    throw Error(Errc::prescription_invalid, "multiplier must be 1, 2 or 4");
  }
}

struct ConditionCheck {
  bool ok = true;
  std::string failure;
};

/// (1) every l in S1 occurs; (2) lcm(l, d) >= 4l for l in S2 and every
/// occurring d (only d < 4l can fail).
inline ConditionCheck check_conditions(const PlaceProfile& prof, const Prescription& pres) {
  for (std::uint64_t l : pres.s1) {
    if (!prof.occurs(l)) return {false, "condition (1): degree " + std::to_string(l) + " does not occur"};
  }
  for (std::uint64_t l : pres.s2) {
    for (std::uint64_t d = 1; d < 4 * l; ++d) {
      if (prof.occurs(d) && std::lcm(l, d) < 4 * l) {
        return {false, "condition (2): degree " + std::to_string(d) + " occurs and lcm(" + std::to_string(l) + ", " +
                           std::to_string(d) + ") < " + std::to_string(4 * l)};
      }
    }
  }
  return {};
}

/// Residue degrees after a degree-4 extension that splits the places of
/// degree in S1, is inert at the others up to 4 max(S2), and multiplies
/// larger degrees by pres.multiplier. Throws AssertionFailed if the result
/// violates condition (1) or (2).
inline PlaceProfile apply_prescription(const PlaceProfile& parent, const Prescription& pres) {
  validate(pres);
  PlaceProfile out;
  out.p = parent.p;
  out.provenance = "extension-of(" + parent.provenance + ", S1=" + to_string(pres.s1) + ", S2=" +
                   to_string(pres.s2) + ", e=" + std::to_string(pres.multiplier) + ")";
  auto base = std::make_shared<const PlaceProfile>(parent);
  out.rule = [base, pres](std::uint64_t d2) {
    const std::uint64_t bound = pres.inert_bound();
    if (pres.s1.count(d2) && base->occurs(d2)) return true;
    if (d2 % 4 == 0) {
      const std::uint64_t d = d2 / 4;
      if (!pres.s1.count(d) && d <= bound && base->occurs(d)) return true;
    }
    if (d2 % pres.multiplier == 0) {
      const std::uint64_t d = d2 / pres.multiplier;
      if (!pres.s1.count(d) && d > bound && base->occurs(d)) return true;
    }
    return false;
  };
  const ConditionCheck check = check_conditions(out, pres);
  if (!check.ok) throw AssertionFailed(0, "prescription result fails " + check.failure);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation and the reduction

/// Degrees d at which V can be empty: lcm(d, n) < 4n. For n = l prime these
/// are 1, 2, 3, l, 2l, 3l.
inline std::vector<std::uint64_t> query_degrees(unsigned n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d < 4 * std::uint64_t{n}; ++d) {
    if (std::lcm(d, std::uint64_t{n}) < 4 * std::uint64_t{n}) out.push_back(d);
  }
  return out;
}

/// V has a point over the residue field of every place of the profile.
/// False as soon as an occurring queried degree is known empty; Undetermined
/// if an occurring degree is in the gap of a bullet-backed V.
inline bool evaluate(const testvar::TestVariety& v, const PlaceProfile& prof) {
  if (v.q != prof.p) throw Error(Errc::invalid_argument, "variety and profile live over different primes");
  std::vector<std::uint64_t> unknown;
  for (std::uint64_t d : query_degrees(v.n)) {
    if (!prof.occurs(d)) continue;
    switch (testvar::point_status(v, static_cast<unsigned>(d))) {
      case testvar::PointStatus::empty: return false;
      case testvar::PointStatus::unknown: unknown.push_back(d); break;
      case testvar::PointStatus::nonempty: break;
    }
  }
  if (!unknown.empty()) {
    throw Error(Errc::undetermined, "V(F_q^" + std::to_string(unknown.front()) + ") is not determined");
  }
  return true;
}

using PrimeSet = std::function<bool(std::uint64_t)>;

/// Named sample sets: "mod4eq1", "evenbin" (even binary digit sum), "all",
/// "none", or "list:5,13,17".
inline PrimeSet sample_set(const std::string& spec) {
  if (spec == "mod4eq1") return [](std::uint64_t l) { return l % 4 == 1; };
  if (spec == "evenbin") return [](std::uint64_t l) { return std::popcount(l) % 2 == 0; };
  if (spec == "all") return [](std::uint64_t) { return true; };
  if (spec == "none") return [](std::uint64_t) { return false; };
  if (spec.rfind("list:", 0) == 0) {
    std::set<std::uint64_t> members;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto v = detail::parse_int(item);
      if (!v || *v < 0) throw Error(Errc::invalid_argument, "bad list member '" + item + "'");
      members.insert(static_cast<std::uint64_t>(*v));
    }
    return [members](std::uint64_t l) { return members.count(l) > 0; };
  }
  throw Error(Errc::invalid_argument, "unknown set '" + spec + "' (mod4eq1, evenbin, all, none, list:a,b,...)");
}

struct ReductionResult {
  std::uint64_t l = 0;
  bool value = false;
  testvar::Backing backing = testvar::Backing::certificate;
  Prescription prescription;
  /// Query degrees that occur in the extension profile.
  std::vector<std::uint64_t> occurring;
};

/// Decides l in S through the sentence "V_l has a point": primes 4 < r <= 3l
/// go to S1 if r is not in S and to S2 otherwise, the prescription is applied
/// to the base profile and V_l is evaluated against the result.
inline ReductionResult reduction_check(const PrimeSet& s, std::uint64_t l, std::uint64_t p = 2,
                                       const testvar::BuildOptions& opts = {}) {
  if (l <= 4 || !gf::is_prime(l)) throw Error(Errc::invalid_argument, "l must be a prime > 4");
  ReductionResult r;
  r.l = l;
  for (std::uint64_t x = 5; x <= 3 * l; ++x) {
    if (!gf::is_prime(x)) continue;
    (s(x) ? r.prescription.s2 : r.prescription.s1).insert(x);
  }
  const PlaceProfile prof = apply_prescription(base_profile(p), r.prescription);
  const testvar::TestVariety v = testvar::build_test_variety(p, static_cast<unsigned>(l), opts);
  r.backing = v.backing;
  for (std::uint64_t d : query_degrees(v.n)) {
    if (prof.occurs(d)) r.occurring.push_back(d);
  }
  r.value = evaluate(v, prof);
  return r;
}

/// The sentence "the compiled chart of V has a zero".
inline Sentence encode_variety(const testvar::TestVariety& v) {
  if (!v.compiled) throw Error(Errc::not_compiled, "test variety has no compiled restriction");
  return to_sentence(v.compiled->target);
}

}  // namespace pointless::logic
