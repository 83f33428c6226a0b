#pragma once

// Existential sentences as s-expressions.
//
//   header   := "p: <prime>" [ "k: <degree>" ]     (lines before the sentence)
//   sentence := "(exists (" var* ")" formula ")"
//   formula  := "(and" formula* ")" | "(or" formula* ")"
//             | "(=" poly poly ")" | "(!=" poly poly ")"
//   poly     := integer | var | "(elt" integer* ")"
//             | "(+" poly+ ")" | "(*" poly+ ")" | "(^" poly integer ")"
//
// Integers may be negative and are read mod p. (elt c0 c1 ...) is
// c0 + c1 x + ... in F_{p^k}. Lines starting with ';' are comments.

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/mpoly.hpp"

namespace pointless::logic {

struct Expr {
  enum class Kind { integer, element, var, add, mul, pow };
  Kind kind = Kind::integer;
  std::int64_t value = 0;              // integer literal
  std::vector<std::int64_t> digits;    // element literal
  std::string name;                    // variable
  std::vector<Expr> args;              // add, mul, pow base
  std::uint32_t exponent = 0;          // pow

  static Expr integer(std::int64_t v) { return {Kind::integer, v, {}, {}, {}, 0}; }
  static Expr var(std::string n) { return {Kind::var, 0, {}, std::move(n), {}, 0}; }
  static Expr add(std::vector<Expr> a) { return {Kind::add, 0, {}, {}, std::move(a), 0}; }
  static Expr mul(std::vector<Expr> a) { return {Kind::mul, 0, {}, {}, std::move(a), 0}; }
  static Expr pow(Expr b, std::uint32_t e) { return {Kind::pow, 0, {}, {}, {std::move(b)}, e}; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Formula {
  enum class Kind { conj, disj, eq, neq };
  Kind kind = Kind::conj;
  std::vector<Formula> children;  // conj, disj
  std::vector<Expr> sides;        // eq, neq: lhs, rhs

  static Formula conj(std::vector<Formula> c) { return {Kind::conj, std::move(c), {}}; }
  static Formula disj(std::vector<Formula> c) { return {Kind::disj, std::move(c), {}}; }
  static Formula eq(Expr l, Expr r) { return {Kind::eq, {}, {std::move(l), std::move(r)}}; }
  static Formula neq(Expr l, Expr r) { return {Kind::neq, {}, {std::move(l), std::move(r)}}; }

  friend bool operator==(const Formula&, const Formula&) = default;
};

/// Existential closure of `body` over F_{p^k}.
struct Sentence {
  std::uint64_t p = 2;
  unsigned k = 1;
  std::vector<std::string> vars;
  Formula body;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text, std::size_t offset = 0) : text_(text), pos_(offset) {}

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw SyntaxError(at, what);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  std::size_t pos() const noexcept { return pos_; }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended", pos_);
    if (text_[pos_] != c) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  /// Next atom (maximal run of non-space, non-paren characters).
  std::string_view atom() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';') break;
      ++pos_;
    }
    if (start == pos_) fail(pos_ >= text_.size() ? "unexpected end of input" : "expected an atom", start);
    return text_.substr(start, pos_ - start);
  }

 private:
  std::string_view text_;
  std::size_t pos_;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  for (char c : s) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return !(s == "exists" || s == "and" || s == "or" || s == "elt");
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t offset, const std::set<std::string>& bound)
      : in_(text, offset), bound_(bound) {}

  Reader& reader() { return in_; }

  Expr poly() {
    if (!in_.peek('(')) {
      const std::size_t at = (in_.skip_space(), in_.pos());
      const std::string_view a = in_.atom();
      if (auto v = parse_int(a)) return Expr::integer(*v);
      if (!is_identifier(a)) in_.fail("expected integer or variable, got '" + std::string(a) + "'", at);
      if (!bound_.count(std::string(a))) in_.fail("unbound variable '" + std::string(a) + "'", at);
      return Expr::var(std::string(a));
    }
    in_.expect('(');
    const std::size_t at = (in_.skip_space(), in_.pos());
    const std::string_view op = in_.atom();
    Expr e;
    if (op == "+" || op == "*") {
      std::vector<Expr> args;
      while (!in_.peek(')')) args.push_back(poly());
      if (args.empty()) in_.fail("'" + std::string(op) + "' needs at least one argument", at);
      e = op == "+" ? Expr::add(std::move(args)) : Expr::mul(std::move(args));
    } else if (op == "^") {
      Expr base = poly();
      const std::size_t eat = (in_.skip_space(), in_.pos());
      const auto ex = parse_int(in_.atom());
      if (!ex || *ex < 0 || *ex > 1'000'000) in_.fail("exponent must be a nonnegative integer", eat);
      e = Expr::pow(std::move(base), static_cast<std::uint32_t>(*ex));
    } else if (op == "elt") {
      e.kind = Expr::Kind::element;
      while (!in_.peek(')')) {
        const std::size_t dat = (in_.skip_space(), in_.pos());
        const auto d = parse_int(in_.atom());
        if (!d) in_.fail("element digits must be integers", dat);
        e.digits.push_back(*d);
      }
    } else {
      in_.fail("unknown operator '" + std::string(op) + "'", at);
    }
    in_.expect(')');
    return e;
  }

  Formula formula() {
    in_.expect('(');
    const std::size_t at = (in_.skip_space(), in_.pos());
    const std::string_view op = in_.atom();
    Formula f;
    if (op == "and" || op == "or") {
      std::vector<Formula> c;
      while (!in_.peek(')')) c.push_back(formula());
      f = op == "and" ? Formula::conj(std::move(c)) : Formula::disj(std::move(c));
    } else if (op == "=" || op == "!=") {
      Expr l = poly();
      Expr r = poly();
      f = op == "=" ? Formula::eq(std::move(l), std::move(r)) : Formula::neq(std::move(l), std::move(r));
    } else {
      in_.fail("unknown connective '" + std::string(op) + "'", at);
    }
    in_.expect(')');
    return f;
  }

 private:
  Reader in_;
  const std::set<std::string>& bound_;
};

}  // namespace detail

/// Parses a sentence. The "p:" header is required unless `default_p` is given.
inline Sentence parse(std::string_view text, std::optional<std::uint64_t> default_p = std::nullopt) {
  Sentence s;
  std::optional<std::uint64_t> p = default_p;
  std::size_t pos = 0;
  // Header lines.
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == ';') {
      pos = eol + 1;
      continue;
    }
    line = line.substr(first);
    if (line.rfind("p:", 0) != 0 && line.rfind("k:", 0) != 0) break;
    const std::size_t at = pos + first;
    std::string_view value = line.substr(2);
    value = value.substr(std::min(value.size(), value.find_first_not_of(" \t")));
    while (!value.empty() && (value.back() == ' ' || value.back() == '\r' || value.back() == '\t')) {
      value.remove_suffix(1);
    }
    const auto v = detail::parse_int(value);
    if (!v || *v < 1) throw SyntaxError(at, "malformed header line");
    if (line[0] == 'p') {
      if (!gf::is_prime(static_cast<std::uint64_t>(*v))) {
        throw SyntaxError(at, "header p is not prime");
      }
      p = static_cast<std::uint64_t>(*v);
    } else {
      s.k = static_cast<unsigned>(*v);
    }
    pos = eol + 1;
  }
  if (!p) throw SyntaxError(0, "missing 'p: <prime>' header");
  s.p = *p;
  if (!gf::checked_field_size(s.p, s.k)) throw SyntaxError(0, "field F_p^k exceeds the size cap");

  std::set<std::string> bound;
  detail::Parser parser(text, std::min(pos, text.size()), bound);
  auto& in = parser.reader();
  in.expect('(');
  const std::size_t at = (in.skip_space(), in.pos());
  if (in.atom() != "exists") in.fail("expected 'exists'", at);
  in.expect('(');
  while (!in.peek(')')) {
    const std::size_t vat = (in.skip_space(), in.pos());
    const std::string_view v = in.atom();
    if (!detail::is_identifier(v)) in.fail("invalid variable name '" + std::string(v) + "'", vat);
    if (!bound.insert(std::string(v)).second) in.fail("duplicate variable '" + std::string(v) + "'", vat);
    s.vars.emplace_back(v);
  }
  in.expect(')');
  s.body = parser.formula();
  in.expect(')');
  if (!in.at_end()) in.fail("trailing input after sentence", in.pos());
  return s;
}

namespace detail {

inline void print_expr(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::integer: out += std::to_string(e.value); return;
    case Expr::Kind::var: out += e.name; return;
    case Expr::Kind::element:
      out += "(elt";
      for (auto d : e.digits) out += " " + std::to_string(d);
      out += ")";
      return;
    case Expr::Kind::pow:
      out += "(^ ";
      print_expr(e.args[0], out);
      out += " " + std::to_string(e.exponent) + ")";
      return;
    case Expr::Kind::add:
    case Expr::Kind::mul:
      out += e.kind == Expr::Kind::add ? "(+" : "(*";
      for (const auto& a : e.args) {
        out += " ";
        print_expr(a, out);
      }
      out += ")";
      return;
  }
}

inline void print_formula(const Formula& f, std::string& out) {
  switch (f.kind) {
    case Formula::Kind::conj:
    case Formula::Kind::disj:
      out += f.kind == Formula::Kind::conj ? "(and" : "(or";
      for (const auto& c : f.children) {
        out += " ";
        print_formula(c, out);
      }
      out += ")";
      return;
    case Formula::Kind::eq:
    case Formula::Kind::neq:
      out += f.kind == Formula::Kind::eq ? "(= " : "(!= ";
      print_expr(f.sides[0], out);
      out += " ";
      print_expr(f.sides[1], out);
      out += ")";
      return;
  }
}

}  // namespace detail

inline std::string print(const Expr& e) {
  std::string out;
  detail::print_expr(e, out);
  return out;
}

inline std::string print(const Formula& f) {
  std::string out;
  detail::print_formula(f, out);
  return out;
}

/// Header lines followed by the sentence; parse(print(s)) == s.
inline std::string print(const Sentence& s) {
  std::string out = "p: " + std::to_string(s.p) + "\n";
  if (s.k != 1) out += "k: " + std::to_string(s.k) + "\n";
  out += "(exists (";
  for (std::size_t i = 0; i < s.vars.size(); ++i) out += (i ? " " : "") + s.vars[i];
  out += ") " + print(s.body) + ")\n";
  return out;
}

/// The expression as a polynomial over `field` in the given variables.
inline MPoly to_mpoly(const Expr& e, const FieldRef& field, const std::vector<std::string>& vars) {
  const std::size_t nv = vars.size();
  switch (e.kind) {
    case Expr::Kind::integer: return MPoly::constant(field, nv, field->from_int(e.value));
    case Expr::Kind::element: {
      if (e.digits.size() > field->degree()) throw Error(Errc::invalid_argument, "element literal has too many digits");
      std::vector<std::uint64_t> d;
      for (auto v : e.digits) d.push_back(field->from_int(v).v);
      return MPoly::constant(field, nv, field->from_coeffs(d));
    }
    case Expr::Kind::var: {
      for (std::size_t i = 0; i < nv; ++i) {
        if (vars[i] == e.name) return MPoly::variable(field, nv, i);
      }
      throw Error(Errc::invalid_argument, "unbound variable " + e.name);
    }
    case Expr::Kind::pow: return to_mpoly(e.args[0], field, vars).pow(e.exponent);
    case Expr::Kind::add: {
      MPoly r(field, nv);
      for (const auto& a : e.args) r = r + to_mpoly(a, field, vars);
      return r;
    }
    case Expr::Kind::mul: {
      MPoly r = MPoly::constant(field, nv, field->one());
      for (const auto& a : e.args) r = r * to_mpoly(a, field, vars);
      return r;
    }
  }
  return MPoly(field, nv);
}

/// Canonical expression of a polynomial: terms in descending graded-lex order.
inline Expr to_expr(const MPoly& f, const std::vector<std::string>& vars) {
  const gf::Field& F = *f.field();
  const auto coeff_expr = [&](Elem c) {
    if (c.v < F.characteristic()) return Expr::integer(static_cast<std::int64_t>(c.v));
    Expr e;
    e.kind = Expr::Kind::element;
    auto d = F.coeffs(c);
    while (!d.empty() && d.back() == 0) d.pop_back();
    for (auto v : d) e.digits.push_back(static_cast<std::int64_t>(v));
    return e;
  };
  std::vector<Expr> terms;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [mono, c] = *it;
    std::vector<Expr> factors;
    if (c.v != 1 || total_degree(mono) == 0) factors.push_back(coeff_expr(c));
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 1) factors.push_back(Expr::var(vars[i]));
      else if (mono[i] > 1) factors.push_back(Expr::pow(Expr::var(vars[i]), mono[i]));
    }
    terms.push_back(factors.size() == 1 ? std::move(factors[0]) : Expr::mul(std::move(factors)));
  }
  if (terms.empty()) return Expr::integer(0);
  if (terms.size() == 1) return std::move(terms[0]);
  return Expr::add(std::move(terms));
}

/// A system as the sentence asserting a common zero: (and (= f_1 0) ...).
inline Sentence to_sentence(const PolySystem& sys) {
  Sentence s;
  s.p = sys.owner->characteristic();
  s.k = sys.owner->degree();
  s.vars = sys.var_names;
  std::vector<Formula> atoms;
  for (const auto& eq : sys.equations) atoms.push_back(Formula::eq(to_expr(eq, sys.var_names), Expr::integer(0)));
  s.body = Formula::conj(std::move(atoms));
  return s;
}

/// The system of a sentence whose body is an equation or a conjunction of equations.
inline PolySystem to_system(const Sentence& s) {
  const FieldRef F = gf::make_field(s.p, s.k);
  std::vector<MPoly> eqs;
  const auto add_atom = [&](const Formula& f) {
    if (f.kind != Formula::Kind::eq) {
      throw Error(Errc::invalid_argument, "a system must be a conjunction of equations");
    }
    eqs.push_back(to_mpoly(f.sides[0], F, s.vars) - to_mpoly(f.sides[1], F, s.vars));
  };
  if (s.body.kind == Formula::Kind::conj) {
    for (const auto& c : s.body.children) add_atom(c);
  } else {
    add_atom(s.body);
  }
  return PolySystem(F, s.vars, std::move(eqs));
}

}  // namespace pointless::logic
