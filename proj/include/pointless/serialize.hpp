#pragma once

// JSON forms of fields, curves, L-polynomials and certificates, and the
// on-disk curve cache.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/hyperell.hpp"
#include "pointless/search.hpp"
#include "pointless/zeta.hpp"

#ifndef POINTLESS_VERSION
#define POINTLESS_VERSION "0.1.0"
#endif

namespace pointless::io {

using nlohmann::json;

inline json field_to_json(const gf::Field& f) {
  return {{"p", f.characteristic()}, {"k", f.degree()}, {"modulus", f.modulus()}};
}

/// The canonical field described by a header; the modulus must match.
inline gf::FieldRef field_from_json(const json& j) {
  const auto p = j.at("p").get<std::uint64_t>();
  const auto k = j.at("k").get<unsigned>();
  gf::FieldRef f = gf::make_field(p, k);
  if (j.contains("modulus") && j.at("modulus").get<std::vector<std::uint64_t>>() != f->modulus()) {
    throw Error(Errc::field_mismatch, "modulus in header differs from the canonical modulus of F_" +
                                          std::to_string(f->size()));
  }
  return f;
}

inline json poly_to_json(const gf::UniPoly& a) {
  json out = json::array();
  for (Elem c : a.coeffs()) out.push_back(c.v);
  return out;
}

inline gf::UniPoly poly_from_json(const gf::FieldRef& f, const json& j) {
  std::vector<Elem> c;
  for (const auto& v : j) c.push_back(Elem{v.get<std::uint64_t>()});
  return {f, std::move(c)};
}

/// Coefficients are packed integers sum c_i p^i over the header's power basis.
inline json curve_to_json(const hyperell::Curve& c) {
  return {{"field", field_to_json(*c.base())},
          {"genus", c.genus()},
          {"h", poly_to_json(c.h())},
          {"f", poly_to_json(c.f())}};
}

inline hyperell::Curve curve_from_json(const json& j) {
  const gf::FieldRef f = field_from_json(j.at("field"));
  return hyperell::new_curve(f, j.at("genus").get<unsigned>(), poly_from_json(f, j.value("h", json::array())),
                             poly_from_json(f, j.at("f")));
}

inline json lpoly_to_json(const zeta::LPoly& l) {
  json coeffs = json::array();
  for (const auto& a : l.coeffs) coeffs.push_back(a.str());
  return {{"q", l.q.str()}, {"genus", l.genus}, {"coeffs", coeffs}};
}

inline zeta::LPoly lpoly_from_json(const json& j) {
  zeta::LPoly l{BigInt(j.at("q").get<std::string>()), j.at("genus").get<unsigned>(), {}};
  for (const auto& a : j.at("coeffs")) l.coeffs.emplace_back(a.get<std::string>());
  return l;
}

inline search::SearchMode mode_from_string(const std::string& s) {
  if (s == "exhaustive") return search::SearchMode::exhaustive;
  if (s == "randomized") return search::SearchMode::randomized;
  if (s == "auto") return search::SearchMode::automatic;
  throw Error(Errc::invalid_argument, "unknown search mode " + s);
}

/// Timing is left out so that reports are reproducible.
inline json certificate_to_json(const search::PointlessCertificate& c) {
  return {{"q", c.curve.q()},
          {"genus", c.curve.genus()},
          {"curve", curve_to_json(c.curve)},
          {"l_poly", lpoly_to_json(c.l_poly)},
          {"verified_horizon", c.verified_horizon},
          {"mode", search::to_string(c.mode)},
          {"seed", c.seed},
          {"genera_tried", c.genera_tried},
          {"candidates_examined", c.stats.candidates_examined}};
}

inline search::PointlessCertificate certificate_from_json(const json& j) {
  search::PointlessCertificate c{curve_from_json(j.at("curve")),
                                 lpoly_from_json(j.at("l_poly")),
                                 j.at("verified_horizon").get<unsigned>(),
                                 {j.value("candidates_examined", std::uint64_t{0}), j.value("elapsed_seconds", 0.0)},
                                 mode_from_string(j.at("mode").get<std::string>()),
                                 j.at("seed").get<std::uint64_t>(),
                                 j.value("genera_tried", std::vector<unsigned>{})};
  return c;
}

/// A cache entry: the certificate plus provenance.
inline json cache_entry_to_json(const search::PointlessCertificate& c) {
  json j = certificate_to_json(c);
  j["elapsed_seconds"] = c.stats.elapsed_seconds;
  j["tool_version"] = POINTLESS_VERSION;
  return j;
}

/// $POINTLESS_CACHE, else $XDG_CACHE_HOME/pointless/curves.json, else
/// ~/.cache/pointless/curves.json.
inline std::string default_cache_path() {
  if (const char* env = std::getenv("POINTLESS_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/pointless/curves.json";
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/pointless/curves.json";
  return "pointless-curves.json";
}

/// Certificates keyed by (q, g) in a JSON file guarded by an advisory lock on
/// "<path>.lock". Entries are re-validated when read; invalid ones are ignored.
class CurveCache {
 public:
  explicit CurveCache(std::string path, std::uint64_t count_cap = hyperell::kDefaultCountCap)
      : path_(std::move(path)), count_cap_(count_cap) {}

  const std::string& path() const noexcept { return path_; }
  /// Entries dropped by validation in the last load.
  std::size_t rejected() const noexcept { return rejected_; }

  std::vector<search::PointlessCertificate> load() {
    Lock lock(path_, LOCK_SH);
    return read_validated();
  }

  std::optional<search::PointlessCertificate> lookup(std::uint64_t q, unsigned g) {
    for (auto& c : load()) {
      if (c.curve.q() == q && c.curve.genus() == g) return std::move(c);
    }
    return std::nullopt;
  }

  /// Adds or replaces the entry for (q, g).
  void store(const search::PointlessCertificate& cert) {
    Lock lock(path_, LOCK_EX);
    json entries = json::array();
    for (const auto& e : read_raw()) {
      if (e.value("q", std::uint64_t{0}) == cert.curve.q() && e.value("genus", 0U) == cert.curve.genus()) continue;
      entries.push_back(e);
    }
    entries.push_back(cache_entry_to_json(cert));
    const json doc = {{"format", "pointless-curve-cache"}, {"version", 1}, {"entries", entries}};
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error(Errc::io_error, "cannot write cache file " + tmp);
      out << doc.dump(2) << "\n";
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) throw Error(Errc::io_error, "cannot replace cache file " + path_ + ": " + ec.message());
  }

 private:
  class Lock {
   public:
    Lock(const std::string& path, int mode) {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
      }
      fd_ = ::open((path + ".lock").c_str(), O_RDWR | O_CREAT, 0644);
      if (fd_ < 0) throw Error(Errc::io_error, "cannot open lock file for " + path);
      if (::flock(fd_, mode) != 0) {
        ::close(fd_);
        throw Error(Errc::io_error, "cannot lock " + path);
      }
    }
    ~Lock() {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
    Lock(const Lock&) = delete;
    Lock& operator=(const Lock&) = delete;

   private:
    int fd_ = -1;
  };

  json read_raw() const {
    std::ifstream in(path_);
    if (!in) return json::array();
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("entries")) return json::array();
    return doc.at("entries");
  }

  std::vector<search::PointlessCertificate> read_validated() {
    rejected_ = 0;
    std::vector<search::PointlessCertificate> out;
    for (const auto& e : read_raw()) {
      try {
        auto cert = certificate_from_json(e);
        if (hyperell::count_points(cert.curve, 1, {count_cap_, 1}) != 0 ||
            !zeta::functional_equation_ok(cert.l_poly) || !search::check_certificate(cert, count_cap_).ok) {
          ++rejected_;
          continue;
        }
        out.push_back(std::move(cert));
      } catch (const std::exception&) {
        ++rejected_;
      }
    }
    return out;
  }

  std::string path_;
  std::uint64_t count_cap_;
  std::size_t rejected_ = 0;
};

}  // namespace pointless::io
