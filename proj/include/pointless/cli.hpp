#pragma once

// Command-line front end. run() takes the arguments without the program name
// and writes results to `out`, diagnostics to `err`.
//
// Exit codes: 0 success, 1 assertion failure, 2 usage or input error,
// 3 budget or cap exhausted.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pointless/bigint.hpp"
#include "pointless/error.hpp"
#include "pointless/gf.hpp"
#include "pointless/hyperell.hpp"
#include "pointless/logic.hpp"
#include "pointless/mpoly.hpp"
#include "pointless/search.hpp"
#include "pointless/sentence.hpp"
#include "pointless/serialize.hpp"
#include "pointless/testvar.hpp"
#include "pointless/weilres.hpp"
#include "pointless/zeta.hpp"

namespace pointless::cli {

using io::json;

enum ExitCode : int { kOk = 0, kAssertion = 1, kUsage = 2, kExhausted = 3 };

struct Config {
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::uint64_t search_budget = search::SearchOptions{}.budget;
  std::uint64_t rng_seed = search::kDefaultSeed;
  std::string cache_path;
  bool use_cache = true;
  unsigned jobs = 1;
  bool json_output = false;

  search::SearchOptions search_options() const {
    search::SearchOptions o;
    o.budget = search_budget;
    o.seed = rng_seed;
    o.jobs = jobs;
    o.count_cap = enumeration_cap;
    return o;
  }

  testvar::BuildOptions build_options() const {
    testvar::BuildOptions o;
    o.search = search_options();
    o.enumeration_cap = enumeration_cap;
    o.cache_path = use_cache ? (cache_path.empty() ? io::default_cache_path() : cache_path) : std::string();
    return o;
  }

  json to_json() const {
    return {{"enumeration_cap", enumeration_cap}, {"search_budget", search_budget}, {"seed", rng_seed}};
  }
};

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::assertion_failed: return kAssertion;
    case Errc::budget_exhausted:
    case Errc::cap_exceeded:
    case Errc::size_cap_exceeded:
    case Errc::not_compiled:
    case Errc::undetermined: return kExhausted;
    default: return kUsage;
  }
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string join(const std::vector<unsigned>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

inline void print_certificate(std::ostream& out, const search::PointlessCertificate& c) {
  out << "curve: " << c.curve.to_string() << "\n";
  out << "L(T) = " << c.l_poly.to_string() << "\n";
  out << "N_m for m = 1.." << c.verified_horizon << ":";
  for (unsigned m = 1; m <= c.verified_horizon; ++m) out << " " << zeta::counts_from_l(c.l_poly, m);
  out << "\n";
  out << "mode: " << search::to_string(c.mode) << ", candidates examined: " << c.stats.candidates_examined
      << ", genera tried: " << join(c.genera_tried) << "\n";
}

inline void print_variety(std::ostream& out, const testvar::TestVariety& v) {
  out << "test variety over F_" << v.q << " with n = " << v.n << " (" << testvar::to_string(v.backing)
      << "-backed)\n";
  if (v.cert) {
    print_certificate(out, *v.cert);
  } else {
    out << "no curve over F_" << v.q << "^" << v.n << " within caps; Becker-Glass genus " << v.genus.str()
        << ", Lang-Weil threshold " << v.lang_weil << "\n";
  }
  if (v.compiled) {
    out << "compiled chart: " << v.compiled->target.num_vars() << " variables, "
        << v.compiled->target.equations.size() << " equations over F_" << v.q << "\n";
  }
}

inline void print_prop21(std::ostream& out, const testvar::Prop21Report& r) {
  out << "bullet 1 (m | n, V empty): m = " << join(r.bullet1) << " ok\n";
  out << "bullet 2 (lcm(m,n) >= 4n, V nonempty): m = " << join(r.bullet2) << " ok\n";
  out << "gap (reported, not asserted):";
  if (r.gap.empty()) out << " -";
  for (const auto& [m, s] : r.gap) out << " m=" << m << ":" << testvar::to_string(s);
  out << "\n";
  for (const auto& c : r.cross_checks) {
    out << "cross-check m=" << c.m << ": L-polynomial " << c.expected << ", enumeration " << c.enumerated << "\n";
  }
  if (r.smoothness) {
    out << "Jacobian rank >= n at " << r.smoothness->points << " points over F_" << r.q << "^" << r.smoothness->m
        << "\n";
  }
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  if (const char* env = std::getenv("POINTLESS_CACHE"); env && *env) cfg.cache_path = env;

  CLI::App app{"Pointless curves, Weil restrictions and the existential-theory reduction harness", "pointless"};
  app.set_version_flag("--version", POINTLESS_VERSION);
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", cfg.json_output, "Machine-readable JSON output");
  app.add_option("--cap", cfg.enumeration_cap, "Enumeration and counting cap")->check(CLI::PositiveNumber);
  app.add_option("--budget", cfg.search_budget, "Search budget in candidates");
  app.add_option("--seed", cfg.rng_seed, "Seed for randomized search");
  app.add_option("--cache", cfg.cache_path, "Curve cache file (default $POINTLESS_CACHE or ~/.cache)");
  app.add_flag("!--no-cache", cfg.use_cache, "Do not read or write the curve cache");
  app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::function<void()> action;
  const auto emit = [&](const json& j, const std::function<void()>& human) {
    if (cfg.json_output) {
      json doc = j;
      doc["config"] = cfg.to_json();
      out << doc.dump(2) << "\n";
    } else {
      human();
    }
  };

  // field make p k
  auto* field = app.add_subcommand("field", "Finite fields");
  field->require_subcommand(1);
  auto* field_make = field->add_subcommand("make", "Build F_{p^k} and print its modulus");
  std::uint64_t fp = 0;
  unsigned fk = 0;
  field_make->add_option("p", fp, "Characteristic")->required();
  field_make->add_option("k", fk, "Degree")->required()->check(CLI::PositiveNumber);
  field_make->callback([&] {
    action = [&] {
      const auto F = gf::make_field(fp, fk);
      const gf::UniPoly mod = gf::UniPoly::from_ints(gf::make_field(fp, 1), [&] {
        std::vector<std::int64_t> c;
        for (auto v : F->modulus()) c.push_back(static_cast<std::int64_t>(v));
        return c;
      }());
      json j = io::field_to_json(*F);
      j["size"] = F->size();
      emit(j, [&] {
        out << "F_" << F->size() << " = F_" << fp << "[x] / (" << mod.to_string() << ")\n";
      });
    };
  });

  // curve count <curve.json> m
  auto* curve = app.add_subcommand("curve", "Hyperelliptic curves");
  curve->require_subcommand(1);
  auto* curve_count = curve->add_subcommand("count", "Brute-force |C(F_{q^m})|");
  std::string curve_path;
  unsigned curve_m = 1;
  curve_count->add_option("curve", curve_path, "Curve JSON file")->required();
  curve_count->add_option("m", curve_m, "Extension degree")->required()->check(CLI::PositiveNumber);
  curve_count->callback([&] {
    action = [&] {
      const auto c = io::curve_from_json(json::parse(detail::read_file(curve_path)));
      const auto n = hyperell::count_points(c, curve_m, {cfg.enumeration_cap, cfg.jobs});
      emit({{"curve", io::curve_to_json(c)}, {"m", curve_m}, {"count", n}},
           [&] { out << "N_" << curve_m << " = " << n << "\n"; });
    };
  });

  // zeta from-counts | extrapolate
  auto* zeta_cmd = app.add_subcommand("zeta", "L-polynomials from point counts");
  zeta_cmd->require_subcommand(1);
  std::string zq;
  unsigned zg = 0;
  std::vector<std::string> zcounts;
  unsigned zmmax = 12;
  const auto zeta_args = [&](CLI::App* sub) {
    sub->add_option("q", zq, "Field size")->required();
    sub->add_option("g", zg, "Genus")->required()->check(CLI::PositiveNumber);
    sub->add_option("counts", zcounts, "N_1 .. N_g")->required();
  };
  const auto parse_l = [&] {
    std::vector<BigInt> counts;
    for (const auto& c : zcounts) counts.emplace_back(c);
    return zeta::l_from_counts(BigInt(zq), zg, counts);
  };
  auto* from_counts = zeta_cmd->add_subcommand("from-counts", "Recover L(T) from N_1..N_g");
  zeta_args(from_counts);
  from_counts->callback([&] {
    action = [&] {
      const auto l = parse_l();
      emit({{"l_poly", io::lpoly_to_json(l)}, {"functional_equation", zeta::functional_equation_ok(l)}},
           [&] { out << "L(T) = " << l.to_string() << "\n"; });
    };
  });
  auto* extrapolate = zeta_cmd->add_subcommand("extrapolate", "N_m for m up to --mmax from N_1..N_g");
  zeta_args(extrapolate);
  extrapolate->add_option("--mmax", zmmax, "Largest m")->check(CLI::PositiveNumber);
  extrapolate->callback([&] {
    action = [&] {
      const auto l = parse_l();
      json counts = json::array();
      for (unsigned m = 1; m <= zmmax; ++m) counts.push_back(zeta::counts_from_l(l, m).str());
      emit({{"l_poly", io::lpoly_to_json(l)}, {"counts", counts}}, [&] {
        for (unsigned m = 1; m <= zmmax; ++m) out << "N_" << m << " = " << counts[m - 1].get<std::string>() << "\n";
      });
    };
  });

  // search-pointless q [g]
  auto* sp = app.add_subcommand("search-pointless", "Find a genus-g curve over F_q without rational points");
  std::uint64_t sq = 0;
  unsigned sg = 0;
  bool exhaustive = false, randomized = false;
  sp->add_option("q", sq, "Field size")->required();
  sp->add_option("g", sg, "Genus (default: Becker-Glass genus with fallbacks)");
  sp->add_flag("--exhaustive", exhaustive, "Scan the whole candidate space in order");
  sp->add_flag("--randomized", randomized, "Seeded random candidates")->excludes("--exhaustive");
  sp->callback([&] {
    action = [&] {
      auto opts = cfg.search_options();
      if (exhaustive) {
        opts.mode = search::SearchMode::exhaustive;
        opts.budget = std::max<std::uint64_t>(opts.budget, search::kExhaustiveLimit);
      }
      if (randomized) opts.mode = search::SearchMode::randomized;
      const auto pk = gf::prime_power(sq);
      if (!pk) throw Error(Errc::invalid_argument, std::to_string(sq) + " is not a prime power");
      const auto cert = sg ? search::find_pointless(sq, sg, opts) : search::find_pointless_auto(sq, pk->first, opts);
      emit({{"certificate", io::certificate_to_json(cert)}}, [&] { detail::print_certificate(out, cert); });
    };
  });

  // testvar build | check
  auto* tv = app.add_subcommand("testvar", "Weil restrictions of pointless curves");
  tv->require_subcommand(1);
  std::uint64_t tq = 0;
  unsigned tn = 0;
  unsigned tmmax = 0;
  const auto tv_args = [&](CLI::App* sub) {
    sub->add_option("q", tq, "Base field size")->required();
    sub->add_option("n", tn, "Degree of the curve's field over F_q")->required()->check(CLI::PositiveNumber);
  };
  const auto build = [&] {
    testvar::BuildInfo info;
    auto v = testvar::build_test_variety(tq, tn, cfg.build_options(), &info);
    if (info.from_cache) err << "curve loaded from cache\n";
    if (info.cache_rejected) err << info.cache_rejected << " cache entries failed validation and were ignored\n";
    return v;
  };
  auto* tv_build = tv->add_subcommand("build", "Construct V for (q, n)");
  tv_args(tv_build);
  tv_build->callback([&] {
    action = [&] {
      const auto v = build();
      emit({{"variety", testvar::to_json(v)}}, [&] { detail::print_variety(out, v); });
    };
  });
  auto* tv_check = tv->add_subcommand("check", "Verify both bullets for m <= --mmax");
  tv_args(tv_check);
  tv_check->add_option("--mmax", tmmax, "Largest m (default 4n + 8)");
  tv_check->callback([&] {
    action = [&] {
      const auto v = build();
      const auto r = testvar::verify_prop21(v, tmmax ? tmmax : 4 * tn + 8, cfg.enumeration_cap);
      emit({{"variety", testvar::to_json(v)}, {"report", testvar::to_json(r)}}, [&] {
        detail::print_variety(out, v);
        detail::print_prop21(out, r);
        out << "PASS\n";
      });
    };
  });

  // weilres compile | verify
  auto* wr = app.add_subcommand("weilres", "Restriction of scalars of polynomial systems");
  wr->require_subcommand(1);
  std::string sys_path;
  unsigned wn = 0;
  unsigned wm = 1;
  const auto wr_args = [&](CLI::App* sub) {
    sub->add_option("system", sys_path, "System file (conjunctive sentence with p:/k: header)")->required();
    sub->add_option("n", wn, "Degree of the owner over the target field")->required()->check(CLI::PositiveNumber);
  };
  auto* wr_compile = wr->add_subcommand("compile", "Print the restricted system");
  wr_args(wr_compile);
  wr_compile->callback([&] {
    action = [&] {
      const auto r = weilres::restrict(logic::to_system(logic::parse(detail::read_file(sys_path))), wn);
      const std::string sx = logic::print(logic::to_sentence(r.target));
      emit({{"num_vars", r.target.num_vars()}, {"num_equations", r.target.equations.size()}, {"system", sx}},
           [&] { out << sx; });
    };
  });
  auto* wr_verify = wr->add_subcommand("verify", "Check the point-set bijection for m = 1..M by enumeration");
  wr_args(wr_verify);
  wr_verify->add_option("--m", wm, "Largest m")->check(CLI::PositiveNumber);
  wr_verify->callback([&] {
    action = [&] {
      const auto r = weilres::restrict(logic::to_system(logic::parse(detail::read_file(sys_path))), wn);
      json checks = json::array();
      std::optional<unsigned> failed;
      for (unsigned m = 1; m <= wm; ++m) {
        const auto b = weilres::verify_bijection(r, m, cfg.enumeration_cap);
        checks.push_back({{"m", m},
                          {"target_count", b.target_count.str()},
                          {"source_count", b.source_count.str()},
                          {"copies", b.copies},
                          {"holds", b.holds}});
        if (!b.holds && !failed) failed = m;
      }
      emit({{"checks", checks}, {"holds", !failed}}, [&] {
        for (const auto& c : checks) {
          out << "m=" << c["m"] << ": target " << c["target_count"].get<std::string>() << ", source "
              << c["source_count"].get<std::string>() << "^" << c["copies"] << (c["holds"].get<bool>() ? " ok" : " FAIL")
              << "\n";
        }
      });
      if (failed) throw AssertionFailed(*failed, "bijection fails at m = " + std::to_string(*failed));
    };
  });

  // logic normalize | encode | reduce
  auto* lg = app.add_subcommand("logic", "Existential sentences and the reduction");
  lg->require_subcommand(1);
  std::string sentence_path;
  auto* lg_norm = lg->add_subcommand("normalize", "DNF and inequality elimination");
  lg_norm->add_option("sentence", sentence_path, "Sentence file")->required();
  lg_norm->callback([&] {
    action = [&] {
      const auto systems = logic::normalize(logic::parse(detail::read_file(sentence_path)));
      json list = json::array();
      for (const auto& s : systems) list.push_back(logic::print(logic::to_sentence(s)));
      emit({{"systems", list}}, [&] {
        for (std::size_t i = 0; i < systems.size(); ++i) out << (i ? "\n" : "") << list[i].get<std::string>();
      });
    };
  });
  auto* lg_enc = lg->add_subcommand("encode", "Sentence asserting that V(q, n) has a point");
  tv_args(lg_enc);
  lg_enc->callback([&] {
    action = [&] {
      const auto s = logic::print(logic::encode_variety(build()));
      emit({{"sentence", s}}, [&] { out << s; });
    };
  });
  auto* lg_red = lg->add_subcommand("reduce", "Decide l in S through the field simulation");
  std::string set_spec;
  std::uint64_t rl = 0;
  std::uint64_t rp = 2;
  lg_red->add_option("--set", set_spec, "mod4eq1, evenbin, all, none or list:a,b,...")->required();
  lg_red->add_option("--l", rl, "Prime l > 4")->required();
  lg_red->add_option("--p", rp, "Characteristic of the simulated field");
  lg_red->callback([&] {
    action = [&] {
      const auto set = logic::sample_set(set_spec);
      const auto r = logic::reduction_check(set, rl, rp, cfg.build_options());
      emit({{"l", rl},
            {"set", set_spec},
            {"value", r.value},
            {"expected", set(rl)},
            {"backing", testvar::to_string(r.backing)},
            {"s1", r.prescription.s1},
            {"s2", r.prescription.s2},
            {"occurring_query_degrees", r.occurring}},
           [&] { out << (r.value ? "true" : "false") << "\n"; });
    };
  });

  // report prop21 q n
  auto* rep = app.add_subcommand("report", "Verification reports");
  rep->require_subcommand(1);
  auto* rep21 = rep->add_subcommand("prop21", "Full verification report for V(q, n)");
  tv_args(rep21);
  rep21->add_option("--mmax", tmmax, "Largest m (default 4n + 8)");
  rep21->callback([&] {
    action = [&] {
      const auto v = build();
      std::optional<search::CertificateCheck> recheck;
      if (v.cert) recheck = search::check_certificate(*v.cert, cfg.enumeration_cap);
      if (recheck && !recheck->ok) throw AssertionFailed(0, "certificate fails re-validation: " + recheck->reason);
      const auto r = testvar::verify_prop21(v, tmmax ? tmmax : 4 * tn + 8, cfg.enumeration_cap);
      json bij = json::array();
      if (v.compiled) {
        for (unsigned m = 1;; ++m) {
          try {
            const auto b = weilres::verify_bijection(*v.compiled, m, cfg.enumeration_cap);
            if (!b.holds) throw AssertionFailed(m, "bijection fails at m = " + std::to_string(m));
            bij.push_back({{"m", m}, {"target_count", b.target_count.str()}, {"source_count", b.source_count.str()}});
          } catch (const Error& e) {
            if (e.code() != Errc::cap_exceeded) throw;
            break;
          }
        }
      }
      std::string sentence;
      if (v.compiled) sentence = logic::print(logic::encode_variety(v));
      emit({{"variety", testvar::to_json(v)},
            {"report", testvar::to_json(r)},
            {"certificate_recheck", recheck ? json(recheck->ok) : json(nullptr)},
            {"bijection", bij},
            {"sentence", sentence.empty() ? json(nullptr) : json(sentence)}},
           [&] {
             out << "== variety\n";
             detail::print_variety(out, v);
             if (recheck) out << "certificate re-derived from brute-force counts: ok\n";
             out << "== both bullets\n";
             detail::print_prop21(out, r);
             out << "== bijection of the compiled chart\n";
             if (bij.empty()) out << "not enumerable within the cap\n";
             for (const auto& b : bij) {
               out << "m=" << b["m"] << ": " << b["target_count"].get<std::string>() << " = "
                   << b["source_count"].get<std::string>() << "^gcd ok\n";
             }
             if (!sentence.empty()) out << "== sentence\n" << sentence;
             out << "seed: " << cfg.rng_seed << "\nPASS\n";
           });
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (action) action();
    return kOk;
  } catch (const AssertionFailed& e) {
    err << "assertion failed at m = " << e.m() << ": " << e.what() << "\n";
    return kAssertion;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace pointless::cli
