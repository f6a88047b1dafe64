// rnf: command-line front end. Every run writes a version header and the
// resolved configuration ahead of its CSV rows or inside its JSON object.
//
// Exit status: 0 success, 2 usage error, 3 infeasible computation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rnf/rnf.hpp"
#include "suite.hpp"

using nlohmann::json;
using namespace rnf;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Table with a fixed header; rendered as CSV rows or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) { rows.push_back(std::move(row)); }

  json to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json o = json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
      arr.push_back(std::move(o));
    }
    return arr;
  }
};

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// What a subcommand produced: a summary object and optionally a table.
struct Output {
  json summary = json::object();
  std::optional<Table> table;
};

struct Globals {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  bool dry_run = false;
};

json config_echo(const CLI::App& sub, const Globals& g) {
  json cfg = json::object();
  cfg["subcommand"] = sub.get_name();
  cfg["format"] = g.format;
  cfg["seed"] = g.seed;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (opt->get_items_expected_max() == 0) {
      cfg[name] = false;
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

void emit(std::ostream& os, const Globals& g, const json& cfg, const Output& out, bool dry) {
  if (g.format == "csv" && !dry) {
    os << "# rnf " << kVersion << "\n";
    os << "# config " << cfg.dump() << "\n";
    if (out.table) {
      os << "# summary " << out.summary.dump() << "\n";
      const auto& t = *out.table;
      for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
      os << "\n";
      for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
        os << "\n";
      }
    } else {
      std::vector<std::string> keys;
      for (const auto& [k, v] : out.summary.items()) {
        if (!v.is_structured()) keys.push_back(k);
      }
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
      os << "\n";
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(out.summary[keys[i]]);
      os << "\n";
    }
    return;
  }
  json doc = {{"rnf_version", kVersion}, {"config", cfg}};
  if (dry) {
    doc["dry_run"] = true;
  } else {
    doc["result"] = out.summary;
    if (out.table) doc["rows"] = out.table->to_json();
  }
  os << doc.dump(2) << "\n";
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

json point_json(ComplexPoint z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Rational make_pq(std::int64_t p, std::int64_t q) { return make_rational(p, q); }

/// A named or numeric point rho in (0, 1) given as a continued fraction.
CFExpansion resolve_rho(const std::string& named, std::optional<double> x, double budget) {
  if (x) {
    require(*x > 0.0 && *x < 1.0, ErrorCode::invalid_argument, "--x must lie in (0, 1)");
    return cf_expand(*x, budget, 200);
  }
  if (named == "golden") return golden_conjugate_cf();
  if (named == "sqrt2") return CFExpansion::periodic(0, {}, {2});
  throw Error(ErrorCode::invalid_argument, "unknown point '" + named + "' (golden, sqrt2)");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad number '" + item + "' in list");
    }
  }
  return out;
}

json profile_json(const DirectionProfile& p) {
  json j = {{"samples", p.samples.size()}, {"unresolved", p.unresolved.size()}, {"dispersion", p.dispersion}};
  j["limit_estimate"] = p.limit_estimate ? point_json(*p.limit_estimate) : json(nullptr);
  return j;
}

void profile_rows(Table& t, const DirectionProfile& p) {
  for (const auto& s : p.samples) {
    t.add({s.h, s.dir.real(), s.dir.imag(), std::arg(s.dir), s.magnitude, s.error_bound});
  }
}

Table direction_table() { return Table{{"h", "dir_re", "dir_im", "arg", "magnitude", "error_bound"}, {}}; }

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::tolerance_infeasible:
    case ErrorCode::resolution_floor:
    case ErrorCode::insufficient_precision:
    case ErrorCode::unresolvable_chord:
    case ErrorCode::insufficient_scale_range:
    case ErrorCode::not_testable:
    case ErrorCode::refine_trace: return kExitInfeasible;
    default: return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate Riemann's non-differentiable function and analyse its image"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  Globals g;
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--seed", g.seed, "seed for randomized sampling");
  app.add_flag("--dry-run", g.dry_run, "validate parameters, print the resolved config and exit");

  // Each subcommand registers a validator (run for --dry-run too) and a runner.
  std::map<const CLI::App*, std::pair<std::function<void()>, std::function<Output()>>> handlers;

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate phi, phi_D, R or a phi difference");
  std::string fn = "phi";
  std::optional<double> t_opt, x_opt;
  std::int64_t ep = 0, eq = 0;
  double eval_tol = 1e-10, eval_h = 0.0;
  eval->add_option("--fn", fn, "phi | phi_D | R | delta")->check(CLI::IsMember({"phi", "phi_D", "R", "delta"}));
  eval->add_option("--t", t_opt, "time t (R takes x = t)");
  eval->add_option("--x", x_opt, "x = 2 pi t, used exactly in the phases");
  eval->add_option("--p", ep, "numerator of x = p/q");
  eval->add_option("--q", eq, "denominator of x = p/q");
  eval->add_option("--tol", eval_tol, "absolute tolerance (relative to sqrt|h| for delta)");
  eval->add_option("--offset", eval_h, "offset h in t for --fn delta");
  auto eval_point = [&]() -> TimePoint {
    const int given = (t_opt ? 1 : 0) + (x_opt ? 1 : 0) + (eq != 0 ? 1 : 0);
    require(given == 1, ErrorCode::invalid_argument, "give exactly one of --t, --x, --p/--q");
    if (t_opt) return TimePoint::from_t(*t_opt);
    if (x_opt) return TimePoint::from_x(*x_opt);
    return TimePoint::at_rational(ep, eq);
  };
  handlers[eval] = {[&] {
                      (void)eval_point();
                      detail::require_tolerance(eval_tol);
                      require(fn != "R" || t_opt.has_value(), ErrorCode::invalid_argument, "R takes --t");
                    },
                    [&] {
                      const TimePoint tp = eval_point();
                      Output o;
                      EvalResult r;
                      if (fn == "phi") {
                        r = eval_phi(tp, eval_tol);
                      } else if (fn == "phi_D") {
                        r = eval_phi_D(tp.t(), eval_tol);
                      } else if (fn == "delta") {
                        r = phi_delta(tp, eval_h, eval_tol);
                      } else {
                        const auto rr = eval_R(*t_opt, eval_tol);
                        r = {{rr.value, 0.0}, rr.truncation_N, rr.tail_bound};
                      }
                      o.summary = {{"re", r.value.real()},
                                   {"im", r.value.imag()},
                                   {"tail_bound", r.tail_bound},
                                   {"truncation_N", r.truncation_N}};
                      return o;
                    }};

  // trace
  auto* trace = app.add_subcommand("trace", "sample phi(x / 2 pi) on a uniform grid of x");
  double x_lo = 0.0, x_hi = 1.0, trace_tol = 1e-6;
  std::size_t trace_n = 10001;
  trace->add_option("--x-lo", x_lo, "start of the x range");
  trace->add_option("--x-hi", x_hi, "end of the x range");
  trace->add_option("--n", trace_n, "number of samples");
  trace->add_option("--tol", trace_tol, "absolute tolerance per sample");
  handlers[trace] = {[&] {
                       require(0.0 <= x_lo && x_lo < x_hi && x_hi <= 1.0, ErrorCode::invalid_argument,
                               "need 0 <= x-lo < x-hi <= 1");
                       require(trace_n >= 2, ErrorCode::invalid_argument, "need n >= 2");
                       detail::require_tolerance(trace_tol);
                     },
                     [&] {
                       const auto poly = trace_image(x_lo, x_hi, trace_n, trace_tol);
                       Output o;
                       o.summary = {{"n", poly.size()}, {"certified_tol", poly.certified_tol}, {"max_gap", max_gap(poly)}};
                       Table t{{"x", "re", "im"}, {}};
                       for (std::size_t i = 0; i < poly.size(); ++i) {
                         t.add({poly.x[i], poly.points[i].real(), poly.points[i].imag()});
                       }
                       o.table = std::move(t);
                       return o;
                     }};

  // cf
  auto* cf = app.add_subcommand("cf", "continued fraction, convergents and exponent estimate");
  std::int64_t cf_p = 0, cf_q = 0;
  std::optional<double> cf_x;
  std::string cf_named;
  double cf_budget = 1e-15;
  std::size_t cf_depth = 30;
  cf->add_option("--p", cf_p, "numerator of a rational input");
  cf->add_option("--q", cf_q, "denominator of a rational input");
  cf->add_option("--x", cf_x, "real input");
  cf->add_option("--budget", cf_budget, "absolute uncertainty of --x");
  cf->add_option("--named", cf_named, "golden | golden-ratio | sqrt2");
  cf->add_option("--depth", cf_depth, "number of convergents");
  auto cf_input = [&]() -> CFExpansion {
    const int given = (cf_q != 0 ? 1 : 0) + (cf_x ? 1 : 0) + (cf_named.empty() ? 0 : 1);
    require(given == 1, ErrorCode::invalid_argument, "give exactly one of --p/--q, --x, --named");
    if (cf_q != 0) return cf_expand(make_pq(cf_p, cf_q));
    if (cf_x) return cf_expand(*cf_x, cf_budget, cf_depth + 2);
    if (cf_named == "golden") return golden_conjugate_cf();
    if (cf_named == "golden-ratio") return golden_ratio_cf();
    if (cf_named == "sqrt2") return sqrt2_cf();
    throw Error(ErrorCode::invalid_argument, "unknown --named value");
  };
  handlers[cf] = {[&] { (void)cf_input(); },
                  [&] {
                    const auto e = cf_input();
                    const std::size_t depth = std::min(cf_depth, e.known_terms());
                    Output o;
                    json terms = json::array();
                    for (const auto& a : e.terms(depth)) terms.push_back(a.str());
                    o.summary = {{"source", std::string(to_string(e.source()))},
                                 {"terminates", e.terminates()},
                                 {"quotients", terms}};
                    Table t{{"n", "p", "q", "gamma", "gamma_lo", "gamma_hi"}, {}};
                    for (const auto& c : convergents(e, depth)) {
                      t.add({c.n, c.frac.p().str(), c.frac.q().str(), c.gamma ? json(*c.gamma) : json(nullptr),
                             c.gamma_lo, c.gamma_hi});
                    }
                    o.table = std::move(t);
                    if (!e.terminates() && depth >= 2) {
                      try {
                        const auto est = gamma_limsup(e, depth);
                        o.summary["gamma_limsup"] = est.gamma;
                        o.summary["holder_exponent"] = holder_exponent(std::max(2.0, est.gamma));
                        o.summary["window"] = {est.window_begin, est.window_end};
                      } catch (const Error& err) {
                        o.summary["gamma_limsup"] = nullptr;
                        o.summary["gamma_note"] = err.what();
                      }
                    }
                    return o;
                  }};

  // farey
  auto* farey = app.add_subcommand("farey", "irreducible p/q in (0, 1) with q in a range");
  std::int64_t fq_min = 2, fq_max = 10;
  farey->add_option("--q-min", fq_min, "smallest denominator");
  farey->add_option("--q-max", fq_max, "largest denominator");
  handlers[farey] = {[&] {
                       require(fq_min >= 2 && fq_min <= fq_max, ErrorCode::invalid_argument,
                               "need 2 <= q-min <= q-max");
                     },
                     [&] {
                       Output o;
                       Table t{{"p", "q"}, {}};
                       for_each_farey(fq_min, fq_max, [&](std::int64_t p, std::int64_t q) { t.add({p, q}); });
                       o.summary = {{"count", t.rows.size()}};
                       o.table = std::move(t);
                       return o;
                     }};

  // corner / spiral share schedule options
  struct SchedOpts {
    std::int64_t p = 1, q = 3;
    std::optional<double> h_max;
    double h_min = 1e-8, ratio = 0.25, rel_tol = 1e-3;
    std::string side = "both";
  };
  auto add_sched = [](CLI::App* sub, SchedOpts& s) {
    sub->add_option("--p", s.p, "numerator");
    sub->add_option("--q", s.q, "denominator");
    sub->add_option("--h-max", s.h_max, "largest offset in x units (default min(1e-2, 1/q^2))");
    sub->add_option("--h-min", s.h_min, "smallest offset in x units");
    sub->add_option("--ratio", s.ratio, "schedule ratio h_{n+1} / h_n");
    sub->add_option("--rel-tol", s.rel_tol, "chord tolerance relative to sqrt|h|");
  };
  auto sched_of = [](const SchedOpts& s, Side side) {
    const Rational pq = make_rational(s.p, s.q);
    const double q = pq.q().convert_to<double>();
    const double top = s.h_max.value_or(std::min(1e-2, 1.0 / (q * q)));
    auto sched = HSchedule::spanning(top, s.h_min, s.ratio, side);
    sched.validate();
    return std::pair{pq, sched};
  };

  auto* corner = app.add_subcommand("corner", "one-sided chord limits at p/q with q != 2 mod 4");
  SchedOpts co;
  add_sched(corner, co);
  handlers[corner] = {[&] {
                        const auto [pq, s] = sched_of(co, Side::both);
                        if (pq.mod4() == 2) throw Error(ErrorCode::use_spiral_profile, "q = 2 (mod 4): use spiral");
                      },
                      [&] {
                        const auto [pq, s] = sched_of(co, Side::both);
                        const auto rep = corner_check(pq, s, co.rel_tol);
                        Output o;
                        o.summary = {{"pq", pq.str()},
                                     {"right", profile_json(rep.right)},
                                     {"left", profile_json(rep.left)},
                                     {"ratio_right_over_left", point_json(rep.ratio_right_over_left)},
                                     {"ratio_distance_to_i", rep.ratio_distance_to_i},
                                     {"nearest_eighth_root_distance", rep.nearest_eighth_root_distance},
                                     {"e_pq_estimate", point_json(rep.e_pq_estimate)},
                                     {"limits_found", rep.limits_found}};
                        Table t = direction_table();
                        profile_rows(t, rep.right);
                        profile_rows(t, rep.left);
                        o.table = std::move(t);
                        return o;
                      }};

  auto* spiral = app.add_subcommand("spiral", "winding of chord directions at p/q with q = 2 mod 4");
  SchedOpts sp;
  sp.p = 1;
  sp.q = 2;
  sp.h_min = 1e-7;
  sp.ratio = 0.9;
  double gap_deg = 10.0;
  add_sched(spiral, sp);
  spiral->add_option("--side", sp.side, "right | left | both")->check(CLI::IsMember({"right", "left", "both"}));
  spiral->add_option("--gap-deg", gap_deg, "largest direction gap counted as dense");
  auto side_of = [](const std::string& s) { return s == "right" ? Side::right : s == "left" ? Side::left : Side::both; };
  handlers[spiral] = {[&] {
                        const auto [pq, s] = sched_of(sp, side_of(sp.side));
                        if (pq.mod4() != 2) throw Error(ErrorCode::use_corner_check, "q != 2 (mod 4): use corner");
                      },
                      [&] {
                        const auto [pq, s] = sched_of(sp, side_of(sp.side));
                        const auto rep = spiral_profile(pq, s, sp.rel_tol, deg(gap_deg));
                        Output o;
                        o.summary = {{"pq", pq.str()},
                                     {"winding_total", rep.winding_total},
                                     {"winding_over_pi", rep.winding_total / std::numbers::pi},
                                     {"direction_gaps_deg", rep.direction_gaps * 180.0 / std::numbers::pi},
                                     {"dense", rep.dense},
                                     {"resolved", rep.profile.samples.size()},
                                     {"unresolved", rep.profile.unresolved.size()}};
                        Table t = direction_table();
                        profile_rows(t, rep.profile);
                        o.table = std::move(t);
                        return o;
                      }};

  // cluster
  auto* cluster = app.add_subcommand("cluster", "spread of chord directions at an irrational point");
  std::string cl_named = "golden";
  std::optional<double> cl_x;
  double cl_budget = 1e-15, cl_h_min = 1e-7, cl_h_max = 1e-2, cl_rel = 1e-3, cl_thr = 30.0;
  cluster->add_option("--named", cl_named, "golden | sqrt2 (rho in (0, 1))");
  cluster->add_option("--x", cl_x, "rho given numerically");
  cluster->add_option("--budget", cl_budget, "absolute uncertainty of --x");
  cluster->add_option("--h-min", cl_h_min, "smallest offset in x units");
  cluster->add_option("--h-max", cl_h_max, "largest offset in x units");
  cluster->add_option("--rel-tol", cl_rel, "chord tolerance relative to sqrt|h|");
  cluster->add_option("--threshold-deg", cl_thr, "spread above which no single tangent is reported");
  handlers[cluster] = {[&] {
                         (void)resolve_rho(cl_named, cl_x, cl_budget);
                         require(cl_h_min > 0 && cl_h_min < cl_h_max, ErrorCode::invalid_argument,
                                 "need 0 < h-min < h-max");
                       },
                       [&] {
                         const auto rho = resolve_rho(cl_named, cl_x, cl_budget);
                         const auto off = convergent_offsets(rho, cl_h_min, cl_h_max);
                         const auto rep = direction_cluster(rho, off, cl_rel, deg(cl_thr));
                         Output o;
                         o.summary = {{"rho", cf_value(rho)},
                                      {"angular_spread_deg", rep.angular_spread * 180.0 / std::numbers::pi},
                                      {"verdict", rep.verdict},
                                      {"resolved", rep.profile.samples.size()},
                                      {"unresolved", rep.profile.unresolved.size()}};
                         Table t = direction_table();
                         profile_rows(t, rep.profile);
                         o.table = std::move(t);
                         return o;
                       }};

  // lemma-c
  auto* lemma = app.add_subcommand("lemma-c", "estimate the constant C in |dphi| <= C sqrt|h| / sqrt q");
  std::int64_t lq_max = 20, hold_q_max = 60;
  std::size_t h_per_q = 8, holdout = 0;
  double l_rel = 1e-3;
  lemma->add_option("--q-max", lq_max, "largest denominator");
  lemma->add_option("--h-per-q", h_per_q, "log-spaced offsets per rational and sign");
  lemma->add_option("--rel-tol", l_rel, "difference tolerance relative to sqrt|h|");
  lemma->add_option("--holdout", holdout, "fresh random samples checked against 1.1 C_hat");
  lemma->add_option("--holdout-q-max", hold_q_max, "largest denominator of hold-out samples");
  handlers[lemma] = {[&] {
                       require(lq_max >= 2, ErrorCode::invalid_argument, "q-max must be >= 2");
                       require(h_per_q >= 4, ErrorCode::invalid_argument, "h-per-q must be >= 4");
                       require(hold_q_max >= 1, ErrorCode::invalid_argument, "holdout-q-max must be >= 1");
                     },
                     [&] {
                       const auto est = lemma_constant_estimate(lq_max, h_per_q, l_rel);
                       Output o;
                       o.summary = {{"c_hat", est.c_hat},
                                    {"samples", est.samples},
                                    {"witness_p", est.witness.pq.p64()},
                                    {"witness_q", est.witness.pq.q64()},
                                    {"witness_h", est.witness.h}};
                       if (holdout > 0) {
                         std::mt19937_64 rng(g.seed);
                         std::uniform_int_distribution<std::int64_t> uq(1, hold_q_max);
                         std::uniform_real_distribution<double> u(0.0, 1.0);
                         const double floor_x = kTwoPi * SeriesConfig{}.h_floor * (1.0 + 1e-9);
                         Table t{{"p", "q", "h", "ratio", "within"}, {}};
                         std::size_t bad = 0;
                         for (std::size_t i = 0; i < holdout; ++i) {
                           const std::int64_t q = uq(rng);
                           std::int64_t p = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
                           while (std::gcd(p, q) != 1) p = (p + 1) % q;
                           const double top = 1.0 / static_cast<double>(q * q);
                           const double h = top * std::pow(floor_x / top, u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
                           const double ratio = lemma_ratio(TimePoint::at_rational(p, q), q, h, l_rel);
                           const bool ok = ratio <= 1.1 * est.c_hat;
                           if (!ok) ++bad;
                           t.add({p, q, h, ratio, ok});
                         }
                         o.summary["holdout_violations"] = bad;
                         o.table = std::move(t);
                       }
                       return o;
                     }};

  // cover
  auto* cover = app.add_subcommand("cover", "Farey ball cover and its check on random irrationals");
  std::int64_t cv_q0 = 10, cv_qmax = 1000;
  std::optional<double> c_used;
  double cv_exp = 1.5;
  std::size_t cv_verify = 0;
  bool cv_balls = false;
  cover->add_option("--q0", cv_q0, "smallest denominator");
  cover->add_option("--q-max", cv_qmax, "largest denominator");
  cover->add_option("--c-used", c_used, "radius constant (default 2 C_hat from q <= 20)");
  cover->add_option("--exponent", cv_exp, "radius exponent e in C q^-e");
  cover->add_option("--verify", cv_verify, "number of random irrationals to check");
  cover->add_flag("--balls", cv_balls, "list every ball (centres are evaluated)");
  handlers[cover] = {[&] {
                       (void)build_cover(cv_q0, cv_qmax, c_used.value_or(1.0), cv_exp);
                     },
                     [&] {
                       const double c = c_used ? *c_used : 2.0 * suite::frozen_c_hat();
                       const auto set = build_cover(cv_q0, cv_qmax, c, cv_exp);
                       Output o;
                       o.summary = {{"balls", set.size()}, {"c_used", c}, {"exponent", cv_exp}};
                       if (cv_verify > 0) {
                         const auto rep = verify_cover(set, suite::random_irrationals(cv_verify, g.seed));
                         o.summary["verified"] = cv_verify;
                         o.summary["covered"] = rep.passed;
                         if (!cv_balls) {
                           Table t{{"rho", "p", "q", "h", "distance", "error_bound", "radius", "covered"}, {}};
                           for (const auto& e : rep.entries) {
                             t.add({e.rho, e.convergent.p64(), e.convergent.q64(), e.h, e.distance, e.error_bound,
                                    e.radius, e.covered});
                           }
                           o.table = std::move(t);
                         }
                       }
                       if (cv_balls) {
                         Table t{{"p", "q", "center_re", "center_im", "radius"}, {}};
                         for_each_farey(cv_q0, cv_qmax, [&](std::int64_t p, std::int64_t q) {
                           const auto b = set.ball(p, q);
                           t.add({p, q, b.center.real(), b.center.imag(), b.radius});
                         });
                         o.table = std::move(t);
                       }
                       return o;
                     }};

  // content-sum
  auto* content = app.add_subcommand("content-sum", "partial sums bounding the alpha pre-measure");
  double cs_alpha = 4.0 / 3.0, cs_c = 1.0;
  std::int64_t cs_q0 = 10, cs_qmax = 1000000;
  content->add_option("--alpha", cs_alpha, "dimension parameter");
  content->add_option("--q0", cs_q0, "smallest denominator");
  content->add_option("--q-max", cs_qmax, "largest denominator");
  content->add_option("--c-used", cs_c, "radius constant");
  handlers[content] = {[&] {
                         require(cs_alpha > 0, ErrorCode::invalid_argument, "alpha must be > 0");
                         require(cs_q0 >= 1 && cs_q0 <= cs_qmax, ErrorCode::invalid_argument, "need 1 <= q0 <= q-max");
                         require(cs_c > 0, ErrorCode::invalid_argument, "c-used must be > 0");
                       },
                       [&] {
                         const auto s = content_partial_sum(cs_alpha, cs_q0, cs_qmax, cs_c);
                         Output o;
                         o.summary = {{"alpha", s.alpha},
                                      {"q0", s.q0},
                                      {"q_max", s.q_max},
                                      {"partial", s.partial},
                                      {"exact_partial", s.exact_partial},
                                      {"tail_bound", std::isinf(s.tail_bound) ? json("inf") : json(s.tail_bound)},
                                      {"verdict", std::string(to_string(s.verdict))}};
                         return o;
                       }};

  // boxdim
  auto* boxdim = app.add_subcommand("boxdim", "box-counting slope of the traced image");
  std::size_t bx_n = 1000001, bx_offsets = 4;
  double bx_tol = 1e-6;
  int k_min = 4, k_max = 10;
  boxdim->add_option("--n", bx_n, "trace samples over x in [0, 1]");
  boxdim->add_option("--tol", bx_tol, "trace tolerance");
  boxdim->add_option("--k-min", k_min, "largest scale 2^-k-min");
  boxdim->add_option("--k-max", k_max, "smallest scale 2^-k-max");
  boxdim->add_option("--offsets", bx_offsets, "random grid offsets for the anchoring spread");
  handlers[boxdim] = {[&] {
                        require(bx_n >= 2, ErrorCode::invalid_argument, "need n >= 2");
                        require(k_min >= 0 && k_min < k_max && k_max <= 30, ErrorCode::invalid_argument,
                                "need 0 <= k-min < k-max <= 30");
                        detail::require_tolerance(bx_tol);
                      },
                      [&] {
                        const auto poly = trace_image(0.0, 1.0, bx_n, bx_tol);
                        const auto scales = suite::dyadic_scales(k_min, k_max);
                        const auto fit = box_count(poly, scales);
                        const auto spread = box_count_offsets(poly, scales, bx_offsets, g.seed);
                        Output o;
                        o.summary = {{"slope", fit.slope},
                                     {"fit_r2", fit.fit_r2},
                                     {"usable_scales", fit.scales.size()},
                                     {"offset_slopes", spread.slopes},
                                     {"offset_spread", spread.spread}};
                        Table t{{"scale", "count"}, {}};
                        for (std::size_t i = 0; i < fit.scales.size(); ++i) t.add({fit.scales[i], fit.counts[i]});
                        o.table = std::move(t);
                        return o;
                      }};

  // cone-scan
  auto* cone = app.add_subcommand("cone-scan", "double-cone content ratios over candidate tangent directions");
  std::int64_t cn_p = 1, cn_q = 2;
  std::string cn_named;
  int cn_dirs = 16, cn_log2 = 21;
  double cn_open = 20.0, cn_tol = 1e-7;
  std::string cn_h = "0.04,0.02,0.01";
  cone->add_option("--p", cn_p, "numerator of x0 = p/q");
  cone->add_option("--q", cn_q, "denominator of x0 = p/q");
  cone->add_option("--named", cn_named, "golden | sqrt2 instead of p/q");
  cone->add_option("--directions", cn_dirs, "number of directions over [0, pi)");
  cone->add_option("--opening-deg", cn_open, "full opening angle of the double cone");
  cone->add_option("--radii", cn_h, "comma-separated decreasing radii h");
  cone->add_option("--trace-log2", cn_log2, "trace uses 2^k + 1 samples of x in [0, 1]");
  cone->add_option("--tol", cn_tol, "trace tolerance");
  auto cone_point = [&]() -> TimePoint {
    if (!cn_named.empty()) return TimePoint::from_x(cf_value(resolve_rho(cn_named, std::nullopt, 0.0)));
    return TimePoint::at_rational(cn_p, cn_q);
  };
  handlers[cone] = {[&] {
                      (void)cone_point();
                      const auto hs = parse_list(cn_h);
                      require(!hs.empty() && hs.front() < 0.1, ErrorCode::invalid_argument, "radii must be below 0.1");
                      require(cn_dirs >= 1, ErrorCode::invalid_argument, "directions must be >= 1");
                      require(cn_open > 0 && cn_open < 180, ErrorCode::invalid_argument, "opening in (0, 180)");
                      require(cn_log2 >= 4 && cn_log2 <= 26, ErrorCode::invalid_argument, "trace-log2 in [4, 26]");
                    },
                    [&] {
                      const TimePoint x0 = cone_point();
                      const auto hs = parse_list(cn_h);
                      const auto poly = trace_image(0.0, 1.0, (std::size_t{1} << cn_log2) + 1, cn_tol);
                      Table t{{"direction", "angle", "h", "ratio", "fragments"}, {}};
                      double worst = std::numeric_limits<double>::infinity();
                      for (int k = 0; k < cn_dirs; ++k) {
                        const double a = std::numbers::pi * k / cn_dirs;
                        const auto res = cone_tangent_ratio(x0, unit_at(a), deg(cn_open), hs, poly);
                        for (const auto& r : res.ratios) t.add({k, a, r.h, r.ratio, r.fragments});
                        worst = std::min(worst, res.ratios.back().ratio);
                      }
                      Output o;
                      o.summary = {{"x0", x0.x()},
                                   {"min_terminal_ratio", worst},
                                   {"all_directions_rejected", worst >= kConeRatioFloor},
                                   {"trace_max_gap", max_gap(poly)}};
                      o.table = std::move(t);
                      return o;
                    }};

  // report
  auto* report = app.add_subcommand("report", "run the acceptance criteria and collect one JSON document");
  std::vector<int> crit{1, 2, 3, 4, 5, 6, 7, 8, 9};
  report->add_option("--criteria", crit, "criteria to run")->check(CLI::Range(1, 9))->delimiter(',');
  handlers[report] = {[] {},
                      [&] {
                        Output o;
                        json list = json::array();
                        std::size_t passed = 0;
                        for (int id : crit) {
                          const auto r = suite::run_criterion(id, g.seed);
                          if (r.pass) ++passed;
                          list.push_back(suite::to_json(r));
                        }
                        o.summary = {{"criteria", list}, {"passed", passed}, {"total", crit.size()}};
                        Table t{{"criterion", "name", "pass", "summary"}, {}};
                        for (const auto& c : list) t.add({c["criterion"], c["name"], c["pass"], c["summary"]});
                        o.table = std::move(t);
                        return o;
                      }};

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const json cfg = config_echo(*sub, g);
  std::ofstream file;
  if (!g.out.empty()) {
    file.open(g.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open " << g.out << "\n";
      return kExitUsage;
    }
  }
  std::ostream& os = g.out.empty() ? std::cout : file;
  try {
    auto& [validate, run] = handlers.at(sub);
    validate();
    if (g.dry_run) {
      emit(os, g, cfg, {}, true);
      return 0;
    }
    emit(os, g, cfg, run(), false);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return 0;
}
