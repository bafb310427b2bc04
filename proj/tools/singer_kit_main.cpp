#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "singerkit/dynamics.hpp"
#include "singerkit/json_io.hpp"
#include "singerkit/min_principle.hpp"
#include "singerkit/rng.hpp"
#include "singerkit/schwarzian.hpp"
#include "singerkit/sweep.hpp"

using namespace singerkit;

namespace {

struct Options {
  std::string map_text;
  std::vector<std::string> param_args;
  std::string sweep_arg;
  std::string domain_arg;
  std::string n_range_arg;
  std::string format;
  std::string out_path;
  bool serial = false;
  int n = 1;
  Settings st;
};

double parse_number(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("could not parse ") + what + ": '" + s + "'");
  }
}

Params parse_params(const std::vector<std::string>& args) {
  Params out;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--param expects name=value, got '" + a + "'");
    out.emplace_back(a.substr(0, eq), parse_number(a.substr(eq + 1), "--param value"));
  }
  return out;
}

struct SweepRange {
  std::string name;
  double start = 0.0, stop = 0.0, step = 0.0;
};

SweepRange parse_sweep(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--sweep expects name=start:stop:step, got '" + arg + "'");
  const std::string rest = arg.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("--sweep expects name=start:stop:step, got '" + arg + "'");
  SweepRange r;
  r.name = arg.substr(0, eq);
  r.start = parse_number(rest.substr(0, c1), "--sweep start");
  r.stop = parse_number(rest.substr(c1 + 1, c2 - c1 - 1), "--sweep stop");
  r.step = parse_number(rest.substr(c2 + 1), "--sweep step");
  return r;
}

Interval parse_domain(const std::string& arg) {
  const auto comma = arg.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == arg.size())
    throw ConfigError("--domain expects a,b, got '" + arg + "'");
  Interval J;
  J.lo = parse_number(arg.substr(0, comma), "--domain lower end");
  J.hi = parse_number(arg.substr(comma + 1), "--domain upper end");
  return J;
}

struct NRange {
  int lo = 1, hi = 1;
};

NRange resolve_n(const Options& o) {
  NRange r{o.n, o.n};
  if (!o.n_range_arg.empty()) {
    const auto colon = o.n_range_arg.find(':');
    if (colon == std::string::npos)
      throw ConfigError("--n-range expects lo:hi, got '" + o.n_range_arg + "'");
    const double lo = parse_number(o.n_range_arg.substr(0, colon), "--n-range lo");
    const double hi = parse_number(o.n_range_arg.substr(colon + 1), "--n-range hi");
    r.lo = static_cast<int>(lo);
    r.hi = static_cast<int>(hi);
    if (lo != r.lo || hi != r.hi) throw ConfigError("--n-range bounds must be integers");
  }
  if (r.lo < 1 || r.hi < r.lo) throw ConfigError("iterate orders must satisfy 1 <= lo <= hi");
  return r;
}

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file: " + path);
    os = &file;
  }
  std::ostream& stream() { return *os; }
};

struct Ctx {
  MapSpec base;
  std::optional<SweepRange> sweep;
  std::vector<double> values;
  Settings st;
  Exec exec = Exec::Parallel;
  std::string format;
  Sink out;
};

Ctx make_ctx(const Options& o, const char* default_format) {
  Ctx c;
  Interval domain{0.0, 1.0};
  if (o.domain_arg.empty())
    std::cerr << "warning: --domain not given, defaulting to [0,1]\n";
  else
    domain = parse_domain(o.domain_arg);

  Params params = parse_params(o.param_args);
  if (!o.sweep_arg.empty()) {
    const SweepRange sw = parse_sweep(o.sweep_arg);
    c.values = sweep_values(sw.start, sw.stop, sw.step);
    bool bound = false;
    for (auto& [name, value] : params)
      if (name == sw.name) {
        value = sw.start;
        bound = true;
      }
    if (!bound) params.emplace_back(sw.name, sw.start);
    c.sweep = sw;
  }

  c.base = MapSpec::compile(o.map_text, std::move(params), domain);
  if (c.sweep) {
    const auto used = c.base.ast.param_names();
    if (std::find(used.begin(), used.end(), c.sweep->name) == used.end())
      throw ConfigError("swept parameter '" + c.sweep->name + "' does not appear in the map");
  }

  c.st = o.st;
  c.exec = o.serial ? Exec::Serial : Exec::Parallel;
  c.format = o.format.empty() ? default_format : o.format;
  c.out.open(o.out_path);
  return c;
}

template <class F>
void for_each_map(const Ctx& c, F&& f) {
  if (!c.sweep) {
    f(c.base);
    return;
  }
  for (double v : c.values) f(bind_param(c.base, c.sweep->name, v));
}

Json envelope(const char* cmd, const MapSpec& m) {
  Json params = Json::object();
  for (const auto& [name, value] : m.params) params[name] = value;
  return Json{{"command", cmd},
              {"map", m.source},
              {"domain", to_json(m.domain)},
              {"params", params}};
}

void emit(Ctx& c, Json j) {
  j["settings"] = to_json(c.st);
  c.out.stream() << j.dump() << "\n";
}

std::string join(const std::vector<std::string>& cells, char sep = ',') {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += sep;
    line += cells[i];
  }
  return line;
}

std::vector<std::string> param_names(const MapSpec& base) {
  std::vector<std::string> names;
  for (const auto& [name, value] : base.params) names.push_back(name);
  return names;
}

std::vector<std::string> param_cells(const MapSpec& m) {
  std::vector<std::string> cells;
  for (const auto& [name, value] : m.params) cells.push_back(format_double(value));
  return cells;
}

void csv_preamble(Ctx& c) {
  c.out.stream() << "# map " << c.base.source << "\n";
  c.out.stream() << "# settings " << to_json(c.st).dump() << "\n";
}

std::string describe_params(const MapSpec& m) {
  std::string s;
  for (const auto& [name, value] : m.params) {
    if (!s.empty()) s += " ";
    s += name + "=" + format_double(value);
  }
  return s.empty() ? std::string("-") : s;
}

// ---------------------------------------------------------------- schwarzian

struct CompSummary {
  int samples = 0;
  int evaluated = 0;
  double max_residual = 0.0;
};

CompSummary composition_spots(const MapSpec& m, const Settings& st) {
  CompSummary cs;
  cs.samples = st.comp_samples;
  Rng rng(st.seed);
  for (int s = 0; s < st.comp_samples; ++s) {
    const double x = rng.uniform(m.domain.lo, m.domain.hi);
    if (const auto r = verify_composition_law(m, m, x, st)) {
      ++cs.evaluated;
      cs.max_residual = std::max(cs.max_residual, *r);
    }
  }
  return cs;
}

int cmd_schwarzian(const Options& o) {
  Ctx c = make_ctx(o, "json");
  const NRange nr = resolve_n(o);

  if (c.format == "csv") {
    csv_preamble(c);
    auto hdr = param_names(c.base);
    for (const char* col :
         {"n", "grid_size", "defined", "undefined", "nonfinite", "min_value", "min_x",
          "max_value", "max_x", "nonnegative", "all_sampled_negative", "comp_samples",
          "comp_evaluated", "comp_max_residual"})
      hdr.push_back(col);
    c.out.stream() << join(hdr) << "\n";
  }

  for_each_map(c, [&](const MapSpec& m) {
    const CompSummary cs = composition_spots(m, c.st);
    for (int n = nr.lo; n <= nr.hi; ++n) {
      const NegativityReport rep = negativity_scan(m, n, c.st.grid_size, c.st, c.exec);
      if (c.format == "json") {
        Json j = envelope("schwarzian", m);
        j["n"] = n;
        j["report"] = to_json(rep);
        j["composition"] = Json{{"samples", cs.samples},
                                {"evaluated", cs.evaluated},
                                {"max_residual", cs.max_residual}};
        emit(c, std::move(j));
      } else if (c.format == "csv") {
        auto row = param_cells(m);
        for (const std::string& cell :
             {std::to_string(rep.n), std::to_string(rep.grid_size),
              std::to_string(rep.defined_count), std::to_string(rep.undefined_count),
              std::to_string(rep.nonfinite_count), format_double(rep.min_value),
              format_double(rep.min_x), format_double(rep.max_value), format_double(rep.max_x),
              std::to_string(rep.nonnegative_count),
              std::string(rep.all_sampled_negative ? "true" : "false"),
              std::to_string(cs.samples), std::to_string(cs.evaluated),
              format_double(cs.max_residual)})
          row.push_back(cell);
        c.out.stream() << join(row) << "\n";
      } else {
        c.out.stream() << describe_params(m) << " n=" << n << ": " << rep.defined_count << "/"
                       << rep.grid_size << " samples defined";
        if (rep.defined_count > 0)
          c.out.stream() << ", S(f^n) in [" << format_double(rep.min_value) << ", "
                         << format_double(rep.max_value) << "]";
        c.out.stream() << ", all sampled negative: "
                       << (rep.all_sampled_negative ? "yes" : "no") << ", composition residual "
                       << format_double(cs.max_residual) << " over " << cs.evaluated
                       << " points\n";
      }
    }
  });
  return 0;
}

// -------------------------------------------------------------- minprinciple

int cmd_minprinciple(const Options& o) {
  Ctx c = make_ctx(o, "json");
  const NRange nr = resolve_n(o);

  if (c.format == "csv") {
    csv_preamble(c);
    auto hdr = param_names(c.base);
    for (const char* col : {"n", "extrema", "violations", "first_violation_x",
                            "first_violation_kind", "first_violation_g"})
      hdr.push_back(col);
    c.out.stream() << join(hdr) << "\n";
  }

  for_each_map(c, [&](const MapSpec& m) {
    for (int n = nr.lo; n <= nr.hi; ++n) {
      const MinPrincipleReport rep =
          classify_extrema(n, find_derivative_extrema(m, n, c.st.grid_size, c.st, c.exec), c.st);
      if (c.format == "json") {
        Json j = envelope("minprinciple", m);
        j["report"] = to_json(rep);
        emit(c, std::move(j));
      } else if (c.format == "csv") {
        auto row = param_cells(m);
        row.push_back(std::to_string(rep.n));
        row.push_back(std::to_string(rep.extrema.size()));
        row.push_back(std::to_string(rep.violations.size()));
        if (rep.violations.empty()) {
          row.insert(row.end(), {"", "", ""});
        } else {
          const auto& v = rep.violations.front();
          row.push_back(format_double(v.x));
          row.push_back(v.kind == ExtremumKind::LocalMax ? "max" : "min");
          row.push_back(format_double(v.g_value));
        }
        c.out.stream() << join(row) << "\n";
      } else {
        c.out.stream() << describe_params(m) << " n=" << n << ": " << rep.extrema.size()
                       << " extrema, " << rep.violations.size() << " violations";
        for (const auto& v : rep.violations)
          c.out.stream() << "  [" << (v.kind == ExtremumKind::LocalMax ? "max" : "min") << " at "
                         << format_double(v.x) << " value " << format_double(v.g_value) << "]";
        c.out.stream() << "\n";
      }
    }
  });
  return 0;
}

// -------------------------------------------------------------------- singer

int cmd_singer(const Options& o) {
  Ctx c = make_ctx(o, "json");

  if (c.format == "csv") {
    csv_preamble(c);
    auto hdr = param_names(c.base);
    for (const char* col : {"pass", "orbits", "attracting", "period", "multiplier", "basin",
                            "contained_criticals", "contains_boundary", "neutral_converged"})
      hdr.push_back(col);
    c.out.stream() << join(hdr) << "\n";
  }

  for_each_map(c, [&](const MapSpec& m) {
    const SingerReport rep = singer_check(m, c.st.max_period, c.st.grid_size, c.st, c.exec);
    if (c.format == "json") {
      Json j = envelope("singer", m);
      j["report"] = to_json(rep);
      emit(c, std::move(j));
    } else if (c.format == "csv") {
      auto row = param_cells(m);
      row.push_back(rep.pass ? "true" : "false");
      row.push_back(std::to_string(rep.orbits.size()));
      row.push_back(std::to_string(rep.attracting.size()));
      if (rep.attracting.empty()) {
        row.insert(row.end(), {"", "", "", "", ""});
      } else {
        const auto& a = rep.attracting.front();
        row.push_back(std::to_string(a.orbit.period));
        row.push_back(format_double(a.orbit.multiplier));
        std::string basin;
        for (const auto& comp : a.basin.components) {
          if (!basin.empty()) basin += "|";
          basin += format_double(comp.lo) + ":" + format_double(comp.hi);
        }
        row.push_back(basin);
        std::string crit;
        for (double x : a.contained_critical_points) {
          if (!crit.empty()) crit += "|";
          crit += format_double(x);
        }
        row.push_back(crit);
        row.push_back(a.contains_boundary ? "true" : "false");
      }
      if (rep.neutral.empty())
        row.push_back("");
      else
        row.push_back(rep.neutral.front().check.converged ? "true" : "false");
      c.out.stream() << join(row) << "\n";
    } else {
      c.out.stream() << describe_params(m) << ": " << (rep.pass ? "PASS" : "FAIL") << ", "
                     << rep.orbits.size() << " orbits";
      for (const auto& a : rep.attracting) {
        c.out.stream() << "; attracting period " << a.orbit.period << " multiplier "
                       << format_double(a.orbit.multiplier) << ", basin contains";
        if (a.contained_critical_points.empty() && !a.contains_boundary)
          c.out.stream() << " nothing required";
        for (double x : a.contained_critical_points)
          c.out.stream() << " critical " << format_double(x);
        if (a.contains_boundary) c.out.stream() << " a boundary point";
      }
      for (const auto& nr : rep.neutral)
        c.out.stream() << "; neutral period " << nr.orbit.period << " "
                       << (nr.check.converged ? "converged" : "not converged") << " after "
                       << nr.check.iterations << " iterations";
      c.out.stream() << "\n";
    }
  });
  return 0;
}

// ------------------------------------------------------------------ identity

int cmd_identity(const Options& o) {
  Ctx c = make_ctx(o, "json");
  const NRange nr = resolve_n(o);
  constexpr std::size_t kDegenerateCap = 8;  // degenerate scans list every grid point

  if (c.format == "csv") {
    csv_preamble(c);
    auto hdr = param_names(c.base);
    for (const char* col :
         {"n", "x", "degenerate_scan", "constraint_residual", "rearrange_a_residual",
          "rearrange_b_residual", "identity_residual", "quotient", "quotient_sign",
          "precondition_failed"})
      hdr.push_back(col);
    c.out.stream() << join(hdr) << "\n";
  }

  for_each_map(c, [&](const MapSpec& m) {
    for (int n = nr.lo; n <= nr.hi; ++n) {
      const CriticalPointScan scan =
          find_nonvanishing_critical_points(m, n + 1, c.st.grid_size, c.st, c.exec);
      std::vector<double> points = scan.points;
      if (scan.degenerate && points.size() > kDegenerateCap) points.resize(kDegenerateCap);

      for (double x : points) {
        bool failed = false;
        ChainReport rep;
        std::string message;
        try {
          rep = identity_chain_check(m, n, x, c.st);
        } catch (const PreconditionError& e) {
          failed = true;
          message = e.what();
        }
        if (c.format == "json") {
          Json j = envelope("identity", m);
          j["n"] = n;
          j["degenerate_scan"] = scan.degenerate;
          if (failed) {
            j["x"] = x;
            j["precondition_failed"] = true;
            j["message"] = message;
          } else {
            j["report"] = to_json(rep);
          }
          emit(c, std::move(j));
        } else if (c.format == "csv") {
          auto row = param_cells(m);
          row.push_back(std::to_string(n));
          row.push_back(format_double(x));
          row.push_back(scan.degenerate ? "true" : "false");
          if (failed) {
            row.insert(row.end(), {"", "", "", "", "", ""});
            row.push_back("true");
          } else {
            row.push_back(format_double(rep.constraint_residual));
            row.push_back(format_double(rep.rearrange_a_residual));
            row.push_back(format_double(rep.rearrange_b_residual));
            row.push_back(format_double(rep.identity_residual));
            row.push_back(format_double(rep.quotient));
            row.push_back(std::to_string(rep.quotient_sign));
            row.push_back("false");
          }
          c.out.stream() << join(row) << "\n";
        } else {
          c.out.stream() << describe_params(m) << " n=" << n << " x=" << format_double(x);
          if (failed) {
            c.out.stream() << ": precondition failed (" << message << ")\n";
          } else {
            c.out.stream() << ": residuals " << format_double(rep.constraint_residual) << " "
                           << format_double(rep.rearrange_a_residual) << " "
                           << format_double(rep.rearrange_b_residual) << " "
                           << format_double(rep.identity_residual) << ", quotient "
                           << format_double(rep.quotient) << " ("
                           << (rep.quotient_sign < 0   ? "negative"
                               : rep.quotient_sign > 0 ? "positive"
                                                       : "zero")
                           << ")\n";
          }
        }
      }
    }
  });
  return 0;
}

// ---------------------------------------------------------------------- scan

int cmd_scan(const Options& o) {
  Ctx c = make_ctx(o, "csv");
  if (!c.sweep) throw ConfigError("scan requires --sweep name=start:stop:step");

  const double x0 = c.base.domain.midpoint();
  const auto rows = bifurcation_scan(c.base, c.sweep->name, c.values, x0, c.st.transient,
                                     c.st.window, c.st, c.exec);

  if (c.format == "csv") {
    csv_preamble(c);
    c.out.stream() << c.sweep->name << ",cluster,escaped\n";
    for (const auto& row : rows) {
      if (row.escaped) {
        c.out.stream() << format_double(row.param) << ",,true\n";
        continue;
      }
      for (double cl : row.clusters)
        c.out.stream() << format_double(row.param) << "," << format_double(cl) << ",false\n";
    }
  } else if (c.format == "json") {
    for (const auto& row : rows) {
      Json j = envelope("scan", bind_param(c.base, c.sweep->name, row.param));
      j["report"] = to_json(row);
      emit(c, std::move(j));
    }
  } else {
    for (const auto& row : rows) {
      c.out.stream() << c.sweep->name << "=" << format_double(row.param) << ":";
      if (row.escaped) {
        c.out.stream() << " escaped";
      } else {
        for (double cl : row.clusters) c.out.stream() << " " << format_double(cl);
      }
      c.out.stream() << "\n";
    }
  }
  return 0;
}

void add_common(CLI::App* sub, Options& o, bool with_n, bool with_max_period) {
  sub->add_option("--map", o.map_text, "map expression in x, e.g. \"mu*x*(1-x)\"")->required();
  sub->add_option("--param", o.param_args, "bind a parameter, name=value (repeatable)");
  sub->add_option("--sweep", o.sweep_arg, "sweep a parameter, name=start:stop:step");
  sub->add_option("--domain", o.domain_arg, "domain interval a,b (default 0,1 with a warning)");
  if (with_n) {
    sub->add_option("--n", o.n, "iterate order (default 1)");
    sub->add_option("--n-range", o.n_range_arg, "iterate orders lo:hi inclusive");
  }
  if (with_max_period)
    sub->add_option("--max-period", o.st.max_period, "largest period searched (default 8)");
  sub->add_option("--grid", o.st.grid_size, "sample grid size (default 4096)");
  sub->add_option("--format", o.format, "output format: json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--out", o.out_path, "write output to this file instead of stdout");
  sub->add_option("--seed", o.st.seed, "seed for randomized spot checks (default 1)");
  sub->add_flag("--serial", o.serial, "run grid kernels on the serial reference path");

  sub->add_option("--vanish-threshold", o.st.vanish_threshold,
                  "derivative magnitude treated as vanishing");
  sub->add_option("--crit-tol", o.st.crit_tol, "residual tolerance for refined critical points");
  sub->add_option("--neutral-band", o.st.neutral_band, "band around |multiplier|=1");
  sub->add_option("--violation-tol", o.st.violation_tol, "strictness threshold for sign checks");
  sub->add_option("--dedupe-tol", o.st.dedupe_tol, "periodic-point dedupe radius");
  sub->add_option("--tangency-tol", o.st.tangency_tol, "dense tangency scan threshold");
  sub->add_option("--min-period-tol", o.st.min_period_tol, "orbit closure tolerance");
  sub->add_option("--conv-radius", o.st.conv_radius, "basin convergence radius");
  sub->add_option("--basin-iter-cap", o.st.basin_iter_cap, "basin convergence iteration cap");
  sub->add_option("--basin-resolution", o.st.basin_resolution, "basin endpoint resolution");
  sub->add_option("--neutral-iter-cap", o.st.neutral_iter_cap, "neutral convergence cap");
  sub->add_option("--neutral-tol", o.st.neutral_tol, "neutral convergence tolerance");
  sub->add_option("--transient", o.st.transient, "omega-limit transient length");
  sub->add_option("--window", o.st.window, "omega-limit window length");
  sub->add_option("--cluster-tol", o.st.cluster_tol, "omega-limit clustering radius");
  sub->add_option("--comp-samples", o.st.comp_samples, "composition-law spot checks per map");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Schwarzian derivatives, minimum-principle checks and empirical "
               "Singer tests for interval maps"};
  app.require_subcommand(1);

  CLI::App* c_sch = app.add_subcommand(
      "schwarzian", "sample S(f^n) over the domain and spot-check the composition law");
  add_common(c_sch, o, true, false);
  CLI::App* c_min = app.add_subcommand(
      "minprinciple", "locate extrema of (f^n)' and report minimum-principle violations");
  add_common(c_min, o, true, false);
  CLI::App* c_sing = app.add_subcommand(
      "singer", "periodic orbits, basins and the critical-point containment check");
  add_common(c_sing, o, false, true);
  CLI::App* c_id = app.add_subcommand(
      "identity", "third-derivative identity chain at critical points of (f^(n+1))'");
  add_common(c_id, o, true, false);
  CLI::App* c_scan =
      app.add_subcommand("scan", "omega-limit clusters along a parameter sweep");
  add_common(c_scan, o, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(c_sch)) return cmd_schwarzian(o);
    if (app.got_subcommand(c_min)) return cmd_minprinciple(o);
    if (app.got_subcommand(c_sing)) return cmd_singer(o);
    if (app.got_subcommand(c_id)) return cmd_identity(o);
    if (app.got_subcommand(c_scan)) return cmd_scan(o);
  } catch (const singerkit::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
