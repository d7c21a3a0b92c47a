// fracmc command-line front end. Subcommands reproduce the library's
// experiment suite and emit CSV (RFC 4180) / JSON records with a provenance
// header.  Seeds are mandatory: identical invocations produce byte-identical
// outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fracmc/fracmc.hpp"
#include "fracmc/serialize.hpp"

using nlohmann::json;
using namespace fracmc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerificationFailed = 2;

struct CommonOpts {
  uint64_t seed = 0;
  double s = 0.5;
  double cN = 1.0;
  int64_t n = 1000000;
  double r_near = 0;
  double R_far = 0;
  int threads = 0;
  std::string out;
  std::string config_file;
  std::string json_override;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (required; no wall-clock default)");
  cmd->add_option("--s", c.s, "fractional order in (0,1)");
  cmd->add_option("--cN", c.cN, "normalization constant (default 1)");
  cmd->add_option("--n", c.n, "Monte Carlo sample pairs");
  cmd->add_option("--r-near", c.r_near, "inner cutoff (0: default)");
  cmd->add_option("--R-far", c.R_far, "outer truncation (0: default)");
  cmd->add_option("--threads", c.threads,
                  "worker threads (0: FRACMC_THREADS or hardware)");
  cmd->add_option("--out", c.out, "output file (default: stdout)");
  cmd->add_option("--config", c.config_file,
                  "flat key=value file supplying unset options");
  cmd->add_option("--json-config", c.json_override,
                  "JSON file overriding option values");
}

void apply_option_value(CLI::App* cmd, const std::string& key,
                        const std::string& value, bool override_existing) {
  CLI::Option* opt = cmd->get_option_no_throw("--" + key);
  if (!opt) throw ConfigError("unknown config key: " + key);
  if (!override_existing && opt->count() > 0) return;  // CLI flag wins
  opt->clear();
  if (opt->get_expected_min() == 0) {
    // flag: any truthy value sets it
    if (value.empty() || value == "1" || value == "true")
      opt->add_result("true");
  } else {
    opt->add_result(value);
  }
  opt->run_callback();
}

// Flat key=value defaults: command-line flags take precedence.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    try {
      apply_option_value(cmd, line.substr(0, eq), line.substr(eq + 1), false);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

// JSON override: top-level keys are long option names without the dashes;
// overrides both defaults and earlier values.
void apply_json_override(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open JSON config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad JSON config: ") + e.what());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string value;
    if (it.value().is_string())
      value = it.value().get<std::string>();
    else
      value = it.value().dump();
    apply_option_value(cmd, it.key(), value, true);
  }
}

QuadratureSpec make_spec(const CommonOpts& c) {
  QuadratureSpec spec;
  spec.seed = c.seed;
  spec.n_samples = c.n;
  spec.r_near = c.r_near;
  spec.R_far = c.R_far;
  return spec;
}

Params make_params(const CommonOpts& c, int N) {
  Params p;
  p.N = N;
  p.s = c.s;
  p.cN = c.cN;
  if (!p.valid()) throw ConfigError("invalid parameters (need N in {2,3}, 0<s<1, cN>0)");
  return p;
}

std::string provenance(const CommonOpts& c, const std::string& extra) {
  std::ostringstream os;
  os << "# fracmc seed=" << c.seed << " s=" << c.s << " cN=" << c.cN
     << " n=" << c.n << " r_near=" << c.r_near << " R_far=" << c.R_far
     << " omega_convention=unit-sphere-surface-measure";
  if (!extra.empty()) os << ' ' << extra;
  return os.str();
}

void write_text(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw IoError("cannot open " + out_path + " for writing");
  os << payload;
}

struct ShapeOpts {
  std::string shape = "segment";
  double d = 1.0;
  double radius = 1.0;
  double height = 0.0;
  int n_facets = 64;
  double eps = 1e-3;
  double t = 0.0;  // 0: use eps
  double beta = 0.0;  // 0: s/2
  bool no_bump = false;
};

void add_shape(CLI::App* cmd, ShapeOpts& s) {
  cmd->add_option("--shape", s.shape,
                  "segment|disk3d|cone2d|cone3d|circle|barrier|csv:<path>|off:<path>");
  cmd->add_option("--d", s.d, "cone slope / sheet separation");
  cmd->add_option("--radius", s.radius, "disk/segment radius");
  cmd->add_option("--height", s.height, "disk/segment height");
  cmd->add_option("--n-facets", s.n_facets, "mesh resolution");
  cmd->add_option("--eps", s.eps, "barrier well depth");
  cmd->add_option("--t", s.t, "barrier sliding offset (0: eps)");
  cmd->add_option("--beta", s.beta, "barrier bump exponent (0: s/2)");
  cmd->add_flag("--no-bump", s.no_bump, "barrier without the side bump");
}

BarrierSpec make_barrier_spec(const ShapeOpts& so, const CommonOpts& c) {
  BarrierSpec b;
  b.eps = so.eps;
  b.t = so.t > 0 ? so.t : so.eps;
  b.beta = so.beta > 0 ? so.beta : 0.5 * c.s;
  b.with_bump = !so.no_bump;
  return b;
}

struct BuiltShape2 {
  Hypersurface<2> M;
  bool valid = false;
};
struct BuiltShape3 {
  Hypersurface<3> M;
  bool valid = false;
};

int shape_dimension(const std::string& shape) {
  if (shape == "disk3d" || shape == "cone3d" || shape.rfind("off:", 0) == 0)
    return 3;
  return 2;
}

Hypersurface<2> build_shape_2d(const ShapeOpts& so, const CommonOpts& c) {
  if (so.shape == "segment")
    return make_flat_segment(so.radius, so.height, std::max(1, so.n_facets / 8));
  if (so.shape == "cone2d") return make_cone_2d(so.d);
  if (so.shape == "circle") {
    std::vector<Vec2> poly;
    const int n = std::max(16, so.n_facets);
    for (int i = 0; i < n; ++i) {
      const double a = 2 * M_PI * i / n;
      poly.push_back({so.radius * std::cos(a), so.radius * std::sin(a)});
    }
    return build_polyline(poly, true);
  }
  if (so.shape == "barrier") {
    Params p = make_params(c, 2);
    return make_barrier_2d(make_barrier_spec(so, c), p);
  }
  if (so.shape.rfind("csv:", 0) == 0) {
    const auto pts = read_polyline_csv(so.shape.substr(4));
    const bool closed = dist(pts.front(), pts.back()) < 1e-12;
    if (closed) {
      std::vector<Vec2> open(pts.begin(), pts.end() - 1);
      return build_polyline(open, true);
    }
    return build_polyline(pts, false);
  }
  throw ConfigError("unknown 2d shape: " + so.shape);
}

Hypersurface<3> build_shape_3d(const ShapeOpts& so) {
  if (so.shape == "disk3d")
    return make_flat_disk_3d(so.radius, so.height, so.n_facets);
  if (so.shape == "cone3d") return make_cone_nd(so.n_facets);
  if (so.shape.rfind("off:", 0) == 0) return read_off(so.shape.substr(4));
  throw ConfigError("unknown 3d shape: " + so.shape);
}

int check_expectation(const std::string& expect, const Estimate& e) {
  if (expect == "none") return kExitOk;
  if (expect == "zero") return e.contains(0.0) ? kExitOk : kExitVerificationFailed;
  if (expect == "positive")
    return (e.value > 0 && e.sign_resolved()) ? kExitOk : kExitVerificationFailed;
  if (expect == "negative")
    return (e.value < 0 && e.sign_resolved()) ? kExitOk : kExitVerificationFailed;
  throw ConfigError("unknown --expect value: " + expect);
}

Vec2 parse_vec2(const std::string& s) {
  Vec2 v{};
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  if (!(is >> v[0] >> v[1])) throw ConfigError("bad point: " + s);
  return v;
}

Vec3 parse_vec3(const std::string& s) {
  Vec3 v{};
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  if (!(is >> v[0] >> v[1] >> v[2])) throw ConfigError("bad point: " + s);
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  double v;
  while (is >> v) out.push_back(v);
  if (out.empty()) throw ConfigError("empty list: " + s);
  return out;
}

// --------------------------------------------------------------------------

int run_curvature(const CommonOpts& c, const ShapeOpts& so,
                  const std::string& z_str, bool flip_normal,
                  const std::string& expect) {
  json result;
  Estimate est;
  if (shape_dimension(so.shape) == 2) {
    const auto M = build_shape_2d(so, c);
    const Vec2 z_req = parse_vec2(z_str);
    const auto [f, dist_z] = M.nearest_facet(z_req);
    const Vec2 z = M.facet_closest_point(f, z_req);
    Vec2 nu = M.facet_normals[f];
    if (flip_normal) nu = -1.0 * nu;
    est = fmc_estimate<2>(M, z, nu, make_params(c, 2), make_spec(c));
    result["z"] = {z[0], z[1]};
    result["nu"] = {nu[0], nu[1]};
  } else {
    const auto M = build_shape_3d(so);
    const Vec3 z_req = parse_vec3(z_str);
    const auto [f, dist_z] = M.nearest_facet(z_req);
    const Vec3 z = M.facet_closest_point(f, z_req);
    Vec3 nu = M.facet_normals[f];
    if (flip_normal) nu = -1.0 * nu;
    est = fmc_estimate<3>(M, z, nu, make_params(c, 3), make_spec(c));
    result["z"] = {z[0], z[1], z[2]};
    result["nu"] = {nu[0], nu[1], nu[2]};
  }
  result["estimate"] = to_json(est);
  result["config"] = provenance(c, "command=curvature shape=" + so.shape);
  write_text(c.out, result.dump(2) + "\n");
  return check_expectation(expect, est);
}

int run_area(const CommonOpts& c, const ShapeOpts& so,
             const std::string& omega_str, const std::string& compare,
             bool expect_overlap) {
  // Omega: ball:R or box:x0,y0,x1,y1
  Domain<2> omega;
  if (omega_str.rfind("ball:", 0) == 0) {
    omega = Domain<2>::ball({0, 0}, std::stod(omega_str.substr(5)));
  } else if (omega_str.rfind("box:", 0) == 0) {
    const auto v = parse_list(omega_str.substr(4));
    if (v.size() != 4) throw ConfigError("box needs x0,y0,x1,y1");
    omega = Domain<2>::box_region(Box<2>{{v[0], v[1]}, {v[2], v[3]}});
  } else {
    throw ConfigError("unknown omega: " + omega_str);
  }
  const auto M = build_shape_2d(so, c);
  const Estimate per = per_s_estimate<2>(M, omega, make_params(c, 2), make_spec(c));
  json result;
  result["per_s"] = to_json(per);
  bool ok = true;
  if (!compare.empty()) {
    if (compare.rfind("ball:", 0) != 0)
      throw ConfigError("only ball:<r> comparison regions are supported");
    const auto E = Region<2>::ball({0, 0}, std::stod(compare.substr(5)));
    QuadratureSpec spec2 = make_spec(c);
    spec2.seed = derive_seed(c.seed, 1);
    const Estimate ps = classical_ps_oracle<2>(E, omega, make_params(c, 2), spec2);
    result["classical_ps"] = to_json(ps);
    result["overlap"] = per.overlaps(ps);
    ok = per.overlaps(ps);
  }
  result["config"] = provenance(c, "command=area shape=" + so.shape);
  write_text(c.out, result.dump(2) + "\n");
  return (!expect_overlap || ok) ? kExitOk : kExitVerificationFailed;
}

int run_cone_scan(const CommonOpts& c, const std::string& d_list_str,
                  int points, bool expect_signs) {
  const auto d_list = parse_list(d_list_str);
  std::ostringstream csv;
  csv << provenance(c, "command=cone-scan") << "\r\n";
  csv << "d,point_index,z1,z2,value,std_error,trunc_bound,sign\r\n";
  csv << std::setprecision(17);
  bool verified = true;
  for (size_t di = 0; di < d_list.size(); ++di) {
    const double d = d_list[di];
    const auto M = make_cone_2d(d);
    const auto pts = cone2d_regular_points(d, std::max(1, (points + 3) / 4));
    int sign_pos = 0, sign_neg = 0, sign_zero = 0;
    for (size_t k = 0; k < pts.size() && k < static_cast<size_t>(points); ++k) {
      QuadratureSpec spec = make_spec(c);
      spec.seed = derive_seed(c.seed, di * 1000 + k);
      const Estimate e =
          fmc_estimate<2>(M, pts[k].z, pts[k].nu, make_params(c, 2), spec);
      int sgn = 0;
      if (e.sign_resolved()) sgn = e.value > 0 ? 1 : -1;
      (sgn > 0 ? sign_pos : sgn < 0 ? sign_neg : sign_zero)++;
      csv << d << ',' << k << ',' << pts[k].z[0] << ',' << pts[k].z[1] << ','
          << e.value << ',' << e.std_error << ',' << e.trunc_bound << ','
          << sgn << "\r\n";
    }
    if (std::abs(d - 1.0) < 1e-12) {
      if (sign_pos + sign_neg > 0) verified = false;  // should all be zero
    } else {
      if (sign_zero > 0 || (sign_pos > 0 && sign_neg > 0)) verified = false;
    }
  }
  write_text(c.out, csv.str());
  return (!expect_signs || verified) ? kExitOk : kExitVerificationFailed;
}

int run_barrier_scan(const CommonOpts& c, const std::string& eps_list_str,
                     const ShapeOpts& so) {
  const auto eps_list = parse_list(eps_list_str);
  std::ostringstream csv;
  csv << provenance(c, "command=barrier-scan") << "\r\n";
  csv << "eps,delta,phi,c_bound,H_plain,err_plain,H_bump,err_bump,"
         "bound_ok,negative_with_margin\r\n";
  csv << std::setprecision(10);
  const Params p = make_params(c, 2);
  double threshold = 0.0;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    ShapeOpts so_eps = so;
    so_eps.eps = eps_list[i];
    so_eps.t = 0;
    BarrierSpec plain = make_barrier_spec(so_eps, c);
    plain.with_bump = false;
    BarrierSpec bump = plain;
    bump.with_bump = true;
    const auto consts = barrier_constants(plain, p);
    const auto M_plain = make_barrier_2d(plain, p);
    const auto M_bump = make_barrier_2d(bump, p);
    const Vec2 apex = barrier_apex_2d(plain);
    QuadratureSpec spec = make_spec(c);
    spec.seed = derive_seed(c.seed, 100 + i);
    auto locate = [&](const Hypersurface<2>& M) {
      const auto [f, dz] = M.nearest_facet(apex);
      return std::pair<Vec2, Vec2>(M.facet_barycenter(f), M.facet_normals[f]);
    };
    const auto [zp, np] = locate(M_plain);
    const Estimate ep = fmc_estimate<2>(M_plain, zp, np, p, spec);
    const auto [zb, nb] = locate(M_bump);
    QuadratureSpec spec_b = spec;
    spec_b.seed = derive_seed(c.seed, 200 + i);
    const Estimate eb = fmc_estimate<2>(M_bump, zb, nb, p, spec_b);
    const double bound = consts.c_bound * std::pow(consts.phi, p.s) * 1.05;
    const bool bound_ok = std::abs(ep.value) + ep.half_width() <= bound;
    const bool neg_ok = eb.value < 0 && eb.sign_resolved();
    if (neg_ok && threshold == 0.0) threshold = eps_list[i];
    if (neg_ok) threshold = std::max(threshold, eps_list[i]);
    csv << eps_list[i] << ',' << consts.delta << ',' << consts.phi << ','
        << consts.c_bound << ',' << ep.value << ',' << ep.half_width() << ','
        << eb.value << ',' << eb.half_width() << ',' << (bound_ok ? 1 : 0)
        << ',' << (neg_ok ? 1 : 0) << "\r\n";
  }
  csv << "# empirical_negativity_threshold=" << threshold << "\r\n";
  write_text(c.out, csv.str());
  return kExitOk;
}

int run_probe(const CommonOpts& c, const ShapeOpts& so,
              const std::string& probe_str, const std::string& expect) {
  json result;
  ProbeVerdict verdict;
  const Params p = make_params(c, 2);
  const auto M = build_shape_2d(so, c);
  if (probe_str.rfind("plane:", 0) == 0) {
    // plane:axis,dir  e.g. plane:y,+
    const std::string rest = probe_str.substr(6);
    const char axis_c = rest.empty() ? 'y' : rest[0];
    const int dir = rest.find('-') != std::string::npos ? -1 : 1;
    Vec2 axis = axis_c == 'x' ? Vec2{1, 0} : Vec2{0, 1};
    const auto rep = slide_hyperplane<2>(M, axis, dir, p, make_spec(c));
    result["report"] = to_json(rep);
    verdict = rep.verdict;
  } else if (probe_str.rfind("ball:", 0) == 0) {
    const auto v = parse_list(probe_str.substr(5));
    if (v.size() < 2) throw ConfigError("ball probe needs radius,height");
    const auto rep =
        slide_ball<2>(M, v[0], v[1], {1, 0}, p, make_spec(c));
    result["report"] = to_json(rep);
    verdict = rep.verdict;
  } else {
    throw ConfigError("unknown probe: " + probe_str);
  }
  result["config"] = provenance(c, "command=probe shape=" + so.shape);
  write_text(c.out, result.dump(2) + "\n");
  if (expect == "critical" && verdict == ProbeVerdict::ViolatesCriticality)
    return kExitVerificationFailed;
  return kExitOk;
}

int run_flow(const CommonOpts& c, double d, const std::string& init,
             double h, double dt_safety, int max_steps, double stop_tol,
             double prephase_h, int prephase_steps,
             const std::string& out_prefix) {
  const Params p = make_params(c, 2);
  FlowConfig config;
  config.d = d;
  config.h_target = h;
  config.dt_safety = dt_safety;
  config.max_steps = max_steps;
  config.stop_tol = stop_tol;
  config.seed = c.seed;
  config.n_samples = c.n;
  config.r_near = c.r_near;
  config.R_far = c.R_far;

  FlowState state;
  if (init == "two-sheets")
    state = flow_initial_two_sheets(d, h);
  else if (init == "wall-chords")
    state = flow_initial_wall_chords(d, h);
  else if (init == "cone")
    state = flow_initial_cone(d, h);
  else
    throw ConfigError("unknown init: " + init);

  std::vector<FlowTraceRow> trace;
  if (prephase_h > 0 && prephase_steps > 0) {
    FlowConfig coarse = config;
    coarse.h_target = prephase_h;
    coarse.max_steps = prephase_steps;
    coarse.n_samples = std::max<int64_t>(1000, c.n / 10);
    FlowState coarse_init;
    if (init == "two-sheets")
      coarse_init = flow_initial_two_sheets(d, prephase_h);
    else if (init == "wall-chords")
      coarse_init = flow_initial_wall_chords(d, prephase_h);
    else
      coarse_init = flow_initial_cone(d, prephase_h);
    const FlowResult pre = flow_run(coarse_init, coarse, p);
    state = pre.final;
    trace = pre.trace;
  }

  const FlowResult res = flow_run(state, config, p);
  trace.insert(trace.end(), res.trace.begin(), res.trace.end());

  std::ostringstream csv;
  csv << provenance(c, "command=flow init=" + init) << "\r\n";
  csv << "step,time,sup_H,n_components,min_component_gap,min_wall_gap,"
         "per_s_estimate\r\n";
  csv << std::setprecision(12);
  for (const auto& row : trace)
    csv << row.step << ',' << row.time << ',' << row.sup_H << ','
        << row.n_components << ',' << row.min_component_gap << ','
        << row.min_wall_gap << ',' << row.per_s_estimate << "\r\n";

  std::ostringstream final_csv;
  final_csv << provenance(c, "command=flow final-state") << "\r\n";
  final_csv << "component,x,y\r\n";
  final_csv << std::setprecision(17);
  for (size_t ci = 0; ci < res.final.chains.size(); ++ci)
    for (const auto& v : res.final.chains[ci])
      final_csv << ci << ',' << v[0] << ',' << v[1] << "\r\n";

  const ConnectivityReport rep = connectivity_report(res.final, d);
  json summary;
  summary["verdict"] = to_string(res.verdict);
  summary["n_components"] = rep.n_components;
  summary["boundary_attachment"] = rep.boundary_attachment;
  summary["min_component_gap"] = rep.min_pair_distance;
  summary["sup_H"] = res.final.sup_H;
  summary["config"] = provenance(c, "command=flow init=" + init);
  const bool disconnected_regime =
      rep.n_components == 2 && rep.boundary_attachment.size() == 2 &&
      ((rep.boundary_attachment[0] == 1 && rep.boundary_attachment[1] == 2) ||
       (rep.boundary_attachment[0] == 2 && rep.boundary_attachment[1] == 1));
  summary["regime"] =
      disconnected_regime ? "disconnected-caps" : "side-arcs-or-other";

  if (out_prefix.empty()) {
    write_text(c.out, summary.dump(2) + "\n");
  } else {
    write_text(out_prefix + "_trace.csv", csv.str());
    write_text(out_prefix + "_final.csv", final_csv.str());
    write_text(out_prefix + "_summary.json", summary.dump(2) + "\n");
  }
  return kExitOk;
}

int run_limit_scan(const CommonOpts& c, const ShapeOpts& so,
                   const std::string& s_list_str) {
  const auto s_values = parse_list(s_list_str);
  const auto M = build_shape_2d(so, c);
  const auto omega = Domain<2>::ball({0, 0}, 3.0 * (1.0 + M.bbox.diameter()));
  Params base = make_params(c, 2);
  const auto scan = area_limit_scan<2>(M, omega, s_values, base, make_spec(c));
  std::ostringstream csv;
  csv << provenance(c, "command=limit-scan shape=" + so.shape) << "\r\n";
  csv << "s,per_s,std_error,trunc_bound,scaled\r\n";
  csv << std::setprecision(12);
  for (const auto& row : scan.rows)
    csv << row.s << ',' << row.per_s.value << ',' << row.per_s.std_error << ','
        << row.per_s.trunc_bound << ',' << row.scaled << "\r\n";
  csv << "# extrapolated=" << scan.extrapolated
      << " monotone=" << (scan.monotone ? 1 : 0) << "\r\n";
  write_text(c.out, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracmc: fractional area and fractional mean curvature toolkit"};
  app.require_subcommand(1);

  CommonOpts c;
  ShapeOpts so;

  // curvature
  auto* cmd_curv = app.add_subcommand(
      "curvature", "estimate H_{M,s}(z) at a surface point");
  std::string z_str = "0,0";
  bool flip_normal = false;
  std::string expect = "none";
  add_common(cmd_curv, c);
  add_shape(cmd_curv, so);
  cmd_curv->add_option("--z", z_str, "evaluation point (snapped to the surface)");
  cmd_curv->add_flag("--flip-normal", flip_normal, "negate the facet normal");
  cmd_curv->add_option("--expect", expect, "none|zero|positive|negative");

  // area
  auto* cmd_area = app.add_subcommand("area", "estimate Per_s(M; Omega)");
  std::string omega_str = "ball:3";
  std::string compare;
  bool expect_overlap = false;
  add_common(cmd_area, c);
  add_shape(cmd_area, so);
  cmd_area->add_option("--omega", omega_str, "ball:<R> or box:x0,y0,x1,y1");
  cmd_area->add_option("--compare-classical", compare,
                       "ball:<r>: also run the two-set P_s oracle");
  cmd_area->add_flag("--expect-overlap", expect_overlap,
                     "exit 2 unless the two intervals overlap");

  // cone-scan
  auto* cmd_cone = app.add_subcommand(
      "cone-scan", "sign of H on the tilted cones C_d");
  std::string d_list = "0.5,1,2";
  int points = 4;
  bool expect_signs = false;
  add_common(cmd_cone, c);
  cmd_cone->add_option("--d-list", d_list, "comma separated slopes");
  cmd_cone->add_option("--points", points, "sample points per cone");
  cmd_cone->add_flag("--expect-signs", expect_signs,
                     "exit 2 unless d=1 vanishes and d!=1 has one sign");

  // barrier-scan
  auto* cmd_barrier = app.add_subcommand(
      "barrier-scan", "curvature of the two-sheet barrier at the well apex");
  std::string eps_list = "1e-2,1e-3";
  add_common(cmd_barrier, c);
  add_shape(cmd_barrier, so);
  cmd_barrier->add_option("--eps-list", eps_list, "comma separated depths");

  // probe
  auto* cmd_probe = app.add_subcommand("probe", "sliding plane/ball probe");
  std::string probe_str = "plane:y,+";
  std::string probe_expect = "none";
  add_common(cmd_probe, c);
  add_shape(cmd_probe, so);
  cmd_probe->add_option("--probe", probe_str, "plane:<axis>,<dir> | ball:r,height");
  cmd_probe->add_option("--expect", probe_expect, "none|critical");

  // flow
  auto* cmd_flow = app.add_subcommand("flow", "planar normal-variation flow");
  double flow_d = 1.0, flow_h = 0.05, dt_safety = 0.5, stop_tol = 0.0;
  double prephase_h = 0.0;
  int max_steps = 200, prephase_steps = 0;
  std::string init = "two-sheets", out_prefix;
  add_common(cmd_flow, c);
  cmd_flow->add_option("--d", flow_d, "ring separation");
  cmd_flow->add_option("--init", init, "two-sheets|wall-chords|cone");
  cmd_flow->add_option("--h-target", flow_h, "target spacing");
  cmd_flow->add_option("--dt-safety", dt_safety, "dt = dt_safety h^{1+s}");
  cmd_flow->add_option("--max-steps", max_steps, "step budget");
  cmd_flow->add_option("--stop-tol", stop_tol, "stop when sup|H| below");
  cmd_flow->add_option("--prephase-h", prephase_h,
                       "optional coarse prephase spacing (0: off)");
  cmd_flow->add_option("--prephase-steps", prephase_steps,
                       "coarse prephase step budget");
  cmd_flow->add_option("--out-prefix", out_prefix,
                       "write <prefix>_trace.csv, _final.csv, _summary.json");

  // limit-scan
  auto* cmd_limit = app.add_subcommand(
      "limit-scan", "(1-s) Per_s table over an s grid");
  std::string s_list = "0.5,0.7,0.9";
  add_common(cmd_limit, c);
  add_shape(cmd_limit, so);
  cmd_limit->add_option("--s-list", s_list, "strictly increasing s grid");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    apply_config_file(sub, c.config_file);
    apply_json_override(sub, c.json_override);
    if (sub->count("--seed") == 0)
      throw ConfigError(
          "--seed is required (reproducibility: no wall-clock default)");
    if (c.threads > 0) set_thread_count(c.threads);
    if (sub == cmd_curv) return run_curvature(c, so, z_str, flip_normal, expect);
    if (sub == cmd_area) return run_area(c, so, omega_str, compare, expect_overlap);
    if (sub == cmd_cone) return run_cone_scan(c, d_list, points, expect_signs);
    if (sub == cmd_barrier) return run_barrier_scan(c, eps_list, so);
    if (sub == cmd_probe) return run_probe(c, so, probe_str, probe_expect);
    if (sub == cmd_flow)
      return run_flow(c, flow_d, init, flow_h, dt_safety, max_steps, stop_tol,
                      prephase_h, prephase_steps, out_prefix);
    if (sub == cmd_limit) return run_limit_scan(c, so, s_list);
    throw ConfigError("no subcommand");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
