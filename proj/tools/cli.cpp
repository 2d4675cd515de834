#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "en/acceptance.hpp"
#include "en/classify.hpp"
#include "en/discrete.hpp"
#include "en/errors.hpp"
#include "en/evolve.hpp"
#include "en/kernel2d.hpp"
#include "en/kernelnd.hpp"
#include "en/profile.hpp"

namespace en::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::string out_path;
  std::string format;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  long max_evaluations = 10'000'000;
  bool timing = false;

  [[nodiscard]] Tolerance tolerance() const { return {abs_tol, rel_tol, max_evaluations}; }
};

// Result of one command: either a JSON envelope or CSV text.
struct Output {
  std::string text;
  int code = kOk;
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string envelope(const std::string& command, json params, json result, double error,
                     long evaluations, const Common& common, const Stopwatch& clock) {
  json env;
  env["command"] = command;
  env["params"] = std::move(params);
  env["result"] = std::move(result);
  env["error_estimate"] = error;
  // Wall-clock time would make output depend on the machine; opt-in only.
  env["meta"] = {{"evaluations", evaluations},
                 {"seconds", common.timing ? clock.seconds() : 0.0}};
  return env.dump(2) + "\n";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int worker_count() {
  const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("EN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v >= 1) return std::min<long>(hw, v);
  }
  return hw;
}

bool csv_requested(const Common& c, bool csv_default) {
  if (c.format.empty()) return csv_default;
  return c.format == "csv";
}

json witness_json(const Witness& w) {
  return {{"x", w.x},
          {"y", w.y},
          {"value", w.value},
          {"error", w.abs_error_estimate},
          {"scaled_value", w.scaled_value},
          {"scaled_error", w.scaled_error},
          {"log_scale", w.log_scale}};
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  double a = 0.0, c = 0.0, d = 0.0;
  std::vector<double> x, y;
  std::string rep;
  bool crosscheck = false;
  double floor = 1e-8;
};

Output cmd_eval(const EvalArgs& o, const Common& common) {
  const Stopwatch clock;
  const DiagParams p(o.a, o.c, o.d);
  const Tolerance tol = common.tolerance();
  std::optional<Representation> forced;
  if (!o.rep.empty()) forced = representation_from_string(o.rep);

  struct Row {
    double x, y;
    KernelEval k;
  };
  std::vector<Row> rows;
  for (double y : o.y) {
    for (double x : o.x) {
      const KernelEval k =
          forced ? eval_with(*forced, p, x, y, tol) : eval(p, x, y, tol, o.crosscheck, o.floor);
      rows.push_back({x, y, k});
    }
  }

  if (csv_requested(common, false)) {
    std::string s = "x,y,value,rep,err\n";
    for (const Row& r : rows) {
      s += num(r.x) + "," + num(r.y) + "," + num(r.k.value) + "," +
           std::string(to_string(r.k.representation)) + "," + num(r.k.abs_error_estimate) + "\n";
    }
    return {s};
  }
  json result = json::array();
  double error = 0.0;
  long evaluations = 0;
  for (const Row& r : rows) {
    result.push_back({{"x", r.x},
                      {"y", r.y},
                      {"value", r.k.value},
                      {"representation", to_string(r.k.representation)}});
    error = std::max(error, r.k.abs_error_estimate);
    evaluations += r.k.evaluations;
  }
  if (result.size() == 1) result = result[0];
  const auto scalar_or_list = [](const std::vector<double>& v) {
    return v.size() == 1 ? json(v[0]) : json(v);
  };
  json params = {{"a", o.a}, {"c", o.c}, {"d", o.d}, {"x", scalar_or_list(o.x)},
                 {"y", scalar_or_list(o.y)},
                 {"rep", o.rep.empty() ? "auto" : o.rep}, {"crosscheck", o.crosscheck}};
  return {envelope("eval", params, result, error, evaluations, common, clock)};
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  double a = 0.0, c = 0.0, d = 0.0;
};

Output cmd_classify(const ClassifyArgs& o, const Common& common) {
  const Stopwatch clock;
  const DiagParams p(o.a, o.c, o.d);
  const SignClassification k = classify_diag(p, common.tolerance());
  json result = {{"verdict", to_string(k.verdict)},
                 {"threshold_margin", k.threshold_margin},
                 {"m", p.m()}};
  double error = 0.0;
  if (k.witness) {
    result["witness"] = witness_json(*k.witness);
    error = k.witness->abs_error_estimate;
  }
  return {envelope("classify", {{"a", o.a}, {"c", o.c}, {"d", o.d}}, result, error, 0, common,
                   clock)};
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  double m = 0.0;
  std::vector<double> window{10.0, 50.0, 0.0, 1.0};
  std::vector<long> res{200, 100};
};

Output cmd_scan(const ScanArgs& o, const Common& common) {
  const Stopwatch clock;
  const Window w{o.window[0], o.window[1], o.window[2], o.window[3]};
  const SignMap map = sign_map(o.m, w, o.res[0], o.res[1], common.tolerance(), worker_count());
  if (csv_requested(common, true)) {
    std::string s = "x,y,sign,value,err\n";
    for (Eigen::Index j = 0; j < map.ny; ++j) {
      for (Eigen::Index i = 0; i < map.nx; ++i) {
        const int sg = map.signs(j, i);
        s += num(map.xs[i]) + "," + num(map.ys[j]) + "," + (sg > 0 ? "+" : sg < 0 ? "-" : "0?") +
             "," + num(map.values(j, i)) + "," + num(map.errors(j, i)) + "\n";
      }
    }
    return {s};
  }
  const long negative = (map.signs.array() < 0).count();
  const long uncertain = (map.signs.array() == 0).count();
  json result = {{"nx", map.nx},
                 {"ny", map.ny},
                 {"negative", negative},
                 {"uncertain", uncertain},
                 {"positive", map.nx * map.ny - negative - uncertain}};
  return {envelope("scan", {{"m", o.m}, {"window", o.window}, {"res", o.res}}, result,
                   map.errors.maxCoeff(), map.evaluations, common, clock)};
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
  double alpha_max = 4.0;
  double step = 0.01;
  double layer_m = 0.0;
  double rho = 0.0;
  std::vector<double> layer_x{25.0, 100.0, 400.0};
};

Output cmd_profile(const ProfileArgs& o, const Common& common) {
  const Stopwatch clock;
  if (!(o.alpha_max > 0.0 && o.step > 0.0)) throw DomainError("profile: need alpha-max, step > 0");
  const Tolerance tol = common.tolerance();
  const auto count = static_cast<long>(std::floor(o.alpha_max / o.step + 1e-9));
  if (csv_requested(common, true)) {
    std::string s = "alpha,H,H_asym\n";
    for (long k = 0; k <= count; ++k) {
      const double alpha = o.step * static_cast<double>(k);
      s += num(alpha) + "," + num(h_value(alpha, tol)) + "," +
           (alpha > 0.0 ? num(h_asymptotic(alpha)) : std::string()) + "\n";
    }
    return {s};
  }
  json zeros = json::array();
  for (const ZeroBracket& z : h_zero_scan(o.alpha_max, o.step, tol)) {
    zeros.push_back({{"lo", z.lo}, {"hi", z.hi}, {"uncertain", z.uncertain}});
  }
  json result = {{"zeros", zeros}};
  json params = {{"alpha_max", o.alpha_max}, {"step", o.step}};
  if (o.layer_m > 0.0) {
    const LayerScale s = LayerScale::from_m(o.layer_m);
    const double limit = layer_limit(s, o.rho, tol);
    json table = json::array();
    for (double x : o.layer_x) {
      const double scaled = layer_scaled_kernel(s, o.rho, x, tol);
      table.push_back({{"x", x}, {"scaled_kernel", scaled}, {"error", std::abs(scaled - limit)}});
    }
    result["layer"] = {{"m", s.m}, {"rho", o.rho}, {"A_m", s.A_m}, {"L_m", s.L_m},
                       {"limit", limit}, {"table", table}};
    params["layer_m"] = o.layer_m;
    params["rho"] = o.rho;
  }
  return {envelope("profile", params, result, 0.0, 0, common, clock)};
}

// ---------------------------------------------------------------- nd

struct NdArgs {
  std::vector<double> alphas;
  double d = 0.0;
  std::vector<double> x;
  std::vector<int> face{1, 2};
  bool abel = false;
  std::vector<double> eps{1.0, 0.3, 0.1, 0.03};
};

Output cmd_nd(const NdArgs& o, const Common& common) {
  const Stopwatch clock;
  const ProductParams p(Eigen::Map<const Eigen::VectorXd>(o.alphas.data(),
                                                          static_cast<Eigen::Index>(o.alphas.size())),
                        o.d);
  const Tolerance tol = common.tolerance();
  json result = {{"n", p.n()}, {"A", p.A()}, {"mu", p.mu()},
                 {"verdict", to_string(classify_nd(p))}};
  double error = 0.0;
  long evaluations = 0;
  if (!o.x.empty()) {
    const NdEval k = kernel_nd_laplace(
        p, Eigen::Map<const Eigen::VectorXd>(o.x.data(), static_cast<Eigen::Index>(o.x.size())),
        tol);
    result["kernel"] = {{"x", o.x}, {"value", k.value}};
    error = k.abs_error_estimate;
    evaluations = k.evaluations;
  }
  if (!p.subcritical()) {
    const Eigen::Index i = o.face[0] - 1;
    const Eigen::Index j = o.face[1] - 1;
    const FaceWitness fw = face_negative_witness(p, i, j, tol);
    result["face"] = {{"i", o.face[0]},
                      {"j", o.face[1]},
                      {"reduced", {{"a", fw.face.reduced.a()},
                                   {"c", fw.face.reduced.c()},
                                   {"d", fw.face.reduced.d()}}},
                      {"prefactor", fw.face.prefactor},
                      {"witness", witness_json(fw.point)}};
    if (o.abel) {
      json rows = json::array();
      for (const AbelPoint& a : abel_face_check(p, i, j, fw.point.x, fw.point.y, o.eps, tol)) {
        rows.push_back({{"eps", a.eps},
                        {"value", a.value},
                        {"scaled_value", a.scaled_value},
                        {"scaled_error", a.scaled_error},
                        {"distance_to_face", std::abs(a.scaled_value - fw.point.scaled_value)}});
      }
      result["abel"] = rows;
    }
  }
  json params = {{"alphas", o.alphas}, {"d", o.d}, {"face", o.face}};
  if (!o.x.empty()) params["x"] = o.x;
  if (o.abel) params["eps"] = o.eps;
  return {envelope("nd", params, result, error, evaluations, common, clock)};
}

// ---------------------------------------------------------------- galerkin

struct GalerkinArgs {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double L = 12.0;
  double h = 0.05;
  std::string mask = "quadrant";
  double slope = 1.0;
  bool nonneg = false;
  long stride = 1;
};

Output cmd_galerkin(const GalerkinArgs& o, const Common& common) {
  const Stopwatch clock;
  Grid g{o.L, o.h, mask_from_string(o.mask), o.slope};
  const DiscreteForm form = o.b == 0.0 ? assemble(DiagParams(o.a, o.c, o.d), g)
                                       : assemble(NonDiagParams(o.a, o.b, o.c, o.d), g);
  const DiscreteSolution star = solve_riesz(form);
  std::optional<DiscreteSolution> plus;
  if (o.nonneg) plus = solve_nonnegative(form);

  if (csv_requested(common, false)) {
    std::ostringstream s;
    write_csv(s, plus ? *plus : star, o.stride);
    return {s.str()};
  }
  json result = {{"nodes", form.A.rows()},
                 {"E_star", star.energy},
                 {"residual", star.residual},
                 {"min_u", star.u.minCoeff()}};
  if (o.b == 0.0 && g.mask == Mask::quadrant) {
    result["continuum_energy"] = min_energy(DiagParams(o.a, o.c, o.d), common.tolerance());
  }
  if (plus) {
    const Eigen::ArrayXd negative = (-star.u.array()).max(0.0);
    const double bound = o.d * (form.mass_weight.array() * negative.square()).sum();
    const double gap = plus->energy - star.energy;
    result["E_plus"] = plus->energy;
    result["gap"] = gap;
    result["lower_bound"] = bound;
    result["gap_holds"] = gap >= bound * (1.0 - 1e-9);
    result["active_set_iterations"] = plus->iterations;
  }
  json params = {{"a", o.a}, {"b", o.b}, {"c", o.c}, {"d", o.d}, {"L", o.L},
                 {"h", o.h}, {"mask", o.mask}, {"nonneg", o.nonneg}};
  if (g.mask == Mask::cone) params["slope"] = o.slope;
  return {envelope("galerkin", params, result, star.residual, 0, common, clock)};
}

// ---------------------------------------------------------------- capacity

struct CapacityArgs {
  double a = 1.0, c = 1.0, d = 1.0;
  double slope = 1.0;
  int kmax = 8;
};

Output cmd_capacity(const CapacityArgs& o, const Common& common) {
  const Stopwatch clock;
  const DiagParams p(o.a, o.c, o.d);
  if (o.kmax < 1) throw DomainError("capacity: need kmax >= 1");
  std::string csv = "R,eps,energy\n";
  json rows = json::array();
  for (int k = 1; k <= o.kmax; ++k) {
    const double R = std::ldexp(1.0, -k);
    const double eps = R * std::exp(-k);
    const CutoffEnergy e = cone_cutoff_energy(p, o.slope, eps, R);
    csv += num(R) + "," + num(eps) + "," + num(e.total()) + "\n";
    rows.push_back({{"k", k}, {"R", R}, {"eps", eps}, {"gradient", e.gradient},
                    {"mass", e.mass}, {"energy", e.total()}});
  }
  if (csv_requested(common, true)) return {csv};
  json params = {{"a", o.a}, {"c", o.c}, {"d", o.d}, {"slope", o.slope}, {"kmax", o.kmax}};
  return {envelope("capacity", params, rows, 0.0, 0, common, clock)};
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
  double a = 0.0, c = 0.0, d = 0.0;
  double t = 1.0;
  double L = 20.0;
  long n = 1024;
  int steps = 1;
  std::string data = "gaussian";
  std::vector<double> orders{0.0, 1.0, 2.0};
};

std::function<double(double)> initial_data(const std::string& name) {
  if (name == "gaussian") return [](double x) { return std::exp(-0.5 * x * x); };
  if (name == "kink") return [](double x) { return std::exp(-std::abs(x)); };
  if (name == "sech") return [](double x) { return 1.0 / std::cosh(x); };
  throw DomainError("unknown initial data '" + name + "' (gaussian, kink, sech)");
}

Output cmd_evolve(const EvolveArgs& o, const Common& common) {
  const Stopwatch clock;
  const DiagParams p(o.a, o.c, o.d);
  if (o.steps < 1) throw DomainError("evolve: need steps >= 1");
  if (!(o.t > 0.0)) throw DomainError("evolve: need t > 0");
  const EvolutionState start = EvolutionState::sample(initial_data(o.data), o.L, o.n);
  EvolutionState state = start;
  for (int k = 0; k < o.steps; ++k) state = evolve_step(state, p, o.t / o.steps);

  if (csv_requested(common, true)) {
    std::ostringstream s;
    write_csv(s, state);
    return {s.str()};
  }
  const NoSmoothingReport rep = no_smoothing_check(start, p, o.t, o.orders);
  json norms = json::array();
  for (const SobolevBound& b : rep.norms) {
    norms.push_back({{"s", b.order}, {"initial", b.initial}, {"final", b.final},
                     {"lower", b.lower}, {"upper", b.upper}, {"holds", b.holds()}});
  }
  json result = {{"m_low", rep.bounds.m_low},
                 {"m_high", rep.bounds.m_high},
                 {"t", state.t},
                 {"norms", norms},
                 {"min_mode_ratio", rep.min_mode_ratio},
                 {"max_mode_ratio", rep.max_mode_ratio},
                 {"passed", rep.passed()}};
  json params = {{"a", o.a}, {"c", o.c}, {"d", o.d}, {"t", o.t}, {"L", o.L},
                 {"n", o.n}, {"steps", o.steps}, {"data", o.data}};
  return {envelope("evolve", params, result, 0.0, 0, common, clock)};
}

// ---------------------------------------------------------------- selftest

struct SelftestArgs {
  bool quick = false;
  std::vector<int> only;
  bool corrupt = false;
};

Output cmd_selftest(const SelftestArgs& o, const Common& common, std::ostream& err) {
  const Stopwatch clock;
  AcceptanceOptions opt;
  opt.quick = o.quick;
  opt.only = o.only;
  for (int id : opt.only) {
    if (id < 1 || id > kCriterionCount) throw DomainError("selftest: no criterion " + std::to_string(id));
  }
  if (o.corrupt) {
    opt.multiplier_factory = [](const DiagParams& p) -> Multiplier {
      const double shift = 0.5 * multiplier_bounds(p).m_low;
      return [lambda = decaying_multiplier(p), shift](double xi) { return lambda(xi) - shift; };
    };
  }
  const bool as_json = common.format == "json";
  const auto results = run_acceptance(opt, [&](const CriterionResult& r) {
    if (!as_json) err << (r.passed ? "pass " : "FAIL ") << r.id << "\n";
  });
  const bool all = std::all_of(results.begin(), results.end(),
                               [](const CriterionResult& r) { return r.passed; });
  std::string text;
  if (as_json) {
    json rows = json::array();
    for (const CriterionResult& r : results) {
      rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    }
    text = envelope("selftest", {{"quick", o.quick}, {"only", o.only}},
                    {{"passed", all}, {"criteria", rows}}, 0.0, 0, common, clock);
  } else {
    for (const CriterionResult& r : results) {
      char head[96];
      std::snprintf(head, sizeof head, "%s %2d  %-32s", r.passed ? "PASS" : "FAIL", r.id,
                    r.title.c_str());
      text += head;
      if (common.timing) text += " " + num(r.seconds) + "s";
      text += "  " + r.detail + "\n";
    }
    const std::string scope = o.only.empty() ? "criteria" : "selected criteria";
    text += all ? "all " + scope + " passed\n" : "some " + scope + " failed\n";
  }
  return {text, all ? kOk : kSelftestFailed};
}

// ---------------------------------------------------------------- plumbing

void write_output(const Output& result, const Common& common, std::ostream& out) {
  if (common.out_path.empty()) {
    out << result.text;
    return;
  }
  std::ofstream file(common.out_path, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + common.out_path + "'");
  file << result.text;
}

template <typename T>
CLI::Option* required(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option(name, target, help)->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimizer kernels of the corner-constrained quadratic energy", "en"};
  // Plain --help only: galerkin needs -h free for its grid step.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; [command] sections for command options");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common common;
  app.add_option("--out", common.out_path, "write data to this file instead of stdout");
  app.add_option("--format", common.format, "csv or json (default depends on the command)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--abs-tol", common.abs_tol, "absolute quadrature tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--rel-tol", common.rel_tol, "relative quadrature tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-evals", common.max_evaluations, "integrand evaluation budget")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timing", common.timing, "report wall-clock seconds");

  std::function<Output()> action;

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "kernel value(s) K_{a,c,d}(x,y) as JSON or CSV");
  required(eval_cmd, "--a", ev.a, "coefficient of u_x^2");
  required(eval_cmd, "--c", ev.c, "coefficient of u_y^2");
  required(eval_cmd, "--d", ev.d, "coefficient of u^2");
  required(eval_cmd, "--x", ev.x, "x coordinate(s)")->delimiter(',');
  required(eval_cmd, "--y", ev.y, "y coordinate(s)")->delimiter(',');
  auto* rep_opt = eval_cmd->add_option("--rep", ev.rep, "double|onedim|branchcut|laplace|axis|closed");
  eval_cmd->add_flag("--crosscheck", ev.crosscheck, "confirm with a second representation")
      ->excludes(rep_opt);
  eval_cmd->add_option("--crosscheck-floor", ev.floor, "absolute disagreement floor");
  eval_cmd->callback([&] { action = [&] { return cmd_eval(ev, common); }; });

  ClassifyArgs cl;
  auto* classify_cmd = app.add_subcommand("classify", "threshold verdict and negative witness");
  required(classify_cmd, "--a", cl.a, "coefficient of u_x^2");
  required(classify_cmd, "--c", cl.c, "coefficient of u_y^2");
  required(classify_cmd, "--d", cl.d, "coefficient of u^2");
  classify_cmd->callback([&] { action = [&] { return cmd_classify(cl, common); }; });

  ScanArgs sc;
  auto* scan_cmd = app.add_subcommand("scan", "sign map of K_m over a window");
  required(scan_cmd, "--m", sc.m, "normalised parameter m > 1");
  scan_cmd->add_option("--window", sc.window, "x0,x1,y0,y1")->delimiter(',')->expected(4);
  scan_cmd->add_option("--res", sc.res, "nx,ny")->delimiter(',')->expected(2);
  scan_cmd->callback([&] { action = [&] { return cmd_scan(sc, common); }; });

  ProfileArgs pr;
  auto* profile_cmd = app.add_subcommand("profile", "boundary-layer profile H and its zeros");
  profile_cmd->add_option("--alpha-max", pr.alpha_max, "largest alpha");
  profile_cmd->add_option("--step", pr.step, "alpha step");
  profile_cmd->add_option("--layer-m", pr.layer_m, "also tabulate the layer error for this m");
  profile_cmd->add_option("--rho", pr.rho, "layer coordinate rho");
  profile_cmd->add_option("--layer-x", pr.layer_x, "x values of the layer table")->delimiter(',');
  profile_cmd->callback([&] { action = [&] { return cmd_profile(pr, common); }; });

  NdArgs nd;
  auto* nd_cmd = app.add_subcommand("nd", "product-type family in n dimensions");
  required(nd_cmd, "--alphas", nd.alphas, "alpha_1,...,alpha_n")->delimiter(',');
  required(nd_cmd, "--d", nd.d, "zeroth-order coefficient");
  nd_cmd->add_option("--x", nd.x, "point for the positive kernel (d <= A)")->delimiter(',');
  nd_cmd->add_option("--face", nd.face, "face indices i,j (1-based)")->delimiter(',')->expected(2);
  nd_cmd->add_flag("--abel", nd.abel, "run the Abel-average check (n = 3)");
  nd_cmd->add_option("--eps", nd.eps, "Abel parameters")->delimiter(',');
  nd_cmd->callback([&] { action = [&] { return cmd_nd(nd, common); }; });

  GalerkinArgs ga;
  auto* galerkin_cmd = app.add_subcommand("galerkin", "finite-difference minimizer");
  required(galerkin_cmd, "--a", ga.a, "coefficient of u_x^2");
  galerkin_cmd->add_option("--b", ga.b, "cross coefficient (2b u_x u_y)");
  required(galerkin_cmd, "--c", ga.c, "coefficient of u_y^2");
  required(galerkin_cmd, "--d", ga.d, "coefficient of u^2");
  galerkin_cmd->add_option("--L", ga.L, "domain size");
  galerkin_cmd->add_option("--h", ga.h, "grid step");
  galerkin_cmd->add_option("--mask", ga.mask, "quadrant|halfplane|cone");
  galerkin_cmd->add_option("--slope", ga.slope, "cone slope");
  galerkin_cmd->add_flag("--nonneg", ga.nonneg, "also solve with u >= 0 (variance gap)");
  galerkin_cmd->add_option("--stride", ga.stride, "CSV node stride");
  galerkin_cmd->callback([&] { action = [&] { return cmd_galerkin(ga, common); }; });

  CapacityArgs ca;
  auto* capacity_cmd = app.add_subcommand("capacity", "log-cutoff energies on a cone");
  capacity_cmd->add_option("--a", ca.a, "coefficient of u_x^2");
  capacity_cmd->add_option("--c", ca.c, "coefficient of u_y^2");
  capacity_cmd->add_option("--d", ca.d, "coefficient of u^2");
  capacity_cmd->add_option("--slope", ca.slope, "cone slope M");
  capacity_cmd->add_option("--kmax", ca.kmax, "schedule length");
  capacity_cmd->callback([&] { action = [&] { return cmd_capacity(ca, common); }; });

  EvolveArgs evo;
  auto* evolve_cmd = app.add_subcommand("evolve", "decaying-branch evolution");
  required(evolve_cmd, "--a", evo.a, "coefficient of u_x^2");
  required(evolve_cmd, "--c", evo.c, "coefficient of u_y^2");
  required(evolve_cmd, "--d", evo.d, "coefficient of u^2");
  evolve_cmd->add_option("--t", evo.t, "final time");
  evolve_cmd->add_option("--L", evo.L, "half-width of the periodic box");
  evolve_cmd->add_option("--n", evo.n, "sample count (power of two)");
  evolve_cmd->add_option("--steps", evo.steps, "number of equal time steps");
  evolve_cmd->add_option("--data", evo.data, "gaussian|kink|sech");
  evolve_cmd->add_option("--orders", evo.orders, "Sobolev orders for the report")->delimiter(',');
  evolve_cmd->callback([&] { action = [&] { return cmd_evolve(evo, common); }; });

  SelftestArgs st;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest_cmd->add_flag("--quick", st.quick, "skip x = 400 and grid refinement");
  selftest_cmd->add_option("--only", st.only, "criterion numbers")->delimiter(',');
  selftest_cmd->add_flag("--corrupt-multiplier", st.corrupt)->group("");
  selftest_cmd->callback([&] { action = [&] { return cmd_selftest(st, common, err); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  try {
    const Output result = action();
    write_output(result, common, out);
    return result.code;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConsistencyError& e) {
    err << "consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (const TailBoundUnavailable& e) {
    err << "consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (const NonFiniteIntegrand& e) {
    err << "consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (const std::exception& e) {
    // Budget exhaustion, failed witness searches and solver failures.
    err << "budget error: " << e.what() << "\n";
    return kBudget;
  }
}

}  // namespace en::cli
