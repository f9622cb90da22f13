#include "conefp/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "conefp/io.hpp"

namespace conefp {

namespace {

std::string point_text(const Element& e) {
  if (e.is_orthant()) return dump_json(point_to_json(e), 0);
  std::string s;
  const bool complex = !e.is_real();
  for (Index i = 0; i < e.dim(); ++i) {
    s += "\n  [";
    for (Index j = 0; j < e.dim(); ++j) {
      if (j) s += ", ";
      s += format_double(e.mat()(i, j).real());
      if (complex) s += (e.mat()(i, j).imag() < 0 ? " - " : " + ") + format_double(std::abs(e.mat()(i, j).imag())) + "i";
    }
    s += "]";
  }
  return s;
}

std::string witness_text(const std::optional<int>& k) { return k ? std::to_string(*k) : "none"; }

void print_certificate_text(std::ostream& out, const Certificate& cert) {
  out << "certificate: " << to_string(cert.kind) << "\n";
  out << "delta: " << format_double(cert.delta) << "\n";
  if (cert.kind == Certificate::Kind::SubSuperPair) {
    out << "x: " << point_text(*cert.x) << "\n";
    out << "margin_x: " << format_double(cert.margin_x) << "\n";
    out << "y: " << point_text(*cert.y) << "\n";
    out << "margin_y: " << format_double(cert.margin_y) << "\n";
  } else {
    out << "upper_cw: " << format_double(cert.upper_cw) << "\n";
    out << "lower_cw: " << format_double(cert.lower_cw) << "\n";
    out << "k_witness: " << witness_text(cert.k_witness) << "\n";
    out << "l_witness: " << witness_text(cert.l_witness) << "\n";
  }
}

Element start_point(const Problem& problem, const std::string& source) {
  if (source.empty()) return Element::unit(problem.cone);
  if (source == "ones") {
    if (problem.cone.kind != ConeKind::Orthant) throw ParseError("--x0: \"ones\" requires the orthant cone");
    return Element::unit(problem.cone);
  }
  if (source == "identity") {
    if (problem.cone.kind != ConeKind::PositiveDefinite) {
      throw ParseError("--x0: \"identity\" requires the pd cone");
    }
    return Element::unit(problem.cone);
  }
  Element x = parse_point(load_json_file(source), source);
  if (!(x.cone() == problem.cone)) {
    throw ParseError("--x0: point lives in " + x.cone().describe() + ", problem is on " + problem.cone.describe());
  }
  return x;
}

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return kExitOk;
    case SolveStatus::MaxIterations:
      return kExitMaxIterations;
    case SolveStatus::BoundaryEscape:
      return kExitBoundaryEscape;
  }
  return kExitInputError;
}

struct SolveArgs {
  std::string path;
  std::optional<double> alpha;
  std::optional<double> tol;
  std::optional<long> max_iter;
  std::string x0;
  std::string output = "text";
  std::string trace_path;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  Problem problem = load_problem(args.path);
  IterationConfig cfg = problem.solver;
  if (args.alpha) cfg.alpha = *args.alpha;
  if (args.tol) cfg.tol = *args.tol;
  if (args.max_iter) cfg.max_iter = *args.max_iter;
  cfg.record_trace = !args.trace_path.empty();
  cfg.validate();
  const Element x0 = start_point(problem, args.x0);

  SolveReport rep;
  if (const RiccatiProblem* ric = problem.riccati()) {
    RiccatiSolveOptions opts;
    opts.iteration = cfg;
    opts.k_max = problem.certify.k_max;
    opts.delta = problem.certify.delta;
    opts.start = x0;
    rep = riccati_certified_solve(*ric, opts);
  } else {
    rep = krasnoselskii_solve(problem.model(), ConePoint(x0), cfg);
  }

  if (!args.trace_path.empty()) {
    std::ofstream trace(args.trace_path);
    if (!trace) throw ParseError(args.trace_path + ": cannot open trace file for writing");
    for (std::size_t i = 0; i < rep.trace.size(); ++i) trace << i << " " << format_double(rep.trace[i]) << "\n";
  }

  if (args.output == "json") {
    Json j = Json::object();
    j["command"] = "solve";
    j["map"] = problem.map_type();
    Json body = solve_report_to_json(rep);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    out << dump_json(j) << "\n";
  } else {
    out << "status: " << to_string(rep.status) << "\n";
    out << "iterations: " << rep.iterations << "\n";
    out << "residual: " << format_double(rep.residual) << "\n";
    out << "point: " << point_text(rep.point) << "\n";
    if (rep.certificate) print_certificate_text(out, *rep.certificate);
  }
  return exit_code(rep.status);
}

struct CertifyArgs {
  std::string path;
  std::optional<double> delta;
  std::optional<int> k_max;
  std::string output = "text";
};

int cmd_certify(const CertifyArgs& args, std::ostream& out) {
  Problem problem = load_problem(args.path);
  CertifyOptions opts = problem.certify;
  if (args.delta) opts.delta = *args.delta;
  if (args.k_max) opts.k_max = *args.k_max;
  if (!(opts.delta > 0.0 && opts.delta < 1.0)) throw ParseError("--delta: must lie in (0,1)");
  if (opts.k_max <= 0) throw ParseError("--k-max: must be positive");

  const Certificate cert = certify_bounded_fixed_set(problem.model(), Element::unit(problem.cone), opts);
  if (args.output == "json") {
    Json j = Json::object();
    j["command"] = "certify";
    j["map"] = problem.map_type();
    j["certificate"] = certificate_to_json(cert);
    out << dump_json(j) << "\n";
  } else {
    print_certificate_text(out, cert);
  }
  return cert.kind == Certificate::Kind::Indeterminate ? kExitIndeterminate : kExitOk;
}

struct CwArgs {
  std::string path;
  std::optional<int> k_max;
  std::string output = "text";
};

Json cw_table_json(const UpperCwEstimate& est) {
  Json rows = Json::array();
  for (const CwStep& s : est.steps) {
    Json row = Json::object();
    row["k"] = s.k;
    row["root_bound"] = number_to_json(s.root_bound);
    row["ratio_bound"] = number_to_json(s.ratio_bound);
    row["running_min"] = number_to_json(s.running_min);
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_cw_table(std::ostream& out, const UpperCwEstimate& est) {
  out << "k root_bound ratio_bound running_min\n";
  for (const CwStep& s : est.steps) {
    out << s.k << " " << format_double(s.root_bound) << " " << format_double(s.ratio_bound) << " "
        << format_double(s.running_min) << "\n";
  }
}

int cmd_cw(const CwArgs& args, std::ostream& out) {
  Problem problem = load_problem(args.path);
  const int k_max = args.k_max.value_or(problem.certify.k_max);
  if (k_max <= 0) throw ParseError("--k-max: must be positive");
  const MapModel f = problem.model();
  const Element u = Element::unit(problem.cone);

  const MapModel f_inf = recession_model(f);
  const MapModel g_inf = conjugate_recession_model(f);
  const UpperCwEstimate upper = upper_cw_estimate(f_inf, u, k_max);
  const UpperCwEstimate conj = upper_cw_estimate(g_inf, u, k_max);
  const ContractionTest kt = strict_contraction_test(f_inf, u, k_max, problem.certify.delta);
  const ContractionTest lt = strict_contraction_test(g_inf, u, k_max, problem.certify.delta);
  LowerCwOptions lopts;
  lopts.k_max = k_max;
  const LowerCwEstimate lower = lower_cw_estimate(f, u, lopts);

  if (args.output == "json") {
    Json j = Json::object();
    j["command"] = "cw";
    j["map"] = problem.map_type();
    Json up = Json::object();
    up["bound"] = number_to_json(upper.bound);
    up["at_k_max"] = number_to_json(upper.at_k_max);
    up["k_witness"] = kt.proven_at ? Json(*kt.proven_at) : Json(nullptr);
    up["table"] = cw_table_json(upper);
    Json lo = Json::object();
    lo["value"] = number_to_json(lower.value);
    lo["conjugate_upper"] = number_to_json(lower.conjugate_upper);
    lo["l_witness"] = lt.proven_at ? Json(*lt.proven_at) : Json(nullptr);
    lo["table"] = cw_table_json(conj);
    j["upper_cw"] = std::move(up);
    j["lower_cw"] = std::move(lo);
    out << dump_json(j) << "\n";
  } else {
    out << "upper_cw: " << format_double(upper.bound) << "\n";
    out << "upper_cw_at_k_max: " << format_double(upper.at_k_max) << "\n";
    out << "k_witness: " << witness_text(kt.proven_at) << "\n";
    out << "lower_cw: " << format_double(lower.value) << "\n";
    out << "l_witness: " << witness_text(lt.proven_at) << "\n";
    out << "# perturbed power iteration on the recession map\n";
    print_cw_table(out, upper);
    out << "# perturbed power iteration on the conjugate recession map\n";
    print_cw_table(out, conj);
  }
  return kExitOk;
}

struct MetricArgs {
  std::string path;
  std::string x;
  std::string y;
  std::string output = "text";
};

int cmd_metric(const MetricArgs& args, std::ostream& out) {
  Json xj;
  Json yj;
  if (!args.path.empty()) {
    const Json doc = load_json_file(args.path);
    if (!doc.is_object() || !doc.contains("x") || !doc.contains("y")) {
      throw ParseError(args.path + ": expected an object with fields \"x\" and \"y\"");
    }
    xj = doc["x"];
    yj = doc["y"];
  }
  try {
    if (!args.x.empty()) xj = Json::parse(args.x);
    if (!args.y.empty()) yj = Json::parse(args.y);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("--x/--y: ") + e.what());
  }
  if (xj.is_null() || yj.is_null()) throw ParseError("metric: both points x and y are required");

  const ConePoint x(parse_point(xj, "x"));
  const ConePoint y(parse_point(yj, "y"));
  if (!(x.cone() == y.cone())) throw ParseError("metric: x and y live in different cones");
  const double d = thompson_distance(x, y);
  const auto [lo, hi] = ratio_bounds(x, y);
  const DualWitness w = witness_functional(x, y);

  if (args.output == "json") {
    Json j = Json::object();
    j["command"] = "metric";
    j["thompson_distance"] = number_to_json(d);
    j["max_ratio"] = number_to_json(hi);
    j["min_ratio"] = number_to_json(lo);
    Json wj = Json::object();
    if (w.kind == DualWitness::Kind::CoordinateIndex) {
      wj["kind"] = "coordinate";
      wj["index"] = w.index;
    } else {
      wj["kind"] = "rank_one_projector";
      Json re = Json::array();
      Json im = Json::array();
      for (Index i = 0; i < w.direction.size(); ++i) {
        re.push_back(number_to_json(w.direction(i).real()));
        im.push_back(number_to_json(w.direction(i).imag()));
      }
      wj["direction"] = Json::object({{"re", re}, {"im", im}});
    }
    wj["value"] = number_to_json(w.value);
    j["witness"] = std::move(wj);
    out << dump_json(j) << "\n";
  } else {
    out << "thompson_distance: " << format_double(d) << "\n";
    out << "M(x/y): " << format_double(hi) << "\n";
    out << "m(x/y): " << format_double(lo) << "\n";
    if (w.kind == DualWitness::Kind::CoordinateIndex) {
      out << "witness: coordinate " << w.index << " value " << format_double(w.value) << "\n";
    } else {
      out << "witness: rank_one_projector [";
      for (Index i = 0; i < w.direction.size(); ++i) {
        if (i) out << ", ";
        out << format_double(w.direction(i).real());
        if (w.direction(i).imag() != 0.0) out << (w.direction(i).imag() < 0 ? "-" : "+") << format_double(std::abs(w.direction(i).imag())) << "i";
      }
      out << "] value " << format_double(w.value) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed points, Collatz-Wielandt certificates and Thompson-metric geometry on cones"};
  app.name("conefp");
  app.require_subcommand(1);
  const auto output_check = CLI::IsMember({"text", "json"});

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Krasnoselskii fixed-point solve of a problem file");
  solve->add_option("problem", solve_args.path, "Problem file (JSON)")->required();
  solve->add_option("--alpha", solve_args.alpha, "Relaxation weight in (0,1)");
  solve->add_option("--tol", solve_args.tol, "Thompson residual tolerance");
  solve->add_option("--max-iter", solve_args.max_iter, "Iteration budget");
  solve->add_option("--x0", solve_args.x0, "Start point: ones, identity, or a point file");
  solve->add_option("--output", solve_args.output, "text or json")->check(output_check);
  solve->add_option("--trace", solve_args.trace_path, "Write 'iteration residual' lines to this file");

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand("certify", "Search for a bounded-fixed-set certificate");
  certify->add_option("problem", certify_args.path, "Problem file (JSON)")->required();
  certify->add_option("--delta", certify_args.delta, "Strictness margin");
  certify->add_option("--k-max", certify_args.k_max, "Power-iteration budget for CW witnesses");
  certify->add_option("--output", certify_args.output, "text or json")->check(output_check);

  CwArgs cw_args;
  auto* cw = app.add_subcommand("cw", "Upper and lower Collatz-Wielandt estimates with per-k table");
  cw->add_option("problem", cw_args.path, "Problem file (JSON)")->required();
  cw->add_option("--k-max", cw_args.k_max, "Power-iteration steps");
  cw->add_option("--output", cw_args.output, "text or json")->check(output_check);

  MetricArgs metric_args;
  auto* metric = app.add_subcommand("metric", "Thompson distance between two interior points");
  metric->add_option("points", metric_args.path, "JSON file with fields x and y");
  metric->add_option("--x", metric_args.x, "Inline JSON point");
  metric->add_option("--y", metric_args.y, "Inline JSON point");
  metric->add_option("--output", metric_args.output, "text or json")->check(output_check);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*solve) return cmd_solve(solve_args, out);
    if (*certify) return cmd_certify(certify_args, out);
    if (*cw) return cmd_cw(cw_args, out);
    if (*metric) return cmd_metric(metric_args, out);
  } catch (const std::exception& e) {
    err << "conefp: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace conefp
