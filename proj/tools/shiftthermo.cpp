#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shiftthermo/config.hpp"
#include "shiftthermo/conformal.hpp"
#include "shiftthermo/dissipativity.hpp"
#include "shiftthermo/exp_family.hpp"
#include "shiftthermo/io.hpp"
#include "shiftthermo/kms.hpp"
#include "shiftthermo/oracle.hpp"

using namespace shiftthermo;
using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) {
  if (std::isfinite(v)) return v;
  return io::format_double(v);
}

ojson pressure_json(const PressureEstimate& p) {
  return ojson{{"method", std::string(to_string(p.method))},
               {"p_lo", num(p.lo)},
               {"p_est", num(p.point)},
               {"p_hi", num(p.hi)},
               {"N", p.N}};
}

ojson residual_json(const GraphModel& g, const ResidualReport& r) {
  return ojson{{"max_relative", num(r.max_relative)},
               {"mean_relative", num(r.mean_relative)},
               {"checked", r.checked},
               {"worst", r.worst ? ojson(io::format_path(g, *r.worst)) : ojson(nullptr)},
               {"additivity_max", num(r.additivity_max)},
               {"additivity_checked", r.additivity_checked}};
}

struct Inputs {
  std::string graph_path;
  std::string potential_path;

  GraphModel graph() const { return io::parse_graph(io::read_file(graph_path)); }
  Potential potential(const GraphModel& g) const { return io::parse_potential(io::read_file(potential_path), g); }
};

void add_inputs(CLI::App* sub, Inputs& in, bool potential = true) {
  sub->add_option("--graph", in.graph_path, "graph spec (JSON)")->required()->check(CLI::ExistingFile);
  if (potential) {
    sub->add_option("--potential", in.potential_path, "potential spec (JSON)")->required()->check(CLI::ExistingFile);
  }
}

// Default point for diagnostics: the shortest cycle through the first non-wandering vertex.
BasePoint default_point(const GraphModel& g) {
  const auto rep = nonwandering(g);
  if (rep.vertices.empty()) throw Error(ErrorCode::InvalidInput, "no non-wandering vertex; pass --point");
  const VertexId v = rep.vertices.front();
  const auto cycle = find_cycle_through(g, v, 64);
  if (!cycle) throw Error(ErrorCode::InvalidInput, "no short cycle found; pass --point");
  return BasePoint::periodic(g, FinitePath::vertex(v), FinitePath::from_edges(g, *cycle));
}

}  // namespace

int main(int argc, char** argv) {
  Defaults d = kDefaults;
  CLI::App app{"Thermodynamic formalism on countable Markov shifts: pressure, conformal measures, KMS regions"};
  app.set_version_flag("--version", fingerprint(kDefaults));
  int threads = 0;
  std::string out_path;
  app.add_option("--threads", threads, "worker threads (0: OpenMP default)")->envname("SHIFTTHERMO_THREADS");
  app.add_option("--out", out_path, "write the result here instead of stdout");
  app.require_subcommand(1);

  Inputs in;
  double beta = 1.0;
  std::string cylinder, point, f_cyl = "[0]", h_cyl = "[0]", method = "auto", measure_path, report_path;
  std::vector<std::string> points;
  std::vector<double> betas;
  double beta_min = 0.0, beta_max = 2.0, t_value = 0.0, lambda = 0.2, certify = std::nan("");
  int steps = 0, levels = 4;
  std::size_t verify_depth = 0;

  auto add_N = [&](CLI::App* s) { s->add_option("--N", d.N, "pressure horizon")->envname("SHIFTTHERMO_N"); };

  auto* analyze = app.add_subcommand("analyze-graph", "non-wandering set, cofinality, H-filtration");
  add_inputs(analyze, in, false);
  analyze->add_option("--potential", in.potential_path, "optional potential spec")->check(CLI::ExistingFile);
  analyze->add_option("--levels", levels, "H-filtration levels");

  auto* pressure_cmd = app.add_subcommand("pressure", "pressure of -beta phi");
  add_inputs(pressure_cmd, in);
  pressure_cmd->add_option("--beta", beta);
  add_N(pressure_cmd);
  pressure_cmd->add_option("--method", method, "auto | gurevich | pointwise")
      ->check(CLI::IsMember({"auto", "gurevich", "pointwise"}));
  pressure_cmd->add_option("--cylinder", cylinder, "Gurevich reference cylinder, e.g. \"[0]\"");
  pressure_cmd->add_option("--point", point, "pointwise base point, e.g. \"[0] | d_0\"");
  pressure_cmd->add_option("--f", f_cyl, "pointwise test cylinder");

  auto* curve = app.add_subcommand("pressure-curve", "beta -> P(-beta phi) with the Lipschitz sandwich check");
  add_inputs(curve, in);
  add_N(curve);
  curve->add_option("--betas", betas, "comma-separated grid")->delimiter(',');
  curve->add_option("--beta-min", beta_min);
  curve->add_option("--beta-max", beta_max);
  curve->add_option("--steps", steps, "uniform grid of steps+1 points when --betas is absent");

  auto* construct = app.add_subcommand("construct", "a (beta phi)-conformal measure on cylinders");
  add_inputs(construct, in);
  construct->add_option("--beta", beta);
  add_N(construct);
  construct->add_option("--depth", d.depth, "cylinder depth D")->envname("SHIFTTHERMO_DEPTH");
  construct->add_option("--radius", d.radius, "explored region")->envname("SHIFTTHERMO_RADIUS");
  construct->add_option("--eps", d.eps, "epsilon schedule")->delimiter(',')->envname("SHIFTTHERMO_EPS");
  construct->add_option("--tau", d.tau, "zero-pressure tolerance (core route)")->envname("SHIFTTHERMO_TAU");
  construct->add_option("--method", method, "auto | fixed | limit | core | eigen")
      ->check(CLI::IsMember({"auto", "fixed", "limit", "core", "eigen"}));
  construct->add_option("--t", t_value, "eigenvalue exponent for --method eigen");
  construct->add_option("--h-cylinder", h_cyl, "normalizing cylinder h = 1_[mu]");
  construct->add_option("--report", report_path, "JSON run report");

  auto* verify_cmd = app.add_subcommand("verify", "conformality residuals of a measure TSV");
  add_inputs(verify_cmd, in);
  verify_cmd->add_option("--beta", beta);
  verify_cmd->add_option("--measure", measure_path)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--depth", verify_depth, "0: the measure's depth");

  auto* diss = app.add_subcommand("dissipativity", "dissipativity certificate and resolvent diagnostics");
  add_inputs(diss, in);
  diss->add_option("--beta", beta);
  add_N(diss);
  diss->add_option("--f", f_cyl, "test cylinder");
  diss->add_option("--point", points, "base points (repeatable)");

  auto* kms = app.add_subcommand("kms-region", "inverse temperatures with gauge-invariant KMS weights");
  add_inputs(kms, in);
  add_N(kms);
  kms->add_option("--tol", d.tol, "bisection width")->envname("SHIFTTHERMO_TOL");
  kms->add_option("--certify", certify, "also construct the conformal measure at this beta");
  kms->add_option("--depth", d.depth)->envname("SHIFTTHERMO_DEPTH");
  kms->add_option("--radius", d.radius)->envname("SHIFTTHERMO_RADIUS");

  auto* expc = app.add_subcommand("exp-pressure", "pressure of -beta log|z| for lambda e^z");
  expc->add_option("--lambda", lambda);
  expc->add_option("--beta", betas, "comma-separated")->delimiter(',')->required();
  expc->add_option("--nmax", d.exp_nmax)->envname("SHIFTTHERMO_EXP_NMAX");
  expc->add_option("--branches", d.exp_branches)->envname("SHIFTTHERMO_EXP_BRANCHES");
  expc->add_option("--beam", d.exp_beam)->envname("SHIFTTHERMO_EXP_BEAM");

  auto* oracle_cmd = app.add_subcommand("oracle", "reference values from brute-force computations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  set_thread_count(threads);

  std::ostringstream out;
  try {
    if (analyze->parsed()) {
      const auto g = in.graph();
      ojson doc;
      doc["kind"] = std::string(to_string(g.kind()));
      doc["finite"] = g.is_finite();
      const auto rep = nonwandering(g);
      ojson nw{{"case", std::string(to_string(rep.case_tag))}, {"vertices", rep.vertices}, {"period", rep.period}};
      ojson cert = ojson::array();
      for (const auto& c : rep.certificate) cert.push_back(io::format_path(g, FinitePath::from_edges(g, c)));
      nw["certificate"] = cert;
      doc["nonwandering"] = nw;
      const auto cof = is_cofinal(g);
      doc["cofinal"] = cof ? ojson(*cof) : ojson("UNDECIDED");
      try {
        doc["h_filtration"] = h_filtration(g, levels).levels;
      } catch (const Error& e) {
        doc["h_filtration"] = std::string(to_string(e.code()));
      }
      doc["max_out_degree"] = g.max_out_degree();
      if (!in.potential_path.empty()) {
        const auto phi = in.potential(g);
        const auto [a, b] = phi.bounds(g);
        ojson var = ojson::array();
        for (std::size_t j = 1; j <= phi.depth(); ++j) var.push_back(num(variation(phi, g, j)));
        const auto bowen = bowen_check(phi, g);
        doc["potential"] = ojson{{"depth", phi.depth()},
                                 {"bounds", {num(a), num(b)}},
                                 {"variations", var},
                                 {"bowen", {{"holds", bowen.holds}, {"constant", num(bowen.constant)}}}};
      }
      out << doc.dump(2) << '\n';
    } else if (pressure_cmd->parsed()) {
      const auto g = in.graph();
      const auto psi = in.potential(g).scaled(-beta);
      PressureEstimate p;
      if (method == "pointwise" || (method == "auto" && !point.empty())) {
        const auto x = point.empty() ? default_point(g) : io::parse_point(g, point);
        p = pointwise(psi, g, x, CylinderFunction::indicator(io::parse_path(g, f_cyl)), d.N);
      } else if (method == "gurevich" || !cylinder.empty()) {
        p = gurevich(psi, g, io::parse_path(g, cylinder.empty() ? "[0]" : cylinder), d.N);
      } else {
        p = global_pressure(psi, g, d.N);
      }
      io::write_pressure_header(out);
      io::write_pressure_row(out, beta, p);
    } else if (curve->parsed()) {
      const auto g = in.graph();
      const auto phi = in.potential(g);
      if (betas.empty()) {
        if (steps < 1) throw Error(ErrorCode::InvalidInput, "give --betas or --steps >= 1");
        for (int i = 0; i <= steps; ++i) betas.push_back(beta_min + (beta_max - beta_min) * i / steps);
      }
      const auto c = pressure_of_beta(phi, g, betas, d.N);
      io::write_pressure_header(out);
      for (const auto& s : c.samples) io::write_pressure_row(out, s.beta, s.p);
      out << "# bounds\t" << io::format_double(c.a) << '\t' << io::format_double(c.b) << '\n';
      out << "# sandwich\t" << (c.sandwich_holds ? "holds" : "violated") << '\t'
          << io::format_double(c.worst_sandwich_excess) << '\n';
    } else if (construct->parsed()) {
      const auto g = in.graph();
      const auto phi = in.potential(g);
      ConstructOptions opt;
      opt.N = d.N;
      opt.depth = d.depth;
      opt.region_radius = d.radius;
      opt.eps_schedule = d.eps;
      opt.stability_tol = d.stability_tol;
      opt.series.rel_tol = d.series_rel_tol;
      opt.series.max_terms = d.series_max_terms;
      const auto h = CylinderFunction::indicator(io::parse_path(g, h_cyl));
      std::string route = method;
      if (route == "auto") {
        const bool core = g.kind() == GraphKind::CoreWithInwardRays &&
                          nonwandering(g).case_tag == NwCase::FiniteNonEmpty;
        route = core ? "core" : "limit";
      }
      ConformalResult r;
      if (route == "fixed") {
        const std::size_t count = static_cast<std::size_t>(opt.region_radius) + opt.depth + 8;
        r = construct_fixed(phi.scaled(-beta), g, h, diverging_sequence(g, h, count), opt);
        r.beta = beta;
        r.residuals = verify(r.measure, phi, beta, g);
      } else if (route == "limit") {
        r = construct_limit(phi, beta, g, h, opt);
      } else if (route == "core") {
        r = extend_from_core(g, phi, beta, opt.region_radius, opt.depth, d.tau);
      } else {
        r = eigenmeasure(phi, t_value, g, h, opt);
      }
      io::write_measure_tsv(out, g, r.measure);
      if (!report_path.empty()) {
        ojson eps = ojson::array();
        for (double e : r.eps_schedule) eps.push_back(num(e));
        ojson rep{{"command", "construct"},
                  {"fingerprint", fingerprint(d)},
                  {"parameters",
                   {{"beta", num(beta)}, {"N", d.N}, {"depth", d.depth}, {"radius", d.radius}, {"route", route}}},
                  {"method", r.method},
                  {"eps_schedule", eps},
                  {"normalization", num(r.normalization)},
                  {"series_terms", r.series_terms},
                  {"max_ratio_spread", num(r.max_ratio_spread)},
                  {"max_tail_relative", num(r.max_tail_relative)},
                  {"max_extrapolation_spread", num(r.max_extrapolation_spread)},
                  {"pressure", r.pressure ? pressure_json(*r.pressure) : ojson(nullptr)},
                  {"log_radius", num(r.log_radius)},
                  {"residuals", residual_json(g, r.residuals)}};
        std::ofstream rf(report_path, std::ios::binary);
        if (!rf) throw Error(ErrorCode::InvalidInput, "cannot write " + report_path);
        rf << rep.dump(2) << '\n';
      }
    } else if (verify_cmd->parsed()) {
      const auto g = in.graph();
      const auto phi = in.potential(g);
      const auto m = io::read_measure_tsv(io::read_file(measure_path), g);
      const auto r = verify(m, phi, beta, g, verify_depth);
      ojson doc{{"command", "verify"}, {"beta", num(beta)}, {"residuals", residual_json(g, r)}};
      out << doc.dump(2) << '\n';
    } else if (diss->parsed()) {
      const auto g = in.graph();
      const auto phi = in.potential(g);
      std::vector<BasePoint> xs;
      for (const auto& s : points) xs.push_back(io::parse_point(g, s));
      if (xs.empty()) xs.push_back(default_point(g));
      const auto f = CylinderFunction::indicator(io::parse_path(g, f_cyl));
      const auto rep = dissipativity_test(phi, beta, g, f, xs, d.N);
      ojson samples = ojson::array();
      for (const auto& s : rep.samples) {
        ojson sums = ojson::array();
        for (double v : s.log_partial_sums) sums.push_back(num(v));
        samples.push_back(ojson{{"point", io::format_point(g, s.point)},
                                {"decay_ratio", num(s.decay_ratio)},
                                {"diverging", s.diverging},
                                {"log_partial_sums", sums}});
      }
      ojson doc{{"command", "dissipativity"},
                {"beta", num(beta)},
                {"verdict", std::string(to_string(rep.verdict))},
                {"pressure", pressure_json(rep.pressure)},
                {"samples", samples}};
      out << doc.dump(2) << '\n';
    } else if (kms->parsed()) {
      const auto g = in.graph();
      const auto phi = in.potential(g);
      const auto region = kms_region(phi, g, KmsOptions{d.tol, d.N});
      ojson samples = ojson::array();
      for (const auto& s : region.samples) {
        samples.push_back(
            ojson{{"beta", num(s.beta)}, {"p_lo", num(s.p.lo)}, {"p_est", num(s.p.point)}, {"p_hi", num(s.p.hi)}});
      }
      ojson doc{{"case", std::string(to_string(region.case_tag))},
                {"region", std::string(to_string(region.region))},
                {"beta0", num(region.beta0)},
                {"beta0_lo", num(region.beta0_lo)},
                {"beta0_hi", num(region.beta0_hi)},
                {"phi_bounds", {num(region.a), num(region.b)}},
                {"searched", {num(region.searched_lo), num(region.searched_hi)}},
                {"samples", samples}};
      if (!std::isnan(certify)) {
        ConstructOptions opt;
        opt.N = d.N;
        opt.depth = d.depth;
        opt.region_radius = d.radius;
        opt.eps_schedule = d.eps;
        const auto r = kms_certificate(region, certify, phi, g, CylinderFunction::indicator(FinitePath::vertex(0)), opt);
        doc["certificate"] = ojson{{"beta", num(certify)}, {"method", r.method}, {"residuals", residual_json(g, r.residuals)}};
      }
      out << doc.dump(2) << '\n';
    } else if (expc->parsed()) {
      ExpOptions opt;
      opt.n_max = d.exp_nmax;
      opt.K = d.exp_branches;
      opt.beam = d.exp_beam;
      out << "beta\tlo\tmid\thi\n";
      for (double b : betas) {
        const auto r = exp_pressure(lambda, b, opt);
        out << io::format_double(b) << '\t' << io::format_double(r.estimate.lo) << '\t'
            << io::format_double(r.estimate.point) << '\t' << io::format_double(r.estimate.hi) << '\n';
      }
    } else if (oracle_cmd->parsed()) {
      out << "name\tmethod\tvalue\n";
      for (const auto& r : oracle::reference_table()) {
        out << r.instance << '\t' << r.method << '\t' << io::format_double(r.value) << '\n';
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_refusal(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return 1;
    }
    f << out.str();
  }
  return 0;
}
