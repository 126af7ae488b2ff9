#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conflab/cli.hpp"
#include "conflab/error.hpp"
#include "conflab/parallel.hpp"

namespace {

void add_metric_options(CLI::App* cmd, conflab::cli::MetricSource& m) {
  cmd->add_option("--builtin", m.builtin, "builtin metric: g0 or flat")->check(CLI::IsMember({"g0", "flat"}));
  cmd->add_option("--p", m.p, "p of the builtin metric");
  cmd->add_option("--q", m.q, "q of the builtin metric");
  cmd->add_option("--file", m.file, "metric file")->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cl = conflab::cli;
  conflab::apply_thread_cap_from_env();

  CLI::App app{"conflab: exact curvature, conformal maps and lightlike geodesics of g0 and its quotients"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  cl::CurvatureOptions curv;
  auto* c_curv = app.add_subcommand("curvature", "Christoffel, Riemann, Ricci and Weyl of a metric");
  add_metric_options(c_curv, curv.metric);
  c_curv->add_option("--point", curv.point, "rational point for the Weyl image")->delimiter(',');

  cl::VerifyConformalOptions conf;
  auto* c_conf = app.add_subcommand("verify-conformal", "conformal factors of phi_lambda and phi^t");
  c_conf->add_option("--p", conf.p);
  c_conf->add_option("--q", conf.q);
  c_conf->add_option("--alpha", conf.alpha);
  c_conf->add_option("--beta", conf.beta);
  c_conf->add_flag("--symbolic", conf.symbolic, "keep E1 = e^alpha and E2 = e^beta symbolic");
  c_conf->add_option("--t", conf.t, "flow time");
  c_conf->add_option("--tolerance", conf.tolerance);

  cl::ClassifyOptions cls;
  auto* c_cls = app.add_subcommand("classify", "compare two quotient models by their holonomy invariants");
  c_cls->add_option("--p", cls.p);
  c_cls->add_option("--q", cls.q);
  c_cls->add_option("--lambda1", cls.lambda1, "alpha,beta")->delimiter(',')->expected(2);
  c_cls->add_option("--lambda2", cls.lambda2, "alpha,beta")->delimiter(',')->expected(2);
  c_cls->add_option("--tolerance", cls.tolerance);

  cl::EssentialDemoOptions ess;
  auto* c_ess = app.add_subcommand("essential-demo", "Hausdorff contraction of the box U onto the segment I");
  c_ess->add_option("--p", ess.p);
  c_ess->add_option("--q", ess.q);
  c_ess->add_option("--alpha", ess.alpha);
  c_ess->add_option("--beta", ess.beta);
  c_ess->add_option("--t", ess.t, "increasing flow times")->delimiter(',');
  c_ess->add_option("--grid", ess.grid, "samples per axis, at least 3");
  c_ess->add_option("--window", ess.window, "group shifts searched in each direction");
  c_ess->add_option("--threshold", ess.threshold, "bound for the last distance");
  c_ess->add_option("--out", ess.out, "witness CSV");

  cl::GeodesicOptions geo;
  auto* c_geo = app.add_subcommand("geodesic", "integrate a geodesic and its projective parameter");
  add_metric_options(c_geo, geo.metric);
  c_geo->add_option("--x", geo.x, "initial position")->delimiter(',');
  c_geo->add_option("--v", geo.v, "initial velocity")->delimiter(',');
  c_geo->add_option("--step", geo.step);
  c_geo->add_option("--nsteps", geo.nsteps);
  c_geo->add_flag("--projective", geo.projective, "also solve for the projective parameter");
  c_geo->add_option("--null-tolerance", geo.null_tolerance);
  c_geo->add_option("--out", geo.out, "trajectory CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    conflab::report::ReportDocument doc = [&] {
      if (name == "curvature") return cl::cmd_curvature(curv);
      if (name == "verify-conformal") return cl::cmd_verify_conformal(conf);
      if (name == "classify") return cl::cmd_classify(cls);
      if (name == "essential-demo") return cl::cmd_essential_demo(ess);
      return cl::cmd_geodesic(geo);
    }();
    std::cout << (format == "json" ? doc.to_json() : doc.to_text());
    return doc.passed() ? 0 : 1;
  } catch (const conflab::Error& e) {
    std::cout << cl::error_json(name, conflab::to_string(e.code()), e.what());
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cout << cl::error_json(name, "InternalError", e.what());
    std::cerr << e.what() << '\n';
    return 3;
  }
}
