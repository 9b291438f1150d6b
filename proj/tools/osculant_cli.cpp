// osculant: command-line front end.
//
// Exit codes: 0 success / pass, 1 verdict fail, 2 precision error, 3 usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "osculant/osculant.hpp"

namespace {

using nlohmann::json;
using namespace osculant;

constexpr int kPass = 0, kFail = 1, kPrecision = 2, kUsage = 3;

struct RunConfig {
  std::string curve_path;
  std::uint64_t seed = 1;
  int trials = 1000;
  int samples = 0;
  int t_steps = 256;
  int ruling_steps = 64;
  std::string format = "csv";
  std::string out;
  std::optional<double> tol_rank, tol_zero;
  std::string point;
  std::string curve2_path;
  std::vector<double> moments;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

Tolerances tolerances(const RunConfig& cfg) {
  Tolerances tol;
  if (cfg.tol_rank) tol.rank = *cfg.tol_rank;
  if (cfg.tol_zero) tol.zero = *cfg.tol_zero;
  return tol;
}

Curve require_curve(const std::string& path) {
  if (path.empty()) throw UsageError("--curve is required");
  return load_curve(path);
}

ProjPoint parse_point(const std::string& text, int n) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse coordinate '" + item + "' in point '" + text + "'");
    }
  }
  if (static_cast<int>(v.size()) != n + 1)
    throw UsageError("point '" + text + "' has " + std::to_string(v.size()) + " coordinates, expected " +
                     std::to_string(n + 1));
  return ProjPoint(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json root_count_json(const RootCount& rc) {
  json ts = json::array();
  for (const auto& t : rc.tangencies) ts.push_back({{"tau", t.tau}, {"order", t.order}});
  return {{"total", rc.total}, {"tangencies", ts}};
}

void emit(const RunConfig& cfg, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw UsageError("cannot open output file " + cfg.out);
  os << text;
}

int cmd_check_convex(const RunConfig& cfg) {
  const Curve c = require_curve(cfg.curve_path);
  SamplingOptions so;
  so.seed = cfg.seed;
  so.tol = tolerances(cfg);
  CriterionOptions co;
  co.seed = cfg.seed;
  co.tol = so.tol;
  const ConvexityReport sampling = check_convex_sampling(c, cfg.trials, so);
  const ConvexityReport criterion = check_convex_criterion(c, cfg.samples > 0 ? cfg.samples : 500, co);
  const bool pass = sampling.verdict == Verdict::pass && criterion.verdict == Verdict::pass;
  emit(cfg, {{"curve", c.label()},
             {"n", c.dim()},
             {"seed", cfg.seed},
             {"sampling", sampling},
             {"criterion", criterion},
             {"verdict", pass ? "pass" : "fail"}});
  return pass ? kPass : kFail;
}

int cmd_roots(const RunConfig& cfg) {
  const Curve c = require_curve(cfg.curve_path);
  const ProjPoint p = parse_point(cfg.point, c.dim());
  const RootCount rc = count_roots(c, p, tolerances(cfg));
  json report = {{"curve", c.label()}, {"point", to_vector(p.coords())}, {"roots", root_count_json(rc)}};
  if ((c.dim() - rc.total) % 2 == 0 && rc.total <= c.dim()) report["stratum"] = (c.dim() - rc.total) / 2;
  else report["stratum"] = nullptr;
  emit(cfg, report);
  return kPass;
}

int cmd_project(const RunConfig& cfg) {
  const Curve c = require_curve(cfg.curve_path);
  if (cfg.moments.empty()) throw UsageError("project: give at least one moment");
  const ProjectedCurve pc = project_iterated(c, cfg.moments);
  SamplingOptions so;
  so.seed = cfg.seed;
  so.tol = tolerances(cfg);
  const ConvexityReport conv = check_convex_sampling(pc.curve, cfg.trials, so);
  // Recursion: #_p(projected) + k = #_p(curve) for points of the ambient subspace.
  const int checks = cfg.samples > 0 ? cfg.samples : 100;
  const int k = static_cast<int>(cfg.moments.size());
  int mismatches = 0, skipped = 0;
  for (int i = 0; i < checks; ++i) {
    auto rng = item_rng(cfg.seed, static_cast<std::uint64_t>(i));
    const ProjPoint x = random_point(rng, pc.curve.dim());
    try {
      const int lower = count_roots(pc.curve, x, so.tol).total;
      const int upper = count_roots(c, ProjPoint(pc.to_base(x.coords())), so.tol).total;
      if (lower + k != upper) ++mismatches;
    } catch (const PrecisionError&) {
      ++skipped;
    }
  }
  const bool pass = conv.verdict == Verdict::pass && mismatches == 0;
  emit(cfg, {{"curve", c.label()},
             {"moments", cfg.moments},
             {"projected_dim", pc.curve.dim()},
             {"convexity", conv},
             {"recursion", {{"checked", checks - skipped}, {"skipped", skipped}, {"mismatches", mismatches}}},
             {"verdict", pass ? "pass" : "fail"}});
  return pass ? kPass : kFail;
}

int cmd_components(const RunConfig& cfg) {
  const Curve c = require_curve(cfg.curve_path);
  CensusOptions opt;
  opt.seed = cfg.seed;
  opt.tol = tolerances(cfg);
  const CensusReport r = component_census(c, cfg.samples > 0 ? cfg.samples : 5000, opt);
  emit(cfg, r);
  if (!r.support_complete()) std::cerr << "components: support is not {n, n-2, ...}\n";
  if (!r.locally_constant())
    std::cerr << "components: " << r.constancy_violations << " of " << r.constancy_checked
              << " perturbed points changed their root count\n";
  return r.support_complete() && r.locally_constant() ? kPass : kFail;
}

int cmd_hull(const RunConfig& cfg) {
  const Curve c = require_curve(cfg.curve_path);
  const Tolerances tol = tolerances(cfg);
  json report = {{"curve", c.label()}, {"n", c.dim()}};
  if (c.dim() % 2 == 0) {
    const EllipticHull hull = elliptic_hull(c);
    report["center"] = to_vector(hull.center().coords());
    report["inradius"] = hull.inradius;
    report["analytic_center"] = to_vector(hull.anchor().coords());
    report["center_is_member"] = elliptic_hull_membership(c, hull.center(), tol);
  } else {
    report["center"] = nullptr;
    report["note"] = "odd n: the elliptic hull is fibered over the curve and has no single center";
  }
  const int probes = cfg.samples > 0 ? cfg.samples : 200;
  int members = 0, unresolved = 0;
  for (int i = 0; i < probes; ++i) {
    auto rng = item_rng(cfg.seed, static_cast<std::uint64_t>(i));
    try {
      members += elliptic_hull_membership(c, random_point(rng, c.dim()), tol) ? 1 : 0;
    } catch (const PrecisionError&) {
      ++unresolved;
    }
  }
  report["probes"] = {{"count", probes}, {"members", members}, {"unresolved", unresolved}};
  emit(cfg, report);
  return kPass;
}

int cmd_mesh(const RunConfig& cfg) {
  const Curve c = require_curve(cfg.curve_path);
  const ExportFormat fmt = export_format_from_string(cfg.format);
  if (cfg.out.empty()) throw UsageError("mesh: --out is required");
  const RuledSample s = sample_discriminant(c, cfg.t_steps, cfg.ruling_steps);
  export_sample(s, fmt, cfg.out);
  const int violations = count_discriminant_violations(c, s, tolerances(cfg));
  std::cout << json{{"curve", c.label()},
                    {"n", c.dim()},
                    {"points", s.points.size()},
                    {"format", cfg.format},
                    {"out", cfg.out},
                    {"membership_violations", violations}}
                   .dump(2)
            << "\n";
  return violations == 0 ? kPass : kFail;
}

int cmd_transport(const RunConfig& cfg) {
  const Curve c1 = require_curve(cfg.curve_path);
  if (cfg.curve2_path.empty()) throw UsageError("transport: give the target curve file");
  const Curve c2 = load_curve(cfg.curve2_path);
  if (c1.dim() != c2.dim()) throw UsageError("transport: curves have different dimensions");
  StratumOptions opt;
  opt.tol = tolerances(cfg);
  const ProjPoint p = parse_point(cfg.point, c1.dim());
  const StratumData d1 = tangency_data(c1, p, opt);
  const ProjPoint q = reconstruct(c2, d1, opt);
  const StratumData d2 = tangency_data(c2, q, opt);
  const ProjPoint back = transport(q, c2, c1, opt);
  const bool preserved = d1.index == d2.index && d1.moments.size() == d2.moments.size();
  emit(cfg, {{"from", c1.label()},
             {"to", c2.label()},
             {"point", to_vector(p.coords())},
             {"transported", to_vector(q.coords())},
             {"source", d1},
             {"target", d2},
             {"roots_preserved", preserved},
             {"round_trip_error", projective_distance(back, p)}});
  return preserved ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"osculant: osculating flags, root counts and discriminants of convex projective curves"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--curve", cfg.curve_path, "Curve file (JSON)");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--trials", cfg.trials, "Sampling trials");
  app.add_option("--samples", cfg.samples, "Criterion tuples, census points or probes");
  app.add_option("--t-steps", cfg.t_steps, "Rulings in the discriminant mesh");
  app.add_option("--ruling-steps", cfg.ruling_steps, "Grid points per ruling direction");
  app.add_option("--format", cfg.format, "Mesh format: obj, csv or json");
  app.add_option("--out", cfg.out, "Output file (default: stdout)");
  app.add_option("--tol-rank", cfg.tol_rank, "Relative rank tolerance");
  app.add_option("--tol-zero", cfg.tol_zero, "Relative zero tolerance of tangency functions");

  auto* check = app.add_subcommand("check-convex", "Sampling and criterion convexity checks");
  auto* roots = app.add_subcommand("roots", "Tangency moments and root count of a point");
  roots->add_option("point", cfg.point, "Comma-separated homogeneous coordinates")->required();
  auto* project = app.add_subcommand("project", "Project along osculating hyperplanes and check the result");
  project->add_option("moments", cfg.moments, "Projection moments")->required();
  auto* components = app.add_subcommand("components", "Census of root counts off the discriminant");
  auto* hull = app.add_subcommand("hull", "Elliptic hull center and membership probes");
  auto* mesh = app.add_subcommand("mesh", "Sample and export the discriminant");
  auto* trans = app.add_subcommand("transport", "Carry a point to the corresponding point of another curve");
  trans->add_option("point", cfg.point, "Comma-separated homogeneous coordinates")->required();
  trans->add_option("curve2", cfg.curve2_path, "Target curve file (JSON)")->required();
  for (auto* sub : {check, roots, project, components, hull, mesh, trans}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check_convex(cfg);
    if (*roots) return cmd_roots(cfg);
    if (*project) return cmd_project(cfg);
    if (*components) return cmd_components(cfg);
    if (*hull) return cmd_hull(cfg);
    if (*mesh) return cmd_mesh(cfg);
    if (*trans) return cmd_transport(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return kPrecision;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedFormat& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "fail: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
