// Batch front end: five verification/computation commands with JSON/CSV
// output for downstream plotting. Every command is deterministic for a
// fixed config; validation runs before anything touches the output path, so
// a failed run never leaves a partial file behind.
//
// Exit codes: 0 ok, 1 usage or config parse, 2 algebra failure, 3 spec
// validation, 4 domain exit, 5 integrator failure, 6 convergence or branch
// failure.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncspin/dynamics.hpp"
#include "ncspin/liealg.hpp"
#include "ncspin/orbit.hpp"
#include "ncspin/quantum.hpp"
#include "ncspin/spin.hpp"

using nlohmann::json;
using namespace ncspin;

namespace {

// Config or flag problems that are the caller's fault.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json cplx_json(Cplx z) { return json::array({z.real(), z.imag()}); }

Cplx cplx_from(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw UsageError("complex values are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json vec2_json(const Vec2& v) {
  return json::array({cplx_json(v(0)), cplx_json(v(1))});
}

Vec2 vec2_from(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw UsageError("chart points are [[re, im], [re, im]] pairs");
  }
  return {cplx_from(j[0]), cplx_from(j[1])};
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file: " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config parse: ") + e.what());
  }
}

// The whole output is assembled in memory first.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot open output path: " + out_path);
  f << text;
}

template <class T>
T pick(const CLI::Option* opt, const T& flag_value, const json& cfg,
       const char* key, const T& fallback) {
  if (opt != nullptr && opt->count() > 0) return flag_value;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config field '") + key + "': " + e.what());
    }
  }
  return fallback;
}

json basis_json(const BasisCheck& bc) {
  return {{"trace_residual", bc.trace_residual},
          {"hermiticity_residual", bc.hermiticity_residual},
          {"pseudoherm_residual", bc.pseudoherm_residual},
          {"closure_residual", bc.closure_residual},
          {"ladder_residual", bc.ladder_residual}};
}

json structure_json(const StructureCheck& sc) {
  return {{"comm_residual", sc.comm_residual},
          {"anticomm_residual", sc.anticomm_residual},
          {"antisym_residual", sc.antisym_residual},
          {"jacobi_residual", sc.jacobi_residual},
          {"d_symmetry_residual", sc.d_symmetry_residual}};
}

int cmd_algebra(const std::string& t7, int samples, std::uint64_t seed,
                const std::vector<double>& js, const std::string& out_path) {
  json out;
  GeneratorBasis basis;
  if (t7 == "auto") {
    const AlgebraReport rep = verify_algebra();
    basis = build_generators();
    out["t7_sign"] = rep.chosen == T7Sign::minus ? "minus" : "plus";
    out["basis"] = basis_json(rep.minus_check);
    out["rejected_ladder_residual"] = rep.plus_check.ladder_residual;
    out["structure"] = structure_json(rep.structure);
  } else if (t7 == "minus" || t7 == "plus") {
    basis = build_candidate(t7 == "minus" ? T7Sign::minus : T7Sign::plus);
    const BasisCheck bc = check_basis(basis);
    const double worst =
        std::max({bc.trace_residual, bc.hermiticity_residual,
                  bc.pseudoherm_residual, bc.closure_residual});
    if (!bc.ladder_ok || worst > 1e-12) {
      throw ClosureFailure("forced T_7 sign '" + t7 +
                           "' fails the basis invariants");
    }
    out["t7_sign"] = t7;
    out["basis"] = basis_json(bc);
    out["structure"] = structure_json(
        check_structure(basis, structure_constants(basis)));
  } else {
    throw UsageError("--t7-sign takes auto, minus or plus");
  }

  const StructureConstants sc = structure_constants(basis);
  json closures = json::array();
  for (double J : js) {
    const ClosureReport rep = verify_spin_algebra(basis, sc, J, samples, seed);
    closures.push_back({{"J", J},
                        {"max_residual", rep.max_residual},
                        {"samples", rep.samples},
                        {"sign_convention", rep.sign_convention},
                        {"casimir_value", rep.casimir_value}});
  }
  out["spin_closure"] = closures;
  out["samples"] = samples;
  out["seed"] = seed;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_orbit(double x1, double x2, const std::vector<int>& partition,
              const std::string& out_path) {
  const OrbitSpec spec{ReferenceElement::from_pair(x1, x2), partition};
  const auto [nf, ns, dim] = classify_constraints(spec);
  const ConstraintBrackets cb = constraint_brackets(spec);
  const Cplx expected = -0.5 * kI * (1.0 / spec.J1() - 1.0 / spec.J2());

  json out;
  out["x"] = {x1, x2};
  out["partition"] = partition;
  out["J1"] = spec.J1();
  out["J2"] = spec.J2();
  out["first_class"] = nf;
  out["second_class"] = ns;
  out["dim"] = dim;
  out["brackets"] = {{"phi_phibar", cplx_json(cb.phi_phibar)},
                     {"expected_phi_phibar", cplx_json(expected)},
                     {"residual", std::abs(cb.phi_phibar - expected)},
                     {"psi1_phi", cplx_json(cb.psi1_phi)},
                     {"psi2_phi", cplx_json(cb.psi2_phi)},
                     {"phi_value", cplx_json(cb.phi_value)}};
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

HamiltonianSpec hamiltonian_from(const json& cfg) {
  HamiltonianSpec h;
  h.J = cfg.value("J", 1.0);
  if (cfg.contains("c1")) {
    const auto& c1 = cfg.at("c1");
    if (!c1.is_array() || c1.size() != 8) {
      throw UsageError("c1 must be an array of 8 coefficients");
    }
    for (int i = 0; i < 8; ++i) h.c1[i] = c1[i].get<double>();
  }
  if (cfg.contains("c2")) {
    // Upper-triangle triples [a, b, value] with 1-based labels.
    for (const auto& t : cfg.at("c2")) {
      if (!t.is_array() || t.size() != 3) {
        throw UsageError("c2 entries are [a, b, value] triples");
      }
      const int a = t[0].get<int>(), b = t[1].get<int>();
      if (a < 1 || a > 8 || b < 1 || b > 8) {
        throw UsageError("c2 labels must lie in 1..8");
      }
      const double v = t[2].get<double>();
      h.c2(a - 1, b - 1) = v;
      h.c2(b - 1, a - 1) = v;
    }
  }
  return h;
}

int cmd_evolve(const json& cfg, double tol, const std::string& out_path) {
  const GeneratorBasis basis = build_generators();
  HamiltonianSpec h = hamiltonian_from(cfg);
  if (!cfg.contains("c1") && !cfg.contains("c2")) h.c1[2] = 1.0;

  Vec2 xi0(Cplx(0.3, 0.0), Cplx(0.1, 0.2));
  if (cfg.contains("xi0")) xi0 = vec2_from(cfg.at("xi0"));
  const double t_end = cfg.value("t_end", 10.0);

  // All validation before any stepping or output.
  h.validate();
  OrbitPoint::cp11(xi0).validate();

  const Trajectory tr = integrate(h, xi0, t_end, tol, basis);

  std::ostringstream csv;
  write_trajectory_csv(csv, tr);

  const double e0 = tr.points.front().energy;
  const double c0 = tr.points.front().casimir;
  double edrift = 0.0, cdrift = 0.0;
  for (const auto& pt : tr.points) {
    edrift = std::max(edrift, std::abs(pt.energy - e0));
    cdrift = std::max(cdrift, std::abs(pt.casimir - c0));
  }

  json summary;
  summary["J"] = h.J;
  summary["t_end"] = t_end;
  summary["tol"] = tol;
  summary["steps"] = tr.points.size() - 1;
  summary["energy_drift"] = edrift;
  summary["casimir_drift"] = cdrift;
  summary["is_torus"] = h.is_torus();
  if (h.is_torus()) {
    double worst = 0.0;
    for (const auto& pt : tr.points) {
      const Vec2 exact = exact_torus_solution(h.c1, xi0, pt.t);
      worst = std::max(worst, (pt.xi - exact).norm());
    }
    summary["exact_error"] = worst;
  }
  const auto& last = tr.points.back();
  summary["final"] = {{"t", last.t},
                      {"xi", vec2_json(last.xi)},
                      {"energy", last.energy},
                      {"casimir", last.casimir}};

  if (out_path.empty()) {
    std::cout << csv.str();
    std::cerr << summary.dump(2) << "\n";
  } else {
    emit(csv.str(), out_path);
    std::cout << summary.dump(2) << "\n";
  }
  return 0;
}

std::vector<Vec2> default_points() {
  return {Vec2(Cplx(0.28, 0.21), Cplx(-0.30, 0.0)),
          Vec2(Cplx(-0.12, 0.40), Cplx(0.20, 0.10)),
          Vec2(Cplx(0.35, 0.0), Cplx(0.0, 0.35)),
          Vec2(Cplx(0.10, -0.22), Cplx(-0.31, 0.15)),
          Vec2(Cplx(-0.25, -0.25), Cplx(0.18, -0.28))};
}

// Pairs (xi, xi') for the grid commands: explicit list from the config, or
// the full product of the canned points.
std::vector<std::pair<Vec2, Vec2>> grid_from(const json& cfg) {
  std::vector<std::pair<Vec2, Vec2>> pairs;
  if (cfg.contains("points")) {
    for (const auto& p : cfg.at("points")) {
      pairs.emplace_back(vec2_from(p.at("xi")), vec2_from(p.at("xi_prime")));
    }
    return pairs;
  }
  const auto pts = default_points();
  for (const auto& a : pts) {
    for (const auto& b : pts) pairs.emplace_back(a, b);
  }
  return pairs;
}

int cmd_propagate(const json& cfg, const std::string& out_path) {
  const GeneratorBasis basis = build_generators();
  const double J = cfg.value("J", 1.5);
  const double t = cfg.value("t", 1.0);
  const int degree = cfg.value("degree", 40);
  double w1 = 0.9, w2 = 0.4;
  if (cfg.contains("omegas")) {
    const auto& om = cfg.at("omegas");
    if (!om.is_array() || om.size() != 2) {
      throw UsageError("omegas must be [w1, w2]");
    }
    w1 = om[0].get<double>();
    w2 = om[1].get<double>();
  }

  json points = json::array();
  double max_err = 0.0;
  for (const auto& [xi, xp] : grid_from(cfg)) {
    const Vec2 xpb = xp.conjugate();
    const Cplx closed = propagator_closed_form(xpb, xi, w1, w2, t, J);
    const Cplx numeric = propagator_numeric(xpb, xi, w1, w2, t, J, degree, basis);
    const double err = std::abs(closed - numeric);
    max_err = std::max(max_err, err);
    points.push_back({{"xi", vec2_json(xi)},
                      {"xi_prime", vec2_json(xp)},
                      {"K_closed", cplx_json(closed)},
                      {"K_numeric", cplx_json(numeric)},
                      {"abs_err", err}});
  }

  json out;
  out["J"] = J;
  out["omegas"] = {w1, w2};
  out["t"] = t;
  out["degree"] = degree;
  out["points"] = points;
  out["max_abs_err"] = max_err;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_kernel(const json& cfg, const std::string& out_path) {
  const double J = cfg.value("J", 1.5);
  const int dump_degree = cfg.value("dump_degree", 5);
  if (dump_degree < 0) throw UsageError("dump_degree must be >= 0");

  json points = json::array();
  for (const auto& [xi, xp] : grid_from(cfg)) {
    const Cplx k = kernel(xp.conjugate(), xi, J);
    points.push_back({{"xi", vec2_json(xi)},
                      {"xi_prime", vec2_json(xp)},
                      {"K", cplx_json(k)}});
  }

  // Taylor weights 1/h_mn of the kernel about the origin.
  json gram = json::array();
  for (int deg = 0; deg <= dump_degree; ++deg) {
    for (int n = 0; n <= deg; ++n) {
      const int m = deg - n;
      gram.push_back(
          {{"m", m}, {"n", n}, {"h", gram_diagonal(J, m, n)}});
    }
  }

  json out;
  out["J"] = J;
  out["points"] = points;
  out["gram"] = gram;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << json{{"error", "usage"}, {"what", e.what()}}.dump() << "\n";
    return 1;
  } catch (const ClosureFailure& e) {
    std::cerr << json{{"error", "ClosureFailure"}, {"what", e.what()}}.dump()
              << "\n";
    return 2;
  } catch (const NonTraceless& e) {
    std::cerr << json{{"error", "NonTraceless"}, {"what", e.what()}}.dump()
              << "\n";
    return 2;
  } catch (const DegenerateWeights& e) {
    std::cerr << json{{"error", "DegenerateWeights"}, {"what", e.what()}}.dump()
              << "\n";
    return 3;
  } catch (const ChartSingularity& e) {
    std::cerr << json{{"error", "ChartSingularity"}, {"what", e.what()}}.dump()
              << "\n";
    return 3;
  } catch (const DomainViolation& e) {
    std::cerr << json{{"error", "DomainViolation"}, {"what", e.what()}}.dump()
              << "\n";
    return 3;
  } catch (const DomainExit& e) {
    std::cerr << json{{"error", "DomainExit"},
                      {"what", e.what()},
                      {"t_exit", e.t_exit}}
                     .dump()
              << "\n";
    return 4;
  } catch (const StepFailure& e) {
    std::cerr << json{{"error", "StepFailure"},
                      {"what", e.what()},
                      {"t_fail", e.t_fail}}
                     .dump()
              << "\n";
    return 5;
  } catch (const ConvergenceFailure& e) {
    std::cerr << json{{"error", "ConvergenceFailure"}, {"what", e.what()}}.dump()
              << "\n";
    return 6;
  } catch (const BranchViolation& e) {
    std::cerr << json{{"error", "BranchViolation"}, {"what", e.what()}}.dump()
              << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"what", e.what()}}.dump() << "\n";
    return 1;
  }
}

std::vector<int> parse_partition(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError("partition entries must be integers, e.g. \"2\" or \"1,1\"");
    }
  }
  if (out.empty()) throw UsageError("empty partition");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noncompact spin system: algebra, orbit, dynamics and propagators"};
  app.require_subcommand(1);

  struct Common {
    std::string config, out;
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-10;
    CLI::Option *seed_opt = nullptr, *tol_opt = nullptr;
  };
  auto add_common = [](CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON config file");
    cmd->add_option("--out", c.out, "output path (default stdout)");
    c.seed_opt = cmd->add_option("--seed", c.seed, "sampling seed");
    c.tol_opt = cmd->add_option("--tol", c.tol, "tolerance override");
  };

  Common alg_c;
  std::string t7 = "auto";
  int samples = 100;
  auto* alg = app.add_subcommand("algebra", "generator and closure audit");
  add_common(alg, alg_c);
  alg->add_option("--t7-sign", t7, "auto, minus or plus");
  auto* samples_opt = alg->add_option("--samples", samples, "closure sample count");

  Common orb_c;
  double x1 = 1.0, x2 = 0.5;
  std::string partition_flag = "1,1";
  auto* orb = app.add_subcommand("orbit", "constraint classification");
  add_common(orb, orb_c);
  auto* x1_opt = orb->add_option("--x1", x1, "first reference weight");
  auto* x2_opt = orb->add_option("--x2", x2, "second reference weight");
  auto* part_opt = orb->add_option("--partition", partition_flag,
                                   "stabilizer partition, e.g. \"2\" or \"1,1\"");

  Common evo_c;
  auto* evo = app.add_subcommand("evolve", "integrate a quadratic Hamiltonian");
  add_common(evo, evo_c);

  Common pro_c;
  auto* pro = app.add_subcommand("propagate", "closed form vs series propagator");
  add_common(pro, pro_c);

  Common ker_c;
  auto* ker = app.add_subcommand("kernel", "reproducing kernel values and weights");
  add_common(ker, ker_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  return guarded([&]() -> int {
    if (alg->parsed()) {
      const json cfg = load_config(alg_c.config);
      const std::string sign =
          pick(alg->get_option("--t7-sign"), t7, cfg, "t7_sign",
               std::string("auto"));
      const int ns = pick(samples_opt, samples, cfg, "samples", 100);
      if (ns < 1) throw UsageError("samples must be positive");
      const std::uint64_t seed =
          pick(alg_c.seed_opt, alg_c.seed, cfg, "seed", kDefaultSeed);
      const std::vector<double> js =
          cfg.contains("J") ? cfg.at("J").get<std::vector<double>>()
                            : std::vector<double>{0.5, 1.0, 1.5};
      return cmd_algebra(sign, ns, seed, js, alg_c.out);
    }
    if (orb->parsed()) {
      const json cfg = load_config(orb_c.config);
      const double wx1 = pick(x1_opt, x1, cfg, "x1", 1.0);
      const double wx2 = pick(x2_opt, x2, cfg, "x2", 0.5);
      std::vector<int> partition;
      if (part_opt->count() > 0) {
        partition = parse_partition(partition_flag);
      } else if (cfg.contains("partition")) {
        partition = cfg.at("partition").get<std::vector<int>>();
      } else {
        partition = {1, 1};
      }
      return cmd_orbit(wx1, wx2, partition, orb_c.out);
    }
    if (evo->parsed()) {
      const json cfg = load_config(evo_c.config);
      const double tol = pick(evo_c.tol_opt, evo_c.tol, cfg, "tol", 1e-10);
      return cmd_evolve(cfg, tol, evo_c.out);
    }
    if (pro->parsed()) {
      const json cfg = load_config(pro_c.config);
      return cmd_propagate(cfg, pro_c.out);
    }
    const json cfg = load_config(ker_c.config);
    return cmd_kernel(cfg, ker_c.out);
  });
}
