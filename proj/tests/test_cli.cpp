// End-to-end checks of the command line tool: exit codes, output schemas,
// determinism, and the no-partial-output rule. The binary path comes in
// through NCSPIN_CLI_PATH.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScratch = fs::path("cli_scratch");

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run run_cli(const std::string& args) {
  fs::create_directories(kScratch);
  const fs::path out = kScratch / "stdout.txt";
  const fs::path err = kScratch / "stderr.txt";
  const std::string cmd = std::string(NCSPIN_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  REQUIRE(WIFEXITED(raw));
  return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const json& j) {
  fs::create_directories(kScratch);
  const fs::path p = kScratch / name;
  std::ofstream f(p);
  f << j.dump();
  return p;
}

}  // namespace

TEST_CASE("algebra: default run passes and reports the conventions") {
  const Run r = run_cli("algebra");
  REQUIRE(r.code == 0);
  const json d = json::parse(r.out);
  CHECK(d.at("t7_sign") == "minus");
  CHECK(d.at("basis").at("trace_residual").get<double>() < 1e-12);
  CHECK(d.at("basis").at("ladder_residual").get<double>() < 1e-12);
  CHECK(d.at("structure").at("jacobi_residual").get<double>() < 1e-12);
  CHECK(d.at("rejected_ladder_residual").get<double>() > 1e-2);
  REQUIRE(d.at("spin_closure").size() == 3);
  for (const auto& row : d.at("spin_closure")) {
    CHECK(row.at("sign_convention") == "+f");
    CHECK(row.at("max_residual").get<double>() < 1e-10);
    CHECK(row.at("samples") == 100);
  }
}

TEST_CASE("algebra: forced wrong sign exits 2 and writes nothing") {
  const fs::path out = kScratch / "forced.json";
  fs::remove(out);
  const Run r = run_cli("algebra --t7-sign plus --out " + out.string());
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(json::parse(r.err).at("error") == "ClosureFailure");

  const Run ok = run_cli("algebra --t7-sign minus");
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out).at("t7_sign") == "minus");
}

TEST_CASE("algebra: byte-for-byte deterministic") {
  const Run a = run_cli("algebra --samples 50");
  const Run b = run_cli("algebra --samples 50");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("orbit: classification triples and bracket residuals") {
  const Run deg = run_cli("orbit --x1 0.8 --x2 0.8 --partition 2");
  REQUIRE(deg.code == 0);
  const json d2 = json::parse(deg.out);
  CHECK(d2.at("first_class") == 4);
  CHECK(d2.at("second_class") == 0);
  CHECK(d2.at("dim") == 4);
  CHECK(d2.at("brackets").at("residual").get<double>() < 1e-10);

  const Run gen = run_cli("orbit --x1 1.0 --x2 0.5 --partition 1,1");
  REQUIRE(gen.code == 0);
  const json d11 = json::parse(gen.out);
  CHECK(d11.at("first_class") == 2);
  CHECK(d11.at("second_class") == 2);
  CHECK(d11.at("dim") == 6);
  CHECK(d11.at("brackets").at("residual").get<double>() < 1e-10);
  // Frozen value at these weights: {phi, phibar} = +0.1 i.
  const auto pb = d11.at("brackets").at("phi_phibar");
  CHECK(std::abs(pb[0].get<double>()) < 1e-12);
  CHECK(std::abs(pb[1].get<double>() - 0.1) < 1e-10);

  CHECK(run_cli("orbit --x1 0.8 --x2 0.8 --partition 1,1").code == 3);
  CHECK(run_cli("orbit --partition 3").code == 3);
  CHECK(run_cli("orbit --partition nope").code == 1);
}

TEST_CASE("evolve: torus trajectory, summary, and config precedence") {
  const fs::path csv = kScratch / "torus.csv";
  fs::remove(csv);
  const Run r = run_cli("evolve --out " + csv.string());
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(csv));

  const json s = json::parse(r.out);
  CHECK(s.at("is_torus") == true);
  CHECK(s.at("exact_error").get<double>() < 1e-8);
  CHECK(s.at("energy_drift").get<double>() < 1e-8);
  CHECK(s.at("casimir_drift").get<double>() < 1e-8);

  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "t,re_xi1,im_xi1,re_xi2,im_xi2,energy,casimir");
  int rows = 0;
  for (std::string line; std::getline(f, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == s.at("steps").get<int>() + 1);

  // CLI flag beats the config file.
  const fs::path cfg = write_config(
      "loose.json", json{{"tol", 1e-6}, {"t_end", 2.0}});
  const Run tight = run_cli("evolve --config " + cfg.string() +
                            " --tol 1e-10 --out " + csv.string());
  REQUIRE(tight.code == 0);
  CHECK(json::parse(tight.out).at("tol").get<double>() == 1e-10);
  CHECK(json::parse(tight.out).at("t_end").get<double>() == 2.0);
}

TEST_CASE("evolve: generic quadratic conserves energy and Casimir") {
  const json cfg = {{"J", 1.0},
                    {"c1", {0.05, 0, 0, 0.1, 0, 0, 0, 0}},
                    {"c2", {{1, 1, 0.3}, {2, 2, 0.2}, {3, 3, 0.25},
                            {8, 8, 0.35}, {1, 3, 0.05}}},
                    {"xi0", {{0.25, 0.1}, {-0.2, 0.15}}},
                    {"t_end", 10.0}};
  const fs::path p = write_config("generic.json", cfg);
  const fs::path csv = kScratch / "generic.csv";
  const Run r = run_cli("evolve --config " + p.string() + " --out " + csv.string());
  REQUIRE(r.code == 0);
  const json s = json::parse(r.out);
  CHECK(s.at("is_torus") == false);
  CHECK_FALSE(s.contains("exact_error"));
  CHECK(s.at("energy_drift").get<double>() < 1e-8);
  CHECK(s.at("casimir_drift").get<double>() < 1e-8);
}

TEST_CASE("evolve: failures exit with their own codes, no partial files") {
  const fs::path csv = kScratch / "never.csv";

  fs::remove(csv);
  const fs::path big =
      write_config("big.json", json{{"xi0", {{0.9, 0.0}, {0.5, 0.0}}}});
  const Run val = run_cli("evolve --config " + big.string() + " --out " + csv.string());
  CHECK(val.code == 3);
  CHECK_FALSE(fs::exists(csv));

  const fs::path boost = write_config(
      "boost.json", json{{"c1", {0, 0, 0, 1.0, 0, 0, 0, 0}},
                         {"xi0", {{0.1, 0.0}, {0.0, 0.0}}},
                         {"t_end", 40.0}});
  const Run dome = run_cli("evolve --config " + boost.string() + " --out " + csv.string());
  CHECK(dome.code == 4);
  CHECK_FALSE(fs::exists(csv));
  const json de = json::parse(dome.err);
  CHECK(de.at("error") == "DomainExit");
  const double texit = de.at("t_exit").get<double>();
  CHECK(texit > 15.0);
  CHECK(texit < 35.0);

  const fs::path far = write_config("far.json", json{{"t_end", 1e13}});
  const Run sf = run_cli("evolve --config " + far.string() + " --out " + csv.string());
  CHECK(sf.code == 5);
  CHECK_FALSE(fs::exists(csv));
  CHECK(json::parse(sf.err).at("error") == "StepFailure");

  CHECK(run_cli("evolve --tol 1e-3").code == 3);
  CHECK(run_cli("evolve --tol 1e-13").code == 3);
}

TEST_CASE("propagate: default grid meets the closed form") {
  const Run r = run_cli("propagate");
  REQUIRE(r.code == 0);
  const json d = json::parse(r.out);
  CHECK(d.at("J").get<double>() == 1.5);
  CHECK(d.at("degree") == 40);
  REQUIRE(d.at("points").size() == 25);
  CHECK(d.at("max_abs_err").get<double>() < 1e-9);
  for (const auto& pt : d.at("points")) {
    CHECK(pt.contains("xi"));
    CHECK(pt.contains("xi_prime"));
    CHECK(pt.at("K_closed").size() == 2);
    CHECK(pt.at("K_numeric").size() == 2);
    CHECK(pt.at("abs_err").get<double>() < 1e-9);
  }

  const Run again = run_cli("propagate");
  CHECK(again.out == r.out);

  const fs::path empty = write_config("empty.json", json{{"points", json::array()}});
  const Run e = run_cli("propagate --config " + empty.string());
  REQUIRE(e.code == 0);
  CHECK(json::parse(e.out).at("points").empty());

  const fs::path fat = write_config(
      "fat.json", json{{"J", 1.5},
                       {"degree", 8},
                       {"points", {{{"xi", {{0.9, 0.0}, {0.0, 0.0}}},
                                    {"xi_prime", {{0.9, 0.0}, {0.0, 0.0}}}}}}});
  const Run c = run_cli("propagate --config " + fat.string());
  CHECK(c.code == 6);
  CHECK(json::parse(c.err).at("error") == "ConvergenceFailure");
}

TEST_CASE("propagate: t = 0 grid equals the kernel") {
  const fs::path cfg = write_config("t0.json", json{{"t", 0.0}});
  const Run r = run_cli("propagate --config " + cfg.string());
  REQUIRE(r.code == 0);
  const Run k = run_cli("kernel");
  REQUIRE(k.code == 0);
  const json dp = json::parse(r.out);
  const json dk = json::parse(k.out);
  REQUIRE(dp.at("points").size() == dk.at("points").size());
  for (size_t i = 0; i < dp.at("points").size(); ++i) {
    const auto& a = dp.at("points")[i].at("K_closed");
    const auto& n = dp.at("points")[i].at("K_numeric");
    const auto& b = dk.at("points")[i].at("K");
    CHECK(std::abs(a[0].get<double>() - b[0].get<double>()) < 1e-10);
    CHECK(std::abs(a[1].get<double>() - b[1].get<double>()) < 1e-10);
    CHECK(std::abs(n[0].get<double>() - b[0].get<double>()) < 1e-10);
    CHECK(std::abs(n[1].get<double>() - b[1].get<double>()) < 1e-10);
  }
}

TEST_CASE("kernel: origin value, weight dump, branch guard") {
  const fs::path cfg = write_config(
      "origin.json",
      json{{"J", 1.0},
           {"points", {{{"xi", {{0.0, 0.0}, {0.0, 0.0}}},
                        {"xi_prime", {{0.3, 0.1}, {-0.2, 0.0}}}},
                       {{"xi", {{0.8, 0.0}, {0.0, 0.0}}},
                        {"xi_prime", {{0.625, 0.0}, {0.0, 0.0}}}}}}});
  const Run r = run_cli("kernel --config " + cfg.string());
  REQUIRE(r.code == 0);
  const json d = json::parse(r.out);
  const auto& k0 = d.at("points")[0].at("K");
  CHECK(k0[0].get<double>() == 1.0);
  CHECK(k0[1].get<double>() == 0.0);
  const auto& k1 = d.at("points")[1].at("K");  // pairing 1/2 at J = 1
  CHECK(std::abs(k1[0].get<double>() - 4.0) < 1e-13);

  // h_mn = Gamma(2J) m! n! / Gamma(2J + m + n) for the dumped block.
  for (const auto& row : d.at("gram")) {
    const int m = row.at("m").get<int>(), n = row.at("n").get<int>();
    CHECK(m + n <= 5);
    const double ref = std::exp(std::lgamma(2.0) + std::lgamma(m + 1.0) +
                                std::lgamma(n + 1.0) - std::lgamma(2.0 + m + n));
    CHECK(std::abs(row.at("h").get<double>() - ref) <= 1e-12 * ref);
  }

  const fs::path bad = write_config(
      "branch.json", json{{"points", {{{"xi", {{1.0, 0.0}, {0.0, 0.0}}},
                                       {"xi_prime", {{1.0, 0.0}, {0.0, 0.0}}}}}}});
  const Run b = run_cli("kernel --config " + bad.string());
  CHECK(b.code == 6);
  CHECK(json::parse(b.err).at("error") == "BranchViolation");
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("bogus").code == 1);
  CHECK(run_cli("").code == 1);
  const fs::path mangled = kScratch / "mangled.json";
  {
    std::ofstream f(mangled);
    f << "{not json";
  }
  CHECK(run_cli("evolve --config " + mangled.string()).code == 1);
  CHECK(run_cli("evolve --config " + (kScratch / "missing.json").string()).code == 1);
}
