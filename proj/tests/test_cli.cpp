#include <catch2/catch_amalgamated.hpp>

#include "gaugeflow/commands.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace gaugeflow;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(GAUGEFLOW_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  const fs::path d = fs::current_path() / "cli_scratch";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes", "[cli]") {
  CHECK(cli("verify liouville --map z --n 129").code == 0);
  CHECK(cli("verify no-such-scenario").code == 2);
  CHECK(cli("verify liouville --map 'z+'").code == 2);
  CHECK(cli("verify liouville --n 3").code == 2);
  CHECK(cli("verify backlund --constants wrong").code == 2);
  CHECK(cli("verify").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("verify lie-algebra", "GAUGEFLOW_SEED=abc").code == 2);
  CHECK(cli("--help").code == 0);
  // nine nodes are too coarse for the order to settle near 2
  CHECK(cli("verify liouville --map z --n 9").code == 1);
  // the printed constants do not give an NLS soliton from the vacuum
  CHECK(cli("verify backlund --constants paper").code == 1);
}

TEST_CASE("verify reports", "[cli]") {
  const Run r = cli("verify zs-curvature --q planewave --a 1 --k 0");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["body"]["verdict"] == "pass");
  CHECK(j["body"]["convention"] == "calibrated");
  CHECK(j["body"]["params"]["omega"] == 2.0);
  bool seen = false;
  for (const auto& e : j["body"]["residuals"])
    if (e["name"] == "zs_curvature_solution") {
      seen = true;
      CHECK(e["linf"].get<double>() <= 1e-10);
    }
  CHECK(seen);
  CHECK(j["body_digest"] == hex64(fnv1a(j["body"].dump())));

  const json l = json::parse(cli("verify liouville --map z --n 129").out);
  CHECK(std::abs(l["body"]["residuals"][0]["order"].get<double>() - 2.0) < 0.3);

  // convention is always present, even where it plays no role
  CHECK(json::parse(cli("verify sg").out)["body"]["convention"] == "calibrated");
  CHECK(json::parse(cli("verify sg --constants paper").out)["body"]["convention"] == "paper");

  const Run c = cli("verify sg --format csv");
  CHECK(c.code == 0);
  CHECK(c.out.rfind("scenario,name,linf,l2,order,bound,pass,gating\n", 0) == 0);
}

TEST_CASE("identical invocations give byte-identical bodies", "[cli]") {
  for (const char* s : {"roundtrip", "gauge-invariance", "shg-lax"}) {
    const json a = json::parse(cli(std::string("verify ") + s).out);
    const json b = json::parse(cli(std::string("verify ") + s).out);
    CHECK(a["body"].dump() == b["body"].dump());
    CHECK(a["body_digest"] == b["body_digest"]);
  }
  const fs::path d = scratch();
  REQUIRE(cli("verify galileo --out " + (d / "g1.json").string()).code == 0);
  REQUIRE(cli("verify galileo --out " + (d / "g2.json").string()).code == 0);
  const json a = json::parse(slurp(d / "g1.json")), b = json::parse(slurp(d / "g2.json"));
  CHECK(a["body"].dump() == b["body"].dump());
  CHECK(a.contains("wall_time_s"));
  CHECK_FALSE(a["body"].contains("wall_time_s"));

  // the relaxation seed is part of the body
  const json s1 = json::parse(cli("verify shg-lax", "GAUGEFLOW_SEED=7").out);
  CHECK(s1["body"]["params"]["seed"] == 7);
}

TEST_CASE("generate families", "[cli]") {
  const fs::path d = scratch();
  SECTION("nls-boosted with v = 0 equals the plane wave") {
    REQUIRE(cli("generate nls-planewave --out " + (d / "pw.csv").string()).code == 0);
    REQUIRE(cli("generate nls-boosted --v 0 --out " + (d / "pb.csv").string()).code == 0);
    CHECK(slurp(d / "pw.csv") == slurp(d / "pb.csv"));
    const json meta = json::parse(slurp(d / "pb.csv.json"));
    CHECK(meta["family"] == "nls-boosted");
    CHECK(meta["version"].get<std::string>().size() > 0);
    // plane-wave NLS residual of the dump is small
    const CsvTable t = read_csv((d / "pw.csv").string());
    CHECK(norms(nls_residual(nls_sampled(t.complex("Q")))).linf < 1e-2);
  }
  SECTION("liouville with map z") {
    REQUIRE(cli("generate liouville --map z --n 33 --out " + (d / "lv.csv").string()).code == 0);
    const CsvTable t = read_csv((d / "lv.csv").string());
    const FieldR phi = t.real("phi");
    for (int j = 0; j < t.grid.ny; ++j)
      for (int i = 0; i < t.grid.nx; ++i) {
        const double r2 = std::norm(t.grid.z(i, j));
        REQUIRE(std::abs(phi(i, j) + 2 * std::log(1 + r2)) < 1e-13);
      }
    CHECK(norms(liouville_residual(phi)).linf < 0.5);
  }
  SECTION("backlund soliton under the calibrated constants") {
    REQUIRE(cli("generate backlund-soliton --eta 1 --constants calibrated --out " + (d / "bs.csv").string()).code == 0);
    const CsvTable t = read_csv((d / "bs.csv").string());
    const FieldC q = t.complex("Qp");
    double err = 0;
    for (int j = 0; j < t.grid.ny; ++j)
      for (int i = 0; i < t.grid.nx; ++i) {
        const cplx want = std::polar(1.0 / std::cosh(t.grid.y(j)), t.grid.x(i));
        err = std::max(err, std::abs(q(i, j) - want));
      }
    // the fitted frequency carries O(h^2), which grows linearly in t
    CHECK(err < 1e-3);
    double err0 = 0;
    for (int j = 0; j < t.grid.ny; ++j) err0 = std::max(err0, std::abs(q(0, j) - 1.0 / std::cosh(t.grid.y(j))));
    CHECK(err0 < 1e-6);
    const json meta = json::parse(slurp(d / "bs.csv.json"));
    CHECK(meta["params"]["constants"] == "calibrated");
  }
  SECTION("hyp-liouville and spin-from-nls") {
    REQUIRE(cli("generate hyp-liouville --map z --n 17 --out " + (d / "hl.csv").string()).code == 0);
    const CsvTable t = read_csv((d / "hl.csv").string());
    for (double v : t.real("psi").values) REQUIRE(v == std::log(0.25));
    REQUIRE(cli("generate spin-from-nls --n 21 --out " + (d / "sn.csv").string()).code == 0);
    CHECK(read_csv((d / "sn.csv").string()).has("S3"));
  }
  CHECK(cli("generate nope --out " + (d / "x.csv").string()).code == 2);
}

TEST_CASE("convert and charge", "[cli]") {
  const fs::path d = scratch();
  SECTION("spin -> gauge -> spin is the identity up to O(h^2)") {
    REQUIRE(cli("generate liouville --map 0.5*z+0.2 --domain -1,1 --n 41 --out " + (d / "s.csv").string()).code == 0);
    REQUIRE(cli("convert spin-to-gauge " + (d / "s.csv").string() + " --out " + (d / "g.csv").string()).code == 0);
    REQUIRE(cli("convert gauge-to-spin " + (d / "g.csv").string() + " --out " + (d / "s2.csv").string()).code == 0);
    const CsvTable a = read_csv((d / "s.csv").string()), b = read_csv((d / "s2.csv").string());
    CHECK(norms(a.vec3("S") - b.vec3("S"), 0).linf < 1e-2);
    CHECK(norms(a.vec3("t") - b.vec3("t"), 0).linf < 1e-2);
  }
  SECTION("spin -> nls -> spin") {
    REQUIRE(cli("generate spin-from-nls --n 41 --out " + (d / "sp.csv").string()).code == 0);
    REQUIRE(cli("convert spin-to-nls " + (d / "sp.csv").string() + " --out " + (d / "q.csv").string()).code == 0);
    REQUIRE(cli("convert nls-to-spin " + (d / "q.csv").string() + " --out " + (d / "sp2.csv").string()).code == 0);
    const CsvTable a = read_csv((d / "sp.csv").string()), b = read_csv((d / "sp2.csv").string());
    // one-sided Qx of the recovered field amplifies its boundary layer, so
    // the two outer rows are excluded like in every residual norm
    CHECK(norms(a.vec3("S") - b.vec3("S")).linf < 1e-2);
    // recovered Q is the plane wave up to a constant phase
    const CsvTable q = read_csv((d / "q.csv").string());
    const FieldC Q = q.complex("Q");
    for (std::size_t k = 0; k < Q.size(); ++k) REQUIRE(std::abs(std::abs(Q[k]) - 0.8) < 1e-2);
  }
  SECTION("schema mismatch") {
    REQUIRE(cli("generate nls-planewave --out " + (d / "pw2.csv").string()).code == 0);
    CHECK(cli("convert spin-to-gauge " + (d / "pw2.csv").string() + " --out " + (d / "bad.csv").string()).code == 2);
    CHECK(cli("convert gauge-to-spin " + (d / "pw2.csv").string() + " --out " + (d / "bad.csv").string()).code == 2);
    CHECK(cli("charge " + (d / "pw2.csv").string()).code == 2);
    CHECK(cli("convert spin-to-gauge " + (d / "missing.csv").string() + " --out " + (d / "bad.csv").string()).code == 2);
    CHECK(cli("convert sideways " + (d / "pw2.csv").string() + " --out " + (d / "bad.csv").string()).code == 2);
  }
  SECTION("charge of a degree-2 dump and of a constant field") {
    REQUIRE(cli("generate liouville --map z^2 --domain -50,50 --n 401 --out " + (d / "z2.csv").string()).code == 0);
    const json j = json::parse(cli("charge " + (d / "z2.csv").string() + " --radius 50").out);
    CHECK(std::abs(j["body"]["details"]["charge"].get<double>() - 4.0) < 0.08);

    CsvTable c;
    c.grid = Grid2::square(-1, 1, 9);
    c.add("S", Vec3Field(c.grid, Vec3(0, 0, 1)));
    write_csv((d / "const.csv").string(), c);
    const json k = json::parse(cli("charge " + (d / "const.csv").string()).out);
    CHECK(k["body"]["details"]["charge"].get<double>() == 0.0);
  }
}

TEST_CASE("lax and backlund commands", "[cli]") {
  CHECK(cli("lax nls --lambda 0.7+0.3i").code == 0);
  CHECK(cli("lax nls --q soliton --eta 1.3 --v 0.4 --lambda 5").code == 0);
  CHECK(cli("lax shg --lambda 0.6+0.8i").code == 0);
  CHECK(cli("lax sg --a 3.141592653589793 --lambda i").code == 0);
  CHECK(cli("lax kdv").code == 2);
  CHECK(cli("lax shg --lambda 0").code == 2);

  const Run b = cli("backlund --eta 1");
  REQUIRE(b.code == 0);
  const json j = json::parse(b.out);
  CHECK(j["body"]["details"]["winner"] == "calibrated");
  CHECK(j["body"]["details"]["calibration"].size() == 9);
  CHECK(cli("backlund --eta 1 --constants paper").code == 1);
}
