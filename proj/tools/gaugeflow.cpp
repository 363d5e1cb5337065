// gaugeflow command-line tool: verify / generate / convert / charge / lax / backlund.
//
// Exit codes: 0 pass, 1 fail, 2 invalid input.

#include "gaugeflow/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace gaugeflow;

namespace {

struct Output {
  std::string out, format = "json";
};

void add_grid_flags(CLI::App* c, Options& o) {
  c->add_option("--n", o.n, "nodes per axis (coarse grid)");
  c->add_option("--h", o.h, "grid spacing, used when --n is absent");
  c->add_option("--domain", o.domain, "a,b or a,b,c,d");
}

void add_model_flags(CLI::App* c, Options& o) {
  c->add_option("--map", o.map, "rational map in z, e.g. (z-1)/(z+1)");
  c->add_option("--lambda", o.lambda, "spectral parameter, e.g. 0.7+0.3i");
  c->add_option("--eta", o.eta, "Backlund parameter / soliton height");
  c->add_option("--v", o.v, "Galileo velocity");
  c->add_option("--q", o.q, "NLS field: planewave or soliton");
  c->add_option("--a", o.a, "plane-wave amplitude");
  c->add_option("--k", o.k, "plane-wave wavenumber");
  c->add_option("--constants", o.constants, "Backlund constants: paper or calibrated")
      ->check(CLI::IsMember({"paper", "calibrated"}));
}

void add_output_flags(CLI::App* c, Output& out) {
  c->add_option("--out", out.out, "write the report here instead of stdout");
  c->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const Report& r, const Output& out) {
  std::ofstream file;
  if (!out.out.empty()) {
    file.open(out.out);
    if (!file) throw std::runtime_error("cannot open " + out.out + " for writing");
  }
  std::ostream& os = out.out.empty() ? std::cout : file;
  if (out.format == "csv")
    r.write_csv(os);
  else
    os << r.to_json().dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaugeflow: zero-curvature pipelines for sigma models and integrable equations"};
  app.require_subcommand(1);
  // --h is the grid spacing, so help is long-form only
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", version_string());

  Options o;
  Output out;
  std::string name, input;
  double radius = 0.0;

  std::string catalog;
  for (const auto& [k, v] : scenario_catalog()) catalog += (catalog.empty() ? "" : ", ") + k;

  auto* verify = app.add_subcommand("verify", "run a named verification scenario");
  verify->add_option("scenario", name, "one of: " + catalog)->required();
  add_grid_flags(verify, o);
  add_model_flags(verify, o);
  add_output_flags(verify, out);

  auto* generate = app.add_subcommand("generate", "dump a solution family to CSV plus a JSON sidecar");
  generate->add_option("family", name,
                       "liouville, hyp-liouville, nls-planewave, nls-boosted, backlund-soliton, spin-from-nls")
      ->required();
  add_grid_flags(generate, o);
  add_model_flags(generate, o);
  generate->add_option("--out", out.out, "CSV path; the sidecar goes to <out>.json")->required();

  auto* convert = app.add_subcommand("convert", "spin-to-gauge, gauge-to-spin, spin-to-nls or nls-to-spin");
  convert->add_option("kind", name)->required();
  convert->add_option("in", input, "input CSV")->required();
  convert->add_option("--out", out.out, "output CSV; the sidecar goes to <out>.json")->required();
  convert->add_option("--format", out.format)->check(CLI::IsMember({"json", "csv"}));

  auto* charge = app.add_subcommand("charge", "topological charge of the S1..S3 columns of a dump");
  charge->add_option("in", input, "input CSV")->required();
  charge->add_option("--radius", radius, "integrate over |z| <= radius (0: whole grid)");
  add_output_flags(charge, out);

  auto* lax = app.add_subcommand("lax", "Lax curvature of nls, shg or sg at --lambda");
  lax->add_option("model", name)->required();
  add_grid_flags(lax, o);
  add_model_flags(lax, o);
  add_output_flags(lax, out);

  auto* backlund = app.add_subcommand("backlund", "constant calibration table and dressing residual");
  add_grid_flags(backlund, o);
  add_model_flags(backlund, o);
  add_output_flags(backlund, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Report r;
    if (app.got_subcommand(verify)) {
      r = run_scenario(name, o);
    } else if (app.got_subcommand(generate)) {
      const Dump d = generate_family(name, o);
      json meta = sidecar("family", name, d);
      write_dump(out.out, meta, d.table);
      std::cout << meta.dump(2) << '\n';
      return 0;
    } else if (app.got_subcommand(convert)) {
      r = convert_file(name, input, out.out);
      Output o2{"", out.format};
      emit(r, o2);
      return r.pass() ? 0 : 1;
    } else if (app.got_subcommand(charge)) {
      r = charge_file(input, radius);
    } else if (app.got_subcommand(lax)) {
      r = lax_report(name, o);
    } else {
      r = backlund_report(o);
    }
    emit(r, out);
    return r.pass() ? 0 : 1;
  } catch (const invalid_input& e) {
    std::cerr << "gaugeflow: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gaugeflow: " << e.what() << '\n';
    return 1;
  }
}
