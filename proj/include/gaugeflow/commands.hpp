#pragma once

/// Solution dumps, file conversions and the smaller report commands of the
/// command-line tool. Dumps are grid CSVs plus a JSON sidecar at <out>.json.

#include "gaugeflow/scenarios.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace gaugeflow {

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

inline json read_sidecar(const std::string& csv_path) {
  const std::string p = csv_path + ".json";
  if (!std::filesystem::exists(p)) return json::object();
  std::ifstream is(p);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw invalid_input(p + ": " + e.what());
  }
}

inline json frame_json(const Vec3& S, const Vec3& t) {
  return {{"S", {S[0], S[1], S[2]}}, {"t", {t[0], t[1], t[2]}}};
}

inline Vec3 vec3_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw invalid_input("sidecar: expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline void add_mask(CsvTable& t, const Mask& m) {
  FieldR f(t.grid);
  for (std::size_t k = 0; k < m.size(); ++k) f[k] = m[k] ? 1.0 : 0.0;
  t.add("mask", f);
}

inline Mask mask_column(const CsvTable& t) {
  if (!t.has("mask")) return {};
  const FieldR f = t.real("mask");
  Mask m(f.size(), 0);
  for (std::size_t k = 0; k < f.size(); ++k) m[k] = f[k] != 0.0;
  return m;
}

inline SpinFrameField frame_from_table(const CsvTable& t) {
  for (const char* c : {"S1", "S2", "S3", "t1", "t2", "t3"})
    if (!t.has(c)) throw invalid_input(std::string("spin input needs columns S1..S3, t1..t3; missing ") + c);
  SpinFrameField sf{t.vec3("S"), t.vec3("t"), mask_column(t)};
  if (sf.frame_defect() > 1e-8) throw invalid_input("spin input is not an orthonormal frame (|S| = |t| = 1, S.t = 0)");
  return sf;
}

// ------------------------------------------------------------ generate

struct Dump {
  CsvTable table;
  json params = json::object();
};

inline Dump generate_family(const std::string& family, const Options& o) {
  Dump d;
  if (family == "liouville") {
    const std::string m = o.map.value_or("z");
    const auto dom = detail::domain_or(o, {-2, 2, -2, 2});
    const int n = detail::nodes_or(o, 65, std::max(dom[1] - dom[0], dom[3] - dom[2]));
    const Grid2 g = Grid2::span(dom[0], dom[1], dom[2], dom[3], n, n);
    const RationalMap rm = RationalMap::parse(m);
    const LiouvilleSolution s = liouville_from_map(rm, g);
    const SpinFrameField sf = frames_of_map(s.zeta);
    d.table.grid = g;
    d.table.add("phi", s.phi);
    add_mask(d.table, s.mask);
    d.table.add("S", sf.S);
    d.table.add("t", sf.t);
    d.params = {{"map", m}};
  } else if (family == "hyp-liouville") {
    const std::string m = o.map.value_or("z");
    const auto dom = detail::domain_or(o, {-1, 1, 0.5, 2});
    const int n = detail::nodes_or(o, 65, std::max(dom[1] - dom[0], dom[3] - dom[2]));
    const Grid2 g = half_plane_band(dom[0], dom[1], dom[2], dom[3], n, n);
    const RationalMap rm = RationalMap::parse(m);
    const HypLiouville s = hyp_liouville_from_map(rm, g);
    d.table.grid = g;
    d.table.add("phi", s.phi);
    d.table.add("psi", s.psi);
    add_mask(d.table, s.mask);
    d.table.add("S", hyp_spin_from_map(rm, g));
    d.params = {{"map", m}};
  } else if (family == "nls-planewave" || family == "nls-boosted" || family == "spin-from-nls") {
    const double a = o.a.value_or(0.8), k = o.k.value_or(-0.6), w = 2 * a * a - k * k;
    const auto dom = detail::domain_or(o, {0, 1, -1, 1});
    const int n = detail::nodes_or(o, 41, std::max(dom[1] - dom[0], dom[3] - dom[2]));
    const Grid2 g = tx_grid(dom[0], dom[1], dom[2], dom[3], n, n);
    NLSField q = nls_from_closure(g, plane_wave(a, k, w));
    d.params = {{"a", a}, {"k", k}, {"omega", w}};
    if (family == "nls-boosted") {
      const double v = o.v.value_or(0.5);
      q = galileo_boost(q, v);
      d.params["v"] = v;
    }
    d.table.grid = g;
    if (family == "spin-from-nls") {
      const SpinFrameField sf = spin_from_nls(q);
      d.table.add("S", sf.S);
      d.table.add("t", sf.t);
    } else {
      d.table.add("Q", q.Q);
    }
  } else if (family == "backlund-soliton") {
    const double eta = o.eta.value_or(1.0);
    if (!(eta > 0.0)) throw invalid_input("--eta must be positive");
    const BacklundConstants k = BacklundConstants::named(o.constants);
    const double len = 8.0 / eta;
    const int n = detail::nodes_or(o, 161, 2 * len);
    const Grid2 g = tx_grid(0.0, 1.0, -len, len, 11, n);
    const DressedVacuum dv = dressed_vacuum(g, eta, k);
    d.table.grid = g;
    d.table.add("Qp", dv.Qp);
    d.table.add("C", dv.C);
    d.params = {{"eta", eta}, {"constants", k.name}, {"k_c2", k.k_c2}, {"k_45", k.k_45}, {"omega", num(dv.omega)}};
  } else {
    throw invalid_input("unknown family '" + family +
                        "' (liouville, hyp-liouville, nls-planewave, nls-boosted, backlund-soliton, spin-from-nls)");
  }
  return d;
}

inline json sidecar(const std::string& kind, const std::string& name, const Dump& d) {
  return {{"schema", 1},
          {kind, name},
          {"params", d.params},
          {"grid", grid_json(d.table.grid)},
          {"columns", d.table.names},
          {"version", version_string()}};
}

inline void write_dump(const std::string& out, const json& meta, const CsvTable& t) {
  write_csv(out, t);
  write_json_file(out + ".json", meta);
}

// ------------------------------------------------------------ convert

inline Report convert_file(const std::string& kind, const std::string& in, const std::string& out) {
  const CsvTable t = read_csv(in);
  const json meta_in = read_sidecar(in);
  Report r;
  r.scenario = "convert-" + kind;
  r.grid = grid_json(t.grid);
  Dump d;
  d.table.grid = t.grid;
  json meta_extra = json::object();

  if (kind == "spin-to-gauge" || kind == "spin-to-nls") {
    const SpinFrameField sf = frame_from_table(t);
    const std::size_t b = t.grid.index(t.grid.base_i(), t.grid.base_j());
    meta_extra["base_frame"] = frame_json(sf.S[b], sf.t[b]);
    if (kind == "spin-to-gauge") {
      const SpinToGauge sg = spin_to_gauge(sf);
      d.table.add("V0", sg.gauge.V.c0);
      d.table.add("V1", sg.gauge.V.c1);
      d.table.add("q0", sg.gauge.q.c0);
      d.table.add("q1", sg.gauge.q.c1);
      if (!sf.mask.empty()) add_mask(d.table, sf.mask);
      const CurvatureResidual cr = curvature_residual(sg.gauge);
      r.info("curvature_F", norms(cr.RF, kMargin, sf.mask));
      r.info("curvature_q", norms(cr.Rq, kMargin, sf.mask));
    } else {
      const NLSRecovery rec = nls_from_spin(sf);
      d.table.add("Q", rec.Q.Q);
      r.info("hm_residual", norms(hm_residual(sf.S)));
      r.info("constraint", norms(rec.constraint));
      r.info("closedness", norms(rec.closedness));
      if (!rec.warning.empty()) r.extra["warning"] = rec.warning;
    }
  } else if (kind == "gauge-to-spin" || kind == "nls-to-spin") {
    Vec3 S0(0, 0, 1), t0(1, 0, 0);
    if (meta_in.contains("base_frame")) {
      S0 = vec3_json(meta_in["base_frame"]["S"]);
      t0 = vec3_json(meta_in["base_frame"]["t"]);
    }
    const Mat2 g0 = frame_lift(S0, t0);
    SpinFrameField sf;
    if (kind == "gauge-to-spin") {
      for (const char* c : {"V0", "V1", "q0_re", "q0_im", "q1_re", "q1_im"})
        if (!t.has(c)) throw invalid_input(std::string("gauge input needs V0, V1, q0, q1; missing ") + c);
      GaugeData gd{{t.real("V0"), t.real("V1")}, {t.complex("q0"), t.complex("q1")}, mask_column(t)};
      const CurvatureResidual cr = curvature_residual(gd);
      r.info("curvature_F", norms(cr.RF, kMargin, gd.mask));
      r.info("curvature_q", norms(cr.Rq, kMargin, gd.mask));
      sf = gauge_to_frame(gd, g0);
    } else {
      if (!t.has("Q_re") || !t.has("Q_im")) throw invalid_input("nls input needs columns Q_re, Q_im");
      sf = spin_from_nls(nls_sampled(t.complex("Q")), g0);
      r.info("hm_residual", norms(hm_residual(sf.S)));
    }
    r.bound("frame_defect", sf.frame_defect(), 1e-10);
    d.table.add("S", sf.S);
    d.table.add("t", sf.t);
    if (!sf.mask.empty()) add_mask(d.table, sf.mask);
  } else {
    throw invalid_input("unknown conversion '" + kind + "' (spin-to-gauge, gauge-to-spin, spin-to-nls, nls-to-spin)");
  }
  json meta = sidecar("conversion", kind, d);
  meta["input"] = std::filesystem::path(in).filename().string();
  for (auto& [k, v] : meta_extra.items()) meta[k] = v;
  r.params = {{"input", meta["input"]}};
  write_dump(out, meta, d.table);
  return r;
}

// ------------------------------------------------------------ charge

inline Report charge_file(const std::string& in, double radius) {
  const CsvTable t = read_csv(in);
  for (const char* c : {"S1", "S2", "S3"})
    if (!t.has(c)) throw invalid_input(std::string("charge input needs columns S1..S3; missing ") + c);
  const Vec3Field S = t.vec3("S");
  for (const Vec3& s : S.values)
    if (std::abs(s.norm() - 1.0) > 1e-8) throw invalid_input("charge input: |S| != 1");
  Report r;
  r.scenario = "charge-file";
  r.grid = grid_json(t.grid);
  // a mask column in a dump flags the scalar fields (e.g. phi at critical
  // points); S itself is finite there, so the charge ignores it
  const double q = top_charge(S, radius);
  r.info("charge", {q, q});
  r.params = {{"input", std::filesystem::path(in).filename().string()}, {"radius", radius}};
  r.extra = {{"charge", num(q)}};
  return r;
}

// ------------------------------------------------------------ lax

/// Curvature of one Lax family at the requested spectral parameter.
inline Report lax_report(const std::string& model, const Options& o) {
  Report r;
  r.scenario = "lax-" + model;
  const cplx lam = o.lambda ? detail::parse_complex(*o.lambda) : cplx(1.0);
  r.params = {{"lambda", detail::cjson(lam)}};
  if (model == "nls") {
    const auto d = detail::domain_or(o, {0, 1, -1, 1});
    const int n = detail::nodes_or(o, 17, std::max(d[1] - d[0], d[3] - d[2]));
    const Grid2 g = tx_grid(d[0], d[1], d[2], d[3], n, n);
    const std::string kind = o.q.value_or("planewave");
    NLSField q;
    if (kind == "planewave") {
      const double a = o.a.value_or(0.8), k = o.k.value_or(-0.6);
      q = nls_from_closure(g, plane_wave(a, k, 2 * a * a - k * k));
      r.params["a"] = a;
      r.params["k"] = k;
    } else if (kind == "soliton") {
      const double eta = o.eta.value_or(1.0);
      q = nls_from_closure(g, bright_soliton(eta));
      r.params["eta"] = eta;
    } else {
      throw invalid_input("--q must be planewave or soliton");
    }
    if (o.v) q = galileo_boost(q, *o.v);
    r.params["q"] = kind;
    r.bound("zs_curvature", detail::mat_linf(zs_curvature(zs_lax(q, lam))), 1e-10);
    r.grid = grid_json(g);
  } else if (model == "shg") {
    const Grid2 g = Grid2::square(-1, 1, 9);
    if (lam == cplx(0)) throw invalid_input("lambda must be non-zero");
    r.bound("shg_vacuum_curvature", detail::mat_linf(shg_lax(shg_power(FieldR(g), 0), lam).curvature), 1e-12);
    r.grid = grid_json(g);
  } else if (model == "sg") {
    const Grid2 g = Grid2::span(-1, 1, -1, 1, 9, 9, {"t", "x"});
    const double phi = o.a.value_or(0.0);
    r.params["phi"] = phi;
    r.bound("sg_constant_curvature", detail::mat_linf(sg_lax(FieldR(g, phi), 1.0, lam).curvature), 1e-12);
    r.bound("sg_equation", norms(sg_residual(SGData{FieldR(g, phi)}).equation, 0), 1e-10);
    r.grid = grid_json(g);
  } else {
    throw invalid_input("unknown Lax model '" + model + "' (nls, shg, sg)");
  }
  return r;
}

// ------------------------------------------------------------ backlund

/// Calibration table plus the dressing residual at --lambda for the active
/// constants; the calibration winner must agree with them.
inline Report backlund_report(const Options& o) {
  Report r;
  r.scenario = "backlund-calibration";
  const double eta = o.eta.value_or(1.0);
  if (!(eta > 0.0)) throw invalid_input("--eta must be positive");
  const BacklundConstants k = BacklundConstants::named(o.constants);
  r.convention = k.name;
  const Calibration cal = calibrate_constants(eta, o.h.value_or(0.0));
  json table = json::array();
  for (const auto& row : cal.table) {
    table.push_back({{"k_c2", row.k_c2}, {"k_45", row.k_45}, {"omega", num(row.omega)},
                     {"amplitude", num(row.amplitude)}, {"width", num(row.width)}, {"score", num(row.score())}});
    if (row.k_c2 == k.k_c2 && row.k_45 == k.k_45) r.bound("active_constants_score", row.score(), 1e-3);
  }
  const double lam = o.lambda ? detail::parse_complex(*o.lambda).real() : 1.0;
  const Grid2 g = tx_grid(0.0, 1.0, -6.0 / eta, 6.0 / eta, 51, 401);
  BacklundPair bp = vacuum_soliton_pair(g, eta);
  bp.k = k;
  const DressingResidual dr = dressing_residual(bp, lam);
  r.bound("dressing_residual", detail::max_norms(norms(dr.space), norms(dr.time)), 1e-3);
  r.grid = grid_json(g);
  r.params = {{"eta", eta}, {"lambda", lam}};
  r.extra = {{"calibration", table}, {"winner", cal.winner.name}};
  return r;
}

}  // namespace gaugeflow
