// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#include "dbrinterp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dbrinterp/boundary.hpp"
#include "dbrinterp/homint.hpp"
#include "dbrinterp/oap.hpp"
#include "dbrinterp/solve.hpp"

namespace dbrinterp {

namespace {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string render_scalar(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    return std::isfinite(v) ? format_double(v) : "null";
  }
  return j.dump();
}

std::string render_inline(const Json& j) {
  if (is_scalar(j)) return render_scalar(j);
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) s += ", ";
    s += render_inline(j[i]);
  }
  return s + "]";
}

bool has_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array()) return std::any_of(j.begin(), j.end(), [](const Json& e) { return has_object(e); });
  return false;
}

void render(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (is_scalar(j)) {
    out += render_scalar(j);
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (!has_object(j)) {
      const std::string s = render_inline(j);
      if (s.size() <= 100) {
        out += s;
        return;
      }
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      render(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + Json(it.key()).dump() + ": ";
      render(it.value(), indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string path(const std::string& where, const char* key) { return where + "/" + key; }

double number_from_json(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

Index index_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<Index>();
}

std::vector<cplx> complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

Json dims_json(const ColligationDims& d) {
  return Json{{"x0", d.x0}, {"dv", d.dv}, {"delta", d.delta}, {"delta_star", d.delta_star}, {"p", d.p}, {"q", d.q}};
}

Json tolerances_json(const RunConfig& cfg) {
  return Json{{"rank_tol", cfg.tol.rank_tol},
              {"psd_tol", cfg.tol.psd_tol},
              {"residual_tol", cfg.tol.residual_tol},
              {"verify_tol", cfg.verify_tol}};
}

Json admissibility_json(const AdmissibilityReport& r) {
  return Json{{"stein_residual", r.stein_residual},
              {"stein_ok", r.stein_ok},
              {"obs_pairs_ok", r.obs_pairs_ok},
              {"fs_membership_residual", r.fs_membership_residual},
              {"fs_membership_ok", r.fs_membership_ok},
              {"psd_ok", r.psd_ok},
              {"membership_grid", r.membership_grid},
              {"admissible", r.admissible()}};
}

std::string summary(bool solvable, double margin) {
  return std::string(solvable ? "solvable" : "unsolvable") + ", margin " + format_double(margin);
}

/// Points used by the verification blocks.
std::vector<cplx> verification_points() { return Grid::polar(2, 5, 0.8).points; }

SchurFunction zero_function(Index q) { return certify_schur(Realization::constant(CMatrix::Zero(q, 1))); }

/// Interpolation data of the np, cf and h2 kinds.
InterpData interp_from_spec(const Json& spec, const std::string& kind) {
  if (kind == "np") {
    return np_data(complex_list(field(spec, "nodes", ""), "/nodes"), complex_list(field(spec, "targets", ""), "/targets"));
  }
  if (kind == "cf") {
    return cf_data(complex_from_json(field(spec, "point", ""), "/point"),
                   complex_list(field(spec, "coefficients", ""), "/coefficients"));
  }
  InterpData d;
  d.T = matrix_from_json(field(spec, "T", ""), "/T");
  d.E = matrix_from_json(field(spec, "E", ""), "/E", 0, d.T.cols());
  d.x = vector_from_json(field(spec, "x", ""), "/x");
  if (d.T.rows() != d.T.cols() || d.E.cols() != d.T.rows() || d.x.size() != d.T.rows()) {
    throw InputError("h2 spec: T must be n x n, E q x n and x of length n");
  }
  return d;
}

struct Built {
  std::string kind;
  bool h2 = false;  ///< explicit H^2 route
  InterpData interp;
  std::optional<AipDataSet> data;
  std::optional<BoundaryDataSet> boundary;
  std::optional<SchurFunction> S, B;
};

Built build(const Json& spec, const Tolerances& tol) {
  if (!spec.is_object()) throw InputError("spec: expected a JSON object");
  const Json& schema = field(spec, "schema", "");
  if (!schema.is_number_integer() || schema.get<int>() != 1) throw InputError("/schema: unsupported schema, expected 1");
  const Json& kind_j = field(spec, "kind", "");
  if (!kind_j.is_string()) throw InputError("/kind: expected a string");
  Built b;
  b.kind = kind_j.get<std::string>();
  if (b.kind == "np" || b.kind == "cf" || b.kind == "h2") {
    b.interp = interp_from_spec(spec, b.kind);
    if (spec.contains("S")) {
      b.data = oap_to_aip(function_from_json(spec["S"], "/S", tol), b.interp.E, b.interp.T, b.interp.x, tol);
    } else {
      b.h2 = true;
      b.data = oap_to_aip(zero_function(b.interp.E.rows()), b.interp.E, b.interp.T, b.interp.x, tol);
    }
  } else if (b.kind == "aip") {
    SchurFunction S = function_from_json(field(spec, "S", ""), "/S", tol);
    const CMatrix T = matrix_from_json(field(spec, "T", ""), "/T");
    const CMatrix E = matrix_from_json(field(spec, "E", ""), "/E", S.output_dim(), T.cols());
    const CMatrix N = matrix_from_json(field(spec, "N", ""), "/N", S.input_dim(), T.cols());
    const CVector x = vector_from_json(field(spec, "x", ""), "/x");
    if (spectral_radius(T) >= 1.0) throw InputError("/T: spectral radius must be below 1 (use the boundary kind)");
    b.data = make_aip_data(std::move(S), T, E, N, x, tol);
    b.data->P = compute_P_oap(*b.data, tol);
  } else if (b.kind == "boundary") {
    const SchurFunction s = function_from_json(field(spec, "s", ""), "/s", tol);
    const Json& angles = field(spec, "angles", "");
    const Json& orders = field(spec, "orders", "");
    const Json& targets = field(spec, "targets", "");
    if (!angles.is_array() || !orders.is_array() || !targets.is_array()) {
      throw InputError("boundary spec: angles, orders and targets must be arrays");
    }
    std::vector<double> a;
    std::vector<Index> o;
    std::vector<std::vector<cplx>> t;
    for (std::size_t i = 0; i < angles.size(); ++i) a.push_back(number_from_json(angles[i], "/angles/" + std::to_string(i)));
    for (std::size_t i = 0; i < orders.size(); ++i) o.push_back(index_from_json(orders[i], "/orders/" + std::to_string(i)));
    for (std::size_t i = 0; i < targets.size(); ++i) t.push_back(complex_list(targets[i], "/targets/" + std::to_string(i)));
    b.boundary = make_boundary_data(s, std::move(a), std::move(o), std::move(t), tol);
  } else if (b.kind == "intersection") {
    b.S = function_from_json(field(spec, "S", ""), "/S", tol);
    b.B = function_from_json(field(spec, "B", ""), "/B", tol);
  } else {
    throw InputError("/kind: unknown problem kind \"" + b.kind + "\"");
  }
  return b;
}

/// A result file carries its spec; solving it again re-verifies the same problem.
const Json& unwrap_spec(const Json& j) {
  if (j.is_object() && j.contains("spec") && j["spec"].is_object()) return j["spec"];
  return j;
}

Json intersection_json(const IntersectionSpace& is) {
  Json v{{"image_dim", is.image_dim},
         {"parameter_space_dim", is.parameter_space_dim},
         {"dimension_saturated", is.dimension_saturated},
         {"kernel_identity_residual", is.kernel_identity_residual},
         {"membership_residual", is.max_membership_residual},
         {"ks_residual", is.max_ks_residual},
         {"recovery_residual", is.parameter.max_residual}};
  v["isometry_defect"] = is.isometry_defect ? Json(*is.isometry_defect) : Json(nullptr);
  return v;
}

bool intersection_verified(const IntersectionSpace& is, double vt) {
  return is.kernel_identity_residual <= vt && is.max_membership_residual <= vt && is.max_ks_residual <= vt &&
         (!is.isometry_defect || *is.isometry_defect <= vt);
}

/// Central solution F^S P^+ x of a general data set with its checks.
CommandResult solve_aip(const Json& spec, const Built& b, const RunConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  const AipDataSet& data = *b.data;
  const CMatrix& P = *data.P;
  const AdmissibilityReport adm = check_admissible(data, P, tol);
  if (!adm.admissible()) throw InconsistencyError("solve: data set is not admissible", adm.stein_residual);
  const Solvability sv = solvability(P, data.x, tol);
  if (!sv.solvable) throw UnsolvableError("solve: unsolvable, margin " + format_double(sv.margin), sv.margin);
  const RedhefferColligation col = build_colligation(P, data.T, data.E, data.N, tol);
  const TargetLift lift = lift_target(col, data.x, tol);
  if (!lift.in_range) throw UnsolvableError("solve: x is not in the range of P^{1/2}", -lift.residual);
  const double xn = lift.x_tilde.norm();
  const CVector y = col.X0_basis * col.sqrt_eigs.cwiseInverse().cast<cplx>().asDiagonal() * lift.x_tilde;
  const Realization f = fs_times_vector(data, y);

  Json v;
  v["stein_residual"] = adm.stein_residual;
  v["lift_residual"] = lift.residual;
  v["x_tilde_norm"] = xn;
  // Pairing with F^S: M^*_{F^S} F^S y = P y.
  const double pairing = (P * y - data.x).norm();
  v["pairing_residual"] = pairing;
  const double n_dev = (build_N(data.S, data.E, data.T, tol) - data.N).norm();
  std::optional<double> interp;
  if (n_dev <= tol.residual_tol * (1.0 + data.N.norm())) interp = (interp_functional(data, f, tol) - data.x).norm();
  v["interp_residual"] = interp ? Json(*interp) : Json(nullptr);
  if (data.S.certified_inner) v["norm"] = h2_norm(f, tol);
  const KernelPositivity kp = kernel_positivity_test(data, P, f.as_function(), verification_points(), tol);
  v["kernel_min_eigenvalue"] = kp.min_eigenvalue;
  std::optional<double> gamma;
  try {
    const std::vector<cplx> pts = verification_points();
    const RecoveredParameter rp = recover_parameter(col, data.S.realization.as_function(), pts, tol);
    double g = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      g = std::max(g, (compute_G_Gamma(col, rp.values[i], pts[i]).Gamma * lift.x_tilde - f.eval(pts[i])).norm());
    }
    gamma = g;
    v["recovery_residual"] = rp.max_residual;
  } catch (const RecoveryError& e) {
    v["recovery_residual"] = e.residual();
  }
  v["gamma_residual"] = gamma ? Json(*gamma) : Json(nullptr);

  const double vt = cfg.verify_tol;
  const bool ok = pairing <= vt * (1.0 + data.x.norm()) && (!interp || *interp <= vt * (1.0 + data.x.norm())) &&
                  kp.psd && (!gamma || *gamma <= vt);
  const UniquenessVerdict uv = classify_uniqueness(col, xn, nullptr, tol);

  CommandResult r;
  r.exit_code = ok ? kExitOk : kExitViolated;
  Json& out = r.report;
  out["schema"] = 1;
  out["kind"] = b.kind;
  out["status"] = ok ? "verified" : "verification_failed";
  out["f"] = realization_to_json(f);
  out["budget"] = std::sqrt(std::max(0.0, 1.0 - xn * xn));
  out["margin"] = sv.margin;
  out["uniqueness"] = to_string(uv.uniqueness);
  out["case"] = to_string(uv.case_tag);
  out["colligation"] = dims_json(col.dims);
  out["verification"] = v;
  out["tolerances"] = tolerances_json(cfg);
  out["spec"] = spec;
  return r;
}

CommandResult solve_h2(const Json& spec, const Built& b, const std::optional<Json>& param, const RunConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  const InterpData& d = b.interp;
  const H2Solution s = h2_solve(d.E, d.T, d.x, tol);
  const Index q = d.E.rows();
  Realization f = s.f_min;
  std::optional<double> h_norm;
  if (param) {
    if (!param->is_object()) throw InputError("param: expected a JSON object");
    const Json& schema = field(*param, "schema", "param");
    if (!schema.is_number_integer() || schema.get<int>() != 1) throw InputError("param/schema: expected 1");
    const Realization h = function_from_json(field(*param, "h", "param"), "param/h", tol).realization;
    if (h.output_dim() != q || h.input_dim() != 1) {
      throw InputError("param/h: expected a column function with " + std::to_string(q) + " rows");
    }
    if (!h.is_stable()) throw InputError("param/h: h must be analytic on the closed disk");
    h_norm = h2_norm(h, tol);
    if (*h_norm > s.budget + tol.psd_tol) {
      throw BudgetExceededError("solve: budget exceeded, ||h|| = " + format_double(*h_norm) + " > " +
                                    format_double(s.budget),
                                s.budget - *h_norm);
    }
    f = s.f_min + s.B.realization * h;
  }
  const AipDataSet& data = *b.data;
  const RedhefferColligation col = build_colligation(s.P, d.T, d.E, data.N, tol);
  const double xn = std::sqrt(std::max(0.0, 1.0 - s.budget * s.budget));
  const UniquenessVerdict uv = classify_uniqueness(col, xn, nullptr, tol);

  Json v;
  const double interp = (interp_functional(data, f, tol) - d.x).norm();
  v["interp_residual"] = interp;
  v["norm"] = h2_norm(f, tol);
  v["norm_min"] = h2_norm(s.f_min, tol);
  v["x_tilde_norm"] = xn;
  if (h_norm) v["h_norm"] = *h_norm;
  double inner = 0.0;
  const std::vector<cplx> pts = verification_points();
  for (const cplx z : pts) {
    for (const cplx w : pts) inner = std::max(inner, inner_kernel_residual(s, d.E, d.T, z, w));
  }
  v["inner_kernel_residual"] = inner;
  v["inner_certified"] = s.B.certified_inner;
  const KernelPositivity kp = kernel_positivity_test(data, s.P, f.as_function(), pts, tol);
  v["kernel_min_eigenvalue"] = kp.min_eigenvalue;

  const double vt = cfg.verify_tol;
  const bool ok = interp <= vt * (1.0 + d.x.norm()) && inner <= vt && s.B.certified_inner && kp.psd;
  CommandResult r;
  r.exit_code = ok ? kExitOk : kExitViolated;
  Json& out = r.report;
  out["schema"] = 1;
  out["kind"] = b.kind;
  out["status"] = ok ? "verified" : "verification_failed";
  out["f"] = realization_to_json(f);
  out["inner"] = realization_to_json(s.B.realization);
  out["budget"] = s.budget;
  out["margin"] = s.margin;
  out["uniqueness"] = to_string(uv.uniqueness);
  out["case"] = to_string(uv.case_tag);
  out["colligation"] = dims_json(col.dims);
  out["verification"] = v;
  out["tolerances"] = tolerances_json(cfg);
  out["spec"] = spec;
  return r;
}

CommandResult solve_boundary_kind(const Json& spec, const Built& b, const RunConfig& cfg) {
  const BoundarySolution s = solve_boundary(*b.boundary, cfg.tol);
  Json v;
  v["stein_residual"] = s.stein_residual;
  v["gram_oracle_residual"] = (boundary_gram_oracle(*b.boundary, cfg.tol) - s.P).norm();
  v["fs_kernel_residual"] = fs_kernel_residual(*b.boundary, verification_points());
  v["recovered"] = s.recovered;
  v["recovery_residual"] = s.recovery_residual;
  v["gamma_residual"] = s.gamma_residual ? Json(*s.gamma_residual) : Json(nullptr);
  v["x_tilde_norm"] = s.x_tilde.norm();
  v["norm"] = h2_norm(s.f_min, cfg.tol);
  v["max_radial_error"] = s.max_radial_error;
  Json rows = Json::array();
  for (const RadialRow& row : s.radial) {
    rows.push_back(Json{{"node", row.node},
                        {"order", row.order},
                        {"target", to_json(row.target)},
                        {"extrapolated", to_json(row.extrapolated)},
                        {"last_sample", to_json(row.last_sample)},
                        {"error", row.error}});
  }
  v["radial"] = rows;

  // Radial limits are checked against the extrapolation tolerance of 1e-5.
  const double vt = cfg.verify_tol;
  const bool ok = s.max_radial_error <= std::max(vt, 1e-5) && (!s.gamma_residual || *s.gamma_residual <= vt);
  CommandResult r;
  r.exit_code = ok ? kExitOk : kExitViolated;
  Json& out = r.report;
  out["schema"] = 1;
  out["kind"] = b.kind;
  out["status"] = ok ? "verified" : "verification_failed";
  out["f"] = realization_to_json(s.f_min);
  out["budget"] = s.budget;
  out["margin"] = s.margin;
  out["uniqueness"] = to_string(s.uniqueness);
  out["case"] = to_string(s.case_tag);
  out["colligation"] = dims_json(s.colligation.dims);
  out["verification"] = v;
  out["tolerances"] = tolerances_json(cfg);
  out["spec"] = spec;
  return r;
}

CommandResult solve_intersection(const Json& spec, const Built& b, const RunConfig& cfg) {
  const IntersectionSpace is = intersection_space(*b.S, *b.B, cfg.tol);
  const Index q = b.S->output_dim();
  // Representative element: the sampled kernel column of largest norm.
  double best = -1.0;
  Realization f = Realization::constant(CMatrix::Zero(q, 1));
  for (const cplx zeta : is.samples) {
    for (Index k = 0; k < q; ++k) {
      const double nrm = is.kernel(zeta, zeta)(k, k).real();
      if (nrm > best + cfg.tol.psd_tol) {
        best = nrm;
        f = is.element(zeta, CVector::Unit(q, k));
      }
    }
  }
  const bool ok = intersection_verified(is, cfg.verify_tol);
  CommandResult r;
  r.exit_code = ok ? kExitOk : kExitViolated;
  Json& out = r.report;
  out["schema"] = 1;
  out["kind"] = b.kind;
  out["status"] = ok ? "verified" : "verification_failed";
  out["f"] = realization_to_json(f);
  out["colligation"] = dims_json(is.colligation.dims);
  out["verification"] = intersection_json(is);
  out["tolerances"] = tolerances_json(cfg);
  out["spec"] = spec;
  return r;
}

}  // namespace

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig cfg = base;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "config line " + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[tolerances]") throw InputError(where + ": unknown table " + line);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    double x = 0.0;
    std::size_t used = 0;
    try {
      x = std::stod(val, &used);
    } catch (const std::exception&) {
      throw InputError(where + ": value of " + key + " is not a number");
    }
    if (used != val.size()) throw InputError(where + ": value of " + key + " is not a number");
    if (key == "rank_tol") {
      cfg.tol.rank_tol = x;
    } else if (key == "psd_tol") {
      cfg.tol.psd_tol = x;
    } else if (key == "residual_tol") {
      cfg.tol.residual_tol = x;
    } else if (key == "verify_tol") {
      cfg.verify_tol = x;
    } else {
      throw InputError(where + ": unknown key " + key);
    }
  }
  try {
    cfg.tol.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (!(cfg.verify_tol > 0.0) || !std::isfinite(cfg.verify_tol)) throw InputError("config: verify_tol must be positive");
  return cfg;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

std::string dump_json(const Json& j) {
  std::string out;
  render(j, 0, out);
  return out + "\n";
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError(where + ": expected a complex number [re, im]");
}

CMatrix matrix_from_json(const Json& j, const std::string& where, Index rows_hint, Index cols_hint) {
  if (!j.is_array()) throw InputError(where + ": expected a matrix (array of rows)");
  // An empty array is either 0 x cols_hint or rows_hint x 0.
  if (j.empty()) return CMatrix(rows_hint, rows_hint == 0 ? cols_hint : 0);
  const Index rows = static_cast<Index>(j.size());
  if (!j[0].is_array()) throw InputError(where + "/0: expected a row");
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix M(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw InputError(rw + ": rows differ in length");
    for (Index c = 0; c < cols; ++c) M(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
  }
  if (!M.allFinite()) throw InputError(where + ": entries must be finite");
  return M;
}

CVector vector_from_json(const Json& j, const std::string& where) {
  const std::vector<cplx> v = complex_list(j, where);
  CVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = v[i];
  if (!out.allFinite()) throw InputError(where + ": entries must be finite");
  return out;
}

Json to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const CMatrix& M) {
  Json out = Json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(to_json(M(r, c)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json realization_to_json(const Realization& R) {
  return Json{{"A", to_json(R.A())}, {"B", to_json(R.B())}, {"C", to_json(R.C())}, {"D", to_json(R.D())}};
}

Realization realization_from_json(const Json& j, const std::string& where) {
  const CMatrix D = matrix_from_json(field(j, "D", where), path(where, "D"));
  const CMatrix A = matrix_from_json(field(j, "A", where), path(where, "A"));
  const Index n = A.rows();
  if (A.cols() != n) throw InputError(path(where, "A") + ": must be square");
  const CMatrix B = matrix_from_json(field(j, "B", where), path(where, "B"), n, D.cols());
  const CMatrix C = matrix_from_json(field(j, "C", where), path(where, "C"), D.rows(), n);
  const CMatrix Cs = (C.rows() == 0 && D.rows() > 0) ? CMatrix(D.rows(), n) : C;
  if (B.rows() != n || B.cols() != D.cols() || Cs.rows() != D.rows() || Cs.cols() != n) {
    throw InputError(where + ": realization blocks do not fit");
  }
  return Realization(A, B, Cs, D);
}

SchurFunction function_from_json(const Json& j, const std::string& where, const Tolerances& tol) {
  if (!j.is_object()) throw InputError(where + ": expected a function entry");
  if (j.contains("blaschke")) {
    const Json& b = j["blaschke"];
    const std::string w = path(where, "blaschke");
    const std::vector<cplx> zeros = complex_list(field(b, "zeros", w), path(w, "zeros"));
    const cplx phase = b.contains("phase") ? complex_from_json(b["phase"], path(w, "phase")) : cplx(1.0);
    try {
      return blaschke(zeros, phase, tol);
    } catch (const DomainError& e) {
      throw InputError(w + ": " + e.what());
    }
  }
  if (j.contains("realization")) {
    return certify_schur(realization_from_json(j["realization"], path(where, "realization")), Grid::polar(),
                         Grid::circle(), tol);
  }
  if (j.contains("constant")) {
    return certify_schur(Realization::constant(matrix_from_json(j["constant"], path(where, "constant"))), Grid::polar(),
                         Grid::circle(), tol);
  }
  throw InputError(where + ": expected \"realization\", \"blaschke\" or \"constant\"");
}

CommandResult check_problem(const Json& input, const RunConfig& cfg) {
  const Json& spec = unwrap_spec(input);
  const Tolerances& tol = cfg.tol;
  const Built b = build(spec, tol);
  CommandResult r;
  Json& out = r.report;
  out["schema"] = 1;
  out["kind"] = b.kind;
  bool ok = false;
  if (b.data) {
    const AdmissibilityReport adm = check_admissible(*b.data, *b.data->P, tol);
    const Solvability sv = solvability(*b.data->P, b.data->x, tol);
    out["admissibility"] = admissibility_json(adm);
    out["solvability"] = Json{{"solvable", sv.solvable}, {"margin", sv.margin}};
    out["gram_min_eigenvalue"] = psd_check(*b.data->P, tol).min_eigenvalue;
    out["summary"] = adm.admissible() ? summary(sv.solvable, sv.margin) : "not admissible";
    ok = adm.admissible() && sv.solvable;
  } else if (b.boundary) {
    const BoundaryMatrices m = build_boundary_data(*b.boundary);
    const CMatrix P = compute_P_boundary(*b.boundary, tol);
    const double stein = stein_residual(P, m.T, m.E, m.N);
    const bool stein_ok = stein <= tol.residual_tol * (1.0 + P.norm() + m.N.squaredNorm() + m.E.squaredNorm());
    const PsdVerdict pv = psd_check(P, tol);
    const Solvability sv = solvability(P, m.x, tol);
    out["admissibility"] = Json{{"stein_residual", stein},
                                {"stein_ok", stein_ok},
                                {"psd_ok", pv.is_psd},
                                {"gram_oracle_residual", (boundary_gram_oracle(*b.boundary, tol) - P).norm()},
                                {"fs_kernel_residual", fs_kernel_residual(*b.boundary, verification_points())},
                                {"admissible", stein_ok && pv.is_psd}};
    out["solvability"] = Json{{"solvable", sv.solvable}, {"margin", sv.margin}};
    out["gram_min_eigenvalue"] = pv.min_eigenvalue;
    out["summary"] = stein_ok && pv.is_psd ? summary(sv.solvable, sv.margin) : "not admissible";
    ok = stein_ok && pv.is_psd && sv.solvable;
  } else {
    const IntersectionSpace is = intersection_space(*b.S, *b.B, tol);
    out["intersection"] = intersection_json(is);
    out["colligation"] = dims_json(is.colligation.dims);
    ok = intersection_verified(is, cfg.verify_tol);
    out["summary"] = ok ? "verified" : "verification failed";
  }
  out["tolerances"] = tolerances_json(cfg);
  r.exit_code = ok ? kExitOk : kExitViolated;
  return r;
}

CommandResult solve_problem(const Json& input, const std::optional<Json>& param, const RunConfig& cfg) {
  const Json& spec = unwrap_spec(input);
  const Built b = build(spec, cfg.tol);
  if (param && !b.h2) throw InputError("--param is accepted for np, cf and h2 specs without S only");
  try {
    if (b.h2) return solve_h2(spec, b, param, cfg);
    if (b.data) return solve_aip(spec, b, cfg);
    if (b.boundary) return solve_boundary_kind(spec, b, cfg);
    return solve_intersection(spec, b, cfg);
  } catch (const BudgetExceededError&) {
    throw;
  } catch (const UnsolvableError& e) {
    throw UnsolvableError("solve: unsolvable, margin " + format_double(e.margin()), e.margin());
  }
}

std::string eval_result_csv(const Json& result, int n_r, int n_theta, double r_max) {
  if (!result.is_object()) throw InputError("result: expected a JSON object");
  const Json& schema = field(result, "schema", "result");
  if (!schema.is_number_integer() || schema.get<int>() != 1) throw InputError("result/schema: expected 1");
  const Realization f = realization_from_json(field(result, "f", "result"), "result/f");
  if (n_r < 1 || n_theta < 1) throw InputError("--grid: both counts must be positive");
  if (!(r_max > 0.0 && r_max < 1.0)) throw InputError("--rmax: must lie in (0, 1)");
  const Index q = f.output_dim();
  std::string out = "z_re,z_im";
  if (q == 1 && f.input_dim() == 1) {
    out += ",f_re,f_im,f_abs";
  } else {
    for (Index i = 0; i < q; ++i) {
      for (Index j = 0; j < f.input_dim(); ++j) {
        const std::string k = "f" + std::to_string(i) + (f.input_dim() > 1 ? "_" + std::to_string(j) : "");
        out += "," + k + "_re," + k + "_im," + k + "_abs";
      }
    }
  }
  out += "\n";
  for (const cplx z : Grid::polar(n_r, n_theta, r_max).points) {
    out += format_double(z.real()) + "," + format_double(z.imag());
    try {
      const CMatrix v = f.eval(z);
      for (Index i = 0; i < v.rows(); ++i) {
        for (Index j = 0; j < v.cols(); ++j) {
          out += "," + format_double(v(i, j).real()) + "," + format_double(v(i, j).imag()) + "," +
                 format_double(std::abs(v(i, j)));
        }
      }
    } catch (const PoleError&) {
      for (Index k = 0; k < q * f.input_dim(); ++k) out += ",pole,pole,pole";
    }
    out += "\n";
  }
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const IllPosedError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) {
    return kExitInput;
  }
  return kExitViolated;
}

}  // namespace dbrinterp
