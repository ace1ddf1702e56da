#include "hamel/config.hpp"

#include <cmath>
#include <fstream>

namespace hamel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

const Json& field(const Json& j, const std::string& base,
                  const std::string& key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(join(base, key), "missing required field");
  return j.at(key);
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

double number_or(const Json& j, const std::string& base,
                 const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j.at(key), join(base, key));
}

int integer_or(const Json& j, const std::string& base, const std::string& key,
               int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(base, key), "expected an integer");
  return v.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

VecX vector(const Json& j, const std::string& path, int expect = -1) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  VecX v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<int>(i)] = number(j.at(i), path + "[" + std::to_string(i) + "]");
  if (expect >= 0 && v.size() != expect)
    throw ConfigError(path, "expected " + std::to_string(expect) +
                                " entries, got " + std::to_string(v.size()));
  return v;
}

MatX matrix(const Json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of rows");
  MatX m(rows, cols);
  if (static_cast<int>(j.size()) != rows)
    throw ConfigError(path, "expected " + std::to_string(rows) + " rows");
  for (int r = 0; r < rows; ++r) {
    const VecX row = vector(j.at(r), path + "[" + std::to_string(r) + "]", cols);
    m.row(r) = row.transpose();
  }
  return m;
}

/// 3x3 inertia given either as a diagonal triple or a full matrix.
Mat3 inertia3(const Json& j, const std::string& path) {
  if (j.is_array() && !j.empty() && j.at(0).is_number())
    return Vec3(vector(j, path, 3)).asDiagonal();
  return matrix(j, path, 3, 3);
}

GroupTag parse_group(const std::string& s, const std::string& path) {
  if (s == "SO3") return GroupTag::SO3;
  if (s == "SE3") return GroupTag::SE3;
  if (s == "SO3xR3") return GroupTag::SO3xR3;
  throw ConfigError(path, "unknown group '" + s + "'");
}

Trivialization parse_triv(const std::string& s, const std::string& path) {
  if (s == "left") return Trivialization::Left;
  if (s == "right") return Trivialization::Right;
  throw ConfigError(path, "unknown trivialization '" + s + "'");
}

/// Polynomial add-on for one matrix entry: sum of c * prod r^p terms.
struct PolyEntry {
  int i = 0, j = 0;
  std::vector<std::pair<double, std::vector<int>>> terms;
};

std::vector<PolyEntry> parse_poly(const Json& j, const std::string& path,
                                  int rows, int cols, int d) {
  std::vector<PolyEntry> out;
  if (!j.is_array()) throw ConfigError(path, "expected an array of entries");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    const Json& e = j.at(k);
    PolyEntry pe;
    pe.i = integer_or(e, p, "i", -1);
    pe.j = integer_or(e, p, "j", -1);
    if (pe.i < 0 || pe.i >= rows || pe.j < 0 || pe.j >= cols)
      throw ConfigError(p, "entry index out of range");
    const Json& terms = field(e, p, "terms");
    if (!terms.is_array()) throw ConfigError(join(p, "terms"), "expected array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = join(p, "terms") + "[" + std::to_string(t) + "]";
      const Json& term = terms.at(t);
      const double c = number(field(term, tp, "c"), join(tp, "c"));
      const VecX pw = vector(field(term, tp, "p"), join(tp, "p"), d);
      std::vector<int> powers(d);
      for (int q = 0; q < d; ++q) powers[q] = static_cast<int>(pw[q]);
      pe.terms.emplace_back(c, powers);
    }
    out.push_back(std::move(pe));
  }
  return out;
}

double poly_eval(const PolyEntry& pe, const VecX& r) {
  double v = 0.0;
  for (const auto& [c, powers] : pe.terms) {
    double term = c;
    for (std::size_t q = 0; q < powers.size(); ++q)
      term *= std::pow(r[static_cast<int>(q)], powers[q]);
    v += term;
  }
  return v;
}

std::function<MatX(const VecX&)> tabulated_block(
    MatX base, std::vector<PolyEntry> poly, bool symmetric) {
  if (poly.empty())
    return [base = std::move(base)](const VecX&) { return base; };
  return [base = std::move(base), poly = std::move(poly),
          symmetric](const VecX& r) {
    MatX m = base;
    for (const auto& pe : poly) {
      const double v = poly_eval(pe, r);
      m(pe.i, pe.j) += v;
      if (symmetric && pe.i != pe.j) m(pe.j, pe.i) += v;
    }
    return m;
  };
}

SatelliteParams parse_satellite_params(const Json& params,
                                       const std::string& base) {
  SatelliteParams p;
  p.body_mass = number_or(params, base, "body_mass", p.body_mass);
  if (params.contains("body_inertia"))
    p.body_inertia = inertia3(params.at("body_inertia"), join(base, "body_inertia"));
  if (params.contains("body_com"))
    p.body_com = Vec3(vector(params.at("body_com"), join(base, "body_com"), 3));
  auto triple = [&](const char* key, std::array<double, 3>& out) {
    if (!params.contains(key)) return;
    const VecX v = vector(params.at(key), join(base, key), 3);
    for (int i = 0; i < 3; ++i) out[i] = v[i];
  };
  triple("rotor_mass", p.rotor_mass);
  triple("rotor_axial", p.rotor_axial);
  triple("rotor_transverse", p.rotor_transverse);
  if (params.contains("rotor_com")) {
    const std::string rp = join(base, "rotor_com");
    const Json& rc = params.at("rotor_com");
    if (!rc.is_array() || rc.size() != 3)
      throw ConfigError(rp, "expected three offset vectors");
    for (int i = 0; i < 3; ++i)
      p.rotor_com[i] =
          Vec3(vector(rc.at(i), rp + "[" + std::to_string(i) + "]", 3));
  }
  return p;
}

LoadedModel load_generic(const Json& g, const std::string& base) {
  const GroupTag tag =
      parse_group(text(field(g, base, "group"), join(base, "group")),
                  join(base, "group"));
  const Trivialization triv = parse_triv(
      text(field(g, base, "trivialization"), join(base, "trivialization")),
      join(base, "trivialization"));
  const int d = integer_or(g, base, "shape_dim", -1);
  if (d < 0) throw ConfigError(join(base, "shape_dim"), "missing required field");
  const int m = algebra_dim(tag);

  MatX L = matrix(field(g, base, "L"), join(base, "L"), m, m);
  MatX K = g.contains("K") ? matrix(g.at("K"), join(base, "K"), m, d)
                           : MatX::Zero(m, d);
  MatX S = d > 0 ? matrix(field(g, base, "S"), join(base, "S"), d, d)
                 : MatX::Zero(0, 0);

  auto poly_of = [&](const char* key, int rows, int cols) {
    return g.contains(key)
               ? parse_poly(g.at(key), join(base, key), rows, cols, d)
               : std::vector<PolyEntry>{};
  };

  LoadedModel out;
  out.name = "generic";
  out.system.tag = tag;
  out.system.triv = triv;
  out.system.delta_bar = d;
  out.system.L = tabulated_block(std::move(L), poly_of("L_poly", m, m), true);
  out.system.K = tabulated_block(std::move(K), poly_of("K_poly", m, d), false);
  out.system.S = tabulated_block(std::move(S), poly_of("S_poly", d, d), true);

  if (g.contains("connection")) {
    MatX A = matrix(g.at("connection"), join(base, "connection"), m, d);
    auto poly = poly_of("connection_poly", m, d);
    out.connection = LocalConnection(
        tag, triv, d, tabulated_block(std::move(A), std::move(poly), false));
  }
  return out;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError(path, std::string("parse error: ") + e.what());
  }
  return j;
}

LoadedModel load_model(const Json& config) {
  const Json& model = field(config, "", "model");
  if (model.contains("generic")) return load_generic(model.at("generic"), "model.generic");

  const std::string preset =
      text(field(model, "model", "preset"), "model.preset");
  const Json params = model.contains("params") ? model.at("params") : Json::object();
  const std::string base = "model.params";

  LoadedModel out;
  out.name = preset;
  if (preset == "rolling_ball") {
    BallParams p;
    p.mass = number(field(params, base, "mass"), join(base, "mass"));
    p.radius = number(field(params, base, "radius"), join(base, "radius"));
    if (params.contains("inertia"))
      p.inertia = inertia3(params.at("inertia"), join(base, "inertia"));
    else
      p.inertia = BallParams::homogeneous(p.mass, p.radius).inertia;
    auto model_built = rolling_ball(p);
    out.system = std::move(model_built.system);
    out.connection = std::move(model_built.connection);
  } else if (preset == "satellite_so3r3") {
    out.system = satellite_so3r3(parse_satellite_params(params, base));
  } else if (preset == "satellite_se3") {
    out.system = satellite_se3(parse_satellite_params(params, base));
  } else if (preset == "free_rigid_body") {
    const GroupTag tag =
        params.contains("group")
            ? parse_group(text(params.at("group"), join(base, "group")),
                          join(base, "group"))
            : GroupTag::SO3;
    Mat3 inertia = Vec3(1.0, 1.2, 1.4).asDiagonal();
    if (params.contains("inertia"))
      inertia = inertia3(params.at("inertia"), join(base, "inertia"));
    const double mass = number_or(params, base, "mass", 1.0);
    Vec3 com = Vec3::Zero();
    if (params.contains("com"))
      com = Vec3(vector(params.at("com"), join(base, "com"), 3));
    out.system = free_rigid_body(tag, inertia, mass, com);
  } else {
    throw ConfigError("model.preset", "unknown preset '" + preset + "'");
  }
  return out;
}

Json serialize_model(const MechanicalSystem& system,
                     const LocalConnection* connection) {
  const int m = system.m_bar();
  const int d = system.delta_bar;
  const VecX r0 = VecX::Zero(d);

  auto to_rows = [](const MatX& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };

  Json g;
  g["group"] = to_string(system.tag);
  g["trivialization"] = to_string(system.triv);
  g["shape_dim"] = d;
  g["L"] = to_rows(system.eval_L(r0));
  if (d > 0) {
    g["K"] = to_rows(system.eval_K(r0));
    g["S"] = to_rows(system.eval_S(r0));
  } else {
    g["S"] = Json::array();
  }
  if (connection) g["connection"] = to_rows(connection->eval(r0));

  Json doc;
  doc["model"]["generic"] = g;
  return doc;
}

ShapePath parse_path(const Json& path_section, int delta_bar) {
  const std::string base = "path";
  const std::string type =
      text(field(path_section, base, "type"), join(base, "type"));
  const double T = number_or(path_section, base, "period", 1.0);
  if (!(T > 0.0)) throw ConfigError(join(base, "period"), "must be positive");

  ShapePath path;
  path.period = T;

  if (type == "harmonic") {
    VecX constant = VecX::Zero(delta_bar);
    if (path_section.contains("constant"))
      constant = vector(path_section.at("constant"), join(base, "constant"),
                        delta_bar);
    auto coeffs = [&](const char* key) {
      std::vector<VecX> rows(delta_bar, VecX::Zero(0));
      if (!path_section.contains(key)) return rows;
      const Json& j = path_section.at(key);
      const std::string p = join(base, key);
      if (!j.is_array() || static_cast<int>(j.size()) != delta_bar)
        throw ConfigError(p, "expected one coefficient row per shape coordinate");
      for (int i = 0; i < delta_bar; ++i)
        rows[i] = vector(j.at(i), p + "[" + std::to_string(i) + "]");
      return rows;
    };
    const auto ck = coeffs("cos");
    const auto sk = coeffs("sin");
    path.r = [constant, ck, sk, T, delta_bar](double t) {
      VecX r = constant;
      for (int i = 0; i < delta_bar; ++i) {
        for (int k = 0; k < ck[i].size(); ++k)
          r[i] += ck[i][k] * std::cos(kTwoPi * (k + 1) * t / T);
        for (int k = 0; k < sk[i].size(); ++k)
          r[i] += sk[i][k] * std::sin(kTwoPi * (k + 1) * t / T);
      }
      return r;
    };
    path.rdot = [ck, sk, T, delta_bar](double t) {
      VecX v = VecX::Zero(delta_bar);
      for (int i = 0; i < delta_bar; ++i) {
        for (int k = 0; k < ck[i].size(); ++k)
          v[i] -= ck[i][k] * (kTwoPi * (k + 1) / T) *
                  std::sin(kTwoPi * (k + 1) * t / T);
        for (int k = 0; k < sk[i].size(); ++k)
          v[i] += sk[i][k] * (kTwoPi * (k + 1) / T) *
                  std::cos(kTwoPi * (k + 1) * t / T);
      }
      return v;
    };
    return path;
  }

  if (type == "square") {
    if (delta_bar != 2)
      throw ConfigError(join(base, "type"),
                        "square paths need a 2-d shape space");
    const double side = number(field(path_section, base, "side"),
                               join(base, "side"));
    VecX origin = VecX::Zero(2);
    if (path_section.contains("origin"))
      origin = vector(path_section.at("origin"), join(base, "origin"), 2);
    const bool clockwise =
        path_section.contains("clockwise") && path_section.at("clockwise").is_boolean()
            ? path_section.at("clockwise").get<bool>()
            : false;
    const double speed = 4.0 * side / T;
    path.r = [origin, side, T, clockwise](double t) {
      double u = std::fmod(t, T);
      if (u < 0.0) u += T;
      const double s = 4.0 * u / T;
      const int edge = std::min(3, static_cast<int>(s));
      const double f = (s - edge) * side;
      VecX r = origin;
      switch (edge) {
        case 0: r[0] += f; break;
        case 1: r[0] += side; r[1] += f; break;
        case 2: r[0] += side - f; r[1] += side; break;
        case 3: r[1] += side - f; break;
      }
      if (clockwise) std::swap(r[0], r[1]);
      return r;
    };
    path.rdot = [speed, T, clockwise](double t) {
      double u = std::fmod(t, T);
      if (u < 0.0) u += T;
      const int edge = std::min(3, static_cast<int>(4.0 * u / T));
      VecX v = VecX::Zero(2);
      switch (edge) {
        case 0: v[0] = speed; break;
        case 1: v[1] = speed; break;
        case 2: v[0] = -speed; break;
        case 3: v[1] = -speed; break;
      }
      if (clockwise) std::swap(v[0], v[1]);
      return v;
    };
    return path;
  }

  throw ConfigError(join(base, "type"), "unknown path type '" + type + "'");
}

RunConfig parse_run_config(const Json& config) {
  RunConfig rc;
  rc.model = load_model(config);
  const int m = rc.model.system.m_bar();
  const int d = rc.model.system.delta_bar;

  const Json run = config.contains("run") ? config.at("run") : Json::object();
  const std::string base = "run";

  if (run.contains("formulation")) {
    const std::string f = text(run.at("formulation"), join(base, "formulation"));
    if (f == "euler-poincare") rc.formulation = Formulation::EulerPoincare;
    else if (f == "lagrange-poincare") rc.formulation = Formulation::LagrangePoincare;
    else if (f == "constrained") rc.formulation = Formulation::Constrained;
    else if (f == "momentum-conserved") rc.formulation = Formulation::MomentumConserved;
    else throw ConfigError(join(base, "formulation"), "unknown formulation '" + f + "'");
  }

  rc.t_end = number_or(run, base, "t_end", 1.0);
  rc.dt = number_or(run, base, "dt", 1e-3);
  if (!(rc.dt > 0.0)) throw ConfigError(join(base, "dt"), "dt must be positive");
  if (rc.t_end < 0.0) throw ConfigError(join(base, "t_end"), "t_end must be non-negative");

  rc.initial = BundleState::make(rc.model.system);
  if (run.contains("initial")) {
    const Json& init = run.at("initial");
    const std::string ib = join(base, "initial");
    if (init.contains("xi"))
      rc.initial.xi = AlgebraVector(
          rc.model.system.tag, vector(init.at("xi"), join(ib, "xi"), m));
    if (init.contains("r"))
      rc.initial.r = vector(init.at("r"), join(ib, "r"), d);
    if (init.contains("rdot"))
      rc.initial.rdot = vector(init.at("rdot"), join(ib, "rdot"), d);
    if (init.contains("g")) {
      const Json& gj = init.at("g");
      const std::string gb = join(ib, "g");
      GroupElement g = GroupElement::identity(rc.model.system.tag);
      if (gj.contains("rotation")) {
        const VecX rot = vector(gj.at("rotation"), join(gb, "rotation"), 9);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) g.rotation(i, j) = rot[3 * i + j];
        if (g.orthonormality_defect() > 1e-6)
          throw ConfigError(join(gb, "rotation"), "matrix is not a rotation");
        g = orthonormalized(g);
      }
      if (gj.contains("translation"))
        g.translation =
            Vec3(vector(gj.at("translation"), join(gb, "translation"), 3));
      rc.initial.g = g;
    }
  }

  if (config.contains("path"))
    rc.path = parse_path(config.at("path"), d);
  rc.cycles = integer_or(config.contains("path") ? config.at("path") : Json::object(),
                         "path", "cycles", 1);
  if (rc.cycles < 1) throw ConfigError("path.cycles", "must be >= 1");

  if (config.contains("momentum"))
    rc.momentum = vector(config.at("momentum"), "momentum", m);
  return rc;
}

}  // namespace hamel
