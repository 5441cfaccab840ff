#include "polarfk/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "polarfk/errors.hpp"

namespace polarfk {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(path, key), "unknown key");
  }
}

const json& req(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(join(path, key), "missing field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vec2 as_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(as_number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Boundary as_boundary(const json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "dirichlet") return Boundary::Dirichlet;
  if (s == "neumann") return Boundary::Neumann;
  fail(path, "expected \"dirichlet\" or \"neumann\"");
}

Vec2 as_unit(const json& j, const std::string& path) {
  const Vec2 v = as_vec2(j, path);
  if (std::abs(norm(v) - 1.0) > 1e-12) fail(path, "must be a unit vector");
  return v;
}

json vec(Vec2 v) { return json::array({v.x, v.y}); }

ShapeSpec parse_shape(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) fail(path, "expected an object with exactly one shape key");
  const auto& [name, body] = *j.items().begin();
  const std::string p = join(path, name);
  ShapeSpec out;
  if (name == "disk") {
    only_keys(body, p, {"center", "radius"});
    out = Disk{as_vec2(req(body, p, "center"), p + ".center"),
               as_number(req(body, p, "radius"), p + ".radius")};
  } else if (name == "rectangle") {
    only_keys(body, p, {"lo", "hi"});
    out = Rectangle{as_vec2(req(body, p, "lo"), p + ".lo"), as_vec2(req(body, p, "hi"), p + ".hi")};
  } else if (name == "rhombus") {
    only_keys(body, p, {"center", "half_diagonal"});
    out = Rhombus{as_vec2(req(body, p, "center"), p + ".center"),
                  as_number(req(body, p, "half_diagonal"), p + ".half_diagonal")};
  } else if (name == "ellipse") {
    only_keys(body, p, {"center", "semi_axes", "angle"});
    Ellipse e{as_vec2(req(body, p, "center"), p + ".center"),
              as_vec2(req(body, p, "semi_axes"), p + ".semi_axes"), 0.0};
    if (body.contains("angle")) e.angle = as_number(body["angle"], p + ".angle");
    out = e;
  } else if (name == "polygon") {
    only_keys(body, p, {"vertices"});
    const json& vs = req(body, p, "vertices");
    if (!vs.is_array()) fail(p + ".vertices", "expected an array of points");
    Polygon poly;
    for (std::size_t k = 0; k < vs.size(); ++k)
      poly.vertices.push_back(as_vec2(vs[k], p + ".vertices[" + std::to_string(k) + "]"));
    out = poly;
  } else if (name == "half_plane") {
    only_keys(body, p, {"normal", "offset"});
    out = HalfPlane{as_vec2(req(body, p, "normal"), p + ".normal"),
                    as_number(req(body, p, "offset"), p + ".offset")};
  } else if (name == "union" || name == "intersection") {
    if (!body.is_array()) fail(p, "expected an array of shapes");
    std::vector<ShapeSpec> members;
    for (std::size_t k = 0; k < body.size(); ++k)
      members.push_back(parse_shape(body[k], p + "[" + std::to_string(k) + "]"));
    if (name == "union") out = Union{std::move(members)};
    else out = Intersection{std::move(members)};
  } else {
    fail(p, "unknown shape");
  }
  try {
    validate(out);
  } catch (const InvalidShape& e) {
    fail(p, e.what());
  }
  return out;
}

json emit_shape(const ShapeSpec& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Disk>)
          return {{"disk", {{"center", vec(v.center)}, {"radius", v.radius}}}};
        else if constexpr (std::is_same_v<T, Rectangle>)
          return {{"rectangle", {{"lo", vec(v.lo)}, {"hi", vec(v.hi)}}}};
        else if constexpr (std::is_same_v<T, Rhombus>)
          return {{"rhombus", {{"center", vec(v.center)}, {"half_diagonal", v.half_diagonal}}}};
        else if constexpr (std::is_same_v<T, Ellipse>)
          return {{"ellipse", {{"center", vec(v.center)}, {"semi_axes", vec(v.semi_axes)}, {"angle", v.angle}}}};
        else if constexpr (std::is_same_v<T, Polygon>) {
          json vs = json::array();
          for (Vec2 p : v.vertices) vs.push_back(vec(p));
          return {{"polygon", {{"vertices", vs}}}};
        } else if constexpr (std::is_same_v<T, HalfPlane>)
          return {{"half_plane", {{"normal", vec(v.normal)}, {"offset", v.offset}}}};
        else {
          json ms = json::array();
          for (const auto& m : v.members) ms.push_back(emit_shape(m));
          return {{std::is_same_v<T, Union> ? "union" : "intersection", ms}};
        }
      },
      s.kind);
}

DomainSpec parse_domain(const json& j, const std::string& path) {
  only_keys(j, path, {"outer", "bc_outer", "bc_inner", "obstacles", "allow_pure_neumann"});
  DomainSpec d;
  d.outer = parse_shape(req(j, path, "outer"), path + ".outer");
  if (j.contains("bc_outer")) d.bc_outer = as_boundary(j["bc_outer"], path + ".bc_outer");
  if (j.contains("bc_inner")) d.bc_inner = as_boundary(j["bc_inner"], path + ".bc_inner");
  if (j.contains("allow_pure_neumann"))
    d.allow_pure_neumann = as_bool(j["allow_pure_neumann"], path + ".allow_pure_neumann");
  if (j.contains("obstacles")) {
    const json& os = j["obstacles"];
    if (!os.is_array()) fail(path + ".obstacles", "expected an array");
    for (std::size_t k = 0; k < os.size(); ++k) {
      const std::string p = path + ".obstacles[" + std::to_string(k) + "]";
      only_keys(os[k], p, {"shape", "bc"});
      ObstacleSpec o{parse_shape(req(os[k], p, "shape"), p + ".shape"), std::nullopt};
      if (os[k].contains("bc")) o.bc = as_boundary(os[k]["bc"], p + ".bc");
      d.obstacles.push_back(std::move(o));
    }
  }
  return d;
}

json emit_domain(const DomainSpec& d) {
  json os = json::array();
  for (const auto& o : d.obstacles) {
    json e = {{"shape", emit_shape(o.shape)}};
    if (o.bc) e["bc"] = to_string(*o.bc);
    os.push_back(e);
  }
  return {{"outer", emit_shape(d.outer)},
          {"bc_outer", to_string(d.bc_outer)},
          {"bc_inner", to_string(d.bc_inner)},
          {"obstacles", os},
          {"allow_pure_neumann", d.allow_pure_neumann}};
}

std::size_t as_pool_size(const json& j, const std::string& path) {
  const long long v = as_integer(j, path);
  if (v < 1) fail(path, "must be at least 1");
  return static_cast<std::size_t>(v);
}

SolverConfig parse_solver(const json& j, const std::string& path) {
  only_keys(j, path, {"p", "outer_tol", "inner_tol", "max_outer", "max_inner", "smoothing_eps"});
  SolverConfig s;
  if (j.contains("p")) s.p = as_number(j["p"], path + ".p");
  if (j.contains("outer_tol")) s.outer_tol = as_number(j["outer_tol"], path + ".outer_tol");
  if (j.contains("inner_tol")) s.inner_tol = as_number(j["inner_tol"], path + ".inner_tol");
  if (j.contains("smoothing_eps")) s.smoothing_eps = as_number(j["smoothing_eps"], path + ".smoothing_eps");
  if (j.contains("max_outer")) s.max_outer = static_cast<int>(as_integer(j["max_outer"], path + ".max_outer"));
  if (j.contains("max_inner")) s.max_inner = static_cast<int>(as_integer(j["max_inner"], path + ".max_inner"));
  try {
    s.validate();
  } catch (const InvalidConfig& e) {
    throw ValidationError(e.what());
  }
  return s;
}

// Sections each kind consumes; every other section is rejected.
struct Needs {
  bool domain = false, polarizer = false, translate = false, rotate = false, annulus = false,
       symmetry = false;
};

Needs needs(ScenarioKind k) {
  Needs n;
  switch (k) {
    case ScenarioKind::Solve: n.domain = true; break;
    case ScenarioKind::FkCheck: n.domain = n.polarizer = true; break;
    case ScenarioKind::TranslateSweep: n.domain = n.translate = true; break;
    case ScenarioKind::RotateSweep: n.domain = n.rotate = true; break;
    case ScenarioKind::AnnulusStudy: n.annulus = true; break;
    case ScenarioKind::SymmetryCheck: n.domain = n.symmetry = true; break;
  }
  return n;
}

void check_section(const json& root, const char* key, bool needed, ScenarioKind kind) {
  const bool present = root.contains(key);
  if (needed && !present) fail(key, std::string("missing field (required by kind ") + to_string(kind) + ")");
  if (!needed && present) fail(key, std::string("not used by kind ") + to_string(kind));
}

}  // namespace

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Solve: return "solve";
    case ScenarioKind::FkCheck: return "fk-check";
    case ScenarioKind::TranslateSweep: return "translate-sweep";
    case ScenarioKind::RotateSweep: return "rotate-sweep";
    case ScenarioKind::AnnulusStudy: return "annulus-study";
    case ScenarioKind::SymmetryCheck: return "symmetry-check";
  }
  return "solve";
}

std::optional<ScenarioKind> kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::Solve, ScenarioKind::FkCheck, ScenarioKind::TranslateSweep,
                 ScenarioKind::RotateSweep, ScenarioKind::AnnulusStudy, ScenarioKind::SymmetryCheck})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

Grid GridSpec::to_grid() const { return Grid(origin, spacing, nx, ny); }

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  only_keys(root, "", {"kind", "grid", "domain", "polarizer", "translate", "rotate", "annulus",
                       "symmetry", "solver", "output_dir"});

  ScenarioConfig c;
  const std::string kind = as_string(req(root, "", "kind"), "kind");
  const auto k = kind_from_string(kind);
  if (!k) fail("kind", "unknown kind \"" + kind + "\"");
  c.kind = *k;

  const json& g = req(root, "", "grid");
  only_keys(g, "grid", {"origin", "spacing", "nx", "ny"});
  c.grid.origin = as_vec2(req(g, "grid", "origin"), "grid.origin");
  c.grid.spacing = as_number(req(g, "grid", "spacing"), "grid.spacing");
  c.grid.nx = static_cast<int>(as_integer(req(g, "grid", "nx"), "grid.nx"));
  c.grid.ny = static_cast<int>(as_integer(req(g, "grid", "ny"), "grid.ny"));
  try {
    (void)c.grid.to_grid();
  } catch (const InvalidConfig& e) {
    fail("grid", e.what());
  }

  const Needs n = needs(c.kind);
  check_section(root, "domain", n.domain, c.kind);
  check_section(root, "polarizer", n.polarizer, c.kind);
  check_section(root, "translate", n.translate, c.kind);
  check_section(root, "rotate", n.rotate, c.kind);
  check_section(root, "annulus", n.annulus, c.kind);
  check_section(root, "symmetry", n.symmetry, c.kind);

  if (n.domain) c.domain = parse_domain(root["domain"], "domain");
  if (n.polarizer) {
    const json& j = root["polarizer"];
    only_keys(j, "polarizer", {"normal", "offset"});
    c.polarizer = PolarizerSpec{as_unit(req(j, "polarizer", "normal"), "polarizer.normal"),
                                as_number(req(j, "polarizer", "offset"), "polarizer.offset")};
  }
  if (n.translate) {
    if (!c.domain->obstacles.empty())
      fail("domain.obstacles", "translate-sweep takes its obstacle from the translate section");
    const json& j = root["translate"];
    only_keys(j, "translate", {"obstacle", "direction", "s_values", "bc_obstacle"});
    TranslateSpec t;
    t.obstacle = parse_shape(req(j, "translate", "obstacle"), "translate.obstacle");
    if (j.contains("direction")) t.direction = as_unit(j["direction"], "translate.direction");
    t.s_values = as_numbers(req(j, "translate", "s_values"), "translate.s_values");
    if (j.contains("bc_obstacle")) t.bc_obstacle = as_boundary(j["bc_obstacle"], "translate.bc_obstacle");
    c.translate = std::move(t);
  }
  if (n.rotate) {
    const json& j = root["rotate"];
    only_keys(j, "rotate", {"obstacle", "center", "eta", "s_values", "clockwise", "pool_size"});
    RotateSpec r;
    r.obstacle = parse_shape(req(j, "rotate", "obstacle"), "rotate.obstacle");
    r.center = as_vec2(req(j, "rotate", "center"), "rotate.center");
    if (j.contains("eta")) r.eta = as_unit(j["eta"], "rotate.eta");
    r.s_values = as_numbers(req(j, "rotate", "s_values"), "rotate.s_values");
    for (double s : r.s_values)
      if (s < -1.0 || s > 1.0) fail("rotate.s_values", "values must lie in [-1, 1]");
    if (j.contains("clockwise")) r.clockwise = as_bool(j["clockwise"], "rotate.clockwise");
    if (j.contains("pool_size")) r.pool_size = as_pool_size(j["pool_size"], "rotate.pool_size");
    c.rotate = std::move(r);
  }
  if (n.annulus) {
    const json& j = root["annulus"];
    only_keys(j, "annulus", {"R", "r", "alpha", "rho"});
    AnnulusParams a;
    a.R = as_number(req(j, "annulus", "R"), "annulus.R");
    a.r = as_number(req(j, "annulus", "r"), "annulus.r");
    a.alpha = as_number(req(j, "annulus", "alpha"), "annulus.alpha");
    a.rho = as_number(req(j, "annulus", "rho"), "annulus.rho");
    if (!(a.r > 0.0 && a.r < a.R)) fail("annulus", "need 0 < r < R");
    if (!(a.alpha >= 0.0 && a.alpha < a.R - a.r)) fail("annulus", "need 0 <= alpha < R - r");
    if (!(a.rho > 0.0)) fail("annulus.rho", "must be positive");
    c.annulus = a;
  }
  if (n.symmetry) {
    const json& j = root["symmetry"];
    only_keys(j, "symmetry", {"center", "eta", "pool_size"});
    SymmetrySpec s;
    s.center = as_vec2(req(j, "symmetry", "center"), "symmetry.center");
    if (j.contains("eta")) s.eta = as_unit(j["eta"], "symmetry.eta");
    if (j.contains("pool_size")) s.pool_size = as_pool_size(j["pool_size"], "symmetry.pool_size");
    c.symmetry = s;
  }
  if (root.contains("solver")) c.solver = parse_solver(root["solver"], "solver");
  if (root.contains("output_dir")) {
    c.output_dir = as_string(root["output_dir"], "output_dir");
    if (c.output_dir.empty()) fail("output_dir", "must not be empty");
  }
  return c;
}

std::string emit_config(const ScenarioConfig& c) {
  json root;
  root["kind"] = to_string(c.kind);
  root["grid"] = {{"origin", vec(c.grid.origin)},
                  {"spacing", c.grid.spacing},
                  {"nx", c.grid.nx},
                  {"ny", c.grid.ny}};
  if (c.domain) root["domain"] = emit_domain(*c.domain);
  if (c.polarizer) root["polarizer"] = {{"normal", vec(c.polarizer->normal)}, {"offset", c.polarizer->offset}};
  if (c.translate)
    root["translate"] = {{"obstacle", emit_shape(c.translate->obstacle)},
                         {"direction", vec(c.translate->direction)},
                         {"s_values", c.translate->s_values},
                         {"bc_obstacle", to_string(c.translate->bc_obstacle)}};
  if (c.rotate)
    root["rotate"] = {{"obstacle", emit_shape(c.rotate->obstacle)},
                      {"center", vec(c.rotate->center)},
                      {"eta", vec(c.rotate->eta)},
                      {"s_values", c.rotate->s_values},
                      {"clockwise", c.rotate->clockwise},
                      {"pool_size", c.rotate->pool_size}};
  if (c.annulus)
    root["annulus"] = {{"R", c.annulus->R}, {"r", c.annulus->r}, {"alpha", c.annulus->alpha}, {"rho", c.annulus->rho}};
  if (c.symmetry)
    root["symmetry"] = {{"center", vec(c.symmetry->center)},
                        {"eta", vec(c.symmetry->eta)},
                        {"pool_size", c.symmetry->pool_size}};
  root["solver"] = {{"p", c.solver.p},
                    {"outer_tol", c.solver.outer_tol},
                    {"inner_tol", c.solver.inner_tol},
                    {"max_outer", c.solver.max_outer},
                    {"max_inner", c.solver.max_inner},
                    {"smoothing_eps", c.solver.smoothing_eps}};
  root["output_dir"] = c.output_dir;
  return root.dump(2) + "\n";
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GridSpec regrid(const GridSpec& g, int n) {
  if (n < 1) throw InvalidConfig("grid-n must be positive");
  const double lo_x = std::floor(g.origin.x * n + 1e-9), lo_y = std::floor(g.origin.y * n + 1e-9);
  const double hi_x = std::ceil((g.origin.x + g.nx * g.spacing) * n - 1e-9);
  const double hi_y = std::ceil((g.origin.y + g.ny * g.spacing) * n - 1e-9);
  GridSpec out;
  out.spacing = 1.0 / n;
  out.origin = {lo_x / n, lo_y / n};
  out.nx = static_cast<int>(hi_x - lo_x);
  out.ny = static_cast<int>(hi_y - lo_y);
  return out;
}

}  // namespace polarfk
