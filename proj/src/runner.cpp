#include "polarfk/runner.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polarfk/errors.hpp"
#include "polarfk/io.hpp"
#include "polarfk/mesh.hpp"

namespace polarfk {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

json sweep_json(const SweepResult& s) {
  std::size_t unconverged = 0;
  for (const auto& p : s.points) unconverged += p.converged ? 0 : 1;
  return {{"param_name", s.param_name},
          {"points", s.points.size()},
          {"unconverged", unconverged},
          {"direction", to_string(s.direction)},
          {"min_margin", s.min_margin},
          {"notes", s.notes}};
}

std::string csv(const std::vector<SweepPoint>& pts) {
  std::ostringstream ss;
  write_sweep_csv(pts, ss);
  return ss.str();
}

std::string pgm(const GridFunction& u) {
  std::ostringstream ss;
  write_pgm(u, ss);
  return ss.str();
}

std::size_t count_unconverged(const std::vector<SweepPoint>& pts) {
  std::size_t n = 0;
  for (const auto& p : pts) n += p.converged ? 0 : 1;
  return n;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  void text(const std::string& name, const std::string& content) {
    write_file((dir_ / name).string(), content);
  }
  void verdict(const json& j) { text("verdict.json", j.dump(2) + "\n"); }
  void plot(const SweepResult& s) {
    if (s.points.size() >= 2) emit_plot(s, (dir_ / "sweep.svg").string());
  }

 private:
  fs::path dir_;
};

// Returns the number of unconverged solves.
std::size_t execute(const ScenarioConfig& c, Outputs& out) {
  const Grid grid = c.grid.to_grid();
  const SolverConfig& cfg = c.solver;
  json v;
  v["kind"] = to_string(c.kind);
  v["p"] = cfg.p;
  std::size_t bad = 0;

  switch (c.kind) {
    case ScenarioKind::Solve: {
      const PuncturedDomain d = build_domain(*c.domain, grid);
      const TriMesh m = triangulate(d);
      const EigenResult r = solve(m, cfg);
      const SweepPoint pt{0.0, r.lambda, r.converged, r.outer_iters, r.residual};
      out.text("result.csv", csv({pt}));
      v["lambda"] = r.lambda;
      v["converged"] = r.converged;
      v["outer_iters"] = r.outer_iters;
      v["residual"] = r.residual;
      v["free_nodes"] = m.free_count();
      v["dirichlet_nodes"] = m.dirichlet_count();
      out.text("eigenfunction.pgm", pgm(r.u));
      bad = r.converged ? 0 : 1;
      break;
    }
    case ScenarioKind::FkCheck: {
      const PuncturedDomain d = build_domain(*c.domain, grid);
      std::optional<GridFunction> u;
      const FkVerdict f = fk_check(d, Polarizer(c.polarizer->normal, c.polarizer->offset), cfg, &u);
      out.text("result.csv", csv({f.before, f.after}));
      v["lambda_before"] = f.lambda_before;
      v["lambda_after"] = f.lambda_after;
      v["relation"] = to_string(f.relation);
      v["strict_case"] = to_string(f.strict_case);
      v["gap"] = f.gap;
      v["tolerance"] = f.tolerance;
      v["converged"] = f.converged;
      out.text("eigenfunction.pgm", pgm(*u));
      bad = count_unconverged({f.before, f.after});
      break;
    }
    case ScenarioKind::TranslateSweep: {
      const TranslateScenario sc{grid,
                                 c.domain->outer,
                                 c.translate->obstacle,
                                 c.translate->direction,
                                 c.translate->s_values,
                                 c.domain->bc_outer,
                                 c.translate->bc_obstacle};
      const SweepResult s = translate_sweep(sc, cfg);
      out.text("result.csv", csv(s.points));
      v["sweep"] = sweep_json(s);
      out.plot(s);
      bad = count_unconverged(s.points);
      break;
    }
    case ScenarioKind::RotateSweep: {
      const RotateScenario sc{grid,
                              *c.domain,
                              c.rotate->obstacle,
                              Boundary::Dirichlet,
                              c.rotate->center,
                              c.rotate->eta,
                              c.rotate->s_values,
                              c.rotate->clockwise,
                              c.rotate->pool_size};
      const RotateReport r = rotate_sweep(sc, cfg);
      out.text("result.csv", csv(r.sweep.points));
      v["sweep"] = sweep_json(r.sweep);
      v["radial"] = r.radial;
      v["expected"] = to_string(r.expected);
      out.plot(r.sweep);
      bad = count_unconverged(r.sweep.points);
      break;
    }
    case ScenarioKind::AnnulusStudy: {
      const AnnulusReport r = annulus_study(*c.annulus, grid, cfg);
      out.text("result.csv", csv(r.line.points));
      out.text("segment.csv", csv(r.segment.points));
      v["line"] = sweep_json(r.line);
      v["segment"] = sweep_json(r.segment);
      v["segment_z"] = r.segment_z;
      v["segment_on_axis"] = r.segment_on_axis;
      json circles = json::array();
      for (std::size_t k = 0; k < r.circles.size(); ++k) {
        const auto& cs = r.circles[k];
        const std::string name = "circle_" + std::to_string(k) + ".csv";
        out.text(name, csv(cs.sweep.points));
        json j = sweep_json(cs.sweep);
        j["t"] = cs.t;
        j["beta"] = cs.beta;
        j["file"] = name;
        circles.push_back(j);
        bad += count_unconverged(cs.sweep.points);
      }
      v["circles"] = circles;
      v["r_bar"] = r.r_bar;
      v["argmax_s"] = r.argmax_s;
      v["argmax_lambda"] = r.argmax_lambda;
      v["local_maxima"] = r.local_maxima;
      v["unimodal"] = r.unimodal;
      v["argmax_interior"] = r.argmax_interior;
      v["notes"] = r.notes;
      out.plot(r.line);
      bad += count_unconverged(r.line.points) + count_unconverged(r.segment.points);
      break;
    }
    case ScenarioKind::SymmetryCheck: {
      const PuncturedDomain d = build_domain(*c.domain, grid);
      std::optional<GridFunction> u;
      const SymmetryReport r =
          symmetry_check(d, c.symmetry->center, c.symmetry->eta, cfg, c.symmetry->pool_size, &u);
      out.text("result.csv", csv({SweepPoint{0.0, r.lambda, r.converged, r.outer_iters, r.residual}}));
      v["lambda"] = r.lambda;
      v["converged"] = r.converged;
      v["max_defect"] = r.max_defect;
      json pool = json::array();
      for (std::size_t k = 0; k < r.pool.size(); ++k)
        pool.push_back({{"normal", {r.pool[k].normal().x, r.pool[k].normal().y}},
                        {"offset", r.pool[k].offset()},
                        {"defect", r.defects[k]}});
      v["pool"] = pool;
      out.text("eigenfunction.pgm", pgm(*u));
      bad = r.converged ? 0 : 1;
      break;
    }
  }
  v["all_converged"] = bad == 0;
  out.verdict(v);
  return bad;
}

}  // namespace

ScenarioConfig apply_overrides(ScenarioConfig c, const RunOverrides& o) {
  if (o.out_dir) {
    if (o.out_dir->empty()) throw ValidationError("--out: must not be empty");
    c.output_dir = *o.out_dir;
  }
  if (o.p) {
    c.solver.p = *o.p;
    try {
      c.solver.validate();
    } catch (const InvalidConfig& e) {
      throw ValidationError(std::string("--p: ") + e.what());
    }
  }
  if (o.grid_n) {
    if (*o.grid_n < 1) throw ValidationError("--grid-n: must be positive");
    c.grid = regrid(c.grid, *o.grid_n);
  }
  return c;
}

int run(const ScenarioConfig& c, std::ostream& err) {
  std::ofstream log;
  const auto note = [&](const std::string& line) {
    if (log) log << timestamp() << ' ' << line << '\n';
  };
  try {
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec) throw IoError("cannot create " + c.output_dir + ": " + ec.message());
    log.open(fs::path(c.output_dir) / "run.log", std::ios::app);
    note(std::string("start ") + to_string(c.kind));
    Outputs out{fs::path(c.output_dir)};
    const std::size_t bad = execute(c, out);
    if (bad > 0) {
      const std::string msg = "NonConvergence: " + std::to_string(bad) + " solve(s) did not converge";
      err << "polarfk: " << msg << '\n';
      note(msg);
      return kExitNonConvergence;
    }
    note("done");
    return kExitOk;
  } catch (const Error& e) {
    const std::string msg = std::string(e.kind()) + ": " + e.what();
    err << "polarfk: " << msg << '\n';
    note(msg);
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const AssumptionViolated*>(&e) || dynamic_cast<const NotAdmissible*>(&e) ||
        dynamic_cast<const SymmetryHypothesisViolated*>(&e))
      return kExitAssumption;
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "polarfk: error: " << e.what() << '\n';
    note(std::string("error: ") + e.what());
    return kExitConfig;
  }
}

}  // namespace polarfk
