#include "polarfk/eigensolve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <random>

#include "polarfk/errors.hpp"

namespace polarfk {

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Cg = Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                                    Eigen::IncompleteCholesky<double>>;

// Triangle data in free-index form with slots into a fixed sparse pattern.
struct Assembly {
  struct Tri {
    std::array<int, 3> free{};
    std::array<Vec2, 3> grad{};
    double area = 0.0;
    std::array<int, 9> slot{};  // value index of (a, b), -1 when pinned
  };
  std::vector<Tri> tris;
  Vec weights;
  SpMat pattern;
};

Assembly build_assembly(const TriMesh& m) {
  Assembly a;
  const auto n = static_cast<Eigen::Index>(m.free_count());
  a.weights.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) a.weights[k] = m.weights()[m.free_nodes()[k]];
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.triangles().size() * 9);
  for (const Triangle& t : m.triangles()) {
    Assembly::Tri q;
    for (int k = 0; k < 3; ++k) q.free[k] = m.free_index(t.nodes[k]);
    q.grad = t.grad;
    q.area = t.area;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (q.free[r] >= 0 && q.free[c] >= 0) trip.emplace_back(q.free[r], q.free[c], 0.0);
    a.tris.push_back(q);
  }
  a.pattern.resize(n, n);
  a.pattern.setFromTriplets(trip.begin(), trip.end());
  a.pattern.makeCompressed();
  for (auto& q : a.tris)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        int& s = q.slot[r * 3 + c];
        s = -1;
        if (q.free[r] < 0 || q.free[c] < 0) continue;
        const int col = q.free[c];
        const int* inner = a.pattern.innerIndexPtr();
        const int lo = a.pattern.outerIndexPtr()[col], hi = a.pattern.outerIndexPtr()[col + 1];
        s = static_cast<int>(std::lower_bound(inner + lo, inner + hi, q.free[r]) - inner);
      }
  return a;
}

Vec2 tri_gradient(const Assembly::Tri& q, const Vec& x) {
  Vec2 g{0.0, 0.0};
  for (int k = 0; k < 3; ++k)
    if (q.free[k] >= 0) g = g + x[q.free[k]] * q.grad[k];
  return g;
}

double pow_half(double g2, double p) { return p == 2.0 ? g2 : std::pow(g2, 0.5 * p); }

// (1/p) E(x).
double energy_over_p(const Assembly& a, const Vec& x, double p) {
  double e = 0.0;
  for (const auto& q : a.tris) {
    const Vec2 g = tri_gradient(q, x);
    const double g2 = dot(g, g);
    if (g2 > 0.0) e += q.area * pow_half(g2, p);
  }
  return e / p;
}

// Gradient of (1/p) E.
Vec energy_gradient_over_p(const Assembly& a, const Vec& x, double p) {
  Vec out = Vec::Zero(x.size());
  for (const auto& q : a.tris) {
    const Vec2 g = tri_gradient(q, x);
    const double g2 = dot(g, g);
    if (!(g2 > 0.0)) continue;
    const double c = q.area * (p == 2.0 ? 1.0 : std::pow(g2, 0.5 * p - 1.0));
    for (int k = 0; k < 3; ++k)
      if (q.free[k] >= 0) out[q.free[k]] += c * dot(g, q.grad[k]);
  }
  return out;
}

double mass(const Assembly& a, const Vec& x, double p) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double v = std::abs(x[k]);
    if (v > 0.0) s += a.weights[k] * (p == 2.0 ? v * v : std::pow(v, p));
  }
  return s;
}

// w |x|^{p-2} x.
Vec p_force(const Assembly& a, const Vec& x, double p) {
  Vec out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k)
    out[k] = a.weights[k] * std::copysign(std::pow(std::abs(x[k]), p - 1.0), x[k]);
  return out;
}

// Hessian of (1/p) sum area (|g|^2 + delta^2)^{p/2}, written into `h`.
void fill_hessian(const Assembly& a, const Vec& x, double p, double delta, SpMat& h) {
  double* val = h.valuePtr();
  std::fill(val, val + h.nonZeros(), 0.0);
  for (const auto& q : a.tris) {
    const Vec2 g = tri_gradient(q, x);
    const double s = dot(g, g) + delta * delta;
    const double c0 = p == 2.0 ? 1.0 : std::pow(s, 0.5 * p - 1.0);
    const double c1 = p == 2.0 ? 0.0 : (p - 2.0) * std::pow(s, 0.5 * p - 2.0);
    // A = c0 I + c1 g g^T
    const double axx = c0 + c1 * g.x * g.x, axy = c1 * g.x * g.y, ayy = c0 + c1 * g.y * g.y;
    for (int r = 0; r < 3; ++r) {
      if (q.free[r] < 0) continue;
      const Vec2 gr = q.grad[r];
      const Vec2 agr{axx * gr.x + axy * gr.y, axy * gr.x + ayy * gr.y};
      for (int c = 0; c < 3; ++c) {
        const int slot = q.slot[r * 3 + c];
        if (slot >= 0) val[slot] += q.area * dot(agr, q.grad[c]);
      }
    }
  }
}

EigenResult pack(const TriMesh& m, const Assembly& a, Vec x, double p, int iters, bool converged) {
  // Flip to the positive sign and clear round-off negatives.
  if (x.sum() < 0.0) x = -x;
  x = x.cwiseAbs();
  x /= std::pow(mass(a, x, p), 1.0 / p);
  std::vector<double> xs(x.data(), x.data() + x.size());
  const double e = energy_p(m, xs, p);
  const double mm = mass_p(m, xs, p);
  const double lambda = e / mm;
  const auto ge = grad_energy_p(m, xs, p);
  const auto gm = grad_mass_p(m, xs, p);
  double res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) res = std::max(res, std::abs(ge[k] - lambda * gm[k]));
  return EigenResult{lambda, m.expand(xs), iters, res, converged};
}

EigenResult pure_neumann(const TriMesh& m, const Assembly& a, double p) {
  return pack(m, a, Vec::Ones(static_cast<Eigen::Index>(m.free_count())), p, 0, true);
}

void require_free(const TriMesh& m) {
  if (m.free_count() == 0) throw NoFreeNodes("mesh has no free nodes");
}

}  // namespace

void SolverConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidConfig("solver.p: must exceed 1");
  if (!(outer_tol > 0.0)) throw InvalidConfig("solver.outer_tol: must be positive");
  if (!(inner_tol > 0.0)) throw InvalidConfig("solver.inner_tol: must be positive");
  if (!(smoothing_eps > 0.0)) throw InvalidConfig("solver.smoothing_eps: must be positive");
  if (max_outer < 1) throw InvalidConfig("solver.max_outer: must be at least 1");
  if (max_inner < 1) throw InvalidConfig("solver.max_inner: must be at least 1");
}

double rayleigh(const TriMesh& m, const GridFunction& u, double p) {
  const double mm = mass_p(m, u, p);
  if (!(mm > 0.0)) throw ZeroFunction("Rayleigh quotient of the zero function");
  return energy_p(m, u, p) / mm;
}

EigenResult solve_p2(const TriMesh& m, const SolverConfig& cfg) {
  cfg.validate();
  require_free(m);
  Assembly a = build_assembly(m);
  if (m.dirichlet_count() == 0) return pure_neumann(m, a, 2.0);

  SpMat k = a.pattern;
  fill_hessian(a, Vec::Zero(a.weights.size()), 2.0, 0.0, k);
  Cg cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 4 * k.rows()));
  cg.compute(k);

  Vec x = Vec::Ones(k.rows());
  x /= std::sqrt(mass(a, x, 2.0));
  double lambda = x.dot(k * x);
  bool converged = false;
  int it = 0;
  Vec y = x;
  while (it < cfg.max_outer) {
    ++it;
    const Vec rhs = a.weights.cwiseProduct(x);
    y = cg.solveWithGuess(rhs, y);
    x = y / std::sqrt(mass(a, y, 2.0));
    const double next = x.dot(k * x);
    const double change = std::abs(next - lambda) / std::max(next, 1e-300);
    lambda = next;
    if (change < cfg.outer_tol) {
      converged = true;
      break;
    }
  }
  return pack(m, a, x, 2.0, it, converged);
}

EigenResult solve_p(const TriMesh& m, const SolverConfig& cfg) {
  cfg.validate();
  require_free(m);
  const double p = cfg.p;
  Assembly a = build_assembly(m);
  if (m.dirichlet_count() == 0) return pure_neumann(m, a, p);

  const Eigen::Index n = a.weights.size();
  SpMat h = a.pattern;
  Cg cg;
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 4 * n));
  cg.analyzePattern(h);

  Vec u = Vec::Ones(n);
  u /= std::pow(mass(a, u, p), 1.0 / p);
  double lambda = p * energy_over_p(a, u, p);
  bool converged = false;
  bool inner_ok = true;
  int it = 0;
  while (it < cfg.max_outer) {
    ++it;
    const Vec b = p_force(a, u, p);
    Vec v = u * std::pow(lambda, -1.0 / (p - 1.0));
    inner_ok = false;
    for (int k = 0; k < cfg.max_inner; ++k) {
      const Vec grad = energy_gradient_over_p(a, v, p) - b;
      if (grad.lpNorm<Eigen::Infinity>() < cfg.inner_tol) {
        inner_ok = true;
        break;
      }
      double delta = cfg.smoothing_eps;
      if (p != 2.0) {
        double g2sum = 0.0;
        for (const auto& q : a.tris) {
          const Vec2 g = tri_gradient(q, v);
          g2sum += dot(g, g);
        }
        delta = std::max(delta, 1e-3 * std::sqrt(g2sum / static_cast<double>(a.tris.size())));
      }
      fill_hessian(a, v, p, delta, h);
      cg.factorize(h);
      cg.setTolerance(std::clamp(1e-2 * grad.norm() / std::max(b.norm(), 1e-300), 1e-14, 1e-6));
      const Vec d = cg.solve(-grad);
      const double f0 = energy_over_p(a, v, p) - b.dot(v);
      const double slope = grad.dot(d);
      if (!(slope < 0.0)) break;
      bool accepted = false;
      if (-slope <= 1e-13 * (std::abs(f0) + std::abs(b.dot(v)))) {
        // Predicted decrease is below the resolution of F: judge the full
        // step by the gradient instead.
        const Vec trial = v + d;
        if ((energy_gradient_over_p(a, trial, p) - b).lpNorm<Eigen::Infinity>() <
            grad.lpNorm<Eigen::Infinity>()) {
          v = trial;
          accepted = true;
        }
      } else {
        double t = 1.0;
        for (int ls = 0; ls < 50; ++ls) {
          const Vec trial = v + t * d;
          if (energy_over_p(a, trial, p) - b.dot(trial) <= f0 + 1e-4 * t * slope) {
            v = trial;
            accepted = true;
            break;
          }
          t *= 0.5;
        }
      }
      if (!accepted) break;
    }
    v = v.cwiseAbs();
    const double mv = mass(a, v, p);
    if (!(mv > 0.0)) throw ZeroFunction("inner solve returned the zero function");
    u = v / std::pow(mv, 1.0 / p);
    const double next = p * energy_over_p(a, u, p);
    const double change = std::abs(next - lambda) / std::max(next, 1e-300);
    lambda = next;
    if (change < cfg.outer_tol && inner_ok) {
      converged = true;
      break;
    }
  }
  return pack(m, a, u, p, it, converged);
}

EigenResult solve(const TriMesh& m, const SolverConfig& cfg) {
  return cfg.p == 2.0 ? solve_p2(m, cfg) : solve_p(m, cfg);
}

double check_weak_form(const TriMesh& m, const EigenResult& r, double p, int trial_count,
                       std::uint64_t seed) {
  const auto x = m.restrict_to_free(r.u);
  const auto ge = grad_energy_p(m, x, p);
  const auto gm = grad_mass_p(m, x, p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trial_count; ++t) {
    std::vector<double> v(x.size());
    for (auto& e : v) e = dist(rng);
    const double scale = std::sqrt(mass_p(m, v, 2.0));
    if (!(scale > 0.0)) continue;
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += (ge[k] - r.lambda * gm[k]) * v[k];
    worst = std::max(worst, std::abs(acc / (p * scale)));
  }
  return worst;
}

}  // namespace polarfk
