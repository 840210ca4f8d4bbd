#include "liouville/dirichlet.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "liouville/errors.hpp"
#include "liouville/series.hpp"

namespace liouville {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr std::int64_t kDirectSolverLimit = 200'000;

using SpMat = Eigen::SparseMatrix<double>;

// Assemble the m-weighted symmetric Dirichlet system: row x of (D - W)
// restricted to the interior; boundary terms move to the right-hand side.
struct System {
  SpMat A;
  Eigen::VectorXd b;
  std::vector<VertexId> interior;     // index -> vertex
  std::vector<std::int64_t> index;    // vertex -> index, -1 outside interior
};

System assemble(const FiniteGraph& g, std::span<const VertexId> interior,
                std::span<const VertexId> boundary,
                const std::function<double(VertexId)>& rhs,
                const std::function<double(VertexId)>& bval) {
  const std::int64_t n_all = std::int64_t(g.vertex_count());
  std::vector<char> role(n_all, 0);  // 0 outside, 1 interior, 2 boundary
  for (VertexId v : interior) {
    if (v >= g.vertex_count()) throw SpecError("interior vertex out of range");
    if (role[v] != 0) throw SpecError("vertex listed twice in interior/boundary");
    if (g.is_frontier(v))
      throw SpecError("interior touches the frontier at '" + g.label(v) +
                      "'; enlarge the ball or move it to the boundary");
    role[v] = 1;
  }
  for (VertexId v : boundary) {
    if (v >= g.vertex_count()) throw SpecError("boundary vertex out of range");
    if (role[v] != 0) throw SpecError("vertex listed twice in interior/boundary");
    role[v] = 2;
  }
  if (interior.empty()) throw SpecError("empty interior");

  System s;
  s.interior.assign(interior.begin(), interior.end());
  s.index.assign(n_all, -1);
  for (std::size_t i = 0; i < s.interior.size(); ++i) s.index[s.interior[i]] = i;

  const std::int64_t n = std::int64_t(s.interior.size());
  s.b = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(n) * 4);
  for (std::int64_t i = 0; i < n; ++i) {
    VertexId x = s.interior[i];
    double diag = 0.0;
    double rx = rhs(x);
    if (!std::isfinite(rx)) throw SpecError("non-finite right-hand side");
    s.b[i] = g.measure(x) * rx;
    for (const Edge& e : g.neighbors(x)) {
      diag += e.weight;
      if (role[e.to] == 1) {
        trip.emplace_back(i, s.index[e.to], -e.weight);
      } else if (role[e.to] == 2) {
        double bv = bval(e.to);
        if (!std::isfinite(bv)) throw SpecError("non-finite boundary value");
        s.b[i] += e.weight * bv;
      } else {
        throw SpecError("neighbor '" + g.label(e.to) + "' of interior vertex '" +
                        g.label(x) + "' is in neither interior nor boundary");
      }
    }
    trip.emplace_back(i, i, diag);
  }
  s.A.resize(n, n);
  s.A.setFromTriplets(trip.begin(), trip.end());
  return s;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Solve with iterative refinement; returns the final relative residual.
template <typename Solver>
double refine_solve(const Solver& solver, const SpMat& A, const Eigen::VectorXd& b,
                    Eigen::VectorXd& x) {
  x = solver.solve(b);
  double scale = std::max(max_abs(b), 1e-300);
  double rel = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::VectorXd r = b - A * x;
    rel = max_abs(r) / scale;
    if (rel <= 1e-14) break;
    Eigen::VectorXd dx = solver.solve(r);
    if (!dx.allFinite()) break;
    x += dx;
  }
  return rel;
}

Eigen::VectorXd solve_system(const System& s, double* residual_out) {
  const std::int64_t n = s.A.rows();
  Eigen::VectorXd x;
  double rel = std::numeric_limits<double>::infinity();
  if (n <= kDirectSolverLimit) {
    Eigen::SimplicialLDLT<SpMat> solver(s.A);
    if (solver.info() != Eigen::Success) {
      double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        double d = s.A.coeff(i, i);
        dmin = std::min(dmin, std::abs(d));
        dmax = std::max(dmax, std::abs(d));
      }
      throw SolverError("Dirichlet system is singular or indefinite (factorization failed)",
                        dmax / std::max(dmin, 1e-300));
    }
    rel = refine_solve(solver, s.A, s.b, x);
  } else {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> solver;
    solver.setTolerance(1e-12);
    solver.setMaxIterations(40 * n);
    solver.compute(s.A);
    rel = refine_solve(solver, s.A, s.b, x);
  }
  if (!(rel <= kResidualTol) || !x.allFinite()) {
    double cond = max_abs(x) > 0 ? (max_abs(s.b) / std::max(max_abs(x), 1e-300)) : 0.0;
    throw SolverError("Dirichlet solve did not reach residual 1e-10 (got " +
                          std::to_string(rel) + ")",
                      cond);
  }
  if (residual_out) *residual_out = rel;
  return x;
}

// interior/boundary of the ball of radius R: interior = radius < R and not
// frontier; everything else (S_R, beyond, frontier flags) is boundary.
void ball_split(const FiniteGraph& g, const SphereDecomposition& dec, std::int64_t R,
                std::vector<VertexId>& interior, std::vector<VertexId>& boundary) {
  interior.clear();
  boundary.clear();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (dec.radius[v] < R && !g.is_frontier(v))
      interior.push_back(v);
    else
      boundary.push_back(v);
  }
}

}  // namespace

std::vector<double> solve_dirichlet(const FiniteGraph& g,
                                    std::span<const VertexId> interior,
                                    std::span<const VertexId> boundary,
                                    const std::function<double(VertexId)>& rhs,
                                    const std::function<double(VertexId)>& bval,
                                    double* residual_out) {
  System s = assemble(g, interior, boundary, rhs, bval);
  Eigen::VectorXd x = solve_system(s, residual_out);
  std::vector<double> out(g.vertex_count(), 0.0);
  for (std::size_t i = 0; i < s.interior.size(); ++i) out[s.interior[i]] = x[i];
  for (VertexId v : boundary) out[v] = bval(v);
  return out;
}

GreenTable dirichlet_green(const FiniteGraph& g, VertexId x0, std::int64_t R) {
  if (R < 1) throw SpecError("dirichlet_green needs R >= 1");
  auto dec = sphere_decompose(g);
  std::vector<VertexId> interior, boundary;
  ball_split(g, dec, R, interior, boundary);
  if (x0 >= g.vertex_count() || dec.radius[x0] >= R || g.is_frontier(x0))
    throw SpecError("source vertex is not interior to the ball");
  GreenTable t;
  t.graph = g;
  t.source = x0;
  t.radius = R;
  double inv_m = 1.0 / g.measure(x0);
  t.values = solve_dirichlet(
      g, interior, boundary, [x0, inv_m](VertexId v) { return v == x0 ? inv_m : 0.0; },
      [](VertexId) { return 0.0; }, &t.residual);
  return t;
}

ExitTable mean_exit(const FiniteGraph& g, std::int64_t R) {
  if (R < 1) throw SpecError("mean_exit needs R >= 1");
  auto dec = sphere_decompose(g);
  std::vector<VertexId> interior, boundary;
  ball_split(g, dec, R, interior, boundary);
  if (interior.empty()) throw SpecError("ball has empty interior");
  ExitTable t;
  t.graph = g;
  t.radius = R;
  t.values = solve_dirichlet(
      g, interior, boundary, [](VertexId) { return 1.0; }, [](VertexId) { return 0.0; },
      &t.residual);
  return t;
}

GreenLimit green_limit(const GraphSpec& spec, const std::string& x0_label,
                       std::int64_t R_max, double tol) {
  if (R_max < 2) throw SpecError("green_limit needs R_max >= 2");
  GreenLimit out;
  for (std::int64_t R = 2; R <= R_max; ++R) {
    FiniteGraph g = materialize(spec, R);
    auto x0 = x0_label.empty() ? std::optional<VertexId>(g.root()) : g.find_vertex(x0_label);
    if (!x0) throw SpecError("green_limit: no vertex '" + x0_label + "' at radius " +
                             std::to_string(R));
    GreenTable t = dirichlet_green(g, *x0, R);
    if (!out.tables.empty()) {
      // monotonicity g_R <= g_{R+1}, compared by label
      const GreenTable& prev = out.tables.back();
      for (VertexId v = 0; v < prev.graph.vertex_count(); ++v) {
        double now = t.values[g.vertex(prev.graph.label(v))];
        if (prev.values[v] > now + 1e-10)
          throw std::logic_error("internal error: Green kernel not monotone in R at '" +
                                 prev.graph.label(v) + "' (solver bug)");
      }
    }
    out.radii.push_back(R);
    out.value_at_x0.push_back(t.values[*x0]);
    out.tables.push_back(std::move(t));
  }
  out.limit_estimate = out.value_at_x0.back();

  // growth-rate diagnostics from the increments of g_R(x0,x0)
  std::vector<double> inc;
  for (std::size_t i = 1; i < out.value_at_x0.size(); ++i)
    inc.push_back(out.value_at_x0[i] - out.value_at_x0[i - 1]);
  double last_inc = inc.empty() ? 0.0 : inc.back();
  char buf[256];
  double exponent = 0.0;
  if (inc.size() >= 4) {
    std::size_t a = inc.size() / 2, b = inc.size() - 1;
    if (inc[a] > 0 && inc[b] > 0)
      exponent = std::log(inc[b] / inc[a]) /
                 std::log(double(out.radii[b + 1]) / double(out.radii[a + 1]));
    else
      exponent = -std::numeric_limits<double>::infinity();
  }
  if (last_inc <= tol) {
    std::snprintf(buf, sizeof buf, "increments below tol (last %.3g)", last_inc);
  } else if (exponent > -0.5) {
    std::snprintf(buf, sizeof buf,
                  "increments ~ R^%.2f: linear-type growth, parabolic evidence", exponent);
  } else if (exponent > -1.5) {
    std::snprintf(buf, sizeof buf, "increments ~ R^%.2f: logarithmic-type growth",
                  exponent);
  } else {
    std::snprintf(buf, sizeof buf, "increments ~ R^%.2f: saturating", exponent);
  }
  out.rate_report = buf;

  bool increments_small = last_inc <= tol;
  if (auto model = spec.as_model()) {
    // decisive convergence needs the certified analytic tail sum_{k>=R} 1/dB(k)
    out.analytic_tail = std::numeric_limits<double>::quiet_NaN();
    const auto& cert = model->certificates().parabolic;
    if (cert) {
      auto tail_term = [&](std::int64_t k) { return model->inv_boundary_weight(k); };
      SeriesResult tail = sum_series(tail_term, R_max, cert);
      if (tail.verdict.kind == SeriesVerdict::Kind::ConvergesTo)
        out.analytic_tail = tail.verdict.value + tail.verdict.tail_bound;
    }
    out.verdict = (increments_small && std::isfinite(out.analytic_tail) &&
                   out.analytic_tail <= tol)
                      ? GreenLimit::Verdict::Converged
                      : GreenLimit::Verdict::StillGrowing;
  } else {
    out.verdict = increments_small ? GreenLimit::Verdict::Converged
                                   : GreenLimit::Verdict::StillGrowing;
  }
  return out;
}

MinPrincipleReport check_min_principle(const FiniteGraph& g, std::span<const double> f,
                                       std::span<const VertexId> interior, double tol) {
  MinPrincipleReport rep;
  if (f.size() != g.vertex_count()) throw SpecError("f must cover every vertex");
  std::vector<char> in(g.vertex_count(), 0);
  for (VertexId v : interior) in[v] = 1;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (VertexId v : interior) {
    if (g.is_frontier(v)) {
      rep.detail = "interior touches the frontier; Laplacian untrusted there";
      return rep;
    }
    double lap = 0.0;
    for (const Edge& e : g.neighbors(v)) {
      lap += e.weight * (f[v] - f[e.to]);
      if (!in[e.to]) {  // boundary neighbor
        lo = std::min(lo, f[e.to]);
        hi = std::max(hi, f[e.to]);
        if (f[e.to] < -tol) {
          rep.detail = "hypothesis violated: negative boundary value at '" +
                       g.label(e.to) + "'";
          return rep;
        }
      }
    }
    lap /= g.measure(v);
    if (lap < -tol) {
      rep.detail = "hypothesis violated: Delta f < 0 at '" + g.label(v) + "'";
      return rep;
    }
    lo = std::min(lo, f[v]);
    hi = std::max(hi, f[v]);
  }
  rep.applicable = true;
  if (hi - lo <= tol) {
    rep.pass = true;
    rep.detail = "constant function: vacuous pass";
    return rep;
  }
  for (VertexId v : interior) {
    if (!(f[v] > 0.0)) {
      rep.pass = false;
      rep.witness = v;
      rep.detail = "minimum principle violated at '" + g.label(v) + "'";
      return rep;
    }
  }
  rep.pass = true;
  rep.detail = "interior strictly positive";
  return rep;
}

}  // namespace liouville
