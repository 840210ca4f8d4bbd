#include "liouville/dirichlet.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>

#include "liouville/errors.hpp"
#include "liouville/series.hpp"

namespace liouville {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// same splitting rule as the Dirichlet solver: interior = radius < R and not
// frontier, everything else absorbs
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

// One TR-BDF2 macro step of size h for M p' = -L p, using the single matrix
// K = M + c h L with c = 1 - 1/sqrt(2) (gamma = 2 - sqrt(2) makes both stages
// share it).
struct TrBdf2 {
  const SpMat& L;
  const Eigen::VectorXd& m;  // vertex measures (diagonal of M)
  double h = 0.0;
  Eigen::SimplicialLDLT<SpMat> K;

  TrBdf2(const SpMat& lap, const Eigen::VectorXd& measures) : L(lap), m(measures) {}

  static constexpr double kGamma = 2.0 - 1.4142135623730951;
  static constexpr double kC = 1.0 - 1.0 / 1.4142135623730951;

  void factor(double step) {
    h = step;
    SpMat Kmat = kC * h * L;
    for (std::int64_t i = 0; i < Kmat.rows(); ++i) Kmat.coeffRef(i, i) += m[i];
    K.compute(Kmat);
    if (K.info() != Eigen::Success)
      throw SolverError("heat step factorization failed", 0.0);
  }

  Eigen::VectorXd step(const Eigen::VectorXd& p) const {
    // TR half: (M + cL h) p_g = M p - (gamma h / 2) L p   [c = gamma/2 * h]
    Eigen::VectorXd rhs1 = m.cwiseProduct(p) - (kGamma * h / 2.0) * (L * p);
    Eigen::VectorXd pg = K.solve(rhs1);
    // BDF2: (M + cL h) p1 = M [ p_g / (gamma(2-gamma)) - p (1-gamma)^2/(gamma(2-gamma)) ]
    const double g = kGamma;
    Eigen::VectorXd comb =
        pg / (g * (2.0 - g)) - p * ((1.0 - g) * (1.0 - g) / (g * (2.0 - g)));
    return K.solve(m.cwiseProduct(comb).eval());
  }
};

// exp(-tA)v for the m-symmetrized Laplacian via Lanczos with full
// reorthogonalization; exact when the Krylov space saturates.
Eigen::VectorXd krylov_expm(const SpMat& L, const Eigen::VectorXd& m,
                            const Eigen::VectorXd& p0, double t) {
  const std::int64_t n = L.rows();
  Eigen::VectorXd sqrt_m = m.cwiseSqrt();
  Eigen::VectorXd v = sqrt_m.cwiseProduct(p0);  // symmetrized initial vector
  double beta0 = v.norm();
  if (beta0 == 0.0) return Eigen::VectorXd::Zero(n);

  const std::int64_t mmax = std::min<std::int64_t>(n, 150);
  Eigen::MatrixXd V(n, mmax);
  Eigen::VectorXd alpha(mmax), beta(mmax);
  V.col(0) = v / beta0;
  std::int64_t k = 0;
  for (; k < mmax; ++k) {
    // A w = D^{-1/2} L D^{-1/2} w
    Eigen::VectorXd w = (L * V.col(k).cwiseQuotient(sqrt_m)).cwiseQuotient(sqrt_m);
    alpha[k] = V.col(k).dot(w);
    w -= alpha[k] * V.col(k);
    if (k > 0) w -= beta[k - 1] * V.col(k - 1);
    for (std::int64_t j = 0; j <= k; ++j) w -= (V.col(j).dot(w)) * V.col(j);
    double b = w.norm();
    if (k + 1 == mmax || b < 1e-14) {
      ++k;
      break;
    }
    beta[k] = b;
    V.col(k + 1) = w / b;
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (std::int64_t i = 0; i < k; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(k);
  e1[0] = beta0;
  Eigen::VectorXd y =
      eig.eigenvectors() *
      ((-t * eig.eigenvalues().array()).exp() * (eig.eigenvectors().transpose() * e1).array())
          .matrix();
  Eigen::VectorXd sym = V.leftCols(k) * y;
  return sym.cwiseQuotient(sqrt_m);
}

}  // namespace

double HeatCurve::mass_at(std::size_t i) const {
  CompensatedSum s;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) s.add(kernel[i][v] * graph.measure(v));
  return s.value();
}

HeatCurve heat_kernel(const FiniteGraph& g, VertexId x0, std::int64_t R,
                      std::span<const double> times, HeatMode mode,
                      double tol_per_unit_time) {
  if (times.empty()) throw SpecError("heat_kernel needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
      throw SpecError("times must be finite and nonnegative");
    if (i && !(times[i] > times[i - 1])) throw SpecError("times must be increasing");
  }
  auto dec = sphere_decompose(g);
  std::vector<VertexId> interior, boundary;
  ball_split(g, dec, R, interior, boundary);
  if (x0 >= g.vertex_count() || dec.radius[x0] >= R || g.is_frontier(x0))
    throw SpecError("heat source is not interior to the ball");
  const std::int64_t n = std::int64_t(interior.size());

  std::vector<std::int64_t> index(g.vertex_count(), -1);
  for (std::int64_t i = 0; i < n; ++i) index[interior[i]] = i;

  SpMat L(n, n);
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(n) * 4);
    for (std::int64_t i = 0; i < n; ++i) {
      double diag = 0.0;
      for (const Edge& e : g.neighbors(interior[i])) {
        diag += e.weight;
        if (index[e.to] >= 0) trip.emplace_back(i, index[e.to], -e.weight);
      }
      trip.emplace_back(i, i, diag);
    }
    L.setFromTriplets(trip.begin(), trip.end());
  }
  Eigen::VectorXd mvec(n);
  for (std::int64_t i = 0; i < n; ++i) mvec[i] = g.measure(interior[i]);

  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[index[x0]] = 1.0 / g.measure(x0);
  const Eigen::VectorXd p_init = p;

  HeatCurve curve;
  curve.graph = g;
  curve.source = x0;
  curve.radius = R;
  curve.times.assign(times.begin(), times.end());
  curve.kernel.resize(times.size());

  auto record = [&](std::size_t idx, const Eigen::VectorXd& state) {
    std::vector<double> row(g.vertex_count(), 0.0);
    for (std::int64_t i = 0; i < n; ++i) row[interior[i]] = std::max(state[i], 0.0);
    curve.kernel[idx] = std::move(row);
  };

  if (mode == HeatMode::KrylovExpm) {
    if (n > 2000)
      throw SpecError("Krylov expm mode is limited to 2000 interior vertices; "
                      "use the adaptive integrator");
    for (std::size_t ti = 0; ti < times.size(); ++ti)
      record(ti, times[ti] == 0.0 ? p_init : krylov_expm(L, mvec, p_init, times[ti]));
    return curve;
  }

  TrBdf2 big(L, mvec), half(L, mvec);
  double t = 0.0;
  double h = 1e-3;
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    double target = times[ti];
    while (t < target) {
      double step = std::min(h, target - t);
      // step-doubling error control: one step of `step` vs two of `step`/2
      if (big.h != step) big.factor(step);
      Eigen::VectorXd one = big.step(p);
      if (half.h != step / 2) half.factor(step / 2);
      Eigen::VectorXd two = half.step(half.step(p));
      double err = max_abs(one - two);
      double tol_step = tol_per_unit_time * step * std::max(1.0, max_abs(two));
      if (err <= 3.0 * tol_step) {
        p = std::move(two);
        t += step;
      }
      double grow = err > 0 ? 0.9 * std::cbrt(3.0 * tol_step / err) : 4.0;
      h = step * std::clamp(grow, 0.2, 4.0);
      if (h < 1e-12)
        throw SolverError("heat integrator stalled (stiffness failure); "
                          "use a smaller ball or the Krylov mode",
                          0.0);
    }
    record(ti, p);
  }
  return curve;
}

GreenTable green_via_time_integration(const HeatCurve& curve) {
  const auto& times = curve.times;
  if (times.size() < 8 || times.front() != 0.0)
    throw SpecError("time integration needs a grid starting at t = 0");
  const FiniteGraph& g = curve.graph;

  // trapezoid on the grid
  std::vector<CompensatedSum> acc(g.vertex_count());
  for (std::size_t i = 1; i < times.size(); ++i) {
    double dt = times[i] - times[i - 1];
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      acc[v].add(0.5 * dt * (curve.kernel[i][v] + curve.kernel[i - 1][v]));
  }

  // exponential tail from the trailing decade of the mass curve
  double T = times.back();
  std::size_t tail_start = times.size() - 1;
  while (tail_start > 0 && times[tail_start - 1] >= 0.9 * T) --tail_start;
  double m0 = curve.mass_at(tail_start), m1 = curve.mass_at(times.size() - 1);
  for (std::size_t i = tail_start; i + 1 < times.size(); ++i)
    if (curve.mass_at(i + 1) > curve.mass_at(i) + 1e-12)
      throw CheckFailure("tail estimate unstable: heat mass not decreasing late");
  double lambda = 0.0;
  if (m1 > 0 && m0 > m1)
    lambda = std::log(m0 / m1) / (times.back() - times[tail_start]);
  GreenTable t;
  t.graph = g;
  t.source = curve.source;
  t.radius = curve.radius;
  t.residual = 0.0;
  t.values.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    double tail = (lambda > 0) ? curve.kernel.back()[v] / lambda : 0.0;
    t.values[v] = acc[v].value() + tail;
  }
  return t;
}

}  // namespace liouville
