#include "qsci/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qsci {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0)
    for (auto& x : v) x = -x;
}

// Orthogonalizes t against the basis twice (classical Gram-Schmidt, repeated);
// returns the remaining norm before normalization.
double orthonormalize(std::vector<double>& t, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      const double c = dot(b, t);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] -= c * b[i];
    }
  const double nrm = norm(t);
  if (nrm > 0)
    for (auto& x : t) x /= nrm;
  return nrm;
}

double residual(const SparseInteractionMatrix& m, std::span<const double> v, double e) {
  std::vector<double> hv(v.size());
  m.multiply(v, hv);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (hv[i] - e * v[i]) * (hv[i] - e * v[i]);
  return std::sqrt(s);
}

}  // namespace

EigenResult dense_lowest(std::span<const double> matrix, std::size_t n) {
  if (n == 0) throw DimensionError("eigensolve on a 0x0 matrix");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw Error("dense eigensolver failed");
  EigenResult r;
  r.energy = es.eigenvalues()(0);
  r.vector.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.vector[i] = es.eigenvectors()(static_cast<Eigen::Index>(i), 0);
  fix_sign(r.vector);
  const Eigen::Map<const Eigen::VectorXd> v(r.vector.data(), static_cast<Eigen::Index>(n));
  r.residual_norm = (a * v - r.energy * v).norm();
  r.ritz_history = {r.energy};
  return r;
}

EigenResult davidson_lowest(const SparseInteractionMatrix& matrix, std::span<const double> guess,
                            const DavidsonOptions& options) {
  const std::size_t n = matrix.dimension();
  if (n == 0) throw DimensionError("eigensolve on a 0x0 matrix");
  if (!guess.empty() && guess.size() != n)
    throw DimensionError("initial vector length does not match the matrix");

  if (n <= options.dense_threshold) {
    auto r = dense_lowest(matrix.dense(), n);
    r.residual_norm = residual(matrix, r.vector, r.energy);
    return r;
  }

  const auto diag = matrix.diagonal();
  const auto min_diag = static_cast<std::size_t>(
      std::distance(diag.begin(), std::min_element(diag.begin(), diag.end())));

  std::vector<std::vector<double>> basis;
  std::vector<std::vector<double>> sigma;
  auto push = [&](std::vector<double> t) {
    if (orthonormalize(t, basis) < 1e-10) return false;
    std::vector<double> s(n);
    matrix.multiply(t, s);
    basis.push_back(std::move(t));
    sigma.push_back(std::move(s));
    return true;
  };
  if (!guess.empty() && norm(guess) > 0) push(std::vector<double>(guess.begin(), guess.end()));
  {
    std::vector<double> e(n, 0.0);
    e[min_diag] = 1.0;
    push(std::move(e));
  }

  EigenResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  std::vector<double> x(n), r(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const auto m = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd g(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j <= i; ++j)
        g(i, j) = g(j, i) = dot(basis[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const double theta = es.eigenvalues()(0);
    const Eigen::VectorXd y = es.eigenvectors().col(0);

    std::fill(x.begin(), x.end(), 0.0);
    std::fill(r.begin(), r.end(), 0.0);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& b = basis[static_cast<std::size_t>(j)];
      const auto& s = sigma[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += y(j) * b[i];
        r[i] += y(j) * s[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) r[i] -= theta * x[i];
    const double rnorm = norm(r);
    best.ritz_history.push_back(theta);
    best.energy = theta;
    best.vector = x;
    best.residual_norm = rnorm;
    best.iterations = iter;
    if (rnorm <= options.tolerance) {
      const double xn = norm(best.vector);
      for (auto& v : best.vector) v /= xn;
      fix_sign(best.vector);
      return best;
    }

    // Jacobi-preconditioned correction.
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
      double denom = diag[i] - theta;
      if (std::abs(denom) < 1e-12) denom = denom < 0 ? -1e-12 : 1e-12;
      t[i] = -r[i] / denom;
    }
    if (basis.size() >= options.max_subspace) {
      // Restart on the current Ritz vector.
      basis.clear();
      sigma.clear();
      push(x);
    }
    if (!push(std::move(t)) && !push(r)) {
      // Correction already inside the search space.
      fix_sign(best.vector);
      throw ConvergenceError("Davidson stagnated with residual " + std::to_string(rnorm), best);
    }
  }
  fix_sign(best.vector);
  throw ConvergenceError("Davidson did not converge in " + std::to_string(options.max_iterations) +
                             " iterations",
                         best);
}

}  // namespace qsci
