#include "fominlab/kernel.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <string>

#include "fominlab/error.hpp"

namespace fominlab {

double HittingMatrix::determinant() const {
  if (entries.rows() == 0) return 1.0;
  return entries.partialPivLu().determinant();
}

double HittingMatrix::conditional_ratio() const {
  double diag = 1.0;
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    if (!(entries(i, i) > 0.0)) {
      throw Error(ErrorCode::ZeroDiagonal, "diagonal entry " + std::to_string(i) + " is zero");
    }
    diag *= entries(i, i);
  }
  return determinant() / diag;
}

KernelSolver::KernelSolver(std::shared_ptr<const LatticeDomain> domain)
    : domain_(std::move(domain)) {
  const auto n = static_cast<Eigen::Index>(domain_->interior_size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 5);
  for (Eigen::Index i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, 1.0);
    for (int nb : domain_->neighbors(static_cast<std::size_t>(i))) {
      if (domain_->is_interior_site(nb)) triplets.emplace_back(i, nb, -0.25);
    }
  }
  operator_.resize(n, n);
  operator_.setFromTriplets(triplets.begin(), triplets.end());
  factor_.compute(operator_);
  if (factor_.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverDidNotConverge, "Cholesky factorisation of I - Q failed");
  }
}

std::shared_ptr<const PoissonKernelField> KernelSolver::poisson_kernel(Point y) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(y); it != cache_.end()) return it->second;
  }
  const std::vector<int> entry = domain_->interior_neighbors_of(y);
  if (entry.empty()) {
    throw Error(ErrorCode::NotOnBoundary,
                "(" + std::to_string(y.x) + "," + std::to_string(y.y) + ") is not in dA");
  }

  const auto n = static_cast<Eigen::Index>(domain_->interior_size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int w : entry) rhs[w] += 0.25;

  Eigen::VectorXd h = factor_.solve(rhs);
  double residual = (operator_ * h - rhs).lpNorm<Eigen::Infinity>();
  for (int refine = 0; refine < 3 && residual > kResidualTolerance; ++refine) {
    h += factor_.solve(rhs - operator_ * h);
    residual = (operator_ * h - rhs).lpNorm<Eigen::Infinity>();
  }
  if (!(residual <= kResidualTolerance)) {
    throw Error(ErrorCode::SolverDidNotConverge, "residual " + std::to_string(residual));
  }

  auto field = std::make_shared<PoissonKernelField>();
  field->target = y;
  field->residual = residual;
  field->values.resize(static_cast<std::size_t>(n));
  // Exit probabilities are nonnegative; clamp round-off below zero.
  for (Eigen::Index i = 0; i < n; ++i) field->values[i] = std::max(0.0, h[i]);

  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(y, std::move(field));
  return it->second;
}

double KernelSolver::excursion_kernel(Point x, Point y) {
  const std::vector<int> entry = domain_->interior_neighbors_of(x);
  if (entry.empty()) {
    throw Error(ErrorCode::NotOnBoundary,
                "(" + std::to_string(x.x) + "," + std::to_string(x.y) + ") is not in dA");
  }
  const auto field = poisson_kernel(y);
  double sum = 0.0;
  for (int w : entry) sum += (*field)[static_cast<std::size_t>(w)];
  return 0.25 * sum;
}

HittingMatrix hitting_matrix(KernelSolver& solver, const MarkedBoundary& marks) {
  const std::size_t n = marks.n();
  HittingMatrix m;
  m.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m.xs.push_back(marks.x(i));
    m.ys.push_back(marks.y(i));
  }
  // Column-major fill: one kernel field per y^l serves every row.
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          solver.excursion_kernel(m.xs[i], m.ys[l]);
    }
  }
  return m;
}

double fomin_conditional_ratio(KernelSolver& solver, const MarkedBoundary& marks) {
  return hitting_matrix(solver, marks).conditional_ratio();
}

}  // namespace fominlab
