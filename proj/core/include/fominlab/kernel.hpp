#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fominlab/lattice.hpp"

namespace fominlab {

/// h_A(z, y) for every interior z and one fixed boundary target y.
struct PoissonKernelField {
  Point target;
  std::vector<double> values;  // indexed by interior index
  double residual = 0.0;       // max-norm residual of the linear solve

  double operator[](std::size_t interior_index) const { return values[interior_index]; }
};

/// Matrix M[i][l] = h_dA(x^i, y^l) of excursion Poisson kernels.
struct HittingMatrix {
  std::vector<Point> xs;
  std::vector<Point> ys;
  Eigen::MatrixXd entries;

  std::size_t n() const noexcept { return xs.size(); }
  double determinant() const;
  /// det M / prod_i M[i][i]; throws ZeroDiagonal if a diagonal entry is 0.
  double conditional_ratio() const;
};

/// Exact discrete Poisson kernels of simple random walk on a lattice domain.
///
/// The operator I - Q (Q = interior transition matrix, 1/4 per interior edge)
/// is factorised once; each target vertex costs one triangular solve and the
/// resulting field is cached. Safe to call concurrently.
class KernelSolver {
 public:
  explicit KernelSolver(std::shared_ptr<const LatticeDomain> domain);

  const LatticeDomain& domain() const noexcept { return *domain_; }
  std::shared_ptr<const LatticeDomain> shared_domain() const noexcept { return domain_; }

  /// Throws NotOnBoundary if y is not in dA, SolverDidNotConverge if the
  /// residual stays above 1e-10 after refinement.
  std::shared_ptr<const PoissonKernelField> poisson_kernel(Point y);

  /// (1/4) sum_{w in A, w ~ x} h_A(w, y). x == y is allowed.
  double excursion_kernel(Point x, Point y);

  static constexpr double kResidualTolerance = 1e-10;

 private:
  std::shared_ptr<const LatticeDomain> domain_;
  Eigen::SparseMatrix<double> operator_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> factor_;
  std::mutex mutex_;
  std::map<Point, std::shared_ptr<const PoissonKernelField>> cache_;
};

HittingMatrix hitting_matrix(KernelSolver& solver, const MarkedBoundary& marks);

/// det M / prod diag for the marked configuration.
double fomin_conditional_ratio(KernelSolver& solver, const MarkedBoundary& marks);

}  // namespace fominlab
