#pragma once

#include <Eigen/Dense>

namespace l1adapt {

/// H-representation polyhedron {z : A z >= c}. Rows only ever get appended;
/// the dimension is fixed at construction.
class Polyhedron {
public:
  Polyhedron() = default;
  explicit Polyhedron(int dim) : A_(0, dim), c_(0) {}
  Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd c);

  int dim() const { return static_cast<int>(A_.cols()); }
  int rows() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& c() const { return c_; }

  /// Append the halfspace {z : normal^T z >= offset}.
  void add_halfspace(const Eigen::VectorXd& normal, double offset);

  /// Membership with a per-row tolerance tol * (1 + |row|).
  bool contains(const Eigen::VectorXd& z, double tol = 1e-8) const;

  /// Worst signed violation max_i (c_i - a_i^T z) / (1 + |a_i|); <= 0 when
  /// z is feasible.
  double violation(const Eigen::VectorXd& z) const;

private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd c_;
};

/// Functional-style intersection per the set-update rule: returns a copy of
/// poly with one more row.
Polyhedron intersect(const Polyhedron& poly, const Eigen::VectorXd& normal,
                     double offset);

}  // namespace l1adapt
