#include "l1adapt/polyhedron.hpp"

#include <limits>

#include "l1adapt/errors.hpp"

namespace l1adapt {

Polyhedron::Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd c)
    : A_(std::move(A)), c_(std::move(c)) {
  if (A_.rows() != c_.size()) throw Error("polyhedron: A rows != c length");
}

void Polyhedron::add_halfspace(const Eigen::VectorXd& normal, double offset) {
  if (normal.size() != A_.cols()) throw Error("polyhedron: dimension mismatch");
  A_.conservativeResize(A_.rows() + 1, Eigen::NoChange);
  A_.row(A_.rows() - 1) = normal.transpose();
  c_.conservativeResize(c_.size() + 1);
  c_(c_.size() - 1) = offset;
}

bool Polyhedron::contains(const Eigen::VectorXd& z, double tol) const {
  for (int i = 0; i < A_.rows(); ++i) {
    const double slack = A_.row(i).dot(z) - c_(i);
    if (slack < -tol * (1.0 + A_.row(i).norm())) return false;
  }
  return true;
}

double Polyhedron::violation(const Eigen::VectorXd& z) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < A_.rows(); ++i) {
    const double v = (c_(i) - A_.row(i).dot(z)) / (1.0 + A_.row(i).norm());
    worst = std::max(worst, v);
  }
  return worst;
}

Polyhedron intersect(const Polyhedron& poly, const Eigen::VectorXd& normal,
                     double offset) {
  Polyhedron out = poly;
  out.add_halfspace(normal, offset);
  return out;
}

}  // namespace l1adapt
