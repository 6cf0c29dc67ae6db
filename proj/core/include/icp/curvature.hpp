#pragma once

#include <optional>

#include <Eigen/Dense>

#include "icp/complex.hpp"
#include "icp/geometry.hpp"

namespace icp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// u = ln r (Euclidean) or u = ln tanh(r/2) (hyperbolic). Throws DomainViolation.
Vector to_u(Geometry g, const Vector& r);
Vector from_u(Geometry g, const Vector& u);

// Radii together with their u-image; always consistent.
class PatternState {
 public:
  static PatternState from_radii(Geometry g, Vector r);
  static PatternState from_u(Geometry g, Vector u);
  static PatternState constant(Geometry g, int n, double radius = 1.0);

  Geometry geometry() const { return geometry_; }
  const Vector& r() const { return r_; }
  const Vector& u() const { return u_; }
  int size() const { return static_cast<int>(r_.size()); }

 private:
  PatternState(Geometry g, Vector r, Vector u) : geometry_(g), r_(std::move(r)), u_(std::move(u)) {}

  Geometry geometry_;
  Vector r_;
  Vector u_;
};

struct CurvatureReport {
  Vector K;
  double calabi_energy = 0.0;
  std::optional<double> total_area;  // hyperbolic only
  double gauss_bonnet_residual = 0.0;
};

// K_i = 2 pi - sum of the corner angles at i. Star vertices are flat by
// construction and carry no curvature entry.
CurvatureReport curvature_map(const Triangulation& t, const PatternState& s);
Vector curvature(const Triangulation& t, const PatternState& s);

double k_average(const CellComplex& c);

// Euclidean: sum K - 2 pi chi. Hyperbolic: sum K - 2 pi chi - area.
double gauss_bonnet_residual(const Triangulation& t, const PatternState& s, const CurvatureReport& report);

double calabi_energy(const Vector& K);

struct JacobianMatrix {
  Matrix L;                     // dK/du, symmetric
  std::optional<Vector> A_diag; // hyperbolic area part
  Matrix L_B;                   // weighted Laplacian part; L = diag(A) + L_B
};

JacobianMatrix jacobian(const Triangulation& t, const PatternState& s);

// Smallest eigenvalue of L (hyperbolic), or of L restricted to the complement
// of the constant vector (Euclidean). A single-vertex Euclidean complex has an
// empty complement and yields +infinity.
double spectral_gap(const JacobianMatrix& J, Geometry g);

struct RicciPotentialOptions {
  double tolerance = 1e-10;
  int max_halvings = 20;
};

// Line integral of sum K_i du_i along the segment from u_base to u, by
// composite 16-point Gauss-Legendre with interval halving.
double ricci_potential(const Triangulation& t, Geometry g, const Vector& u_base, const Vector& u,
                       const RicciPotentialOptions& opts = {});

}  // namespace icp
