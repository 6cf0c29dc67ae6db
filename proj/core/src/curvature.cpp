#include "icp/curvature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "icp/error.hpp"

namespace icp {

namespace {

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorCode::DomainViolation, std::string(what) + " has non-finite entries");
}

// ln(1 - e^x) for x < 0, accurate at both ends.
double log1mexp(double x) { return x > -0.6931471805599453 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x)); }

void check_size(const Triangulation& t, Eigen::Index n, const char* what) {
  if (n != t.num_primal_vertices()) {
    std::ostringstream msg;
    msg << what << " has " << n << " entries for " << t.num_primal_vertices() << " vertices";
    throw Error(ErrorCode::DomainViolation, msg.str());
  }
}

TwoCircleConfig corner_config(const Triangulation& t, const PatternState& s, const Corner& c) {
  return {s.geometry(), s.r()(c.vertex), s.r()(c.other), t.theta(c)};
}

}  // namespace

Vector to_u(Geometry g, const Vector& r) {
  check_finite(r, "radius vector");
  if ((r.array() <= 0.0).any()) throw Error(ErrorCode::DomainViolation, "radii must be positive");
  if (g == Geometry::Euclidean) return r.array().log().matrix();
  // ln tanh(r/2) = ln(1 - e^-r) - ln(1 + e^-r)
  Vector u(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    u(i) = log1mexp(-r(i)) - std::log1p(std::exp(-r(i)));
  }
  return u;
}

Vector from_u(Geometry g, const Vector& u) {
  check_finite(u, "u vector");
  if (g == Geometry::Euclidean) return u.array().exp().matrix();
  if ((u.array() >= 0.0).any()) throw Error(ErrorCode::DomainViolation, "hyperbolic u-coordinates must be negative");
  // r = 2 artanh(e^u) = ln(1 + e^u) - ln(1 - e^u)
  Vector r(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    r(i) = std::log1p(std::exp(u(i))) - log1mexp(u(i));
  }
  return r;
}

PatternState PatternState::from_radii(Geometry g, Vector r) {
  Vector u = icp::to_u(g, r);
  return PatternState(g, std::move(r), std::move(u));
}

PatternState PatternState::from_u(Geometry g, Vector u) {
  Vector r = icp::from_u(g, u);
  if ((r.array() <= 0.0).any() || !r.allFinite()) {
    throw Error(ErrorCode::DomainViolation, "u-coordinates map outside the positive radii");
  }
  return PatternState(g, std::move(r), std::move(u));
}

PatternState PatternState::constant(Geometry g, int n, double radius) {
  return from_radii(g, Vector::Constant(n, radius));
}

Vector curvature(const Triangulation& t, const PatternState& s) {
  check_size(t, s.size(), "state");
  Vector K = Vector::Constant(t.num_primal_vertices(), 2.0 * kPi);
  for (const Corner& c : t.corners()) K(c.vertex) -= inner_angle(corner_config(t, s, c));
  return K;
}

CurvatureReport curvature_map(const Triangulation& t, const PatternState& s) {
  check_size(t, s.size(), "state");
  CurvatureReport rep;
  rep.K = curvature(t, s);
  rep.calabi_energy = calabi_energy(rep.K);
  if (s.geometry() == Geometry::Hyperbolic) {
    double area = 0.0;
    for (const Wedge& w : t.wedges()) {
      area += triangle_area_hyp({Geometry::Hyperbolic, s.r()(w.tail), s.r()(w.head), w.theta});
    }
    rep.total_area = area;
  }
  rep.gauss_bonnet_residual = gauss_bonnet_residual(t, s, rep);
  return rep;
}

double k_average(const CellComplex& c) {
  return 2.0 * kPi * euler_characteristic(c) / static_cast<double>(c.num_vertices());
}

double gauss_bonnet_residual(const Triangulation& t, const PatternState& s, const CurvatureReport& report) {
  double res = report.K.sum() - 2.0 * kPi * euler_characteristic(t.complex());
  if (s.geometry() == Geometry::Hyperbolic) res -= report.total_area.value_or(0.0);
  return res;
}

double calabi_energy(const Vector& K) { return K.squaredNorm(); }

JacobianMatrix jacobian(const Triangulation& t, const PatternState& s) {
  check_size(t, s.size(), "state");
  const int n = t.num_primal_vertices();
  JacobianMatrix J;
  J.L_B = Matrix::Zero(n, n);
  Vector area_diag = Vector::Zero(n);
  // Corner (i, j) contributes -d(theta_i)/du to row i:
  //   L_ii += coupling * stretch, L_ij -= coupling.
  // Split as L_B (Laplacian with weight `coupling`) plus area part
  // coupling * (stretch - 1) on the diagonal.
  for (const Corner& c : t.corners()) {
    const CornerCoupling k = corner_coupling(corner_config(t, s, c));
    J.L_B(c.vertex, c.vertex) += k.coupling;
    J.L_B(c.vertex, c.other) -= k.coupling;
    if (s.geometry() == Geometry::Hyperbolic) {
      area_diag(c.vertex) += area_partial_u(corner_config(t, s, c));
    }
  }
  J.L = J.L_B;
  if (s.geometry() == Geometry::Hyperbolic) {
    J.L.diagonal() += area_diag;
    J.A_diag = std::move(area_diag);
  }
  return J;
}

double spectral_gap(const JacobianMatrix& J, Geometry g) {
  const Eigen::Index n = J.L.rows();
  if (g == Geometry::Hyperbolic) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(J.L, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
  }
  if (n <= 1) return std::numeric_limits<double>::infinity();
  // Orthonormal basis of the complement of the constant vector.
  Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(n, 1));
  const Matrix Q = qr.householderQ();
  const Matrix basis = Q.rightCols(n - 1);
  const Matrix restricted = basis.transpose() * J.L * basis;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(restricted, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double ricci_potential(const Triangulation& t, Geometry g, const Vector& u_base, const Vector& u,
                       const RicciPotentialOptions& opts) {
  check_size(t, u_base.size(), "base point");
  check_size(t, u.size(), "end point");
  const Vector delta = u - u_base;
  if (delta.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 16>;
  auto integrand = [&](double s) {
    const PatternState st = PatternState::from_u(g, u_base + s * delta);
    return curvature(t, st).dot(delta);
  };
  auto composite = [&](int pieces) {
    double total = 0.0;
    const double h = 1.0 / pieces;
    for (int k = 0; k < pieces; ++k) total += Rule::integrate(integrand, k * h, (k + 1) * h);
    return total;
  };
  double previous = composite(1);
  int pieces = 1;
  for (int level = 0; level < opts.max_halvings; ++level) {
    pieces *= 2;
    const double current = composite(pieces);
    if (std::abs(current - previous) < opts.tolerance) return current;
    previous = current;
  }
  std::ostringstream msg;
  msg << "no agreement to " << opts.tolerance << " after " << opts.max_halvings << " halvings";
  throw Error(ErrorCode::QuadratureNonConvergence, msg.str());
}

}  // namespace icp
