#pragma once

// Two-circle configurations. Circles of radii r_i, r_j centred at i and j meet
// at the star point with exterior intersection angle theta; the triangle
// (i, j, star) has sides r_i, r_j, l_ij and angle pi - theta at the star.

namespace icp {

enum class Geometry { Euclidean, Hyperbolic };

const char* to_string(Geometry g);

struct TwoCircleConfig {
  Geometry geometry = Geometry::Euclidean;
  double r_i = 1.0;
  double r_j = 1.0;
  double theta = 0.0;

  // Same configuration seen from j.
  TwoCircleConfig swapped() const { return {geometry, r_j, r_i, theta}; }
};

// Throws DomainViolation unless r_i, r_j > 0 and 0 < theta < pi.
void validate(const TwoCircleConfig& cfg);

double edge_length(const TwoCircleConfig& cfg);

enum class End { I, J };

double inner_angle(const TwoCircleConfig& cfg, End at = End::I);

// Angle defect theta - theta_i - theta_j. Throws GeometryMismatch for Euclidean.
double triangle_area_hyp(const TwoCircleConfig& cfg);

// Partials of the two inner angles with respect to the radii.
struct AnglePartials {
  double dthi_dri = 0.0;
  double dthi_drj = 0.0;
  double dthj_dri = 0.0;
  double dthj_drj = 0.0;
};

AnglePartials angle_partials(const TwoCircleConfig& cfg);

// The same partials in u-coordinates (u = ln r, or u = ln tanh(r/2)).
// In both geometries d(theta_i)/d(u_j) = d(theta_j)/d(u_i) = coupling and
// d(theta_i)/d(u_i) = -coupling * stretch, where stretch = 1 (Euclidean) or
// cosh l (hyperbolic).
struct CornerCoupling {
  double coupling = 0.0;
  double stretch = 1.0;
};

CornerCoupling corner_coupling(const TwoCircleConfig& cfg);
AnglePartials angle_partials_u(const TwoCircleConfig& cfg);

// d_ij / l_ij = r_i r_j sin(theta) / l^2. Euclidean only.
double omega(const TwoCircleConfig& cfg);

// d(Area)/d(u_i) = sinh(r_i) d(Area)/d(r_i). Hyperbolic only; symmetric in i, j.
double area_partial_u(const TwoCircleConfig& cfg);

}  // namespace icp
