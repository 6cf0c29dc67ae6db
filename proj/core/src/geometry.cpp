#include "icp/geometry.hpp"

#include <cmath>
#include <sstream>

#include "icp/complex.hpp"
#include "icp/error.hpp"

namespace icp {

const char* to_string(Geometry g) { return g == Geometry::Euclidean ? "euclidean" : "hyperbolic"; }

void validate(const TwoCircleConfig& cfg) {
  const bool ok = std::isfinite(cfg.r_i) && std::isfinite(cfg.r_j) && cfg.r_i > 0.0 && cfg.r_j > 0.0 &&
                  cfg.theta > 0.0 && cfg.theta < kPi;
  if (!ok) {
    std::ostringstream msg;
    msg << "two-circle config (" << cfg.r_i << ", " << cfg.r_j << ", " << cfg.theta << ") is outside the domain";
    throw Error(ErrorCode::DomainViolation, msg.str());
  }
}

namespace {

void require(const TwoCircleConfig& cfg, Geometry g, const char* what) {
  if (cfg.geometry != g) {
    throw Error(ErrorCode::GeometryMismatch, std::string(what) + " requires " + to_string(g) + " geometry");
  }
}

// cosh(l) - 1 = 2 sinh^2((r_i - r_j)/2) + 2 sinh(r_i) sinh(r_j) cos^2(theta/2).
// Every term is nonnegative, so this has no cancellation as r -> 0.
double cosh_l_minus_one(const TwoCircleConfig& cfg) {
  const double h = std::sinh(0.5 * (cfg.r_i - cfg.r_j));
  const double c = std::cos(0.5 * cfg.theta);
  return 2.0 * h * h + 2.0 * std::sinh(cfg.r_i) * std::sinh(cfg.r_j) * c * c;
}

// l^2 = (r_i - r_j)^2 + 4 r_i r_j cos^2(theta/2).
double euclidean_length_sq(const TwoCircleConfig& cfg) {
  const double d = cfg.r_i - cfg.r_j;
  const double c = std::cos(0.5 * cfg.theta);
  return d * d + 4.0 * cfg.r_i * cfg.r_j * c * c;
}

// Angle at i of the triangle with sides r_i, r_j and included angle pi - theta.
// Euclidean:  tan(theta_i) = r_j sin(theta) / (r_i + r_j cos(theta))
// Hyperbolic: tan(theta_i) = sin(theta) sinh(r_j) / (sinh r_i cosh r_j + cosh r_i sinh r_j cos(theta))
double angle_at_first(const TwoCircleConfig& cfg) {
  const double s = std::sin(cfg.theta);
  const double c = std::cos(cfg.theta);
  if (cfg.geometry == Geometry::Euclidean) {
    return std::atan2(cfg.r_j * s, cfg.r_i + cfg.r_j * c);
  }
  const double shi = std::sinh(cfg.r_i), chi = std::cosh(cfg.r_i);
  const double shj = std::sinh(cfg.r_j), chj = std::cosh(cfg.r_j);
  return std::atan2(s * shj, shi * chj + chi * shj * c);
}

}  // namespace

double edge_length(const TwoCircleConfig& cfg) {
  validate(cfg);
  if (cfg.geometry == Geometry::Euclidean) return std::sqrt(euclidean_length_sq(cfg));
  const double x = cosh_l_minus_one(cfg);
  return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

double inner_angle(const TwoCircleConfig& cfg, End at) {
  validate(cfg);
  return at == End::I ? angle_at_first(cfg) : angle_at_first(cfg.swapped());
}

double triangle_area_hyp(const TwoCircleConfig& cfg) {
  require(cfg, Geometry::Hyperbolic, "triangle_area_hyp");
  validate(cfg);
  return cfg.theta - angle_at_first(cfg) - angle_at_first(cfg.swapped());
}

CornerCoupling corner_coupling(const TwoCircleConfig& cfg) {
  validate(cfg);
  const double s = std::sin(cfg.theta);
  if (cfg.geometry == Geometry::Euclidean) {
    return {cfg.r_i * cfg.r_j * s / euclidean_length_sq(cfg), 1.0};
  }
  const double x = cosh_l_minus_one(cfg);
  const double sinh_l_sq = x * (x + 2.0);
  return {s * std::sinh(cfg.r_i) * std::sinh(cfg.r_j) / sinh_l_sq, 1.0 + x};
}

AnglePartials angle_partials_u(const TwoCircleConfig& cfg) {
  const CornerCoupling k = corner_coupling(cfg);
  return {-k.coupling * k.stretch, k.coupling, k.coupling, -k.coupling * k.stretch};
}

AnglePartials angle_partials(const TwoCircleConfig& cfg) {
  const AnglePartials pu = angle_partials_u(cfg);
  // du/dr = 1/r (Euclidean) or 1/sinh r (hyperbolic)
  const bool euc = cfg.geometry == Geometry::Euclidean;
  const double dui = euc ? 1.0 / cfg.r_i : 1.0 / std::sinh(cfg.r_i);
  const double duj = euc ? 1.0 / cfg.r_j : 1.0 / std::sinh(cfg.r_j);
  return {pu.dthi_dri * dui, pu.dthi_drj * duj, pu.dthj_dri * dui, pu.dthj_drj * duj};
}

double omega(const TwoCircleConfig& cfg) {
  require(cfg, Geometry::Euclidean, "omega");
  return corner_coupling(cfg).coupling;
}

double area_partial_u(const TwoCircleConfig& cfg) {
  require(cfg, Geometry::Hyperbolic, "area_partial_u");
  validate(cfg);
  // -(d theta_i/du_i + d theta_j/du_i) = coupling * (cosh l - 1)
  const double x = cosh_l_minus_one(cfg);
  return std::sin(cfg.theta) * std::sinh(cfg.r_i) * std::sinh(cfg.r_j) / (x + 2.0);
}

}  // namespace icp
