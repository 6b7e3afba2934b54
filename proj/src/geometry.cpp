#include "chest/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "chest/error.hpp"
#include "chest/simd/kernels.hpp"

namespace chest {
namespace {

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, std::string(what) + " has a non-finite entry");
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::Dimension,
                "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void require_inside(std::span<const double> x, const BallConfig& cfg, const char* what) {
  if (!inside_ball(x, cfg)) {
    throw Error(ErrorKind::Boundary, std::string(what) + " is not strictly inside the ball");
  }
}

}  // namespace

void BallConfig::validate() const {
  std::ostringstream bad;
  if (!(curvature > 0.0) || !std::isfinite(curvature)) bad << " curvature must be > 0;";
  if (!(clip_radius > 0.0) || !std::isfinite(clip_radius)) bad << " clip_radius must be > 0;";
  if (!(boundary_eps > 0.0 && boundary_eps < 1.0)) bad << " boundary_eps must be in (0,1);";
  if (!(arctanh_eps > 0.0 && arctanh_eps < 1e-6)) bad << " arctanh_eps must be in (0,1e-6);";
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "ball config:" + bad.str());
}

bool inside_ball(std::span<const double> x, const BallConfig& cfg) noexcept {
  return cfg.curvature * simd::squared_norm(x) < 1.0;
}

namespace raw {

void mobius_add(std::span<const double> u, std::span<const double> v, double c,
                std::span<double> out) noexcept {
  const double uv = simd::dot(u, v);
  const double uu = simd::squared_norm(u);
  const double vv = simd::squared_norm(v);
  const double a = 1.0 + 2.0 * c * uv + c * vv;
  const double b = 1.0 - c * uu;
  const double denom = 1.0 + 2.0 * c * uv + c * c * uu * vv;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (a * u[i] + b * v[i]) / denom;
}

MobiusCoeffs neg_mobius_coeffs(double uu, double vv, double uv, double c) noexcept {
  // Substitute -u into the Mobius sum: <-u, v> = -uv.
  MobiusCoeffs k{};
  k.alpha = -(1.0 - 2.0 * c * uv + c * vv);
  k.beta = 1.0 - c * uu;
  k.denom = 1.0 - 2.0 * c * uv + c * c * uu * vv;
  return k;
}

double neg_mobius_norm(std::span<const double> u, std::span<const double> v, double c) noexcept {
  const double uu = simd::squared_norm(u);
  const double vv = simd::squared_norm(v);
  const double uv = simd::dot(u, v);
  const MobiusCoeffs k = neg_mobius_coeffs(uu, vv, uv, c);
  return std::sqrt(simd::combo_squared_norm(k.alpha, u, k.beta, v)) / k.denom;
}

double distance_from_norm(double s, double c, double arctanh_eps) noexcept {
  const double sc = std::sqrt(c);
  const double arg = std::min(sc * s, 1.0 - arctanh_eps);
  return 2.0 / sc * std::atanh(arg);
}

double poincare_distance(std::span<const double> u, std::span<const double> v, double c,
                         double arctanh_eps) noexcept {
  return distance_from_norm(neg_mobius_norm(u, v, c), c, arctanh_eps);
}

double euclidean_distance(std::span<const double> u, std::span<const double> v) noexcept {
  return std::sqrt(simd::squared_distance(u, v));
}

double exp_map_zero_scale(double norm, double c) noexcept {
  if (norm < kExpMapZeroThreshold) return 0.0;
  const double s = std::sqrt(c) * norm;
  return std::tanh(s) / s;
}

void exp_map_zero(std::span<const double> x, double c, std::span<double> out) noexcept {
  const double f = exp_map_zero_scale(std::sqrt(simd::squared_norm(x)), c);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
}

double clip_scale(double norm, double radius) noexcept {
  return norm <= radius ? 1.0 : radius / norm;
}

void project_to_ball(std::span<double> x, double c, double boundary_eps) noexcept {
  const double nn = simd::squared_norm(x);
  if (c * nn < 1.0) return;
  const double target = (1.0 - boundary_eps) / std::sqrt(c);
  const double f = target / std::sqrt(nn);
  for (double& v : x) v *= f;
}

void keep_interior(std::span<double> x, double c, double boundary_eps) noexcept {
  const double nn = simd::squared_norm(x);
  if (c * nn < 1.0 - kInteriorMargin) return;
  const double f = (1.0 - boundary_eps) / std::sqrt(c) / std::sqrt(nn);
  for (double& v : x) v *= f;
}

}  // namespace raw

PoincarePoint mobius_add(const PoincarePoint& u, const PoincarePoint& v, const BallConfig& cfg) {
  require_finite(u.span(), "u");
  require_finite(v.span(), "v");
  require_same_dim(u.dim(), v.dim());
  require_inside(u.span(), cfg, "u");
  require_inside(v.span(), cfg, "v");
  PoincarePoint out(std::vector<double>(u.dim()));
  raw::mobius_add(u.span(), v.span(), cfg.curvature, out.coords);
  raw::project_to_ball(out.coords, cfg.curvature, cfg.boundary_eps);
  return out;
}

double poincare_distance(const PoincarePoint& u, const PoincarePoint& v, const BallConfig& cfg) {
  require_finite(u.span(), "u");
  require_finite(v.span(), "v");
  require_same_dim(u.dim(), v.dim());
  require_inside(u.span(), cfg, "u");
  require_inside(v.span(), cfg, "v");
  return raw::poincare_distance(u.span(), v.span(), cfg.curvature, cfg.arctanh_eps);
}

double conformal_factor(const PoincarePoint& x, const BallConfig& cfg) {
  require_finite(x.span(), "x");
  const double cnn = cfg.curvature * simd::squared_norm(x.span());
  if (cnn >= 1.0) throw Error(ErrorKind::Boundary, "conformal factor undefined on or outside the ball boundary");
  return 2.0 / (1.0 - cnn);
}

PoincarePoint exp_map_zero(const EuclideanVector& x, const BallConfig& cfg) {
  require_finite(x.span(), "x");
  PoincarePoint out(std::vector<double>(x.dim()));
  raw::exp_map_zero(x.span(), cfg.curvature, out.coords);
  // tanh saturates to 1 in floating point for large arguments.
  raw::keep_interior(out.coords, cfg.curvature, cfg.boundary_eps);
  return out;
}

PoincarePoint exp_map_anchor(const PoincarePoint& z, const EuclideanVector& x,
                             const BallConfig& cfg) {
  require_finite(z.span(), "z");
  require_finite(x.span(), "x");
  require_same_dim(z.dim(), x.dim());
  const double c = cfg.curvature;
  const double norm = std::sqrt(simd::squared_norm(x.span()));
  std::vector<double> step(x.dim(), 0.0);
  if (norm >= kExpMapZeroThreshold) {
    const double lambda = conformal_factor(z, cfg);
    const double sc = std::sqrt(c);
    const double f = std::tanh(sc * lambda * norm / 2.0) / (sc * norm);
    for (std::size_t i = 0; i < step.size(); ++i) step[i] = f * x.coords[i];
    raw::keep_interior(step, c, cfg.boundary_eps);
  }
  return mobius_add(z, PoincarePoint(std::move(step)), cfg);
}

EuclideanVector clip_features(const EuclideanVector& x, const BallConfig& cfg) {
  require_finite(x.span(), "x");
  const double f = raw::clip_scale(std::sqrt(simd::squared_norm(x.span())), cfg.clip_radius);
  EuclideanVector out(x.coords);
  if (f != 1.0) {
    for (double& v : out.coords) v *= f;
  }
  return out;
}

PoincarePoint project_to_ball(std::span<const double> x, const BallConfig& cfg) {
  require_finite(x, "x");
  PoincarePoint out(std::vector<double>(x.begin(), x.end()));
  raw::project_to_ball(out.coords, cfg.curvature, cfg.boundary_eps);
  return out;
}

}  // namespace chest
