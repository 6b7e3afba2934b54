#pragma once

// Poincare-ball primitives: Mobius addition, geodesic distance, conformal
// factor, exponential maps, feature clipping and boundary projection.
//
// Ball membership is c * ||x||^2 < 1. All arithmetic is double precision.
// The typed overloads validate their inputs; the `raw` namespace holds the
// unchecked span versions used by batched code paths.

#include <cstddef>
#include <span>
#include <vector>

namespace chest {

inline constexpr double kDefaultCurvature = 0.5;
inline constexpr double kDefaultClipRadius = 2.3;
inline constexpr double kDefaultBoundaryEps = 1e-5;
inline constexpr double kDefaultArctanhEps = 1e-15;
// ||x|| below this is treated as the zero tangent vector by the exponential maps.
inline constexpr double kExpMapZeroThreshold = 1e-12;

struct BallConfig {
  double curvature = kDefaultCurvature;
  double clip_radius = kDefaultClipRadius;
  double boundary_eps = kDefaultBoundaryEps;
  double arctanh_eps = kDefaultArctanhEps;

  /// Throws Error(Validation) when any field is out of range.
  void validate() const;
};

struct EuclideanVector {
  std::vector<double> coords;

  EuclideanVector() = default;
  explicit EuclideanVector(std::vector<double> c) : coords(std::move(c)) {}
  EuclideanVector(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const noexcept { return coords.size(); }
  std::span<const double> span() const noexcept { return coords; }
};

struct PoincarePoint {
  std::vector<double> coords;

  PoincarePoint() = default;
  explicit PoincarePoint(std::vector<double> c) : coords(std::move(c)) {}
  PoincarePoint(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const noexcept { return coords.size(); }
  std::span<const double> span() const noexcept { return coords; }
};

bool inside_ball(std::span<const double> x, const BallConfig& cfg) noexcept;

PoincarePoint mobius_add(const PoincarePoint& u, const PoincarePoint& v, const BallConfig& cfg);
double poincare_distance(const PoincarePoint& u, const PoincarePoint& v, const BallConfig& cfg);
double conformal_factor(const PoincarePoint& x, const BallConfig& cfg);
PoincarePoint exp_map_zero(const EuclideanVector& x, const BallConfig& cfg);
// Gyrovector form z (+) tanh(sqrt(c) * lambda_z * ||x|| / 2) * x / (sqrt(c) ||x||).
PoincarePoint exp_map_anchor(const PoincarePoint& z, const EuclideanVector& x,
                             const BallConfig& cfg);
EuclideanVector clip_features(const EuclideanVector& x, const BallConfig& cfg);
PoincarePoint project_to_ball(std::span<const double> x, const BallConfig& cfg);

namespace raw {

// out may alias neither u nor v.
void mobius_add(std::span<const double> u, std::span<const double> v, double c,
                std::span<double> out) noexcept;

// Coefficients of (-u) (+) v = (alpha * u + beta * v) / denom, built from the
// three inner products only.
struct MobiusCoeffs {
  double alpha;
  double beta;
  double denom;
};
MobiusCoeffs neg_mobius_coeffs(double uu, double vv, double uv, double c) noexcept;

// ||(-u) (+) v||, the argument of the distance before scaling by sqrt(c).
double neg_mobius_norm(std::span<const double> u, std::span<const double> v, double c) noexcept;

// 2/sqrt(c) * artanh(min(sqrt(c) * s, 1 - arctanh_eps)).
double distance_from_norm(double s, double c, double arctanh_eps) noexcept;

double poincare_distance(std::span<const double> u, std::span<const double> v, double c,
                         double arctanh_eps) noexcept;
double euclidean_distance(std::span<const double> u, std::span<const double> v) noexcept;

// Scale factor f such that exp_0(x) = f * x.
double exp_map_zero_scale(double norm, double c) noexcept;
void exp_map_zero(std::span<const double> x, double c, std::span<double> out) noexcept;

// Scale factor such that clip(x) = f * x.
double clip_scale(double norm, double radius) noexcept;

void project_to_ball(std::span<double> x, double c, double boundary_eps) noexcept;

// Like project_to_ball, but also pulls in points within a few ulps of the
// boundary, where the membership test depends on summation order.
inline constexpr double kInteriorMargin = 1e-12;
void keep_interior(std::span<double> x, double c, double boundary_eps) noexcept;

}  // namespace raw
}  // namespace chest
