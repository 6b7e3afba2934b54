#pragma once

// Differentiable batched primitives recorded on a Tape. Matrices are row-major;
// any tensor of rank >= 2 is viewed as (rows x last-dim).

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "chest/autodiff.hpp"
#include "chest/geometry.hpp"

namespace chest::ops {

// y[i] = W x[i] + b with W of shape out x in.
Var linear(Var x, Var weight, Var bias);
Var relu(Var x);

// Row-wise feature clipping to Euclidean norm <= radius.
Var clip_rows(Var x, double radius);
// Row-wise exp_0 onto the ball of curvature c.
Var exp_map_zero_rows(Var x, const BallConfig& cfg);
// Row-wise u[i] (+) v[i].
Var mobius_add_rows(Var u, Var v, const BallConfig& cfg);

// B x M matrix of Euclidean distances between rows of x and rows of p.
Var euclidean_distances(Var x, Var p);
// B x M matrix of Poincare distances between rows of x and rows of p.
Var poincare_distances(Var x, Var p, const BallConfig& cfg);
// Length-B vector of Poincare distances between matching rows.
Var poincare_distance_rows(Var u, Var v, const BallConfig& cfg);

// Distances laid out as B x (C*K), class-major. Returns B x C softmin similarities
// S = -sum_k softmax_k(-d/gamma) d_k.
Var softmin_similarity(Var distances, std::size_t per_class, double gamma);

// Margin softmax over class similarities (B x C); returns the per-example
// -log(f+ / (f+ + sum f-)) with f+ = exp(lambda (S_y - delta)), f- = exp(lambda S).
Var soft_triple_rows(Var similarities, std::span<const int> labels, double lambda, double delta);

// Per-triplet hierarchical-clustering regularizer over rows of `points`.
Var hyphc_rows(Var points, std::span<const std::array<std::size_t, 3>> triplets, double gamma_hyp,
               const BallConfig& cfg);

Var mean(Var x);
// sum_i weight_i * term_i over scalar terms.
Var weighted_sum(std::span<const std::pair<Var, double>> terms);
// sum(x * w) for a constant tensor w of the same size.
Var dot_const(Var x, const Tensor& w);
// 0.5 * ||x||^2
Var half_squared_norm(Var x);

namespace grad {

// Accumulate d(distance)/du * gd into gu and d(distance)/dv * gd into gv.
// Either target may be empty. Returns the distance.
double poincare_distance_vjp(std::span<const double> u, std::span<const double> v, double c,
                             double arctanh_eps, double gd, std::span<double> gu,
                             std::span<double> gv) noexcept;

}  // namespace grad
}  // namespace chest::ops
