#include "chest/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

#include "chest/autodiff.hpp"
#include "chest/geometry.hpp"
#include "chest/losses.hpp"
#include "chest/model.hpp"
#include "chest/ops.hpp"
#include "chest/train.hpp"

namespace chest {

bool CheckReport::pass() const noexcept {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass; });
}

namespace {

using Clock = std::chrono::steady_clock;

// Uniform direction, norm uniform in [0, max_norm].
std::vector<double> random_in_ball(std::mt19937_64& rng, std::size_t dim, double max_norm) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(dim);
  double nn = 0.0;
  for (double& x : v) {
    x = gauss(rng);
    nn += x * x;
  }
  const double scale = unit(rng) * max_norm / std::sqrt(nn);
  for (double& x : v) x *= scale;
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

CheckReport run_geometry_suite(const GeometrySuiteOptions& opts) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "geometry";
  std::mt19937_64 rng(opts.seed);
  const std::size_t n = opts.dim;
  const std::size_t N = opts.samples;

  for (double c : opts.curvatures) {
    BallConfig cfg;
    cfg.curvature = c;
    const double rmax = 0.9 / std::sqrt(c);
    CheckItem identity{"mobius_add left identity", c, N, 0.0, 1e-12};
    CheckItem cancel{"mobius_add cancellation u+(-u)", c, N, 0.0, 1e-12};
    CheckItem symmetry{"distance symmetry", c, N, 0.0, 1e-10};
    CheckItem self{"distance D(u,u) = 0", c, N, 0.0, 1e-12};
    CheckItem nonneg{"distance non-negativity", c, N, 0.0, 0.0};
    CheckItem triangle{"triangle inequality violation", c, N, 0.0, 1e-9};
    CheckItem closure{"exp_map_zero in-ball (max c|y|^2, must be < 1)", c, N, 0.0, 1.0};
    CheckItem proj{"mobius_add in-ball (max c|y|^2, must be < 1)", c, N, 0.0, 1.0};
    std::uniform_real_distribution<double> wide(0.0, 50.0);
    for (std::size_t s = 0; s < N; ++s) {
      const PoincarePoint u(random_in_ball(rng, n, rmax));
      const PoincarePoint v(random_in_ball(rng, n, rmax));
      const PoincarePoint w(random_in_ball(rng, n, rmax));
      const PoincarePoint zero(std::vector<double>(n, 0.0));
      std::vector<double> neg(u.coords);
      for (double& x : neg) x = -x;

      identity.max_error = std::max(identity.max_error, max_abs_diff(mobius_add(zero, v, cfg).coords, v.coords));
      cancel.max_error = std::max(cancel.max_error, norm(mobius_add(u, PoincarePoint(neg), cfg).coords));
      const double duv = poincare_distance(u, v, cfg);
      const double dvu = poincare_distance(v, u, cfg);
      const double dvw = poincare_distance(v, w, cfg);
      const double duw = poincare_distance(u, w, cfg);
      symmetry.max_error = std::max(symmetry.max_error, std::abs(duv - dvu));
      self.max_error = std::max(self.max_error, std::abs(poincare_distance(u, u, cfg)));
      nonneg.max_error = std::max({nonneg.max_error, -duv, -dvw, -duw});
      triangle.max_error = std::max(triangle.max_error, duw - duv - dvw);

      // Tangent vectors far beyond the clip radius exercise tanh saturation.
      const EuclideanVector x(random_in_ball(rng, n, wide(rng)));
      const PoincarePoint y = exp_map_zero(x, cfg);
      const double cy = c * norm(y.coords) * norm(y.coords);
      closure.max_error = std::max(closure.max_error, cy);
      const PoincarePoint sum = mobius_add(u, v, cfg);
      const double cs = c * norm(sum.coords) * norm(sum.coords);
      proj.max_error = std::max(proj.max_error, cs);
    }
    CheckItem anchor{"exp_map_anchor(0,x) = exp_map_zero(x)", c, opts.anchor_samples, 0.0, 1e-12};
    for (std::size_t s = 0; s < opts.anchor_samples; ++s) {
      const EuclideanVector x(random_in_ball(rng, n, 3.0));
      const PoincarePoint zero(std::vector<double>(n, 0.0));
      anchor.max_error = std::max(anchor.max_error, max_abs_diff(exp_map_anchor(zero, x, cfg).coords, exp_map_zero(x, cfg).coords));
    }
    for (CheckItem* item : {&identity, &cancel, &symmetry, &self, &nonneg, &triangle, &anchor}) {
      item->pass = item->max_error <= item->tolerance;
    }
    closure.pass = closure.max_error < 1.0;
    proj.pass = proj.max_error < 1.0;
    for (CheckItem* item : {&identity, &cancel, &symmetry, &self, &nonneg, &triangle, &closure, &proj, &anchor}) {
      report.items.push_back(*item);
    }
  }

  // c -> 0: D_H(u, v) -> 2 |u - v|.
  {
    BallConfig cfg;
    cfg.curvature = 1e-6;
    CheckItem limit{"small-curvature limit |D - 2|u-v|| / 2|u-v|", cfg.curvature, N, 0.0, 1e-4};
    for (std::size_t s = 0; s < N; ++s) {
      const PoincarePoint u(random_in_ball(rng, n, 0.5));
      const PoincarePoint v(random_in_ball(rng, n, 0.5));
      double e2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) e2 += (u.coords[i] - v.coords[i]) * (u.coords[i] - v.coords[i]);
      const double e = 2.0 * std::sqrt(e2);
      if (e < 1e-6) continue;
      limit.max_error = std::max(limit.max_error, std::abs(poincare_distance(u, v, cfg) - e) / e);
    }
    limit.pass = limit.max_error <= limit.tolerance;
    report.items.push_back(limit);
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

namespace {

Tensor random_tensor(std::mt19937_64& rng, std::vector<std::size_t> shape, double stddev) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> g(0.0, stddev);
  for (double& v : t.data) v = g(rng);
  return t;
}

Tensor random_ball_rows(std::mt19937_64& rng, std::size_t rows, std::size_t dim, double max_norm) {
  Tensor t({rows, dim});
  for (std::size_t r = 0; r < rows; ++r) {
    const auto v = random_in_ball(rng, dim, max_norm);
    std::copy(v.begin(), v.end(), t.row(r).begin());
  }
  return t;
}

struct GradCase {
  const char* name;
  std::function<std::pair<LossFn, ParamSet>(std::mt19937_64&)> make;
};

}  // namespace

CheckReport run_gradient_suite(const GradientSuiteOptions& opts) {
  const auto start = Clock::now();
  CheckReport report;
  report.suite = "gradient";
  BallConfig ball;
  ball.curvature = opts.curvature;
  ball.clip_radius = opts.clip_radius;
  const double rmax = 0.9 / std::sqrt(ball.curvature);
  std::uniform_int_distribution<std::size_t> dim_pick(2, 6);

  const std::vector<GradCase> cases{
      {"poincare distance",
       [&](std::mt19937_64& rng) {
         const std::size_t n = dim_pick(rng);
         ParamSet p;
         p.add("u", random_ball_rows(rng, 1, n, rmax));
         p.add("v", random_ball_rows(rng, 1, n, rmax));
         LossFn fn = [ball](Tape&, const ParamVars& v) { return ops::mean(ops::poincare_distance_rows(v["u"], v["v"], ball)); };
         return std::pair{fn, p};
       }},
      {"mobius addition",
       [&](std::mt19937_64& rng) {
         const std::size_t n = dim_pick(rng);
         ParamSet p;
         p.add("u", random_ball_rows(rng, 2, n, rmax));
         p.add("v", random_ball_rows(rng, 2, n, rmax));
         const Tensor w = random_tensor(rng, {2, n}, 1.0);
         LossFn fn = [ball, w](Tape&, const ParamVars& v) { return ops::dot_const(ops::mobius_add_rows(v["u"], v["v"], ball), w); };
         return std::pair{fn, p};
       }},
      {"exp_map_zero",
       [&](std::mt19937_64& rng) {
         const std::size_t n = dim_pick(rng);
         ParamSet p;
         p.add("x", random_tensor(rng, {2, n}, 0.8));
         const Tensor w = random_tensor(rng, {2, n}, 1.0);
         LossFn fn = [ball, w](Tape&, const ParamVars& v) { return ops::dot_const(ops::exp_map_zero_rows(v["x"], ball), w); };
         return std::pair{fn, p};
       }},
      {"clip + exp_map_zero",
       [&](std::mt19937_64& rng) {
         const std::size_t n = dim_pick(rng);
         ParamSet p;
         p.add("x", random_tensor(rng, {2, n}, 3.0));
         const Tensor w = random_tensor(rng, {2, n}, 1.0);
         LossFn fn = [ball, w](Tape&, const ParamVars& v) {
           return ops::dot_const(ops::exp_map_zero_rows(ops::clip_rows(v["x"], ball.clip_radius), ball), w);
         };
         return std::pair{fn, p};
       }},
      {"softmin similarity",
       [&](std::mt19937_64& rng) {
         std::uniform_real_distribution<double> dist(0.1, 4.0);
         const std::size_t K = dim_pick(rng) - 1;
         Tensor d({3, 2 * K});
         for (double& v : d.data) v = dist(rng);
         ParamSet p;
         p.add("d", d);
         const Tensor w = random_tensor(rng, {3, 2}, 1.0);
         LossFn fn = [K, w](Tape&, const ParamVars& v) { return ops::dot_const(ops::softmin_similarity(v["d"], K, kDefaultGamma), w); };
         return std::pair{fn, p};
       }},
      {"similarity loss",
       [&](std::mt19937_64& rng) {
         const std::size_t C = 4, K = 2, B = 5, dE = 4, dH = 3;
         ParamSet p;
         // Small embeddings keep the margin softmax away from saturation,
         // where gradients shrink below the finite-difference noise floor.
         p.add("x_E", random_tensor(rng, {B, dE}, 0.15));
         p.add("proxies", random_tensor(rng, {C, K, dE}, 0.15));
         p.add("head.weight", random_tensor(rng, {dH, dE}, 1.0));
         p.add("head.bias", random_tensor(rng, {dH}, 0.1));
         std::vector<int> labels(B);
         std::uniform_int_distribution<int> lab(0, static_cast<int>(C) - 1);
         for (int& l : labels) l = lab(rng);
         LossParams lp;
         lp.delta_E = 0.1;
         lp.delta_H = 0.1;
         LossFn fn = [ball, labels, lp, K](Tape&, const ParamVars& v) {
           const Var xH = map_graph(v["head.weight"], v["head.bias"], v["x_E"], ball);
           const Var pH = map_graph(v["head.weight"], v["head.bias"], v["proxies"], ball);
           const auto s = loss_graph::similarity(v["x_E"], xH, labels, v["proxies"], pH, K, lp, ball);
           const std::array<std::pair<Var, double>, 2> terms{{{s.l_hyperbolic, lp.eta_H}, {s.l_euclidean, lp.eta_E}}};
           return ops::weighted_sum(terms);
         };
         return std::pair{fn, p};
       }},
      {"hyphc regularization",
       [&](std::mt19937_64& rng) {
         const std::size_t C = 3, K = 2, n = dim_pick(rng);
         ParamSet p;
         p.add("p_H", random_ball_rows(rng, C * K, n, rmax));
         Rng trng(rng());
         const auto triplets = sample_triplets(C, K, 4, trng);
         LossFn fn = [ball, triplets, K](Tape&, const ParamVars& v) {
           return loss_graph::hyphc(v["p_H"], triplets, K, kDefaultGammaHyp, ball);
         };
         return std::pair{fn, p};
       }},
      {"combined loss",
       [&](std::mt19937_64& rng) {
         ModelDims dims{EncoderSpec{EncoderKind::Mlp2, 5, 4, 6}, 3, 3, 2};
         ParamSet init = init_params(rng(), dims);
         // Rescale so distances are O(1) and no term is saturated.
         ParamSet p;
         for (const auto& [name, t] : init.entries()) {
           Tensor s = t;
           const bool bias = name.find(".b") != std::string::npos;
           for (double& v : s.data) v = bias ? 0.05 : v * 20.0;
           p.add(name, s);
         }
         const Tensor inputs = random_tensor(rng, {6, 5}, 1.0);
         std::vector<int> labels{0, 1, 2, 0, 1, 2};
         Rng trng(rng());
         const auto triplets = sample_triplets(3, 2, 3, trng);
         LossParams lp;
         lp.delta_E = 0.1;
         lp.delta_H = 0.1;
         LossFn fn = [ball, dims, inputs, labels, triplets, lp](Tape& t, const ParamVars& v) {
           const Var xE = encode_graph(v, dims.encoder, t.constant(inputs));
           const Var w = v[param_names::kHeadWeight];
           const Var b = v[param_names::kHeadBias];
           const Var xH = map_graph(w, b, xE, ball);
           const Var pH = map_graph(w, b, v[param_names::kProxies], ball);
           const auto s = loss_graph::similarity(xE, xH, labels, v[param_names::kProxies], pH, dims.per_class, lp, ball);
           const Var reg = loss_graph::hyphc(pH, triplets, dims.per_class, lp.gamma_hyp, ball);
           return loss_graph::combined(s.l_hyperbolic, s.l_euclidean, reg, lp);
         };
         return std::pair{fn, p};
       }},
  };

  std::mt19937_64 rng(opts.seed);
  for (const GradCase& gc : cases) {
    CheckItem item{gc.name, ball.curvature, opts.configurations, 0.0, opts.tolerance};
    for (std::size_t i = 0; i < opts.configurations; ++i) {
      auto [fn, params] = gc.make(rng);
      const FdReport fd = finite_difference_check(fn, params, opts.step, opts.tolerance);
      item.max_error = std::max(item.max_error, fd.max_rel_error);
    }
    item.pass = item.max_error <= item.tolerance;
    report.items.push_back(item);
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

void print_report(std::ostream& out, const CheckReport& report) {
  out << "suite " << report.suite << ": " << (report.pass() ? "PASS" : "FAIL") << " (" << std::fixed
      << std::setprecision(2) << report.seconds << " s)\n";
  out << std::defaultfloat;
  for (const CheckItem& i : report.items) {
    out << "  [" << (i.pass ? "PASS" : "FAIL") << "] " << i.name << "  c=" << i.curvature
        << "  n=" << i.samples << "  max_err=" << std::setprecision(6) << std::scientific << i.max_error
        << "  tol=" << i.tolerance << std::defaultfloat << '\n';
  }
}

}  // namespace chest
