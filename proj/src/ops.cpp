#include "chest/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chest/error.hpp"
#include "chest/simd/kernels.hpp"

namespace chest::ops {
namespace {

void require_cols(const Tensor& a, const Tensor& b, const char* what) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorKind::Dimension, std::string(what) + ": column mismatch " +
                                          std::to_string(a.cols()) + " vs " + std::to_string(b.cols()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape != b.shape) {
    throw Error(ErrorKind::Dimension, std::string(what) + ": shape " + shape_string(a.shape) +
                                          " vs " + shape_string(b.shape));
  }
}

std::span<double> row_of(std::span<double> g, std::size_t i, std::size_t cols) {
  if (g.empty()) return {};
  return g.subspan(i * cols, cols);
}

void add_scaled(std::span<double> target, double alpha, std::span<const double> x) {
  if (!target.empty() && alpha != 0.0) simd::axpy(alpha, x, target);
}

// Log-sum-exp with max subtraction.
double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

Var linear(Var x, Var weight, Var bias) {
  const Tensor& X = x.value();
  const Tensor& W = weight.value();
  const Tensor& b = bias.value();
  if (W.rank() != 2) throw Error(ErrorKind::Dimension, "linear: weight must be rank 2");
  const std::size_t out = W.shape[0];
  const std::size_t in = W.shape[1];
  if (X.cols() != in) {
    throw Error(ErrorKind::Dimension, "linear: input has " + std::to_string(X.cols()) +
                                          " features, weight expects " + std::to_string(in));
  }
  if (b.size() != out) throw Error(ErrorKind::Dimension, "linear: bias size mismatch");
  const std::size_t rows = X.rows();
  Tensor Y({rows, out});
  for (std::size_t i = 0; i < rows; ++i) {
    const auto xi = X.row(i);
    for (std::size_t o = 0; o < out; ++o) Y.data[i * out + o] = simd::dot(W.row(o), xi) + b.data[o];
  }
  return x.tape().record(std::move(Y), {x, weight, bias}, [x, weight, bias, rows, in, out](Tape& t, std::size_t self) {
    const auto gy = t.grad(self);
    const Tensor& X = t.value(x.id());
    const Tensor& W = t.value(weight.id());
    auto gx = t.grad_target(x.id());
    auto gw = t.grad_target(weight.id());
    auto gb = t.grad_target(bias.id());
    for (std::size_t i = 0; i < rows; ++i) {
      const auto xi = X.row(i);
      auto gxi = row_of(gx, i, in);
      for (std::size_t o = 0; o < out; ++o) {
        const double g = gy[i * out + o];
        if (g == 0.0) continue;
        add_scaled(gxi, g, W.row(o));
        add_scaled(row_of(gw, o, in), g, xi);
        if (!gb.empty()) gb[o] += g;
      }
    }
  });
}

Var relu(Var x) {
  Tensor Y = x.value();
  for (double& v : Y.data) v = v > 0.0 ? v : 0.0;
  return x.tape().record(std::move(Y), {x}, [x](Tape& t, std::size_t self) {
    const auto gy = t.grad(self);
    const Tensor& X = t.value(x.id());
    auto gx = t.grad_target(x.id());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (X.data[i] > 0.0) gx[i] += gy[i];
    }
  });
}

Var clip_rows(Var x, double radius) {
  const Tensor& X = x.value();
  Tensor Y = X;
  const std::size_t n = X.cols();
  std::vector<double> norms(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    norms[i] = std::sqrt(simd::squared_norm(X.row(i)));
    const double f = raw::clip_scale(norms[i], radius);
    if (f != 1.0) {
      for (double& v : Y.row(i)) v *= f;
    }
  }
  return x.tape().record(std::move(Y), {x}, [x, radius, n, norms = std::move(norms)](Tape& t, std::size_t self) {
    const auto gy = t.grad(self);
    const Tensor& X = t.value(x.id());
    auto gx = t.grad_target(x.id());
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const auto g = gy.subspan(i * n, n);
      auto gxi = gx.subspan(i * n, n);
      if (norms[i] <= radius) {
        add_scaled(gxi, 1.0, g);
        continue;
      }
      // d(r x / |x|) = (r/|x|) (I - x x^T / |x|^2)
      const auto xi = X.row(i);
      const double f = radius / norms[i];
      const double xg = simd::dot(xi, g);
      add_scaled(gxi, f, g);
      add_scaled(gxi, -f * xg / (norms[i] * norms[i]), xi);
    }
  });
}

Var exp_map_zero_rows(Var x, const BallConfig& cfg) {
  const Tensor& X = x.value();
  const double c = cfg.curvature;
  const std::size_t n = X.cols();
  Tensor Y(X.shape);
  std::vector<double> norms(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    norms[i] = std::sqrt(simd::squared_norm(X.row(i)));
    const double f = raw::exp_map_zero_scale(norms[i], c);
    auto yi = Y.row(i);
    const auto xi = X.row(i);
    for (std::size_t k = 0; k < n; ++k) yi[k] = f * xi[k];
    raw::keep_interior(yi, c, cfg.boundary_eps);
  }
  return x.tape().record(std::move(Y), {x}, [x, c, n, norms = std::move(norms)](Tape& t, std::size_t self) {
    const auto gy = t.grad(self);
    const Tensor& X = t.value(x.id());
    auto gx = t.grad_target(x.id());
    const double sc = std::sqrt(c);
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const auto g = gy.subspan(i * n, n);
      auto gxi = gx.subspan(i * n, n);
      const double norm = norms[i];
      if (norm < kExpMapZeroThreshold) {
        // Derivative of exp_0 at the origin is the identity.
        add_scaled(gxi, 1.0, g);
        continue;
      }
      const double s = sc * norm;
      const double th = std::tanh(s);
      const double f = th / s;
      // (df/dn) / n with f(n) = tanh(sqrt(c) n) / (sqrt(c) n)
      double dfn;
      if (s < 1e-3) {
        dfn = c * (-2.0 / 3.0 + 8.0 * s * s / 15.0);
      } else {
        const double sech2 = 1.0 - th * th;
        dfn = sc * (s * sech2 - th) / (s * s) / norm;
      }
      const auto xi = X.row(i);
      add_scaled(gxi, f, g);
      add_scaled(gxi, dfn * simd::dot(xi, g), xi);
    }
  });
}

Var mobius_add_rows(Var u, Var v, const BallConfig& cfg) {
  const Tensor& U = u.value();
  const Tensor& V = v.value();
  require_same_shape(U, V, "mobius_add_rows");
  const double c = cfg.curvature;
  const std::size_t n = U.cols();
  Tensor Y(U.shape);
  for (std::size_t i = 0; i < U.rows(); ++i) raw::mobius_add(U.row(i), V.row(i), c, Y.row(i));
  return u.tape().record(std::move(Y), {u, v}, [u, v, c, n](Tape& t, std::size_t self) {
    const auto gy = t.grad(self);
    const Tensor& U = t.value(u.id());
    const Tensor& V = t.value(v.id());
    const Tensor& Y = t.value(self);
    auto gu = t.grad_target(u.id());
    auto gv = t.grad_target(v.id());
    for (std::size_t i = 0; i < U.rows(); ++i) {
      const auto a = U.row(i);
      const auto b = V.row(i);
      const auto g = gy.subspan(i * n, n);
      const double ab = simd::dot(a, b);
      const double aa = simd::squared_norm(a);
      const double bb = simd::squared_norm(b);
      const double A = 1.0 + 2.0 * c * ab + c * bb;
      const double B = 1.0 - c * aa;
      const double D = 1.0 + 2.0 * c * ab + c * c * aa * bb;
      // w = N / D with N = A a + B b.
      const double gD = -simd::dot(g, Y.row(i)) / D;
      const double pa = simd::dot(a, g) / D;  // <a, gN>
      const double pb = simd::dot(b, g) / D;  // <b, gN>
      auto gui = row_of(gu, i, n);
      auto gvi = row_of(gv, i, n);
      // dA/da = 2c b, dB/da = -2c a, dD/da = 2c b + 2c^2 |b|^2 a
      add_scaled(gui, A / D, g);
      add_scaled(gui, 2.0 * c * pa + gD * 2.0 * c, b);
      add_scaled(gui, -2.0 * c * pb + gD * 2.0 * c * c * bb, a);
      // dA/db = 2c a + 2c b, dB/db = 0, dD/db = 2c a + 2c^2 |a|^2 b
      add_scaled(gvi, B / D, g);
      add_scaled(gvi, 2.0 * c * pa + gD * 2.0 * c, a);
      add_scaled(gvi, 2.0 * c * pa + gD * 2.0 * c * c * aa, b);
    }
  });
}

namespace grad {

double poincare_distance_vjp(std::span<const double> u, std::span<const double> v, double c,
                             double arctanh_eps, double gd, std::span<double> gu,
                             std::span<double> gv) noexcept {
  // Work with a = -u, b = v so that w = a (+) b = (A a + B b) / D.
  const double aa = simd::squared_norm(u);
  const double bb = simd::squared_norm(v);
  const double ab = -simd::dot(u, v);
  const double A = 1.0 + 2.0 * c * ab + c * bb;
  const double B = 1.0 - c * aa;
  const double D = 1.0 + 2.0 * c * ab + c * c * aa * bb;
  const double s = std::sqrt(simd::combo_squared_norm(-A, u, B, v)) / D;
  const double sc = std::sqrt(c);
  const double arg = sc * s;
  const double limit = 1.0 - arctanh_eps;
  const double dist = 2.0 / sc * std::atanh(std::min(arg, limit));
  if (gd == 0.0 || arg >= limit || s == 0.0) return dist;

  const double gs = gd * 2.0 / (1.0 - arg * arg);
  // gw = (gs / s) w; gN = gw / D = m (A a + B b)
  const double m = gs / (s * D * D);
  const double gD = -gs * s / D;
  const double pa = m * (A * aa + B * ab);
  const double pb = m * (A * ab + B * bb);
  // ga = ka_a a + ka_b b ; gb = kb_a a + kb_b b
  const double ka_a = A * m * A - 2.0 * c * pb + gD * 2.0 * c * c * bb;
  const double ka_b = A * m * B + 2.0 * c * pa + 2.0 * c * gD;
  const double kb_a = B * m * A + 2.0 * c * pa + 2.0 * c * gD;
  const double kb_b = B * m * B + 2.0 * c * pa + 2.0 * c * c * aa * gD;
  // a = -u: gu = -ga = ka_a u - ka_b v ; gv = gb = -kb_a u + kb_b v
  add_scaled(gu, ka_a, u);
  add_scaled(gu, -ka_b, v);
  add_scaled(gv, -kb_a, u);
  add_scaled(gv, kb_b, v);
  return dist;
}

}  // namespace grad

Var euclidean_distances(Var x, Var p) {
  const Tensor& X = x.value();
  const Tensor& P = p.value();
  require_cols(X, P, "euclidean_distances");
  const std::size_t rows = X.rows();
  const std::size_t m = P.rows();
  Tensor Dm({rows, m});
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < m; ++j) Dm.data[i * m + j] = raw::euclidean_distance(X.row(i), P.row(j));
  }
  return x.tape().record(std::move(Dm), {x, p}, [x, p, rows, m](Tape& t, std::size_t self) {
    const auto gd = t.grad(self);
    const Tensor& X = t.value(x.id());
    const Tensor& P = t.value(p.id());
    const Tensor& Dm = t.value(self);
    const std::size_t n = X.cols();
    auto gx = t.grad_target(x.id());
    auto gp = t.grad_target(p.id());
    for (std::size_t i = 0; i < rows; ++i) {
      auto gxi = row_of(gx, i, n);
      for (std::size_t j = 0; j < m; ++j) {
        const double d = Dm.data[i * m + j];
        const double g = gd[i * m + j];
        if (d == 0.0 || g == 0.0) continue;
        const double k = g / d;
        auto gpj = row_of(gp, j, n);
        add_scaled(gxi, k, X.row(i));
        add_scaled(gxi, -k, P.row(j));
        add_scaled(gpj, k, P.row(j));
        add_scaled(gpj, -k, X.row(i));
      }
    }
  });
}

Var poincare_distances(Var x, Var p, const BallConfig& cfg) {
  const Tensor& X = x.value();
  const Tensor& P = p.value();
  require_cols(X, P, "poincare_distances");
  const std::size_t rows = X.rows();
  const std::size_t m = P.rows();
  const double c = cfg.curvature;
  const double eps = cfg.arctanh_eps;
  Tensor Dm({rows, m});
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < m; ++j) Dm.data[i * m + j] = raw::poincare_distance(X.row(i), P.row(j), c, eps);
  }
  return x.tape().record(std::move(Dm), {x, p}, [x, p, rows, m, c, eps](Tape& t, std::size_t self) {
    const auto gd = t.grad(self);
    const Tensor& X = t.value(x.id());
    const Tensor& P = t.value(p.id());
    const std::size_t n = X.cols();
    auto gx = t.grad_target(x.id());
    auto gp = t.grad_target(p.id());
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double g = gd[i * m + j];
        if (g == 0.0) continue;
        grad::poincare_distance_vjp(X.row(i), P.row(j), c, eps, g, row_of(gx, i, n), row_of(gp, j, n));
      }
    }
  });
}

Var poincare_distance_rows(Var u, Var v, const BallConfig& cfg) {
  const Tensor& U = u.value();
  const Tensor& V = v.value();
  require_same_shape(U, V, "poincare_distance_rows");
  const double c = cfg.curvature;
  const double eps = cfg.arctanh_eps;
  Tensor d({U.rows()});
  for (std::size_t i = 0; i < U.rows(); ++i) d.data[i] = raw::poincare_distance(U.row(i), V.row(i), c, eps);
  return u.tape().record(std::move(d), {u, v}, [u, v, c, eps](Tape& t, std::size_t self) {
    const auto gd = t.grad(self);
    const Tensor& U = t.value(u.id());
    const Tensor& V = t.value(v.id());
    const std::size_t n = U.cols();
    auto gu = t.grad_target(u.id());
    auto gv = t.grad_target(v.id());
    for (std::size_t i = 0; i < U.rows(); ++i) {
      grad::poincare_distance_vjp(U.row(i), V.row(i), c, eps, gd[i], row_of(gu, i, n), row_of(gv, i, n));
    }
  });
}

Var softmin_similarity(Var distances, std::size_t per_class, double gamma) {
  const Tensor& Dm = distances.value();
  if (per_class == 0) throw Error(ErrorKind::EmptyProxy, "softmin similarity needs at least one proxy per class");
  if (Dm.cols() % per_class != 0) {
    throw Error(ErrorKind::Dimension, "distance columns not a multiple of proxies per class");
  }
  const std::size_t rows = Dm.rows();
  const std::size_t classes = Dm.cols() / per_class;
  const std::size_t K = per_class;
  Tensor S({rows, classes});
  std::vector<double> weights(Dm.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      const double* d = Dm.data.data() + i * Dm.cols() + c * K;
      double* w = weights.data() + i * Dm.cols() + c * K;
      double dmin = d[0];
      for (std::size_t k = 1; k < K; ++k) dmin = std::min(dmin, d[k]);
      double z = 0.0;
      for (std::size_t k = 0; k < K; ++k) z += (w[k] = std::exp(-(d[k] - dmin) / gamma));
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        w[k] /= z;
        s -= w[k] * d[k];
      }
      S.data[i * classes + c] = s;
    }
  }
  return distances.tape().record(std::move(S), {distances}, [distances, K, classes, gamma, weights = std::move(weights)](Tape& t, std::size_t self) {
    const auto gs = t.grad(self);
    const Tensor& Dm = t.value(distances.id());
    const Tensor& S = t.value(self);
    auto gd = t.grad_target(distances.id());
    for (std::size_t i = 0; i < Dm.rows(); ++i) {
      for (std::size_t c = 0; c < classes; ++c) {
        const double g = gs[i * classes + c];
        const double s = S.data[i * classes + c];
        const std::size_t base = i * Dm.cols() + c * K;
        // dS/dd_k = w_k (-1 + (d_k + S) / gamma)
        for (std::size_t k = 0; k < K; ++k) {
          gd[base + k] += g * weights[base + k] * (-1.0 + (Dm.data[base + k] + s) / gamma);
        }
      }
    }
  });
}

Var soft_triple_rows(Var similarities, std::span<const int> labels, double lambda, double delta) {
  const Tensor& S = similarities.value();
  const std::size_t rows = S.rows();
  const std::size_t classes = S.cols();
  if (classes < 2) throw Error(ErrorKind::DegenerateProblem, "margin softmax needs at least 2 classes");
  if (labels.size() != rows) {
    throw Error(ErrorKind::Dimension, "got " + std::to_string(labels.size()) + " labels for " +
                                          std::to_string(rows) + " rows");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
      throw Error(ErrorKind::Index, "label " + std::to_string(labels[i]) + " at row " +
                                        std::to_string(i) + " outside [0, " + std::to_string(classes) + ")");
    }
  }
  Tensor L({rows});
  std::vector<double> probs(S.size());
  std::vector<double> z(classes);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto si = S.row(i);
    const auto y = static_cast<std::size_t>(labels[i]);
    for (std::size_t c = 0; c < classes; ++c) z[c] = lambda * (si[c] - (c == y ? delta : 0.0));
    const double lse = log_sum_exp(z);
    L.data[i] = lse - z[y];
    for (std::size_t c = 0; c < classes; ++c) probs[i * classes + c] = std::exp(z[c] - lse);
  }
  std::vector<int> owned(labels.begin(), labels.end());
  return similarities.tape().record(std::move(L), {similarities}, [similarities, classes, lambda, probs = std::move(probs), owned = std::move(owned)](Tape& t, std::size_t self) {
    const auto gl = t.grad(self);
    auto gs = t.grad_target(similarities.id());
    for (std::size_t i = 0; i < owned.size(); ++i) {
      const auto y = static_cast<std::size_t>(owned[i]);
      for (std::size_t c = 0; c < classes; ++c) {
        gs[i * classes + c] += gl[i] * lambda * (probs[i * classes + c] - (c == y ? 1.0 : 0.0));
      }
    }
  });
}

Var hyphc_rows(Var points, std::span<const std::array<std::size_t, 3>> triplets, double gamma_hyp,
               const BallConfig& cfg) {
  const Tensor& P = points.value();
  const double c = cfg.curvature;
  const double eps = cfg.arctanh_eps;
  for (const auto& tr : triplets) {
    for (std::size_t r : tr) {
      if (r >= P.rows()) throw Error(ErrorKind::Index, "triplet row " + std::to_string(r) + " out of range");
    }
  }
  // Pairs (0,1), (0,2), (1,2) in the order j < k.
  static constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  Tensor L({triplets.size()});
  std::vector<double> dists(3 * triplets.size());
  for (std::size_t m = 0; m < triplets.size(); ++m) {
    const auto& tr = triplets[m];
    std::array<double, 3> d{}, s{}, w{};
    for (int p = 0; p < 3; ++p) {
      d[p] = raw::poincare_distance(P.row(tr[kPairs[p][0]]), P.row(tr[kPairs[p][1]]), c, eps);
      s[p] = std::exp(-d[p]);
      dists[3 * m + p] = d[p];
    }
    const double dmax = std::max({d[0], d[1], d[2]});
    double z = 0.0;
    for (int p = 0; p < 3; ++p) z += (w[p] = std::exp((d[p] - dmax) / gamma_hyp));
    double total = 0.0;
    for (int p = 0; p < 3; ++p) total += s[p] - s[p] * w[p] / z;
    L.data[m] = total;
  }
  std::vector<std::array<std::size_t, 3>> owned(triplets.begin(), triplets.end());
  return points.tape().record(std::move(L), {points}, [points, gamma_hyp, c, eps, owned = std::move(owned), dists = std::move(dists)](Tape& t, std::size_t self) {
    const auto gl = t.grad(self);
    const Tensor& P = t.value(points.id());
    const std::size_t n = P.cols();
    auto gp = t.grad_target(points.id());
    for (std::size_t m = 0; m < owned.size(); ++m) {
      if (gl[m] == 0.0) continue;
      const auto& tr = owned[m];
      std::array<double, 3> d{}, s{}, w{};
      for (int p = 0; p < 3; ++p) {
        d[p] = dists[3 * m + p];
        s[p] = std::exp(-d[p]);
      }
      const double dmax = std::max({d[0], d[1], d[2]});
      double z = 0.0;
      for (int p = 0; p < 3; ++p) z += (w[p] = std::exp((d[p] - dmax) / gamma_hyp));
      double weighted = 0.0;
      for (int p = 0; p < 3; ++p) {
        w[p] /= z;
        weighted += s[p] * w[p];
      }
      for (int p = 0; p < 3; ++p) {
        // dL/dd_p = -S_p + S_p w_p - (w_p / gamma)(S_p - sum_q S_q w_q)
        const double dl = -s[p] + s[p] * w[p] - w[p] / gamma_hyp * (s[p] - weighted);
        const std::size_t ra = tr[kPairs[p][0]];
        const std::size_t rb = tr[kPairs[p][1]];
        grad::poincare_distance_vjp(P.row(ra), P.row(rb), c, eps, gl[m] * dl, row_of(gp, ra, n),
                                    row_of(gp, rb, n));
      }
    }
  });
}

Var mean(Var x) {
  const Tensor& X = x.value();
  if (X.size() == 0) throw Error(ErrorKind::Size, "mean of an empty tensor");
  double s = 0.0;
  for (double v : X.data) s += v;
  const double inv = 1.0 / static_cast<double>(X.size());
  return x.tape().record(Tensor::scalar(s * inv), {x}, [x, inv](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0] * inv;
    for (double& v : t.grad_target(x.id())) v += g;
  });
}

Var weighted_sum(std::span<const std::pair<Var, double>> terms) {
  if (terms.empty()) throw Error(ErrorKind::Size, "weighted_sum of no terms");
  Tape& tape = terms.front().first.tape();
  double total = 0.0;
  for (const auto& [v, w] : terms) {
    if (w != 0.0) total += w * v.value().item();
  }
  std::vector<std::pair<Var, double>> owned(terms.begin(), terms.end());
  std::vector<Var> parents;
  for (const auto& [v, w] : owned) parents.push_back(v);
  return tape.record(Tensor::scalar(total), parents, [owned = std::move(owned)](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    for (const auto& [v, w] : owned) {
      auto target = t.grad_target(v.id());
      if (!target.empty()) target[0] += w * g;
    }
  });
}

Var dot_const(Var x, const Tensor& w) {
  const Tensor& X = x.value();
  if (X.size() != w.size()) throw Error(ErrorKind::Dimension, "dot_const: size mismatch");
  const double s = simd::dot(X.data, w.data);
  return x.tape().record(Tensor::scalar(s), {x}, [x, w](Tape& t, std::size_t self) {
    add_scaled(t.grad_target(x.id()), t.grad(self)[0], w.data);
  });
}

Var half_squared_norm(Var x) {
  const double s = 0.5 * simd::squared_norm(x.value().data);
  return x.tape().record(Tensor::scalar(s), {x}, [x](Tape& t, std::size_t self) {
    add_scaled(t.grad_target(x.id()), t.grad(self)[0], t.value(x.id()).data);
  });
}

}  // namespace chest::ops
