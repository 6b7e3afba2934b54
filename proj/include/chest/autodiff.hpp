#pragma once

// Reverse-mode differentiation over tensor-valued primitives.
//
// A Tape records each primitive's output value together with a closure that
// propagates the output gradient into its inputs. Primitives live in ops.hpp;
// every one of them carries a hand-derived vector-Jacobian product that is
// checked against central finite differences in the test suite.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "chest/tensor.hpp"

namespace chest {

class Tape;

class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  std::size_t id() const noexcept { return id_; }
  Tape& tape() const noexcept { return *tape_; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  /// A tape built with `track = false` records values only (leaves behave as constants).
  explicit Tape(bool track = true) : track_(track) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value);
  Var constant(Tensor value);
  Var record(Tensor value, std::span<const Var> parents, BackwardFn fn);
  Var record(Tensor value, std::initializer_list<Var> parents, BackwardFn fn) {
    return record(std::move(value), std::span<const Var>(parents.begin(), parents.size()), std::move(fn));
  }

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }

  /// Gradient of the root w.r.t. this node. Empty span for untracked nodes.
  std::span<const double> grad(std::size_t id) const;
  /// Accumulation target for an op's backward; empty span when the input is untracked.
  std::span<double> grad_target(std::size_t id);

  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;
    BackwardFn fn;
    bool needs_grad = false;
  };

  bool track_;
  std::vector<Node> nodes_;
};

/// Named leaf variables for a ParamSet.
class ParamVars {
 public:
  void add(std::string name, Var v) { entries_.emplace_back(std::move(name), v); }
  const Var& operator[](std::string_view name) const;
  const std::vector<std::pair<std::string, Var>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, Var>> entries_;
};

using LossFn = std::function<Var(Tape&, const ParamVars&)>;

struct GradientReport {
  double loss = 0.0;
  std::vector<std::pair<std::string, Tensor>> grads;
  bool finite = true;

  const Tensor& grad(std::string_view name) const;
};

/// Loss value only; no gradient bookkeeping.
double evaluate(const LossFn& fn, const ParamSet& params);

/// Analytic gradients of `fn` at `params`. Throws Error(Evaluation) on a
/// non-finite loss. Never mutates `params`.
GradientReport backward(const LossFn& fn, const ParamSet& params);

inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr double kDefaultFdTolerance = 1e-4;
inline constexpr double kRelErrorFloor = 1e-8;

/// |a - b| / max(|a|, |b|, 1e-8)
double relative_error(double a, double b) noexcept;

struct FdEntry {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  bool pass = true;
};

struct FdReport {
  std::vector<FdEntry> entries;
  double max_rel_error = 0.0;
  bool pass = true;
};

/// Central differences (f(x+h) - f(x-h)) / 2h against backward(), entry by entry.
/// Failures are reported, never thrown.
FdReport finite_difference_check(const LossFn& fn, const ParamSet& params,
                                 double h = kDefaultFdStep, double tol = kDefaultFdTolerance);

}  // namespace chest
