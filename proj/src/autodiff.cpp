#include "chest/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "chest/error.hpp"

namespace chest {

const Tensor& Var::value() const { return tape_->value(id_); }

Var Tape::leaf(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, {}, track_});
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, {}, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, std::span<const Var> parents, BackwardFn fn) {
  bool needs = false;
  for (const Var& p : parents) needs = needs || nodes_[p.id()].needs_grad;
  nodes_.push_back(Node{std::move(value), {}, needs ? std::move(fn) : BackwardFn{}, needs});
  return Var(this, nodes_.size() - 1);
}

std::span<const double> Tape::grad(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.grad;
}

std::span<double> Tape::grad_target(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return {};
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

void Tape::backward(Var root) {
  if (root.value().size() != 1) throw Error(ErrorKind::Dimension, "backward() needs a scalar root");
  for (Node& n : nodes_) n.grad.clear();
  if (!nodes_[root.id()].needs_grad) return;
  grad_target(root.id())[0] = 1.0;
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.fn && !n.grad.empty()) n.fn(*this, i);
  }
}

const Var& ParamVars::operator[](std::string_view name) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return v;
  }
  throw Error(ErrorKind::InvalidInput, "no parameter variable named '" + std::string(name) + "'");
}

const Tensor& GradientReport::grad(std::string_view name) const {
  for (const auto& [n, g] : grads) {
    if (n == name) return g;
  }
  throw Error(ErrorKind::InvalidInput, "no gradient for '" + std::string(name) + "'");
}

namespace {

ParamVars bind(Tape& tape, const ParamSet& params) {
  ParamVars vars;
  for (const auto& [name, t] : params.entries()) vars.add(name, tape.leaf(t));
  return vars;
}

}  // namespace

double evaluate(const LossFn& fn, const ParamSet& params) {
  Tape tape(false);
  const ParamVars vars = bind(tape, params);
  return fn(tape, vars).value().item();
}

GradientReport backward(const LossFn& fn, const ParamSet& params) {
  Tape tape;
  const ParamVars vars = bind(tape, params);
  const Var loss = fn(tape, vars);
  GradientReport report;
  report.loss = loss.value().item();
  if (!std::isfinite(report.loss)) {
    // Implicate parameters whose gradient picks up the non-finite value.
    tape.backward(loss);
    std::string culprits;
    for (const auto& [name, v] : vars.entries()) {
      const auto g = tape.grad(v.id());
      if (std::any_of(g.begin(), g.end(), [](double x) { return !std::isfinite(x); })) {
        culprits += (culprits.empty() ? "" : ", ") + name;
      }
    }
    if (culprits.empty()) culprits = "<loss>";
    throw Error(ErrorKind::Evaluation, "non-finite loss (offending parameter: " + culprits + ")");
  }
  tape.backward(loss);
  for (const auto& [name, v] : vars.entries()) {
    const Tensor& p = v.value();
    Tensor g(p.shape);
    const auto src = tape.grad(v.id());
    if (!src.empty()) std::copy(src.begin(), src.end(), g.data.begin());
    report.finite = report.finite && g.all_finite();
    report.grads.emplace_back(name, std::move(g));
  }
  return report;
}

double relative_error(double a, double b) noexcept {
  const double denom = std::max({std::abs(a), std::abs(b), kRelErrorFloor});
  return std::abs(a - b) / denom;
}

FdReport finite_difference_check(const LossFn& fn, const ParamSet& params, double h, double tol) {
  FdReport report;
  GradientReport analytic;
  try {
    analytic = backward(fn, params);
  } catch (const Error& e) {
    report.pass = false;
    report.entries.push_back(FdEntry{e.what(), INFINITY, 0, false});
    report.max_rel_error = INFINITY;
    return report;
  }
  ParamSet probe = params;
  for (const auto& [name, t] : params.entries()) {
    FdEntry entry;
    entry.name = name;
    const Tensor& g = analytic.grad(name);
    auto vals = probe.values(name);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double x0 = vals[i];
      vals[i] = x0 + h;
      const double fp = evaluate(fn, probe);
      vals[i] = x0 - h;
      const double fm = evaluate(fn, probe);
      vals[i] = x0;
      const double numeric = (fp - fm) / (2.0 * h);
      const double err = std::isfinite(numeric) ? relative_error(g.data[i], numeric) : INFINITY;
      if (err > entry.max_rel_error || (i == 0 && err == 0.0)) {
        entry.max_rel_error = err;
        entry.worst_index = i;
      }
    }
    entry.pass = entry.max_rel_error <= tol;
    report.pass = report.pass && entry.pass;
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace chest
