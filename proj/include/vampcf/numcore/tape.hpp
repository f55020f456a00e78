#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>

#include "vampcf/numcore/matrix.hpp"

namespace vampcf::numcore {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid for the tape's lifetime.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  const Matrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode gradient tape. Nodes are appended in evaluation order;
/// backward() walks them once in reverse, calling each op's local
/// gradient rule and finally flushing leaf gradients into their sinks.
///
/// A tape is confined to one thread. Parameter and constant_ref nodes
/// reference caller-owned matrices that must outlive the tape.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, Var self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var constant_ref(const Matrix& value);
  Var constant_ref(Matrix&&) = delete;
  /// Leaf whose gradient is added to *grad_sink by backward(). A null sink
  /// makes the node behave like a constant.
  Var parameter(const Matrix& value, Matrix* grad_sink);
  Var parameter(Matrix&&, Matrix*) = delete;

  /// Appends an op node. `fn` is dropped when no input requires a gradient.
  Var record(Matrix value, std::initializer_list<Var> inputs, BackwardFn fn);

  const Matrix& value(Var v) const;
  bool requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }

  /// Gradient accumulator of a node, zero-initialized on first access.
  Matrix& grad(Var v);
  /// Accumulated gradient after backward(); null when nothing reached the node.
  const Matrix* grad_if_any(Var v) const;

  /// Seeds d(root)/d(root) = 1 for a 1 x 1 root and propagates.
  void backward(Var root);

  std::size_t size() const { return nodes_.size(); }
  /// Number of op backward rules invoked by the last backward().
  std::size_t backward_visits() const { return backward_visits_; }

 private:
  struct Node {
    Matrix owned;
    const Matrix* external = nullptr;
    Matrix grad;
    bool has_grad = false;
    bool requires_grad = false;
    Matrix* sink = nullptr;
    BackwardFn fn;
  };

  std::deque<Node> nodes_;
  std::size_t backward_visits_ = 0;
  bool backward_done_ = false;
};

inline const Matrix& Var::value() const { return tape_->value(*this); }

}  // namespace vampcf::numcore
