#include "vampcf/numcore/tape.hpp"

#include "vampcf/error.hpp"

namespace vampcf::numcore {

Var Tape::constant(Matrix value) {
  Node& n = nodes_.emplace_back();
  n.owned = std::move(value);
  return {this, nodes_.size() - 1};
}

Var Tape::constant_ref(const Matrix& value) {
  Node& n = nodes_.emplace_back();
  n.external = &value;
  return {this, nodes_.size() - 1};
}

Var Tape::parameter(const Matrix& value, Matrix* grad_sink) {
  if (grad_sink != nullptr) require_same_shape(value, *grad_sink, "Tape::parameter");
  Node& n = nodes_.emplace_back();
  n.external = &value;
  n.sink = grad_sink;
  n.requires_grad = grad_sink != nullptr;
  return {this, nodes_.size() - 1};
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, BackwardFn fn) {
  bool needs = false;
  for (Var v : inputs) {
    if (&v.tape() != this) throw Error("Tape::record: input from a different tape");
    needs = needs || nodes_[v.id()].requires_grad;
  }
  Node& n = nodes_.emplace_back();
  n.owned = std::move(value);
  n.requires_grad = needs;
  if (needs) n.fn = std::move(fn);
  return {this, nodes_.size() - 1};
}

const Matrix& Tape::value(Var v) const {
  const Node& n = nodes_[v.id()];
  return n.external != nullptr ? *n.external : n.owned;
}

Matrix& Tape::grad(Var v) {
  Node& n = nodes_[v.id()];
  if (!n.has_grad) {
    const Matrix& val = value(v);
    n.grad = Matrix(val.rows(), val.cols());
    n.has_grad = true;
  }
  return n.grad;
}

const Matrix* Tape::grad_if_any(Var v) const {
  const Node& n = nodes_[v.id()];
  return n.has_grad ? &n.grad : nullptr;
}

void Tape::backward(Var root) {
  if (backward_done_) throw Error("Tape::backward called twice");
  backward_done_ = true;
  backward_visits_ = 0;
  if (value(root).rows() != 1 || value(root).cols() != 1) {
    throw ShapeError("Tape::backward: root must be 1x1, got " + value(root).shape_string());
  }
  if (!requires_grad(root)) return;
  grad(root)(0, 0) = 1.0;

  for (std::size_t id = root.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.has_grad) continue;
    if (n.fn) {
      n.fn(*this, Var(this, id));
      ++backward_visits_;
    } else if (n.sink != nullptr) {
      add_into(*n.sink, n.grad);
    }
  }
}

}  // namespace vampcf::numcore
