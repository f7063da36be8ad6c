#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dctnn/types.hpp"

namespace dctnn {

class Tape;

// Handle into a tape. Cheap to copy; only valid for the tape that made it.
struct Var {
  Tape* tape = nullptr;
  Index id = -1;
};

// Reverse-mode autodiff over a recorded forward computation. Every operation
// appends a node holding its value and a pull closure that routes the node's
// gradient to its inputs. One tape per forward pass; values are immutable
// once recorded.
class Tape {
 public:
  Var leaf(Mat value, bool requires_grad = true);
  Var constant(Mat value) { return leaf(std::move(value), false); }

  const Mat& value(Var v) const;
  // Gradient accumulated so far; a zero matrix if the node was never reached.
  Mat grad(Var v) const;
  bool requires_grad(Var v) const;

  // grad(v) += g. No-op for nodes that do not require gradients.
  void accumulate(Var v, const Mat& g);

  // Extension point used by every op: records a node whose pull closure
  // receives this tape and the node's accumulated gradient.
  Var make_node(Mat value, const std::vector<Var>& inputs,
                std::function<void(Tape&, const Mat&)> pull);

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse. `loss` must be
  // a 1x1 node recorded on this tape.
  void backward(Var loss);

  Index size() const { return static_cast<Index>(nodes_.size()); }

 private:
  struct Node {
    Mat value;
    Mat grad;  // empty until first accumulate
    bool requires_grad = false;
    std::function<void(Tape&, const Mat&)> pull;
  };

  std::vector<Node> nodes_;

  const Node& checked(Var v) const;
  Node& checked(Var v);
};

// Recorded operations. All differentiable; shapes validated on entry.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);          // elementwise
Var scale(Var a, Real c);       // a * c, constant c
Var add_rowvec(Var a, Var v);   // rows of a plus the 1 x d row vector v
Var matmul(Var a, Var b);
Var transpose(Var a);
Var reshape(Var a, Index rows, Index cols);
// out.flat[i] = a.flat[index_map[i]]; backward scatter-adds.
Var gather(Var a, std::shared_ptr<const std::vector<Index>> index_map, Index rows, Index cols);
Var concat_cols(const std::vector<Var>& vs);
Var softmax_rows(Var a);
Var layer_norm(Var x, Var gain, Var bias, Real eps);  // gain/bias are 1 x d
Var gelu(Var a);
Var abs(Var a);
Var sum(Var a);   // 1x1
Var mean(Var a);  // 1x1

inline Var mae(Var a, Var b) { return mean(abs(sub(a, b))); }

}  // namespace dctnn
