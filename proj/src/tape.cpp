#include "dctnn/tape.hpp"

#include <cmath>

#include "dctnn/ops.hpp"

namespace dctnn {

const Tape::Node& Tape::checked(Var v) const {
  if (v.tape != this || v.id < 0 || v.id >= size())
    throw ContractError("tensor was not recorded on this tape");
  return nodes_[static_cast<std::size_t>(v.id)];
}

Tape::Node& Tape::checked(Var v) {
  return const_cast<Node&>(static_cast<const Tape*>(this)->checked(v));
}

Var Tape::leaf(Mat value, bool requires_grad) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return Var{this, size() - 1};
}

const Mat& Tape::value(Var v) const { return checked(v).value; }

Mat Tape::grad(Var v) const {
  const Node& n = checked(v);
  if (n.grad.size() == 0) return Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

bool Tape::requires_grad(Var v) const { return checked(v).requires_grad; }

void Tape::accumulate(Var v, const Mat& g) {
  Node& n = checked(v);
  if (!n.requires_grad) return;
  require_dims(g.rows() == n.value.rows() && g.cols() == n.value.cols(),
               "gradient shape mismatch");
  if (n.grad.size() == 0)
    n.grad = g;
  else
    n.grad += g;
}

Var Tape::make_node(Mat value, const std::vector<Var>& inputs,
                    std::function<void(Tape&, const Mat&)> pull) {
  bool needs = false;
  for (const Var& in : inputs) needs = needs || checked(in).requires_grad;
  Node n;
  n.value = std::move(value);
  n.requires_grad = needs;
  if (needs) n.pull = std::move(pull);
  nodes_.push_back(std::move(n));
  return Var{this, size() - 1};
}

void Tape::backward(Var loss) {
  Node& root = checked(loss);
  require_dims(root.value.rows() == 1 && root.value.cols() == 1, "backward: loss must be scalar");
  if (!root.requires_grad) throw ContractError("backward: loss does not depend on any parameter");
  accumulate(loss, Mat::Ones(1, 1));
  for (Index i = loss.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.pull || n.grad.size() == 0) continue;
    n.pull(*this, n.grad);
  }
}

namespace {

Tape& same_tape(Var a, Var b) {
  if (a.tape == nullptr || a.tape != b.tape)
    throw ContractError("operands recorded on different tapes");
  return *a.tape;
}

}  // namespace

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Mat& va = t.value(a);
  const Mat& vb = t.value(b);
  require_dims(va.rows() == vb.rows() && va.cols() == vb.cols(), "add: shape mismatch");
  return t.make_node(va + vb, {a, b}, [a, b](Tape& tt, const Mat& g) {
    tt.accumulate(a, g);
    tt.accumulate(b, g);
  });
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Mat& va = t.value(a);
  const Mat& vb = t.value(b);
  require_dims(va.rows() == vb.rows() && va.cols() == vb.cols(), "sub: shape mismatch");
  return t.make_node(va - vb, {a, b}, [a, b](Tape& tt, const Mat& g) {
    tt.accumulate(a, g);
    tt.accumulate(b, Mat(-g));
  });
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Mat& va = t.value(a);
  const Mat& vb = t.value(b);
  require_dims(va.rows() == vb.rows() && va.cols() == vb.cols(), "mul: shape mismatch");
  return t.make_node(va.cwiseProduct(vb), {a, b}, [a, b](Tape& tt, const Mat& g) {
    tt.accumulate(a, g.cwiseProduct(tt.value(b)));
    tt.accumulate(b, g.cwiseProduct(tt.value(a)));
  });
}

Var scale(Var a, Real c) {
  Tape& t = *a.tape;
  return t.make_node(t.value(a) * c, {a},
                     [a, c](Tape& tt, const Mat& g) { tt.accumulate(a, Mat(g * c)); });
}

Var add_rowvec(Var a, Var v) {
  Tape& t = same_tape(a, v);
  const Mat& va = t.value(a);
  const Mat& vv = t.value(v);
  require_dims(vv.rows() == 1 && vv.cols() == va.cols(), "add_rowvec: vector must be 1 x cols");
  Mat out = va;
  out.rowwise() += vv.row(0);
  return t.make_node(std::move(out), {a, v}, [a, v](Tape& tt, const Mat& g) {
    tt.accumulate(a, g);
    tt.accumulate(v, Mat(g.colwise().sum()));
  });
}

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Mat& va = t.value(a);
  const Mat& vb = t.value(b);
  require_dims(va.cols() == vb.rows(), "matmul: inner dimensions disagree");
  return t.make_node(va * vb, {a, b}, [a, b](Tape& tt, const Mat& g) {
    tt.accumulate(a, g * tt.value(b).transpose());
    tt.accumulate(b, tt.value(a).transpose() * g);
  });
}

Var transpose(Var a) {
  Tape& t = *a.tape;
  return t.make_node(t.value(a).transpose(), {a},
                     [a](Tape& tt, const Mat& g) { tt.accumulate(a, g.transpose()); });
}

Var reshape(Var a, Index rows, Index cols) {
  Tape& t = *a.tape;
  const Mat& va = t.value(a);
  require_dims(rows * cols == va.size(), "reshape: element count must be preserved");
  const Index ar = va.rows(), ac = va.cols();
  Mat out = Eigen::Map<const Mat>(va.data(), rows, cols);
  return t.make_node(std::move(out), {a}, [a, ar, ac](Tape& tt, const Mat& g) {
    tt.accumulate(a, Mat(Eigen::Map<const Mat>(g.data(), ar, ac)));
  });
}

Var gather(Var a, std::shared_ptr<const std::vector<Index>> index_map, Index rows, Index cols) {
  Tape& t = *a.tape;
  const Mat& va = t.value(a);
  require_dims(static_cast<Index>(index_map->size()) == rows * cols,
               "gather: index map size must equal output size");
  Mat out(rows, cols);
  const Real* src = va.data();
  Real* dst = out.data();
  const Index n = rows * cols;
  const Index limit = va.size();
  for (Index i = 0; i < n; ++i) {
    const Index s = (*index_map)[static_cast<std::size_t>(i)];
    require_dims(s >= 0 && s < limit, "gather: index out of range");
    dst[i] = src[s];
  }
  const Index ar = va.rows(), ac = va.cols();
  return t.make_node(std::move(out), {a}, [a, index_map, ar, ac](Tape& tt, const Mat& g) {
    Mat da = Mat::Zero(ar, ac);
    Real* d = da.data();
    const Real* gp = g.data();
    for (Index i = 0; i < g.size(); ++i) d[(*index_map)[static_cast<std::size_t>(i)]] += gp[i];
    tt.accumulate(a, da);
  });
}

Var concat_cols(const std::vector<Var>& vs) {
  require_dims(!vs.empty(), "concat_cols: needs at least one input");
  Tape& t = *vs.front().tape;
  Index total = 0;
  const Index rows = t.value(vs.front()).rows();
  for (const Var& v : vs) {
    same_tape(vs.front(), v);
    require_dims(t.value(v).rows() == rows, "concat_cols: row counts disagree");
    total += t.value(v).cols();
  }
  Mat out(rows, total);
  Index off = 0;
  for (const Var& v : vs) {
    out.middleCols(off, t.value(v).cols()) = t.value(v);
    off += t.value(v).cols();
  }
  return t.make_node(std::move(out), vs, [vs](Tape& tt, const Mat& g) {
    Index o = 0;
    for (const Var& v : vs) {
      const Index c = tt.value(v).cols();
      tt.accumulate(v, Mat(g.middleCols(o, c)));
      o += c;
    }
  });
}

Var softmax_rows(Var a) {
  Tape& t = *a.tape;
  auto y = std::make_shared<Mat>(softmax(t.value(a), 1));
  Mat out = *y;
  return t.make_node(std::move(out), {a}, [a, y](Tape& tt, const Mat& g) {
    Mat da(y->rows(), y->cols());
    for (Index i = 0; i < y->rows(); ++i) {
      const Real dot = g.row(i).cwiseProduct(y->row(i)).sum();
      da.row(i) = (y->row(i).array() * (g.row(i).array() - dot)).matrix();
    }
    tt.accumulate(a, da);
  });
}

Var layer_norm(Var x, Var gain, Var bias, Real eps) {
  Tape& t = same_tape(x, gain);
  same_tape(x, bias);
  const Mat& vx = t.value(x);
  const Mat& vg = t.value(gain);
  const Mat& vb = t.value(bias);
  const Index d = vx.cols();
  require_dims(vg.rows() == 1 && vg.cols() == d && vb.rows() == 1 && vb.cols() == d,
               "layer_norm: gain/bias must be 1 x d");
  Mat xhat(vx.rows(), d);
  Vec inv(vx.rows());
  const Real dn = static_cast<Real>(d);
  for (Index i = 0; i < vx.rows(); ++i) {
    const Real mu = vx.row(i).mean();
    const Real var = (vx.row(i).array() - mu).square().sum() / dn;
    inv(i) = 1.0 / std::sqrt(var + eps);
    xhat.row(i) = (vx.row(i).array() - mu) * inv(i);
  }
  Mat out = xhat;
  out.array().rowwise() *= vg.row(0).array();
  out.rowwise() += vb.row(0);
  auto cache = std::make_shared<std::pair<Mat, Vec>>(std::move(xhat), std::move(inv));
  return t.make_node(std::move(out), {x, gain, bias},
                     [x, gain, bias, cache, dn](Tape& tt, const Mat& g) {
                       const Mat& xh = cache->first;
                       const Vec& iv = cache->second;
                       tt.accumulate(bias, Mat(g.colwise().sum()));
                       tt.accumulate(gain, Mat(g.cwiseProduct(xh).colwise().sum()));
                       const Mat& vgain = tt.value(gain);
                       Mat dx(xh.rows(), xh.cols());
                       for (Index i = 0; i < xh.rows(); ++i) {
                         Eigen::RowVectorXd h = g.row(i).cwiseProduct(vgain.row(0));
                         const Real mh = h.mean();
                         const Real mhx = h.cwiseProduct(xh.row(i)).sum() / dn;
                         dx.row(i) = (h.array() - mh - xh.row(i).array() * mhx) * iv(i);
                       }
                       tt.accumulate(x, dx);
                     });
}

Var gelu(Var a) {
  Tape& t = *a.tape;
  return t.make_node(dctnn::gelu(t.value(a)), {a}, [a](Tape& tt, const Mat& g) {
    const Mat& x = tt.value(a);
    tt.accumulate(a, g.cwiseProduct(x.unaryExpr([](Real v) { return gelu_grad_scalar(v); })));
  });
}

Var abs(Var a) {
  Tape& t = *a.tape;
  return t.make_node(t.value(a).cwiseAbs(), {a}, [a](Tape& tt, const Mat& g) {
    const Mat& x = tt.value(a);
    tt.accumulate(a, g.cwiseProduct(x.unaryExpr([](Real v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); })));
  });
}

Var sum(Var a) {
  Tape& t = *a.tape;
  Mat s(1, 1);
  s(0, 0) = t.value(a).sum();
  const Index r = t.value(a).rows(), c = t.value(a).cols();
  return t.make_node(std::move(s), {a}, [a, r, c](Tape& tt, const Mat& g) {
    tt.accumulate(a, Mat(Mat::Constant(r, c, g(0, 0))));
  });
}

Var mean(Var a) {
  Tape& t = *a.tape;
  const Index n = t.value(a).size();
  return scale(sum(a), 1.0 / static_cast<Real>(n));
}

}  // namespace dctnn
