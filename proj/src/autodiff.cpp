#include "unprompt/autodiff.hpp"

#include <cmath>
#include <string>

namespace unprompt {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Tape::Tape(const DenseVector* params) : params_(params) {}

Tape::NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    const std::size_t i = nodes_.size() - 1;
    eval_node(i);
    return static_cast<NodeId>(i);
}

Tape::NodeId Tape::param_segment(std::size_t offset, std::size_t len) {
    if (offset + len > params_->size()) {
        throw DimensionMismatch("param_segment: slice [" + std::to_string(offset) + ", " +
                                std::to_string(offset + len) + ") exceeds parameter size " +
                                std::to_string(params_->size()));
    }
    Node n;
    n.op = Op::kParam;
    n.offset = offset;
    n.rows = len;
    return push(std::move(n));
}

Tape::NodeId Tape::input(DenseVector v) {
    Node n;
    n.op = Op::kInput;
    n.val = std::move(v);
    return push(std::move(n));
}

Tape::NodeId Tape::matvec_node(NodeId w, std::size_t out_dim, std::size_t in_dim, NodeId x) {
    if (nodes_[w].val.size() != out_dim * in_dim) {
        throw DimensionMismatch("matvec_node: weight node has " +
                                std::to_string(nodes_[w].val.size()) + " entries, expected " +
                                std::to_string(out_dim * in_dim));
    }
    if (nodes_[x].val.size() != in_dim) {
        throw DimensionMismatch("matvec_node: input node size " +
                                std::to_string(nodes_[x].val.size()) + " vs in_dim " +
                                std::to_string(in_dim));
    }
    Node n;
    n.op = Op::kMatvec;
    n.a = w;
    n.b = x;
    n.rows = out_dim;
    n.cols = in_dim;
    return push(std::move(n));
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    if (nodes_[a].val.size() != nodes_[b].val.size())
        throw DimensionMismatch("add: operand sizes differ");
    Node n;
    n.op = Op::kAdd;
    n.a = a;
    n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
    if (nodes_[a].val.size() != nodes_[b].val.size())
        throw DimensionMismatch("sub: operand sizes differ");
    Node n;
    n.op = Op::kSub;
    n.a = a;
    n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
    if (nodes_[a].val.size() != nodes_[b].val.size())
        throw DimensionMismatch("mul: operand sizes differ");
    Node n;
    n.op = Op::kMul;
    n.a = a;
    n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::silu(NodeId a) {
    Node n;
    n.op = Op::kSilu;
    n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::scale(NodeId a, double c) {
    Node n;
    n.op = Op::kScale;
    n.a = a;
    n.c = c;
    return push(std::move(n));
}

Tape::NodeId Tape::squared_norm(NodeId a) {
    Node n;
    n.op = Op::kSquaredNorm;
    n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::sum(NodeId a) {
    Node n;
    n.op = Op::kSum;
    n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::mean_of(const std::vector<NodeId>& scalars) {
    if (scalars.empty()) throw DimensionMismatch("mean_of: no inputs");
    for (NodeId id : scalars) {
        if (nodes_[id].val.size() != 1)
            throw NonScalarOutput("mean_of: input node is not scalar");
    }
    Node n;
    n.op = Op::kMeanOf;
    n.list = scalars;
    return push(std::move(n));
}

const DenseVector& Tape::value(NodeId id) const { return nodes_[id].val; }

void Tape::eval_node(std::size_t i) {
    Node& n = nodes_[i];
    switch (n.op) {
        case Op::kParam: {
            n.val.assign(params_->begin() + static_cast<std::ptrdiff_t>(n.offset),
                         params_->begin() + static_cast<std::ptrdiff_t>(n.offset + n.rows));
            break;
        }
        case Op::kInput:
            break;  // value fixed at record time
        case Op::kMatvec: {
            const DenseVector& w = nodes_[n.a].val;
            const DenseVector& x = nodes_[n.b].val;
            n.val.assign(n.rows, 0.0);
            for (std::size_t r = 0; r < n.rows; ++r) {
                const double* wr = w.data() + r * n.cols;
                double s = 0.0;
                for (std::size_t c = 0; c < n.cols; ++c) s += wr[c] * x[c];
                n.val[r] = s;
            }
            break;
        }
        case Op::kAdd: {
            const DenseVector& a = nodes_[n.a].val;
            const DenseVector& b = nodes_[n.b].val;
            n.val.resize(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) n.val[k] = a[k] + b[k];
            break;
        }
        case Op::kSub: {
            const DenseVector& a = nodes_[n.a].val;
            const DenseVector& b = nodes_[n.b].val;
            n.val.resize(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) n.val[k] = a[k] - b[k];
            break;
        }
        case Op::kMul: {
            const DenseVector& a = nodes_[n.a].val;
            const DenseVector& b = nodes_[n.b].val;
            n.val.resize(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) n.val[k] = a[k] * b[k];
            break;
        }
        case Op::kSilu: {
            const DenseVector& a = nodes_[n.a].val;
            n.val.resize(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) n.val[k] = a[k] * sigmoid(a[k]);
            break;
        }
        case Op::kScale: {
            const DenseVector& a = nodes_[n.a].val;
            n.val.resize(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) n.val[k] = a[k] * n.c;
            break;
        }
        case Op::kSquaredNorm: {
            const DenseVector& a = nodes_[n.a].val;
            double s = 0.0;
            for (double v : a) s += v * v;
            n.val.assign(1, s);
            break;
        }
        case Op::kSum: {
            const DenseVector& a = nodes_[n.a].val;
            double s = 0.0;
            for (double v : a) s += v;
            n.val.assign(1, s);
            break;
        }
        case Op::kMeanOf: {
            double s = 0.0;
            for (NodeId id : n.list) s += nodes_[id].val[0];
            n.val.assign(1, s / static_cast<double>(n.list.size()));
            break;
        }
    }
}

void Tape::replay() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) eval_node(i);
}

DenseVector Tape::backward_gradient(NodeId output) const {
    const Node& out = nodes_[output];
    if (out.val.size() != 1) {
        throw NonScalarOutput("backward_gradient: output node has length " +
                              std::to_string(out.val.size()));
    }

    std::vector<DenseVector> adj(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) adj[i].assign(nodes_[i].val.size(), 0.0);
    adj[output][0] = 1.0;

    DenseVector grad(params_->size(), 0.0);

    for (std::size_t ii = static_cast<std::size_t>(output) + 1; ii-- > 0;) {
        const Node& n = nodes_[ii];
        const DenseVector& g = adj[ii];
        switch (n.op) {
            case Op::kParam: {
                for (std::size_t k = 0; k < n.rows; ++k) grad[n.offset + k] += g[k];
                break;
            }
            case Op::kInput:
                break;
            case Op::kMatvec: {
                const DenseVector& w = nodes_[n.a].val;
                const DenseVector& x = nodes_[n.b].val;
                DenseVector& gw = adj[n.a];
                DenseVector& gx = adj[n.b];
                for (std::size_t r = 0; r < n.rows; ++r) {
                    const double gr = g[r];
                    if (gr == 0.0) continue;
                    double* gwr = gw.data() + r * n.cols;
                    const double* wr = w.data() + r * n.cols;
                    for (std::size_t c = 0; c < n.cols; ++c) {
                        gwr[c] += gr * x[c];
                        gx[c] += gr * wr[c];
                    }
                }
                break;
            }
            case Op::kAdd: {
                for (std::size_t k = 0; k < g.size(); ++k) {
                    adj[n.a][k] += g[k];
                    adj[n.b][k] += g[k];
                }
                break;
            }
            case Op::kSub: {
                for (std::size_t k = 0; k < g.size(); ++k) {
                    adj[n.a][k] += g[k];
                    adj[n.b][k] -= g[k];
                }
                break;
            }
            case Op::kMul: {
                const DenseVector& a = nodes_[n.a].val;
                const DenseVector& b = nodes_[n.b].val;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    adj[n.a][k] += g[k] * b[k];
                    adj[n.b][k] += g[k] * a[k];
                }
                break;
            }
            case Op::kSilu: {
                const DenseVector& a = nodes_[n.a].val;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    const double s = sigmoid(a[k]);
                    adj[n.a][k] += g[k] * (s * (1.0 + a[k] * (1.0 - s)));
                }
                break;
            }
            case Op::kScale: {
                for (std::size_t k = 0; k < g.size(); ++k) adj[n.a][k] += g[k] * n.c;
                break;
            }
            case Op::kSquaredNorm: {
                const DenseVector& a = nodes_[n.a].val;
                const double g0 = g[0];
                for (std::size_t k = 0; k < a.size(); ++k) adj[n.a][k] += 2.0 * a[k] * g0;
                break;
            }
            case Op::kSum: {
                const double g0 = g[0];
                for (std::size_t k = 0; k < adj[n.a].size(); ++k) adj[n.a][k] += g0;
                break;
            }
            case Op::kMeanOf: {
                const double share = g[0] / static_cast<double>(n.list.size());
                for (NodeId id : n.list) adj[id][0] += share;
                break;
            }
        }
    }
    return grad;
}

namespace {

double probe(const std::function<double(const DenseVector&)>& loss, const DenseVector& p) {
    const double v = loss(p);
    if (!std::isfinite(v)) {
        throw NonFiniteLoss("finite_diff_gradient: loss probe returned " + std::to_string(v));
    }
    return v;
}

}  // namespace

DenseVector finite_diff_gradient(const std::function<double(const DenseVector&)>& loss,
                                 const DenseVector& params, double step) {
    std::vector<std::size_t> coords(params.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    return finite_diff_gradient_coords(loss, params, step, coords);
}

DenseVector finite_diff_gradient_coords(const std::function<double(const DenseVector&)>& loss,
                                        const DenseVector& params, double step,
                                        const std::vector<std::size_t>& coords) {
    if (!(step > 0.0)) throw InvalidRange("finite_diff_gradient: step must be positive");
    DenseVector grad(params.size(), 0.0);
    DenseVector p = params;
    for (std::size_t i : coords) {
        const double saved = p[i];
        p[i] = saved + step;
        const double up = probe(loss, p);
        p[i] = saved - step;
        const double dn = probe(loss, p);
        p[i] = saved;
        grad[i] = (up - dn) / (2.0 * step);
    }
    return grad;
}

}  // namespace unprompt
