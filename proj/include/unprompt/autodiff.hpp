#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "unprompt/tensor.hpp"

namespace unprompt {

// Reverse-mode tape over vector-valued primitives. Operations record a node
// per call; values are computed eagerly and cached. Parameters live in one
// flat vector owned by the caller; param_segment nodes view slices of it.
// The tape stores a pointer to that vector, so it must outlive the tape and
// keep its size.
//
// Gradients are accumulated in strict reverse recording order with plain
// sequential loops, so identical tapes give bit-identical gradients.
class Tape {
public:
    using NodeId = std::uint32_t;

    explicit Tape(const DenseVector* params);

    // Leaf views into the flat parameter vector, in declaration order.
    NodeId param_segment(std::size_t offset, std::size_t len);

    // Leaf holding a constant (non-differentiated) vector.
    NodeId input(DenseVector v);

    // w viewed as an out_dim x in_dim row-major matrix times x.
    NodeId matvec_node(NodeId w, std::size_t out_dim, std::size_t in_dim, NodeId x);

    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);  // elementwise
    NodeId silu(NodeId a);           // x * sigmoid(x)
    NodeId scale(NodeId a, double c);

    NodeId squared_norm(NodeId a);   // reduces to a length-1 node
    NodeId sum(NodeId a);            // reduces to a length-1 node
    NodeId mean_of(const std::vector<NodeId>& scalars);

    const DenseVector& value(NodeId id) const;
    std::size_t node_count() const { return nodes_.size(); }

    // d(output)/d(params) as one flat vector matching the parameter layout.
    // `output` must be a length-1 node; throws NonScalarOutput otherwise.
    DenseVector backward_gradient(NodeId output) const;

    // Recompute every node value in recording order. Because param_segment
    // nodes re-read the parameter vector, replaying after editing parameters
    // gives the loss at the new point without rebuilding the graph.
    void replay();

private:
    enum class Op : std::uint8_t {
        kParam, kInput, kMatvec, kAdd, kSub, kMul, kSilu, kScale,
        kSquaredNorm, kSum, kMeanOf,
    };

    struct Node {
        Op op;
        NodeId a = 0;
        NodeId b = 0;
        std::vector<NodeId> list;      // kMeanOf inputs
        std::size_t offset = 0;        // kParam slice start
        std::size_t rows = 0, cols = 0;  // kMatvec shape
        double c = 0.0;                // kScale factor
        DenseVector val;
    };

    void eval_node(std::size_t i);
    NodeId push(Node n);

    const DenseVector* params_;
    std::vector<Node> nodes_;
};

// Central-difference gradient of an arbitrary scalar loss, the reference the
// tape is checked against. Throws NonFiniteLoss if any probe comes back
// NaN/inf. `step` is the absolute probe half-width.
DenseVector finite_diff_gradient(const std::function<double(const DenseVector&)>& loss,
                                 const DenseVector& params, double step);

// Same probe restricted to chosen coordinates; other entries are left 0.
// Keeps large-model gradient audits affordable.
DenseVector finite_diff_gradient_coords(const std::function<double(const DenseVector&)>& loss,
                                        const DenseVector& params, double step,
                                        const std::vector<std::size_t>& coords);

}  // namespace unprompt
