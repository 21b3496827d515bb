#pragma once

#include <cstddef>
#include <vector>

#include "unprompt/tensor.hpp"

namespace unprompt {

// Ridge regression testbed: fit, then remove or replace one training row in
// closed form and compare against retraining from scratch. This is the
// small exactly-solvable mirror of the instance-unlearning problem.

struct RidgeProblem {
    DenseMatrix x;      // n rows, d features
    DenseVector y;      // n targets
    double penalty = 0.0;  // must be > 0

    std::size_t n() const { return x.rows; }
    std::size_t d() const { return x.cols; }
};

enum class RowEditKind { kRemove, kReplace };

struct RowEdit {
    std::size_t index = 0;
    RowEditKind kind = RowEditKind::kRemove;
    DenseVector x_new;  // kReplace only
    double y_new = 0.0;  // kReplace only
};

// Throws InvalidRange / DimensionMismatch when the problem is malformed.
void validate(const RidgeProblem& p);

// Minimizer of |x*w - y|^2 + penalty*|w|^2 via the normal equations.
DenseVector ridge_fit(const RidgeProblem& p);

struct UnlearnDelta {
    DenseVector coef;   // edited-problem solution
    DenseVector delta;  // coef - original solution
};

// Closed-form coefficient change from deleting row i, using the rank-one
// downdate of the normal matrix. Never rebuilds the dataset.
UnlearnDelta exact_unlearn(const RidgeProblem& p, std::size_t row);

// Closed-form coefficient change from replacing row i by (x_new, y_new).
UnlearnDelta surrogate_unlearn(const RidgeProblem& p, const RowEdit& edit);

// Ground truth: apply the edit to the dataset and refit from scratch.
DenseVector retrain_oracle(const RidgeProblem& p, const RowEdit& edit);

// |coef shift from deletion| / |coef shift from relabeling row i to y_new|,
// valid when the replacement keeps x_i and only moves the target. Throws
// DegenerateEdit when y_new == y_i or x_i is the zero vector.
double preservation_ratio(const RidgeProblem& p, std::size_t row, double y_new);

// One sweep row for the demo command: relabel row `row` to y_new and record
// both closed-form shifts.
struct RidgeDemoRow {
    double y_new = 0.0;
    double exact_shift = 0.0;      // |coef(remove) - coef|
    double surrogate_shift = 0.0;  // |coef(replace) - coef|
    double ratio = 0.0;            // exact_shift / surrogate_shift
};

// Sweep y_new over a grid and tabulate the two shifts. The demo uses this to
// exhibit target relabelings whose closed-form update moves the solution far
// less than outright deletion does.
std::vector<RidgeDemoRow> ridge_demo_sweep(const RidgeProblem& p, std::size_t row,
                                           const DenseVector& y_new_grid);

}  // namespace unprompt
