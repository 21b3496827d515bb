#include "unprompt/ridge.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace unprompt {

namespace {

DenseMatrix normal_matrix(const RidgeProblem& p) {
    const std::size_t d = p.d();
    DenseMatrix a(d, d);
    for (std::size_t r = 0; r < p.n(); ++r) {
        const double* row = p.x.data.data() + r * d;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) a.at(i, j) += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < d; ++i) a.at(i, i) += p.penalty;
    return a;
}

DenseVector xty(const RidgeProblem& p) {
    const std::size_t d = p.d();
    DenseVector b(d, 0.0);
    for (std::size_t r = 0; r < p.n(); ++r) {
        const double* row = p.x.data.data() + r * d;
        for (std::size_t i = 0; i < d; ++i) b[i] += row[i] * p.y[r];
    }
    return b;
}

DenseVector row_of(const RidgeProblem& p, std::size_t r) {
    const std::size_t d = p.d();
    return DenseVector(p.x.data.begin() + static_cast<std::ptrdiff_t>(r * d),
                       p.x.data.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
}

void require_row(const RidgeProblem& p, std::size_t row) {
    if (row >= p.n()) {
        throw DimensionMismatch("ridge: row " + std::to_string(row) + " out of " +
                                std::to_string(p.n()));
    }
}

}  // namespace

void validate(const RidgeProblem& p) {
    if (!(p.penalty > 0.0)) {
        throw InvalidRange("ridge: penalty must be > 0, got " + std::to_string(p.penalty));
    }
    if (p.n() == 0 || p.d() == 0) throw DimensionMismatch("ridge: empty problem");
    if (p.x.rows != p.y.size()) {
        throw DimensionMismatch("ridge: " + std::to_string(p.x.rows) + " rows vs " +
                                std::to_string(p.y.size()) + " targets");
    }
    if (!all_finite(p.x.data) || !all_finite(p.y)) {
        throw InvalidRange("ridge: non-finite entry in problem data");
    }
}

DenseVector ridge_fit(const RidgeProblem& p) {
    validate(p);
    return spd_solve(normal_matrix(p), xty(p));
}

UnlearnDelta exact_unlearn(const RidgeProblem& p, std::size_t row) {
    validate(p);
    require_row(p, row);
    if (p.n() < 2) throw InvalidRange("exact_unlearn: need at least 2 rows to delete one");

    const DenseMatrix a = normal_matrix(p);
    const DenseVector coef = spd_solve(a, xty(p));
    const DenseVector xi = row_of(p, row);

    // (a - xi xi^T)^-1 xi, already divided by (1 - leverage).
    const DenseVector u = rank_one_inverse_apply(a, xi);
    const double residual = dot(xi, coef) - p.y[row];

    UnlearnDelta out;
    out.delta = vscale(u, residual);
    out.coef = vadd(coef, out.delta);
    return out;
}

UnlearnDelta surrogate_unlearn(const RidgeProblem& p, const RowEdit& edit) {
    validate(p);
    require_row(p, edit.index);
    if (edit.kind != RowEditKind::kReplace) {
        throw InvalidRange("surrogate_unlearn: edit kind must be Replace");
    }
    if (edit.x_new.size() != p.d()) {
        throw DimensionMismatch("surrogate_unlearn: x_new size " +
                                std::to_string(edit.x_new.size()) + " vs d " +
                                std::to_string(p.d()));
    }
    if (!all_finite(edit.x_new) || !std::isfinite(edit.y_new)) {
        throw InvalidRange("surrogate_unlearn: non-finite edit");
    }

    const DenseMatrix a = normal_matrix(p);
    const DenseVector b = xty(p);
    const DenseVector coef = spd_solve(a, b);

    const DenseVector xi = row_of(p, edit.index);
    const DenseVector r = vsub(edit.x_new, xi);
    const double s = edit.y_new - p.y[edit.index];

    // Normal matrix after the swap: a + xi r^T + r xi^T + r r^T.
    DenseMatrix a2 = a;
    const std::size_t d = p.d();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            a2.at(i, j) += xi[i] * r[j] + r[i] * xi[j] + r[i] * r[j];
        }
    }
    // Right-hand side after the swap: b + xi*s + r*y_new.
    DenseVector b2 = b;
    axpy(s, xi, b2);
    axpy(edit.y_new, r, b2);

    UnlearnDelta out;
    out.coef = spd_solve(a2, b2);
    out.delta = vsub(out.coef, coef);
    return out;
}

DenseVector retrain_oracle(const RidgeProblem& p, const RowEdit& edit) {
    validate(p);
    require_row(p, edit.index);

    RidgeProblem q;
    q.penalty = p.penalty;
    const std::size_t d = p.d();

    if (edit.kind == RowEditKind::kRemove) {
        if (p.n() < 2) throw InvalidRange("retrain_oracle: need at least 2 rows to delete one");
        q.x = DenseMatrix(p.n() - 1, d);
        q.y.reserve(p.n() - 1);
        std::size_t w = 0;
        for (std::size_t r = 0; r < p.n(); ++r) {
            if (r == edit.index) continue;
            for (std::size_t j = 0; j < d; ++j) q.x.at(w, j) = p.x.at(r, j);
            q.y.push_back(p.y[r]);
            ++w;
        }
    } else {
        if (edit.x_new.size() != d) {
            throw DimensionMismatch("retrain_oracle: x_new size " +
                                    std::to_string(edit.x_new.size()) + " vs d " +
                                    std::to_string(d));
        }
        q.x = p.x;
        q.y = p.y;
        for (std::size_t j = 0; j < d; ++j) q.x.at(edit.index, j) = edit.x_new[j];
        q.y[edit.index] = edit.y_new;
    }
    return ridge_fit(q);
}

double preservation_ratio(const RidgeProblem& p, std::size_t row, double y_new) {
    validate(p);
    require_row(p, row);

    const DenseVector xi = row_of(p, row);
    if (norm2(xi) == 0.0) {
        throw DegenerateEdit("preservation_ratio: row " + std::to_string(row) + " is zero");
    }
    if (y_new == p.y[row]) {
        throw DegenerateEdit("preservation_ratio: y_new equals the existing target");
    }

    const DenseMatrix a = normal_matrix(p);
    const DenseVector coef = spd_solve(a, xty(p));
    const DenseVector ainv_xi = spd_solve(a, xi);
    const double leverage = dot(xi, ainv_xi);
    const double residual = dot(xi, coef) - p.y[row];

    return std::fabs(residual) /
           (std::fabs(y_new - p.y[row]) * std::fabs(1.0 - leverage));
}

std::vector<RidgeDemoRow> ridge_demo_sweep(const RidgeProblem& p, std::size_t row,
                                           const DenseVector& y_new_grid) {
    const UnlearnDelta removal = exact_unlearn(p, row);
    const double exact_shift = norm2(removal.delta);

    std::vector<RidgeDemoRow> rows;
    rows.reserve(y_new_grid.size());
    for (double y_new : y_new_grid) {
        RowEdit edit;
        edit.index = row;
        edit.kind = RowEditKind::kReplace;
        edit.x_new = row_of(p, row);  // keep the features, relabel the target
        edit.y_new = y_new;

        const UnlearnDelta swap = surrogate_unlearn(p, edit);
        RidgeDemoRow out;
        out.y_new = y_new;
        out.exact_shift = exact_shift;
        out.surrogate_shift = norm2(swap.delta);
        out.ratio = out.surrogate_shift == 0.0
                        ? std::numeric_limits<double>::infinity()
                        : exact_shift / out.surrogate_shift;
        rows.push_back(out);
    }
    return rows;
}

}  // namespace unprompt
