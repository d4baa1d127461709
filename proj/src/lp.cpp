#include "qsa/lp.hpp"

#include <algorithm>

#include "qsa/error.hpp"

namespace qsa {

LpConstraint& LinearProgram::add(LpCmp cmp, const Rat& rhs) {
    constraints.push_back(LpConstraint{std::vector<Rat>(num_vars, Rat(0)), cmp, rhs});
    return constraints.back();
}

namespace {

// Dense tableau in canonical form: basis columns are unit vectors and b >= 0
// is maintained by every pivot (b starts nonnegative and the ratio test keeps
// it that way).
struct Tableau {
    int rows = 0;
    int cols = 0; // variable columns, b kept separately
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    std::vector<int> basis;

    void pivot(int row, int col) {
        const Rat inv = Rat(1) / a[row][col];
        for (auto& entry : a[row]) entry *= inv;
        b[row] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            const Rat factor = a[i][col];
            for (int j = 0; j < cols; ++j) a[i][j] -= factor * a[row][j];
            b[i] -= factor * b[row];
        }
        basis[row] = col;
    }
};

enum class StepResult { optimal, unbounded };

// Maximizes cost over the current feasible tableau. Bland's rule: the
// entering column is the lowest index with positive reduced cost, the leaving
// row breaks ratio ties by lowest basis index. Anti-cycling, hence finite.
StepResult run_simplex(Tableau& t, const std::vector<Rat>& cost, int* unbounded_col,
                       const std::vector<char>& usable) {
    for (;;) {
        int entering = -1;
        for (int j = 0; j < t.cols; ++j) {
            if (!usable[j]) continue;
            Rat reduced = cost[j];
            for (int i = 0; i < t.rows; ++i) {
                if (t.a[i][j] != 0) reduced -= cost[t.basis[i]] * t.a[i][j];
            }
            if (reduced > 0) {
                entering = j;
                break;
            }
        }
        if (entering < 0) return StepResult::optimal;

        int leave_row = -1;
        Rat best_ratio;
        for (int i = 0; i < t.rows; ++i) {
            if (t.a[i][entering] <= 0) continue;
            const Rat ratio = t.b[i] / t.a[i][entering];
            if (leave_row < 0 || ratio < best_ratio ||
                (ratio == best_ratio && t.basis[i] < t.basis[leave_row])) {
                leave_row = i;
                best_ratio = ratio;
            }
        }
        if (leave_row < 0) {
            if (unbounded_col) *unbounded_col = entering;
            return StepResult::unbounded;
        }
        t.pivot(leave_row, entering);
    }
}

} // namespace

LpSolution lp_solve(const LinearProgram& lp) {
    if (static_cast<int>(lp.objective.size()) != lp.num_vars)
        fail("BadProgram", "objective length does not match the variable count");
    for (const auto& c : lp.constraints) {
        if (static_cast<int>(c.coeffs.size()) != lp.num_vars)
            fail("BadProgram", "constraint length does not match the variable count");
    }
    std::vector<char> is_free(lp.num_vars, 0);
    for (std::size_t i = 0; i < lp.free_vars.size() && i < is_free.size(); ++i)
        is_free[i] = lp.free_vars[i];

    // Column layout: for each variable one column, free variables get a
    // second (negative-part) column, then one slack/surplus per inequality,
    // then artificials.
    const int m = static_cast<int>(lp.constraints.size());
    std::vector<int> pos_col(lp.num_vars), neg_col(lp.num_vars, -1);
    int cols = 0;
    for (int j = 0; j < lp.num_vars; ++j) {
        pos_col[j] = cols++;
        if (is_free[j]) neg_col[j] = cols++;
    }
    const int first_slack = cols;
    for (const auto& c : lp.constraints) {
        if (c.cmp != LpCmp::eq) ++cols;
        (void)c;
    }
    const int first_artificial = cols;
    cols += m; // worst case: one artificial per row, unused ones stay zero

    Tableau t;
    t.rows = m;
    t.cols = cols;
    t.a.assign(m, std::vector<Rat>(cols, Rat(0)));
    t.b.assign(m, Rat(0));
    t.basis.assign(m, -1);

    int slack_cursor = first_slack;
    std::vector<int> artificial_of_row(m, -1);
    for (int i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        const bool flip = c.rhs < 0;
        const Rat sign = flip ? Rat(-1) : Rat(1);
        for (int j = 0; j < lp.num_vars; ++j) {
            t.a[i][pos_col[j]] = sign * c.coeffs[j];
            if (neg_col[j] >= 0) t.a[i][neg_col[j]] = -sign * c.coeffs[j];
        }
        t.b[i] = sign * c.rhs;
        LpCmp cmp = c.cmp;
        if (flip && cmp != LpCmp::eq) cmp = (cmp == LpCmp::le) ? LpCmp::ge : LpCmp::le;
        if (cmp == LpCmp::le) {
            t.a[i][slack_cursor] = 1;
            t.basis[i] = slack_cursor++;
        } else {
            if (cmp == LpCmp::ge) t.a[i][slack_cursor++] = -1;
            const int art = first_artificial + i;
            t.a[i][art] = 1;
            t.basis[i] = art;
            artificial_of_row[i] = art;
        }
    }

    std::vector<char> usable(cols, 1);

    // Phase 1: drive the artificials to zero.
    bool need_phase1 = false;
    for (int i = 0; i < m; ++i) need_phase1 = need_phase1 || artificial_of_row[i] >= 0;
    if (need_phase1) {
        std::vector<Rat> phase1_cost(cols, Rat(0));
        for (int i = 0; i < m; ++i) {
            if (artificial_of_row[i] >= 0) phase1_cost[artificial_of_row[i]] = -1;
        }
        run_simplex(t, phase1_cost, nullptr, usable);
        Rat infeasibility = 0;
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] >= first_artificial) infeasibility += t.b[i];
        }
        if (infeasibility != 0) return LpSolution{LpStatus::infeasible, Rat(0), {}, {}};
        // Pivot leftover zero-valued artificials out of the basis.
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < first_artificial) continue;
            int col = -1;
            for (int j = 0; j < first_artificial; ++j) {
                if (t.a[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) t.pivot(i, col);
            // A fully zero row is a redundant constraint; the artificial can
            // stay basic at value zero, its column is blocked below.
        }
    }
    // Artificial columns only serve phase 1.
    for (int j = first_artificial; j < cols; ++j) usable[j] = 0;

    // Phase 2.
    std::vector<Rat> cost(cols, Rat(0));
    const Rat orient = lp.maximize ? Rat(1) : Rat(-1);
    for (int j = 0; j < lp.num_vars; ++j) {
        cost[pos_col[j]] = orient * lp.objective[j];
        if (neg_col[j] >= 0) cost[neg_col[j]] = -orient * lp.objective[j];
    }
    int unbounded_col = -1;
    const StepResult result = run_simplex(t, cost, &unbounded_col, usable);

    if (result == StepResult::unbounded) {
        std::vector<Rat> dir(cols, Rat(0));
        dir[unbounded_col] = 1;
        for (int i = 0; i < t.rows; ++i) dir[t.basis[i]] = -t.a[i][unbounded_col];
        std::vector<Rat> ray(lp.num_vars, Rat(0));
        for (int j = 0; j < lp.num_vars; ++j) {
            ray[j] = dir[pos_col[j]];
            if (neg_col[j] >= 0) ray[j] -= dir[neg_col[j]];
        }
        return LpSolution{LpStatus::unbounded, Rat(0), {}, std::move(ray)};
    }

    std::vector<Rat> values(cols, Rat(0));
    for (int i = 0; i < m; ++i) values[t.basis[i]] = t.b[i];
    std::vector<Rat> x(lp.num_vars, Rat(0));
    Rat objective = 0;
    for (int j = 0; j < lp.num_vars; ++j) {
        x[j] = values[pos_col[j]];
        if (neg_col[j] >= 0) x[j] -= values[neg_col[j]];
        objective += lp.objective[j] * x[j];
    }
    return LpSolution{LpStatus::optimal, std::move(objective), std::move(x), {}};
}

} // namespace qsa
