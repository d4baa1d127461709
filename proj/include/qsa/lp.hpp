#pragma once

#include <vector>

#include "qsa/rational.hpp"

namespace qsa {

enum class LpStatus { optimal, unbounded, infeasible };

enum class LpCmp { le, ge, eq };

struct LpConstraint {
    std::vector<Rat> coeffs;
    LpCmp cmp = LpCmp::le;
    Rat rhs = 0;
};

/// Exact-rational linear program in general form. Variables default to
/// x >= 0; entries of `free_vars` lift the sign restriction.
struct LinearProgram {
    int num_vars = 0;
    bool maximize = true;
    std::vector<Rat> objective;
    std::vector<LpConstraint> constraints;
    std::vector<char> free_vars; // empty means all nonnegative

    LpConstraint& add(LpCmp cmp, const Rat& rhs);
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rat objective;
    std::vector<Rat> x;   // optimal point (status == optimal)
    std::vector<Rat> ray; // improving feasible direction (status == unbounded)
};

/// Two-phase simplex with Bland's rule; every pivot is exact, so the result
/// is a certificate, not an approximation. Intended for small instances
/// (tens of variables and constraints).
LpSolution lp_solve(const LinearProgram& lp);

} // namespace qsa
