#pragma once

#include <vector>

namespace refmeasure {

enum class Relation { LessEq, Equal, GreaterEq };

struct LPConstraint {
    std::vector<double> row;
    Relation rel = Relation::LessEq;
    double bound = 0.0;
};

enum class Sense { Maximize, Minimize };

struct LPProblem {
    std::vector<double> objective;
    Sense sense = Sense::Maximize;
    std::vector<LPConstraint> constraints;
};

enum class LPStatus { Optimal, Unbounded, Infeasible };

struct LPResult {
    LPStatus status = LPStatus::Optimal;
    double value = 0.0;
    std::vector<double> x;            // optimal point (Optimal)
    std::vector<double> direction;    // improving feasible ray (Unbounded)
    std::vector<int> certificate;     // constraint indices witnessing infeasibility
};

/// Dense two-phase primal simplex over free variables (split internally into
/// nonnegative pairs). Bland's smallest-label rule for entering and leaving
/// variables; pivot tolerance 1e-9. Optimal points are re-checked against
/// every constraint before being returned.
LPResult solve(const LPProblem& problem);

}  // namespace refmeasure
