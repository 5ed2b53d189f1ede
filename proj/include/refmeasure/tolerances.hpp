#pragma once

namespace refmeasure::tol {

/// Absolute tolerance on charge/game values (order comparisons, LP feasibility,
/// closed-form vs LP cross-checks). Probabilities are exact and use none.
inline constexpr double kValue = 1e-9;

/// Simplex pivot tolerance.
inline constexpr double kPivot = 1e-9;

/// Functional-level tolerances: comonotonic additivity, membership checks,
/// candidate proportionality residual.
inline constexpr double kFunctional = 1e-7;

/// Total-mass slack for probability charges assembled from reals.
inline constexpr double kProbabilityTotal = 1e-12;

/// Bisection tolerance for parameter inversion.
inline constexpr double kBisection = 1e-10;

/// Vertex-enumeration oracle agreement in LP tests.
inline constexpr double kLpOracle = 1e-8;

/// Significant digits for reals in serialized reports.
inline constexpr int kReportDigits = 12;

}  // namespace refmeasure::tol
