#pragma once

#include "refmeasure/games.hpp"
#include "refmeasure/supports.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace refmeasure {

enum class CandidateStatus { Ok, ZeroExtremum, NotProportional, Signed };

/// Candidate reference measure read off an extremum charge. Proportionality
/// is judged against the space's declared weights; `Ok` means the extremum is
/// a nonnegative multiple of them within the residual tolerance.
struct CandidateReport {
    CandidateStatus status = CandidateStatus::ZeroExtremum;
    std::optional<ProbabilityCharge> candidate;
    std::optional<double> scale;
    double residual = 0.0;
};

CandidateReport candidate_from_extremum(const ExtremumReport& report);

/// Inverse of the scale identities: es scale c = 1/(1-beta); entropic scale
/// c = (expm1(alpha))/alpha, inverted by bisection on [1e-8, 50].
enum class ScaleFamily { Es, Entropic };
double recover_parameter(ScaleFamily family, double scale);

enum class VarBranch { Small, Large };
enum class LayerMethod { Brute, ClosedForm };

/// Small iff some event has capacity 0 together with its complement.
VarBranch var_branch_classifier(const Game& capacity);

/// One stage of the two-branch dyadic recursion. Values are recorded per
/// exact probability class and are nondecreasing across classes.
struct RecursionLayer {
    VarBranch branch = VarBranch::Small;
    int t = 0;
    LayerMethod method = LayerMethod::ClosedForm;
    std::map<Rational, int> values;  // probability class -> 0/1
    SpacePtr space;
};

/// Brute mode evaluates f_t(A) = min(1, sup_B inf_{C in A^c} {f(A u B) +
/// f(A u C) - f(B u C)}) exhaustively (n <= 10, t within the resolution
/// horizon); closed_form tabulates the dyadic threshold rule seeded from the
/// t = 0 layer. The small branch seeds from the conjugate of the capacity and
/// uses non-strict thresholds; the large branch seeds from the capacity and
/// uses strict ones.
RecursionLayer var_layer(VarBranch branch, int t, LayerMethod mode, const Game& capacity);

/// Largest t whose layer threshold still clears the smallest positive atom;
/// the brute recursion is only meaningful up to here.
int var_resolution_limit(VarBranch branch, const Game& capacity);

/// v(A) = sup{2^-t : layer_t(A) = 1} (0 when no layer fires). Layers must be
/// consecutive from t = 0 with one branch throughout.
Game derived_game(VarBranch branch, const std::vector<RecursionLayer>& layers);

/// Half-open interval (lo, hi]; hi_exclusive marks the degenerate open-at-one
/// case. When `exact` is set, hi is claimed as the recovered value itself.
struct GammaEstimate {
    Rational lo = 0;
    Rational hi = 0;
    bool hi_exclusive = false;
    bool exact = false;
};

struct ElicitationReport {
    VarBranch branch = VarBranch::Small;
    CandidateReport candidate;
    GammaEstimate gamma;                     // dyadic quantization bracket
    std::optional<GammaEstimate> readoff;    // 1/n-wide class readoff (uniform)
    std::optional<GammaEstimate> intersected;
    int depth = 0;
    int brute_checked_to = -1;               // last t cross-checked by brute
    int resolution_limit = -1;
    std::vector<std::string> warnings;
};

/// Full pipeline: validate the capacity, classify the branch, build layers
/// 0..depth (closed form, brute cross-checked within resolution), derive the
/// dyadic game, take the matching loose extremum, and normalize. Rational
/// arithmetic is kept end to end so on-grid inputs are recovered exactly.
ElicitationReport elicit_var(const Game& capacity, int depth);

/// Smallest probability class with capacity 1 brackets gamma within one grid
/// step: gamma in (1 - k/n, 1 - (k-1)/n] on uniform(n).
GammaEstimate threshold_readoff(const Game& capacity);

enum class ConvergenceStatistic { LooseExtremumTotal, PerAtomValue };

struct ConvergencePoint {
    int n = 0;
    double value = 0.0;
    std::optional<double> abs_error;
};

struct ConvergenceSeries {
    std::vector<ConvergencePoint> points;
    std::optional<double> limit;
    bool diverging = false;  // flagged by a linear-growth fit when no limit
};

/// Evaluates the statistic of h's distortion game on uniform(n) along the
/// sequence, against the family's analytic limit when one exists.
ConvergenceSeries convergence_study(const DistortionFunction& h, std::optional<double> limit,
                                    const std::vector<int>& n_sequence,
                                    ConvergenceStatistic statistic);

}  // namespace refmeasure
