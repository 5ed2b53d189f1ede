#include "refmeasure/elicit.hpp"

#include "refmeasure/error.hpp"
#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace refmeasure {

namespace {

constexpr int kBruteCap = 10;

void require_elicitable(const Game& v, const char* op) {
    if (v.n() > Game::kTableCap) {
        std::ostringstream os;
        os << op << ": needs n <= " << Game::kTableCap << ", got " << v.n();
        fail(ErrorCode::TooManyAtoms, os.str());
    }
}

/// 0/1 table of the capacity, mask-indexed. Values must sit on {0, 1} within
/// the value tolerance.
std::vector<int> capacity_table01(const Game& v) {
    const std::uint64_t size = std::uint64_t{1} << v.n();
    std::vector<int> t01(size);
    for (std::uint64_t m = 0; m < size; ++m) {
        const double x = v.value_mask(m);
        if (std::abs(x) <= tol::kValue) {
            t01[m] = 0;
        } else if (std::abs(x - 1.0) <= tol::kValue) {
            t01[m] = 1;
        } else {
            std::ostringstream os;
            os << "capacity is not 0/1: value " << x << " at mask " << m;
            fail(ErrorCode::NotACapacity, os.str());
        }
    }
    return t01;
}

/// Groups per-mask 0/1 values by exact event probability; throws `code` when
/// a class is not constant.
std::map<Rational, int> class_values(const std::vector<int>& t01,
                                     const std::vector<Rational>& probs, ErrorCode code,
                                     const char* what) {
    std::map<Rational, int> cls;
    for (std::size_t m = 0; m < t01.size(); ++m) {
        auto [it, inserted] = cls.try_emplace(probs[m], t01[m]);
        if (!inserted && it->second != t01[m]) {
            std::ostringstream os;
            os << what << " takes both 0 and 1 on the probability class "
               << format_rational(probs[m]);
            fail(code, os.str());
        }
    }
    return cls;
}

void require_monotone_classes(const std::map<Rational, int>& cls) {
    int prev = 0;
    for (const auto& [p, x] : cls) {
        if (x < prev) {
            std::ostringstream os;
            os << "capacity drops back to 0 at probability class " << format_rational(p);
            fail(ErrorCode::NotACapacity, os.str());
        }
        prev = x;
    }
}

std::vector<Rational> exact_probabilities(const SpacePtr& space) {
    return probability_table(declared_probability(space));
}

/// Seed layer per probability class: the small branch starts from the
/// conjugate 1 - v(A^c), the large branch from v itself.
std::map<Rational, int> seed_classes(VarBranch branch, const std::map<Rational, int>& cls) {
    if (branch == VarBranch::Large) return cls;
    std::map<Rational, int> seed;
    for (const auto& [p, x] : cls) {
        (void)x;
        seed[p] = 1 - cls.at(Rational(1) - p);
    }
    return seed;
}

/// Small: smallest class where the seed fires (threshold met non-strictly).
/// Large: largest class where it does not (threshold is strict above it).
Rational seed_threshold(VarBranch branch, const std::map<Rational, int>& seed) {
    if (branch == VarBranch::Small) {
        for (const auto& [p, x] : seed)
            if (x == 1) return p;
        fail(ErrorCode::NotACapacity, "seed layer never fires; top value must be 1");
    }
    Rational q = 0;
    for (const auto& [p, x] : seed)
        if (x == 0) q = p;
    return q;
}

int closed_form_value(VarBranch branch, const Rational& p, const Rational& threshold, int t) {
    const Rational scaled = threshold * dyadic(t);
    if (branch == VarBranch::Small) return p >= scaled ? 1 : 0;
    return p > scaled ? 1 : 0;
}

std::map<Rational, int> closed_form_classes(VarBranch branch,
                                            const std::map<Rational, int>& seed,
                                            const Rational& threshold, int t) {
    std::map<Rational, int> out;
    for (const auto& [p, x] : seed) {
        (void)x;
        out[p] = closed_form_value(branch, p, threshold, t);
    }
    return out;
}

Rational min_positive_weight(const FiniteSpace& s) {
    Rational w = 1;
    for (int i = 0; i < s.n(); ++i)
        if (s.weights()[i] > 0 && s.weights()[i] < w) w = s.weights()[i];
    return w;
}

int resolution_limit(const Rational& seed_prob, const Rational& w_min) {
    int t = 0;
    Rational scale = 2;
    while (t < 62 && seed_prob >= w_min * scale) {
        ++t;
        scale *= 2;
    }
    return t;
}

/// f_t(A) = min(1, sup_B inf_{C subset of A^c} {f(A u B) + f(A u C) - f(B u C)})
/// starting from the branch seed. Integer-valued throughout.
std::vector<std::vector<std::int8_t>> brute_layers(VarBranch branch, int t_top,
                                                   const std::vector<int>& t01,
                                                   const FiniteSpace& s) {
    const int n = s.n();
    const std::uint64_t size = std::uint64_t{1} << n;
    const std::uint64_t full = size - 1;

    std::vector<std::vector<std::int8_t>> layers;
    std::vector<std::int8_t> seed(size);
    for (std::uint64_t m = 0; m < size; ++m)
        seed[m] = static_cast<std::int8_t>(branch == VarBranch::Small ? 1 - t01[full ^ m]
                                                                      : t01[m]);
    layers.push_back(std::move(seed));

    const bool uniform = s.is_uniform();
    for (int t = 1; t <= t_top; ++t) {
        const auto& g = layers.back();
        std::vector<std::int8_t> next(size);

        auto evaluate = [&](std::uint64_t a) -> int {
            const std::uint64_t comp = full ^ a;
            int best_b = -3;
            for (std::uint64_t b = 0; b < size; ++b) {
                const int gab = g[a | b];
                if (gab + 1 <= best_b) continue;  // inner value is at most gab + 1
                int inner = 2;
                std::uint64_t c = comp;
                while (true) {
                    const int cand = g[a | c] - g[(b | c) & full];
                    if (cand < inner) inner = cand;
                    if (c == 0) break;
                    c = (c - 1) & comp;
                }
                if (gab + inner > best_b) best_b = gab + inner;
            }
            return std::min(1, best_b);
        };

        if (uniform) {
            std::vector<std::int8_t> by_card(n + 1);
            for (int k = 0; k <= n; ++k)
                by_card[k] = static_cast<std::int8_t>(evaluate((std::uint64_t{1} << k) - 1));
            for (std::uint64_t m = 0; m < size; ++m) next[m] = by_card[std::popcount(m)];
        } else {
            for (std::uint64_t m = 0; m < size; ++m)
                next[m] = static_cast<std::int8_t>(evaluate(m));
        }
        layers.push_back(std::move(next));
    }
    return layers;
}

std::map<Rational, int> classes_from_masks(const std::vector<std::int8_t>& table,
                                           const std::vector<Rational>& probs) {
    std::vector<int> ints(table.begin(), table.end());
    return class_values(ints, probs, ErrorCode::InconsistentLayers,
                        "recursion layer");
}

Rational predecessor_class(const std::map<Rational, int>& cls, const Rational& p) {
    auto it = cls.lower_bound(p);
    if (it == cls.begin()) return 0;
    --it;
    return it->first;
}

Rational successor_class(const std::map<Rational, int>& cls, const Rational& p) {
    auto it = cls.upper_bound(p);
    if (it == cls.end()) return 1;
    return it->first;
}

GammaEstimate intersect_estimates(const GammaEstimate& a, const GammaEstimate& b) {
    GammaEstimate out;
    out.lo = std::max(a.lo, b.lo);
    if (a.hi < b.hi) {
        out.hi = a.hi;
        out.hi_exclusive = a.hi_exclusive;
    } else if (b.hi < a.hi) {
        out.hi = b.hi;
        out.hi_exclusive = b.hi_exclusive;
    } else {
        out.hi = a.hi;
        out.hi_exclusive = a.hi_exclusive || b.hi_exclusive;
    }
    out.exact = (a.exact && out.hi == a.hi && !out.hi_exclusive) ||
                (b.exact && out.hi == b.hi && !out.hi_exclusive);
    return out;
}

bool estimate_empty(const GammaEstimate& g) {
    return g.lo > g.hi || (g.lo == g.hi) || (g.hi_exclusive && g.lo >= g.hi);
}

}  // namespace

CandidateReport candidate_from_extremum(const ExtremumReport& report) {
    if (report.status != ExtremumStatus::Exists || !report.extremum)
        fail(ErrorCode::NoExtremum, "candidate_from_extremum: no extremum charge to normalize");

    const SignedCharge& mu = *report.extremum;
    const auto& vals = mu.atom_values();

    CandidateReport out;
    bool all_zero = true;
    for (double x : vals) {
        if (std::abs(x) > tol::kValue) all_zero = false;
        if (x < -tol::kValue) {
            out.status = CandidateStatus::Signed;
            return out;
        }
    }
    if (all_zero) {
        out.status = CandidateStatus::ZeroExtremum;
        return out;
    }

    double c = 0.0;
    for (double x : vals) c += std::max(x, 0.0);
    std::vector<double> normalized(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) normalized[i] = std::max(vals[i], 0.0) / c;

    out.scale = mu.total();
    out.candidate = ProbabilityCharge::from_reals(mu.space(), normalized);

    const auto& s = *mu.space();
    double residual = 0.0;
    for (int i = 0; i < s.n(); ++i)
        residual = std::max(residual, std::abs(vals[i] - c * to_double(s.weights()[i])) / c);
    out.residual = residual;
    out.status = residual <= tol::kFunctional ? CandidateStatus::Ok
                                              : CandidateStatus::NotProportional;
    return out;
}

double recover_parameter(ScaleFamily family, double scale) {
    if (family == ScaleFamily::Es) {
        if (scale < 1.0) fail(ErrorCode::OutOfRange, "es scale must be >= 1 (it is 1/(1-beta))");
        if (scale == 1.0) return 0.0;
        return 1.0 - 1.0 / scale;
    }

    auto f = [](double a) { return std::expm1(a) / a; };
    double lo = 1e-8;
    double hi = 50.0;
    if (scale <= f(lo))
        fail(ErrorCode::OutOfRange,
             "entropic scale must exceed 1, the alpha -> 0 boundary (plain expectation)");
    if (scale > f(hi)) fail(ErrorCode::OutOfRange, "entropic scale exceeds the alpha = 50 range");
    while (hi - lo > tol::kBisection) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < scale)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

VarBranch var_branch_classifier(const Game& capacity) {
    require_elicitable(capacity, "var_branch_classifier");
    const auto t01 = capacity_table01(capacity);
    const std::uint64_t full = t01.size() - 1;
    for (std::uint64_t m = 0; m <= full; ++m)
        if (t01[m] == 0 && t01[full ^ m] == 0) return VarBranch::Small;
    return VarBranch::Large;
}

int var_resolution_limit(VarBranch branch, const Game& capacity) {
    require_elicitable(capacity, "var_resolution_limit");
    const auto t01 = capacity_table01(capacity);
    const auto probs = exact_probabilities(capacity.space());
    const auto cls = class_values(t01, probs, ErrorCode::NotACapacity, "capacity");
    const auto seed = seed_classes(branch, cls);
    const Rational threshold = seed_threshold(branch, seed);
    return resolution_limit(threshold, min_positive_weight(*capacity.space()));
}

RecursionLayer var_layer(VarBranch branch, int t, LayerMethod mode, const Game& capacity) {
    if (t < 0) fail(ErrorCode::DomainError, "var_layer: t must be >= 0");
    require_elicitable(capacity, "var_layer");

    const auto t01 = capacity_table01(capacity);
    const auto probs = exact_probabilities(capacity.space());
    const auto cls = class_values(t01, probs, ErrorCode::NotACapacity, "capacity");
    require_monotone_classes(cls);
    const auto seed = seed_classes(branch, cls);
    const Rational threshold = seed_threshold(branch, seed);

    RecursionLayer layer;
    layer.branch = branch;
    layer.t = t;
    layer.method = mode;
    layer.space = capacity.space();

    if (mode == LayerMethod::ClosedForm) {
        layer.values = closed_form_classes(branch, seed, threshold, t);
        return layer;
    }

    if (capacity.n() > kBruteCap) {
        std::ostringstream os;
        os << "brute recursion needs n <= " << kBruteCap << ", got " << capacity.n();
        fail(ErrorCode::TooManyAtoms, os.str());
    }
    const int t_max = resolution_limit(threshold, min_positive_weight(*capacity.space()));
    if (t > t_max) {
        std::ostringstream os;
        os << "brute layer t = " << t << " exceeds the dyadic resolution horizon t_max = "
           << t_max << " of this space";
        fail(ErrorCode::ResolutionExceeded, os.str());
    }
    const auto tables = brute_layers(branch, t, t01, *capacity.space());
    layer.values = classes_from_masks(tables[static_cast<std::size_t>(t)], probs);
    return layer;
}

Game derived_game(VarBranch branch, const std::vector<RecursionLayer>& layers) {
    if (layers.empty()) fail(ErrorCode::EmptyList, "derived_game: no layers");
    for (std::size_t t = 0; t < layers.size(); ++t) {
        if (layers[t].branch != branch)
            fail(ErrorCode::InconsistentLayers, "derived_game: layers mix branches");
        if (layers[t].t != static_cast<int>(t))
            fail(ErrorCode::InconsistentLayers,
                 "derived_game: layers must be consecutive from t = 0");
        if (!layers[t].space || !layers[t].space->same_space(*layers[0].space))
            fail(ErrorCode::SpaceMismatch, "derived_game: layers live on different spaces");
    }

    SpacePtr space = layers[0].space;
    auto shared = std::make_shared<std::vector<std::map<Rational, int>>>();
    for (const auto& l : layers) shared->push_back(l.values);
    auto weights = std::make_shared<std::vector<Rational>>(space->weights());

    auto eval = [shared, weights](std::uint64_t mask) -> double {
        Rational p = 0;
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            p += (*weights)[static_cast<std::size_t>(std::countr_zero(rest))];
        for (std::size_t t = 0; t < shared->size(); ++t) {
            auto it = (*shared)[t].find(p);
            if (it == (*shared)[t].end())
                fail(ErrorCode::InconsistentLayers,
                     "derived_game: probability class missing from a layer");
            if (it->second == 1) return to_double(dyadic(static_cast<int>(t)));
        }
        return 0.0;
    };
    return Game::from_closure(space, eval,
                              branch == VarBranch::Small ? "derived_small" : "derived_large");
}

GammaEstimate threshold_readoff(const Game& capacity) {
    require_elicitable(capacity, "threshold_readoff");
    const auto& s = *capacity.space();
    if (!s.is_uniform())
        fail(ErrorCode::DomainError, "threshold_readoff needs a uniform space");

    const auto t01 = capacity_table01(capacity);
    const int n = s.n();
    std::vector<int> lo(static_cast<std::size_t>(n) + 1, 1);
    std::vector<int> hi(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t m = 0; m < t01.size(); ++m) {
        const int k = std::popcount(m);
        lo[k] = std::min(lo[k], t01[m]);
        hi[k] = std::max(hi[k], t01[m]);
    }
    int k0 = -1;
    for (int k = 0; k <= n; ++k) {
        if (lo[k] != hi[k]) {
            std::ostringstream os;
            os << "capacity takes both 0 and 1 on events of size " << k;
            fail(ErrorCode::NotACapacity, os.str());
        }
        if (hi[k] == 1) {
            k0 = k;
            break;
        }
    }
    if (k0 < 0) fail(ErrorCode::AllZero, "capacity is identically 0; nothing to read off");

    GammaEstimate g;
    g.lo = Rational(1) - Rational(k0, n);
    g.hi = Rational(1) - Rational(k0 - 1, n);
    return g;
}

ElicitationReport elicit_var(const Game& capacity, int depth) {
    if (depth < 0) fail(ErrorCode::DomainError, "elicit_var: depth must be >= 0");
    require_elicitable(capacity, "elicit_var");
    const auto& s = *capacity.space();
    const int n = s.n();

    const auto t01 = capacity_table01(capacity);
    if (t01.back() != 1)
        fail(ErrorCode::NotACapacity, "elicit_var: the full event must have capacity 1");
    const auto probs = exact_probabilities(capacity.space());
    const auto cls = class_values(t01, probs, ErrorCode::NotACapacity, "capacity");
    require_monotone_classes(cls);

    ElicitationReport report;
    report.depth = depth;

    const std::uint64_t full = t01.size() - 1;
    VarBranch branch = VarBranch::Large;
    for (std::uint64_t m = 0; m <= full; ++m) {
        if (t01[m] == 0 && t01[full ^ m] == 0) {
            branch = VarBranch::Small;
            break;
        }
    }
    report.branch = branch;

    const auto seed = seed_classes(branch, cls);
    const Rational threshold = seed_threshold(branch, seed);
    const Rational w_min = min_positive_weight(s);
    const int t_max = resolution_limit(threshold, w_min);
    report.resolution_limit = t_max;

    std::vector<RecursionLayer> layers;
    for (int t = 0; t <= depth; ++t) {
        RecursionLayer layer;
        layer.branch = branch;
        layer.t = t;
        layer.method = LayerMethod::ClosedForm;
        layer.space = capacity.space();
        layer.values = closed_form_classes(branch, seed, threshold, t);
        layers.push_back(std::move(layer));
    }

    if (n <= kBruteCap) {
        const int t_check = std::min(depth, t_max);
        const auto tables = brute_layers(branch, t_check, t01, s);
        for (int t = 0; t <= t_check; ++t) {
            const auto brute_cls =
                classes_from_masks(tables[static_cast<std::size_t>(t)], probs);
            if (brute_cls != layers[static_cast<std::size_t>(t)].values) {
                std::ostringstream os;
                os << "brute and closed-form recursions disagree at layer t = " << t;
                fail(ErrorCode::InconsistentLayers, os.str());
            }
        }
        report.brute_checked_to = t_check;
    }
    if (depth > t_max)
        report.warnings.push_back(
            "layers beyond t = " + std::to_string(t_max) +
            " are finer than the dyadic resolution of this space; the closed form "
            "extrapolates them");

    const Game derived = derived_game(branch, layers);
    const auto extremum = loose_extremum(
        derived, branch == VarBranch::Small ? ExtremumSide::CoreInf : ExtremumSide::AnticoreSup);

    // Exact rational singleton profile: atom i fires at the first layer whose
    // value is 1 on its own probability class.
    std::vector<Rational> profile(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < n; ++i) {
        const Rational& wi = s.weights()[static_cast<std::size_t>(i)];
        for (int t = 0; t <= depth; ++t) {
            if (layers[static_cast<std::size_t>(t)].values.at(wi) == 1) {
                profile[static_cast<std::size_t>(i)] = dyadic(t);
                break;
            }
        }
        const double got = extremum.per_atom_values[static_cast<std::size_t>(i)];
        if (std::abs(got - to_double(profile[static_cast<std::size_t>(i)])) > tol::kValue)
            fail(ErrorCode::DomainError,
                 "internal check failed: loose extremum disagrees with the layer profile");
    }

    Rational c_hat = 0;
    for (const auto& r : profile) c_hat += r;

    // Grid bracket: what the seed layer alone pins down about gamma.
    GammaEstimate grid;
    if (branch == VarBranch::Small) {
        grid.lo = predecessor_class(cls, threshold);
        grid.hi = threshold;
    } else {
        grid.lo = Rational(1) - successor_class(cls, threshold);
        grid.hi = Rational(1) - threshold;
    }

    if (c_hat == 0) {
        report.warnings.push_back(
            "no singleton class fires within the requested depth; increase depth to "
            "resolve the scale");
        report.candidate.status = CandidateStatus::ZeroExtremum;
        report.gamma = grid;
    } else {
        std::vector<Rational> masses(profile);
        for (auto& q : masses) q /= c_hat;
        report.candidate.candidate = ProbabilityCharge(capacity.space(), masses);
        report.candidate.scale = to_double(c_hat);
        double residual = 0.0;
        const double c_d = to_double(c_hat);
        for (int i = 0; i < n; ++i) {
            const double vi = to_double(profile[static_cast<std::size_t>(i)]);
            const double pi = to_double(s.weights()[static_cast<std::size_t>(i)]);
            residual = std::max(residual, std::abs(vi - c_d * pi) / c_d);
        }
        report.candidate.residual = residual;
        report.candidate.status = residual <= tol::kFunctional ? CandidateStatus::Ok
                                                               : CandidateStatus::NotProportional;

        GammaEstimate gamma;
        if (branch == VarBranch::Small) {
            const Rational g_hat = Rational(1) / c_hat;
            gamma.lo = g_hat / 2;
            gamma.hi = g_hat;
            gamma.exact = (g_hat == threshold);
            if (grid.lo < gamma.lo) {
                gamma.lo = grid.lo;
                gamma.exact = false;
                report.warnings.push_back(
                    "degenerate small branch: the seed fires on the smallest positive "
                    "class, so the bracket floor widens to the grid predecessor");
            }
        } else {
            if (threshold == 0) {
                gamma.lo = grid.lo;
                gamma.hi = 1;
                gamma.hi_exclusive = true;
                report.warnings.push_back(
                    "degenerate large branch: the capacity is 1 on every non-null event, "
                    "so the bracket collapses toward 1");
            } else {
                gamma.lo = Rational(1) - Rational(1) / c_hat;
                gamma.hi = Rational(1) - Rational(1) / (2 * c_hat);
            }
        }
        report.gamma = gamma;
    }

    if (s.is_uniform() && t01.back() == 1) report.readoff = threshold_readoff(capacity);

    GammaEstimate combined = intersect_estimates(report.gamma, grid);
    if (estimate_empty(combined)) {
        report.warnings.push_back(
            "dyadic and grid brackets have empty intersection; reporting the grid "
            "bracket alone");
        combined = grid;
    }
    report.intersected = combined;
    return report;
}

ConvergenceSeries convergence_study(const DistortionFunction& h, std::optional<double> limit,
                                    const std::vector<int>& n_sequence,
                                    ConvergenceStatistic statistic) {
    if (n_sequence.empty()) fail(ErrorCode::EmptyList, "convergence_study: empty n sequence");
    ConvergenceSeries series;
    series.limit = limit;
    for (int n : n_sequence) {
        if (n < 1) fail(ErrorCode::DomainError, "convergence_study: n must be >= 1");
        const double hv = h.eval(Rational(1, n));
        ConvergencePoint pt;
        pt.n = n;
        pt.value = statistic == ConvergenceStatistic::LooseExtremumTotal ? n * hv : hv;
        if (limit) pt.abs_error = std::abs(pt.value - *limit);
        series.points.push_back(pt);
    }

    if (!limit && series.points.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(series.points.size());
        for (const auto& pt : series.points) {
            sx += pt.n;
            sy += pt.value;
            sxx += static_cast<double>(pt.n) * pt.n;
            sxy += pt.n * pt.value;
        }
        const double denom = m * sxx - sx * sx;
        if (denom > 0) {
            const double slope = (m * sxy - sx * sy) / denom;
            const double intercept = (sy - slope * sx) / m;
            double ss_res = 0, ss_tot = 0;
            const double mean = sy / m;
            for (const auto& pt : series.points) {
                const double fit = intercept + slope * pt.n;
                ss_res += (pt.value - fit) * (pt.value - fit);
                ss_tot += (pt.value - mean) * (pt.value - mean);
            }
            const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
            series.diverging = slope > 1e-12 && r2 > 0.999;
        }
    }
    return series;
}

}  // namespace refmeasure
