#pragma once

#include "refmeasure/charge.hpp"
#include "refmeasure/elicit.hpp"
#include "refmeasure/games.hpp"
#include "refmeasure/supports.hpp"

#include <json.hpp>

#include <string>

namespace refmeasure {

/// Reports keep insertion order so serialized output is deterministic.
using Json = nlohmann::ordered_json;

/// Reals are rounded to 12 significant digits before serialization; rationals
/// are "p/q" strings; non-finite values become the strings "inf", "-inf",
/// "nan".
Json json_real(double x);
std::string format_real(double x);
Json json_rational(const Rational& q);

Json json_space(const FiniteSpace& s);
Json json_event(const Event& a, int n);
Json json_charge(const SignedCharge& mu);
Json json_probability(const ProbabilityCharge& p);
Json json_extremum(const ExtremumReport& r);
Json json_properties(const PropertyReport& r);
Json json_sandwich(const SandwichConstants& r);
Json json_growth(const std::vector<GrowthPoint>& points);
Json json_candidate(const CandidateReport& r);
Json json_gamma(const GammaEstimate& g);
Json json_layer(const RecursionLayer& layer);
Json json_elicitation(const ElicitationReport& r);
Json json_convergence(const ConvergenceSeries& s);

std::string render_report(const Json& report);

/// Removes fields that legitimately vary between runs (timings) so reports
/// can be compared against golden files.
Json strip_volatile(Json report);

}  // namespace refmeasure
