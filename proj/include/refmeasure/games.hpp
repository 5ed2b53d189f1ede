#pragma once

#include "refmeasure/charge.hpp"
#include "refmeasure/space.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace refmeasure {

/// Distortion h: [0,1] -> real with h(0) = 0. The evaluator receives exact
/// rational probabilities so that strict-vs-nonstrict threshold decisions
/// (VaR vs reversed VaR) never depend on float rounding.
struct DistortionFunction {
    std::function<double(const Rational&)> eval;
    std::string tag;
};

DistortionFunction entropic_distortion(double alpha);
DistortionFunction es_distortion(const Rational& beta);
DistortionFunction var_distortion(const Rational& gamma);
DistortionFunction rvar_distortion(const Rational& gamma);
DistortionFunction power_distortion(double exponent);

/// Cooperative game (capacity when 0/1 or monotone): set function with
/// v(empty) = 0. Materialized as a full 2^n table for n <= 16; above that it
/// evaluates a closure with a lock-guarded memo table.
class Game {
  public:
    static constexpr int kTableCap = 16;

    static Game from_table(SpacePtr space, std::vector<double> table,
                           std::string tag = "custom_table");
    static Game from_closure(SpacePtr space, std::function<double(std::uint64_t)> eval,
                             std::string tag);

    const SpacePtr& space() const { return space_; }
    int n() const { return space_->n(); }
    double value_mask(std::uint64_t mask) const;
    double value(const Event& a) const;
    double total() const;
    bool materialized() const { return table_ != nullptr; }
    const std::vector<double>& table() const;
    const std::string& tag() const { return tag_; }

    /// Reference probability attached by the distortion builders; property
    /// scans fall back to the space's declared weights when absent.
    const std::shared_ptr<const ProbabilityCharge>& reference() const { return reference_; }
    void attach_reference(ProbabilityCharge p);

  private:
    struct LazyEval;

    SpacePtr space_;
    std::shared_ptr<const std::vector<double>> table_;
    std::shared_ptr<LazyEval> lazy_;
    std::shared_ptr<const ProbabilityCharge> reference_;
    std::string tag_;
};

/// P(A) for every event mask, in mask order. Memory-bound to n <= 16.
std::vector<Rational> probability_table(const ProbabilityCharge& p);

Game build_distortion(const DistortionFunction& h, const ProbabilityCharge& p);

struct FamilySpec {
    enum class Kind { Entropic, Es, Var, Rvar } kind;
    double alpha = 0.0;    // entropic only
    Rational level = 0;    // es: beta, var/rvar: gamma
};

Game build_family(const FamilySpec& family, const ProbabilityCharge& p);

struct PropertyWitness {
    Event a;
    Event b;
};

/// Exhaustive structural scan. `continuous_at_empty` is trivially true on a
/// finite space (every decreasing chain to the empty event is eventually
/// constant) and is reported for completeness rather than computed.
struct PropertyReport {
    bool monotone = true;
    bool superadditive = true;
    bool subadditive = true;
    bool submodular = true;
    bool invariant_wrt_p = true;
    bool continuous_at_empty = true;
    std::optional<PropertyWitness> monotone_witness;
    std::optional<PropertyWitness> superadditive_witness;
    std::optional<PropertyWitness> subadditive_witness;
    std::optional<PropertyWitness> submodular_witness;
    std::optional<PropertyWitness> invariance_witness;
};

PropertyReport classify_properties(const Game& v);

struct InvarianceResult {
    bool invariant = true;
    std::optional<PropertyWitness> witness;
};

/// Groups events by exact probability and checks v is constant (within 1e-9)
/// on each group.
InvarianceResult check_invariance(const Game& v, const ProbabilityCharge& p);

/// Conjugate: v_bar(A) = v(full) - v(complement of A). An involution.
Game conjugate_game(const Game& v);

enum class EnvelopeMode { Lower, Upper };

/// Pointwise inf/sup of finitely many charges, per event.
Game envelope(EnvelopeMode mode, const std::vector<SignedCharge>& charges);

}  // namespace refmeasure
