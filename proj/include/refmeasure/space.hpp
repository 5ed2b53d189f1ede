#pragma once

#include "refmeasure/error.hpp"
#include "refmeasure/rational.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace refmeasure {

class Event;

/// Finite measurable space: n atoms carrying exact-rational probability
/// weights that sum to exactly 1. The event algebra is the power set.
/// Immutable after construction; share via SpacePtr.
class FiniteSpace {
  public:
    static constexpr int kEnumerationCap = 24;   // hard cap for 2^n event scans
    static constexpr int kEnumerationWarn = 16;  // scans above this get a warning
    static constexpr int kPairScanCap = 12;      // cap for 4^n pair scans

    explicit FiniteSpace(std::vector<Rational> weights);

    int n() const { return static_cast<int>(weights_.size()); }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& weight(int atom) const { return weights_.at(atom); }
    bool is_uniform() const { return uniform_; }

    bool same_space(const FiniteSpace& other) const { return weights_ == other.weights_; }

  private:
    std::vector<Rational> weights_;
    bool uniform_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

SpacePtr build_space_uniform(int n);
SpacePtr build_space_weighted(std::vector<Rational> weights);

/// Guard for operations that enumerate all 2^n events (or n x 2^n tables).
/// Throws TooManyAtoms above the hard cap; returns true when a "large space"
/// warning should be attached to reports.
bool require_enumerable(const FiniteSpace& space, const char* operation);

/// Guard for all-pairs event scans (4^n cost).
void require_pair_scannable(const FiniteSpace& space, const char* operation);

/// Subset of atoms. Stored as sorted unique indices so spaces of any size are
/// supported; bitmask views are provided for enumeration loops (n <= 64).
class Event {
  public:
    Event() = default;
    static Event of(std::vector<std::uint32_t> indices);
    static Event from_mask(std::uint64_t mask, int n);
    static Event full(int n);

    const std::vector<std::uint32_t>& indices() const { return idx_; }
    std::size_t size() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    bool contains(std::uint32_t atom) const;
    std::uint64_t mask(int n) const;  // validates against the space size
    Event complement(int n) const;

    bool operator==(const Event& other) const { return idx_ == other.idx_; }

  private:
    std::vector<std::uint32_t> idx_;
};

/// Validates the event against the space (ForeignEvent on out-of-range atoms).
void require_event(const FiniteSpace& space, const Event& event);

/// Probability charge on a space: nonnegative exact-rational atom masses.
/// Build from rationals (total must be exactly 1) or from reals (each value is
/// converted exactly; the total may then deviate from 1 by at most 1e-12).
class ProbabilityCharge {
  public:
    ProbabilityCharge(SpacePtr space, std::vector<Rational> masses);
    static ProbabilityCharge from_reals(SpacePtr space, const std::vector<double>& values);

    const SpacePtr& space() const { return space_; }
    const std::vector<Rational>& masses() const { return masses_; }
    Rational prob(const Event& event) const;
    std::vector<double> as_reals() const;

  private:
    ProbabilityCharge(SpacePtr space, std::vector<Rational> masses, bool exact_total);

    SpacePtr space_;
    std::vector<Rational> masses_;
};

/// The space's own reference probability P.
ProbabilityCharge declared_probability(SpacePtr space);

Rational event_probability(const FiniteSpace& space, const Event& event);

/// Conditional charge P^A: P^A(B) = P(A "intersect" B) / P(A). Atoms outside A
/// get mass 0. Throws NullConditioningEvent when P(A) = 0.
ProbabilityCharge conditional(const ProbabilityCharge& p, const Event& a);

/// Refinement: every atom splits into `factor` equal-weight children; atom i
/// maps to children i*factor .. i*factor+factor-1.
struct Refinement {
    SpacePtr space;
    int factor = 1;
    Event lift(const Event& coarse) const;
};

Refinement refine(SpacePtr space, int factor);

}  // namespace refmeasure
