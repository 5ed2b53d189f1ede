#pragma once

#include "refmeasure/space.hpp"

#include <cmath>
#include <vector>

namespace refmeasure {

/// Simple (finitely-valued) random variable: one real value per atom.
class SimpleRandomVariable {
  public:
    SimpleRandomVariable(SpacePtr space, std::vector<double> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != space_->n())
            fail(ErrorCode::SpaceMismatch, "value vector length differs from atom count");
        for (double v : values_)
            if (!std::isfinite(v))
                fail(ErrorCode::DomainError, "random variable values must be finite");
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<double>& values() const { return values_; }
    double operator()(int atom) const { return values_.at(static_cast<std::size_t>(atom)); }

    static SimpleRandomVariable indicator(SpacePtr space, const Event& a) {
        require_event(*space, a);
        std::vector<double> v(static_cast<std::size_t>(space->n()), 0.0);
        for (auto i : a.indices()) v[i] = 1.0;
        return SimpleRandomVariable(std::move(space), std::move(v));
    }

    static SimpleRandomVariable constant(SpacePtr space, double c) {
        std::vector<double> v(static_cast<std::size_t>(space->n()), c);
        return SimpleRandomVariable(std::move(space), std::move(v));
    }

  private:
    SpacePtr space_;
    std::vector<double> values_;
};

}  // namespace refmeasure
