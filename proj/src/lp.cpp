#include "refmeasure/lp.hpp"

#include "refmeasure/error.hpp"
#include "refmeasure/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace refmeasure {

namespace {

constexpr double kEps = tol::kPivot;
constexpr int kArtificial = -1;

/// Condensed-tableau simplex for: maximize c.x subject to Ax <= b, x >= 0.
/// Rows carry the basic variables (initially the implicit slacks), columns the
/// nonbasic ones; a single driving variable (label -1) restores feasibility.
class Tableau {
  public:
    Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
            const std::vector<double>& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
          basic_(static_cast<std::size_t>(m_)), nonbasic_(static_cast<std::size_t>(n_) + 1),
          d_(static_cast<std::size_t>(m_) + 2,
             std::vector<double>(static_cast<std::size_t>(n_) + 2, 0.0)) {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
            basic_[i] = n_ + i;
            d_[i][n_] = -1.0;
            d_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            d_[m_][j] = -c[j];
        }
        nonbasic_[n_] = kArtificial;
        d_[m_ + 1][n_] = 1.0;
    }

    enum class Outcome { Optimal, Unbounded, Infeasible };

    Outcome run() {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
        if (m_ > 0 && d_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!optimize(m_ + 1, true) || d_[m_ + 1][n_ + 1] < -kEps)
                return Outcome::Infeasible;
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] != kArtificial) continue;
                int s = -1;
                for (int j = 0; j <= n_; ++j) {
                    if (std::abs(d_[i][j]) <= kEps) continue;
                    if (s == -1 || nonbasic_[j] < nonbasic_[s]) s = j;
                }
                if (s != -1) pivot(i, s);
            }
        }
        return optimize(m_, false) ? Outcome::Optimal : Outcome::Unbounded;
    }

    double objective_value() const { return d_[m_][n_ + 1]; }

    std::vector<double> primal() const {
        std::vector<double> x(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && basic_[i] < n_)
                x[static_cast<std::size_t>(basic_[i])] = d_[i][n_ + 1];
        return x;
    }

    /// Ray along the entering column recorded when optimize hit unboundedness.
    std::vector<double> ray() const {
        std::vector<double> dir(static_cast<std::size_t>(n_), 0.0);
        if (ray_col_ < 0) return dir;
        if (nonbasic_[ray_col_] >= 0 && nonbasic_[ray_col_] < n_)
            dir[static_cast<std::size_t>(nonbasic_[ray_col_])] = 1.0;
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && basic_[i] < n_)
                dir[static_cast<std::size_t>(basic_[i])] = -d_[i][ray_col_];
        return dir;
    }

    /// Slack labels whose phase-one reduced cost is nonzero: the rows taking
    /// part in the infeasibility combination.
    std::vector<int> infeasibility_rows() const {
        std::vector<int> rows;
        for (int j = 0; j <= n_; ++j) {
            const int label = nonbasic_[j];
            if (label >= n_ && std::abs(d_[m_ + 1][j]) > kEps) rows.push_back(label - n_);
        }
        return rows;
    }

  private:
    void pivot(int r, int s) {
        const double inv = 1.0 / d_[r][s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || std::abs(d_[i][s]) <= 1e-30) continue;
            const double factor = d_[i][s] * inv;
            for (int j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * factor;
            d_[i][s] = -factor;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) d_[r][j] *= inv;
        d_[r][s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    bool optimize(int objective_row, bool feasibility_phase) {
        for (std::int64_t iter = 0;; ++iter) {
            if (iter > 4 * (std::int64_t(m_) + n_ + 8) * (std::int64_t(m_) + n_ + 8))
                fail(ErrorCode::DomainError, "simplex iteration limit exceeded");
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (!feasibility_phase && nonbasic_[j] == kArtificial) continue;
                if (d_[objective_row][j] < -kEps && (s == -1 || nonbasic_[j] < nonbasic_[s]))
                    s = j;
            }
            if (s == -1) return true;
            int r = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (d_[i][s] <= kEps) continue;
                const double ratio = d_[i][n_ + 1] / d_[i][s];
                if (r == -1 || ratio < best - 1e-12 ||
                    (ratio <= best + 1e-12 && basic_[i] < basic_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1) {
                ray_col_ = s;
                return false;
            }
            pivot(r, s);
        }
    }

    int m_, n_;
    std::vector<int> basic_, nonbasic_;
    std::vector<std::vector<double>> d_;
    int ray_col_ = -1;
};

void validate(const LPProblem& problem) {
    const std::size_t vars = problem.objective.size();
    if (vars == 0) fail(ErrorCode::MalformedProblem, "objective must have at least one variable");
    for (double c : problem.objective)
        if (!std::isfinite(c)) fail(ErrorCode::MalformedProblem, "objective has a non-finite entry");
    for (const auto& con : problem.constraints) {
        if (con.row.size() != vars)
            fail(ErrorCode::MalformedProblem, "constraint row length differs from variable count");
        for (double a : con.row)
            if (!std::isfinite(a))
                fail(ErrorCode::MalformedProblem, "constraint has a non-finite coefficient");
        if (!std::isfinite(con.bound))
            fail(ErrorCode::MalformedProblem, "constraint bound is non-finite");
    }
}

double constraint_violation(const LPConstraint& con, const std::vector<double>& x) {
    double lhs = 0.0;
    for (std::size_t k = 0; k < con.row.size(); ++k) lhs += con.row[k] * x[k];
    switch (con.rel) {
        case Relation::LessEq: return lhs - con.bound;
        case Relation::GreaterEq: return con.bound - lhs;
        case Relation::Equal: return std::abs(lhs - con.bound);
    }
    return 0.0;
}

}  // namespace

LPResult solve(const LPProblem& problem) {
    validate(problem);
    const std::size_t vars = problem.objective.size();
    const double sign = problem.sense == Sense::Maximize ? 1.0 : -1.0;

    // Free variables split as x = u - w with u, w >= 0.
    std::vector<double> c(2 * vars);
    for (std::size_t k = 0; k < vars; ++k) {
        c[k] = sign * problem.objective[k];
        c[vars + k] = -sign * problem.objective[k];
    }
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<int> row_origin;
    auto push_row = [&](const std::vector<double>& row, double bound, double dir, int origin) {
        std::vector<double> engine_row(2 * vars);
        for (std::size_t k = 0; k < vars; ++k) {
            engine_row[k] = dir * row[k];
            engine_row[vars + k] = -dir * row[k];
        }
        a.push_back(std::move(engine_row));
        b.push_back(dir * bound);
        row_origin.push_back(origin);
    };
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
        const auto& con = problem.constraints[i];
        const int origin = static_cast<int>(i);
        switch (con.rel) {
            case Relation::LessEq: push_row(con.row, con.bound, 1.0, origin); break;
            case Relation::GreaterEq: push_row(con.row, con.bound, -1.0, origin); break;
            case Relation::Equal:
                push_row(con.row, con.bound, 1.0, origin);
                push_row(con.row, con.bound, -1.0, origin);
                break;
        }
    }

    Tableau tableau(a, b, c);
    const auto outcome = tableau.run();
    LPResult result;
    if (outcome == Tableau::Outcome::Infeasible) {
        result.status = LPStatus::Infeasible;
        for (int engine_row : tableau.infeasibility_rows())
            result.certificate.push_back(row_origin[static_cast<std::size_t>(engine_row)]);
        std::sort(result.certificate.begin(), result.certificate.end());
        result.certificate.erase(
            std::unique(result.certificate.begin(), result.certificate.end()),
            result.certificate.end());
        return result;
    }
    if (outcome == Tableau::Outcome::Unbounded) {
        result.status = LPStatus::Unbounded;
        const auto ray = tableau.ray();
        result.direction.resize(vars);
        for (std::size_t k = 0; k < vars; ++k) result.direction[k] = ray[k] - ray[vars + k];
        return result;
    }
    result.status = LPStatus::Optimal;
    const auto split = tableau.primal();
    result.x.resize(vars);
    for (std::size_t k = 0; k < vars; ++k) result.x[k] = split[k] - split[vars + k];
    result.value = sign * tableau.objective_value();
    for (const auto& con : problem.constraints) {
        double scale = std::max(1.0, std::abs(con.bound));
        for (double coef : con.row) scale = std::max(scale, std::abs(coef));
        if (constraint_violation(con, result.x) > 1e3 * tol::kValue * scale)
            fail(ErrorCode::DomainError, "lp internal check failed: optimum violates a constraint");
    }
    return result;
}

}  // namespace refmeasure
