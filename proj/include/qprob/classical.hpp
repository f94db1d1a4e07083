#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qprob/errors.hpp"

namespace qprob {

/// Weighted finite sample space. The event algebra is the full power set,
/// so events are just point predicates (by point index).
class FiniteProbabilitySpace {
  public:
    FiniteProbabilitySpace(std::vector<std::string> points, std::vector<double> weights);

    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }

  private:
    std::vector<std::string> points_;
    std::vector<double> weights_;
};

using PointPredicate = std::function<bool(std::size_t)>;

/// Real-valued variable on a finite space. Outcomes are declared up front
/// as a grid of distinct values; per-point values snap to the nearest grid
/// entry so that later outcome comparisons are exact.
class RandomVariable {
  public:
    RandomVariable(std::string name, std::vector<double> outcome_grid,
                   std::vector<double> values_per_point, double snap_tol = 1e-9);

    const std::string& name() const { return name_; }
    const std::vector<double>& outcome_grid() const { return grid_; }
    std::size_t outcome_index(std::size_t point) const { return value_index_[point]; }
    double value(std::size_t point) const { return grid_[value_index_[point]]; }
    std::size_t point_count() const { return value_index_.size(); }

    /// Index of `outcome` in the grid (exact match after the same snapping).
    std::size_t grid_index_of(double outcome) const;

  private:
    std::string name_;
    std::vector<double> grid_;
    std::vector<std::size_t> value_index_;
    double snap_tol_;
};

struct JointDistribution {
    std::vector<std::string> variables;
    std::vector<std::vector<double>> support;  // one outcome tuple per row
    std::vector<double> probabilities;

    std::size_t variable_index(const std::string& name) const;
    /// Probability of an exact outcome tuple (0 when absent from support).
    double probability_of(const std::vector<double>& tuple) const;
};

double event_probability(const FiniteProbabilitySpace& space, const PointPredicate& event);

/// p(B|A) = p(B and A) / p(A). Conditioning on a null event is an error,
/// not 0 or NaN.
double bayes_conditional(const FiniteProbabilitySpace& space, const PointPredicate& b,
                         const PointPredicate& a);

JointDistribution joint_distribution(const FiniteProbabilitySpace& space,
                                     const std::vector<RandomVariable>& vars);

JointDistribution marginal(const JointDistribution& jpd, const std::vector<std::string>& keep);

/// Total probability of B = target decomposed over A's outcomes:
/// sum_j p(A=a_j) p(B=target | A=a_j), with zero-probability branches
/// skipped.
double classical_ftp(const FiniteProbabilitySpace& space, const RandomVariable& a,
                     const RandomVariable& b, double target);

/// Rebuild a weighted space from a joint distribution (one point per
/// support tuple) along with coordinate-reading variables, so the classical
/// operations can run on distributions produced elsewhere.
struct SpaceFromJpd {
    FiniteProbabilitySpace space;
    std::vector<RandomVariable> variables;
};
SpaceFromJpd space_from_jpd(const JointDistribution& jpd);

}  // namespace qprob
