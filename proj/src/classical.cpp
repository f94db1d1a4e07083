#include "qprob/classical.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qprob {

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<std::string> points,
                                               std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty()) throw ConfigInvalid("FiniteProbabilitySpace: empty point set");
    if (points_.size() != weights_.size())
        throw ConfigInvalid("FiniteProbabilitySpace: " + std::to_string(points_.size()) +
                            " points vs " + std::to_string(weights_.size()) + " weights");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0))
            throw ConfigInvalid("FiniteProbabilitySpace: negative or NaN weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ConfigInvalid("FiniteProbabilitySpace: weights sum to " + std::to_string(sum));
}

RandomVariable::RandomVariable(std::string name, std::vector<double> outcome_grid,
                               std::vector<double> values_per_point, double snap_tol)
    : name_(std::move(name)), grid_(std::move(outcome_grid)), snap_tol_(snap_tol) {
    if (grid_.empty()) throw ConfigInvalid("RandomVariable " + name_ + ": empty outcome grid");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw ConfigInvalid("RandomVariable " + name_ + ": grid must be strictly increasing");
    value_index_.reserve(values_per_point.size());
    for (double v : values_per_point) {
        std::size_t best = 0;
        double best_dist = std::abs(v - grid_[0]);
        for (std::size_t k = 1; k < grid_.size(); ++k) {
            const double d = std::abs(v - grid_[k]);
            if (d < best_dist) {
                best_dist = d;
                best = k;
            }
        }
        if (best_dist > snap_tol_)
            throw ConfigInvalid("RandomVariable " + name_ + ": value " + std::to_string(v) +
                                " is off the declared outcome grid");
        value_index_.push_back(best);
    }
}

std::size_t RandomVariable::grid_index_of(double outcome) const {
    for (std::size_t k = 0; k < grid_.size(); ++k)
        if (std::abs(outcome - grid_[k]) <= snap_tol_) return k;
    throw UnknownVariable("RandomVariable " + name_ + ": outcome " + std::to_string(outcome) +
                          " not on the grid");
}

std::size_t JointDistribution::variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == name) return i;
    throw UnknownVariable("JointDistribution: unknown variable " + name);
}

double JointDistribution::probability_of(const std::vector<double>& tuple) const {
    for (std::size_t r = 0; r < support.size(); ++r)
        if (support[r] == tuple) return probabilities[r];
    return 0.0;
}

double event_probability(const FiniteProbabilitySpace& space, const PointPredicate& event) {
    double p = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (event(i)) p += space.weight(i);
    return p;
}

double bayes_conditional(const FiniteProbabilitySpace& space, const PointPredicate& b,
                         const PointPredicate& a) {
    const double pa = event_probability(space, a);
    if (pa <= 0.0)
        throw ConditionOnNull("bayes_conditional: conditioning event has probability 0");
    const double pba =
        event_probability(space, [&](std::size_t i) { return a(i) && b(i); });
    return pba / pa;
}

JointDistribution joint_distribution(const FiniteProbabilitySpace& space,
                                     const std::vector<RandomVariable>& vars) {
    if (vars.empty()) throw ConfigInvalid("joint_distribution: need at least one variable");
    for (const auto& v : vars)
        if (v.point_count() != space.size())
            throw DimMismatch("joint_distribution: variable " + v.name() +
                              " not defined on every point");

    std::map<std::vector<std::size_t>, double> cells;
    for (std::size_t p = 0; p < space.size(); ++p) {
        if (space.weight(p) == 0.0) continue;
        std::vector<std::size_t> key(vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) key[k] = vars[k].outcome_index(p);
        cells[key] += space.weight(p);
    }

    JointDistribution out;
    for (const auto& v : vars) out.variables.push_back(v.name());
    for (const auto& [key, prob] : cells) {
        std::vector<double> tuple(vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) tuple[k] = vars[k].outcome_grid()[key[k]];
        out.support.push_back(std::move(tuple));
        out.probabilities.push_back(prob);
    }
    return out;
}

JointDistribution marginal(const JointDistribution& jpd, const std::vector<std::string>& keep) {
    if (keep.empty()) throw ConfigInvalid("marginal: empty variable subset");
    std::vector<std::size_t> cols;
    for (const auto& name : keep) cols.push_back(jpd.variable_index(name));

    std::map<std::vector<double>, double> cells;
    for (std::size_t r = 0; r < jpd.support.size(); ++r) {
        std::vector<double> key(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) key[k] = jpd.support[r][cols[k]];
        cells[key] += jpd.probabilities[r];
    }

    JointDistribution out;
    out.variables = keep;
    for (const auto& [key, prob] : cells) {
        out.support.push_back(key);
        out.probabilities.push_back(prob);
    }
    return out;
}

double classical_ftp(const FiniteProbabilitySpace& space, const RandomVariable& a,
                     const RandomVariable& b, double target) {
    const std::size_t target_idx = b.grid_index_of(target);
    double total = 0.0;
    for (std::size_t j = 0; j < a.outcome_grid().size(); ++j) {
        const double pa = event_probability(
            space, [&](std::size_t p) { return a.outcome_index(p) == j; });
        if (pa <= 0.0) continue;
        const double cond = bayes_conditional(
            space, [&](std::size_t p) { return b.outcome_index(p) == target_idx; },
            [&](std::size_t p) { return a.outcome_index(p) == j; });
        total += pa * cond;
    }
    return total;
}

SpaceFromJpd space_from_jpd(const JointDistribution& jpd) {
    std::vector<std::string> points;
    points.reserve(jpd.support.size());
    for (std::size_t r = 0; r < jpd.support.size(); ++r) {
        std::string label = "cell" + std::to_string(r);
        points.push_back(std::move(label));
    }
    FiniteProbabilitySpace space(std::move(points), jpd.probabilities);

    std::vector<RandomVariable> vars;
    for (std::size_t k = 0; k < jpd.variables.size(); ++k) {
        std::vector<double> grid;
        for (const auto& tuple : jpd.support) grid.push_back(tuple[k]);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        std::vector<double> values;
        for (const auto& tuple : jpd.support) values.push_back(tuple[k]);
        vars.emplace_back(jpd.variables[k], std::move(grid), std::move(values));
    }
    return SpaceFromJpd{std::move(space), std::move(vars)};
}

}  // namespace qprob
