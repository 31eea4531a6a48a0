#pragma once

#include <initializer_list>
#include <vector>

#include "multikraw/combinatorics.hpp"
#include "multikraw/rational.hpp"

namespace multikraw {

/// Counts of N balls over d cells (a multinomial outcome / urn state).
class Configuration {
  public:
    Configuration() = default;
    explicit Configuration(std::vector<int> counts);
    Configuration(std::initializer_list<int> counts)
        : Configuration(std::vector<int>(counts)) {}

    int dim() const { return static_cast<int>(counts_.size()); }
    int total() const { return total_; }
    int operator[](int j) const { return counts_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& counts() const { return counts_; }

    bool operator==(const Configuration&) const = default;
    auto operator<=>(const Configuration&) const = default;

  private:
    std::vector<int> counts_;
    int total_ = 0;
};

/// N e_j: all balls in cell j.
Configuration pure_configuration(int N, int d, int j);

/// Positive cell probabilities summing exactly to 1.
class SimplexWeights {
  public:
    explicit SimplexWeights(std::vector<Rational> weights);

    int dim() const { return static_cast<int>(w_.size()); }
    const Rational& operator[](int j) const { return w_[static_cast<std::size_t>(j)]; }
    const std::vector<Rational>& weights() const { return w_; }
    Rational min() const;

    bool operator==(const SimplexWeights&) const = default;

  private:
    std::vector<Rational> w_;
};

/// All compositions of N into d non-negative parts, in reverse-lexicographic
/// order. This ordering is part of the public contract: transition matrices
/// and bivariate laws are indexed by it.
std::vector<Configuration> enumerate_configurations(int N, int d);

/// C(N+d-1, d-1), the number of configurations.
BigInt configuration_count(int N, int d);

/// C(N; x_1,...,x_d).
BigInt configuration_multinomial(const Configuration& x);

/// m(x,p) = C(N;x) prod p_j^{x_j}, exact.
Rational multinomial_pmf(const Configuration& x, const SimplexWeights& p);

}  // namespace multikraw
