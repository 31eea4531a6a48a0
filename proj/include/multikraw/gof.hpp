#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "multikraw/configuration.hpp"
#include "multikraw/rational.hpp"

namespace multikraw {

/// A sample of multinomial configurations sharing (N, d).
class Sample {
  public:
    Sample(int N, int d, std::vector<Configuration> observations);

    int N() const { return N_; }
    int d() const { return d_; }
    int r() const { return static_cast<int>(obs_.size()); }
    const std::vector<Configuration>& observations() const { return obs_; }

    /// Pooled per-cell counts, sum over the sample.
    std::vector<long> pooled_counts() const;
    /// Exact empirical cell frequencies x-bar/N (the moment estimate of p).
    std::vector<Rational> estimated_p() const;

  private:
    int N_;
    int d_;
    std::vector<Configuration> obs_;
};

struct DataError : std::runtime_error {
    int line;
    DataError(const std::string& what, int line_) : std::runtime_error(what), line(line_) {}
};

/// Counts file: header "#N=<int>,d=<int>", then one observation per line as
/// d comma-separated integers. Throws DataError with the offending line.
Sample read_counts_file(std::istream& in);
Sample read_counts_file(const std::string& path);

struct GofReport {
    std::string mode;  // "fixed" or "estimated"
    int N = 0;
    int d = 0;
    int r = 0;
    std::vector<double> components;  // r * ptilde(i)^2, i = 1..N
    std::vector<long> dfs;
    std::vector<double> p_values;
    double total = 0.0;
};

/// Degree-i slice of the chi-squared statistic:
/// ptilde(i)^2 = sum_{x,y} Q_i(x,y;N,p) phat(x) phat(y), a double sum over
/// the empirical support. Kernel values are exact rationals converted at the
/// boundary; accumulation order is fixed, so results are bit-reproducible.
double component_stat(int i, const Sample& sample, const SimplexWeights& p);

/// All of ptilde(1)^2..ptilde(N)^2 in one sweep over support pairs.
std::vector<double> component_stats_all(const Sample& sample, const SimplexWeights& p);

/// Classical chi-squared of the sample against the multinomial law over the
/// whole configuration space (the statistic the components add up to;
/// r * sum_x (phat(x) - m(x))^2 / m(x), total df C(N+d-1,d-1) - 1).
double total_chi_squared(const Sample& sample, const SimplexWeights& p);

/// C(i+d-2, d-2), the degrees of freedom of the degree-i component.
long degrees_of_freedom(int i, int d);

GofReport fixed_p_report(const Sample& sample, const SimplexWeights& p);

/// p estimated by the empirical frequencies: component 1 vanishes by
/// construction and is reported as exactly 0 with 0 df; the test statistic
/// (the "total") is sum_{i=2}^{N-1} r*ptilde(i)^2, and the total df drop by
/// d-1. Rejects samples with an empty cell (the kernel needs p_j > 0).
GofReport estimated_p_report(const Sample& sample);

/// ptilde(i)^2 through empirical sub-sampling probabilities
/// Hbar(z | x_1..x_r); contract: equals component_stat.
double subsample_form_stat(int i, const Sample& sample, const SimplexWeights& p);

/// Hbar(z | x_1..x_r) = sum_x H(z|x) phat(x), exact.
Rational empirical_subsample_prob(const Configuration& z, const Sample& sample);

/// Components combined through the geometric kernel weights:
/// sum_i rho^i * r * ptilde(i)^2, for a user-supplied rho in (0,1).
double poisson_weighted_stat(const Sample& sample, const SimplexWeights& p, double rho);

/// Upper tail of the chi-squared(df) law via the regularized incomplete
/// gamma function; absolute error below 1e-10 at desk scale.
double chi_squared_survival(double x, int df);

/// Report serialized as a single JSON document with fields exactly
/// {"mode","N","d","r","components","dfs","p_values","total"}.
std::string to_json(const GofReport& report);

}  // namespace multikraw
