#pragma once

#include <span>
#include <vector>

#include "multikraw/configuration.hpp"
#include "multikraw/rational.hpp"

namespace multikraw {

/// Degrees n_1..n_{d-1} of a multivariate Krawtchouk polynomial.
struct MultiIndex {
    std::vector<int> degrees;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> deg);
    MultiIndex(std::initializer_list<int> deg) : MultiIndex(std::vector<int>(deg)) {}

    int size() const { return static_cast<int>(degrees.size()); }
    int total() const;
    bool operator==(const MultiIndex&) const = default;
};

/// All multi-indices of length d-1 with total degree exactly n (n <= N).
std::vector<MultiIndex> multi_indices_of_degree(int n, int d);

/// An orthonormal function set u^{(1)},...,u^{(d-1)} on the weights p (the
/// constant u^{(0)} = 1 is implicit). Rows are stored UNNORMALIZED with their
/// exact squared norms s_l = sum_j v_j^2 p_j, so that every identity tested
/// downstream stays in exact rational arithmetic: normalization contributes
/// only even powers sqrt(s_l)^{2k} to the quantities of interest.
class OrthonormalBasis {
  public:
    /// Gram-Schmidt of the cell-indicator functions against the constants,
    /// taken in seed_order (default 0,1,...,d-2). Deterministic given p.
    static OrthonormalBasis gram_schmidt(const SimplexWeights& p,
                                         std::vector<int> seed_order = {});

    /// Injects caller-supplied unnormalized rows; validates mutual
    /// orthogonality and orthogonality to constants under p.
    OrthonormalBasis(std::vector<std::vector<Rational>> rows, SimplexWeights p);

    int dim() const { return weights_.dim(); }
    int row_count() const { return static_cast<int>(rows_.size()); }
    const std::vector<Rational>& row(int l) const;      // l = 1..d-1
    const Rational& squared_norm(int l) const;          // l = 1..d-1
    const SimplexWeights& weights() const { return weights_; }

    /// Normalized entry u_j^{(l)} as a float (output boundary only).
    double entry(int l, int j) const;

  private:
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> norms_;
    SimplexWeights weights_;
};

/// Unnormalized polynomial V_n(x;v): the coefficient of prod_l w_l^{n_l} in
/// prod_j (1 + sum_l w_l v_j^{(l)})^{x_j}, extracted by truncated multivariate
/// polynomial multiplication. The orthonormal-basis polynomial is
/// Q_n(x;u) = V_n(x;v) / prod_l s_l^{n_l/2}.
Rational mvk_eval_raw(const MultiIndex& n, const Configuration& x,
                      const OrthonormalBasis& basis);

/// Q_n(x;u), normalized, as a float.
double mvk_eval(const MultiIndex& n, const Configuration& x,
                const OrthonormalBasis& basis);

/// E[prod_j s_j^{X_j} V_n(X;v)] =
///   C(N; n, N-|n|) T_0(s)^{N-|n|} prod_l T_l(s)^{n_l},
/// with T_l(s) = sum_j p_j s_j v_j^{(l)}. Same normalization as mvk_eval_raw,
/// so checks against the brute-force expectation stay exact.
Rational mvk_transform_raw(int N, const MultiIndex& n, std::span<const Rational> s,
                           const OrthonormalBasis& basis);

/// Normalized transform as a float.
double mvk_transform(int N, const MultiIndex& n, std::span<const Rational> s,
                     const OrthonormalBasis& basis);

/// Joint law of contingency-table margins (X,Y) under cell probabilities
/// p_ij = p_i p_j (1 - rho + delta_ij rho / p_i), indexed by
/// enumerate_configurations(N,d) on both axes. For rho outside the
/// nonnegativity range the "law" has negative entries; it is returned with
/// the flag down rather than rejected.
struct BivariateLaw {
    std::vector<Configuration> states;
    std::vector<std::vector<Rational>> prob;
    bool nonnegative;
    Rational min_entry;
};

BivariateLaw contingency_marginal_law(int N, const SimplexWeights& p, const Rational& rho);

}  // namespace multikraw
