#pragma once

#include <span>
#include <vector>

#include "multikraw/configuration.hpp"
#include "multikraw/rational.hpp"

namespace multikraw {

struct KernelParams {
    int N;
    SimplexWeights p;

    KernelParams(int N, SimplexWeights p);
};

/// Reproducing kernel polynomial Q_n(x,y;N,p): the sum over all orthonormal
/// polynomial pairs of total degree n, evaluated by the explicit double sum
/// over shared sub-configurations z <= x,y with |z| <= n.
Rational kernel_eval(int n, const Configuration& x, const Configuration& y,
                     const KernelParams& params);

/// All values Q_0..Q_N at (x,y) from a single pass over the shared
/// sub-configuration grid; the per-z work is degree independent.
std::vector<Rational> kernel_eval_all(const Configuration& x, const Configuration& y,
                                      const KernelParams& params);

/// Same value for 1 <= n <= N, computed through centered falling factorials
/// x^c_[z] = x_[z] - N_[|z|] p^z. Rejects n = 0 (the centered form is stated
/// for n >= 1). The inner sum runs over ALL z of each fixed total |z|: terms
/// with z !<= x contribute through the centering.
Rational kernel_eval_centered(int n, const Configuration& x, const Configuration& y,
                              const KernelParams& params);

/// Same value for 1 <= n <= N, written in sub-sampling probabilities
/// H(z|x) = prod_j C(x_j,z_j) / C(N,|z|). Rejects n = 0.
Rational kernel_eval_hypergeom(int n, const Configuration& x, const Configuration& y,
                               const KernelParams& params);

/// H(z|x): probability that a uniform sub-sample of size |z| from the
/// configuration x has configuration z. Requires z <= x componentwise.
Rational hypergeom_prob(const Configuration& z, const Configuration& x);

/// 1 + sum_{n=1}^N rho^n Q_n(x,y;N,p), via kernel_eval.
Rational poisson_kernel_lhs(const Rational& rho, const Configuration& x,
                            const Configuration& y, const KernelParams& params);

/// The probabilistic form: m(x)^{-1} m(y)^{-1} times the sum over shared
/// diagonal counts z <= x,y of
///   rho^|z| (1-rho)^{N-|z|} C(N; z, N-|z|) p^z
///   * C(N-|z|; x-z) p^{x-z} * C(N-|z|; y-z) p^{y-z}.
Rational poisson_kernel_rhs(const Rational& rho, const Configuration& x,
                            const Configuration& y, const KernelParams& params);

/// Lower end of the nonnegativity range: -1 / (1/min_j p_j - 1).
Rational poisson_kernel_rho_min(const SimplexWeights& p);

/// Right side of the degree-lowering recursion in N: expresses Q_n at N
/// through kernels at N-1,
///   sum_{i,j} (x_i/N)(y_j/N) [ Q_n(x-e_i, y-e_j; N-1)
///                              + (delta_ij/p_i - 1) Q_{n-1}(x-e_i, y-e_j; N-1) ],
/// with Q_k(.,.;N-1) = 0 for k > N-1. Contract: equals kernel_eval at N.
Rational kernel_recursion_rhs(int n, const Configuration& x, const Configuration& y,
                              const KernelParams& params);

/// E[prod s_i^{X_i} t_j^{Y_j} Q_n(X,Y)] for independent multinomials:
/// C(N,n) [T_0(s)T_0(t)]^{N-n} [sum_j p_j s_j t_j - T_0(s)T_0(t)]^n.
Rational kernel_transform(int n, std::span<const Rational> s, std::span<const Rational> t,
                          const KernelParams& params);

/// Diagonal value Q_n(x,x) for x = (1,1,...,1) (N == d) through elementary
/// symmetric functions of 1/p_j; a cheap route for spectral sums.
Rational kernel_diag_all_ones(int n, const KernelParams& params);

struct PoissonVectorParams {
    std::vector<Rational> mu;
    explicit PoissonVectorParams(std::vector<Rational> mu);
    Rational total() const;
};

/// Reproducing kernel polynomial Q_n^P(x,y;mu) on the product Poisson law:
/// sum over z <= x,y with |z| <= n of
///   |mu|^{n-|z|}/(n-|z|)! C_{n-|z|}(|x|+|y|-2|z|;|mu|)
///   prod_i x_i_[z_i] y_i_[z_i] / (mu_i^{z_i} z_i!),
/// with C_m the Poisson-Charlier polynomials.
Rational poisson_limit_kernel(int n, std::span<const int> x, std::span<const int> y,
                              const PoissonVectorParams& params);

struct PoissonSeries {
    double value;
    double truncation_residual;  // |rho|^{n_max+1} * |last term|
    int n_max;
};

/// Partial sum 1 + sum_{n=1}^{n_max} rho^n Q_n^P(x,y;mu) of the (infinite)
/// Poisson kernel series, with a crude residual estimate.
PoissonSeries poisson_limit_kernel_series(double rho, std::span<const int> x,
                                          std::span<const int> y,
                                          const PoissonVectorParams& params,
                                          int n_max = 30);

/// Closed form of the same kernel:
/// e^{|mu| rho} sum_{z<=x,y} rho^|z| (1-rho)^{|x|+|y|-2|z|}
///   prod_i x_i_[z_i] y_i_[z_i] / (mu_i^{z_i} z_i!).
double poisson_limit_kernel_closed(double rho, std::span<const int> x,
                                   std::span<const int> y,
                                   const PoissonVectorParams& params);

}  // namespace multikraw
