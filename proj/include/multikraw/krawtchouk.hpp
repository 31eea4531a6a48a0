#pragma once

#include "multikraw/rational.hpp"

namespace multikraw {

/// Parameters of the binomial(N,p) weight. p = 1 (q = 0) is allowed: the
/// polynomials stay well defined and the urn chains with no holding use it;
/// the norm h_n is only defined for q > 0.
struct BinomialParams {
    int N;
    Rational p;
    Rational q;

    BinomialParams(int N, Rational p);
};

/// Q_n(x;N,p), normalized so Q_n(0) = 1, by the explicit sum
/// sum_nu (-q/p)^nu C(x,nu) C(N-x,n-nu) / C(N,n).
Rational krawtchouk_eval(int n, int x, const BinomialParams& params);

/// h_n(p) = C(N,n) (p/q)^n, the reciprocal of E[Q_n(X)^2].
Rational krawtchouk_norm(int n, const BinomialParams& params);

/// Coefficient of t^n in (1 - t q/p)^x (1 + t)^{N-x}, formed by polynomial
/// multiplication; equals C(N,n) Q_n(x;N,p).
Rational krawtchouk_gf_coeff(int n, int x, const BinomialParams& params);

/// E[psi^X Q_n(X;N,p)] = (q(1-psi))^n (p psi + q)^{N-n}.
Rational krawtchouk_transform(int n, const Rational& psi, const BinomialParams& params);

struct PoissonParams {
    Rational lambda;
    explicit PoissonParams(Rational lambda);
};

/// Poisson-Charlier polynomial C_n(x;lambda), from the generating function
/// sum_n C_n(x;lambda) z^n/n! = e^z (1 - z/lambda)^x. Extracting the z^n
/// coefficient of the product gives the closed sum
///   C_n(x;lambda) = sum_k C(n,k) C(x,k) k! (-1/lambda)^k.
Rational charlier_eval(int n, int x, const PoissonParams& params);

}  // namespace multikraw
