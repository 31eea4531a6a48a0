#include "multikraw/krawtchouk.hpp"

#include <stdexcept>

#include "multikraw/combinatorics.hpp"
#include "multikraw/polynomial.hpp"

namespace multikraw {

BinomialParams::BinomialParams(int N_, Rational p_) : N(N_), p(std::move(p_)), q(1 - p) {
    if (N < 1) throw std::invalid_argument("BinomialParams: N must be positive");
    if (p <= 0 || p > 1) throw std::invalid_argument("BinomialParams: need 0 < p <= 1");
}

Rational krawtchouk_eval(int n, int x, const BinomialParams& params) {
    if (n < 0 || n > params.N) throw std::invalid_argument("krawtchouk_eval: degree out of range");
    if (x < 0 || x > params.N) throw std::invalid_argument("krawtchouk_eval: argument out of range");
    const Rational ratio = -params.q / params.p;
    Rational sum = 0;
    for (int nu = 0; nu <= n && nu <= x; ++nu) {
        BigInt c = binomial(x, nu) * binomial(params.N - x, n - nu);
        if (c == 0) continue;
        sum += rational_pow(ratio, nu) * Rational(c);
    }
    return sum / Rational(binomial(params.N, n));
}

Rational krawtchouk_norm(int n, const BinomialParams& params) {
    if (n < 0 || n > params.N) throw std::invalid_argument("krawtchouk_norm: degree out of range");
    if (n == 0) return 1;
    if (params.q == 0) throw std::invalid_argument("krawtchouk_norm: undefined for q = 0, n >= 1");
    return Rational(binomial(params.N, n)) * rational_pow(params.p / params.q, n);
}

Rational krawtchouk_gf_coeff(int n, int x, const BinomialParams& params) {
    if (x < 0 || x > params.N) throw std::invalid_argument("krawtchouk_gf_coeff: argument out of range");
    Polynomial gf = Polynomial::linear(1, -params.q / params.p).pow(x) *
                    Polynomial::linear(1, 1).pow(params.N - x);
    return gf.coeff(n);
}

Rational krawtchouk_transform(int n, const Rational& psi, const BinomialParams& params) {
    if (n < 0 || n > params.N) throw std::invalid_argument("krawtchouk_transform: degree out of range");
    return rational_pow(params.q * (1 - psi), n) *
           rational_pow(params.p * psi + params.q, params.N - n);
}

PoissonParams::PoissonParams(Rational lambda_) : lambda(std::move(lambda_)) {
    if (lambda <= 0) throw std::invalid_argument("PoissonParams: lambda must be positive");
}

Rational charlier_eval(int n, int x, const PoissonParams& params) {
    if (n < 0 || x < 0) throw std::invalid_argument("charlier_eval: negative argument");
    const Rational ratio = Rational(-1) / params.lambda;
    Rational sum = 0;
    for (int k = 0; k <= n && k <= x; ++k) {
        sum += Rational(binomial(n, k) * binomial(x, k) * factorial(k)) *
               rational_pow(ratio, k);
    }
    return sum;
}

}  // namespace multikraw
