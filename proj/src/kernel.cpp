#include "multikraw/kernel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "multikraw/krawtchouk.hpp"

namespace multikraw {

KernelParams::KernelParams(int N_, SimplexWeights p_) : N(N_), p(std::move(p_)) {
    if (N < 1) throw std::invalid_argument("KernelParams: N must be positive");
}

namespace {

void check_pair(const Configuration& x, const Configuration& y, const KernelParams& params) {
    if (x.dim() != params.p.dim() || y.dim() != params.p.dim()) {
        throw std::invalid_argument("kernel: dimension mismatch");
    }
    if (x.total() != params.N || y.total() != params.N) {
        throw std::invalid_argument("kernel: configurations must have total N");
    }
}

// Odometer over z with componentwise caps; visits every vector including 0.
template <typename F>
void for_each_capped(const std::vector<int>& caps, F&& f) {
    std::vector<int> z(caps.size(), 0);
    for (;;) {
        f(z);
        std::size_t j = 0;
        for (; j < caps.size(); ++j) {
            if (z[j] < caps[j]) {
                ++z[j];
                break;
            }
            z[j] = 0;
        }
        if (j == caps.size()) return;
    }
}

BigInt product_falling(const Configuration& x, const std::vector<int>& z) {
    BigInt r = 1;
    for (int j = 0; j < x.dim(); ++j) r *= falling_factorial(x[j], z[static_cast<std::size_t>(j)]);
    return r;
}

}  // namespace

Rational kernel_eval(int n, const Configuration& x, const Configuration& y,
                     const KernelParams& params) {
    check_pair(x, y, params);
    const int N = params.N;
    if (n < 0 || n > N) throw std::invalid_argument("kernel_eval: degree out of range");
    const int d = x.dim();
    std::vector<int> caps(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) caps[static_cast<std::size_t>(j)] = std::min({x[j], y[j], n});
    Rational total = 0;
    for_each_capped(caps, [&](const std::vector<int>& z) {
        int k = std::accumulate(z.begin(), z.end(), 0);
        if (k > n) return;
        BigInt outer = binomial(N, k) * binomial(N - k, n - k);
        if ((n - k) % 2 != 0) outer = -outer;
        Rational term(outer * multinomial_coeff(k, z) * product_falling(x, z) *
                      product_falling(y, z));
        for (int j = 0; j < d; ++j) term /= rational_pow(params.p[j], z[static_cast<std::size_t>(j)]);
        term /= Rational(falling_factorial(N, k) * falling_factorial(N, k));
        total += term;
    });
    return total;
}

std::vector<Rational> kernel_eval_all(const Configuration& x, const Configuration& y,
                                      const KernelParams& params) {
    check_pair(x, y, params);
    const int N = params.N;
    const int d = x.dim();
    std::vector<int> caps(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) caps[static_cast<std::size_t>(j)] = std::min(x[j], y[j]);
    std::vector<Rational> totals(static_cast<std::size_t>(N + 1), Rational(0));
    for_each_capped(caps, [&](const std::vector<int>& z) {
        int k = std::accumulate(z.begin(), z.end(), 0);
        Rational base(multinomial_coeff(k, z) * product_falling(x, z) * product_falling(y, z));
        for (int j = 0; j < d; ++j) base /= rational_pow(params.p[j], z[static_cast<std::size_t>(j)]);
        base /= Rational(falling_factorial(N, k) * falling_factorial(N, k));
        for (int n = k; n <= N; ++n) {
            BigInt outer = binomial(N, k) * binomial(N - k, n - k);
            if ((n - k) % 2 != 0) outer = -outer;
            totals[static_cast<std::size_t>(n)] += Rational(outer) * base;
        }
    });
    return totals;
}

Rational kernel_eval_centered(int n, const Configuration& x, const Configuration& y,
                              const KernelParams& params) {
    check_pair(x, y, params);
    const int N = params.N;
    if (n < 1 || n > N) {
        throw std::invalid_argument("kernel_eval_centered: stated for 1 <= n <= N");
    }
    const int d = x.dim();
    Rational total = 0;
    for (int k = 1; k <= n; ++k) {
        BigInt outer = binomial(N, k) * binomial(N - k, n - k);
        if ((n - k) % 2 != 0) outer = -outer;
        const BigInt nk = falling_factorial(N, k);
        Rational inner = 0;
        for (const Configuration& zc : enumerate_configurations(k, d)) {
            const std::vector<int>& z = zc.counts();
            Rational pz = 1;
            for (int j = 0; j < d; ++j) pz *= rational_pow(params.p[j], z[static_cast<std::size_t>(j)]);
            Rational xc = Rational(product_falling(x, z)) - Rational(nk) * pz;
            Rational yc = Rational(product_falling(y, z)) - Rational(nk) * pz;
            inner += Rational(multinomial_coeff(k, z)) * xc * yc / (pz * Rational(nk * nk));
        }
        total += Rational(outer) * inner;
    }
    return total;
}

Rational kernel_eval_hypergeom(int n, const Configuration& x, const Configuration& y,
                               const KernelParams& params) {
    check_pair(x, y, params);
    const int N = params.N;
    if (n < 1 || n > N) {
        throw std::invalid_argument("kernel_eval_hypergeom: stated for 1 <= n <= N");
    }
    const int d = x.dim();
    Rational total = 0;
    for (int k = 1; k <= n; ++k) {
        BigInt outer = binomial(N, k) * binomial(N - k, n - k);
        if ((n - k) % 2 != 0) outer = -outer;
        const Rational cNk(binomial(N, k));
        Rational inner = 0;
        for (const Configuration& zc : enumerate_configurations(k, d)) {
            const std::vector<int>& z = zc.counts();
            Rational cz_pz(multinomial_coeff(k, z));
            for (int j = 0; j < d; ++j) {
                cz_pz *= rational_pow(params.p[j], z[static_cast<std::size_t>(j)]);
            }
            BigInt hx = 1, hy = 1;
            for (int j = 0; j < d; ++j) {
                hx *= binomial(x[j], z[static_cast<std::size_t>(j)]);
                hy *= binomial(y[j], z[static_cast<std::size_t>(j)]);
            }
            Rational fx = Rational(hx) / cNk / cz_pz - 1;
            Rational fy = Rational(hy) / cNk / cz_pz - 1;
            inner += cz_pz * fx * fy;
        }
        total += Rational(outer) * inner;
    }
    return total;
}

Rational hypergeom_prob(const Configuration& z, const Configuration& x) {
    if (z.dim() != x.dim()) throw std::invalid_argument("hypergeom_prob: dimension mismatch");
    BigInt num = 1;
    for (int j = 0; j < x.dim(); ++j) {
        if (z[j] > x[j]) throw std::invalid_argument("hypergeom_prob: need z <= x componentwise");
        num *= binomial(x[j], z[j]);
    }
    return Rational(num) / Rational(binomial(x.total(), z.total()));
}

Rational poisson_kernel_lhs(const Rational& rho, const Configuration& x,
                            const Configuration& y, const KernelParams& params) {
    Rational total = 1;
    for (int n = 1; n <= params.N; ++n) {
        total += rational_pow(rho, n) * kernel_eval(n, x, y, params);
    }
    return total;
}

Rational poisson_kernel_rhs(const Rational& rho, const Configuration& x,
                            const Configuration& y, const KernelParams& params) {
    check_pair(x, y, params);
    const int N = params.N;
    const int d = x.dim();
    std::vector<int> caps(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) caps[static_cast<std::size_t>(j)] = std::min(x[j], y[j]);
    Rational total = 0;
    for_each_capped(caps, [&](const std::vector<int>& z) {
        int k = std::accumulate(z.begin(), z.end(), 0);
        Rational term = rational_pow(rho, k) * rational_pow(1 - rho, N - k) *
                        Rational(multinomial_coeff(N, z));
        std::vector<int> xr(static_cast<std::size_t>(d)), yr(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            xr[static_cast<std::size_t>(j)] = x[j] - z[static_cast<std::size_t>(j)];
            yr[static_cast<std::size_t>(j)] = y[j] - z[static_cast<std::size_t>(j)];
            term *= rational_pow(params.p[j], x[j] + y[j] - z[static_cast<std::size_t>(j)]);
        }
        term *= Rational(multinomial_coeff(N - k, xr) * multinomial_coeff(N - k, yr));
        total += term;
    });
    return total / (multinomial_pmf(x, params.p) * multinomial_pmf(y, params.p));
}

Rational poisson_kernel_rho_min(const SimplexWeights& p) {
    return Rational(-1) / (Rational(1) / p.min() - 1);
}

Rational kernel_recursion_rhs(int n, const Configuration& x, const Configuration& y,
                              const KernelParams& params) {
    check_pair(x, y, params);
    const int N = params.N;
    if (N < 1 || n < 1 || n > N) throw std::invalid_argument("kernel_recursion_rhs: need N >= 1, 1 <= n <= N");
    const int d = x.dim();
    auto eval_prev = [&](int k, const Configuration& a, const Configuration& b) {
        if (k > N - 1) return Rational(0);  // the level-(N-1) expansion stops at degree N-1
        if (N - 1 == 0) return Rational(1);  // empty urn: only the constant survives
        return kernel_eval(k, a, b, KernelParams(N - 1, params.p));
    };
    Rational total = 0;
    for (int i = 0; i < d; ++i) {
        if (x[i] == 0) continue;
        std::vector<int> xm = x.counts();
        --xm[static_cast<std::size_t>(i)];
        const Configuration xprev(xm);
        for (int j = 0; j < d; ++j) {
            if (y[j] == 0) continue;
            std::vector<int> ym = y.counts();
            --ym[static_cast<std::size_t>(j)];
            const Configuration yprev(ym);
            Rational term = eval_prev(n, xprev, yprev);
            Rational coef = (i == j ? Rational(1) / params.p[i] : Rational(0)) - 1;
            term += coef * eval_prev(n - 1, xprev, yprev);
            total += Rational(x[i]) * Rational(y[j]) / Rational(N * N) * term;
        }
    }
    return total;
}

Rational kernel_transform(int n, std::span<const Rational> s, std::span<const Rational> t,
                          const KernelParams& params) {
    const int d = params.p.dim();
    if (static_cast<int>(s.size()) != d || static_cast<int>(t.size()) != d) {
        throw std::invalid_argument("kernel_transform: dimension mismatch");
    }
    if (n < 0 || n > params.N) throw std::invalid_argument("kernel_transform: degree out of range");
    Rational t0s = 0, t0t = 0, diag = 0;
    for (int j = 0; j < d; ++j) {
        t0s += params.p[j] * s[static_cast<std::size_t>(j)];
        t0t += params.p[j] * t[static_cast<std::size_t>(j)];
        diag += params.p[j] * s[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(j)];
    }
    return Rational(binomial(params.N, n)) * rational_pow(t0s * t0t, params.N - n) *
           rational_pow(diag - t0s * t0t, n);
}

Rational kernel_diag_all_ones(int n, const KernelParams& params) {
    const int d = params.p.dim();
    if (params.N != d) throw std::invalid_argument("kernel_diag_all_ones: needs N == d");
    const int N = params.N;
    if (n < 0 || n > N) throw std::invalid_argument("kernel_diag_all_ones: degree out of range");
    // elementary symmetric functions of 1/p_j, by the product recurrence
    std::vector<Rational> esym(static_cast<std::size_t>(N + 1), Rational(0));
    esym[0] = 1;
    for (int j = 0; j < d; ++j) {
        Rational inv = Rational(1) / params.p[j];
        for (int k = std::min(j + 1, N); k >= 1; --k) {
            esym[static_cast<std::size_t>(k)] += inv * esym[static_cast<std::size_t>(k - 1)];
        }
    }
    Rational total = 0;
    for (int j = 0; j <= n; ++j) {
        BigInt outer = binomial(N, j) * binomial(N - j, n - j) * factorial(j);
        if ((n - j) % 2 != 0) outer = -outer;
        total += Rational(outer) * esym[static_cast<std::size_t>(j)] /
                 Rational(falling_factorial(N, j) * falling_factorial(N, j));
    }
    return total;
}

PoissonVectorParams::PoissonVectorParams(std::vector<Rational> mu_) : mu(std::move(mu_)) {
    if (mu.empty()) throw std::invalid_argument("PoissonVectorParams: empty");
    for (const Rational& m : mu) {
        if (m <= 0) throw std::invalid_argument("PoissonVectorParams: means must be positive");
    }
}

Rational PoissonVectorParams::total() const {
    Rational s = 0;
    for (const Rational& m : mu) s += m;
    return s;
}

Rational poisson_limit_kernel(int n, std::span<const int> x, std::span<const int> y,
                              const PoissonVectorParams& params) {
    const int d = static_cast<int>(params.mu.size());
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d) {
        throw std::invalid_argument("poisson_limit_kernel: dimension mismatch");
    }
    if (n < 0) throw std::invalid_argument("poisson_limit_kernel: negative degree");
    const Rational mu_total = params.total();
    const PoissonParams charlier_params(mu_total);
    const int xt = std::accumulate(x.begin(), x.end(), 0);
    const int yt = std::accumulate(y.begin(), y.end(), 0);
    std::vector<int> caps(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        caps[static_cast<std::size_t>(j)] = std::min({x[static_cast<std::size_t>(j)],
                                                      y[static_cast<std::size_t>(j)], n});
    }
    Rational total = 0;
    for_each_capped(caps, [&](const std::vector<int>& z) {
        int k = std::accumulate(z.begin(), z.end(), 0);
        if (k > n) return;
        Rational term = rational_pow(mu_total, n - k) / Rational(factorial(n - k));
        term *= charlier_eval(n - k, xt + yt - 2 * k, charlier_params);
        for (int j = 0; j < d; ++j) {
            int zj = z[static_cast<std::size_t>(j)];
            term *= Rational(falling_factorial(x[static_cast<std::size_t>(j)], zj) *
                             falling_factorial(y[static_cast<std::size_t>(j)], zj));
            term /= rational_pow(params.mu[static_cast<std::size_t>(j)], zj) * Rational(factorial(zj));
        }
        total += term;
    });
    return total;
}

PoissonSeries poisson_limit_kernel_series(double rho, std::span<const int> x,
                                          std::span<const int> y,
                                          const PoissonVectorParams& params, int n_max) {
    if (n_max < 0) throw std::invalid_argument("poisson_limit_kernel_series: negative n_max");
    double sum = 1.0;
    double last = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        last = std::pow(rho, n) * to_double(poisson_limit_kernel(n, x, y, params));
        sum += last;
    }
    return PoissonSeries{sum, std::abs(rho) * std::abs(last), n_max};
}

double poisson_limit_kernel_closed(double rho, std::span<const int> x,
                                   std::span<const int> y,
                                   const PoissonVectorParams& params) {
    const int d = static_cast<int>(params.mu.size());
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d) {
        throw std::invalid_argument("poisson_limit_kernel_closed: dimension mismatch");
    }
    const int xt = std::accumulate(x.begin(), x.end(), 0);
    const int yt = std::accumulate(y.begin(), y.end(), 0);
    std::vector<int> caps(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        caps[static_cast<std::size_t>(j)] = std::min(x[static_cast<std::size_t>(j)],
                                                     y[static_cast<std::size_t>(j)]);
    }
    double sum = 0.0;
    for_each_capped(caps, [&](const std::vector<int>& z) {
        int k = std::accumulate(z.begin(), z.end(), 0);
        double term = std::pow(rho, k) * std::pow(1.0 - rho, xt + yt - 2 * k);
        for (int j = 0; j < d; ++j) {
            int zj = z[static_cast<std::size_t>(j)];
            term *= to_double(Rational(falling_factorial(x[static_cast<std::size_t>(j)], zj) *
                                       falling_factorial(y[static_cast<std::size_t>(j)], zj)) /
                              (rational_pow(params.mu[static_cast<std::size_t>(j)], zj) *
                               Rational(factorial(zj))));
        }
        sum += term;
    });
    return std::exp(to_double(params.total()) * rho) * sum;
}

}  // namespace multikraw
