#include "multikraw/duplication.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "multikraw/krawtchouk.hpp"
#include "multikraw/random.hpp"

namespace multikraw {

DuplicationParams::DuplicationParams(KernelParams kernel_, Rational p_dup_)
    : kernel(std::move(kernel_)), p_dup(std::move(p_dup_)), q_dup(1 - p_dup) {
    if (p_dup <= 0 || p_dup >= 1) {
        throw std::invalid_argument("DuplicationParams: need 0 < p_dup < 1");
    }
}

Rational triple_sum_K(const Configuration& x, const Configuration& y, int z,
                      const DuplicationParams& params) {
    const int N = params.kernel.N;
    if (z < 0 || z > N) throw std::invalid_argument("triple_sum_K: z out of range");
    const BinomialParams bp(N, params.p_dup);
    Rational total = 0;
    for (int n = 0; n <= N; ++n) {
        total += krawtchouk_eval(n, z, bp) * kernel_eval(n, x, y, params.kernel);
    }
    return total;
}

Rational MixingMeasure::mean() const {
    Rational m = 0;
    for (std::size_t z = 0; z < masses.size(); ++z) m += Rational(static_cast<long>(z)) * masses[z];
    return m;
}

Rational MixingMeasure::falling_moment(int r, bool of_complement) const {
    const int N = static_cast<int>(masses.size()) - 1;
    Rational m = 0;
    for (int z = 0; z <= N; ++z) {
        long v = of_complement ? N - z : z;
        m += Rational(falling_factorial(v, r)) * masses[static_cast<std::size_t>(z)];
    }
    return m;
}

namespace {

void require_admissible(const DuplicationParams& params, const char* who) {
    if (!params.admissible()) {
        throw std::invalid_argument(std::string(who) +
                                    ": inadmissible parameters, need 1 - p_dup <= min_j p_j = " +
                                    to_string(params.kernel.p.min()));
    }
}

}  // namespace

MixingMeasure mixing_measure(const Configuration& x, const Configuration& y,
                             const DuplicationParams& params) {
    require_admissible(params, "mixing_measure");
    const int N = params.kernel.N;
    MixingMeasure phi;
    phi.masses.reserve(static_cast<std::size_t>(N + 1));
    for (int z = 0; z <= N; ++z) {
        phi.masses.push_back(Rational(binomial(N, z)) * rational_pow(params.p_dup, z) *
                             rational_pow(params.q_dup, N - z) * triple_sum_K(x, y, z, params));
    }
    return phi;
}

MixingMeasure mixing_measure_explicit(const Configuration& x, const Configuration& y,
                                      const DuplicationParams& params) {
    require_admissible(params, "mixing_measure_explicit");
    const int N = params.kernel.N;
    const int d = x.dim();
    const SimplexWeights& p = params.kernel.p;
    const Rational mxy = multinomial_pmf(x, p) * multinomial_pmf(y, p);

    MixingMeasure phi;
    for (int chi = 0; chi <= N; ++chi) {
        Rational total = 0;
        for (int k = 0; k <= N; ++k) {
            if (binomial(k, N - chi) == 0) continue;
            for (const Configuration& zc : enumerate_configurations(k, d)) {
                const std::vector<int>& z = zc.counts();
                bool fits = true;
                for (int j = 0; j < d; ++j) {
                    if (z[static_cast<std::size_t>(j)] > x[j] ||
                        z[static_cast<std::size_t>(j)] > y[j]) {
                        fits = false;
                        break;
                    }
                }
                if (!fits) continue;
                BigInt sign_coef = binomial(k, N - chi);
                if ((N - k - chi) % 2 != 0) sign_coef = -sign_coef;
                Rational term = Rational(sign_coef) * rational_pow(params.q_dup, k) *
                                Rational(multinomial_coeff(N, z));
                std::vector<int> xr(static_cast<std::size_t>(d)), yr(static_cast<std::size_t>(d));
                for (int j = 0; j < d; ++j) {
                    xr[static_cast<std::size_t>(j)] = x[j] - z[static_cast<std::size_t>(j)];
                    yr[static_cast<std::size_t>(j)] = y[j] - z[static_cast<std::size_t>(j)];
                    term *= rational_pow(p[j], x[j] + y[j] - z[static_cast<std::size_t>(j)]);
                }
                term *= Rational(multinomial_coeff(N - k, xr) * multinomial_coeff(N - k, yr));
                total += term;
            }
        }
        phi.masses.push_back(total / mxy);
    }
    return phi;
}

std::pair<Rational, Rational> duplication_identity_check(int n, const Configuration& x,
                                                         const Configuration& y,
                                                         const DuplicationParams& params) {
    require_admissible(params, "duplication_identity_check");
    const int N = params.kernel.N;
    const BinomialParams bp(N, params.p_dup);
    const MixingMeasure phi = mixing_measure(x, y, params);
    Rational expectation = 0;
    for (int z = 0; z <= N; ++z) {
        expectation += phi.masses[static_cast<std::size_t>(z)] * krawtchouk_eval(n, z, bp);
    }
    return {kernel_eval(n, x, y, params.kernel), krawtchouk_norm(n, bp) * expectation};
}

Rational triple_product_1d(int x, int y, int z, int N, const Rational& r, const Rational& s) {
    const BinomialParams ps(N, s);
    const BinomialParams pr(N, r);
    Rational total = 0;
    for (int n = 0; n <= N; ++n) {
        total += krawtchouk_norm(n, ps) * krawtchouk_eval(n, x, ps) * krawtchouk_eval(n, y, ps) *
                 krawtchouk_eval(n, z, pr);
    }
    return total;
}

Rational match_indicator_moment(int r, const Configuration& x, const Configuration& y,
                                const DuplicationParams& params) {
    const int N = params.kernel.N;
    if (r < 0 || r > N) throw std::invalid_argument("match_indicator_moment: r out of range");
    if (r == 0) return 1;
    const int d = x.dim();
    const SimplexWeights& p = params.kernel.p;
    Rational total = 0;
    for (const Configuration& zc : enumerate_configurations(r, d)) {
        const std::vector<int>& z = zc.counts();
        bool fits = true;
        for (int j = 0; j < d; ++j) {
            if (z[static_cast<std::size_t>(j)] > x[j] || z[static_cast<std::size_t>(j)] > y[j]) {
                fits = false;
                break;
            }
        }
        if (!fits) continue;
        Rational term = rational_pow(params.q_dup, r) * Rational(multinomial_coeff(r, z));
        std::vector<int> xr(static_cast<std::size_t>(d)), yr(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            xr[static_cast<std::size_t>(j)] = x[j] - z[static_cast<std::size_t>(j)];
            yr[static_cast<std::size_t>(j)] = y[j] - z[static_cast<std::size_t>(j)];
            term *= rational_pow(p[j], x[j] + y[j] - z[static_cast<std::size_t>(j)]);
        }
        term *= Rational(multinomial_coeff(N - r, xr) * multinomial_coeff(N - r, yr));
        total += term;
    }
    return total / (multinomial_pmf(x, p) * multinomial_pmf(y, p));
}

Polynomial match_pgf_inclusion_exclusion(const Configuration& x, const Configuration& y,
                                         const DuplicationParams& params) {
    const int N = params.kernel.N;
    Polynomial pgf;
    for (int r = 0; r <= N; ++r) {
        Rational coef = Rational(binomial(N, r)) * match_indicator_moment(r, x, y, params);
        if (r % 2 != 0) coef = -coef;
        pgf += Polynomial::constant(coef) * Polynomial::linear(1, -1).pow(r);
    }
    return pgf;
}

Polynomial match_pgf_transform(const Configuration& x, const Configuration& y,
                               const DuplicationParams& params) {
    const int N = params.kernel.N;
    const Rational& q = params.q_dup;
    Polynomial pgf;
    for (int n = 0; n <= N; ++n) {
        Polynomial term = Polynomial::linear(-q, q).pow(n) *
                          Polynomial::linear(params.p_dup, q).pow(N - n);
        pgf += term * Polynomial::constant(kernel_eval(n, x, y, params.kernel));
    }
    return pgf;
}

std::vector<double> MatchingResult::frequencies() const {
    std::vector<double> f(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        f[i] = static_cast<double>(counts[i]) / static_cast<double>(replicates);
    }
    return f;
}

double MatchingResult::tv_distance(const MixingMeasure& phi) const {
    const std::vector<double> f = frequencies();
    double tv = 0.0;
    for (std::size_t z = 0; z < f.size(); ++z) {
        tv += std::abs(f[z] - to_double(phi.masses[z]));
    }
    return tv / 2.0;
}

double MatchingResult::falling_moment(int r, bool of_complement) const {
    const int N = static_cast<int>(counts.size()) - 1;
    double m = 0.0;
    for (int z = 0; z <= N; ++z) {
        long v = of_complement ? N - z : z;
        double ff = 1.0;
        for (int i = 0; i < r; ++i) ff *= static_cast<double>(v - i);
        m += ff * static_cast<double>(counts[static_cast<std::size_t>(z)]);
    }
    return m / static_cast<double>(replicates);
}

MatchingResult matching_simulate(const Configuration& x, const Configuration& y,
                                 const DuplicationParams& params, std::uint64_t replicates,
                                 std::uint64_t seed) {
    require_admissible(params, "matching_simulate");
    if (replicates == 0) throw std::invalid_argument("matching_simulate: zero replicates");
    const int N = params.kernel.N;
    if (x.total() != N || y.total() != N) {
        throw std::invalid_argument("matching_simulate: configurations must have total N");
    }
    const int d = x.dim();
    std::vector<double> tau(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        tau[static_cast<std::size_t>(j)] = to_double(params.q_dup / params.kernel.p[j]);
    }
    // deterministic multiset realizations of the two count vectors
    std::vector<int> xi_base, eta_base;
    for (int j = 0; j < d; ++j) {
        xi_base.insert(xi_base.end(), static_cast<std::size_t>(x[j]), j);
        eta_base.insert(eta_base.end(), static_cast<std::size_t>(y[j]), j);
    }

    const std::uint64_t chunk_count = std::min<std::uint64_t>(64, replicates);
    auto run_chunk = [&](std::uint64_t chunk) {
        Rng rng = Rng::stream(seed, chunk);
        std::uint64_t todo = replicates / chunk_count + (chunk < replicates % chunk_count ? 1 : 0);
        std::vector<std::int64_t> hist(static_cast<std::size_t>(N + 1), 0);
        std::vector<int> xi = xi_base, eta = eta_base;
        for (std::uint64_t rep = 0; rep < todo; ++rep) {
            rng.shuffle(xi);
            rng.shuffle(eta);
            int kept = 0;
            for (int j = 0; j < N; ++j) {
                if (xi[static_cast<std::size_t>(j)] == eta[static_cast<std::size_t>(j)] &&
                    rng.bernoulli(tau[static_cast<std::size_t>(xi[static_cast<std::size_t>(j)])])) {
                    ++kept;
                }
            }
            ++hist[static_cast<std::size_t>(N - kept)];
        }
        return hist;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(chunk_count)));
    std::vector<std::future<std::vector<std::int64_t>>> futures;
    MatchingResult result;
    result.counts.assign(static_cast<std::size_t>(N + 1), 0);
    result.replicates = replicates;
    result.seed = seed;
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunk_count; ++c) {
            auto hist = run_chunk(c);
            for (std::size_t z = 0; z < hist.size(); ++z) result.counts[z] += hist[z];
        }
    } else {
        for (std::uint64_t c = 0; c < chunk_count; ++c) {
            futures.push_back(std::async(std::launch::async, run_chunk, c));
        }
        for (auto& f : futures) {
            auto hist = f.get();
            for (std::size_t z = 0; z < hist.size(); ++z) result.counts[z] += hist[z];
        }
    }
    return result;
}

}  // namespace multikraw
