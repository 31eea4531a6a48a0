#include "multikraw/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "multikraw/kernel.hpp"
#include "multikraw/krawtchouk.hpp"

namespace multikraw {

UrnChainSpec::UrnChainSpec(int N_, SimplexWeights p_, int z_, Rational p_dup_)
    : N(N_), p(std::move(p_)), z(z_), p_dup(std::move(p_dup_)), q_dup(1 - p_dup) {
    if (N < 1) throw std::invalid_argument("UrnChainSpec: N must be positive");
    if (z < 1 || z > N) throw std::invalid_argument("UrnChainSpec: need 1 <= z <= N");
    if (p_dup <= 0 || p_dup > 1) throw std::invalid_argument("UrnChainSpec: need 0 < p_dup <= 1");
    if (q_dup > p.min()) {
        throw std::invalid_argument("UrnChainSpec: inadmissible, need 1 - p_dup <= min_j p_j = " +
                                    to_string(p.min()));
    }
}

std::vector<Rational> chain_eigenvalues(const UrnChainSpec& spec) {
    const BinomialParams bp(spec.N, spec.p_dup);
    std::vector<Rational> rho;
    rho.reserve(static_cast<std::size_t>(spec.N + 1));
    for (int n = 0; n <= spec.N; ++n) rho.push_back(krawtchouk_eval(n, spec.z, bp));
    return rho;
}

namespace {

void check_cap(const UrnChainSpec& spec, std::size_t cap) {
    if (configuration_count(spec.N, spec.p.dim()) > static_cast<long>(cap)) {
        throw std::invalid_argument("chain: state count exceeds cap of " + std::to_string(cap));
    }
}

std::vector<Rational> stationary_vector(const std::vector<Configuration>& states,
                                        const SimplexWeights& p) {
    std::vector<Rational> m;
    m.reserve(states.size());
    for (const Configuration& x : states) m.push_back(multinomial_pmf(x, p));
    return m;
}

// Evolve the point mass at x0 for l exact steps.
std::vector<Rational> distribution_after(const Configuration& x0, long l,
                                         const RationalMatrix& P,
                                         const std::vector<Configuration>& states) {
    const std::size_t S = states.size();
    const auto it = std::find(states.begin(), states.end(), x0);
    if (it == states.end()) throw std::invalid_argument("chain: x0 is not a state");
    std::vector<Rational> dist(S, Rational(0));
    dist[static_cast<std::size_t>(it - states.begin())] = 1;
    for (long step = 0; step < l; ++step) {
        std::vector<Rational> next(S, Rational(0));
        for (std::size_t i = 0; i < S; ++i) {
            if (dist[i] == 0) continue;
            for (std::size_t j = 0; j < S; ++j) next[j] += dist[i] * P[i][j];
        }
        dist = std::move(next);
    }
    return dist;
}

}  // namespace

RationalMatrix transition_matrix(const UrnChainSpec& spec, std::size_t cap) {
    check_cap(spec, cap);
    const std::vector<Configuration> states = enumerate_configurations(spec.N, spec.p.dim());
    const std::vector<Rational> m = stationary_vector(states, spec.p);
    const std::vector<Rational> rho = chain_eigenvalues(spec);
    const KernelParams params(spec.N, spec.p);
    const std::size_t S = states.size();
    RationalMatrix P(S, std::vector<Rational>(S, Rational(0)));
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = i; j < S; ++j) {
            const std::vector<Rational> q = kernel_eval_all(states[i], states[j], params);
            Rational k = 0;
            for (int n = 0; n <= spec.N; ++n) k += rho[static_cast<std::size_t>(n)] *
                                                   q[static_cast<std::size_t>(n)];
            P[i][j] = m[j] * k;
            P[j][i] = m[i] * k;  // K is symmetric; reversibility is built in
        }
    }
    return P;
}

Configuration step_simulate(const Configuration& state, const UrnChainSpec& spec, Rng& rng) {
    if (state.total() != spec.N) throw std::invalid_argument("step_simulate: state has wrong total");
    const int d = state.dim();
    std::vector<int> balls;
    balls.reserve(static_cast<std::size_t>(spec.N));
    for (int j = 0; j < d; ++j) balls.insert(balls.end(), static_cast<std::size_t>(state[j]), j);
    // choose z distinct balls: partial Fisher-Yates
    for (int i = 0; i < spec.z; ++i) {
        int j = i + rng.below(spec.N - i);
        std::swap(balls[static_cast<std::size_t>(i)], balls[static_cast<std::size_t>(j)]);
    }
    std::vector<int> counts = state.counts();
    for (int i = 0; i < spec.z; ++i) {
        const int old_colour = balls[static_cast<std::size_t>(i)];
        const double u = rng.unit();
        double acc = 0.0;
        int new_colour = d - 1;
        for (int c = 0; c < d; ++c) {
            Rational mass = spec.p[c];
            if (c == old_colour) mass -= spec.q_dup;
            acc += to_double(mass / spec.p_dup);
            if (u < acc) {
                new_colour = c;
                break;
            }
        }
        --counts[static_cast<std::size_t>(old_colour)];
        ++counts[static_cast<std::size_t>(new_colour)];
    }
    return Configuration(counts);
}

double chi2_distance_spectral(const Configuration& x0, long l, const UrnChainSpec& spec) {
    if (l < 0) throw std::invalid_argument("chi2_distance_spectral: negative l");
    const KernelParams params(spec.N, spec.p);
    const std::vector<Rational> diag = kernel_eval_all(x0, x0, params);
    const std::vector<Rational> rho = chain_eigenvalues(spec);
    double total = 0.0;
    for (int n = 1; n <= spec.N; ++n) {
        total += std::pow(to_double(rho[static_cast<std::size_t>(n)]), 2.0 * l) *
                 to_double(diag[static_cast<std::size_t>(n)]);
    }
    return total;
}

double chi2_distance_exact(const Configuration& x0, long l, const UrnChainSpec& spec,
                           std::size_t cap) {
    check_cap(spec, cap);
    const std::vector<Configuration> states = enumerate_configurations(spec.N, spec.p.dim());
    const RationalMatrix P = transition_matrix(spec, cap);
    const std::vector<Rational> m = stationary_vector(states, spec.p);
    const std::vector<Rational> dist = distribution_after(x0, l, P, states);
    Rational total = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const Rational diff = dist[i] - m[i];
        total += diff * diff / m[i];
    }
    return to_double(total);
}

double tv_distance_exact(const Configuration& x0, long l, const UrnChainSpec& spec,
                         std::size_t cap) {
    check_cap(spec, cap);
    const std::vector<Configuration> states = enumerate_configurations(spec.N, spec.p.dim());
    const RationalMatrix P = transition_matrix(spec, cap);
    const std::vector<Rational> m = stationary_vector(states, spec.p);
    const std::vector<Rational> dist = distribution_after(x0, l, P, states);
    Rational total = 0;
    for (std::size_t i = 0; i < states.size(); ++i) total += abs(dist[i] - m[i]);
    return to_double(total) / 2.0;
}

CutoffBounds cutoff_bounds(int colour, double c, const UrnChainSpec& spec) {
    if (spec.z != 1) throw std::invalid_argument("cutoff_bounds: stated for z = 1");
    if (colour < 0 || colour >= spec.p.dim()) throw std::invalid_argument("cutoff_bounds: bad colour");
    const double N = spec.N;
    const double p = to_double(spec.p_dup);
    const double pi = to_double(spec.p[colour]);
    const double target = N * p / 2.0 * (std::log(N * (1.0 / pi - 1.0)) + c);
    const long l = static_cast<long>(std::ceil(target));
    CutoffBounds b;
    b.l = l;
    b.lower = std::pow(1.0 - 1.0 / (N * p), 2.0 * l) * N * (1.0 / pi - 1.0);
    b.upper = std::exp(std::exp(-c)) - 1.0;
    return b;
}

CutoffBounds cutoff_bounds_general_z(const Configuration& x0, double c,
                                     const UrnChainSpec& spec) {
    const int d = spec.p.dim();
    if (x0.dim() != d || x0.total() != spec.N) {
        throw std::invalid_argument("cutoff_bounds_general_z: bad start");
    }
    bool uniform = true;
    for (int j = 0; j < d; ++j) uniform = uniform && (x0[j] * d == spec.N);
    if (uniform) {
        throw std::invalid_argument("cutoff_bounds_general_z: uniform start has vanishing lead term");
    }
    if (rational(spec.z, spec.N) == spec.p_dup) {
        throw std::invalid_argument("cutoff_bounds_general_z: z/N == p_dup gives no decay scale");
    }
    const double N = spec.N;
    const double rho1 = to_double(Rational(1) - Rational(spec.z) / (Rational(spec.N) * spec.p_dup));
    const double u = 1.0 - std::abs(rho1);
    const double minp = to_double(spec.p.min());
    const long l = static_cast<long>(std::ceil(
        (std::log(N * (1.0 / minp - 1.0)) + c) / (2.0 * u)));
    // exact leading term Q_1(x0,x0) = (1/N) sum x_j^2 / p_j - N
    Rational q1 = 0;
    for (int j = 0; j < d; ++j) q1 += Rational(x0[j]) * Rational(x0[j]) / spec.p[j];
    q1 = q1 / spec.N - spec.N;
    CutoffBounds b;
    b.l = l;
    b.lower = std::pow(rho1, 2.0 * l) * to_double(q1);
    b.upper = std::exp(std::exp(-c)) - 1.0;
    return b;
}

double SstResult::mean() const {
    double total = 0.0;
    for (std::size_t t = 0; t < counts.size(); ++t) total += static_cast<double>(t) * counts[t];
    return total / static_cast<double>(replicates);
}

double SstResult::prob_greater(long l) const {
    std::int64_t tail = 0;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        if (static_cast<long>(t) > l) tail += counts[t];
    }
    return static_cast<double>(tail) / static_cast<double>(replicates);
}

SstResult strong_stationary_time_sim(const UrnChainSpec& spec, std::uint64_t replicates,
                                     std::uint64_t seed) {
    if (spec.q_dup != 0) {
        throw std::invalid_argument("strong_stationary_time_sim: needs q = 0 (p_dup = 1)");
    }
    if (replicates == 0) throw std::invalid_argument("strong_stationary_time_sim: zero replicates");
    const int N = spec.N;
    const int z = spec.z;

    const std::uint64_t chunk_count = std::min<std::uint64_t>(64, replicates);
    auto run_chunk = [&](std::uint64_t chunk) {
        Rng rng = Rng::stream(seed, chunk);
        std::uint64_t todo = replicates / chunk_count + (chunk < replicates % chunk_count ? 1 : 0);
        std::vector<std::int64_t> hist;
        std::vector<int> order(static_cast<std::size_t>(N));
        std::vector<char> hit(static_cast<std::size_t>(N));
        for (std::uint64_t rep = 0; rep < todo; ++rep) {
            std::fill(hit.begin(), hit.end(), 0);
            std::iota(order.begin(), order.end(), 0);
            int remaining = N;
            long t = 0;
            while (remaining > 0) {
                ++t;
                for (int i = 0; i < z; ++i) {
                    int j = i + rng.below(N - i);
                    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
                    char& h = hit[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
                    if (!h) {
                        h = 1;
                        --remaining;
                    }
                }
            }
            if (static_cast<std::size_t>(t) >= hist.size()) hist.resize(static_cast<std::size_t>(t) + 1, 0);
            ++hist[static_cast<std::size_t>(t)];
        }
        return hist;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(chunk_count)));
    SstResult result;
    result.replicates = replicates;
    result.seed = seed;
    auto merge = [&](const std::vector<std::int64_t>& hist) {
        if (hist.size() > result.counts.size()) result.counts.resize(hist.size(), 0);
        for (std::size_t t = 0; t < hist.size(); ++t) result.counts[t] += hist[t];
    };
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunk_count; ++c) merge(run_chunk(c));
    } else {
        std::vector<std::future<std::vector<std::int64_t>>> futures;
        for (std::uint64_t c = 0; c < chunk_count; ++c) {
            futures.push_back(std::async(std::launch::async, run_chunk, c));
        }
        for (auto& f : futures) merge(f.get());
    }
    return result;
}

LumpedChain::LumpedChain(int N_, Rational p_i_, Rational p_dup_)
    : N(N_), p_i(std::move(p_i_)), p_dup(std::move(p_dup_)) {
    if (N < 1) throw std::invalid_argument("LumpedChain: N must be positive");
    if (p_i <= 0 || p_i >= 1) throw std::invalid_argument("LumpedChain: need 0 < p_i < 1");
    if (p_dup <= 0 || p_dup > 1) throw std::invalid_argument("LumpedChain: need 0 < p_dup <= 1");
    const Rational q = 1 - p_dup;
    alpha = 1 - (p_i - q) / p_dup;
    beta = p_i / p_dup;
}

RationalMatrix lumped_transition_matrix(const LumpedChain& chain) {
    const int N = chain.N;
    RationalMatrix K(static_cast<std::size_t>(N + 1),
                     std::vector<Rational>(static_cast<std::size_t>(N + 1), Rational(0)));
    for (int j = 0; j <= N; ++j) {
        const Rational down = rational(j, N) * chain.alpha;
        const Rational up = rational(N - j, N) * chain.beta;
        if (j > 0) K[static_cast<std::size_t>(j)][static_cast<std::size_t>(j - 1)] = down;
        if (j < N) K[static_cast<std::size_t>(j)][static_cast<std::size_t>(j + 1)] = up;
        K[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1 - down - up;
    }
    return K;
}

std::array<Rational, 3> lumped_x2_coefficients(const LumpedChain& chain) {
    const Rational N(chain.N);
    const Rational& pi = chain.p_i;
    const Rational qi = 1 - pi;
    const Rational a = pi * pi * N * (N - 1);
    const Rational c = N * N * pi * pi + N * pi * qi;
    const Rational b = -(a + c);  // x = 0 gives a + b + c = 0
    return {a, b, c};
}

LumpedMoments lumped_moments(const LumpedChain& chain, long l) {
    if (l < 0) throw std::invalid_argument("lumped_moments: negative l");
    const double N = chain.N;
    const double pi = to_double(chain.p_i);
    const double qi = 1.0 - pi;
    const double p = to_double(chain.p_dup);
    const auto [a, b, c] = lumped_x2_coefficients(chain);
    const double r1 = std::pow(1.0 - 1.0 / (N * p), static_cast<double>(l));
    const double r2 = std::pow(1.0 - 2.0 / (N * p), static_cast<double>(l));
    LumpedMoments m;
    m.mean = N * qi * r1 + N * pi;
    m.second_moment = to_double(a) * r2 * (qi / pi) * (qi / pi) -
                      to_double(b) * r1 * (qi / pi) + to_double(c);
    m.variance = m.second_moment - m.mean * m.mean;
    return m;
}

EigenReport eigenstructure_check(const UrnChainSpec& spec, std::size_t cap) {
    check_cap(spec, cap);
    const std::vector<Configuration> states = enumerate_configurations(spec.N, spec.p.dim());
    const RationalMatrix P = transition_matrix(spec, cap);
    const std::vector<Rational> m = stationary_vector(states, spec.p);
    const std::size_t S = states.size();

    // reversible symmetrization D^{1/2} P D^{-1/2} shares the spectrum
    Eigen::MatrixXd sym(S, S);
    std::vector<double> sqrt_m(S);
    for (std::size_t i = 0; i < S; ++i) sqrt_m[i] = std::sqrt(to_double(m[i]));
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = 0; j < S; ++j) {
            sym(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                sqrt_m[i] * to_double(P[i][j]) / sqrt_m[j];
        }
    }
    sym = ((sym + sym.transpose()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);

    EigenReport report;
    report.computed.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + S);
    const std::vector<Rational> rho = chain_eigenvalues(spec);
    for (int n = 0; n <= spec.N; ++n) {
        const long mult = binomial(n + spec.p.dim() - 2, spec.p.dim() - 2).get_si();
        for (long k = 0; k < mult; ++k) {
            report.expected.push_back(to_double(rho[static_cast<std::size_t>(n)]));
        }
    }
    std::sort(report.expected.begin(), report.expected.end());
    report.max_abs_deviation = 0.0;
    for (std::size_t i = 0; i < S; ++i) {
        report.max_abs_deviation =
            std::max(report.max_abs_deviation, std::abs(report.computed[i] - report.expected[i]));
    }
    report.matches = report.max_abs_deviation <= 1e-8;
    return report;
}

MixingCurve mixing_curve(const Configuration& x0, long l_max, const UrnChainSpec& spec,
                         std::size_t cap) {
    MixingCurve curve;
    const bool exact_ok =
        configuration_count(spec.N, spec.p.dim()) <= static_cast<long>(cap);
    std::vector<Configuration> states;
    RationalMatrix P;
    std::vector<Rational> m;
    std::vector<Rational> dist;
    if (exact_ok) {
        states = enumerate_configurations(spec.N, spec.p.dim());
        P = transition_matrix(spec, cap);
        m = stationary_vector(states, spec.p);
        const auto it = std::find(states.begin(), states.end(), x0);
        if (it == states.end()) throw std::invalid_argument("mixing_curve: x0 is not a state");
        dist.assign(states.size(), Rational(0));
        dist[static_cast<std::size_t>(it - states.begin())] = 1;
    }

    const double N = spec.N;
    const double minp = to_double(spec.p.min());
    const double rho1 =
        to_double(Rational(1) - Rational(spec.z) / (Rational(spec.N) * spec.p_dup));
    const double u = 1.0 - std::abs(rho1);
    Rational q1 = 0;
    for (int j = 0; j < x0.dim(); ++j) q1 += Rational(x0[j]) * Rational(x0[j]) / spec.p[j];
    q1 = q1 / spec.N - spec.N;

    for (long l = 0; l <= l_max; ++l) {
        curve.steps.push_back(l);
        curve.chi2.push_back(chi2_distance_spectral(x0, l, spec));
        if (exact_ok) {
            Rational tv = 0;
            for (std::size_t i = 0; i < states.size(); ++i) tv += abs(dist[i] - m[i]);
            curve.tv.push_back(to_double(tv) / 2.0);
            std::vector<Rational> next(states.size(), Rational(0));
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (dist[i] == 0) continue;
                for (std::size_t j = 0; j < states.size(); ++j) next[j] += dist[i] * P[i][j];
            }
            dist = std::move(next);
        } else {
            curve.tv.push_back(std::nullopt);
        }
        curve.lower.push_back(std::pow(rho1, 2.0 * l) * to_double(q1));
        const double c = 2.0 * l * u - std::log(N * (1.0 / minp - 1.0));
        curve.upper.push_back(std::exp(std::exp(-c)) - 1.0);
    }
    return curve;
}

std::string to_csv(const MixingCurve& curve) {
    std::ostringstream out;
    out << "l,chi2,tv,lower,upper\n";
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
        out << curve.steps[i] << ',' << fmt(curve.chi2[i]) << ',';
        if (curve.tv[i]) out << fmt(*curve.tv[i]);
        out << ',' << fmt(curve.lower[i]) << ',' << fmt(curve.upper[i]) << '\n';
    }
    return out.str();
}

}  // namespace multikraw
