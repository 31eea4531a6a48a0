#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "multikraw/chain.hpp"
#include "multikraw/kernel.hpp"
#include "multikraw/krawtchouk.hpp"

using namespace multikraw;

namespace {

const SimplexWeights kP3{{rational(1, 2), rational(1, 4), rational(1, 4)}};

std::vector<Rational> stationary(const std::vector<Configuration>& states,
                                 const SimplexWeights& p) {
    std::vector<Rational> m;
    for (const Configuration& x : states) m.push_back(multinomial_pmf(x, p));
    return m;
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(UrnChainSpec(3, kP3, 0, rational(4, 5)), std::invalid_argument);
    CHECK_THROWS_AS(UrnChainSpec(3, kP3, 4, rational(4, 5)), std::invalid_argument);
    // q = 3/10 > min p = 1/4 is inadmissible
    CHECK_THROWS_AS(UrnChainSpec(3, kP3, 1, rational(7, 10)), std::invalid_argument);
    CHECK_NOTHROW(UrnChainSpec(3, kP3, 1, rational(3, 4)));  // boundary admissible
    CHECK_NOTHROW(UrnChainSpec(3, kP3, 1, rational(1)));     // q = 0
}

TEST_CASE("transition matrix is stochastic, reversible and stationary") {
    for (int z : {1, 2, 3}) {
        UrnChainSpec spec(3, kP3, z, rational(4, 5));
        auto states = enumerate_configurations(3, 3);
        RationalMatrix P = transition_matrix(spec);
        auto m = stationary(states, kP3);
        const std::size_t S = states.size();
        for (std::size_t i = 0; i < S; ++i) {
            Rational row = 0;
            for (std::size_t j = 0; j < S; ++j) {
                row += P[i][j];
                CHECK(m[i] * P[i][j] == m[j] * P[j][i]);  // detailed balance
            }
            CHECK(row == 1);
        }
        for (std::size_t j = 0; j < S; ++j) {
            Rational col = 0;
            for (std::size_t i = 0; i < S; ++i) col += m[i] * P[i][j];
            CHECK(col == m[j]);  // stationarity
        }
    }
}

TEST_CASE("stationarity and reversibility persist across N and z") {
    for (int N : {2, 4, 5}) {
        for (int z : {1, 2, N}) {
            UrnChainSpec spec(N, kP3, z, rational(4, 5));
            auto states = enumerate_configurations(N, 3);
            RationalMatrix P = transition_matrix(spec);
            auto m = stationary(states, kP3);
            for (std::size_t i = 0; i < states.size(); ++i) {
                Rational row = 0;
                for (std::size_t j = 0; j < states.size(); ++j) row += P[i][j];
                CHECK(row == 1);
            }
            for (std::size_t j = 0; j < states.size(); ++j) {
                Rational col = 0;
                for (std::size_t i = 0; i < states.size(); ++i) col += m[i] * P[i][j];
                CHECK(col == m[j]);
            }
        }
    }
}

TEST_CASE("full redraw with no holding refreshes the urn in one step") {
    // z = N, p_dup = 1: every ball is redrawn from p, so P(x,.) = m(.)
    UrnChainSpec spec(3, kP3, 3, rational(1));
    auto states = enumerate_configurations(3, 3);
    RationalMatrix P = transition_matrix(spec);
    auto m = stationary(states, kP3);
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) CHECK(P[i][j] == m[j]);
    }
    CHECK(chi2_distance_spectral(states[0], 1, spec) == 0.0);
}

TEST_CASE("kernel polynomials are eigenfunctions with the stated eigenvalues") {
    const int N = 4;
    UrnChainSpec spec(N, kP3, 2, rational(4, 5));
    auto states = enumerate_configurations(N, 3);
    RationalMatrix P = transition_matrix(spec);
    KernelParams params(N, kP3);
    const std::vector<Rational> rho = chain_eigenvalues(spec);
    for (std::size_t xi = 0; xi < states.size(); ++xi) {
        for (const Configuration& w : states) {
            std::vector<Rational> rhs(static_cast<std::size_t>(N + 1), Rational(0));
            for (std::size_t yi = 0; yi < states.size(); ++yi) {
                auto q = kernel_eval_all(states[yi], w, params);
                for (int n = 0; n <= N; ++n) {
                    rhs[static_cast<std::size_t>(n)] += P[xi][yi] * q[static_cast<std::size_t>(n)];
                }
            }
            auto qx = kernel_eval_all(states[xi], w, params);
            for (int n = 0; n <= N; ++n) {
                CHECK(rhs[static_cast<std::size_t>(n)] ==
                      rho[static_cast<std::size_t>(n)] * qx[static_cast<std::size_t>(n)]);
            }
        }
    }
}

TEST_CASE("z = 1 eigenvalues reduce to the linear formula") {
    UrnChainSpec spec(5, kP3, 1, rational(4, 5));
    const std::vector<Rational> rho = chain_eigenvalues(spec);
    for (int n = 0; n <= 5; ++n) {
        CHECK(rho[static_cast<std::size_t>(n)] ==
              1 - Rational(n) / (Rational(5) * rational(4, 5)));
        // also the product-chain form (j + (N-j)(1-1/p))/N at j = N-n
        CHECK(rho[static_cast<std::size_t>(n)] ==
              (Rational(5 - n) + Rational(n) * (1 - 1 / rational(4, 5))) / Rational(5));
    }
}

TEST_CASE("one-step simulation preserves the ball count and matches the matrix") {
    const int N = 3;
    UrnChainSpec spec(N, kP3, 2, rational(4, 5));
    auto states = enumerate_configurations(N, 3);
    RationalMatrix P = transition_matrix(spec);
    Configuration start = pure_configuration(N, 3, 0);
    const std::size_t start_idx =
        static_cast<std::size_t>(std::find(states.begin(), states.end(), start) - states.begin());
    Rng rng(90210);
    std::map<Configuration, long> freq;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) {
        Configuration next = step_simulate(start, spec, rng);
        CHECK(next.total() == N);
        ++freq[next];
    }
    double tv = 0.0;
    for (std::size_t j = 0; j < states.size(); ++j) {
        double empirical = 0.0;
        if (auto it = freq.find(states[j]); it != freq.end()) {
            empirical = static_cast<double>(it->second) / reps;
        }
        tv += std::abs(empirical - to_double(P[start_idx][j]));
    }
    CHECK(tv / 2.0 < 0.01);
}

TEST_CASE("full redraw simulation samples the stationary law") {
    const int N = 3;
    UrnChainSpec spec(N, kP3, 3, rational(1));
    auto states = enumerate_configurations(N, 3);
    Configuration state = pure_configuration(N, 3, 2);
    Rng rng(7);
    std::map<Configuration, long> freq;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) ++freq[step_simulate(state, spec, rng)];
    double tv = 0.0;
    for (const Configuration& y : states) {
        double empirical = 0.0;
        if (auto it = freq.find(y); it != freq.end()) {
            empirical = static_cast<double>(it->second) / reps;
        }
        tv += std::abs(empirical - to_double(multinomial_pmf(y, kP3)));
    }
    CHECK(tv / 2.0 < 0.01);
}

TEST_CASE("spectral chi-squared at l = 0 is the delta-sum mass") {
    for (int z : {1, 2}) {
        UrnChainSpec spec(4, kP3, z, rational(4, 5));
        for (const Configuration& x : enumerate_configurations(4, 3)) {
            double expect = to_double(1 / multinomial_pmf(x, kP3) - 1);
            CHECK(chi2_distance_spectral(x, 0, spec) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral chi-squared equals the matrix-power chi-squared") {
    for (int N : {3, 5}) {
        for (int z : {1, 2}) {
            UrnChainSpec spec(N, kP3, z, rational(4, 5));
            Configuration x0 = pure_configuration(N, 3, 1);
            for (long l : {0L, 1L, 5L, 17L, 40L}) {
                double spectral = chi2_distance_spectral(x0, l, spec);
                double exact = chi2_distance_exact(x0, l, spec);
                CHECK(std::abs(spectral - exact) <= 1e-9 * std::max(1.0, exact));
            }
        }
    }
}

TEST_CASE("pure-colour start has the closed-form spectral sum") {
    const int N = 6;
    UrnChainSpec spec(N, kP3, 1, rational(1));
    Configuration x0 = pure_configuration(N, 3, 0);
    for (long l : {0L, 3L, 10L}) {
        double closed = 0.0;
        for (int n = 1; n <= N; ++n) {
            closed += std::pow(1.0 - n / (N * 1.0), 2.0 * l) *
                      to_double(Rational(binomial(N, n)) * rational_pow(1 / kP3[0] - 1, n));
        }
        CHECK(chi2_distance_spectral(x0, l, spec) == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("tv distance: start and stationarity") {
    UrnChainSpec spec(3, kP3, 1, rational(4, 5));
    Configuration x0 = pure_configuration(3, 3, 0);
    CHECK(tv_distance_exact(x0, 0, spec) ==
          doctest::Approx(1.0 - to_double(multinomial_pmf(x0, kP3))).epsilon(1e-12));
    // Cauchy-Schwarz: TV <= sqrt(chi2)/2, both sides exact, at every l
    for (int N : {3, 5}) {
        UrnChainSpec s2(N, kP3, 1, rational(4, 5));
        Configuration start = pure_configuration(N, 3, 2);
        for (long l = 0; l <= 12; ++l) {
            CHECK(tv_distance_exact(start, l, s2) <=
                  0.5 * std::sqrt(chi2_distance_exact(start, l, s2)) + 1e-15);
        }
    }
}

TEST_CASE("cutoff bounds bracket the exact chi-squared for z = 1") {
    // small-N version of the pure-start cutoff window
    SimplexWeights p{{rational(1, 2), rational(1, 4), rational(1, 4)}};
    UrnChainSpec spec(20, p, 1, rational(1));
    for (double c : {-3.0, 0.0, 3.0}) {
        CutoffBounds b = cutoff_bounds(0, c, spec);
        double chi2 = chi2_distance_spectral(pure_configuration(20, 3, 0), b.l, spec);
        CHECK(b.lower <= chi2 + 1e-12);
        CHECK(chi2 <= b.upper * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(cutoff_bounds(0, 0.0, UrnChainSpec(20, p, 2, rational(1))),
                    std::invalid_argument);
}

TEST_CASE("general-z bounds reduce to the z = 1 window at the rarest colour") {
    SimplexWeights p{{rational(1, 4), rational(1, 4), rational(1, 2)}};
    UrnChainSpec spec(30, p, 1, rational(9, 10));
    Configuration x0 = pure_configuration(30, 3, 0);  // p_0 = min p
    for (double c : {-1.0, 2.0}) {
        CutoffBounds z1 = cutoff_bounds(0, c, spec);
        CutoffBounds gen = cutoff_bounds_general_z(x0, c, spec);
        CHECK(std::abs(gen.l - z1.l) <= 1);  // same step count up to rounding
        CHECK(gen.upper == z1.upper);
        CHECK(gen.lower == doctest::Approx(z1.lower).epsilon(1e-9));
    }
}

TEST_CASE("general-z bounds bracket the exact chi-squared") {
    UrnChainSpec spec(40, kP3, 10, rational(4, 5));
    Configuration x0 = pure_configuration(40, 3, 1);
    for (double c : {-3.0, 3.0}) {
        CutoffBounds b = cutoff_bounds_general_z(x0, c, spec);
        double chi2 = chi2_distance_spectral(x0, b.l, spec);
        CHECK(b.lower <= chi2 + 1e-12);
        CHECK(chi2 <= b.upper * (1.0 + 1e-12));
    }
    // preconditions
    UrnChainSpec bad_rate(4, SimplexWeights{{rational(1, 2), rational(1, 2)}}, 2,
                          rational(1, 2));
    CHECK_THROWS_AS(cutoff_bounds_general_z(Configuration{4, 0}, 0.0, bad_rate),
                    std::invalid_argument);
    UrnChainSpec ok(4, SimplexWeights{{rational(1, 2), rational(1, 2)}}, 1, rational(1));
    CHECK_THROWS_AS(cutoff_bounds_general_z(Configuration{2, 2}, 0.0, ok),
                    std::invalid_argument);
}

TEST_CASE("strong stationary time: full redraw hits everyone at once") {
    UrnChainSpec spec(4, kP3, 4, rational(1));
    SstResult r = strong_stationary_time_sim(spec, 2000, 5);
    CHECK(r.counts.size() == 2);  // only T = 1 occupied
    CHECK(r.counts[1] == 2000);
    CHECK(r.mean() == 1.0);
}

TEST_CASE("strong stationary time follows the collection bound") {
    const int N = 5;
    UrnChainSpec spec(N, kP3, 1, rational(1));
    SstResult r = strong_stationary_time_sim(spec, 100000, 99);
    const double c = 2.0;
    const long l = static_cast<long>(std::ceil(N * (std::log(N) + c)));
    CHECK(r.prob_greater(l) <= std::exp(-c));
    CHECK_THROWS_AS(strong_stationary_time_sim(UrnChainSpec(3, kP3, 1, rational(4, 5)), 10, 1),
                    std::invalid_argument);
}

TEST_CASE("strong stationary time mean matches the collection expectation") {
    const int N = 10;
    SimplexWeights p{{rational(1, 2), rational(1, 4), rational(1, 4)}};
    UrnChainSpec spec(N, p, 1, rational(1));
    const std::uint64_t reps = 100000;
    SstResult r = strong_stationary_time_sim(spec, reps, 123);
    double harmonic = 0.0;
    for (int k = 1; k <= N; ++k) harmonic += 1.0 / k;
    const double expect = N * harmonic;
    double second = 0.0;
    for (std::size_t t = 0; t < r.counts.size(); ++t) {
        second += static_cast<double>(t) * static_cast<double>(t) *
                  static_cast<double>(r.counts[t]) / static_cast<double>(reps);
    }
    const double se = std::sqrt((second - r.mean() * r.mean()) / static_cast<double>(reps));
    CHECK(std::abs(r.mean() - expect) <= 3.0 * se);
}

TEST_CASE("lumped chain rates and x^2 expansion coefficients") {
    LumpedChain chain(20, rational(1, 2), rational(1));
    CHECK(chain.alpha + chain.beta == 1 / chain.p_dup);
    auto [a, b, c] = lumped_x2_coefficients(chain);
    CHECK(a + b + c == 0);
    CHECK(a == rational(1, 4) * Rational(20L * 19));
    // the expansion really reproduces x^2 against exact polynomial values
    BinomialParams bp(20, rational(1, 2));
    for (int x = 0; x <= 20; ++x) {
        Rational reproduced = a * krawtchouk_eval(2, x, bp) + b * krawtchouk_eval(1, x, bp) + c;
        CHECK(reproduced == Rational(x) * Rational(x));
    }
}

TEST_CASE("lumped moments match exact birth-death matrix powers") {
    const int N = 20;
    LumpedChain chain(N, rational(1, 2), rational(1));
    RationalMatrix K = lumped_transition_matrix(chain);
    std::vector<Rational> dist(static_cast<std::size_t>(N + 1), Rational(0));
    dist[static_cast<std::size_t>(N)] = 1;  // start with every ball the tracked colour
    for (long l = 0; l <= 50; ++l) {
        Rational mean = 0, second = 0;
        for (int j = 0; j <= N; ++j) {
            mean += Rational(j) * dist[static_cast<std::size_t>(j)];
            second += Rational(j) * Rational(j) * dist[static_cast<std::size_t>(j)];
        }
        LumpedMoments m = lumped_moments(chain, l);
        CHECK(std::abs(m.mean - to_double(mean)) <= 1e-9 * std::max(1.0, to_double(mean)));
        CHECK(std::abs(m.second_moment - to_double(second)) <=
              1e-9 * std::max(1.0, to_double(second)));
        CHECK(m.variance ==
              doctest::Approx(to_double(second - mean * mean)).epsilon(1e-7));
        // advance one exact step
        std::vector<Rational> next(static_cast<std::size_t>(N + 1), Rational(0));
        for (int i = 0; i <= N; ++i) {
            if (dist[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; j <= N; ++j) {
                next[static_cast<std::size_t>(j)] +=
                    dist[static_cast<std::size_t>(i)] * K[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
        dist = std::move(next);
    }
    CHECK(lumped_moments(chain, 0).mean == doctest::Approx(20.0));
    CHECK(lumped_moments(chain, 0).second_moment == doctest::Approx(400.0));
}

TEST_CASE("observing one colour of the full chain gives the lumped rates") {
    const int N = 4;
    const int tracked = 0;
    UrnChainSpec spec(N, kP3, 1, rational(4, 5));
    auto states = enumerate_configurations(N, 3);
    RationalMatrix P = transition_matrix(spec);
    LumpedChain lumped(N, kP3[tracked], rational(4, 5));
    RationalMatrix K = lumped_transition_matrix(lumped);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const int from = states[i][tracked];
        std::vector<Rational> collapsed(static_cast<std::size_t>(N + 1), Rational(0));
        for (std::size_t j = 0; j < states.size(); ++j) {
            collapsed[static_cast<std::size_t>(states[j][tracked])] += P[i][j];
        }
        for (int to = 0; to <= N; ++to) {
            CHECK(collapsed[static_cast<std::size_t>(to)] ==
                  K[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)]);
        }
    }
}

TEST_CASE("spectrum of the exact chain carries the kernel multiplicities") {
    UrnChainSpec spec(3, kP3, 1, rational(1));
    EigenReport report = eigenstructure_check(spec);
    CHECK(report.matches);
    CHECK(report.max_abs_deviation <= 1e-8);
    REQUIRE(report.computed.size() == 10);
    // eigenvalue 1 is simple, eigenvalues 1 - n/3 carry multiplicity n+1
    CHECK(report.expected.back() == doctest::Approx(1.0));
    auto multiplicity_near = [&](double target) {
        int count = 0;
        for (double v : report.expected) {
            if (std::abs(v - target) < 1e-9) ++count;
        }
        return count;
    };
    CHECK(multiplicity_near(1.0) == 1);
    CHECK(multiplicity_near(2.0 / 3.0) == 2);
    CHECK(multiplicity_near(1.0 / 3.0) == 3);
    CHECK(multiplicity_near(0.0) == 4);
}

TEST_CASE("mixing curve emits monotone data and csv") {
    UrnChainSpec spec(3, kP3, 1, rational(4, 5));
    Configuration x0 = pure_configuration(3, 3, 0);
    MixingCurve curve = mixing_curve(x0, 10, spec);
    REQUIRE(curve.steps.size() == 11);
    CHECK(curve.chi2[0] == doctest::Approx(to_double(1 / multinomial_pmf(x0, kP3) - 1)));
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
        REQUIRE(curve.tv[i].has_value());
        CHECK(curve.lower[i] <= curve.chi2[i] + 1e-12);
    }
    std::string csv = to_csv(curve);
    CHECK(csv.rfind("l,chi2,tv,lower,upper\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("state cap is enforced") {
    SimplexWeights p{{rational(1, 4), rational(1, 4), rational(1, 4), rational(1, 4)}};
    UrnChainSpec spec(40, p, 1, rational(1));  // C(43,3) = 12341 states
    CHECK_THROWS_AS(transition_matrix(spec), std::invalid_argument);
    CHECK_THROWS_AS(tv_distance_exact(pure_configuration(40, 4, 0), 1, spec),
                    std::invalid_argument);
}
