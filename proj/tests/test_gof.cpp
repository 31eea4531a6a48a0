#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "multikraw/gof.hpp"
#include "multikraw/kernel.hpp"
#include "multikraw/mvk.hpp"
#include "multikraw/random.hpp"

using namespace multikraw;

namespace {

const SimplexWeights kP3{{rational(1, 2), rational(1, 4), rational(1, 4)}};

Configuration sample_multinomial(int N, const SimplexWeights& p, Rng& rng) {
    std::vector<int> counts(static_cast<std::size_t>(p.dim()), 0);
    for (int ball = 0; ball < N; ++ball) {
        double u = rng.unit();
        double acc = 0.0;
        int cell = p.dim() - 1;
        for (int j = 0; j < p.dim(); ++j) {
            acc += to_double(p[j]);
            if (u < acc) {
                cell = j;
                break;
            }
        }
        ++counts[static_cast<std::size_t>(cell)];
    }
    return Configuration(counts);
}

Sample random_sample(int N, const SimplexWeights& p, int r, Rng& rng) {
    std::vector<Configuration> obs;
    obs.reserve(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) obs.push_back(sample_multinomial(N, p, rng));
    return Sample(N, p.dim(), std::move(obs));
}

}  // namespace

TEST_CASE("first component is the cell-count chi-squared") {
    Rng rng(11);
    Sample sample = random_sample(4, kP3, 60, rng);
    const std::vector<long> c = sample.pooled_counts();
    double pooled = 0.0;
    for (int j = 0; j < 3; ++j) {
        double xbar = static_cast<double>(c[static_cast<std::size_t>(j)]) / sample.r();
        double expected = 4.0 * to_double(kP3[j]);
        pooled += (xbar - expected) * (xbar - expected) / expected;
    }
    CHECK(component_stat(1, sample, kP3) == doctest::Approx(pooled).epsilon(1e-10));
}

TEST_CASE("point mass sample reproduces the delta-sum identity") {
    Configuration x{2, 1, 0};
    Sample sample(3, 3, {x, x, x, x, x});
    const std::vector<double> stats = component_stats_all(sample, kP3);
    double total = 0.0;
    for (double s : stats) total += s;
    const double expect = to_double(1 / multinomial_pmf(x, kP3) - 1);
    CHECK(total == doctest::Approx(expect).epsilon(1e-12));
    // r = 1: the full statistic equals the same sum
    Sample single(3, 3, {x});
    CHECK(total_chi_squared(single, kP3) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("decomposition identity on random samples") {
    Rng rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const int N = 2 + rng.below(4);  // up to 5
        const int d = 2 + rng.below(3);  // up to 4
        const int r = 1 + rng.below(200);
        std::vector<Rational> w;
        for (int j = 0; j < d - 1; ++j) w.push_back(rational(1, 2L * d));
        Rational rest = 1;
        for (const Rational& v : w) rest -= v;
        w.push_back(rest);
        SimplexWeights p(w);
        Sample sample = random_sample(N, p, r, rng);
        const std::vector<double> stats = component_stats_all(sample, p);
        double total = 0.0;
        for (double s : stats) total += s * sample.r();
        const double x2 = total_chi_squared(sample, p);
        CHECK(std::abs(total - x2) <= 1e-10 * std::max(1.0, std::abs(x2)));
    }
}

TEST_CASE("sample with empirical law equal to the null has zero statistic") {
    // N = 1 configurations are the pure states with masses p_j
    std::vector<Configuration> obs;
    obs.insert(obs.end(), 2, Configuration{1, 0, 0});
    obs.push_back(Configuration{0, 1, 0});
    obs.push_back(Configuration{0, 0, 1});
    Sample sample(1, 3, std::move(obs));
    CHECK(total_chi_squared(sample, kP3) == doctest::Approx(0.0).epsilon(1e-14));
    for (double s : component_stats_all(sample, kP3)) {
        CHECK(std::abs(s) < 1e-14);
    }
}

TEST_CASE("degrees of freedom bookkeeping") {
    for (int i = 1; i <= 6; ++i) CHECK(degrees_of_freedom(i, 2) == 1);
    CHECK(degrees_of_freedom(2, 3) == 3);
    long total = 0;
    for (int i = 1; i <= 5; ++i) total += degrees_of_freedom(i, 4);
    CHECK(BigInt(total) == configuration_count(5, 4) - 1);
    for (int N = 1; N <= 20; ++N) {
        for (int d = 2; d <= 6; ++d) {
            long sum = 0;
            for (int i = 1; i <= N; ++i) sum += degrees_of_freedom(i, d);
            CHECK(BigInt(sum) == configuration_count(N, d) - 1);
        }
    }
}

TEST_CASE("components never go negative") {
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        Sample sample = random_sample(4, kP3, 30, rng);
        for (double s : component_stats_all(sample, kP3)) CHECK(s >= -1e-12);
    }
}

TEST_CASE("components are basis independent") {
    Rng rng(99);
    const int N = 4;
    Sample sample = random_sample(N, kP3, 40, rng);
    const std::vector<double> via_kernel = component_stats_all(sample, kP3);
    std::map<Configuration, int> seen;
    for (const Configuration& x : sample.observations()) ++seen[x];
    for (const OrthonormalBasis& basis :
         {OrthonormalBasis::gram_schmidt(kP3), OrthonormalBasis::gram_schmidt(kP3, {1, 0})}) {
        for (int i = 1; i <= N; ++i) {
            double sum_sq = 0.0;
            for (const MultiIndex& n : multi_indices_of_degree(i, 3)) {
                double norm = to_double(Rational(multinomial_coeff(N, n.degrees)));
                for (int l = 1; l <= 2; ++l) {
                    norm *= std::pow(to_double(basis.squared_norm(l)),
                                     n.degrees[static_cast<std::size_t>(l - 1)]);
                }
                double ptilde = 0.0;
                for (const auto& [x, count] : seen) {
                    ptilde += to_double(mvk_eval_raw(n, x, basis)) / std::sqrt(norm) *
                              (static_cast<double>(count) / sample.r());
                }
                sum_sq += ptilde * ptilde;
            }
            CHECK(std::abs(sum_sq - via_kernel[static_cast<std::size_t>(i - 1)]) < 1e-9);
        }
    }
}

TEST_CASE("estimated-p report zeroes the first component and adjusts df") {
    Rng rng(17);
    Sample sample = random_sample(3, kP3, 50, rng);
    GofReport report = estimated_p_report(sample);
    CHECK(report.mode == "estimated");
    CHECK(report.components[0] == 0.0);
    CHECK(report.dfs[0] == 0);
    CHECK(report.p_values[0] == 1.0);
    long df_total = 0;
    for (long df : report.dfs) df_total += df;
    CHECK(BigInt(df_total) == configuration_count(3, 3) - 1 - (3 - 1));
    // the statistic is the sum over degrees 2..N-1
    double expect = 0.0;
    for (int i = 2; i <= report.N - 1; ++i) {
        expect += report.components[static_cast<std::size_t>(i - 1)];
    }
    CHECK(report.total == doctest::Approx(expect).epsilon(1e-14));
    // and the degree-1 component really does vanish under the estimated p
    SimplexWeights phat(sample.estimated_p());
    CHECK(std::abs(component_stat(1, sample, phat)) < 1e-14);
}

TEST_CASE("estimated-p report rejects a sample with an empty cell") {
    std::vector<Configuration> obs{{3, 0, 0}, {2, 1, 0}, {3, 0, 0}};
    Sample sample(3, 3, std::move(obs));
    CHECK_THROWS_WITH_AS(estimated_p_report(sample), doctest::Contains("cell 2"),
                         std::invalid_argument);
}

TEST_CASE("estimated-p null simulation keeps the second component calibrated") {
    Rng rng(424242);
    const int reps = 500;
    const int r = 2000;
    double mean = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        Sample sample = random_sample(3, kP3, r, rng);
        GofReport report = estimated_p_report(sample);
        mean += report.components[1];
    }
    mean /= reps;
    const double df2 = static_cast<double>(degrees_of_freedom(2, 3));
    const double sigma = std::sqrt(2.0 * df2 / reps);
    CHECK(std::abs(mean - df2) <= 3.0 * sigma);
}

TEST_CASE("sub-sampling form equals the kernel form") {
    Rng rng(8);
    Sample sample = random_sample(3, kP3, 20, rng);
    const std::vector<double> stats = component_stats_all(sample, kP3);
    for (int i = 1; i <= 3; ++i) {
        double via_subsample = subsample_form_stat(i, sample, kP3);
        CHECK(std::abs(via_subsample - stats[static_cast<std::size_t>(i - 1)]) <=
              1e-10 * std::max(1.0, std::abs(via_subsample)));
    }
}

TEST_CASE("expected sub-sampling probabilities under the null") {
    // r = 1: E[Hbar(z|X)] = C(|z|;z) p^z, exactly
    const int N = 3;
    for (int k = 0; k <= N; ++k) {
        for (const Configuration& z : enumerate_configurations(k, 3)) {
            Rational expectation = 0;
            for (const Configuration& x : enumerate_configurations(N, 3)) {
                Sample single(N, 3, {x});
                expectation += multinomial_pmf(x, kP3) * empirical_subsample_prob(z, single);
            }
            Rational expect(multinomial_coeff(k, z.counts()));
            for (int j = 0; j < 3; ++j) expect *= rational_pow(kP3[j], z[j]);
            CHECK(expectation == expect);
        }
    }
    // |z| = N: Hbar reduces to the empirical frequency of z itself
    std::vector<Configuration> obs{{2, 1, 0}, {2, 1, 0}, {1, 1, 1}, {0, 3, 0}};
    Sample sample(3, 3, std::move(obs));
    CHECK(empirical_subsample_prob(Configuration{2, 1, 0}, sample) == rational(1, 2));
    CHECK(empirical_subsample_prob(Configuration{1, 1, 1}, sample) == rational(1, 4));
    CHECK(empirical_subsample_prob(Configuration{3, 0, 0}, sample) == 0);
}

TEST_CASE("poisson-weighted combination of components") {
    Rng rng(3);
    Sample sample = random_sample(3, kP3, 25, rng);
    const std::vector<double> stats = component_stats_all(sample, kP3);
    const double rho = 0.5;
    double expect = 0.0;
    for (int i = 1; i <= 3; ++i) {
        expect += std::pow(rho, i) * sample.r() * stats[static_cast<std::size_t>(i - 1)];
    }
    CHECK(poisson_weighted_stat(sample, kP3, rho) == doctest::Approx(expect).epsilon(1e-14));
    CHECK_THROWS_AS(poisson_weighted_stat(sample, kP3, 1.5), std::invalid_argument);
}

TEST_CASE("chi-squared survival function") {
    CHECK(chi_squared_survival(0.0, 3) == 1.0);
    CHECK(chi_squared_survival(2.0 * std::log(2.0), 2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(chi_squared_survival(100.0, 100) - 0.5) < 0.02);
    // even df have the closed form e^{-x/2} sum_{k<df/2} (x/2)^k / k!
    for (int df : {2, 4, 6, 8, 10}) {
        for (double x : {0.5, 1.0, 5.0, 20.0}) {
            double sum = 0.0, term = 1.0;
            for (int k = 0; k < df / 2; ++k) {
                if (k > 0) term *= x / 2.0 / k;
                sum += term;
            }
            double closed = std::exp(-x / 2.0) * sum;
            CHECK(chi_squared_survival(x, df) == doctest::Approx(closed).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(chi_squared_survival(-1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(chi_squared_survival(1.0, 0), std::invalid_argument);
}

TEST_CASE("counts file round trip and errors") {
    std::stringstream good("#N=3,d=3\n2,1,0\n1,1,1\n");
    Sample sample = read_counts_file(good);
    CHECK(sample.N() == 3);
    CHECK(sample.d() == 3);
    CHECK(sample.r() == 2);

    std::stringstream no_header("2,1,0\n");
    CHECK_THROWS_AS(read_counts_file(no_header), DataError);

    std::stringstream bad_token("#N=3,d=3\n2,x,0\n");
    try {
        read_counts_file(bad_token);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line == 2);
    }

    std::stringstream bad_sum("#N=3,d=3\n2,1,0\n2,2,0\n");
    try {
        read_counts_file(bad_sum);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line == 3);
    }

    std::stringstream bad_cells("#N=3,d=3\n2,1\n");
    CHECK_THROWS_AS(read_counts_file(bad_cells), DataError);
}

TEST_CASE("json report carries exactly the documented fields") {
    Rng rng(1);
    Sample sample = random_sample(3, kP3, 10, rng);
    GofReport report = fixed_p_report(sample, kP3);
    std::string json = to_json(report);
    for (const char* field : {"\"mode\"", "\"N\"", "\"d\"", "\"r\"", "\"components\"", "\"dfs\"",
                              "\"p_values\"", "\"total\""}) {
        CHECK(json.find(field) != std::string::npos);
    }
    CHECK(report.mode == "fixed");
    REQUIRE(report.components.size() == 3);
    REQUIRE(report.dfs.size() == 3);
    REQUIRE(report.p_values.size() == 3);
    for (double pv : report.p_values) {
        CHECK(pv >= 0.0);
        CHECK(pv <= 1.0);
    }
    double sum = 0.0;
    for (double c : report.components) sum += c;
    CHECK(std::abs(sum - report.total) <= 1e-10 * std::max(1.0, report.total));
}
