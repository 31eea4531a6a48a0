#include "multikraw/gof.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "multikraw/kernel.hpp"

namespace multikraw {

Sample::Sample(int N, int d, std::vector<Configuration> observations)
    : N_(N), d_(d), obs_(std::move(observations)) {
    if (N_ < 1 || d_ < 2) throw std::invalid_argument("Sample: need N >= 1 and d >= 2");
    for (const Configuration& x : obs_) {
        if (x.dim() != d_ || x.total() != N_) {
            throw std::invalid_argument("Sample: observation does not match (N,d)");
        }
    }
}

std::vector<long> Sample::pooled_counts() const {
    std::vector<long> c(static_cast<std::size_t>(d_), 0);
    for (const Configuration& x : obs_) {
        for (int j = 0; j < d_; ++j) c[static_cast<std::size_t>(j)] += x[j];
    }
    return c;
}

std::vector<Rational> Sample::estimated_p() const {
    if (r() == 0) throw std::invalid_argument("Sample: empty sample");
    const std::vector<long> c = pooled_counts();
    std::vector<Rational> p;
    p.reserve(c.size());
    for (long cj : c) p.push_back(rational(cj, static_cast<long>(r()) * N_));
    return p;
}

Sample read_counts_file(std::istream& in) {
    std::string line;
    int line_no = 0;
    int N = -1, d = -1;
    std::vector<Configuration> obs;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(), "#N=%d,d=%d", &N, &d) != 2) {
                throw DataError("malformed header, expected #N=<int>,d=<int>", line_no);
            }
            continue;
        }
        if (N < 0) throw DataError("data before #N=<int>,d=<int> header", line_no);
        std::vector<int> counts;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                int v = std::stoi(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                counts.push_back(v);
            } catch (const std::exception&) {
                throw DataError("cannot parse count '" + cell + "'", line_no);
            }
        }
        if (static_cast<int>(counts.size()) != d) {
            throw DataError("expected " + std::to_string(d) + " cells", line_no);
        }
        Configuration x(counts);
        if (x.total() != N) {
            throw DataError("counts sum to " + std::to_string(x.total()) + ", expected N=" +
                                std::to_string(N),
                            line_no);
        }
        obs.push_back(std::move(x));
    }
    if (N < 0) throw DataError("missing #N=<int>,d=<int> header", line_no);
    return Sample(N, d, std::move(obs));
}

Sample read_counts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'", 0);
    return read_counts_file(in);
}

namespace {

// Empirical support with multiplicities, in the (deterministic) order of the
// default Configuration comparison.
std::map<Configuration, long> support_of(const Sample& sample) {
    std::map<Configuration, long> support;
    for (const Configuration& x : sample.observations()) ++support[x];
    return support;
}

}  // namespace

std::vector<double> component_stats_all(const Sample& sample, const SimplexWeights& p) {
    if (sample.r() == 0) throw std::invalid_argument("component_stats_all: empty sample");
    if (p.dim() != sample.d()) throw std::invalid_argument("component_stats_all: dimension mismatch");
    const int N = sample.N();
    const KernelParams params(N, p);
    const auto support = support_of(sample);
    std::vector<const Configuration*> xs;
    std::vector<double> ws;
    for (const auto& [x, count] : support) {
        xs.push_back(&x);
        ws.push_back(static_cast<double>(count) / sample.r());
    }
    std::vector<double> stats(static_cast<std::size_t>(N + 1), 0.0);
    for (std::size_t a = 0; a < xs.size(); ++a) {
        for (std::size_t b = a; b < xs.size(); ++b) {
            const std::vector<Rational> q = kernel_eval_all(*xs[a], *xs[b], params);
            const double w = ws[a] * ws[b] * (a == b ? 1.0 : 2.0);  // kernel symmetry
            for (int i = 1; i <= N; ++i) {
                stats[static_cast<std::size_t>(i)] += to_double(q[static_cast<std::size_t>(i)]) * w;
            }
        }
    }
    return {stats.begin() + 1, stats.end()};
}

double component_stat(int i, const Sample& sample, const SimplexWeights& p) {
    if (i < 1 || i > sample.N()) throw std::invalid_argument("component_stat: degree out of range");
    return component_stats_all(sample, p)[static_cast<std::size_t>(i - 1)];
}

double total_chi_squared(const Sample& sample, const SimplexWeights& p) {
    if (sample.r() == 0) throw std::invalid_argument("total_chi_squared: empty sample");
    if (p.dim() != sample.d()) throw std::invalid_argument("total_chi_squared: dimension mismatch");
    // Full goodness-of-fit statistic over the configuration space:
    //   r * sum_x (phat(x) - m(x))^2 / m(x).
    // Unobserved configurations contribute r*m(x), folded in through the
    // total mass so the space is never enumerated.
    const double r = sample.r();
    double x2 = 0.0;
    double observed_mass = 0.0;
    for (const auto& [x, count] : support_of(sample)) {
        const double mx = to_double(multinomial_pmf(x, p));
        const double diff = static_cast<double>(count) / r - mx;
        x2 += diff * diff / mx;
        observed_mass += mx;
    }
    return r * (x2 + 1.0 - observed_mass);
}

long degrees_of_freedom(int i, int d) {
    if (i < 1 || d < 2) throw std::invalid_argument("degrees_of_freedom: need i >= 1, d >= 2");
    return binomial(i + d - 2, d - 2).get_si();
}

GofReport fixed_p_report(const Sample& sample, const SimplexWeights& p) {
    GofReport report;
    report.mode = "fixed";
    report.N = sample.N();
    report.d = sample.d();
    report.r = sample.r();
    const std::vector<double> stats = component_stats_all(sample, p);
    for (int i = 1; i <= report.N; ++i) {
        const double comp = sample.r() * stats[static_cast<std::size_t>(i - 1)];
        const long df = degrees_of_freedom(i, report.d);
        report.components.push_back(comp);
        report.dfs.push_back(df);
        report.p_values.push_back(chi_squared_survival(comp, static_cast<int>(df)));
    }
    report.total = total_chi_squared(sample, p);
    return report;
}

GofReport estimated_p_report(const Sample& sample) {
    if (sample.r() < 2) throw std::invalid_argument("estimated_p_report: need r >= 2");
    std::vector<Rational> phat = sample.estimated_p();
    for (int j = 0; j < sample.d(); ++j) {
        if (phat[static_cast<std::size_t>(j)] == 0) {
            throw std::invalid_argument(
                "estimated_p_report: cell " + std::to_string(j) +
                " is empty in the sample; the kernel needs p_j > 0");
        }
    }
    const SimplexWeights p(std::move(phat));
    GofReport report;
    report.mode = "estimated";
    report.N = sample.N();
    report.d = sample.d();
    report.r = sample.r();
    const std::vector<double> stats = component_stats_all(sample, p);
    report.total = 0.0;
    for (int i = 1; i <= report.N; ++i) {
        // degree 1 vanishes identically under the estimated p
        const double comp = i == 1 ? 0.0 : sample.r() * stats[static_cast<std::size_t>(i - 1)];
        const long df = i == 1 ? 0 : degrees_of_freedom(i, report.d);
        report.components.push_back(comp);
        report.dfs.push_back(df);
        report.p_values.push_back(i == 1 ? 1.0
                                         : chi_squared_survival(comp, static_cast<int>(df)));
        if (i >= 2 && i <= report.N - 1) report.total += comp;
    }
    return report;
}

Rational empirical_subsample_prob(const Configuration& z, const Sample& sample) {
    const auto support = support_of(sample);
    Rational total = 0;
    const Rational denom(binomial(sample.N(), z.total()));
    for (const auto& [x, count] : support) {
        BigInt num = 1;
        for (int j = 0; j < x.dim(); ++j) num *= binomial(x[j], z[j]);
        total += Rational(num * count) / denom;
    }
    return total / sample.r();
}

double subsample_form_stat(int i, const Sample& sample, const SimplexWeights& p) {
    if (i < 1 || i > sample.N()) throw std::invalid_argument("subsample_form_stat: degree out of range");
    const int N = sample.N();
    const int d = sample.d();
    double total = 0.0;
    for (int k = 1; k <= i; ++k) {
        BigInt outer = binomial(N, k) * binomial(N - k, i - k);
        if ((i - k) % 2 != 0) outer = -outer;
        double inner = 0.0;
        for (const Configuration& z : enumerate_configurations(k, d)) {
            Rational cz_pz(multinomial_coeff(k, z.counts()));
            for (int j = 0; j < d; ++j) cz_pz *= rational_pow(p[j], z[j]);
            const Rational hbar = empirical_subsample_prob(z, sample);
            const double dev = to_double(hbar / cz_pz - 1);
            inner += to_double(cz_pz) * dev * dev;
        }
        total += to_double(Rational(outer)) * inner;
    }
    return total;
}

double poisson_weighted_stat(const Sample& sample, const SimplexWeights& p, double rho) {
    if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("poisson_weighted_stat: need 0 < rho < 1");
    const std::vector<double> stats = component_stats_all(sample, p);
    double total = 0.0;
    double w = 1.0;
    for (int i = 1; i <= sample.N(); ++i) {
        w *= rho;
        total += w * sample.r() * stats[static_cast<std::size_t>(i - 1)];
    }
    return total;
}

namespace {

// Regularized incomplete gamma: P(a,x) by series, Q(a,x) by Lentz continued
// fraction; the split at x = a+1 keeps both rapidly convergent.
double gamma_series_p(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cf_q(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double dd = 1.0 / b;
    double h = dd;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        dd = an * dd + b;
        if (std::abs(dd) < tiny) dd = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        dd = 1.0 / dd;
        const double del = dd * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_squared_survival(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi_squared_survival: df must be positive");
    if (x < 0.0) throw std::invalid_argument("chi_squared_survival: x must be non-negative");
    if (x == 0.0) return 1.0;
    const double a = df / 2.0;
    const double t = x / 2.0;
    if (t < a + 1.0) return 1.0 - gamma_series_p(a, t);
    return gamma_cf_q(a, t);
}

std::string to_json(const GofReport& report) {
    nlohmann::ordered_json j;
    j["mode"] = report.mode;
    j["N"] = report.N;
    j["d"] = report.d;
    j["r"] = report.r;
    j["components"] = report.components;
    j["dfs"] = report.dfs;
    j["p_values"] = report.p_values;
    j["total"] = report.total;
    return j.dump(2);
}

}  // namespace multikraw
