// Command-line front door: polynomial evaluation, identity verification,
// goodness-of-fit runs, duplication checks, matching simulation, and
// mixing-curve generation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "multikraw/chain.hpp"
#include "multikraw/duplication.hpp"
#include "multikraw/gof.hpp"
#include "multikraw/kernel.hpp"
#include "multikraw/krawtchouk.hpp"
#include "multikraw/mvk.hpp"
#include "multikraw/version.hpp"

using namespace multikraw;
using nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitData = 3;

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

SimplexWeights parse_weights(const std::string& text) {
    return SimplexWeights(parse_rational_list(text));
}

Configuration parse_configuration(const std::string& text) {
    std::vector<int> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        counts.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad count '" + item + "'");
    }
    return Configuration(counts);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MULTIKRAW_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 20240511;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw std::invalid_argument("cannot open output file '" + output_path + "'");
    out << text;
}

void print_value(const Rational& value) {
    std::cout << "exact: " << to_string(value) << "\n";
    std::cout << "float: " << to_double(value) << "\n";
}

// ---------------------------------------------------------------- verify --

struct VerifyContext {
    int failures = 0;

    void report(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) std::cout << "  [" << detail << "]";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

void verify_kernel_suite(VerifyContext& ctx, int N, const SimplexWeights& p) {
    KernelParams params(N, p);
    auto states = enumerate_configurations(N, p.dim());
    const Rational rho_min = poisson_kernel_rho_min(p);

    bool poisson_ok = true, forms_ok = true, delta_ok = true, recursion_ok = true;
    bool bound_ok = true, nonneg_ok = true, beyond_has_negative = false;
    const Rational beyond = rho_min - rational(1, 100);
    const Rational bound_ratio = 1 / p.min() - 1;
    for (const Configuration& x : states) {
        for (const Configuration& y : states) {
            for (const Rational& rho :
                 {rho_min, rational(0), rational(1, 4), rational(1, 2), rational(1)}) {
                if (poisson_kernel_lhs(rho, x, y, params) != poisson_kernel_rhs(rho, x, y, params)) {
                    poisson_ok = false;
                }
            }
            if (poisson_kernel_rhs(rho_min, x, y, params) < 0) nonneg_ok = false;
            if (poisson_kernel_rhs(beyond, x, y, params) < 0) beyond_has_negative = true;
            Rational delta_sum = 0;
            for (int n = 0; n <= N; ++n) {
                const Rational direct = kernel_eval(n, x, y, params);
                delta_sum += direct;
                if (n >= 1) {
                    if (direct != kernel_eval_centered(n, x, y, params)) forms_ok = false;
                    if (direct != kernel_eval_hypergeom(n, x, y, params)) forms_ok = false;
                    if (direct != kernel_recursion_rhs(n, x, y, params)) recursion_ok = false;
                }
                if (abs(direct) > Rational(binomial(N, n)) * rational_pow(bound_ratio, n)) {
                    bound_ok = false;
                }
            }
            const Rational expect = x == y ? 1 / multinomial_pmf(y, p) : Rational(0);
            if (delta_sum != expect) delta_ok = false;
        }
    }
    ctx.report("poisson-kernel-identity", poisson_ok);
    ctx.report("poisson-kernel-nonnegativity-boundary", nonneg_ok && beyond_has_negative);
    ctx.report("kernel-three-forms-agree", forms_ok);
    ctx.report("kernel-delta-sum", delta_ok);
    ctx.report("kernel-recursion-in-N", recursion_ok);
    ctx.report("kernel-tight-bound", bound_ok);
}

void verify_duplication_suite(VerifyContext& ctx, int N, const SimplexWeights& p, bool boundary) {
    const Rational minp = p.min();
    DuplicationParams inner(KernelParams(N, p), 1 - minp / 2);  // strictly admissible
    auto states = enumerate_configurations(N, p.dim());

    bool identity_ok = true, phi_paths_ok = true, pgf_ok = true;
    for (const Configuration& x : states) {
        for (const Configuration& y : states) {
            for (int n = 0; n <= N; ++n) {
                auto [lhs, rhs] = duplication_identity_check(n, x, y, inner);
                if (lhs != rhs) identity_ok = false;
            }
            if (mixing_measure(x, y, inner).masses != mixing_measure_explicit(x, y, inner).masses) {
                phi_paths_ok = false;
            }
            if (!(match_pgf_inclusion_exclusion(x, y, inner) == match_pgf_transform(x, y, inner))) {
                pgf_ok = false;
            }
        }
    }
    ctx.report("duplication-identity", identity_ok);
    ctx.report("mixing-measure-two-routes", phi_paths_ok);
    ctx.report("match-count-pgf-identity", pgf_ok);

    if (boundary) {
        auto grid_nonneg = [&](const Rational& p_dup) {
            DuplicationParams probe(KernelParams(N, p), p_dup);
            for (const Configuration& x : states) {
                for (const Configuration& y : states) {
                    for (int z = 0; z <= N; ++z) {
                        if (triple_sum_K(x, y, z, probe) < 0) return false;
                    }
                }
            }
            return true;
        };
        const Rational at_boundary = 1 - minp;
        const Rational beyond = at_boundary - rational(1, 50);
        ctx.report("duplication-boundary-nonnegative", grid_nonneg(at_boundary),
                   "p_dup = " + to_string(at_boundary));
        ctx.report("duplication-beyond-boundary-negative", !grid_nonneg(beyond),
                   "p_dup = " + to_string(beyond));
    }
}

void verify_gof_suite(VerifyContext& ctx, int N, const SimplexWeights& p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Configuration> obs;
    const int r = 60;
    for (int i = 0; i < r; ++i) {
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
        obs.push_back(Configuration(counts));
    }
    Sample sample(N, p.dim(), std::move(obs));
    const std::vector<double> stats = component_stats_all(sample, p);
    double total = 0.0;
    for (double s : stats) total += s * r;
    const double x2 = total_chi_squared(sample, p);
    ctx.report("gof-decomposition-identity", std::abs(total - x2) <= 1e-10 * std::max(1.0, x2));

    long df_sum = 0;
    for (int i = 1; i <= N; ++i) df_sum += degrees_of_freedom(i, p.dim());
    ctx.report("gof-df-bookkeeping", BigInt(df_sum) == configuration_count(N, p.dim()) - 1);

    bool subsample_ok = true;
    for (int i = 1; i <= N; ++i) {
        double alt = subsample_form_stat(i, sample, p);
        if (std::abs(alt - stats[static_cast<std::size_t>(i - 1)]) >
            1e-10 * std::max(1.0, std::abs(alt))) {
            subsample_ok = false;
        }
    }
    ctx.report("gof-subsample-form", subsample_ok);
}

void verify_chain_suite(VerifyContext& ctx, int N, const SimplexWeights& p) {
    UrnChainSpec spec(N, p, 1, 1 - p.min());
    auto states = enumerate_configurations(N, p.dim());
    RationalMatrix P = transition_matrix(spec);
    std::vector<Rational> m;
    for (const Configuration& x : states) m.push_back(multinomial_pmf(x, p));

    bool stochastic_ok = true, balance_ok = true, stationary_ok = true;
    for (std::size_t i = 0; i < states.size(); ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < states.size(); ++j) {
            row += P[i][j];
            if (m[i] * P[i][j] != m[j] * P[j][i]) balance_ok = false;
        }
        if (row != 1) stochastic_ok = false;
    }
    for (std::size_t j = 0; j < states.size(); ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < states.size(); ++i) col += m[i] * P[i][j];
        if (col != m[j]) stationary_ok = false;
    }
    ctx.report("chain-row-stochastic", stochastic_ok);
    ctx.report("chain-detailed-balance", balance_ok);
    ctx.report("chain-stationary-law", stationary_ok);

    bool spectral_ok = true;
    Configuration x0 = pure_configuration(N, p.dim(), 0);
    for (long l : {0L, 2L, 8L}) {
        double a = chi2_distance_spectral(x0, l, spec);
        double b = chi2_distance_exact(x0, l, spec);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, b)) spectral_ok = false;
    }
    ctx.report("chain-spectral-vs-matrix-chi2", spectral_ok);

    EigenReport eig = eigenstructure_check(spec);
    ctx.report("chain-eigenvalue-multiplicities", eig.matches,
               "max deviation " + std::to_string(eig.max_abs_deviation));
}

void verify_lancaster_suite(VerifyContext& ctx, int N, const SimplexWeights& p,
                            const std::string& rho_text, int z, const std::string& p_dup_text) {
    // coefficient sequence: geometric rho^n, or the extreme-point Q_n(z;N,p_dup)
    std::vector<Rational> rho_seq(static_cast<std::size_t>(N + 1), Rational(1));
    std::string label;
    if (!p_dup_text.empty()) {
        BinomialParams bp(N, parse_rational(p_dup_text));
        for (int n = 0; n <= N; ++n) {
            rho_seq[static_cast<std::size_t>(n)] = krawtchouk_eval(n, z, bp);
        }
        label = "rho_n = Q_n(" + std::to_string(z) + ") at p_dup = " + p_dup_text;
    } else {
        const Rational rho = parse_rational(rho_text);
        for (int n = 1; n <= N; ++n) {
            rho_seq[static_cast<std::size_t>(n)] = rho_seq[static_cast<std::size_t>(n - 1)] * rho;
        }
        label = "rho_n = (" + rho_text + ")^n";
    }
    KernelParams params(N, p);
    auto states = enumerate_configurations(N, p.dim());
    Rational min_entry = 1;
    for (const Configuration& x : states) {
        for (const Configuration& y : states) {
            const std::vector<Rational> q = kernel_eval_all(x, y, params);
            Rational series = 0;
            for (int n = 0; n <= N; ++n) {
                series += rho_seq[static_cast<std::size_t>(n)] * q[static_cast<std::size_t>(n)];
            }
            Rational entry = multinomial_pmf(x, p) * multinomial_pmf(y, p) * series;
            if (entry < min_entry) min_entry = entry;
        }
    }
    ctx.report("lancaster-nonnegativity", min_entry >= 0,
               label + ", min entry " + to_string(min_entry));
}

// ------------------------------------------------------------------ main --

int run(int argc, char** argv) {
    CLI::App app{"Orthogonal polynomial kernels on the multinomial distribution"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "evaluate a polynomial or kernel");
    eval->require_subcommand(1);
    struct {
        int N = 0, n = 0, x1 = 0, n_max = 30;
        std::string p, x, y, mu, lambda, rho, form = "plain";
    } ev;

    auto* ev_kraw = eval->add_subcommand("krawtchouk", "univariate polynomial Q_n(x;N,p)");
    ev_kraw->add_option("--N", ev.N)->required();
    ev_kraw->add_option("--p", ev.p, "success probability, e.g. 1/2")->required();
    ev_kraw->add_option("--n", ev.n)->required();
    ev_kraw->add_option("--x", ev.x1)->required();
    ev_kraw->callback([&] {
        print_value(krawtchouk_eval(ev.n, ev.x1, BinomialParams(ev.N, parse_rational(ev.p))));
    });

    auto* ev_charlier =
        eval->add_subcommand("charlier", "Poisson-Charlier polynomial C_n(x;lambda)");
    ev_charlier->add_option("--lambda", ev.lambda)->required();
    ev_charlier->add_option("--n", ev.n)->required();
    ev_charlier->add_option("--x", ev.x1)->required();
    ev_charlier->callback([&] {
        print_value(charlier_eval(ev.n, ev.x1, PoissonParams(parse_rational(ev.lambda))));
    });

    auto* ev_kernel = eval->add_subcommand("kernel", "kernel polynomial Q_n(x,y;N,p)");
    ev_kernel->add_option("--N", ev.N)->required();
    ev_kernel->add_option("--p", ev.p, "cell probabilities, e.g. 1/2,1/4,1/4")->required();
    ev_kernel->add_option("--n", ev.n)->required();
    ev_kernel->add_option("--x", ev.x)->required();
    ev_kernel->add_option("--y", ev.y)->required();
    ev_kernel->add_option("--form", ev.form, "plain|centered|hypergeom")
        ->check(CLI::IsMember({"plain", "centered", "hypergeom"}));
    ev_kernel->callback([&] {
        KernelParams params(ev.N, parse_weights(ev.p));
        Configuration x = parse_configuration(ev.x);
        Configuration y = parse_configuration(ev.y);
        Rational value = ev.form == "centered"    ? kernel_eval_centered(ev.n, x, y, params)
                         : ev.form == "hypergeom" ? kernel_eval_hypergeom(ev.n, x, y, params)
                                                  : kernel_eval(ev.n, x, y, params);
        print_value(value);
    });

    auto* ev_poisson =
        eval->add_subcommand("poisson-kernel", "product-Poisson kernel Q_n(x,y;mu)");
    ev_poisson->add_option("--mu", ev.mu, "Poisson means, e.g. 1,2")->required();
    ev_poisson->add_option("--n", ev.n)->required();
    ev_poisson->add_option("--x", ev.x)->required();
    ev_poisson->add_option("--y", ev.y)->required();
    ev_poisson->callback([&] {
        PoissonVectorParams params(parse_rational_list(ev.mu));
        print_value(poisson_limit_kernel(ev.n, parse_configuration(ev.x).counts(),
                                         parse_configuration(ev.y).counts(), params));
    });

    auto* ev_series = eval->add_subcommand(
        "poisson-series", "truncated Poisson kernel series with residual estimate");
    ev_series->add_option("--mu", ev.mu)->required();
    ev_series->add_option("--rho", ev.rho)->required();
    ev_series->add_option("--x", ev.x)->required();
    ev_series->add_option("--y", ev.y)->required();
    ev_series->add_option("--n-max", ev.n_max);
    ev_series->callback([&] {
        PoissonVectorParams params(parse_rational_list(ev.mu));
        const double rho = to_double(parse_rational(ev.rho));
        const auto xs = parse_configuration(ev.x).counts();
        const auto ys = parse_configuration(ev.y).counts();
        PoissonSeries s = poisson_limit_kernel_series(rho, xs, ys, params, ev.n_max);
        std::cout << "series: " << s.value << "\n";
        std::cout << "residual-estimate: " << s.truncation_residual << "\n";
        std::cout << "closed-form: " << poisson_limit_kernel_closed(rho, xs, ys, params) << "\n";
    });

    // ---- gof ----
    auto* gof = app.add_subcommand("gof", "goodness-of-fit component decomposition");
    struct {
        std::string data, p, output, rho;
        bool estimate_p = false;
    } go;
    gof->add_option("--data", go.data, "counts file (#N=..,d=.. header)")->required();
    gof->add_option("--p", go.p, "null cell probabilities (omit with --estimate-p)");
    gof->add_flag("--estimate-p", go.estimate_p, "estimate p from the sample");
    gof->add_option("--rho", go.rho, "also report the geometric kernel combination");
    gof->add_option("--output", go.output, "write the JSON report to a file");
    gof->callback([&] {
        Sample sample = read_counts_file(go.data);
        if (!go.estimate_p && go.p.empty()) {
            throw std::invalid_argument("gof: provide --p or use --estimate-p");
        }
        GofReport report =
            go.estimate_p ? estimated_p_report(sample) : fixed_p_report(sample, parse_weights(go.p));
        std::string json = to_json(report);
        if (!go.rho.empty()) {
            SimplexWeights p = go.estimate_p ? SimplexWeights(sample.estimated_p())
                                             : parse_weights(go.p);
            ordered_json j = ordered_json::parse(json);
            j["poisson_weighted"] =
                poisson_weighted_stat(sample, p, to_double(parse_rational(go.rho)));
            json = j.dump(2);
        }
        emit(json + "\n", go.output);
    });

    // ---- chain ----
    auto* chain = app.add_subcommand("chain", "mixing curve of an urn chain");
    struct {
        int N = 0, z = 1;
        long lmax = 20;
        std::string p, p_dup = "1", x0, output;
        std::uint64_t simulate = 0;
        std::uint64_t seed = 0;
    } ch;
    chain->add_option("--N", ch.N)->required();
    chain->add_option("--p", ch.p)->required();
    chain->add_option("--z", ch.z, "balls redrawn per step (default 1)");
    chain->add_option("--p-dup", ch.p_dup, "hold parameter, q = 1 - p_dup (default 1)");
    chain->add_option("--x0", ch.x0, "start configuration (default N e_1)");
    chain->add_option("--lmax", ch.lmax, "largest step count (default 20)");
    chain->add_option("--simulate", ch.simulate,
                      "fill the tv column from this many simulated trajectories");
    chain->add_option("--seed", ch.seed);
    chain->add_option("--output", ch.output);
    chain->callback([&] {
        UrnChainSpec spec(ch.N, parse_weights(ch.p), ch.z, parse_rational(ch.p_dup));
        Configuration x0 = ch.x0.empty() ? pure_configuration(ch.N, spec.p.dim(), 0)
                                         : parse_configuration(ch.x0);
        MixingCurve curve = mixing_curve(x0, ch.lmax, spec);
        if (ch.simulate > 0) {
            const std::uint64_t seed = chain->count("--seed") ? ch.seed : default_seed();
            // empirical occupation at each step, from simulated trajectories
            std::vector<std::map<Configuration, long>> occupation(
                static_cast<std::size_t>(ch.lmax + 1));
            Rng rng(seed);
            for (std::uint64_t rep = 0; rep < ch.simulate; ++rep) {
                Configuration state = x0;
                ++occupation[0][state];
                for (long l = 1; l <= ch.lmax; ++l) {
                    state = step_simulate(state, spec, rng);
                    ++occupation[static_cast<std::size_t>(l)][state];
                }
            }
            for (long l = 0; l <= ch.lmax; ++l) {
                double observed_mass = 0.0, tv = 0.0;
                for (const auto& [state, count] : occupation[static_cast<std::size_t>(l)]) {
                    const double mx = to_double(multinomial_pmf(state, spec.p));
                    tv += std::abs(static_cast<double>(count) / ch.simulate - mx);
                    observed_mass += mx;
                }
                tv += 1.0 - observed_mass;  // unvisited states
                curve.tv[static_cast<std::size_t>(l)] = tv / 2.0;
            }
        }
        emit(to_csv(curve), ch.output);
    });

    // ---- dup ----
    auto* dup = app.add_subcommand("dup", "duplication structure checks");
    struct {
        int N = 0;
        std::string p, p_dup, x, y;
        bool boundary = false;
    } du;
    dup->add_option("--N", du.N)->required();
    dup->add_option("--p", du.p)->required();
    dup->add_option("--p-dup", du.p_dup)->required();
    dup->add_flag("--boundary", du.boundary, "scan the admissibility boundary");
    dup->add_option("--x", du.x);
    dup->add_option("--y", du.y);
    dup->callback([&] {
        SimplexWeights p = parse_weights(du.p);
        DuplicationParams params(KernelParams(du.N, p), parse_rational(du.p_dup));
        ordered_json out;
        out["version"] = kVersion;
        out["N"] = du.N;
        out["p_dup"] = to_string(params.p_dup);
        out["q"] = to_string(params.q_dup);
        out["min_p"] = to_string(p.min());
        out["admissible"] = params.admissible();

        auto states = enumerate_configurations(du.N, p.dim());
        Rational min_K = 1;
        for (const Configuration& x : states) {
            for (const Configuration& y : states) {
                for (int z = 0; z <= du.N; ++z) {
                    Rational k = triple_sum_K(x, y, z, params);
                    if (k < min_K) min_K = k;
                }
            }
        }
        out["min_K"] = to_string(min_K);
        out["K_nonnegative"] = min_K >= 0;

        if (params.admissible()) {
            bool identity_ok = true;
            for (const Configuration& x : states) {
                for (const Configuration& y : states) {
                    for (int n = 0; n <= du.N; ++n) {
                        auto [lhs, rhs] = duplication_identity_check(n, x, y, params);
                        if (lhs != rhs) identity_ok = false;
                    }
                }
            }
            out["duplication_identity_exact"] = identity_ok;
        }

        if (du.boundary) {
            const Rational at = 1 - p.min();
            const Rational beyond = at - rational(1, 50);
            auto min_over_grid = [&](const Rational& p_dup_probe) -> Rational {
                DuplicationParams probe(KernelParams(du.N, p), p_dup_probe);
                Rational lowest = 1;
                for (const Configuration& x : states) {
                    for (const Configuration& y : states) {
                        for (int z = 0; z <= du.N; ++z) {
                            Rational k = triple_sum_K(x, y, z, probe);
                            if (k < lowest) lowest = k;
                        }
                    }
                }
                return lowest;
            };
            Rational m_at = min_over_grid(at);
            Rational m_beyond = min_over_grid(beyond);
            out["boundary"] = {{"p_dup", to_string(at)},
                               {"min_K", to_string(m_at)},
                               {"nonnegative", m_at >= 0},
                               {"p_dup_beyond", to_string(beyond)},
                               {"min_K_beyond", to_string(m_beyond)},
                               {"nonnegative_beyond", m_beyond >= 0}};
        }

        if (!du.x.empty() && !du.y.empty()) {
            Configuration x = parse_configuration(du.x);
            Configuration y = parse_configuration(du.y);
            MixingMeasure phi = mixing_measure(x, y, params);
            ordered_json masses = ordered_json::array();
            for (const Rational& m : phi.masses) masses.push_back(to_string(m));
            out["mixing_measure"] = {{"masses", masses}, {"mean", to_string(phi.mean())}};
        }
        std::cout << out.dump(2) << "\n";
    });

    // ---- match ----
    auto* match = app.add_subcommand("match", "matching simulation against the exact measure");
    struct {
        int N = 0;
        std::string p, p_dup, x, y;
        std::uint64_t replicates = 100000;
        std::uint64_t seed = 0;
    } ma;
    match->add_option("--N", ma.N)->required();
    match->add_option("--p", ma.p)->required();
    match->add_option("--p-dup", ma.p_dup)->required();
    match->add_option("--x", ma.x)->required();
    match->add_option("--y", ma.y)->required();
    match->add_option("--replicates", ma.replicates);
    match->add_option("--seed", ma.seed);
    match->callback([&] {
        SimplexWeights p = parse_weights(ma.p);
        DuplicationParams params(KernelParams(ma.N, p), parse_rational(ma.p_dup));
        Configuration x = parse_configuration(ma.x);
        Configuration y = parse_configuration(ma.y);
        const std::uint64_t seed = match->count("--seed") ? ma.seed : default_seed();
        MatchingResult sim = matching_simulate(x, y, params, ma.replicates, seed);
        MixingMeasure phi = mixing_measure(x, y, params);
        ordered_json out;
        out["version"] = kVersion;
        out["rng"] = Rng::name();
        out["seed"] = sim.seed;
        out["replicates"] = sim.replicates;
        out["empirical"] = sim.frequencies();
        ordered_json exact = ordered_json::array();
        for (const Rational& m : phi.masses) exact.push_back(to_string(m));
        out["exact"] = exact;
        out["tv_distance"] = sim.tv_distance(phi);
        std::cout << out.dump(2) << "\n";
    });

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run the exact identity suites");
    struct {
        std::string suite = "all";
        int N = 0, d = 3, z = 1;
        std::string p, rho = "1/2", p_dup;
        bool boundary = false;
        std::uint64_t seed = 0;
    } ve;
    verify->add_option("--suite", ve.suite)
        ->check(CLI::IsMember({"all", "kernel", "duplication", "gof", "chain", "lancaster"}));
    verify->add_option("--N", ve.N, "size (default 3)");
    verify->add_option("--d", ve.d);
    verify->add_option("--p", ve.p, "cell probabilities (defaults depend on d)");
    verify->add_flag("--boundary", ve.boundary, "include the duplication boundary scans");
    verify->add_option("--rho", ve.rho, "lancaster: geometric coefficient sequence rho^n");
    verify->add_option("--z", ve.z, "lancaster: extreme-point redraw count");
    verify->add_option("--p-dup", ve.p_dup, "lancaster: extreme-point hold parameter");
    verify->add_option("--seed", ve.seed);
    verify->callback([&] {
        SimplexWeights p =
            !ve.p.empty() ? parse_weights(ve.p)
            : ve.d == 2   ? parse_weights("1/2,1/2")
            : ve.d == 3   ? parse_weights("1/2,1/4,1/4")
                          : parse_weights("1/2,1/6,1/6,1/6");
        const int N = ve.N > 0 ? ve.N : 3;
        VerifyContext ctx;
        const std::uint64_t seed = verify->count("--seed") ? ve.seed : default_seed();
        if (ve.suite == "all" || ve.suite == "kernel") verify_kernel_suite(ctx, N, p);
        if (ve.suite == "all" || ve.suite == "duplication") {
            verify_duplication_suite(ctx, N, p, ve.boundary || ve.suite == "duplication");
        }
        if (ve.suite == "all" || ve.suite == "gof") verify_gof_suite(ctx, N, p, seed);
        if (ve.suite == "all" || ve.suite == "chain") verify_chain_suite(ctx, N, p);
        if (ve.suite == "lancaster") verify_lancaster_suite(ctx, N, p, ve.rho, ve.z, ve.p_dup);
        std::cout << (ctx.failures == 0 ? "all identities hold"
                                        : "FAILURES: " + std::to_string(ctx.failures))
                  << " (version " << kVersion << ", seed " << seed << ")\n";
        if (ctx.failures > 0) throw CLI::RuntimeError(1);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DataError& e) {
        std::cerr << "data error at line " << e.line << ": " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
