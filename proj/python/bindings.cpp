// Python bindings for the core operations. Exact rationals cross the
// boundary as fractions.Fraction in both directions, so identities can be
// checked exactly from Python.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "multikraw/chain.hpp"
#include "multikraw/duplication.hpp"
#include "multikraw/gof.hpp"
#include "multikraw/kernel.hpp"
#include "multikraw/krawtchouk.hpp"
#include "multikraw/mvk.hpp"
#include "multikraw/version.hpp"

namespace py = pybind11;
using namespace multikraw;

// Accept plain list-of-int configurations wherever the C++ surface takes one.
namespace pybind11 {
namespace detail {
template <>
struct type_caster<multikraw::Configuration> {
    PYBIND11_TYPE_CASTER(multikraw::Configuration, const_name("List[int]"));

    bool load(handle src, bool) {
        try {
            value = multikraw::Configuration(src.cast<std::vector<int>>());
            return true;
        } catch (...) {
            return false;
        }
    }

    static handle cast(const multikraw::Configuration& src, return_value_policy, handle) {
        return py::cast(src.counts()).release();
    }
};
}  // namespace detail
}  // namespace pybind11

namespace {

py::object fraction_type() {
    static py::object type = py::module_::import("fractions").attr("Fraction");
    return type;
}

py::object to_fraction(const Rational& r) {
    return fraction_type()(py::str(to_string(r)));
}

py::list to_fraction_list(const std::vector<Rational>& values) {
    py::list out;
    for (const Rational& v : values) out.append(to_fraction(v));
    return out;
}

Rational from_object(const py::object& obj) {
    if (py::isinstance<py::int_>(obj)) {
        return Rational(BigInt(py::str(obj).cast<std::string>()));
    }
    if (py::isinstance<py::str>(obj)) {
        return parse_rational(obj.cast<std::string>());
    }
    if (py::isinstance(obj, fraction_type())) {
        BigInt num(py::str(obj.attr("numerator")).cast<std::string>());
        BigInt den(py::str(obj.attr("denominator")).cast<std::string>());
        return rational(num, den);
    }
    throw py::type_error("expected int, Fraction, or a rational string like '1/2'");
}

std::vector<Rational> from_objects(const std::vector<py::object>& objs) {
    std::vector<Rational> out;
    out.reserve(objs.size());
    for (const py::object& o : objs) out.push_back(from_object(o));
    return out;
}

SimplexWeights weights_from(const std::vector<py::object>& p) {
    return SimplexWeights(from_objects(p));
}

Configuration config_from(const std::vector<int>& counts) { return Configuration(counts); }

Sample sample_from(int N, int d, const std::vector<std::vector<int>>& rows) {
    std::vector<Configuration> obs;
    obs.reserve(rows.size());
    for (const auto& row : rows) obs.emplace_back(row);
    return Sample(N, d, std::move(obs));
}

py::dict report_to_dict(const GofReport& report) {
    py::dict out;
    out["mode"] = report.mode;
    out["N"] = report.N;
    out["d"] = report.d;
    out["r"] = report.r;
    out["components"] = report.components;
    out["dfs"] = report.dfs;
    out["p_values"] = report.p_values;
    out["total"] = report.total;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reproducing kernel orthogonal polynomials on the multinomial distribution";
    m.attr("__version__") = kVersion;

    m.def(
        "binomial",
        [](long n, long k) { return py::cast(binomial(n, k).get_str()).cast<py::int_>(); },
        py::arg("n"), py::arg("k"));
    m.def(
        "multinomial_pmf",
        [](const std::vector<int>& x, const std::vector<py::object>& p) {
            return to_fraction(multinomial_pmf(config_from(x), weights_from(p)));
        },
        py::arg("x"), py::arg("p"));
    m.def(
        "enumerate_configurations",
        [](int N, int d) {
            py::list out;
            for (const Configuration& x : enumerate_configurations(N, d)) out.append(x.counts());
            return out;
        },
        py::arg("N"), py::arg("d"));

    m.def(
        "krawtchouk",
        [](int n, int x, int N, const py::object& p) {
            return to_fraction(krawtchouk_eval(n, x, BinomialParams(N, from_object(p))));
        },
        py::arg("n"), py::arg("x"), py::arg("N"), py::arg("p"));
    m.def(
        "krawtchouk_norm",
        [](int n, int N, const py::object& p) {
            return to_fraction(krawtchouk_norm(n, BinomialParams(N, from_object(p))));
        },
        py::arg("n"), py::arg("N"), py::arg("p"));
    m.def(
        "charlier",
        [](int n, int x, const py::object& lam) {
            return to_fraction(charlier_eval(n, x, PoissonParams(from_object(lam))));
        },
        py::arg("n"), py::arg("x"), py::arg("lam"));

    m.def(
        "kernel",
        [](int n, const std::vector<int>& x, const std::vector<int>& y,
           const std::vector<py::object>& p, const std::string& form) {
            KernelParams params(config_from(x).total(), weights_from(p));
            Configuration cx = config_from(x), cy = config_from(y);
            Rational v = form == "centered"    ? kernel_eval_centered(n, cx, cy, params)
                         : form == "hypergeom" ? kernel_eval_hypergeom(n, cx, cy, params)
                                               : kernel_eval(n, cx, cy, params);
            return to_fraction(v);
        },
        py::arg("n"), py::arg("x"), py::arg("y"), py::arg("p"), py::arg("form") = "plain");
    m.def(
        "kernel_all_degrees",
        [](const std::vector<int>& x, const std::vector<int>& y,
           const std::vector<py::object>& p) {
            KernelParams params(config_from(x).total(), weights_from(p));
            return to_fraction_list(kernel_eval_all(config_from(x), config_from(y), params));
        },
        py::arg("x"), py::arg("y"), py::arg("p"));
    m.def(
        "poisson_kernel",
        [](const py::object& rho, const std::vector<int>& x, const std::vector<int>& y,
           const std::vector<py::object>& p, const std::string& side) {
            KernelParams params(config_from(x).total(), weights_from(p));
            Rational v = side == "series"
                             ? poisson_kernel_lhs(from_object(rho), config_from(x), config_from(y), params)
                             : poisson_kernel_rhs(from_object(rho), config_from(x), config_from(y), params);
            return to_fraction(v);
        },
        py::arg("rho"), py::arg("x"), py::arg("y"), py::arg("p"), py::arg("side") = "series");
    m.def(
        "poisson_kernel_rho_min",
        [](const std::vector<py::object>& p) { return to_fraction(poisson_kernel_rho_min(weights_from(p))); },
        py::arg("p"));
    m.def(
        "poisson_limit_kernel",
        [](int n, const std::vector<int>& x, const std::vector<int>& y,
           const std::vector<py::object>& mu) {
            return to_fraction(poisson_limit_kernel(n, x, y, PoissonVectorParams(from_objects(mu))));
        },
        py::arg("n"), py::arg("x"), py::arg("y"), py::arg("mu"));

    py::class_<OrthonormalBasis>(m, "OrthonormalBasis")
        .def_static(
            "gram_schmidt",
            [](const std::vector<py::object>& p, std::vector<int> order) {
                return OrthonormalBasis::gram_schmidt(weights_from(p), std::move(order));
            },
            py::arg("p"), py::arg("seed_order") = std::vector<int>{})
        .def(py::init([](const std::vector<std::vector<py::object>>& rows,
                         const std::vector<py::object>& p) {
                 std::vector<std::vector<Rational>> r;
                 for (const auto& row : rows) r.push_back(from_objects(row));
                 return OrthonormalBasis(std::move(r), weights_from(p));
             }),
             py::arg("rows"), py::arg("p"))
        .def_property_readonly("row_count", &OrthonormalBasis::row_count)
        .def("row", [](const OrthonormalBasis& b, int l) { return to_fraction_list(b.row(l)); })
        .def("squared_norm",
             [](const OrthonormalBasis& b, int l) { return to_fraction(b.squared_norm(l)); })
        .def("entry", &OrthonormalBasis::entry, py::arg("l"), py::arg("j"));

    m.def(
        "mvk_raw",
        [](const std::vector<int>& degrees, const std::vector<int>& x, const OrthonormalBasis& basis) {
            return to_fraction(mvk_eval_raw(MultiIndex(degrees), config_from(x), basis));
        },
        py::arg("degrees"), py::arg("x"), py::arg("basis"));
    m.def(
        "mvk",
        [](const std::vector<int>& degrees, const std::vector<int>& x, const OrthonormalBasis& basis) {
            return mvk_eval(MultiIndex(degrees), config_from(x), basis);
        },
        py::arg("degrees"), py::arg("x"), py::arg("basis"));

    m.def(
        "triple_sum",
        [](const std::vector<int>& x, const std::vector<int>& y, int z,
           const std::vector<py::object>& p, const py::object& p_dup) {
            DuplicationParams params(KernelParams(config_from(x).total(), weights_from(p)),
                                     from_object(p_dup));
            return to_fraction(triple_sum_K(config_from(x), config_from(y), z, params));
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("p"), py::arg("p_dup"));
    m.def(
        "mixing_measure",
        [](const std::vector<int>& x, const std::vector<int>& y, const std::vector<py::object>& p,
           const py::object& p_dup) {
            DuplicationParams params(KernelParams(config_from(x).total(), weights_from(p)),
                                     from_object(p_dup));
            return to_fraction_list(mixing_measure(config_from(x), config_from(y), params).masses);
        },
        py::arg("x"), py::arg("y"), py::arg("p"), py::arg("p_dup"));
    m.def(
        "duplication_pair",
        [](int n, const std::vector<int>& x, const std::vector<int>& y,
           const std::vector<py::object>& p, const py::object& p_dup) {
            DuplicationParams params(KernelParams(config_from(x).total(), weights_from(p)),
                                     from_object(p_dup));
            auto [lhs, rhs] = duplication_identity_check(n, config_from(x), config_from(y), params);
            return py::make_tuple(to_fraction(lhs), to_fraction(rhs));
        },
        py::arg("n"), py::arg("x"), py::arg("y"), py::arg("p"), py::arg("p_dup"));
    m.def(
        "triple_product_1d",
        [](int x, int y, int z, int N, const py::object& r, const py::object& s) {
            return to_fraction(triple_product_1d(x, y, z, N, from_object(r), from_object(s)));
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("N"), py::arg("r"), py::arg("s"));
    m.def(
        "matching_simulate",
        [](const std::vector<int>& x, const std::vector<int>& y, const std::vector<py::object>& p,
           const py::object& p_dup, std::uint64_t replicates, std::uint64_t seed) {
            DuplicationParams params(KernelParams(config_from(x).total(), weights_from(p)),
                                     from_object(p_dup));
            MatchingResult res = matching_simulate(config_from(x), config_from(y), params,
                                                   replicates, seed);
            py::dict out;
            out["counts"] = res.counts;
            out["replicates"] = res.replicates;
            out["seed"] = res.seed;
            out["frequencies"] = res.frequencies();
            return out;
        },
        py::arg("x"), py::arg("y"), py::arg("p"), py::arg("p_dup"), py::arg("replicates"),
        py::arg("seed"));

    m.def(
        "gof_report",
        [](int N, int d, const std::vector<std::vector<int>>& rows,
           const std::vector<py::object>& p) {
            return report_to_dict(fixed_p_report(sample_from(N, d, rows), weights_from(p)));
        },
        py::arg("N"), py::arg("d"), py::arg("observations"), py::arg("p"));
    m.def(
        "gof_report_estimated",
        [](int N, int d, const std::vector<std::vector<int>>& rows) {
            return report_to_dict(estimated_p_report(sample_from(N, d, rows)));
        },
        py::arg("N"), py::arg("d"), py::arg("observations"));
    m.def("chi_squared_survival", &chi_squared_survival, py::arg("x"), py::arg("df"));

    py::class_<UrnChainSpec>(m, "UrnChainSpec")
        .def(py::init([](int N, const std::vector<py::object>& p, int z, const py::object& p_dup) {
                 return UrnChainSpec(N, weights_from(p), z, from_object(p_dup));
             }),
             py::arg("N"), py::arg("p"), py::arg("z") = 1, py::arg("p_dup") = py::cast(1))
        .def_readonly("N", &UrnChainSpec::N)
        .def_readonly("z", &UrnChainSpec::z);

    m.def(
        "chain_eigenvalues",
        [](const UrnChainSpec& spec) { return to_fraction_list(chain_eigenvalues(spec)); },
        py::arg("spec"));
    m.def(
        "transition_matrix",
        [](const UrnChainSpec& spec) {
            py::list out;
            for (const auto& row : transition_matrix(spec)) out.append(to_fraction_list(row));
            return out;
        },
        py::arg("spec"));
    m.def("chi2_spectral", &chi2_distance_spectral, py::arg("x0"), py::arg("l"), py::arg("spec"));
    m.def("chi2_exact", &chi2_distance_exact, py::arg("x0"), py::arg("l"), py::arg("spec"),
          py::arg("cap") = 5000);
    m.def("tv_exact", &tv_distance_exact, py::arg("x0"), py::arg("l"), py::arg("spec"),
          py::arg("cap") = 5000);
    m.def(
        "cutoff_bounds",
        [](int colour, double c, const UrnChainSpec& spec) {
            CutoffBounds b = cutoff_bounds(colour, c, spec);
            return py::make_tuple(b.lower, b.upper, b.l);
        },
        py::arg("colour"), py::arg("c"), py::arg("spec"));
    m.def(
        "cutoff_bounds_general_z",
        [](const std::vector<int>& x0, double c, const UrnChainSpec& spec) {
            CutoffBounds b = cutoff_bounds_general_z(config_from(x0), c, spec);
            return py::make_tuple(b.lower, b.upper, b.l);
        },
        py::arg("x0"), py::arg("c"), py::arg("spec"));
    m.def(
        "lumped_moments",
        [](int N, const py::object& p_i, const py::object& p_dup, long l) {
            LumpedMoments mo = lumped_moments(LumpedChain(N, from_object(p_i), from_object(p_dup)), l);
            return py::make_tuple(mo.mean, mo.second_moment, mo.variance);
        },
        py::arg("N"), py::arg("p_i"), py::arg("p_dup"), py::arg("l"));
    m.def(
        "mixing_curve_csv",
        [](const std::vector<int>& x0, long l_max, const UrnChainSpec& spec) {
            return to_csv(mixing_curve(config_from(x0), l_max, spec));
        },
        py::arg("x0"), py::arg("l_max"), py::arg("spec"));
}
