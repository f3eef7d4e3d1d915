// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "qcube/experiments.hpp"
#include "qcube/operator.hpp"
#include "qcube/q_combinatorics.hpp"
#include "qcube/spectral.hpp"
#include "qcube/weighted_graph.hpp"

namespace py = pybind11;
using namespace qcube;

namespace {

py::object to_fraction(const Rational& r) {
  static py::object fraction_type =
      py::module_::import("fractions").attr("Fraction");
  static py::object int_type = py::module_::import("builtins").attr("int");
  return fraction_type(int_type(r.get_num().get_str()),
                       int_type(r.get_den().get_str()));
}

Rational from_py(const py::object& obj) {
  return parse_rational(py::str(obj).cast<std::string>());
}

py::dict moment_dict(const ScaledMoment& m) {
  py::dict d;
  d["coeff"] = to_fraction(m.coeff);
  d["half_power"] = m.half_power;
  d["n"] = m.n;
  d["value"] = m.value();
  return d;
}

std::shared_ptr<SignFunction> sample_eps(int n, const py::object& q,
                                         std::uint64_t seed) {
  return std::make_shared<SignFunction>(
      SignFunction::sample(n, SignLaw{from_py(q), seed}));
}

}  // namespace

PYBIND11_MODULE(_qcube, m) {
  m.doc() =
      "Baby Fock operators on weighted distance-k hypercube graphs and "
      "their q-Hermite / q-Gaussian limit laws (exact arithmetic core)";

  py::class_<SignFunction, std::shared_ptr<SignFunction>>(m, "SignFunction")
      .def_static(
          "sample",
          [](int n, const py::object& q, std::uint64_t seed) {
            return sample_eps(n, q, seed);
          },
          py::arg("n"), py::arg("q"), py::arg("seed") = 0,
          "Symmetric +-1 table with P(-1) = (1-q)/2 off-diagonal")
      .def_static(
          "constant",
          [](int n, int value) {
            return std::make_shared<SignFunction>(
                SignFunction::constant(n, value));
          },
          py::arg("n"), py::arg("value"))
      .def_static("from_text",
                  [](const std::string& text) {
                    return std::make_shared<SignFunction>(
                        SignFunction::from_text(text));
                  })
      .def("to_text", [](const SignFunction& s) { return s.to_text(); })
      .def_property_readonly("n", &SignFunction::size)
      .def_property_readonly(
          "q", [](const SignFunction& s) { return to_fraction(s.law().q); })
      .def_property_readonly(
          "seed", [](const SignFunction& s) { return s.law().seed; })
      .def("__call__", &SignFunction::operator(), py::arg("i"), py::arg("j"))
      .def("vertex_sign", &SignFunction::vertex_sign, py::arg("r"),
           py::arg("i"))
      .def("__eq__", [](const SignFunction& a, const SignFunction& b) {
        return a == b;
      });

  py::class_<FockOperator>(m, "FockOperator")
      .def_property_readonly("n", &FockOperator::space_exponent)
      .def_property_readonly("half_power", &FockOperator::half_power)
      .def_property_readonly("degree", &FockOperator::degree)
      .def_property_readonly("self_adjoint", &FockOperator::self_adjoint)
      .def_property_readonly(
          "scale", [](const FockOperator& op) { return to_fraction(op.scale()); })
      .def("entries",
           [](const FockOperator& op) {
             py::list out;
             for (const SparseEntry& e : op.to_entries())
               out.append(py::make_tuple(e.source, e.target,
                                         to_fraction(e.weight)));
             return out;
           },
           "Raw-action entries (source, target, weight)")
      .def("apply",
           [](const FockOperator& op, py::array_t<double> v) {
             const auto buf = v.request();
             if (buf.ndim != 1 ||
                 buf.shape[0] != (long)(std::size_t{1} << op.space_exponent()))
               throw std::invalid_argument("apply: wrong vector length");
             RealVector in = RealVector::zero(op.space_exponent());
             const double* src = static_cast<const double*>(buf.ptr);
             std::copy(src, src + buf.shape[0], in.coeff.begin());
             const RealVector out = op.apply_normalized(in);
             return py::array_t<double>(out.coeff.size(), out.coeff.data());
           },
           py::arg("v"), "Normalized action on a coefficient vector");

  m.def(
      "build_x",
      [](const SignFunctionPtr& eps, int k) { return build_x_operator(eps, k); },
      py::arg("eps"), py::arg("k"),
      "X_{n,k}: normalized gamma-word sum over distinct k-tuples");
  m.def(
      "build_y",
      [](const SignFunctionPtr& eps, int k, const py::object& q) {
        return build_y_operator(eps, k, from_py(q));
      },
      py::arg("eps"), py::arg("k"), py::arg("q"));
  m.def(
      "build_y_core",
      [](const SignFunctionPtr& eps, int k) {
        return build_y_core_operator(eps, k);
      },
      py::arg("eps"), py::arg("k"), "q-free integer core [k+1]_q Y_{n,k}");

  m.def(
      "vacuum_moment",
      [](const FockOperator& op, int mpow) {
        return moment_dict(vacuum_moment(op, mpow));
      },
      py::arg("op"), py::arg("m"));
  m.def(
      "vacuum_moments",
      [](const FockOperator& op, int m_max) {
        py::list out;
        for (const ScaledMoment& mom : vacuum_moment_table(op, m_max))
          out.append(moment_dict(mom));
        return out;
      },
      py::arg("op"), py::arg("m_max"));
  m.def(
      "mixed_vacuum_moment",
      [](const std::vector<const FockOperator*>& ops) {
        return moment_dict(mixed_vacuum_moment(ops));
      },
      py::arg("ops"));
  m.def(
      "z_statistic",
      [](const SignFunctionPtr& eps, const std::vector<int>& tuple) {
        return to_fraction(z_statistic(*eps, tuple));
      },
      py::arg("eps"), py::arg("tuple"));
  m.def(
      "check_recurrence",
      [](const SignFunctionPtr& eps, int k) {
        return to_fraction(check_recurrence(eps, k));
      },
      py::arg("eps"), py::arg("k"),
      "Max deviation of the q-free recurrence; exactly 0 on success");

  // -- graphs ----------------------------------------------------------------
  m.def("distance_k_edge_count", [](int n, int k) {
    return distance_k_edges(n, k).size();
  });
  m.def(
      "build_graph",
      [](const SignFunctionPtr& eps, int k) {
        std::ostringstream out;
        export_graph(out, build_weighted_distance_k_graph(*eps, k));
        return out.str();
      },
      py::arg("eps"), py::arg("k"), "Edge-list text of the weighted graph");
  m.def("graph_edges", [](const std::string& text) {
    const WeightedGraph g = import_graph(text);
    py::list out;
    for (const WeightedEdge& e : g.edges)
      out.append(py::make_tuple(e.u, e.v, to_fraction(e.weight)));
    return out;
  });

  // -- q-combinatorics -------------------------------------------------------
  m.def("q_integer", [](int k, const py::object& q) {
    return to_fraction(q_integer(k, from_py(q)));
  });
  m.def("q_factorial", [](int k, const py::object& q) {
    return to_fraction(q_factorial(k, from_py(q)));
  });
  m.def("hermite_coeffs", [](int k, const py::object& q) {
    const XPolynomial h = hermite_polynomial(k, from_py(q));
    py::list out;
    for (int d = 0; d <= h.degree(); ++d) out.append(to_fraction(h.coeff(d)));
    return out;
  });
  m.def("q_gaussian_moment", [](int mpow, const py::object& q) {
    return to_fraction(q_gaussian_moment(mpow, from_py(q)));
  });
  m.def("q_gaussian_moment_coeffs", [](int mpow) {
    py::list out;
    const QPolynomial p = q_gaussian_moment_poly(mpow);
    static py::object int_type = py::module_::import("builtins").attr("int");
    for (int d = 0; d <= p.degree(); ++d)
      out.append(int_type(p.coeff(d).get_str()));
    return out;
  });
  m.def("limit_moment", [](const std::vector<int>& degrees,
                           const py::object& q) {
    return to_fraction(limit_moment(degrees, from_py(q)));
  });
  m.def("pair_partition_count",
        [](int points) { return pair_partitions(points).size(); });
  m.def("crossing_number", [](const std::vector<std::pair<int, int>>& pairs) {
    return crossing_number(pairs);
  });
  m.def("z_mean", [](int k, const py::object& q) {
    return to_fraction(z_mean(k, from_py(q)));
  });
  m.def("z_variance", [](int k, const py::object& q) {
    return to_fraction(z_variance(k, from_py(q)));
  });

  // -- spectra and norms -----------------------------------------------------
  m.def(
      "spectrum",
      [](const FockOperator& op, int eigen_cap) {
        const std::vector<double> ev = spectrum(op, eigen_cap);
        return py::array_t<double>(ev.size(), ev.data());
      },
      py::arg("op"), py::arg("eigen_cap") = kDefaultEigenCap);
  m.def(
      "lp_norm",
      [](const FockOperator& op, double p, int eigen_cap) {
        return lp_norm(op, p, eigen_cap);
      },
      py::arg("op"), py::arg("p"), py::arg("eigen_cap") = kDefaultEigenCap);
  m.def(
      "l2_norm_squared",
      [](const FockOperator& op) { return to_fraction(l2_norm_squared(op)); },
      py::arg("op"), "Exact tau(op* op)");

  // -- experiment runners ----------------------------------------------------
  m.def(
      "khinchine",
      [](const SignFunctionPtr& eps, int k, int p, int trials,
         std::uint64_t seed) {
        const KhinchineResult r = check_khinchine(eps, k, p, trials, seed);
        py::dict d;
        d["pass"] = r.pass;
        d["violations"] = r.violations;
        d["worst_lower"] = r.worst_lower;
        d["worst_upper"] = r.worst_upper;
        return d;
      },
      py::arg("eps"), py::arg("k"), py::arg("p"), py::arg("trials") = 100,
      py::arg("seed") = 1);
  m.def(
      "hypercontractivity",
      [](const SignFunctionPtr& eps, double p, double r, double t, int trials,
         std::uint64_t seed) {
        const HypercontractivityResult res =
            check_hypercontractivity(eps, p, r, t, trials, seed);
        py::dict d;
        d["admissible"] = res.admissible;
        d["pass"] = res.pass;
        d["violations"] = res.violations;
        d["worst_ratio"] = res.worst_ratio;
        return d;
      },
      py::arg("eps"), py::arg("p"), py::arg("r"), py::arg("t"),
      py::arg("trials") = 100, py::arg("seed") = 1);
  m.def(
      "clt_z",
      [](int k, const py::object& q, int n, long samples, std::uint64_t seed,
         int threads) {
        const CltZResult r = run_clt_z(k, from_py(q), n, samples, seed, threads);
        py::dict d;
        d["mean"] = to_fraction(r.mean);
        d["variance"] = to_fraction(r.variance);
        d["target_variance"] = to_fraction(r.target_variance);
        d["standardized_fourth"] = r.standardized_fourth;
        d["mean_abs_dev_se"] = r.mean_abs_dev_se;
        d["mean_ok"] = r.mean_ok;
        d["variance_ok"] = r.variance_ok;
        d["formula_certified"] = r.formula_certified;
        return d;
      },
      py::arg("k"), py::arg("q"), py::arg("n") = 4000,
      py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("threads") = 1);
  m.def(
      "convergence_report_json",
      [](const std::vector<py::object>& qs, const std::vector<int>& n_grid,
         const std::vector<int>& ks, int m_max, int samples,
         std::uint64_t seed, int threads) {
        ExperimentConfig config;
        for (const py::object& q : qs) config.qs.push_back(from_py(q));
        config.n_grid = n_grid;
        config.ks = ks;
        config.m_max = m_max;
        config.samples = samples;
        config.seed = seed;
        config.threads = threads;
        std::ostringstream out;
        write_convergence_json(out, run_convergence(config));
        return out.str();
      },
      py::arg("qs"), py::arg("n_grid"), py::arg("ks"), py::arg("m_max") = 4,
      py::arg("samples") = 3, py::arg("seed") = 1, py::arg("threads") = 1,
      "Full convergence sweep, returned as a JSON document");

  m.attr("__version__") = "1.0.0";
}
