// Python bindings for the solver core: problems and their oracles, scheme
// training, policy evaluation, error metrics and zero-level contours.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "frontnet/metrics/contour.hpp"
#include "frontnet/metrics/errors.hpp"
#include "frontnet/metrics/grid.hpp"
#include "frontnet/problems/problem.hpp"
#include "frontnet/schemes/train.hpp"

namespace py = pybind11;
using namespace frontnet;

namespace {

Vec to_vec(const std::vector<double>& x, int want, const char* what) {
  if (static_cast<int>(x.size()) != want)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(want) + " coordinates, got " +
                                std::to_string(x.size()));
  return x;
}

struct PyPolicy {
  schemes::TrainedPolicy pol;
  // Scratch buffers reused across calls; python callers are single threaded
  // under the GIL.
  nn::FeedforwardNet::Workspace ws;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Feedback-control front propagation solver";

  py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<problems::Problem>(m, "Problem")
      .def_static(
          "make",
          [](const std::string& name, int d) { return problems::Problem::make(name, d); },
          py::arg("name"), py::arg("d") = 2,
          "Construct a benchmark problem: rotation | eikonal | eikadv-large | "
          "eikadv-small")
      .def_property_readonly("name", &problems::Problem::name)
      .def_property_readonly("dim", &problems::Problem::dim)
      .def_property_readonly("control_dim", &problems::Problem::control_dim)
      .def_property_readonly("horizon", &problems::Problem::horizon)
      .def_property_readonly("has_obstacle", &problems::Problem::has_obstacle)
      .def_property_readonly("has_oracle", &problems::Problem::has_oracle)
      .def_property_readonly("sampling_box",
                             [](const problems::Problem& p) {
                               return std::make_pair(p.sampling_box().lo,
                                                     p.sampling_box().hi);
                             })
      .def("f",
           [](const problems::Problem& p, const std::vector<double>& x,
              const std::vector<double>& a) {
             Vec xx = to_vec(x, p.dim(), "x");
             Vec aa = to_vec(a, p.control_dim(), "a");
             Vec out(p.dim());
             p.f(xx.data(), aa.data(), out.data());
             return out;
           },
           py::arg("x"), py::arg("a"), "Dynamics right-hand side f(x, a)")
      .def("g",
           [](const problems::Problem& p, const std::vector<double>& x) {
             return p.g(to_vec(x, p.dim(), "x").data());
           },
           py::arg("x"), "Obstacle function (throws when the problem has none)")
      .def("phi",
           [](const problems::Problem& p, const std::vector<double>& x) {
             return p.phi(to_vec(x, p.dim(), "x").data());
           },
           py::arg("x"), "Terminal cost")
      .def("oracle",
           [](const problems::Problem& p, double t, const std::vector<double>& x) {
             return p.oracle(t, to_vec(x, p.dim(), "x").data());
           },
           py::arg("t"), py::arg("x"),
           "Exact value v(t, x); raises NumericError where undefined")
      .def("__repr__", [](const problems::Problem& p) {
        return "<Problem " + p.name() + " d=" + std::to_string(p.dim()) + ">";
      });

  py::class_<PyPolicy>(m, "Policy")
      .def_property_readonly(
          "scheme", [](const PyPolicy& p) { return schemes::scheme_name(p.pol.kind); })
      .def_property_readonly("N", [](const PyPolicy& p) { return p.pol.N; })
      .def_property_readonly("p", [](const PyPolicy& p) { return p.pol.p; })
      .def_property_readonly("dt", [](const PyPolicy& p) { return p.pol.dt; })
      .def_property_readonly("train_seconds",
                             [](const PyPolicy& p) { return p.pol.train_seconds; })
      .def("value",
           [](PyPolicy& p, const problems::Problem& prob, int n,
              const std::vector<double>& x) {
             if (n < 0 || n > p.pol.N)
               throw std::out_of_range("step index out of range");
             return p.pol.value(prob, n, to_vec(x, prob.dim(), "x").data(), p.ws);
           },
           py::arg("problem"), py::arg("n"), py::arg("x"),
           "Value estimate V_n(x) of the trained policy")
      .def("control",
           [](PyPolicy& p, int n, const std::vector<double>& x) {
             if (n < 0 || n >= p.pol.N)
               throw std::out_of_range("step index out of range");
             if (p.pol.ctrl[n].input_dim() != static_cast<int>(x.size()))
               throw std::invalid_argument("state dimension mismatch");
             Vec a(p.pol.ctrl[n].output_dim());
             p.pol.control(n, x.data(), a.data(), p.ws);
             return a;
           },
           py::arg("n"), py::arg("x"), "Feedback control a_n(x)")
      .def("save_nets", [](const PyPolicy& p, const std::string& dir) { p.pol.save_nets(dir); },
           py::arg("dir"))
      .def("load_nets", [](PyPolicy& p, const std::string& dir) { p.pol.load_nets(dir); },
           py::arg("dir"));

  m.def(
      "train",
      [](const problems::Problem& prob, const std::string& scheme, int N, int p,
         int M, int sg_iters, std::vector<int> control_hidden,
         std::vector<int> value_hidden, uint64_t seed, bool warm_start,
         double lr) {
        schemes::TrainConfig cfg;
        cfg.kind = schemes::scheme_by_name(scheme);
        cfg.N = N;
        cfg.p = p;
        cfg.M = M;
        cfg.sg_iters = sg_iters;
        cfg.control_hidden = std::move(control_hidden);
        cfg.value_hidden = std::move(value_hidden);
        cfg.seed = seed;
        cfg.warm_start = warm_start;
        cfg.adam.lr = lr;
        auto out = std::make_unique<PyPolicy>();
        {
          py::gil_scoped_release release;
          out->pol = schemes::train(prob, cfg);
        }
        return out;
      },
      py::arg("problem"), py::arg("scheme") = "L", py::arg("N") = 5,
      py::arg("p") = 5, py::arg("M") = 1000, py::arg("sg_iters") = 1000,
      py::arg("control_hidden") = std::vector<int>{40, 40, 40},
      py::arg("value_hidden") = std::vector<int>{40, 40, 40},
      py::arg("seed") = 1, py::arg("warm_start") = true, py::arg("lr") = 1e-3,
      "Train per-step feedback controls with the SL, L or H scheme");

  py::class_<metrics::ErrorStats>(m, "ErrorStats")
      .def_readonly("global_linf", &metrics::ErrorStats::global_linf)
      .def_readonly("global_l1", &metrics::ErrorStats::global_l1)
      .def_readonly("local_linf", &metrics::ErrorStats::local_linf)
      .def_readonly("local_l1", &metrics::ErrorStats::local_l1)
      .def_readonly("local_count", &metrics::ErrorStats::local_count)
      .def("__repr__", [](const metrics::ErrorStats& e) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "<ErrorStats global_linf=%.3e global_l1=%.3e "
                      "local_linf=%.3e local_l1=%.3e local_count=%zu>",
                      e.global_linf, e.global_l1, e.local_linf, e.local_l1,
                      e.local_count);
        return std::string(buf);
      });

  m.def(
      "compute_errors",
      [](const std::vector<double>& computed, const std::vector<double>& reference,
         double eta) {
        if (computed.size() != reference.size())
          throw std::invalid_argument("field sizes differ");
        return metrics::compute_errors(computed, reference, eta);
      },
      py::arg("computed"), py::arg("reference"), py::arg("eta") = 0.1,
      "Sup and mean absolute errors, globally and on the band {|ref| <= eta}");

  // Evaluation grid on the problem's reference plane. Returns (points, a, b)
  // where points is a flat row-major list of d-dim states and a, b are the
  // in-plane coordinates per axis.
  m.def(
      "reference_grid",
      [](const problems::Problem& prob, int resolution) {
        auto grid = metrics::ReferenceGrid::from_plane(prob.plane(), resolution);
        std::vector<double> pts(grid.size() * grid.d());
        Vec x(grid.d());
        for (int i = 0; i < grid.n; ++i)
          for (int j = 0; j < grid.n; ++j) {
            grid.point(i, j, x.data());
            std::copy(x.begin(), x.end(),
                      pts.begin() + (static_cast<size_t>(i) * grid.n + j) * grid.d());
          }
        std::vector<double> coords(grid.n);
        for (int i = 0; i < grid.n; ++i) coords[i] = grid.coord(i);
        return std::make_tuple(pts, coords, grid.d());
      },
      py::arg("problem"), py::arg("resolution") = 201);

  m.def(
      "oracle_field",
      [](const problems::Problem& prob, double t, int resolution) {
        auto grid = metrics::ReferenceGrid::from_plane(prob.plane(), resolution);
        std::vector<double> out(grid.size());
        Vec x(grid.d());
        for (int i = 0; i < grid.n; ++i)
          for (int j = 0; j < grid.n; ++j) {
            grid.point(i, j, x.data());
            double v = std::numeric_limits<double>::quiet_NaN();
            try {
              v = prob.oracle(t, x.data());
            } catch (const numeric_error&) {
              // leave the cell masked
            }
            out[static_cast<size_t>(i) * grid.n + j] = v;
          }
        return out;
      },
      py::arg("problem"), py::arg("t") = 0.0, py::arg("resolution") = 201,
      "Exact value field on the reference plane; NaN marks undefined cells");

  m.def(
      "value_field",
      [](PyPolicy& pol, const problems::Problem& prob, int n, int resolution) {
        auto grid = metrics::ReferenceGrid::from_plane(prob.plane(), resolution);
        std::vector<double> out(grid.size());
        Vec x(grid.d());
        py::gil_scoped_release release;
        for (int i = 0; i < grid.n; ++i)
          for (int j = 0; j < grid.n; ++j) {
            grid.point(i, j, x.data());
            out[static_cast<size_t>(i) * grid.n + j] =
                pol.pol.value(prob, n, x.data(), pol.ws);
          }
        return out;
      },
      py::arg("policy"), py::arg("problem"), py::arg("n") = 0,
      py::arg("resolution") = 201,
      "Trained value estimate V_n on the reference plane");

  m.def(
      "zero_contours",
      [](const std::vector<double>& values, int resolution, double rmax) {
        if (values.size() != static_cast<size_t>(resolution) * resolution)
          throw std::invalid_argument("value count != resolution^2");
        metrics::ReferenceGrid grid;
        grid.w1 = {1.0, 0.0};
        grid.w2 = {0.0, 1.0};
        grid.center = {0.0, 0.0};
        grid.rmax = rmax;
        grid.n = resolution;
        auto polys = metrics::zero_contours(grid, values);
        std::vector<std::vector<std::pair<double, double>>> out;
        out.reserve(polys.size());
        for (const auto& poly : polys) {
          std::vector<std::pair<double, double>> line;
          line.reserve(poly.size());
          for (const auto& pt : poly) line.emplace_back(pt[0], pt[1]);
          out.push_back(std::move(line));
        }
        return out;
      },
      py::arg("values"), py::arg("resolution"), py::arg("rmax"),
      "Zero level set polylines of a row-major field in plane coordinates; "
      "cells touching NaN values are skipped");
}
