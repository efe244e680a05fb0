#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fkstar/duality.hpp"
#include "fkstar/graph.hpp"
#include "fkstar/io.hpp"
#include "fkstar/observables.hpp"
#include "fkstar/oracle_ed.hpp"
#include "fkstar/region.hpp"
#include "fkstar/sampler.hpp"

namespace py = pybind11;
using namespace fkstar;

namespace {

py::dict as_dict(const EstimateCI& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["stderr"] = e.std_error;
  d["n_samples"] = e.n_samples;
  d["observable"] = e.observable;
  return d;
}

// Schedule from keyword arguments; defaults follow the move.
Schedule schedule(const Region& r, double q, std::int64_t samples, std::uint64_t seed, std::optional<std::string> move,
                  std::optional<std::int64_t> burn_in, std::optional<std::int64_t> thinning) {
  MoveKind m = move ? parse_move(*move) : q == 1.0 ? MoveKind::kDirect : q == 2.0 ? MoveKind::kCluster
                                                                                   : MoveKind::kBirthDeath;
  Schedule s = default_schedule(r, m, samples, seed);
  if (burn_in) s.burn_in = *burn_in;
  if (thinning) s.thinning = *thinning;
  return s;
}

RCParams params(double q, double lambda, double delta, const std::string& bc) {
  RCParams p{lambda, delta, q, parse_boundary(bc)};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_fkstar, m) {
  m.doc() = "Continuum random-cluster sampling on star-like graphs";
  m.attr("__version__") = kVersion;
  py::register_exception<Error>(m, "FkstarError", PyExc_RuntimeError);

  py::class_<EstimateCI>(m, "Estimate")
      .def_readonly("mean", &EstimateCI::mean)
      .def_readonly("stderr", &EstimateCI::std_error)
      .def_readonly("n_samples", &EstimateCI::n_samples)
      .def_readonly("observable", &EstimateCI::observable)
      .def("__repr__", [](const EstimateCI& e) {
        return "Estimate(" + e.observable + ", " + std::to_string(e.mean) + " +- " + std::to_string(e.std_error) + ")";
      });

  py::class_<StarLikeGraph>(m, "StarLikeGraph")
      .def_property_readonly("is_line", &StarLikeGraph::is_line)
      .def("to_json", [](const StarLikeGraph& g) { return serialize_graph_spec(g.spec()); });
  py::class_<FiniteGraph>(m, "FiniteGraph")
      .def_property_readonly("vertex_count", &FiniteGraph::vertex_count)
      .def_property_readonly("origin", [](const FiniteGraph& g) { return g.origin().index; })
      .def("to_json", [](const FiniteGraph& g) { return serialize_graph_spec(g.spec()); });

  m.def("star_like_graph", [](const std::string& json) { return build_star_like(parse_graph_spec(json)); },
        py::arg("json"), "Build a star-like graph from its JSON description.");
  m.def("finite_graph", [](const std::string& json) { return build_finite_graph(parse_graph_spec(json)); },
        py::arg("json"));
  m.def("truncate", [](const StarLikeGraph& g, std::int64_t arm) { return fkstar::truncate(g, arm); }, py::arg("graph"),
        py::arg("arm_length"));

  m.def("dual_parameters", [](double q, double lambda, double delta, const std::string& bc) {
    RCParams d = dual_parameters(params(q, lambda, delta, bc));
    return py::make_tuple(d.q, d.lambda, d.delta, to_string(d.bc));
  }, py::arg("q"), py::arg("lambda_"), py::arg("delta"), py::arg("bc") = "free");

  m.def("estimate_theta",
        [](const StarLikeGraph& g, std::int64_t n, double q, double lambda, double delta, const std::string& bc,
           std::int64_t samples, std::uint64_t seed, std::optional<std::string> move,
           std::optional<std::int64_t> burn_in, std::optional<std::int64_t> thinning) {
          RCParams p = params(q, lambda, delta, bc);
          Schedule s = schedule(lambda_region(g, n, p.bc), q, samples, seed, move, burn_in, thinning);
          py::gil_scoped_release nogil;
          return estimate_theta(g, n, p, s);
        },
        py::arg("graph"), py::arg("n"), py::arg("q"), py::arg("lambda_"), py::arg("delta") = 1.0,
        py::arg("bc") = "wired", py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("move") = py::none(),
        py::arg("burn_in") = py::none(), py::arg("thinning") = py::none());

  m.def("estimate_box_reach",
        [](const StarLikeGraph& g, std::int64_t n, double q, double lambda, double delta, const std::string& bc,
           std::int64_t samples, std::uint64_t seed, std::optional<std::string> move,
           std::optional<std::int64_t> burn_in, std::optional<std::int64_t> thinning) {
          RCParams p = params(q, lambda, delta, bc);
          Schedule s = schedule(box_region(g, n, 0, 0.0, p.bc), q, samples, seed, move, burn_in, thinning);
          py::gil_scoped_release nogil;
          return estimate_box_reach(g, n, p, s);
        },
        py::arg("graph"), py::arg("n"), py::arg("q"), py::arg("lambda_"), py::arg("delta") = 1.0,
        py::arg("bc") = "wired", py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("move") = py::none(),
        py::arg("burn_in") = py::none(), py::arg("thinning") = py::none());

  m.def("finite_beta_connection",
        [](const FiniteGraph& g, int y, double lambda, double delta, double beta, std::int64_t samples,
           std::uint64_t seed, std::int64_t thinning) {
          Region r = finite_region(g, beta, Boundary::kPeriodic);
          RCParams p{lambda, delta, 2.0, Boundary::kPeriodic};
          Schedule s{1000, samples, thinning, seed, MoveKind::kCluster};
          SpacePoint a{g.origin(), 0.0}, b{{kCoreRay, y}, 0.0};
          py::gil_scoped_release nogil;
          return estimate_connection(r, p, s, a, b);
        },
        py::arg("graph"), py::arg("y"), py::arg("lambda_"), py::arg("delta"), py::arg("beta"),
        py::arg("samples") = 20000, py::arg("seed") = 1, py::arg("thinning") = 5,
        "q = 2 FK connection of the origin and vertex y at time 0 on a periodic column of height beta.");

  m.def("scan_critical",
        [](const StarLikeGraph& g, double q, std::vector<double> ratios, std::vector<std::int64_t> sizes,
           std::int64_t samples, std::uint64_t seed, double delta) {
          MoveKind mv = q == 1.0 ? MoveKind::kDirect : q == 2.0 ? MoveKind::kCluster : MoveKind::kBirthDeath;
          Schedule s{mv == MoveKind::kCluster ? 1000 : 0, samples, 1, seed, mv};
          ScanResult res;
          {
            py::gil_scoped_release nogil;
            res = scan_critical(g, q, ratios, sizes, s, delta);
          }
          py::list table;
          for (const auto& pt : res.table) {
            py::dict d = as_dict(pt.estimate);
            d["ratio"] = pt.ratio;
            d["n"] = pt.n;
            table.append(d);
          }
          py::dict out;
          out["rho_hat"] = res.rho_hat;
          out["bracket"] = py::make_tuple(res.bracket_lo, res.bracket_hi);
          out["table"] = table;
          return out;
        },
        py::arg("graph"), py::arg("q"), py::arg("ratios"), py::arg("sizes"), py::arg("samples") = 2000,
        py::arg("seed") = 1, py::arg("delta") = 1.0);

  m.def("duality_check",
        [](const StarLikeGraph& g, double q, double lambda, double delta, const std::string& bc, std::int64_t n,
           std::int64_t samples, std::uint64_t seed) {
          RCParams p = params(q, lambda, delta, bc);
          MoveKind mv = q == 2.0 ? MoveKind::kCluster : q == 1.0 ? MoveKind::kDirect : MoveKind::kBirthDeath;
          Schedule a{mv == MoveKind::kCluster ? 1000 : 0, samples, 2, seed, mv};
          Schedule b = a;
          b.seed = seed + 1;
          if (mv == MoveKind::kBirthDeath) {
            a = default_schedule(lambda_region(g, n, p.bc), mv, samples, seed);
            b = default_schedule(lambda_region(g, n, p.bc), mv, samples, seed + 1);
          }
          DualityReport rep;
          {
            py::gil_scoped_release nogil;
            rep = duality_check(g, p, n, a, b);
          }
          py::list rows;
          for (const auto& r : rep.rows) {
            py::dict d;
            d["event"] = r.event_id;
            d["primal"] = r.primal_est;
            d["primal_se"] = r.primal_se;
            d["dual"] = r.dual_est;
            d["dual_se"] = r.dual_se;
            d["z"] = r.z;
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["pass_fraction"] = rep.pass_fraction();
          return out;
        },
        py::arg("graph"), py::arg("q"), py::arg("lambda_"), py::arg("delta"), py::arg("bc"), py::arg("n"),
        py::arg("samples") = 5000, py::arg("seed") = 1);

  m.def("ground_state_correlation", &ground_state_correlation, py::arg("graph"), py::arg("lambda_"),
        py::arg("delta"), py::arg("x"), py::arg("y"));
  m.def("finite_beta_correlation", &finite_beta_correlation, py::arg("graph"), py::arg("lambda_"), py::arg("delta"),
        py::arg("beta"), py::arg("x"), py::arg("y"));
  m.def("spectral_gap", &spectral_gap, py::arg("graph"), py::arg("lambda_"), py::arg("delta"));
}
