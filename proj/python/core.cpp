#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commsat/analysis.hpp"
#include "commsat/distribution.hpp"
#include "commsat/error.hpp"
#include "commsat/generator.hpp"
#include "commsat/io.hpp"
#include "commsat/solvers.hpp"

namespace py = pybind11;
using namespace commsat;

namespace {

using Codes = std::vector<std::vector<std::int64_t>>;

Codes to_codes(const Formula& f) {
  Codes out;
  out.reserve(f.m());
  for (const Clause& c : f.clauses) {
    auto& row = out.emplace_back();
    for (const Literal& l : c) row.push_back(l.to_dimacs());
  }
  return out;
}

Formula from_codes(Var n, const Codes& clauses) {
  Formula f{n, {}};
  for (const auto& row : clauses) {
    std::vector<Literal> lits;
    for (auto code : row) lits.push_back(Literal::from_dimacs(code));
    f.clauses.emplace_back(std::move(lits));
  }
  f.validate();
  return f;
}

std::vector<bool> to_bools(const Assignment& a) {
  std::vector<bool> out;
  for (Var v = 1; v <= a.size(); ++v) out.push_back(a.value(v));
  return out;
}

py::dict stats_dict(const InstanceStats& st) {
  py::dict d;
  d["n"] = st.n;
  d["m"] = st.m;
  d["type0"] = st.type0;
  d["type_counts"] = st.type_counts;
  d["intra_clause_count"] = st.intra_clause_count;
  d["intra_variable_count"] = st.intra_variable_count;
  d["empirical_beta"] = st.empirical_beta;
  d["modularity"] = st.modularity_q;
  d["degree_mean"] = st.degree_mean;
  d["degree_cv"] = st.degree_cv;
  return d;
}

py::dict outcome_dict(const SolveOutcome& out) {
  py::dict d;
  d["status"] = to_string(out.status);
  d["model"] = out.model ? py::cast(to_bools(*out.model)) : py::none();
  d["decisions"] = out.stats.decisions;
  d["propagations"] = out.stats.propagations;
  d["conflicts"] = out.stats.conflicts;
  d["flips"] = out.stats.flips;
  d["seconds"] = out.stats.elapsed_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Community-structured planted 3-SAT generator";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<Error> error(m, "CommsatError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<ClauseDistribution>(m, "ClauseDistribution")
      .def(py::init<double, double, double>(), py::arg("p1"), py::arg("p2"), py::arg("p3"))
      .def_readwrite("p1", &ClauseDistribution::p1)
      .def_readwrite("p2", &ClauseDistribution::p2)
      .def_readwrite("p3", &ClauseDistribution::p3)
      .def_property_readonly("beta", [](const ClauseDistribution& d) { return beta_of(d); })
      .def("__repr__", [](const ClauseDistribution& d) {
        return "ClauseDistribution(p1=" + py::repr(py::float_(d.p1)).cast<std::string>() +
               ", p2=" + py::repr(py::float_(d.p2)).cast<std::string>() +
               ", p3=" + py::repr(py::float_(d.p3)).cast<std::string>() + ")";
      });

  m.def("midpoint_params", &midpoint_params, py::arg("beta"));
  m.def("qhidden_params", &qhidden_params, py::arg("q"));
  m.def("preset_params", [](const std::string& name) { return preset_params(name); }, py::arg("name"));
  m.def("beta_of", &beta_of, py::arg("dist"));

  py::class_<GeneratedInstance>(m, "Instance")
      .def_property_readonly("n", [](const GeneratedInstance& i) { return i.formula.n; })
      .def_property_readonly("m", [](const GeneratedInstance& i) { return i.formula.m(); })
      .def_property_readonly("clauses", [](const GeneratedInstance& i) { return to_codes(i.formula); })
      .def_property_readonly("solution", [](const GeneratedInstance& i) { return to_bools(i.solution); })
      .def_property_readonly("home", [](const GeneratedInstance& i) {
        return std::vector<Community>(i.partition.home.begin() + 1, i.partition.home.end());
      })
      .def_property_readonly("memberships", [](const GeneratedInstance& i) {
        return std::vector<std::set<Community>>(i.partition.v_to_cs.begin() + 1, i.partition.v_to_cs.end());
      })
      .def_property_readonly("seed", [](const GeneratedInstance& i) { return i.params.seed; })
      .def("stats", [](const GeneratedInstance& i) { return stats_dict(instance_stats(i)); })
      .def("satisfied_by_solution", [](const GeneratedInstance& i) { return evaluate(i.formula, i.solution).satisfied; })
      .def("to_dimacs", [](const GeneratedInstance& i, bool with_solution) { return write_dimacs(i, with_solution); },
           py::arg("include_solution") = false)
      .def("metadata_json", [](const GeneratedInstance& i, bool with_solution) { return write_metadata(i, with_solution); },
           py::arg("include_solution") = true);

  m.def(
      "generate",
      [](Var n, double r, Community c, double p, double alpha, std::optional<double> beta,
         std::optional<ClauseDistribution> dist, std::uint64_t seed, bool no_duplicate_clauses) {
        GeneratorParams params;
        params.n = n;
        params.r = r;
        params.c = c;
        params.p = p;
        params.alpha = alpha;
        if (dist && beta) fail(ErrorKind::InvalidParameters, "give either beta or dist, not both");
        if (dist) params.dist = *dist;
        if (beta) params.dist = midpoint_params(*beta);
        params.seed = seed;
        params.no_duplicate_clauses = no_duplicate_clauses;
        return generate_formula(params);
      },
      py::arg("n") = 500, py::arg("r") = 4.5, py::arg("c") = 20, py::arg("p") = 0.3, py::arg("alpha") = 1.0,
      py::arg("beta") = py::none(), py::arg("dist") = py::none(), py::arg("seed") = 0,
      py::arg("no_duplicate_clauses") = false);

  m.def(
      "read_dimacs",
      [](const std::string& text) {
        const auto doc = read_dimacs(text);
        return py::make_tuple(doc.formula.n, to_codes(doc.formula));
      },
      py::arg("text"), "Returns (n, clauses) with clauses as lists of signed literals.");
  m.def("write_dimacs", [](Var n, const Codes& clauses) { return write_dimacs(from_codes(n, clauses)); },
        py::arg("n"), py::arg("clauses"));

  m.def("modularity",
        [](Var n, const Codes& clauses, const std::vector<Community>& community_of) {
          std::vector<Community> labels{0};
          labels.insert(labels.end(), community_of.begin(), community_of.end());
          return modularity(build_vig(from_codes(n, clauses)), labels);
        },
        py::arg("n"), py::arg("clauses"), py::arg("community_of"),
        "Modularity of the variable incidence graph; community_of[i] is the community of variable i + 1.");

  m.def(
      "dpll_solve",
      [](Var n, const Codes& clauses, std::uint64_t max_decisions) {
        return outcome_dict(dpll_solve(from_codes(n, clauses), {max_decisions, 0.0}));
      },
      py::arg("n"), py::arg("clauses"), py::arg("max_decisions") = UINT64_MAX);
  m.def(
      "walksat_probe",
      [](Var n, const Codes& clauses, double noise, std::uint64_t max_flips, std::uint64_t seed) {
        return outcome_dict(walksat_probe(from_codes(n, clauses), {noise, max_flips, seed, 0.0}));
      },
      py::arg("n"), py::arg("clauses"), py::arg("noise") = 0.5, py::arg("max_flips") = 10'000'000,
      py::arg("seed") = 0);
  m.def("brute_force_count", [](Var n, const Codes& clauses) { return brute_force_count(from_codes(n, clauses)); },
        py::arg("n"), py::arg("clauses"));
}
