#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "galois_csp/clones.hpp"
#include "galois_csp/extensions.hpp"
#include "galois_csp/formula.hpp"
#include "galois_csp/harness.hpp"
#include "galois_csp/instance.hpp"
#include "galois_csp/reductions.hpp"
#include "galois_csp/relation.hpp"
#include "galois_csp/solvers.hpp"

namespace py = pybind11;
using namespace gcsp;

namespace {

py::dict report_dict(const ReductionReport& r) {
  py::dict d;
  d["step"] = r.step;
  d["vars_in"] = r.vars_in;
  d["vars_out"] = r.vars_out;
  d["constraints_in"] = r.constraints_in;
  d["constraints_out"] = r.constraints_out;
  d["cv_constant"] = r.cv_constant;
  d["notes"] = r.notes;
  d["d"] = r.d;
  d["k1"] = r.k1;
  d["k2"] = r.k2;
  d["L"] = r.L;
  return d;
}

py::tuple reduced_pair(const Reduced& r) { return py::make_tuple(r.instance, report_dict(r.report)); }

Language language_from(int k, const std::map<std::string, Relation>& rels) {
  Language l;
  l.k = k;
  for (const auto& [name, r] : rels) l.add(name, r);
  return l;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-domain CSP reductions, saturation and solvers";

  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_ValueError);

  py::class_<Relation>(m, "Relation")
      .def(py::init<int, int, std::vector<Tuple>>(), py::arg("k"), py::arg("arity"), py::arg("tuples"))
      .def_property_readonly("domain", &Relation::domain)
      .def_property_readonly("arity", &Relation::arity)
      .def_property_readonly("tuples", &Relation::tuples)
      .def("__len__", &Relation::size)
      .def("__contains__", &Relation::contains)
      .def("column", &Relation::column)
      .def("__eq__", &Relation::operator==)
      .def("__hash__", [](const Relation& r) { return py::hash(py::str(to_string(r))); })
      .def("__repr__", [](const Relation& r) { return "Relation(" + to_string(r) + ")"; })
      .def("matrix", &to_matrix_string);

  m.def("from_rows", &from_rows, py::arg("k"), py::arg("rows"));
  m.def("from_columns", &from_columns, py::arg("k"), py::arg("rows"), py::arg("columns"));
  m.def("project", &project);
  m.def("choice_class", &choice_class);
  m.def("make_rd", &make_rd, py::arg("k"));
  m.def("make_rb", &make_rb);
  m.def("make_rnn", &make_rnn);
  m.def("read_relation", [](const std::string& text) {
    std::istringstream is(text);
    return read_relation(is);
  });
  m.def("write_relation", [](const std::string& name, const Relation& r) {
    std::ostringstream os;
    write_relation(os, name, r);
    return os.str();
  });

  m.def("detect_rb_extension", [](const Relation& r) -> py::object {
    auto w = detect_rb_extension(r);
    if (!w) return py::none();
    py::dict d;
    d["a"] = static_cast<int>(w->a);
    d["b"] = static_cast<int>(w->b);
    d["rows"] = w->rows;
    d["indices"] = w->indices;
    return d;
  });
  m.def("is_saturated", [](const Relation& r) {
    auto s = is_saturated(r);
    py::dict d;
    d["saturated"] = s.saturated;
    d["column"] = s.column;
    d["missing"] = s.missing;
    return d;
  });
  m.def("saturate", [](const Relation& r) {
    auto s = saturate(r);
    py::list map;
    for (const auto& e : s.map) map.append(py::make_tuple(e.col, e.from, e.tau));
    return py::make_tuple(s.relation, map);
  });
  m.def("equal_up_to_column_permutation", &equal_up_to_column_permutation);
  m.def("example_r", &example_r);
  m.def("example_r_prime", &example_r_prime);
  m.def("example_saturated", &example_saturated);

  py::class_<PPFormula>(m, "PPFormula")
      .def_readonly("name", &PPFormula::name)
      .def_readonly("num_free", &PPFormula::num_free)
      .def_readonly("num_bound", &PPFormula::num_bound)
      .def("__str__", &format_formula);
  m.def("parse_formula", &parse_formula);
  m.def("evaluate",
        [](const PPFormula& phi, int k, const std::map<std::string, Relation>& rels) {
          return evaluate(phi, language_from(k, rels));
        },
        py::arg("formula"), py::arg("k"), py::arg("relations"));
  m.def("canonical_qfpp", [](const Relation& r, const std::map<std::string, Relation>& rels) {
    return canonical_qfpp(r, language_from(r.domain(), rels));
  });
  m.def("violating_partial_op", [](const Relation& r, const std::map<std::string, Relation>& rels) -> py::object {
    auto w = violating_partial_op(r, language_from(r.domain(), rels));
    if (!w) return py::none();
    py::dict d;
    d["arity"] = w->op.arity();
    d["tuples"] = w->tuples;
    d["image"] = w->image;
    return d;
  });
  m.def("qfpp_definable", [](const Relation& r, const std::map<std::string, Relation>& rels) {
    return qfpp_definable(r, language_from(r.domain(), rels));
  });

  py::class_<Instance>(m, "Instance")
      .def_readonly("k", &Instance::k)
      .def_readonly("num_vars", &Instance::num_vars)
      .def_readonly("relation_names", &Instance::rel_names)
      .def_property_readonly("constraints",
                             [](const Instance& in) {
                               std::vector<std::pair<std::string, std::vector<int>>> out;
                               for (const auto& c : in.constraints) out.emplace_back(in.rel_names[c.rel], c.vars);
                               return out;
                             })
      .def("degrees", &Instance::degrees)
      .def("satisfied_by", &Instance::satisfied_by)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__str__", &to_text);
  m.def("instance_from_text", &from_text);
  m.def("is_canonical_unsat", &is_canonical_unsat);

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("status", [](const SolveResult& r) { return to_string(r.status); })
      .def_readonly("model", &SolveResult::model)
      .def_readonly("node_count", &SolveResult::node_count)
      .def_readonly("time_ms", &SolveResult::time_ms)
      .def_readonly("warnings", &SolveResult::warnings);
  m.def("brute_force", [](const Instance& in, std::uint64_t budget) {
    SolveOptions o;
    o.node_budget = budget;
    return brute_force(in, o);
  }, py::arg("instance"), py::arg("node_budget") = UINT64_MAX);
  m.def("branch_generic", [](const Instance& in) { return branch_generic(in); });
  m.def("branch_rd", [](const Instance& in, bool eager) {
    RdOptions o;
    o.eager_conflicts = eager;
    return branch_rd(in, o);
  }, py::arg("instance"), py::arg("eager") = true);
  m.def("count_solutions", &count_solutions);

  m.def("generate",
        [](int k, int n, int m_, const std::map<std::string, Relation>& rels, int B, int unary, bool planted,
           bool distinct, std::uint64_t seed) {
          GeneratorConfig g;
          g.k = k;
          g.n = n;
          g.m = m_;
          g.B = B;
          g.unary = unary;
          g.planted = planted;
          g.distinct = distinct;
          g.seed = seed;
          return generate(g, std::vector<std::pair<std::string, Relation>>(rels.begin(), rels.end()));
        },
        py::arg("k"), py::arg("n"), py::arg("m"), py::arg("relations"), py::arg("B") = 0, py::arg("unary") = 0,
        py::arg("planted") = false, py::arg("distinct") = false, py::arg("seed") = 0);
  m.def("generate_adversarial_rd", &generate_adversarial_rd, py::arg("k"), py::arg("n"), py::arg("seed"));

  m.def("dedup_3choice", [](const Instance& in, const Relation& r) { return reduced_pair(dedup_3choice(in, r)); });
  m.def("eliminate_unary", [](const Instance& in) { return reduced_pair(eliminate_unary(in)); });
  m.def("lift_rd", [](const Instance& in, const Relation& r) { return reduced_pair(lift_rd(in, r)); });
  m.def("reduce_easiest", [](const Instance& in, const std::map<std::string, Relation>& rels) {
    return reduced_pair(reduce_easiest(in, language_from(in.k, rels)));
  });

  m.def("equisat_steps", &equisat_steps);
  m.def("check_equisat",
        [](const std::string& step, int k, int count, int n_min, int n_max, std::uint64_t seed) {
          EquisatConfig c;
          c.k = k;
          c.count = count;
          c.n_min = n_min;
          c.n_max = n_max;
          c.seed = seed;
          auto r = check_equisat(step, c);
          py::dict d;
          d["step"] = r.step;
          d["k"] = r.k;
          d["total"] = r.total;
          d["passed"] = r.passed;
          d["failed"] = r.failed;
          d["errors"] = r.errors;
          d["sat_inputs"] = r.sat_inputs;
          d["max_delta"] = r.max_delta;
          d["failures"] = r.failures;
          d["notes"] = r.notes;
          return d;
        },
        py::arg("step"), py::arg("k"), py::arg("count") = 100, py::arg("n_min") = 2, py::arg("n_max") = 8,
        py::arg("seed") = 1);
  m.def("bench_scaling",
        [](const std::vector<int>& ks, const std::vector<int>& ns, const std::vector<std::uint64_t>& seeds) {
          BenchConfig c;
          c.ks = ks;
          c.ns = ns;
          c.seeds = seeds;
          auto r = bench_scaling(c);
          py::list rows, fits;
          for (const auto& row : r.rows) {
            py::dict d;
            d["k"] = row.k;
            d["n"] = row.n;
            d["seed"] = row.seed;
            d["nodes"] = row.nodes;
            d["status"] = row.status;
            d["censored"] = row.censored;
            rows.append(d);
          }
          for (const auto& f : r.fits) {
            py::dict d;
            d["k"] = f.k;
            d["valid"] = f.valid;
            d["slope_log3"] = f.slope_log3;
            d["slope_bits"] = f.slope_bits;
            d["C"] = f.C;
            d["floored_exponent"] = f.floored_exponent;
            d["unfloored_exponent"] = f.unfloored_exponent;
            fits.append(d);
          }
          return py::make_tuple(rows, fits);
        },
        py::arg("ks"), py::arg("ns"), py::arg("seeds"));
}
