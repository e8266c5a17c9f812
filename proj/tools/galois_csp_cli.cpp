#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "galois_csp/clones.hpp"
#include "galois_csp/extensions.hpp"
#include "galois_csp/formula.hpp"
#include "galois_csp/harness.hpp"
#include "galois_csp/instance.hpp"
#include "galois_csp/reductions.hpp"
#include "galois_csp/relation.hpp"
#include "galois_csp/solvers.hpp"

using json = nlohmann::ordered_json;
using namespace gcsp;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double budget_ms = 0;
  std::string out;
  std::string format = "json";
};

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return is;
}

// Writes to `path`, or stdout for an empty path or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

std::pair<std::string, Relation> load_relation(const std::string& path) {
  auto is = open_in(path);
  return read_relation(is);
}

Language load_language(const std::string& path) {
  auto is = open_in(path);
  return read_language(is);
}

std::map<std::string, PPFormula> load_defs(const std::string& path) {
  auto is = open_in(path);
  std::map<std::string, PPFormula> defs;
  for (auto& f : parse_formulas(is)) defs[f.name] = f;
  return defs;
}

// The unique relation of arity >= 2 used by the instance's constraints.
Relation main_relation(const Instance& inst) {
  int found = -1;
  for (const auto& c : inst.constraints)
    if (inst.rels[c.rel].arity() >= 2) {
      if (found >= 0 && found != c.rel) throw std::runtime_error("instance uses more than one non-unary relation");
      found = c.rel;
    }
  if (found < 0) throw std::runtime_error("instance has no non-unary constraint");
  return inst.rels[found];
}

json report_json(const ReductionReport& r) {
  json j;
  j["step"] = r.step;
  j["vars_in"] = r.vars_in;
  j["vars_out"] = r.vars_out;
  j["constraints_in"] = r.constraints_in;
  j["constraints_out"] = r.constraints_out;
  j["cv_constant"] = r.cv_constant;
  j["notes"] = r.notes;
  if (r.d > 0) {
    j["d"] = r.d;
    j["k1"] = r.k1;
    j["k2"] = r.k2;
    j["L"] = r.L;
  }
  return j;
}

json witness_json(const RBWitness& w) {
  json j;
  j["a"] = w.a;
  j["b"] = w.b;
  j["rows"] = json::array({w.rows[0] + 1, w.rows[1] + 1, w.rows[2] + 1});
  json idx = json::array();
  for (int i : w.indices) idx.push_back(i + 1);
  j["indices"] = idx;
  return j;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

LiftOrder parse_order(const std::string& s) {
  if (s == "drop_then_add") return LiftOrder::drop_then_add;
  if (s == "add_then_drop") return LiftOrder::add_then_drop;
  throw std::runtime_error("unknown order " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"galois_csp: constraint satisfaction reductions, solvers and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--budget-ms", g.budget_ms, "time budget per solve in milliseconds (0 = none)");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  GeneratorConfig gc;
  std::string gen_rel;
  bool adversarial = false;
  auto* gen_k = gen->add_option("--k", gc.k, "domain size")->default_val(2);
  gen->add_option("--n", gc.n, "number of variables")->default_val(4);
  gen->add_option("--m", gc.m, "number of constraints")->default_val(2);
  gen->add_option("--B", gc.B, "degree bound (0 = none)");
  gen->add_option("--unary", gc.unary, "number of random unary constraints");
  gen->add_flag("--planted", gc.planted, "keep a hidden model");
  gen->add_flag("--distinct", gc.distinct, "no repeated variable inside a constraint");
  gen->add_option("--rel", gen_rel, "relation file (default: R_D of the domain)");
  gen->add_flag("--adversarial", adversarial, "anchored worst-case family over R_D (ignores --m)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string solver = "oracle", solve_in;
  std::uint64_t node_budget = 0;
  bool literal_rd = false;
  solve->add_option("--solver", solver)->check(CLI::IsMember({"oracle", "generic", "rd"}));
  solve->add_option("--in", solve_in)->required();
  solve->add_option("--node-budget", node_budget, "0 = unlimited");
  solve->add_flag("--lazy", literal_rd, "rd only: examine clashes at the leaves");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "apply one reduction step");
  std::string step, red_in, red_rel, red_defs, red_report, order = "drop_then_add", fmap;
  bool literal = false;
  reduce->add_option("--step", step)->required();
  reduce->add_option("--in", red_in)->required();
  reduce->add_option("--rel", red_rel, "target relation, or the language for qfpp_inline/lv/easiest");
  reduce->add_option("--defs", red_defs, "formula file");
  reduce->add_option("--report", red_report, "report JSON file");
  reduce->add_option("--order", order)->check(CLI::IsMember({"drop_then_add", "add_then_drop"}));
  reduce->add_flag("--literal", literal, "drop without the separating constant");
  reduce->add_option("--map", fmap, "lv_reduce_3sat: comma separated image of each tuple of F");

  // saturate
  auto* sat = app.add_subcommand("saturate", "saturate a 3-tuple relation");
  std::string sat_rel, sat_map;
  sat->add_option("--rel", sat_rel)->required();
  sat->add_option("--map", sat_map, "write the saturation map here");

  // detect
  auto* det = app.add_subcommand("detect", "look for an R^B-extension pattern");
  std::string det_rel;
  det->add_option("--rel", det_rel)->required();

  // qfpp-check
  auto* qc = app.add_subcommand("qfpp-check", "decide qfpp-definability of a relation over a language");
  std::string qc_rel, qc_lang;
  qc->add_option("--rel", qc_rel)->required();
  qc->add_option("--lang", qc_lang)->required();

  // check-equisat
  auto* ce = app.add_subcommand("check-equisat", "batch equisatisfiability check of reduction steps");
  EquisatConfig ec;
  std::vector<std::string> ce_steps;
  std::vector<int> ce_ks{2, 3};
  ce->add_option("--step", ce_steps, "steps, comma separated (default: all)")->delimiter(',');
  ce->add_option("--k", ce_ks, "domains, comma separated")->delimiter(',');
  ce->add_option("--count", ec.count);
  ce->add_option("--n-min", ec.n_min);
  ce->add_option("--n-max", ec.n_max);
  ce->add_option("--m-min", ec.m_min);
  ce->add_option("--m-max", ec.m_max);
  ce->add_flag("!--no-verify", ec.verify, "skip the oracle, only record variable counts");

  // bench
  auto* bench = app.add_subcommand("bench", "node counts of branch_rd on adversarial instances");
  BenchConfig bc;
  std::vector<std::uint64_t> seeds;
  std::string fits_out;
  bool no_time = false;
  bench->add_option("--k", bc.ks, "domains, comma separated")->delimiter(',');
  bench->add_option("--n", bc.ns, "variable counts, comma separated")->delimiter(',');
  bench->add_option("--seeds", seeds, "seeds, comma separated")->delimiter(',');
  bench->add_option("--node-budget", bc.node_budget);
  bench->add_flag("--eager", bc.eager, "prune clashing rows while branching");
  bench->add_option("--fits", fits_out, "write the exponent fits (CSV) here");
  bench->add_flag("--no-time", no_time, "omit wall-clock timings so output is reproducible");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gc.seed = g.seed;
      Instance inst;
      if (adversarial) inst = generate_adversarial_rd(gc.k, gc.n, g.seed);
      else if (gen_rel.empty()) inst = generate(gc, make_rd(gc.k), "rd");
      else {
        auto [name, r] = load_relation(gen_rel);
        if (gen_k->count() && gc.k != r.domain())
          throw std::invalid_argument("--k " + std::to_string(gc.k) + " differs from the relation domain " +
                                      std::to_string(r.domain()));
        gc.k = r.domain();
        inst = generate(gc, r, name);
      }
      emit(g.out, to_text(inst));
    } else if (*solve) {
      Instance inst = read_instance_file(solve_in);
      SolveOptions so;
      if (node_budget > 0) so.node_budget = node_budget;
      so.time_budget_ms = g.budget_ms;
      SolveResult r;
      if (solver == "oracle") r = brute_force(inst, so);
      else if (solver == "generic") r = branch_generic(inst, so);
      else {
        RdOptions ro;
        ro.solve = so;
        ro.eager_conflicts = !literal_rd;
        r = branch_rd(inst, ro);
      }
      json j;
      j["status"] = to_string(r.status);
      j["node_count"] = r.node_count;
      j["time_ms"] = r.time_ms;
      j["model"] = r.model ? json(std::vector<int>(r.model->begin(), r.model->end())) : json(nullptr);
      if (!r.warnings.empty()) j["warnings"] = r.warnings;
      emit(g.out, j.dump(2) + "\n");
    } else if (*reduce) {
      Instance inst = read_instance_file(red_in);
      CvOptions co;
      co.literal = literal;
      Reduced res;
      auto need_rel = [&] {
        if (red_rel.empty()) throw std::runtime_error("step " + step + " needs --rel");
        return load_relation(red_rel).second;
      };
      auto need_lang = [&] {
        if (red_rel.empty()) throw std::runtime_error("step " + step + " needs --rel with the language");
        return load_language(red_rel);
      };
      if (step == "qfpp_inline") {
        if (red_defs.empty()) throw std::runtime_error("qfpp_inline needs --defs");
        res = qfpp_inline(inst, load_defs(red_defs), need_lang());
      } else if (step == "dedup_3choice") {
        res = dedup_3choice(inst, red_rel.empty() ? main_relation(inst) : need_rel());
      } else if (step == "drop_3choice_args") {
        res = drop_3choice_args(inst, main_relation(inst), need_rel(), co);
      } else if (step == "add_2choice_args") {
        res = add_2choice_args(inst, main_relation(inst), need_rel(), co);
      } else if (step == "lift_rd") {
        res = lift_rd(inst, need_rel(), parse_order(order), co);
      } else if (step == "eliminate_unary") {
        res = eliminate_unary(inst);
      } else if (step == "lv_reduce_3sat") {
        if (red_defs.empty()) throw std::runtime_error("lv_reduce_3sat needs --defs with definitions F and rnn");
        Language gamma = need_lang();
        auto defs = load_defs(red_defs);
        Interpretation in;
        in.def_F = defs.at("F");
        in.preimage_defs["rnn"] = defs.at("rnn");
        in.d = in.def_F.num_free;
        in.F = evaluate(in.def_F, gamma);
        for (int v : parse_int_list(fmap)) in.f.push_back(static_cast<Value>(v));
        in.e_size = 2;
        res = lv_reduce_3sat(inst, gamma, in);
      } else if (step == "reduce_easiest") {
        EasiestOptions eo;
        eo.order = parse_order(order);
        if (!red_defs.empty()) {
          auto defs = load_defs(red_defs);
          if (defs.size() != 1) throw std::runtime_error("reduce_easiest expects exactly one definition");
          eo.extension = defs.begin()->second;
        }
        res = reduce_easiest(inst, need_lang(), eo);
      } else {
        throw std::runtime_error("unknown step " + step);
      }
      emit(g.out, to_text(res.instance));
      if (!red_report.empty()) emit(red_report, report_json(res.report).dump(2) + "\n");
    } else if (*sat) {
      auto [name, r] = load_relation(sat_rel);
      auto s = saturate(r);
      std::ostringstream os;
      write_relation(os, name, s.relation);
      emit(g.out, os.str());
      if (!sat_map.empty()) {
        std::ostringstream ms;
        write_saturation_map(ms, s);
        emit(sat_map, ms.str());
      }
    } else if (*det) {
      auto [name, r] = load_relation(det_rel);
      json j;
      j["relation"] = name;
      auto w = detect_rb_extension(r);
      j["rb_extension"] = w ? witness_json(*w) : json(nullptr);
      if (r.size() == 3) {
        auto sc = is_saturated(r);
        j["saturated"] = sc.saturated;
        if (!sc.saturated) {
          j["missing_column"] = std::vector<int>(sc.missing.begin(), sc.missing.end());
          j["from_column"] = sc.column + 1;
        }
        json choice = json::array();
        for (int i = 0; i < r.arity(); ++i)
          if (choice_class(r, i) == 3) choice.push_back(i + 1);
        j["three_choice_positions"] = choice;
      }
      emit(g.out, j.dump(2) + "\n");
    } else if (*qc) {
      auto [name, r] = load_relation(qc_rel);
      Language gamma = load_language(qc_lang);
      json j;
      j["relation"] = name;
      if (r.size() <= 3) {
        auto w = violating_partial_op(r, gamma, name);
        j["qfpp_definable"] = !w.has_value();
        if (w) {
          std::ostringstream ws;
          write_witness(ws, *w);
          j["witness"] = ws.str();
        }
      }
      PPFormula def = canonical_qfpp(r, gamma);
      def.name = name;
      const bool exact = evaluate(def, gamma) == r;
      if (!j.contains("qfpp_definable")) j["qfpp_definable"] = exact;
      j["canonical_defines"] = exact;
      j["canonical_qfpp"] = format_formula(def);
      emit(g.out, j.dump(2) + "\n");
    } else if (*ce) {
      ec.seed = g.seed;
      if (ce_steps.empty()) ce_steps = equisat_steps();
      std::vector<EquisatReport> reps;
      for (int k : ce_ks)
        for (const auto& s : ce_steps) {
          ec.k = k;
          reps.push_back(check_equisat(s, ec));
        }
      std::ostringstream os;
      if (g.format == "csv") {
        os << "step,k,total,passed,failed,errors,sat_inputs,max_delta,max_lv_excess,max_degree_excess,supported\n";
        for (const auto& r : reps)
          os << r.step << "," << r.k << "," << r.total << "," << r.passed << "," << r.failed << "," << r.errors << ","
             << r.sat_inputs << "," << r.max_delta << "," << r.max_lv_excess << "," << r.max_degree_excess << ","
             << (r.supported ? 1 : 0) << "\n";
      } else {
        json arr = json::array();
        for (const auto& r : reps) {
          json j;
          j["step"] = r.step;
          j["k"] = r.k;
          j["total"] = r.total;
          j["passed"] = r.passed;
          j["failed"] = r.failed;
          j["errors"] = r.errors;
          j["sat_inputs"] = r.sat_inputs;
          j["max_delta"] = r.max_delta;
          j["max_lv_excess"] = r.max_lv_excess;
          j["max_degree_excess"] = r.max_degree_excess;
          j["supported"] = r.supported;
          j["notes"] = r.notes;
          j["failures"] = r.failures;
          arr.push_back(j);
        }
        os << arr.dump(2) << "\n";
      }
      emit(g.out, os.str());
      for (const auto& r : reps)
        if (r.failed > 0) return 2;
    } else if (*bench) {
      if (!seeds.empty()) bc.seeds = seeds;
      else bc.seeds = {g.seed, g.seed + 1, g.seed + 2};
      bc.budget_ms = g.budget_ms;
      BenchResult r = bench_scaling(bc);
      std::ostringstream os;
      if (g.format == "csv") {
        write_bench_csv(os, r, !no_time);
      } else {
        json j;
        json rows = json::array();
        for (const auto& row : r.rows) {
          json x;
          x["k"] = row.k;
          x["n"] = row.n;
          x["seed"] = row.seed;
          x["nodes"] = row.nodes;
          x["status"] = row.status;
          if (!no_time) x["time_ms"] = row.time_ms;
          x["censored"] = row.censored;
          rows.push_back(x);
        }
        json fits = json::array();
        for (const auto& f : r.fits)
          fits.push_back({{"k", f.k},
                          {"distinct_n", f.distinct_n},
                          {"valid", f.valid},
                          {"slope_log3", f.slope_log3},
                          {"slope_bits", f.slope_bits},
                          {"intercept_log3", f.intercept_log3},
                          {"C", f.C},
                          {"floored_exponent", f.floored_exponent},
                          {"unfloored_exponent", f.unfloored_exponent}});
        j["rows"] = rows;
        j["fits"] = fits;
        os << j.dump(2) << "\n";
      }
      emit(g.out, os.str());
      if (!fits_out.empty()) {
        std::ostringstream fs;
        write_fits_csv(fs, r);
        emit(fits_out, fs.str());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
