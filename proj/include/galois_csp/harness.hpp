#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "galois_csp/instance.hpp"
#include "galois_csp/reductions.hpp"

namespace gcsp {

struct GeneratorConfig {
  int k = 2;
  int n = 4;
  int m = 0;
  int B = 0;       // degree bound (constraints per variable); 0 = none
  int unary = 0;   // number of random unary constraints appended
  bool planted = false;  // keep a hidden model satisfying every constraint
  bool distinct = false; // no variable repeated inside a constraint
  std::uint64_t seed = 0;
};

// Constraint relations are drawn uniformly from `rels`, variable tuples
// uniformly from x1..xn. Planting picks the satisfied tuple first, then
// compatible variables. The degree bound is enforced by rejection;
// exhausting the retries raises std::invalid_argument.
Instance generate(const GeneratorConfig& cfg, const std::vector<std::pair<std::string, Relation>>& rels);
Instance generate(const GeneratorConfig& cfg, const Relation& r, const std::string& name = "R");

// Instances over make_rd(k) whose anchored search tree is complete: the first
// constraint holds k fresh variables, every later one holds k-1 fresh
// variables plus k^2 positions (outside the 3-choice ones) taken by earlier
// variables. Every fresh variable fills exactly k^2 positions.
Instance generate_adversarial_rd(int k, int n, std::uint64_t seed);

// Parallelism from GALOIS_CSP_THREADS (default: hardware concurrency).
int thread_count();
void parallel_for(int count, const std::function<void(int)>& body, int threads = 0);

struct EquisatConfig {
  int k = 2;
  int count = 1000;
  int n_min = 2, n_max = 8;
  int m_min = 1, m_max = 4;
  std::uint64_t seed = 1;
  bool verify = true;   // false: only collect variable counts
  int threads = 0;
};

struct EquisatReport {
  std::string step;
  int k = 0;
  int total = 0, passed = 0, failed = 0, errors = 0;
  int sat_inputs = 0;
  long max_delta = 0;   // max over the batch of vars_out - vars_in
  long max_lv_excess = 0;   // lv only: max of vars_out - bound (<= 0 expected)
  long max_degree_excess = 0;  // lv with efpp: max degree - 3L
  bool supported = true;
  std::vector<std::string> failures;  // offending instances, text form
  std::vector<std::string> notes;
};

std::vector<std::string> equisat_steps();
EquisatReport check_equisat(const std::string& step, const EquisatConfig& cfg);

struct SolverCheckConfig {
  int k = 2;
  int count = 1000;
  int n_min = 1, n_max = 8;
  int m_min = 1, m_max = 4;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Compares branch_rd (instances over make_rd(k) plus unary constraints) and
// branch_generic (random 3-tuple relations of arity up to 4 plus unary
// constraints) with brute_force. Half of each batch is planted.
struct SolverCheckReport {
  int k = 0;
  int total = 0;
  int rd_disagreements = 0, generic_disagreements = 0;
  int undecided = 0;  // oracle or solver ran out of budget
  int sat_inputs = 0;
  std::vector<std::string> failures;
};

SolverCheckReport check_solvers(const SolverCheckConfig& cfg);

struct BenchConfig {
  std::vector<int> ks{5, 6};
  std::vector<int> ns{10, 12, 14, 16, 18, 20, 22, 24};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double budget_ms = 0;
  std::uint64_t node_budget = 50'000'000;
  bool eager = false;
  int threads = 0;
};

struct BenchRow {
  int k = 0, n = 0;
  std::uint64_t seed = 0;
  std::uint64_t nodes = 0;
  std::string status;
  double time_ms = 0;
  bool censored = false;
};

struct ExponentFit {
  int k = 0;
  int distinct_n = 0;
  bool valid = false;         // at least four distinct n
  double slope_log3 = 0;      // least-squares slope of log3(nodes) against n
  double intercept_log3 = 0;
  double slope_bits = 0;      // slope_log3 * log2(3)
  double floored_exponent = 0;    // 1 / floor(k(k-1)(k-2)/k^2), in log3 units
  double unfloored_exponent = 0;  // k^2 / (k(k-1)(k-2))
  double C = 0;               // max nodes / 3^(n * floored_exponent)
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<ExponentFit> fits;
};

BenchResult bench_scaling(const BenchConfig& cfg);
ExponentFit fit_exponent(int k, const std::vector<BenchRow>& rows);
// Without timing the output depends only on the configuration.
void write_bench_csv(std::ostream& os, const BenchResult& r, bool with_time = true);
void write_fits_csv(std::ostream& os, const BenchResult& r);

}  // namespace gcsp
