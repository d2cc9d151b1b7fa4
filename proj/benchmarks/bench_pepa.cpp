// Microbenchmarks for the hot paths: state-space derivation, partition
// refinement, exact steady-state solving, brute-force enumeration and the
// security decision procedure. Models are built from deterministic text so
// every run measures the same work.

#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "pepa/ctmc.hpp"
#include "pepa/equivalence.hpp"
#include "pepa/oracle.hpp"
#include "pepa/parser.hpp"
#include "pepa/security.hpp"
#include "pepa/semantics.hpp"

namespace {

using namespace pepa;

ModelEnv must_parse(const std::string& text) {
  ParseResult r = parse_model(text);
  if (!r.env || !validate(*r.env).empty())
    throw std::runtime_error("benchmark model is invalid");
  return std::move(*r.env);
}

// Birth-death chain with n+1 states: arrivals at rate 1, service at rate 2.
std::string chain_text(int n) {
  std::ostringstream out;
  out << "Q0 = (a,1).Q1;\n";
  for (int i = 1; i < n; ++i)
    out << "Q" << i << " = (a,1).Q" << (i + 1) << " + (s,2).Q" << (i - 1)
        << ";\n";
  out << "Q" << n << " = (s,2).Q" << (n - 1) << ";\n";
  out << "system Q0;\n";
  return out.str();
}

// Two chains synchronising on arrivals: product-shaped state space.
std::string composed_text(int n, int m) {
  std::ostringstream out;
  for (int i = 0; i < n; ++i)
    out << "C" << i << " = (a,1).C" << (i + 1) % n << " + (b,3).C" << i
        << ";\n";
  for (int i = 0; i < m; ++i)
    out << "D" << i << " = (a,2).D" << (i + 1) % m << " + (c,1).D" << i
        << ";\n";
  out << "system C0 <a> D0;\n";
  return out.str();
}

// Symmetric fork ladder: heavy block merging for the refiner.
std::string ladder_text(int n) {
  std::ostringstream out;
  out << "S = ";
  for (int i = 0; i < n; ++i)
    out << (i ? " + " : "") << "(a,1).L" << i;
  out << ";\n";
  for (int i = 0; i < n; ++i) out << "L" << i << " = (b,2).S;\n";
  out << "system S;\n";
  return out.str();
}

void BM_derive(benchmark::State& state) {
  ModelEnv env = must_parse(
      composed_text(static_cast<int>(state.range(0)), 5));
  for (auto _ : state) {
    DerivationGraph g = derive(env);
    benchmark::DoNotOptimize(g.state_count());
  }
}
BENCHMARK(BM_derive)->Arg(4)->Arg(8)->Arg(16);

void BM_coarsest(benchmark::State& state) {
  ModelEnv env = must_parse(
      composed_text(static_cast<int>(state.range(0)), 5));
  AnalysisGraph g(derive(env));
  for (auto _ : state) {
    Partition pi = coarsest(g, EquivalenceKind::weak_exact());
    benchmark::DoNotOptimize(pi.block_count());
  }
}
BENCHMARK(BM_coarsest)->Arg(4)->Arg(8)->Arg(16);

void BM_steady(benchmark::State& state) {
  ModelEnv env = must_parse(chain_text(static_cast<int>(state.range(0))));
  DerivationGraph g = derive(env);
  for (auto _ : state) {
    SteadyState pi = steady_state(generator(g), g);
    benchmark::DoNotOptimize(pi.pi.size());
  }
}
BENCHMARK(BM_steady)->Arg(8)->Arg(32)->Arg(64);

void BM_oracle(benchmark::State& state) {
  ModelEnv env = must_parse(ladder_text(static_cast<int>(state.range(0))));
  AnalysisGraph g(derive(env));
  for (auto _ : state) {
    Partition pi = largest_by_enumeration(g, EquivalenceKind::weak_exact());
    benchmark::DoNotOptimize(pi.block_count());
  }
}
BENCHMARK(BM_oracle)->Arg(4)->Arg(6);

void BM_epsni(benchmark::State& state) {
  ModelEnv env = must_parse(
      "P = (a,1).P1 + (h,2).P;\n"
      "P1 = (b,3).P + (h,2).P1;\n"
      "high {h};\n"
      "system P;\n");
  for (auto _ : state) {
    SecurityVerdict v = check_epsni(env);
    benchmark::DoNotOptimize(v.secure);
  }
}
BENCHMARK(BM_epsni);

}  // namespace

BENCHMARK_MAIN();
