// Driver layer: credible-compilation pipeline, timing breakdown with the
// trimmed-mean protocol, seeded random program generation, bug-injection
// mutation, and the fuzz loop that exercises checker soundness.
#pragma once

#include <functional>
#include <random>

#include "tacc/cert.hpp"
#include "tacc/interp.hpp"

namespace tacc {

enum class PassKind { Cp, UceDae, Uce, Dae };

std::string pass_name(PassKind k);                      // "cp", "uce-dae", "uce", "dae"
std::optional<PassKind> pass_from_name(std::string_view s);

PassResult run_pass(PassKind k, const Program& p);
Certificate gen_cert_for(PassKind k, const PassResult& r);

enum class PipelineMode { Cc, Plain };

// Durations in milliseconds, bracketed so opt excludes gen and chk; `wall`
// spans the whole stage.
struct PhaseTimings {
  std::string pass;
  double opt_ms = 0;
  double gen_ms = 0;
  double chk_ms = 0;
  double wall_ms = 0;
};

struct PipelineOptions {
  PipelineMode mode = PipelineMode::Cc;
  CheckOptions check;
  // Test hook: corrupts the generated certificate before checking, to
  // exercise the discard path.
  std::function<void(PassKind, Certificate&)> tamper;
};

struct PipelineOutcome {
  Program program;                // final program
  std::vector<Verdict> verdicts;  // one per pass in cc mode
  std::vector<PhaseTimings> timings;
};

// In cc mode a Rejected certificate discards that pass's output and the
// pipeline continues from the pre-pass program.
PipelineOutcome pipeline(const Program& p, const std::vector<PassKind>& passes,
                         const PipelineOptions& opts = {});

// Benchmarking ----------------------------------------------------------------

struct PhaseStat {
  double mean_ms = 0;
  double stddev_ms = 0;  // sample stddev, n-1 denominator; 0 when one sample
  double rsd_pct = 0;
  size_t reps = 0;
  size_t retained = 0;  // reps - 2: one min and one max dropped
};

// One min and one max dropped, statistics over the remaining samples.
PhaseStat trimmed_stats(std::vector<double> samples_ms);

struct BenchPassRow {
  std::string pass;
  PhaseStat opt, gen, chk;
};

struct BenchRow {
  std::string kernel;
  std::vector<BenchPassRow> passes;
  bool chk_dominates = false;  // total chk mean exceeds both opt and gen totals
};

struct BenchReport {
  std::vector<BenchRow> rows;
  size_t reps = 0;
  std::vector<std::string> skipped;  // unreadable kernel files
};

// Loads every .knl under `corpus_dir`, runs the cc pipeline (cp, then the
// combined uce-dae) reps times per kernel after one warm-up, and reports
// trimmed means. Single-threaded to keep timer noise down.
Result<BenchReport> bench(const std::string& corpus_dir, size_t reps);

std::string render_bench_table(const BenchReport& r);
std::string render_bench_json(const BenchReport& r);

// Random programs and mutation --------------------------------------------------

// Deterministic in `seed`; always validates cleanly. Mixes straight-line
// arithmetic, bounded counter loops, arrays, both-arms-equal branches, dead
// assignments and unreachable regions; reachable self loops are rare enough
// that >= 95% of seeds halt under the default fuel.
Program gen_random_program(uint64_t seed, size_t size_budget);

Inputs random_inputs(const Program& p, std::mt19937_64& rng);

// First divergence found over `n_inputs` random input vectors (one vector if
// the program has no inputs). Rising OutOfFuel disagreements are retried at
// a larger fuel before being reported.
std::optional<std::string> differential(const Program& src, const Program& tgt, size_t n_inputs,
                                        uint64_t seed, size_t fuel);

struct Mutation {
  PassResult result;
  Certificate cert;
  std::string site;
};

enum class MutationClass {
  Any,            // program and certificate mutations
  SemanticsOnly,  // literal flips / branch retargets on reachable instructions
};

Mutation mutate(const PassResult& r, const Certificate& cert, uint64_t seed,
                MutationClass cls = MutationClass::Any);

// Fuzzing -----------------------------------------------------------------------

struct FuzzReport {
  size_t trials = 0;
  size_t accepted_honest = 0;
  size_t rejected_mutant = 0;
  size_t accepted_mutant_equivalent = 0;
  size_t soundness_violations = 0;
  std::vector<std::string> violation_sites;
  std::vector<std::string> honest_failures;
};

struct FuzzOptions {
  CheckOptions check;
  size_t diff_inputs = 50;
  size_t program_budget = 24;
};

// Per trial: random program, random pass, honest certificate must be
// Accepted; then one mutation, and any mutant the checker accepts must show
// no divergence under differential interpretation.
FuzzReport fuzz(size_t trials, uint64_t seed, const FuzzOptions& opts = {});

std::string render_fuzz_text(const FuzzReport& r);
std::string render_fuzz_json(const FuzzReport& r);

size_t default_fuel_from_env();  // TACC_FUEL override, else kDefaultFuel

}  // namespace tacc
