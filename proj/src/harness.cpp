#include "tacc/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tacc/frontend.hpp"
#include "json.hpp"

namespace tacc {

std::string pass_name(PassKind k) {
  switch (k) {
    case PassKind::Cp: return "cp";
    case PassKind::UceDae: return "uce-dae";
    case PassKind::Uce: return "uce";
    case PassKind::Dae: return "dae";
  }
  return "?";
}

std::optional<PassKind> pass_from_name(std::string_view s) {
  if (s == "cp") return PassKind::Cp;
  if (s == "uce-dae") return PassKind::UceDae;
  if (s == "uce") return PassKind::Uce;
  if (s == "dae") return PassKind::Dae;
  return std::nullopt;
}

PassResult run_pass(PassKind k, const Program& p) {
  switch (k) {
    case PassKind::Cp: return cp(p);
    case PassKind::UceDae: return uce_dae(p);
    case PassKind::Uce: return uce(p);
    case PassKind::Dae: return dae_fixpoint(p);
  }
  return uce(p);
}

Certificate gen_cert_for(PassKind k, const PassResult& r) {
  switch (k) {
    case PassKind::Cp: return gen_cert_cp(r);
    case PassKind::Uce: return gen_cert_uce(r);
    case PassKind::UceDae:
    case PassKind::Dae: return gen_cert_uce_dae(r);
  }
  return gen_cert_uce(r);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

PipelineOutcome pipeline(const Program& p, const std::vector<PassKind>& passes,
                         const PipelineOptions& opts) {
  PipelineOutcome out;
  out.program = p;
  for (PassKind k : passes) {
    PhaseTimings t;
    t.pass = pass_name(k);
    auto stage0 = Clock::now();

    auto opt0 = Clock::now();
    PassResult r = run_pass(k, out.program);
    t.opt_ms = ms_since(opt0);

    if (opts.mode == PipelineMode::Cc) {
      auto gen0 = Clock::now();
      Certificate cert = gen_cert_for(k, r);
      t.gen_ms = ms_since(gen0);
      if (opts.tamper) opts.tamper(k, cert);

      auto chk0 = Clock::now();
      Verdict v = check(r.before, r.after, cert, opts.check);
      t.chk_ms = ms_since(chk0);

      if (v.accepted) out.program = std::move(r.after);
      // Rejected: discard the transformation, keep the pre-pass program.
      out.verdicts.push_back(std::move(v));
    } else {
      out.program = std::move(r.after);
    }
    t.wall_ms = ms_since(stage0);
    out.timings.push_back(std::move(t));
  }
  return out;
}

// Benchmarking ----------------------------------------------------------------

PhaseStat trimmed_stats(std::vector<double> samples_ms) {
  PhaseStat s;
  s.reps = samples_ms.size();
  if (samples_ms.size() < 3) return s;
  std::sort(samples_ms.begin(), samples_ms.end());
  std::vector<double> kept(samples_ms.begin() + 1, samples_ms.end() - 1);
  s.retained = kept.size();
  double sum = 0;
  for (double v : kept) sum += v;
  s.mean_ms = sum / static_cast<double>(kept.size());
  if (kept.size() > 1) {
    double acc = 0;
    for (double v : kept) acc += (v - s.mean_ms) * (v - s.mean_ms);
    s.stddev_ms = std::sqrt(acc / static_cast<double>(kept.size() - 1));
  }
  if (s.mean_ms > 0) s.rsd_pct = 100.0 * s.stddev_ms / s.mean_ms;
  return s;
}

Result<BenchReport> bench(const std::string& corpus_dir, size_t reps) {
  namespace fs = std::filesystem;
  if (reps < 3) return Result<BenchReport>::failure("reps must be at least 3");

  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(corpus_dir, ec)) {
    if (e.path().extension() == ".knl") files.push_back(e.path());
  }
  if (ec) return Result<BenchReport>::failure("cannot read " + corpus_dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  if (files.empty()) return Result<BenchReport>::failure("no .knl kernels in " + corpus_dir);

  const std::vector<PassKind> passes{PassKind::Cp, PassKind::UceDae};
  BenchReport report;
  report.reps = reps;

  for (const fs::path& file : files) {
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    auto compiled = in ? compile_source(buf.str()) : Result<Program>::failure("unreadable");
    if (!compiled.ok()) {
      report.skipped.push_back(file.filename().string() + ": " + compiled.err);
      continue;
    }
    const Program& prog = *compiled;

    // One warm-up iteration, excluded from the samples.
    PipelineOptions opts;
    pipeline(prog, passes, opts);

    std::map<std::string, std::array<std::vector<double>, 3>> samples;
    for (size_t rep = 0; rep < reps; ++rep) {
      PipelineOutcome o = pipeline(prog, passes, opts);
      for (const PhaseTimings& t : o.timings) {
        samples[t.pass][0].push_back(t.opt_ms);
        samples[t.pass][1].push_back(t.gen_ms);
        samples[t.pass][2].push_back(t.chk_ms);
      }
    }

    BenchRow row;
    row.kernel = file.stem().string();
    double opt_total = 0, gen_total = 0, chk_total = 0;
    for (PassKind k : passes) {
      BenchPassRow pr;
      pr.pass = pass_name(k);
      pr.opt = trimmed_stats(samples[pr.pass][0]);
      pr.gen = trimmed_stats(samples[pr.pass][1]);
      pr.chk = trimmed_stats(samples[pr.pass][2]);
      opt_total += pr.opt.mean_ms;
      gen_total += pr.gen.mean_ms;
      chk_total += pr.chk.mean_ms;
      row.passes.push_back(std::move(pr));
    }
    row.chk_dominates = chk_total > opt_total && chk_total > gen_total;
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) return Result<BenchReport>::failure("all kernels skipped");
  return Result<BenchReport>::success(std::move(report));
}

namespace {

std::string fmt_ms(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

std::string render_bench_table(const BenchReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "kernel";
  for (const BenchPassRow& pr : r.rows.front().passes) {
    for (const char* phase : {"opt", "gen", "chk"}) {
      os << std::right << std::setw(12) << (pr.pass + ":" + phase);
    }
  }
  os << std::right << std::setw(14) << "chk_dominates" << "\n";
  for (const BenchRow& row : r.rows) {
    os << std::left << std::setw(22) << row.kernel;
    for (const BenchPassRow& pr : row.passes) {
      os << std::right << std::setw(12) << fmt_ms(pr.opt.mean_ms) << std::setw(12)
         << fmt_ms(pr.gen.mean_ms) << std::setw(12) << fmt_ms(pr.chk.mean_ms);
    }
    os << std::right << std::setw(14) << (row.chk_dominates ? "yes" : "no") << "\n";
  }
  if (!r.skipped.empty()) {
    os << "skipped:\n";
    for (const std::string& s : r.skipped) os << "  " << s << "\n";
  }
  return os.str();
}

std::string render_bench_json(const BenchReport& r) {
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json kernels = nlohmann::json::array();
  for (const BenchRow& row : r.rows) {
    for (const BenchPassRow& pr : row.passes) {
      auto add = [&](const char* phase, const PhaseStat& s) {
        records.push_back({{"kernel", row.kernel},
                           {"pass", pr.pass},
                           {"phase", phase},
                           {"mean_ms", s.mean_ms},
                           {"stddev_ms", s.stddev_ms},
                           {"rsd_pct", s.rsd_pct},
                           {"reps", s.reps},
                           {"retained", s.retained}});
      };
      add("opt", pr.opt);
      add("gen", pr.gen);
      add("chk", pr.chk);
    }
    kernels.push_back({{"kernel", row.kernel}, {"chk_dominates", row.chk_dominates}});
  }
  nlohmann::json out{{"reps", r.reps}, {"records", records}, {"kernels", kernels}};
  return out.dump(2) + "\n";
}

std::string render_fuzz_text(const FuzzReport& r) {
  std::ostringstream os;
  os << "trials                     " << r.trials << "\n"
     << "accepted honest            " << r.accepted_honest << "\n"
     << "rejected mutants           " << r.rejected_mutant << "\n"
     << "accepted mutants (equiv)   " << r.accepted_mutant_equivalent << "\n"
     << "soundness violations       " << r.soundness_violations << "\n";
  for (const std::string& s : r.violation_sites) os << "  violation: " << s << "\n";
  return os.str();
}

std::string render_fuzz_json(const FuzzReport& r) {
  nlohmann::json out{{"trials", r.trials},
                     {"acceptedHonest", r.accepted_honest},
                     {"rejectedMutant", r.rejected_mutant},
                     {"acceptedMutantEquivalent", r.accepted_mutant_equivalent},
                     {"soundnessViolations", r.soundness_violations}};
  return out.dump(2) + "\n";
}

size_t default_fuel_from_env() {
  if (const char* env = std::getenv("TACC_FUEL")) {
    auto v = int_from_text(env);
    if (v && *v > 0) return static_cast<size_t>(*v);
  }
  return kDefaultFuel;
}

}  // namespace tacc
