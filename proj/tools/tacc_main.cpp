// tacc command-line driver: compile, opt, check, run, bench, fuzz.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tacc/frontend.hpp"
#include "tacc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int load_program(const std::string& path, tacc::Program& out) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return kExitUsage;
  }
  auto prog = tacc::parse_tac(*text);
  if (!prog.ok()) {
    std::cerr << path << ": " << prog.err << "\n";
    return kExitUsage;
  }
  auto violations = tacc::validate(*prog);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << path << ": " << v << "\n";
    return kExitUsage;
  }
  out = std::move(*prog);
  return kExitOk;
}

std::optional<tacc::Value> parse_input_value(const tacc::VarInfo& vi, const std::string& text) {
  using namespace tacc;
  if (is_scalar(vi.type)) {
    if (vi.type == TypeTag::Int) {
      if (auto v = int_from_text(text)) return Literal::of_int(*v);
    } else if (vi.type == TypeTag::Float) {
      if (auto v = double_from_text(text)) return Literal::of_float(*v);
    } else {
      if (text == "true") return Literal::of_bool(true);
      if (text == "false") return Literal::of_bool(false);
    }
    return std::nullopt;
  }
  // Arrays: [e1,e2,...]
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') return std::nullopt;
  ArrayVal a;
  a.elem = elem_type(vi.type);
  std::stringstream body(text.substr(1, text.size() - 2));
  std::string item;
  while (std::getline(body, item, ',')) {
    if (a.elem == TypeTag::Int) {
      auto v = int_from_text(item);
      if (!v) return std::nullopt;
      a.elems.push_back(Literal::of_int(*v));
    } else if (a.elem == TypeTag::Float) {
      auto v = double_from_text(item);
      if (!v) return std::nullopt;
      a.elems.push_back(Literal::of_float(*v));
    } else {
      if (item != "true" && item != "false") return std::nullopt;
      a.elems.push_back(Literal::of_bool(item == "true"));
    }
  }
  return a;
}

int cmd_compile(const std::string& in_path, const std::string& out_path) {
  auto text = read_file(in_path);
  if (!text) {
    std::cerr << in_path << ": cannot read file\n";
    return kExitUsage;
  }
  auto prog = tacc::compile_source(*text);
  if (!prog.ok()) {
    std::cerr << in_path << ": " << prog.err << "\n";
    return kExitUsage;
  }
  std::string tac = tacc::print_tac(*prog);
  if (out_path.empty() || out_path == "-") {
    std::cout << tac;
    return kExitOk;
  }
  if (!write_file(out_path, tac)) {
    std::cerr << out_path << ": cannot write file\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_opt(const std::string& in_path, const std::string& passes_csv, const std::string& mode,
            const std::string& emit_cert_dir, const std::string& out_path) {
  tacc::Program prog;
  if (int rc = load_program(in_path, prog)) return rc;

  std::vector<tacc::PassKind> passes;
  std::stringstream ss(passes_csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto k = tacc::pass_from_name(name);
    if (!k) {
      std::cerr << "unknown pass '" << name << "' (expected cp, uce-dae, uce, dae)\n";
      return kExitUsage;
    }
    passes.push_back(*k);
  }
  if (passes.empty()) {
    std::cerr << "no passes given\n";
    return kExitUsage;
  }

  tacc::PipelineOptions opts;
  opts.mode = mode == "plain" ? tacc::PipelineMode::Plain : tacc::PipelineMode::Cc;

  // Re-run stage by stage so per-pass artifacts can be emitted.
  tacc::Program cur = prog;
  bool any_rejected = false;
  for (size_t i = 0; i < passes.size(); ++i) {
    tacc::PassKind k = passes[i];
    tacc::PassResult r = tacc::run_pass(k, cur);
    if (opts.mode == tacc::PipelineMode::Plain) {
      cur = r.after;
      continue;
    }
    tacc::Certificate cert = tacc::gen_cert_for(k, r);
    tacc::Verdict v = tacc::check(r.before, r.after, cert, opts.check);
    std::cerr << "pass " << tacc::pass_name(k) << ": "
              << (v.accepted ? "accepted" : "REJECTED (" + v.reason + ")") << "\n";
    if (!emit_cert_dir.empty()) {
      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(emit_cert_dir, ec);
      std::string stem = emit_cert_dir + "/pass" + std::to_string(i) + "-" + tacc::pass_name(k);
      write_file(stem + ".before.tac", tacc::print_tac(r.before));
      write_file(stem + ".after.tac", tacc::print_tac(r.after));
      write_file(stem + ".cert", tacc::print_cert(cert));
    }
    if (v.accepted) cur = r.after;
    else any_rejected = true;
  }

  std::string tac = tacc::print_tac(cur);
  if (out_path.empty() || out_path == "-") std::cout << tac;
  else if (!write_file(out_path, tac)) {
    std::cerr << out_path << ": cannot write file\n";
    return kExitUsage;
  }
  return any_rejected ? kExitRejected : kExitOk;
}

int cmd_check(const std::string& src_path, const std::string& tgt_path,
              const std::string& cert_path) {
  tacc::Program src, tgt;
  if (int rc = load_program(src_path, src)) return rc;
  if (int rc = load_program(tgt_path, tgt)) return rc;
  auto text = read_file(cert_path);
  if (!text) {
    std::cerr << cert_path << ": cannot read file\n";
    return kExitUsage;
  }
  auto cert = tacc::parse_cert(*text);
  if (!cert.ok()) {
    std::cerr << cert_path << ": " << cert.err << "\n";
    return kExitUsage;
  }
  tacc::Verdict v = tacc::check(src, tgt, *cert);
  if (v.accepted) {
    std::cout << "accepted\n";
    return kExitOk;
  }
  std::cout << "rejected at (" << v.entry.first << "," << v.entry.second << "): " << v.reason
            << "\n";
  return kExitRejected;
}

int cmd_run(const std::string& path, const std::vector<std::string>& input_kvs, size_t fuel) {
  tacc::Program prog;
  if (int rc = load_program(path, prog)) return rc;
  tacc::Inputs inputs;
  for (const std::string& kv : input_kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "bad --input '" << kv << "', expected name=value\n";
      return kExitUsage;
    }
    std::string name = kv.substr(0, eq);
    const tacc::VarInfo* vi = prog.find_var(name);
    if (!vi) {
      std::cerr << "no such variable '" << name << "'\n";
      return kExitUsage;
    }
    auto v = parse_input_value(*vi, kv.substr(eq + 1));
    if (!v) {
      std::cerr << "bad value for " << name << " (type " << tacc::type_name(vi->type) << ")\n";
      return kExitUsage;
    }
    inputs[name] = std::move(*v);
  }
  auto outcome = tacc::run(prog, inputs, fuel);
  if (!outcome.ok()) {
    std::cerr << outcome.err << "\n";
    return kExitUsage;
  }
  std::cout << tacc::outcome_text(*outcome) << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& corpus_dir, size_t reps, const std::string& format) {
  auto report = tacc::bench(corpus_dir, reps);
  if (!report.ok()) {
    std::cerr << report.err << "\n";
    return kExitUsage;
  }
  if (format == "json") std::cout << tacc::render_bench_json(*report);
  else std::cout << tacc::render_bench_table(*report);
  return kExitOk;
}

int cmd_fuzz(size_t trials, uint64_t seed, const std::string& format) {
  tacc::FuzzReport report = tacc::fuzz(trials, seed);
  if (format == "json") std::cout << tacc::render_fuzz_json(report);
  else std::cout << tacc::render_fuzz_text(report);
  for (const std::string& s : report.honest_failures) std::cerr << "honest failure: " << s << "\n";
  bool bad = report.soundness_violations > 0 || report.accepted_honest < report.trials;
  return bad ? kExitRejected : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tacc: a three-address-code middle-end with per-run correctness certificates"};
  app.require_subcommand(1);

  std::string in_path, out_path, passes = "cp,uce-dae", mode = "cc", emit_cert_dir;
  std::string src_path, tgt_path, cert_path, corpus_dir, format = "table";
  std::vector<std::string> input_kvs;
  size_t fuel = tacc::default_fuel_from_env();
  size_t reps = 20, trials = 1000;
  uint64_t seed = 1;

  auto* compile = app.add_subcommand("compile", "Compile a .knl kernel to .tac");
  compile->add_option("file", in_path, "input .knl file")->required();
  compile->add_option("-o,--output", out_path, "output .tac file (default stdout)");

  auto* opt = app.add_subcommand("opt", "Optimize a .tac program");
  opt->add_option("file", in_path, "input .tac file")->required();
  opt->add_option("--passes", passes, "comma-separated passes: cp,uce-dae,uce,dae");
  opt->add_option("--mode", mode, "cc (certified) or plain")
      ->check(CLI::IsMember({"cc", "plain"}));
  opt->add_option("--emit-cert", emit_cert_dir, "directory for per-pass programs + certificates");
  opt->add_option("-o,--output", out_path, "output .tac file (default stdout)");

  auto* chk = app.add_subcommand("check", "Check a certificate against two programs");
  chk->add_option("src", src_path, "source .tac")->required();
  chk->add_option("tgt", tgt_path, "target .tac")->required();
  chk->add_option("cert", cert_path, "certificate file")->required();

  auto* runc = app.add_subcommand("run", "Interpret a .tac program");
  runc->add_option("file", in_path, "input .tac file")->required();
  runc->add_option("--input", input_kvs, "input binding name=value (repeatable)");
  runc->add_option("--fuel", fuel, "step budget");

  auto* benchc = app.add_subcommand("bench", "Time opt/gen/chk over a kernel corpus");
  benchc->add_option("corpus", corpus_dir, "directory of .knl kernels")->required();
  benchc->add_option("--reps", reps, "repetitions per kernel (>= 3)");
  benchc->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

  auto* fuzzc = app.add_subcommand("fuzz", "Random-program certificate fuzzing");
  fuzzc->add_option("--trials", trials, "number of trials");
  fuzzc->add_option("--seed", seed, "random seed");
  fuzzc->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.got_subcommand(compile)) return cmd_compile(in_path, out_path);
  if (app.got_subcommand(opt)) return cmd_opt(in_path, passes, mode, emit_cert_dir, out_path);
  if (app.got_subcommand(chk)) return cmd_check(src_path, tgt_path, cert_path);
  if (app.got_subcommand(runc)) return cmd_run(in_path, input_kvs, fuel);
  if (app.got_subcommand(benchc)) return cmd_bench(corpus_dir, reps, format);
  if (app.got_subcommand(fuzzc)) return cmd_fuzz(trials, seed, format);
  return kExitUsage;
}
