// Certificates and the relational-invariant checker.
//
// A certificate maps source program points to target program points; each
// pair carries a conjunction of cross-program atoms (variable equalities and
// known constants). The checker establishes a lock-step simulation with
// bounded source-side stuttering: one target step is matched by at most
// `stutter_bound` source steps, which covers instructions the pass deleted.
// Anything the invariant does not state is assumed unequal (unmentioned
// variables get distinct fresh symbols), so the invariant is the only channel
// of cross-program knowledge.
#pragma once

#include "tacc/passes.hpp"
#include "tacc/simplify.hpp"

namespace tacc {

struct Atom {
  enum class Kind { EqVar, ConstS, ConstT, EqArr };
  Kind kind = Kind::EqVar;
  std::string a;  // source-side name (EqVar/EqArr/ConstS) or target name (ConstT)
  std::string b;  // target-side name for EqVar/EqArr
  Literal lit;    // ConstS/ConstT

  static Atom eq_var(std::string s, std::string t) { return {Kind::EqVar, std::move(s), std::move(t), {}}; }
  static Atom const_src(std::string v, Literal l) { return {Kind::ConstS, std::move(v), {}, std::move(l)}; }
  static Atom const_tgt(std::string v, Literal l) { return {Kind::ConstT, std::move(v), {}, std::move(l)}; }
  static Atom eq_arr(std::string s, std::string t) { return {Kind::EqArr, std::move(s), std::move(t), {}}; }

  bool operator==(const Atom& o) const {
    return kind == o.kind && a == o.a && b == o.b && lit == o.lit;
  }
  bool operator<(const Atom& o) const;
};

std::string atom_text(const Atom& a);
std::string cert_literal_text(const Literal& l);  // i:<n> f:<decimal> b:true|false

// Sorted, duplicate-free conjunction.
struct Invariant {
  std::vector<Atom> atoms;

  void add(Atom a);
  bool operator==(const Invariant&) const = default;
};

using PointPair = std::pair<size_t, size_t>;

struct Certificate {
  // Key: (source point, target point), checked in ascending order. The start
  // obligation is anchored at (0, 0); when instruction 0 survives the pass,
  // (0, 0) itself is an entry.
  std::map<PointPair, Invariant> entries;
  size_t stutter_bound = 1;

  bool operator==(const Certificate&) const = default;
};

struct Verdict {
  bool accepted = false;
  PointPair entry{0, 0};  // first failing entry when rejected
  std::string reason;

  static Verdict ok() { return Verdict{true, {0, 0}, {}}; }
  static Verdict reject(PointPair at, std::string why) {
    return Verdict{false, at, std::move(why)};
  }
};

struct CheckOptions {
  bool use_fast_path = true;
  const FoldQuirks* quirks = nullptr;  // test hook shared with fold_instr
};

Invariant full_identity(const Program& p);

// Full identity at every mapped pair; stutter bound 1.
Certificate gen_cert_uce(const PassResult& r);
// Equates exactly the variables whose source/target values provably agree at
// each surviving point (forward must-analysis over the removed set); stutter
// bound covers the longest deleted run.
Certificate gen_cert_uce_dae(const PassResult& r);
// One entry per target-reachable index pair (i, i): full identity plus the
// source-side constant environment as ConstS atoms.
Certificate gen_cert_cp(const PassResult& r);

// Checks a single entry; pre: key is in cert.entries and both programs
// validate cleanly.
Verdict check_entry(const Program& src, const Program& tgt, const Certificate& cert,
                    PointPair key, const CheckOptions& opts = {});

// Structural pre-checks, the start obligation at (0, 0), every entry in
// ascending order, then target coverage. The fast path accepts an entry
// without symbolic execution when its invariant is full identity and the
// instructions are identical modulo renumbering through the entry map.
Verdict check(const Program& src, const Program& tgt, const Certificate& cert,
              const CheckOptions& opts = {});

// Line-oriented text format; print(parse(print(c))) is byte-identical.
std::string print_cert(const Certificate& c);
Result<Certificate> parse_cert(const std::string& text);

}  // namespace tacc
