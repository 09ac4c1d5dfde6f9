#include <algorithm>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tacc/harness.hpp"
#include "tacc/passes.hpp"

using namespace tacc;
namespace fx = tacc::fixtures;

TEST_CASE("reachable on the fixtures") {
  CHECK(reachable(fx::p1()) == std::set<size_t>{0, 1, 3});
  CHECK(reachable(fx::p5()) == std::set<size_t>{0});
  CHECK(reachable(fx::p4()) == std::set<size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("reachable equals the brute-force closure on random programs") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Program p = gen_random_program(seed, 24);
    CHECK(reachable(p) == oracles::brute_force_reachable(p));
  }
}

TEST_CASE("uce removes unreachable code and remaps") {
  PassResult r = uce(fx::p1());
  Program expect = fx::make({{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}}, {"x"},
                            {Copy{"x", Literal::of_int(3)}, Goto{2}, Halt{}});
  CHECK(r.after == expect);
  CHECK(r.point_map == std::map<size_t, size_t>{{0, 0}, {1, 1}, {3, 2}});
  CHECK(r.facts.removed == std::set<size_t>{2});

  CHECK(uce(fx::p4()).after == fx::p4());
  CHECK(uce(fx::p5()).after == fx::p5());
}

TEST_CASE("uce leaves everything reachable") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Program p = gen_random_program(seed, 24);
    PassResult r = uce(p);
    CHECK(validate(r.after).empty());
    CHECK(reachable(r.after).size() == r.after.n());
  }
}

TEST_CASE("liveness table drives dead-assignment detection in P3") {
  Program p3 = fx::p3();
  auto live = liveness(p3);
  CHECK(live[0].count("a") == 1);   // a is read at 1
  CHECK(live[1].count("b") == 0);   // b's definition is dead
}

TEST_CASE("liveness with no outputs and only halt is empty") {
  Program p = fx::make({{"x", TypeTag::Int, 0, false}}, {}, {Halt{}});
  auto live = liveness(p);
  CHECK(live[0].empty());
}

TEST_CASE("dae_once removes exactly the currently dead assignments") {
  PassResult r2 = dae_once(fx::p2());
  Program expect2 = fx::make({{"d", TypeTag::Int, 0, false}, {"x", TypeTag::Int, 0, false}}, {"x"},
                             {Copy{"x", Literal::of_int(7)}, Halt{}});
  CHECK(r2.after == expect2);
  CHECK(r2.point_map == std::map<size_t, size_t>{{1, 0}, {2, 1}});

  // Single round on P3: b's assignment goes, a's stays (still read at 1).
  PassResult r3 = dae_once(fx::p3());
  CHECK(r3.facts.removed == std::set<size_t>{1});
  CHECK(r3.after.n() == 3);

  // Nothing dead: identity.
  PassResult r4 = dae_once(fx::p4());
  CHECK(r4.after == fx::p4());
  CHECK(r4.facts.removed.empty());
}

TEST_CASE("dae_fixpoint removes transitively dead assignments") {
  PassResult r3 = dae_fixpoint(fx::p3());
  Program expect3 = fx::make(
      {{"a", TypeTag::Int, 0, false}, {"b", TypeTag::Int, 0, false}, {"x", TypeTag::Int, 0, false}},
      {"x"}, {Copy{"x", Literal::of_int(2)}, Halt{}});
  CHECK(r3.after == expect3);
  CHECK(r3.point_map == std::map<size_t, size_t>{{2, 0}, {3, 1}});

  CHECK(dae_fixpoint(fx::p2()).after == dae_once(fx::p2()).after);
  CHECK(dae_fixpoint(fx::p4()).after == fx::p4());
}

TEST_CASE("dae_fixpoint equals iterating dae_once externally") {
  for (uint64_t seed = 0; seed < 150; ++seed) {
    Program p = gen_random_program(seed, 24);
    Program iterated = p;
    for (;;) {
      PassResult r = dae_once(iterated);
      if (r.after == iterated) break;
      iterated = r.after;
    }
    CHECK(dae_fixpoint(p).after == iterated);
  }
}

TEST_CASE("dae_fixpoint leaves no dead pure assignment") {
  for (uint64_t seed = 0; seed < 150; ++seed) {
    Program p = gen_random_program(seed, 24);
    Program q = dae_fixpoint(p).after;
    auto live = liveness(q);
    for (size_t i = 0; i < q.n(); ++i) {
      if (!is_pure_assign(q.instrs[i])) continue;
      DefsUses du = defs_uses(q.instrs[i]);
      if (!du.def) continue;
      // A remaining pure assignment is either live or kept for fault safety.
      bool fault_guarded = false;
      if (auto* b = std::get_if<BinAssign>(&q.instrs[i])) {
        if (b->op == BinOp::Div || b->op == BinOp::Mod) fault_guarded = !std::get_if<Literal>(&b->b);
      }
      CHECK((live[i].count(*du.def) == 1 || fault_guarded));
    }
  }
}

TEST_CASE("dae never removes array stores") {
  // A dead store into an array must survive: it can fault.
  Program p = fx::make({{"A", TypeTag::ArrInt, 2, false}, {"i", TypeTag::Int, 0, true}}, {},
                       {ArrStore{"A", var_operand("i"), lit_operand(Literal::of_int(1))}, Halt{}});
  CHECK(dae_fixpoint(p).after == p);
}

TEST_CASE("uce_dae composes both removals") {
  // P1 with an extra dead assignment appended unreachably.
  Program p = fx::make({{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}}, {"x"},
                       {Copy{"x", Literal::of_int(3)}, Goto{4}, Copy{"y", Literal::of_int(4)},
                        Goto{4}, Copy{"y", Literal::of_int(9)}, Halt{}});
  REQUIRE(validate(p).empty());
  PassResult r = uce_dae(p);
  // 2, 3 unreachable; 4 (y := 9) dead.
  Program expect = fx::make({{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}}, {"x"},
                            {Copy{"x", Literal::of_int(3)}, Goto{2}, Halt{}});
  CHECK(r.after == expect);
  CHECK(r.point_map == std::map<size_t, size_t>{{0, 0}, {1, 1}, {5, 2}});

  CHECK(uce_dae(fx::p4()).after == fx::p4());
  CHECK(uce_dae(fx::p5()).after == fx::p5());
}

TEST_CASE("cp_analyze facts on P4") {
  Program p4 = fx::p4();
  auto envs = cp_analyze(p4);
  CHECK(envs[1].at("x") == ConstVal::known(Literal::of_int(3)));
  CHECK(envs[2].at("y") == ConstVal::known(Literal::of_int(7)));
}

TEST_CASE("cp_analyze keeps inputs unknown everywhere") {
  Program p6 = fx::p6();
  auto envs = cp_analyze(p6);
  for (size_t i = 0; i < p6.n(); ++i) {
    auto it = envs[i].find("b");
    if (it != envs[i].end()) CHECK(it->second == ConstVal::unknown());
  }
}

TEST_CASE("cp_analyze refuses to fold division by zero") {
  Program p = fx::make({{"x", TypeTag::Int, 0, false}, {"z", TypeTag::Int, 0, false}}, {"x"},
                       {BinAssign{"x", BinOp::Div, lit_operand(Literal::of_int(1)),
                                  var_operand("z")},
                        Halt{}});
  auto envs = cp_analyze(p);
  // z is known 0 at entry, so the fold is refused and x goes unknown.
  CHECK(envs[1].at("x") == ConstVal::unknown());
  Program folded = cp(p).after;
  auto o = run(folded, {}, 10);
  REQUIRE(o.ok());
  CHECK(std::holds_alternative<Fault>(*o));  // fault preserved at runtime
}

TEST_CASE("fold_instr substitutes, folds and resolves branches") {
  ConstEnv env{{"x", ConstVal::known(Literal::of_int(3))}};
  Instruction folded =
      fold_instr(BinAssign{"y", BinOp::Add, var_operand("x"), lit_operand(Literal::of_int(4))}, env);
  CHECK(folded == Instruction{Copy{"y", Literal::of_int(7)}});

  ConstEnv env_y{{"y", ConstVal::known(Literal::of_int(7))}};
  Instruction branch = fold_instr(
      CondGoto{BranchCond::compare(BinOp::Lt, var_operand("y"), lit_operand(Literal::of_int(10))),
               4, 3},
      env_y);
  CHECK(branch == Instruction{Goto{4}});

  ConstEnv unknown{{"a", ConstVal::unknown()}};
  Instruction same =
      fold_instr(BinAssign{"x", BinOp::Add, var_operand("a"), var_operand("b")}, unknown);
  CHECK(same == Instruction{BinAssign{"x", BinOp::Add, var_operand("a"), var_operand("b")}});
}

TEST_CASE("cp folds P4 and rewrites the resolved branch") {
  PassResult r = cp(fx::p4());
  Program expect = fx::make(
      {{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}, {"z", TypeTag::Int, 0, false}},
      {"z"},
      {Copy{"x", Literal::of_int(3)}, Copy{"y", Literal::of_int(7)}, Goto{4}, Halt{},
       Copy{"z", Literal::of_int(7)}, Halt{}});
  CHECK(r.after == expect);
  CHECK(r.point_map.size() == 6);
  CHECK(r.point_map.at(0) == 0);

  CHECK(cp(fx::p6()).after == fx::p6());  // input condition stays unresolved
  CHECK(cp(fx::p5()).after == fx::p5());  // nothing to fold
}

TEST_CASE("cp is idempotent on random programs") {
  for (uint64_t seed = 0; seed < 150; ++seed) {
    Program p = gen_random_program(seed, 24);
    Program once = cp(p).after;
    CHECK(cp(once).after == once);
  }
}

TEST_CASE("cp_analyze facts agree with interpreter traces") {
  std::mt19937_64 rng(21);
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Program p = gen_random_program(seed, 20);
    auto envs = cp_analyze(p);
    Inputs in = random_inputs(p, rng);
    auto st = init_store(p, in);
    REQUIRE(st.ok());
    Store s = *st;
    for (size_t steps = 0; steps < 3000; ++steps) {
      for (const auto& [name, cv] : envs[s.pc]) {
        if (!cv.is_known()) continue;
        CHECK(std::get<Literal>(s.get(name)) == cv.lit);
      }
      auto next = step(p, s);
      if (std::holds_alternative<Outcome>(next)) break;
      s = std::get<Store>(next);
    }
  }
}

TEST_CASE("every pass preserves observable behaviour differentially") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Program p = gen_random_program(seed, 22);
    for (PassKind k : {PassKind::Uce, PassKind::Dae, PassKind::UceDae, PassKind::Cp}) {
      PassResult r = run_pass(k, p);
      REQUIRE(validate(r.after).empty());
      auto div = differential(p, r.after, 50, seed * 7 + 1, 32768);
      if (div) FAIL("pass ", pass_name(k), " diverged on seed ", seed, ": ", *div);
    }
  }
}

TEST_CASE("strip_noops drops noops and redirects control flow") {
  Program p = fx::make({{"x", TypeTag::Int, 0, false}}, {"x"},
                       {Noop{}, Copy{"x", Literal::of_int(7)}, Goto{4}, Noop{}, Halt{}});
  REQUIRE(validate(p).empty());
  PassResult r = strip_noops(p);
  Program expect = fx::make({{"x", TypeTag::Int, 0, false}}, {"x"},
                            {Copy{"x", Literal::of_int(7)}, Goto{2}, Halt{}});
  CHECK(r.after == expect);
  CHECK(r.point_map == std::map<size_t, size_t>{{1, 0}, {2, 1}, {4, 2}});
}
