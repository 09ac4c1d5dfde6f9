#include "doctest.h"
#include "support/fixtures.hpp"
#include "tacc/harness.hpp"
#include "tacc/interp.hpp"

using namespace tacc;
namespace fx = tacc::fixtures;

TEST_CASE("init_store fills defaults and pc 0") {
  Program p2 = fx::p2();
  auto s = init_store(p2, {});
  REQUIRE(s.ok());
  CHECK(s->pc == 0);
  CHECK(std::get<Literal>(s->get("d")) == Literal::of_int(0));
  CHECK(std::get<Literal>(s->get("x")) == Literal::of_int(0));
}

TEST_CASE("init_store takes typed inputs and rejects bad ones") {
  Program p6 = fx::p6();
  auto ok = init_store(p6, {{"b", Literal::of_bool(true)}});
  REQUIRE(ok.ok());
  CHECK(std::get<Literal>(ok->get("b")) == Literal::of_bool(true));

  auto bad = init_store(p6, {{"b", Literal::of_int(7)}});
  REQUIRE(!bad.ok());
  CHECK(bad.err == "b: expected Bool");

  CHECK(!init_store(p6, {}).ok());  // missing input
  CHECK(!init_store(fx::p2(), {{"x", Literal::of_int(1)}}).ok());  // x is not an input
}

TEST_CASE("step executes one instruction") {
  Program p1 = fx::p1();
  auto s0 = init_store(p1, {});
  REQUIRE(s0.ok());
  auto next = step(p1, *s0);
  REQUIRE(std::holds_alternative<Store>(next));
  const Store& s1 = std::get<Store>(next);
  CHECK(s1.pc == 1);
  CHECK(std::get<Literal>(s1.get("x")) == Literal::of_int(3));
}

TEST_CASE("step resolves branches against the store") {
  Program p4 = fx::p4();
  auto s = init_store(p4, {});
  REQUIRE(s.ok());
  s->set("y", Literal::of_int(7));
  s->pc = 2;
  auto next = step(p4, *s);
  REQUIRE(std::holds_alternative<Store>(next));
  CHECK(std::get<Store>(next).pc == 4);  // 7 < 10 is true
}

TEST_CASE("division by a zero variable faults") {
  Program p = fx::make({{"x", TypeTag::Int, 0, false}, {"z", TypeTag::Int, 0, false}}, {},
                       {BinAssign{"x", BinOp::Div, lit_operand(Literal::of_int(1)),
                                  var_operand("z")},
                        Halt{}});
  auto s = init_store(p, {});
  REQUIRE(s.ok());
  auto next = step(p, *s);
  REQUIRE(std::holds_alternative<Outcome>(next));
  const Outcome& o = std::get<Outcome>(next);
  REQUIRE(std::holds_alternative<Fault>(o));
  CHECK(std::get<Fault>(o).kind == FaultKind::DivByZero);
  CHECK(std::get<Fault>(o).at == 0);
}

TEST_CASE("run produces the expected outcomes on the fixtures") {
  auto o1 = run(fx::p1(), {}, 100);
  REQUIRE(o1.ok());
  REQUIRE(std::holds_alternative<Halted>(*o1));
  auto& outs = std::get<Halted>(*o1).outputs;
  REQUIRE(outs.size() == 1);
  CHECK(outs[0].first == "x");
  CHECK(std::get<Literal>(outs[0].second) == Literal::of_int(3));

  auto o5 = run(fx::p5(), {}, 50);
  REQUIRE(o5.ok());
  CHECK(std::holds_alternative<OutOfFuel>(*o5));

  auto o3 = run(fx::p3(), {}, 100);
  REQUIRE(o3.ok());
  REQUIRE(std::holds_alternative<Halted>(*o3));
  CHECK(std::get<Literal>(std::get<Halted>(*o3).outputs[0].second) == Literal::of_int(2));
}

TEST_CASE("array stores, loads and bounds faults") {
  Program p = fx::make(
      {{"A", TypeTag::ArrInt, 3, false}, {"x", TypeTag::Int, 0, false}}, {"x"},
      {ArrStore{"A", lit_operand(Literal::of_int(2)), lit_operand(Literal::of_int(9))},
       ArrLoad{"x", "A", lit_operand(Literal::of_int(2))}, Halt{}});
  auto o = run(p, {}, 10);
  REQUIRE(o.ok());
  REQUIRE(std::holds_alternative<Halted>(*o));
  CHECK(std::get<Literal>(std::get<Halted>(*o).outputs[0].second) == Literal::of_int(9));

  Program bad = p;
  bad.instrs[1] = ArrLoad{"x", "A", lit_operand(Literal::of_int(3))};
  auto f = run(bad, {}, 10);
  REQUIRE(f.ok());
  REQUIRE(std::holds_alternative<Fault>(*f));
  CHECK(std::get<Fault>(*f).kind == FaultKind::OutOfBounds);
}

TEST_CASE("float semantics: NaN comparisons and int_to_float") {
  Program p = fx::make({{"f", TypeTag::Float, 0, true},
                        {"b", TypeTag::Bool, 0, false},
                        {"g", TypeTag::Float, 0, false}},
                       {"b", "g"},
                       {BinAssign{"b", BinOp::Ne, var_operand("f"), var_operand("f")},
                        UnAssign{"g", UnOp::IntToFloat, lit_operand(Literal::of_int(3))}, Halt{}});
  auto o = run(p, {{"f", Literal::of_float(std::nan(""))}}, 10);
  REQUIRE(o.ok());
  auto& outs = std::get<Halted>(*o).outputs;
  CHECK(std::get<Literal>(outs[0].second) == Literal::of_bool(true));  // NaN != NaN
  CHECK(std::get<Literal>(outs[1].second) == Literal::of_float(3.0));
}

TEST_CASE("fault identity compares kind, not index") {
  Outcome a = Fault{FaultKind::DivByZero, 3};
  Outcome b = Fault{FaultKind::DivByZero, 7};
  Outcome c = Fault{FaultKind::OutOfBounds, 3};
  CHECK(outcomes_equal(a, b));
  CHECK(!outcomes_equal(a, c));
}

TEST_CASE("runs are deterministic") {
  std::mt19937_64 rng(11);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Program p = gen_random_program(seed, 18);
    Inputs in = random_inputs(p, rng);
    auto a = run(p, in, 4096);
    auto b = run(p, in, 4096);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(outcomes_equal(*a, *b));
  }
}

TEST_CASE("terminal outcomes are stable under more fuel") {
  std::mt19937_64 rng(12);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Program p = gen_random_program(seed, 18);
    Inputs in = random_inputs(p, rng);
    auto small = run(p, in, 2048);
    REQUIRE(small.ok());
    if (std::holds_alternative<OutOfFuel>(*small)) continue;
    for (size_t fuel : {4096, 65536}) {
      auto big = run(p, in, fuel);
      REQUIRE(big.ok());
      CHECK(outcomes_equal(*small, *big));
    }
  }
}
