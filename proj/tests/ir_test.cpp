#include <algorithm>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "tacc/harness.hpp"
#include "tacc/ir.hpp"

using namespace tacc;
namespace fx = tacc::fixtures;

TEST_CASE("validate accepts the fixture programs") {
  for (const Program& p : {fx::p1(), fx::p2(), fx::p3(), fx::p4(), fx::p5(), fx::p6()}) {
    CHECK(validate(p).empty());
  }
}

TEST_CASE("validate reports out-of-range targets") {
  Program p = fx::p1();
  p.instrs[1] = Goto{9};
  auto v = validate(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "instr 1: target 9 out of range (N=4)");
}

TEST_CASE("validate reports undeclared variables") {
  Program p = fx::make({{"d", TypeTag::Int, 0, false}}, {},
                       {Copy{"d", Literal::of_int(5)}, Copy{"x", Literal::of_int(7)}, Halt{}});
  auto v = validate(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "instr 1: undeclared variable x");
}

TEST_CASE("validate rejects fall-through past the end") {
  Program p = fx::make({{"x", TypeTag::Int, 0, false}}, {}, {Copy{"x", Literal::of_int(1)}});
  auto v = validate(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "instr 0: falls through past end of program");
}

TEST_CASE("validate checks types") {
  // bool + int arithmetic
  Program p = fx::make({{"x", TypeTag::Int, 0, false}, {"b", TypeTag::Bool, 0, false}}, {},
                       {BinAssign{"x", BinOp::Add, var_operand("b"), lit_operand(Literal::of_int(1))},
                        Halt{}});
  CHECK(!validate(p).empty());

  // condition must be bool
  Program q = fx::make({{"x", TypeTag::Int, 0, false}}, {},
                       {CondGoto{BranchCond::bare(var_operand("x")), 1, 1}, Halt{}});
  CHECK(!validate(q).empty());

  // array length must be positive
  Program r = fx::make({{"A", TypeTag::ArrInt, 0, false}}, {}, {Halt{}});
  CHECK(!validate(r).empty());
}

TEST_CASE("successors of the fixtures") {
  Program p1 = fx::p1(), p5 = fx::p5(), p6 = fx::p6();
  CHECK(successors(p1, 1) == std::vector<size_t>{3});
  CHECK(successors(p1, 0) == std::vector<size_t>{1});
  CHECK(successors(p1, 3).empty());
  // Both arms to the next instruction collapse to one successor.
  CHECK(successors(p6, 0) == std::vector<size_t>{1});
  // Trivial self loop.
  CHECK(successors(p5, 0) == std::vector<size_t>{0});
}

TEST_CASE("successors are total and in range on valid random programs") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Program p = gen_random_program(seed, 20);
    REQUIRE(validate(p).empty());
    for (size_t i = 0; i < p.n(); ++i) {
      for (size_t s : successors(p, i)) CHECK(s < p.n());
    }
  }
}

TEST_CASE("defs_uses classifies operands") {
  DefsUses du = defs_uses(BinAssign{"x", BinOp::Add, var_operand("a"), var_operand("b")});
  CHECK(du.def == "x");
  CHECK(du.uses == std::vector<std::string>{"a", "b"});
  CHECK(!du.array_written);

  du = defs_uses(ArrStore{"A", var_operand("i"), var_operand("t")});
  CHECK(!du.def);
  CHECK(du.uses == std::vector<std::string>{"i", "t"});
  CHECK(du.array_written == "A");

  du = defs_uses(Halt{});
  CHECK(!du.def);
  CHECK(du.uses.empty());
  CHECK(!du.array_written);

  // Array reads count the array name as used.
  du = defs_uses(ArrLoad{"x", "A", var_operand("i")});
  CHECK(du.def == "x");
  CHECK(du.uses == std::vector<std::string>{"A", "i"});

  du = defs_uses(CondGoto{
      BranchCond::compare(BinOp::Lt, var_operand("y"), lit_operand(Literal::of_int(10))), 4, 3});
  CHECK(!du.def);
  CHECK(du.uses == std::vector<std::string>{"y"});
}

TEST_CASE("retarget renumbers and remaps") {
  Program p1 = fx::p1();
  auto r = retarget(p1, {0, 1, 3});
  REQUIRE(r.ok());
  Program expect = fx::make({{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}}, {"x"},
                            {Copy{"x", Literal::of_int(3)}, Goto{2}, Halt{}});
  CHECK(r->program == expect);
  CHECK(r->index_map == std::map<size_t, size_t>{{0, 0}, {1, 1}, {3, 2}});
}

TEST_CASE("retarget with the full set is the identity") {
  Program p1 = fx::p1();
  auto r = retarget(p1, {0, 1, 2, 3});
  REQUIRE(r.ok());
  CHECK(r->program == p1);
  CHECK(r->index_map == std::map<size_t, size_t>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("retarget rejects keep sets not closed under successors") {
  // Instruction 0 falls through to dropped index 1.
  auto r = retarget(fx::p1(), {0, 2, 3});
  CHECK(!r.ok());
  CHECK(r.err.find("successor") != std::string::npos);

  CHECK(!retarget(fx::p1(), {}).ok());
  CHECK(!retarget(fx::p1(), {1, 3}).ok());  // must contain 0
}

TEST_CASE("retargeting a successor-closed keep set validates cleanly") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Program p = gen_random_program(seed, 24);
    // Random seed set, closed under successors, always containing 0.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::set<size_t> keep{0};
    for (size_t i = 0; i < p.n(); ++i) {
      if (rng() % 3 == 0) keep.insert(i);
    }
    std::vector<size_t> work(keep.begin(), keep.end());
    while (!work.empty()) {
      size_t i = work.back();
      work.pop_back();
      for (size_t s : successors(p, i)) {
        if (keep.insert(s).second) work.push_back(s);
      }
    }
    auto r = retarget(p, keep);
    REQUIRE(r.ok());
    CHECK(validate(r->program).empty());
    CHECK(r->index_map.size() == keep.size());
    CHECK(r->index_map.at(0) == 0);
  }
}
