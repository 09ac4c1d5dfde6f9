#include "doctest.h"
#include "support/fixtures.hpp"
#include "tacc/harness.hpp"
#include "tacc/passes.hpp"

using namespace tacc;
namespace fx = tacc::fixtures;

TEST_CASE("liveness finds d dead in P2") {
  Program p2 = fx::p2();
  auto facts = solve_worklist(p2, liveness_spec(p2));
  REQUIRE(facts.ok());
  // live-after(0) is empty: d is dead, x is not yet live (redefined at 1).
  CHECK((*facts)[0].empty());
  CHECK((*facts)[1] == VarSet{"x"});
}

TEST_CASE("liveness on the self loop terminates with empty facts") {
  Program p5 = fx::p5();
  auto w = solve_worklist(p5, liveness_spec(p5));
  REQUIRE(w.ok());
  CHECK((*w)[0].empty());
  auto r = solve_roundrobin(p5, liveness_spec(p5));
  REQUIRE(r.ok());
  CHECK((*r)[0].empty());
}

TEST_CASE("constant analysis resolves P4's facts") {
  Program p4 = fx::p4();
  auto facts = solve_worklist(p4, const_spec(p4));
  REQUIRE(facts.ok());
  const ConstEnv& before2 = (*facts)[2];
  CHECK(before2.at("x") == ConstVal::known(Literal::of_int(3)));
  CHECK(before2.at("y") == ConstVal::known(Literal::of_int(7)));
}

TEST_CASE("single-instruction program keeps only the boundary fact") {
  Program p = fx::make({{"x", TypeTag::Int, 0, false}}, {"x"}, {Halt{}});
  auto fwd = solve_worklist(p, const_spec(p));
  REQUIRE(fwd.ok());
  CHECK((*fwd)[0] == const_spec(p).boundary);

  auto bwd = solve_worklist(p, liveness_spec(p));
  REQUIRE(bwd.ok());
  CHECK((*bwd)[0] == liveness_spec(p).boundary);
}

TEST_CASE("worklist and round-robin agree on both lattices") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Program p = gen_random_program(seed, 26);
    {
      auto spec = liveness_spec(p);
      auto a = solve_worklist(p, spec);
      auto b = solve_roundrobin(p, spec);
      REQUIRE(a.ok());
      REQUIRE(b.ok());
      for (size_t i = 0; i < p.n(); ++i) CHECK(spec.eq((*a)[i], (*b)[i]));
    }
    {
      auto spec = const_spec(p);
      auto a = solve_worklist(p, spec);
      auto b = solve_roundrobin(p, spec);
      REQUIRE(a.ok());
      REQUIRE(b.ok());
      for (size_t i = 0; i < p.n(); ++i) CHECK(spec.eq((*a)[i], (*b)[i]));
    }
    {
      PassResult d = dae_fixpoint(p);
      auto spec = equatable_spec(p, d.facts.removed);
      auto a = solve_worklist(p, spec);
      auto b = solve_roundrobin(p, spec);
      REQUIRE(a.ok());
      REQUIRE(b.ok());
      for (size_t i = 0; i < p.n(); ++i) CHECK(spec.eq((*a)[i], (*b)[i]));
    }
  }
}

TEST_CASE("solutions are fixed points") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Program p = gen_random_program(seed, 22);
    auto live = solve_worklist(p, liveness_spec(p));
    REQUIRE(live.ok());
    CHECK(is_fixed_point(p, liveness_spec(p), *live));
    auto consts = solve_roundrobin(p, const_spec(p));
    REQUIRE(consts.ok());
    CHECK(is_fixed_point(p, const_spec(p), *consts));
  }
}

TEST_CASE("both strategies terminate within the guard on 1000 programs") {
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    Program p = gen_random_program(seed, 20);
    CHECK(solve_worklist(p, liveness_spec(p)).ok());
    CHECK(solve_worklist(p, const_spec(p)).ok());
    CHECK(solve_roundrobin(p, liveness_spec(p)).ok());
    CHECK(solve_roundrobin(p, const_spec(p)).ok());
  }
}

TEST_CASE("the divergence guard reports non-monotone transfers") {
  Program p5 = fx::p5();
  LatticeSpec<int> bad;
  bad.direction = Direction::Forward;
  bad.bottom = 0;
  bad.boundary = 1;
  bad.join = [](int a, int b) { return a + b; };  // not idempotent: facts climb forever
  bad.eq = [](int a, int b) { return a == b; };
  bad.transfer = [](const Program&, size_t, const int& f) { return f + 1; };
  auto r = solve_worklist(p5, bad);
  REQUIRE(!r.ok());
  CHECK(r.err.find("not monotone") != std::string::npos);
}
