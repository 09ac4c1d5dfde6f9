// Shared fixture programs P1..P6 used across the test suites.
#pragma once

#include "tacc/ir.hpp"

namespace tacc::fixtures {

inline Program make(std::vector<VarInfo> vars, std::vector<std::string> outputs,
                    std::vector<Instruction> instrs) {
  Program p;
  for (VarInfo& v : vars) p.add_var(std::move(v));
  p.outputs = std::move(outputs);
  p.instrs = std::move(instrs);
  return p;
}

// 0: x := 3; 1: goto 3; 2: y := 4; 3: halt   outputs{x}
inline Program p1() {
  return make({{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}}, {"x"},
              {Copy{"x", Literal::of_int(3)}, Goto{3}, Copy{"y", Literal::of_int(4)}, Halt{}});
}

// 0: d := 5; 1: x := 7; 2: halt   outputs{x}
inline Program p2() {
  return make({{"d", TypeTag::Int, 0, false}, {"x", TypeTag::Int, 0, false}}, {"x"},
              {Copy{"d", Literal::of_int(5)}, Copy{"x", Literal::of_int(7)}, Halt{}});
}

// 0: a := 1; 1: b := a + 1; 2: x := 2; 3: halt   outputs{x}
inline Program p3() {
  return make(
      {{"a", TypeTag::Int, 0, false}, {"b", TypeTag::Int, 0, false}, {"x", TypeTag::Int, 0, false}},
      {"x"},
      {Copy{"a", Literal::of_int(1)},
       BinAssign{"b", BinOp::Add, var_operand("a"), lit_operand(Literal::of_int(1))},
       Copy{"x", Literal::of_int(2)}, Halt{}});
}

// 0: x := 3; 1: y := x + 4; 2: if y < 10 goto 4 else 3; 3: halt; 4: z := y; 5: halt  outputs{z}
inline Program p4() {
  return make(
      {{"x", TypeTag::Int, 0, false}, {"y", TypeTag::Int, 0, false}, {"z", TypeTag::Int, 0, false}},
      {"z"},
      {Copy{"x", Literal::of_int(3)},
       BinAssign{"y", BinOp::Add, var_operand("x"), lit_operand(Literal::of_int(4))},
       CondGoto{BranchCond::compare(BinOp::Lt, var_operand("y"), lit_operand(Literal::of_int(10))),
                4, 3},
       Halt{}, Copy{"z", var_operand("y")}, Halt{}});
}

// 0: goto 0   outputs{}
inline Program p5() { return make({}, {}, {Goto{0}}); }

// 0: if b goto 1 else 1; 1: halt   outputs{}, b a bool input
inline Program p6() {
  return make({{"b", TypeTag::Bool, 0, true}}, {},
              {CondGoto{BranchCond::bare(var_operand("b")), 1, 1}, Halt{}});
}

}  // namespace tacc::fixtures
