#pragma once

// The benchmark fixtures, defined once: the mkfixtures tool writes them to
// fixtures/*.mem and the test suite checks the shipped files match.

#include <string>

#include "rv32_encode.hpp"

namespace fixtures {

// pc of the data-dependent parity branch in the parity programs.
inline constexpr uint32_t kParityBranchPc = 0x08;

// Loop that counts even vs. odd values of a falling counter. The parity
// branch alternates taken/not-taken; the surrounding jumps give the global
// history its 011/111 iteration signature.
inline std::string parity_program(int count, const std::string& name) {
  using namespace rv32;
  Asm a(0);
  a.ins(addi(a0, x0, count), "li   a0, " + std::to_string(count) + "   ; loop counter");
  a.label("loop");
  a.ins(andi(a1, a0, 1), "andi a1, a0, 1");
  a.bne(a1, x0, "odd", "bne  a1, zero, odd   ; parity branch");
  a.jal(x0, "even", "j    even");
  a.label("odd");
  a.ins(addi(t1, t1, 1), "addi t1, t1, 1");
  a.jal(x0, "check", "j    check");
  a.label("even");
  a.ins(addi(t0, t0, 1), "addi t0, t0, 1");
  a.label("check");
  a.ins(addi(a0, a0, -1), "addi a0, a0, -1");
  a.bne(a0, x0, "loop", "bnez a0, loop");
  a.ins(lui(t2, 0x10000), "lui  t2, 0x10000");
  a.ins(sw(t1, 8, t2), "sw   t1, 8(t2)   ; halt, exit = odd count");
  return a.emit(name);
}

inline std::string program1() { return parity_program(50, "program1: even/odd counting loop, 50 iterations"); }

inline std::string loop_parity_1000() {
  return parity_program(1000, "loop_parity_1000: even/odd counting loop, 1000 iterations");
}

// Doubly recursive fibonacci; exercises deep call/return chains.
inline std::string fib_recursive() {
  using namespace rv32;
  Asm a(0);
  a.ins(lui(sp, 0x20), "lui  sp, 0x20   ; stack top = 0x20000");
  a.ins(addi(a0, x0, 12), "li   a0, 12");
  a.jal(ra, "fib", "jal  ra, fib");
  a.ins(lui(t2, 0x10000), "lui  t2, 0x10000");
  a.ins(sw(a0, 8, t2), "sw   a0, 8(t2)   ; halt, exit = fib(12)");
  a.label("fib");
  a.ins(addi(t0, x0, 2), "li   t0, 2");
  a.blt(a0, t0, "fib_leaf", "blt  a0, t0, fib_leaf   ; n < 2: return n");
  a.ins(addi(sp, sp, -16), "addi sp, sp, -16");
  a.ins(sw(ra, 12, sp), "sw   ra, 12(sp)");
  a.ins(sw(s0, 8, sp), "sw   s0, 8(sp)");
  a.ins(sw(s1, 4, sp), "sw   s1, 4(sp)");
  a.ins(addi(s0, a0, 0), "mv   s0, a0");
  a.ins(addi(a0, a0, -1), "addi a0, a0, -1");
  a.jal(ra, "fib", "jal  ra, fib");
  a.ins(addi(s1, a0, 0), "mv   s1, a0");
  a.ins(addi(a0, s0, -2), "addi a0, s0, -2");
  a.jal(ra, "fib", "jal  ra, fib");
  a.ins(add(a0, a0, s1), "add  a0, a0, s1");
  a.ins(lw(s1, 4, sp), "lw   s1, 4(sp)");
  a.ins(lw(s0, 8, sp), "lw   s0, 8(sp)");
  a.ins(lw(ra, 12, sp), "lw   ra, 12(sp)");
  a.ins(addi(sp, sp, 16), "addi sp, sp, 16");
  a.label("fib_leaf");
  a.ins(jalr(x0, ra, 0), "ret");
  // stack: 1 KiB below 0x20000
  a.set_org(0x1FC00);
  a.comment("stack");
  for (int i = 0; i < 256; ++i) a.word(0);
  return a.emit("fib_recursive: recursive fibonacci, n = 12");
}

// Parses signed decimal strings, bubble-sorts the values and prints them back
// in decimal over the UART.
inline std::string strsort_small() {
  using namespace rv32;
  Asm a(0);
  a.ins(lui(s1, 0x10), "lui  s1, 0x10   ; parsed array at 0x10000");
  a.ins(lui(s0, 0x11), "lui  s0, 0x11   ; input text at 0x11000");
  a.ins(addi(s2, x0, 0), "li   s2, 0   ; count");
  a.label("parse_loop");
  a.ins(lb(t0, 0, s0), "lb   t0, 0(s0)");
  a.beq(t0, x0, "parse_done", "beqz t0, parse_done");
  a.ins(addi(t3, x0, 1), "li   t3, 1   ; sign");
  a.ins(addi(t1, x0, 45), "li   t1, '-'");
  a.bne(t0, t1, "digits", "bne  t0, t1, digits");
  a.ins(addi(t3, x0, -1), "li   t3, -1");
  a.ins(addi(s0, s0, 1), "addi s0, s0, 1");
  a.label("digits");
  a.ins(addi(t2, x0, 0), "li   t2, 0   ; accumulator");
  a.label("digit_loop");
  a.ins(lb(t0, 0, s0), "lb   t0, 0(s0)");
  a.ins(addi(t1, x0, 48), "li   t1, '0'");
  a.blt(t0, t1, "digits_done", "blt  t0, t1, digits_done");
  a.ins(addi(t1, x0, 58), "li   t1, '9'+1");
  a.bge(t0, t1, "digits_done", "bge  t0, t1, digits_done");
  a.ins(addi(t4, x0, 10), "li   t4, 10");
  a.ins(mul(t2, t2, t4), "mul  t2, t2, t4");
  a.ins(addi(t0, t0, -48), "addi t0, t0, -48");
  a.ins(add(t2, t2, t0), "add  t2, t2, t0");
  a.ins(addi(s0, s0, 1), "addi s0, s0, 1");
  a.jal(x0, "digit_loop", "j    digit_loop");
  a.label("digits_done");
  a.ins(mul(t2, t2, t3), "mul  t2, t2, t3   ; apply sign");
  a.ins(slli(t0, s2, 2), "slli t0, s2, 2");
  a.ins(add(t0, t0, s1), "add  t0, t0, s1");
  a.ins(sw(t2, 0, t0), "sw   t2, 0(t0)");
  a.ins(addi(s2, s2, 1), "addi s2, s2, 1");
  a.ins(lb(t0, 0, s0), "lb   t0, 0(s0)   ; separator");
  a.beq(t0, x0, "parse_done", "beqz t0, parse_done");
  a.ins(addi(s0, s0, 1), "addi s0, s0, 1");
  a.jal(x0, "parse_loop", "j    parse_loop");
  a.label("parse_done");
  a.ins(addi(t5, s2, -1), "addi t5, s2, -1   ; bubble sort, i = n-1");
  a.label("outer");
  a.bge(x0, t5, "sort_done", "blez t5, sort_done");
  a.ins(addi(t6, x0, 0), "li   t6, 0   ; j");
  a.label("inner");
  a.bge(t6, t5, "inner_done", "bge  t6, t5, inner_done");
  a.ins(slli(t0, t6, 2), "slli t0, t6, 2");
  a.ins(add(t0, t0, s1), "add  t0, t0, s1");
  a.ins(lw(t1, 0, t0), "lw   t1, 0(t0)");
  a.ins(lw(t2, 4, t0), "lw   t2, 4(t0)");
  a.bge(t2, t1, "no_swap", "bge  t2, t1, no_swap");
  a.ins(sw(t2, 0, t0), "sw   t2, 0(t0)");
  a.ins(sw(t1, 4, t0), "sw   t1, 4(t0)");
  a.label("no_swap");
  a.ins(addi(t6, t6, 1), "addi t6, t6, 1");
  a.jal(x0, "inner", "j    inner");
  a.label("inner_done");
  a.ins(addi(t5, t5, -1), "addi t5, t5, -1");
  a.jal(x0, "outer", "j    outer");
  a.label("sort_done");
  a.ins(addi(s3, x0, 0), "li   s3, 0   ; k");
  a.label("print_loop");
  a.bge(s3, s2, "all_done", "bge  s3, s2, all_done");
  a.ins(slli(t0, s3, 2), "slli t0, s3, 2");
  a.ins(add(t0, t0, s1), "add  t0, t0, s1");
  a.ins(lw(a0, 0, t0), "lw   a0, 0(t0)");
  a.jal(ra, "print_int", "jal  ra, print_int");
  a.ins(lui(t0, 0x10000), "lui  t0, 0x10000");
  a.ins(addi(t1, x0, 10), "li   t1, '\\n'");
  a.ins(sb(t1, 0, t0), "sb   t1, 0(t0)");
  a.ins(addi(s3, s3, 1), "addi s3, s3, 1");
  a.jal(x0, "print_loop", "j    print_loop");
  a.label("all_done");
  a.ins(lui(t0, 0x10000), "lui  t0, 0x10000");
  a.ins(sw(x0, 8, t0), "sw   x0, 8(t0)   ; halt 0");
  a.label("print_int");
  a.ins(lui(t0, 0x10000), "lui  t0, 0x10000");
  a.bge(a0, x0, "pi_pos", "bgez a0, pi_pos");
  a.ins(addi(t1, x0, 45), "li   t1, '-'");
  a.ins(sb(t1, 0, t0), "sb   t1, 0(t0)");
  a.ins(sub(a0, x0, a0), "neg  a0, a0");
  a.label("pi_pos");
  a.ins(addi(t2, x0, 0), "li   t2, 0   ; digit count");
  a.ins(lui(t3, 0x12), "lui  t3, 0x12   ; digit buffer at 0x12000");
  a.label("pi_digits");
  a.ins(addi(t4, x0, 10), "li   t4, 10");
  a.ins(remu(t5, a0, t4), "remu t5, a0, t4");
  a.ins(divu(a0, a0, t4), "divu a0, a0, t4");
  a.ins(addi(t5, t5, 48), "addi t5, t5, '0'");
  a.ins(add(t6, t3, t2), "add  t6, t3, t2");
  a.ins(sb(t5, 0, t6), "sb   t5, 0(t6)");
  a.ins(addi(t2, t2, 1), "addi t2, t2, 1");
  a.bne(a0, x0, "pi_digits", "bnez a0, pi_digits");
  a.label("pi_emit");
  a.ins(addi(t2, t2, -1), "addi t2, t2, -1");
  a.ins(add(t6, t3, t2), "add  t6, t3, t2");
  a.ins(lb(t5, 0, t6), "lb   t5, 0(t6)");
  a.ins(sb(t5, 0, t0), "sb   t5, 0(t0)   ; uart");
  a.bne(t2, x0, "pi_emit", "bnez t2, pi_emit");
  a.ins(jalr(x0, ra, 0), "ret");

  // parsed-value array (12 words)
  a.set_org(0x10000);
  a.comment("parsed values");
  for (int i = 0; i < 12; ++i) a.word(0);
  // input text, NUL-terminated
  a.set_org(0x11000);
  a.comment("input text: \"42 -7 1000 -250 88 0 -1 512 -9999 73 -64 305\"");
  const std::string text =
      "42\n-7\n1000\n-250\n88\n0\n-1\n512\n-9999\n73\n-64\n305\n";
  for (size_t i = 0; i < text.size() + 1; i += 4) {
    uint32_t w = 0;
    for (size_t b = 0; b < 4; ++b) {
      const size_t k = i + b;
      const uint8_t c = k < text.size() ? uint8_t(text[k]) : 0;
      w |= uint32_t(c) << (8 * b);
    }
    a.word(w);
  }
  // digit scratch buffer
  a.set_org(0x12000);
  a.comment("digit buffer");
  for (int i = 0; i < 4; ++i) a.word(0);
  return a.emit("strsort_small: parse signed decimals, sort, print");
}

inline std::string strsort_expected_output() {
  return "-9999\n-250\n-64\n-7\n-1\n0\n42\n73\n88\n305\n512\n1000\n";
}

// A forward branch taken exactly once, then not taken 100 times. A BTB with
// no dynamic predictor turns it into an always-taken branch.
inline std::string btb_regression() {
  using namespace rv32;
  Asm a(0);
  a.ins(addi(a0, x0, 0), "li   a0, 0   ; i");
  a.ins(addi(a1, x0, 101), "li   a1, 101");
  a.label("loop");
  a.beq(a0, x0, "taken_once", "beqz a0, taken_once   ; forward, taken on i==0 only");
  a.label("back");
  a.ins(addi(a0, a0, 1), "addi a0, a0, 1");
  a.blt(a0, a1, "loop", "blt  a0, a1, loop");
  a.ins(lui(t0, 0x10000), "lui  t0, 0x10000");
  a.ins(sw(x0, 8, t0), "sw   x0, 8(t0)   ; halt 0");
  a.label("taken_once");
  a.jal(x0, "back", "j    back");
  return a.emit("btb_regression: forward branch taken once, then never again");
}

}  // namespace fixtures
