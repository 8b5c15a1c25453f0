#include <catch2/catch.hpp>

#include <random>

#include "bplab/static_predictor.hpp"

using namespace bplab;

TEST_CASE("static prediction rules") {
  SECTION("direct jump redirects to pc+imm") {
    const DecodedCt ct{CtKind::DirectJump, 8, 0, 0, false, false};
    const auto p = predict_at_decode(ct, 0x100);
    CHECK(p.predicted_taken);
    REQUIRE(p.redirect.has_value());
    CHECK(*p.redirect == 0x108);
  }
  SECTION("backward branch predicted taken") {
    const DecodedCt ct{CtKind::CondBranch, -16, 0, 0, false, false};
    const auto p = predict_at_decode(ct, 0x100);
    CHECK(p.predicted_taken);
    CHECK(*p.redirect == 0xF0);
  }
  SECTION("forward branch predicted not taken") {
    const DecodedCt ct{CtKind::CondBranch, 32, 0, 0, false, false};
    const auto p = predict_at_decode(ct, 0x100);
    CHECK_FALSE(p.predicted_taken);
    CHECK_FALSE(p.redirect.has_value());
  }
  SECTION("indirect jump gets no prediction") {
    const DecodedCt ct{CtKind::IndirectJump, 0, 0, 10, false, false};
    const auto p = predict_at_decode(ct, 0x100);
    CHECK_FALSE(p.predicted_taken);
    CHECK_FALSE(p.redirect.has_value());
  }
}

TEST_CASE("BTFNT is exactly the sign of the immediate") {
  std::mt19937 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const int32_t imm = (int32_t(rng() % 4096) - 2048) * 2;
    const DecodedCt ct{CtKind::CondBranch, imm, 0, 0, false, false};
    const auto p = predict_at_decode(ct, 0x1000);
    CHECK(p.predicted_taken == (imm < 0));
    CHECK(p.redirect.has_value() == p.predicted_taken);
  }
  // degenerate branch-to-self counts as forward
  const DecodedCt zero{CtKind::CondBranch, 0, 0, 0, false, false};
  CHECK_FALSE(predict_at_decode(zero, 0x1000).predicted_taken);
}
