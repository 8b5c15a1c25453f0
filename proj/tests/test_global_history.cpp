#include <catch2/catch.hpp>

#include <deque>
#include <random>

#include "bplab/global_history.hpp"

using namespace bplab;

namespace {

// Independent oracle: refold the newest bits from a shadow history kept as a
// plain sequence.
struct ShadowHistory {
  std::deque<uint8_t> bits;  // front = newest

  void push(bool b) { bits.push_front(b ? 1 : 0); }
  void truncate_to(size_t size) { bits.erase(bits.begin(), bits.begin() + (bits.size() - size)); }
  size_t size() const { return bits.size(); }

  uint32_t fold(const FoldSpec& s) const {
    uint32_t f = 0;
    for (unsigned a = 0; a < s.history_length; ++a) {
      const uint8_t bit = a < bits.size() ? bits[a] : 0;
      f ^= uint32_t(bit) << (a % s.output_width);
    }
    return f;
  }
};

std::vector<FoldSpec> test_specs() {
  return {{4, 10}, {7, 10}, {13, 9}, {24, 10}, {43, 9},
          {78, 10}, {141, 9}, {256, 10}, {5, 1}, {31, 3}};
}

void expect_all_folds(const GlobalHistory& h, const ShadowHistory& shadow) {
  for (size_t i = 0; i < h.specs().size(); ++i) {
    CAPTURE(i, h.specs()[i].history_length, h.specs()[i].output_width);
    REQUIRE(h.fold(i) == shadow.fold(h.specs()[i]));
  }
}

}  // namespace

TEST_CASE("buffer is sized beyond the longest window") {
  GlobalHistory h(test_specs());
  CHECK(h.max_history() == 256);
  CHECK(h.buffer_size() >= 256 + 8);
  CHECK((h.buffer_size() & (h.buffer_size() - 1)) == 0);
}

TEST_CASE("pushing zeros keeps every fold at zero") {
  GlobalHistory h(test_specs());
  for (int i = 0; i < 64; ++i) h.push(false);
  for (size_t i = 0; i < h.specs().size(); ++i) CHECK(h.fold(i) == 0);
}

TEST_CASE("program-style iteration pattern 011 111") {
  GlobalHistory h(test_specs());
  ShadowHistory shadow;
  for (int iter = 0; iter < 30; ++iter) {
    const bool odd = iter % 2 != 0;
    for (const bool b : {odd, true, true}) {
      h.push(b);
      shadow.push(b);
      expect_all_folds(h, shadow);
    }
  }
  // newest bits read back the pattern (newest first: iteration k then k-1...)
  CHECK(h.bit(0) == true);
  CHECK(h.bit(1) == true);
  CHECK(h.bit(2) == true);  // last iteration was odd
  CHECK(h.bit(5) == false); // the one before was even
}

TEST_CASE("incremental folds equal the scratch refold after random pushes") {
  std::mt19937 rng(42);
  GlobalHistory h(test_specs());
  ShadowHistory shadow;
  for (int i = 0; i < 3000; ++i) {
    const bool b = rng() & 1;
    h.push(b);
    shadow.push(b);
    expect_all_folds(h, shadow);
  }
}

TEST_CASE("checkpoint/restore returns to the exact observable state") {
  GlobalHistory h(test_specs());
  for (int i = 0; i < 100; ++i) h.push(i % 3 == 0);

  SECTION("single-step undo") {
    const auto cp = h.checkpoint();
    const auto folds_before = cp.folds;
    h.push(true);
    h.restore(cp);
    for (size_t i = 0; i < h.specs().size(); ++i)
      CHECK(h.fold(i) == folds_before[i]);
  }
  SECTION("restore then replay gives the same state as never restoring") {
    GlobalHistory twin = h;
    const auto cp = h.checkpoint();
    h.push(true);
    h.push(false);
    h.push(true);
    h.restore(cp);
    for (const bool b : {true, false, true}) {
      h.push(b);
      twin.push(b);
    }
    for (size_t i = 0; i < h.specs().size(); ++i)
      CHECK(h.fold(i) == twin.fold(i));
    for (unsigned a = 0; a < h.max_history(); ++a)
      CHECK(h.bit(a) == twin.bit(a));
  }
}

TEST_CASE("randomized checkpoint/push/restore keeps folds exact") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    GlobalHistory h(test_specs());
    ShadowHistory shadow;
    auto cp = h.checkpoint();
    size_t shadow_cp = 0;
    uint64_t since_cp = 0;
    const uint64_t margin = h.buffer_size() - h.max_history();

    for (int i = 0; i < 400; ++i) {
      const int roll = int(rng() % 10);
      if (roll < 6) {
        const bool b = rng() & 1;
        h.push(b);
        shadow.push(b);
        ++since_cp;
      } else if (roll < 8 || since_cp + 2 > margin) {
        cp = h.checkpoint();
        shadow_cp = shadow.size();
        since_cp = 0;
      } else {
        h.restore(cp);
        shadow.truncate_to(shadow_cp);
      }
      expect_all_folds(h, shadow);
    }
  }
}

TEST_CASE("expired checkpoint is a contract violation") {
  GlobalHistory h({{8, 4}});
  const auto cp = h.checkpoint();
  const uint64_t margin = h.buffer_size() - h.max_history();
  for (uint64_t i = 0; i <= margin; ++i) h.push(true);
  CHECK_THROWS_AS(h.restore(cp), std::logic_error);
}
