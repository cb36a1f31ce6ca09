#include "doctest.h"

#include <random>

#include "longctrl/brake_warmup.hpp"

using namespace longctrl;

TEST_CASE("warmup pressure") {
  WarmupConfig cfg;  // disable above 4 m/s^2, 4 laps, 450 degC
  cfg.p_warmup = 4.0e5;

  SUBCASE("applies while cold, early, and driving straight") {
    BrakeWarmup w(cfg);
    CHECK(w.pressure(0.0, 80.0, 0) == doctest::Approx(4.0e5));
    CHECK_FALSE(w.disabled());
  }
  SUBCASE("lateral acceleration disable is transient") {
    BrakeWarmup w(cfg);
    CHECK(w.pressure(5.0, 80.0, 0) == 0.0);
    CHECK(w.pressure(-4.5, 80.0, 0) == 0.0);  // sign-independent
    CHECK_FALSE(w.disabled());
    CHECK(w.pressure(0.0, 80.0, 0) == doctest::Approx(4.0e5));  // recovers
    CHECK(w.pressure(4.0, 80.0, 0) == doctest::Approx(4.0e5));  // at threshold: keep
  }
  SUBCASE("temperature disable latches") {
    BrakeWarmup w(cfg);
    CHECK(w.pressure(0.0, 450.0, 0) == 0.0);
    CHECK(w.disabled());
    // Even after the disc cools back down the warmup stays off.
    CHECK(w.pressure(0.0, 100.0, 0) == 0.0);
    CHECK(w.disabled());
  }
  SUBCASE("lap budget disable latches") {
    BrakeWarmup w(cfg);
    CHECK(w.pressure(0.0, 80.0, 3) == doctest::Approx(4.0e5));
    CHECK(w.pressure(0.0, 80.0, 4) == 0.0);
    CHECK(w.disabled());
    CHECK(w.pressure(0.0, 80.0, 0) == 0.0);  // lap counter cannot rearm it
  }
  SUBCASE("cornering during the latch tick still latches") {
    BrakeWarmup w(cfg);
    CHECK(w.pressure(6.0, 500.0, 0) == 0.0);
    CHECK(w.disabled());
  }
}

TEST_CASE("warmup merge never reduces the braking command") {
  CHECK(merge_warmup(0.0, 4.0e5) == doctest::Approx(4.0e5));
  CHECK(merge_warmup(9.0e5, 4.0e5) == doctest::Approx(9.0e5));
  CHECK(merge_warmup(0.0, 0.0) == 0.0);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pd(0.0, 2.0e6);
  for (int i = 0; i < 1000; ++i) {
    const double target = pd(rng);
    const double warm = pd(rng);
    const double merged = merge_warmup(target, warm);
    CHECK(merged >= target);
    CHECK(merged >= warm);
    CHECK((merged == target || merged == warm));
  }
}

TEST_CASE("warmup config validation") {
  WarmupConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("negative pressure") {
    cfg.p_warmup = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("negative threshold") {
    cfg.ay_disable_threshold = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("negative lap budget") {
    cfg.max_laps = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}
