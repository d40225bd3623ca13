#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "domscore/style_metrics.hpp"
#include "support/builders.hpp"

using namespace domscore;
using namespace test_support;

TEST_CASE("color_sim") {
  CHECK(color_sim({0, 0, 0}, {0, 0, 0}) == 1.0);
  CHECK(color_sim({0, 0, 0}, {255, 255, 255}) == 0.0);
  CHECK(color_sim({255, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(color_sim({255, 0, 0}, {0, 0, 0}) == doctest::Approx(0.4226).epsilon(1e-4));
}

TEST_CASE("background_sim folds alpha into the distance") {
  CHECK(background_sim({10, 20, 30, 0.5}, {10, 20, 30, 0.5}) == 1.0);
  CHECK(background_sim({255, 255, 255, 1.0}, {255, 255, 255, 0.0}) == 0.5);
  CHECK(background_sim({0, 0, 0, 0.0}, {255, 255, 255, 1.0}) == 0.0);
  CHECK(background_sim({255, 255, 255, 1.0}, {0, 0, 0, 1.0}) == doctest::Approx(1.0 - std::sqrt(3.0) / 2.0));
}

TEST_CASE("scalar_sim") {
  CHECK(scalar_sim(16, 16) == 1.0);
  CHECK(scalar_sim(16, 12) == 0.75);
  CHECK(scalar_sim(12, 16) == 0.75);
  CHECK(scalar_sim(0, 0) == 1.0);
  CHECK(scalar_sim(0, 8) == 0.0);
}

TEST_CASE("attribute similarities are symmetric and bounded") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> ch(0, 255);
  std::uniform_real_distribution<double> unit(0.0, 1.0), len(0.0, 64.0);
  auto c8 = [&] { return static_cast<std::uint8_t>(ch(rng)); };
  for (int i = 0; i < 2000; ++i) {
    const Rgb a{c8(), c8(), c8()}, b{c8(), c8(), c8()};
    const Rgba ba{c8(), c8(), c8(), unit(rng)}, bb{c8(), c8(), c8(), unit(rng)};
    const double x = len(rng), y = len(rng);
    for (double s : {color_sim(a, b), background_sim(ba, bb), scalar_sim(x, y)}) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    CHECK(color_sim(a, b) == color_sim(b, a));
    CHECK(background_sim(ba, bb) == background_sim(bb, ba));
    CHECK(scalar_sim(x, y) == scalar_sim(y, x));
  }
}

TEST_CASE("sda_page") {
  SUBCASE("identical pages") {
    for (const auto& page : identity_fixtures()) {
      CHECK(sda_page(associate(page, page), build_groups(page), page, page) == 100.0);
    }
  }
  SUBCASE("sole pair differing only in font size") {
    const auto ref = make_page({el("p", {100, 100, 200, 20}, "Pricing")});
    auto cand = ref;
    cand.elements[0].styles.font_size = 12.0;
    const auto scores = style_scores(associate(cand, ref), build_groups(ref), cand, ref);
    REQUIRE(scores.per_pair.size() == 1);
    CHECK(scores.per_pair[0].font_sim == 0.75);
    CHECK(scores.per_pair[0].element_sim == 0.9375);
    CHECK(scores.sda == 93.75);
  }
  SUBCASE("no associated pairs") {
    const auto ref = make_page({el("p", {100, 100, 200, 20}, "Pricing")});
    CHECK(sda_page(AssociationMap{}, build_groups(ref), PageSnapshot{}, ref) == 0.0);
  }
  SUBCASE("attribute list is configurable") {
    const auto ref = make_page({el("p", {100, 100, 200, 20}, "Pricing")});
    auto cand = ref;
    cand.elements[0].styles.font_size = 12.0;
    const auto assoc = associate(cand, ref);
    const auto groups = build_groups(ref);
    CHECK(sda_page(assoc, groups, cand, ref, {{StyleAttribute::font_size}}) == 75.0);
    CHECK(sda_page(assoc, groups, cand, ref, {{StyleAttribute::color, StyleAttribute::border_radius}}) == 100.0);
    CHECK_THROWS_AS(sda_page(assoc, groups, cand, ref, StyleOptions{{}}), DomainError);
  }
}

TEST_CASE("sda never increases as font size drifts further") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ref = random_page(rng, 1, 30);
    const auto assoc = associate(ref, ref);
    const auto groups = build_groups(ref);
    double previous = 101.0;
    for (double delta = 0; delta <= 40; delta += 0.5) {
      auto cand = ref;
      for (auto& e : cand.elements) e.styles.font_size += delta;
      const double sda = sda_page(assoc, groups, cand, ref);
      REQUIRE(sda <= previous + 1e-12);
      REQUIRE(sda >= 0.0);
      previous = sda;
    }
  }
}
