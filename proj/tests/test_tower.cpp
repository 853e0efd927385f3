#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <string>
#include <vector>

#include "embcalc/tower.hpp"
#include "support/oracles.hpp"

using embcalc::ExtInt;
using embcalc::Factor;
using embcalc::invalid_argument;
using embcalc::layer_factors;
using embcalc::normalize;
using embcalc::precondition_violation;
using embcalc::render;
using embcalc::SpaceExpr;
using embcalc::unsupported_range;

namespace {
SpaceExpr loops_on_sphere(int a, int d) {
  return normalize(SpaceExpr::loop(a, SpaceExpr::sphere(d)));
}
} // namespace

TEST_CASE("layer factors for a point target", "[tower]") {
  auto single = layer_factors(2, 6, SpaceExpr::point(), ExtInt(50));
  REQUIRE(single.size() == 1);
  CHECK(single[0].word.letters() == std::string{2});
  CHECK(single[0].alpha == 1);
  CHECK(single[0].beta == 0);
  CHECK(single[0].expr == loops_on_sphere(2, 5));
  CHECK(single[0].conn == ExtInt(2));

  auto three = layer_factors(3, 6, SpaceExpr::point(), ExtInt(10));
  REQUIRE(three.size() == 3);
  CHECK(three[0].word.letters() == std::string{2, 3});
  CHECK(three[0].expr == loops_on_sphere(3, 9));
  CHECK(three[0].conn == ExtInt(5));
  CHECK(three[1].word.letters() == std::string{2, 2, 3});
  CHECK(three[2].word.letters() == std::string{2, 3, 3});
  for (int i : {1, 2}) {
    CHECK(three[static_cast<std::size_t>(i)].expr == loops_on_sphere(3, 13));
    CHECK(three[static_cast<std::size_t>(i)].conn == ExtInt(9));
  }
}

TEST_CASE("layer factors for a sphere target", "[tower]") {
  auto fs = layer_factors(2, 4, SpaceExpr::sphere(2), ExtInt(5));
  REQUIRE(fs.size() == 4);
  CHECK(fs[0].word.letters() == std::string{2});
  CHECK(fs[0].expr == loops_on_sphere(2, 3));
  CHECK(fs[0].conn == ExtInt(0));
  CHECK(fs[1].word.letters() == std::string{1, 2});
  CHECK(fs[1].expr == loops_on_sphere(2, 5));
  CHECK(fs[1].conn == ExtInt(2));
  CHECK(fs[2].word.letters() == std::string{1, 1, 2});
  CHECK(fs[3].word.letters() == std::string{1, 2, 2});
  for (int i : {2, 3}) {
    CHECK(fs[static_cast<std::size_t>(i)].expr == loops_on_sphere(2, 7));
    CHECK(fs[static_cast<std::size_t>(i)].conn == ExtInt(4));
  }
}

TEST_CASE("layer factor structure and completeness", "[tower]") {
  for (int k : {2, 3}) {
    for (int n : {4, 5}) {
      for (const SpaceExpr& y :
           {SpaceExpr::point(), SpaceExpr::sphere(n - 2),
            SpaceExpr::generic_cw("Y", ExtInt(0))}) {
        auto fs = layer_factors(k, n, y, ExtInt(7));
        ExtInt cy = connectivity(y);
        for (std::size_t i = 0; i < fs.size(); ++i) {
          const Factor& f = fs[i];
          CHECK(f.alpha + f.beta == f.word.weight());
          CHECK(f.alpha == embcalc::alpha(f.word));
          CHECK(f.beta == embcalc::beta(f.word));
          CHECK(embcalc::involves_all_but_first(f.word));
          CHECK(f.conn <= ExtInt(7));
          CHECK(f.conn == connectivity(f.expr));
          CHECK(f.expr ==
                normalize(SpaceExpr::loop(
                    k, SpaceExpr::susp(1 + f.alpha * (n - 2),
                                       SpaceExpr::smash_power(y, f.beta)))));
          // connectivity closed form for finite-connectivity targets
          if (cy.is_finite()) {
            int base = f.beta >= 1
                           ? f.beta * static_cast<int>(cy.value()) + f.beta - 1
                           : -1;
            CHECK(f.conn == ExtInt(base + 1 + f.alpha * (n - 2) - k));
          }
          if (i > 0) CHECK_FALSE(factor_order(f, fs[i - 1]));
        }

        // completeness against the brute-force word enumerator:
        // conn >= weight - k, so weight <= 7 + k covers everything
        std::map<std::string, int> expected;
        for (const auto& w : oracles::lyndon_words_bruteforce(k, 7 + k)) {
          auto content = oracles::content_of(w, k);
          bool missing = false;
          for (int i = 2; i <= k; ++i) missing |= content[static_cast<std::size_t>(i) - 1] == 0;
          if (missing) continue;
          int beta = content[0];
          int alpha = static_cast<int>(w.size()) - beta;
          SpaceExpr expr = normalize(SpaceExpr::loop(
              k, SpaceExpr::susp(1 + alpha * (n - 2), SpaceExpr::smash_power(y, beta))));
          ExtInt conn = connectivity(expr);
          if (conn.is_pos_inf() || ExtInt(7) < conn) continue;
          ++expected[w];
        }
        std::map<std::string, int> got;
        for (const auto& f : fs) ++got[f.word.letters()];
        CHECK(got == expected);
      }
    }
  }
}

TEST_CASE("layer factors match the cube-splitting pipeline", "[tower]") {
  for (int k = 2; k <= 4; ++k) {
    for (int n : {4, 5, 6}) {
      for (const SpaceExpr& y : {SpaceExpr::point(), SpaceExpr::sphere(n - 2)}) {
        auto direct = layer_factors(k, n, y, ExtInt(8));
        auto cube = embcalc::total_fiber_factors(embcalc::build_layer_cube(k, n, y), ExtInt(8));
        REQUIRE(direct.size() == cube.size());
        for (std::size_t i = 0; i < direct.size(); ++i) {
          CHECK(direct[i].word.letters() == cube[i].word.letters());
          CHECK(direct[i].expr == cube[i].expr);
          CHECK(direct[i].conn == cube[i].conn);
        }
      }
    }
  }
}

TEST_CASE("layer factors are monotone in the cutoff", "[tower]") {
  auto small = layer_factors(3, 4, SpaceExpr::sphere(2), ExtInt(4));
  auto large = layer_factors(3, 4, SpaceExpr::sphere(2), ExtInt(9));
  REQUIRE(small.size() <= large.size());
  std::map<std::string, int> in_large;
  for (const auto& f : large) ++in_large[f.word.letters()];
  for (const auto& f : small) {
    CHECK(in_large.count(f.word.letters()) == 1);
  }
  for (const auto& f : large)
    if (f.conn <= ExtInt(4)) {
      bool found = false;
      for (const auto& g : small) found |= g.word.letters() == f.word.letters();
      CHECK(found);
    }
}

TEST_CASE("layer factor argument validation", "[tower]") {
  CHECK_THROWS_AS(layer_factors(1, 6, SpaceExpr::point(), ExtInt(5)), invalid_argument);
  CHECK_THROWS_AS(layer_factors(2, 3, SpaceExpr::point(), ExtInt(5)), unsupported_range);
  CHECK_THROWS_AS(layer_factors(2, 6, SpaceExpr::sphere(0), ExtInt(5)), invalid_argument);
  CHECK_THROWS_AS(layer_factors(2, 6, SpaceExpr::point(), ExtInt::pos_inf()), invalid_argument);
  CHECK(layer_factors(2, 6, SpaceExpr::point(), ExtInt::neg_inf()).empty());
  CHECK(layer_factors(2, 6, SpaceExpr::point(), ExtInt(-10)).empty());
}

TEST_CASE("tower summary stages", "[tower]") {
  auto t = embcalc::tower_summary(6, SpaceExpr::point(), 2, ExtInt(50));
  REQUIRE(t.stages.size() == 2);
  CHECK(t.n == 6);
  CHECK(t.target == "*");
  CHECK(t.stages[0].k == 1);
  CHECK(t.stages[0].description == "immersions");
  CHECK(t.stages[0].factors.empty());
  CHECK_FALSE(t.stages[0].forgetful_conn.has_value());
  CHECK(t.stages[1].k == 2);
  REQUIRE(t.stages[1].factors.size() == 1);
  CHECK(t.stages[1].factors[0].expr == loops_on_sphere(2, 5));
  REQUIRE(t.stages[1].forgetful_conn.has_value());
  CHECK(*t.stages[1].forgetful_conn == ExtInt(3)); // -3 + 2(4-1)

  auto t1 = embcalc::tower_summary(4, SpaceExpr::point(), 1, ExtInt(5));
  REQUIRE(t1.stages.size() == 1);
  CHECK(t1.stages[0].description == "immersions");

  auto t5 = embcalc::tower_summary(5, SpaceExpr::point(), 3, ExtInt(8));
  REQUIRE(t5.stages.size() == 3);
  REQUIRE(t5.stages[1].factors.size() == 1);
  CHECK(t5.stages[1].factors[0].expr == loops_on_sphere(2, 4));
  CHECK(t5.stages[1].factors[0].conn == ExtInt(1));
  CHECK(*t5.stages[1].forgetful_conn == ExtInt(2)); // -2 + 2(3-1)
  REQUIRE(t5.stages[2].factors.size() == 3);
  CHECK(t5.stages[2].factors[0].expr == loops_on_sphere(3, 7));
  CHECK(t5.stages[2].factors[0].conn == ExtInt(3));
  CHECK(t5.stages[2].factors[1].expr == loops_on_sphere(3, 10));
  CHECK(t5.stages[2].factors[2].expr == loops_on_sphere(3, 10));
  CHECK(t5.stages[2].factors[1].conn == ExtInt(6));
  CHECK(*t5.stages[2].forgetful_conn == ExtInt(4)); // -2 + 3(3-1)

  auto tq = embcalc::tower_summary(6, SpaceExpr::point(), 2, ExtInt(20), ExtInt(0));
  CHECK(*tq.stages[1].forgetful_conn == ExtInt(5)); // -3 + 2*4
  auto tcollar = embcalc::tower_summary(6, SpaceExpr::point(), 2, ExtInt(20), ExtInt::neg_inf());
  CHECK(tcollar.stages[1].forgetful_conn->is_pos_inf());

  CHECK_THROWS_AS(embcalc::tower_summary(6, SpaceExpr::point(), 0, ExtInt(5)),
                  invalid_argument);
  CHECK_THROWS_AS(embcalc::tower_summary(6, SpaceExpr::point(), 2, ExtInt(5), ExtInt(4)),
                  precondition_violation);
  CHECK_THROWS_AS(embcalc::tower_summary(3, SpaceExpr::point(), 2, ExtInt(5)),
                  unsupported_range);
}

TEST_CASE("knot tower", "[tower]") {
  auto kt = embcalc::knot_tower(6, 2, ExtInt(50));
  REQUIRE(kt.tower.stages.size() == 2);
  CHECK(kt.tower.stages[1].factors.size() == 1);
  CHECK(kt.fibration.base_dim == 11);
  CHECK(kt.fibration.base_conn == ExtInt(4));
  CHECK(kt.fibration.base.find("V_2(R^7)") != std::string::npos);
  CHECK(kt.fibration.fiber.find("R^5") != std::string::npos);
  CHECK(kt.fibration.total.find("S^6") != std::string::npos);

  auto k4 = embcalc::knot_tower(4, 2, ExtInt(50));
  REQUIRE(k4.tower.stages[1].factors.size() == 1);
  CHECK(k4.tower.stages[1].factors[0].expr == loops_on_sphere(2, 3));
  CHECK(k4.tower.stages[1].factors[0].conn == ExtInt(0));
  CHECK(k4.fibration.base_dim == 7);
  CHECK(k4.fibration.base_conn == ExtInt(2));

  CHECK_THROWS_AS(embcalc::knot_tower(3, 2, ExtInt(10)), unsupported_range);
}
