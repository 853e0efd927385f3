#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "embcalc/words.hpp"
#include "support/oracles.hpp"

using embcalc::BasicWord;
using embcalc::MultiDegree;
using embcalc::enumerate_basic_words;
using embcalc::invalid_argument;
using embcalc::witt_count;

namespace {

std::vector<std::string> flatten(const std::vector<BasicWord>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.letters());
  return out;
}

} // namespace

TEST_CASE("brute-force Lyndon oracle sanity", "[words][oracle]") {
  CHECK(oracles::is_lyndon_bruteforce({1, 2}));
  CHECK(oracles::is_lyndon_bruteforce({1, 1, 2}));
  CHECK_FALSE(oracles::is_lyndon_bruteforce({2, 1}));
  CHECK_FALSE(oracles::is_lyndon_bruteforce({1, 1}));        // periodic
  CHECK_FALSE(oracles::is_lyndon_bruteforce({1, 2, 1, 2})); // periodic
  // Witt's formula instance: 2-letter words of length 6 number (2^6 - 2^3 - 2^2 + 2)/6 = 9.
  int count6 = 0;
  for (const auto& w : oracles::lyndon_words_bruteforce(2, 6))
    if (w.size() == 6) ++count6;
  CHECK(count6 == 9);
}

TEST_CASE("membership agrees with the brute-force oracle", "[words]") {
  for (int k = 1; k <= 3; ++k) {
    int max_len = k == 3 ? 5 : 7;
    std::set<std::string> expected;
    for (const auto& w : oracles::lyndon_words_bruteforce(k, max_len)) expected.insert(w);
    std::set<std::string> got;
    for (const auto& w : enumerate_basic_words(k, max_len)) got.insert(w.letters());
    CHECK(got == expected);

    // and the validating constructor accepts exactly the oracle's members
    std::vector<std::string> level{""};
    for (int len = 1; len <= max_len; ++len) {
      std::vector<std::string> next;
      for (const auto& s : level)
        for (char c = 1; c <= static_cast<char>(k); ++c) next.push_back(s + c);
      for (const auto& s : next) {
        if (expected.count(s))
          CHECK_NOTHROW(BasicWord(s, k));
        else
          CHECK_THROWS_AS(BasicWord(s, k), invalid_argument);
      }
      level = std::move(next);
    }
  }
}

TEST_CASE("counts per multidegree equal witt_count and the oracle", "[words]") {
  for (int k = 1; k <= 4; ++k) {
    auto oracle_counts = oracles::lyndon_counts_by_content(k, 8);
    std::map<std::vector<int>, std::int64_t> got;
    for (const auto& w : enumerate_basic_words(k, 8)) ++got[w.multidegree().degrees];
    CHECK(got == oracle_counts);
    for (const auto& [deg, cnt] : oracle_counts)
      CHECK(witt_count(MultiDegree{deg}) == cnt);
  }
  // multidegrees with no Lyndon word at all (periodic-only contents)
  CHECK(witt_count(MultiDegree{{2, 0}}) == 0);
  CHECK(witt_count(MultiDegree{{0, 0, 3}}) == 0);
}

TEST_CASE("witt_count worked values", "[words]") {
  CHECK(witt_count(MultiDegree{{1, 1}}) == 1);
  CHECK(witt_count(MultiDegree{{1, 1, 1}}) == 2);
  CHECK(witt_count(MultiDegree{{2, 2}}) == 1);
  CHECK(witt_count(MultiDegree{{1}}) == 1);
  CHECK(witt_count(MultiDegree{{5, 0}}) == 0);
}

TEST_CASE("enumeration listings", "[words]") {
  CHECK(flatten(enumerate_basic_words(1, 3)) == std::vector<std::string>{{1}});

  CHECK(flatten(enumerate_basic_words(2, 2)) ==
        std::vector<std::string>{{1}, {2}, {1, 2}});

  auto w23 = enumerate_basic_words(2, 3);
  CHECK(flatten(w23) == std::vector<std::string>{{1}, {2}, {1, 2}, {1, 1, 2}, {1, 2, 2}});
  CHECK(w23[3].multidegree().degrees == std::vector<int>{2, 1});
  CHECK(w23[4].multidegree().degrees == std::vector<int>{1, 2});
  CHECK(w23[3].str() == "[z1,[z1,z2]]");
  CHECK(w23[4].str() == "[[z1,z2],z2]");

  // deterministic across calls
  CHECK(flatten(enumerate_basic_words(3, 6)) == flatten(enumerate_basic_words(3, 6)));

  CHECK_THROWS_AS(enumerate_basic_words(0, 3), invalid_argument);
  CHECK_THROWS_AS(enumerate_basic_words(2, 0), invalid_argument);
}

TEST_CASE("enumeration order: weight, then z1-heavy multidegree, then letters", "[words]") {
  auto ws = enumerate_basic_words(3, 6);
  for (std::size_t i = 1; i < ws.size(); ++i) {
    const auto &a = ws[i - 1], &b = ws[i];
    CHECK(a.weight() <= b.weight());
    if (a.weight() == b.weight()) {
      auto da = a.multidegree().degrees, db = b.multidegree().degrees;
      CHECK(da >= db); // descending lexicographic on degree vectors
      if (da == db) CHECK(a.letters() < b.letters());
    }
  }
}

TEST_CASE("standard bracketing splits at the least proper suffix", "[words]") {
  for (const auto& w : enumerate_basic_words(3, 6)) {
    if (w.is_letter()) {
      CHECK_THROWS_AS(w.bracket(), invalid_argument);
      continue;
    }
    auto [l, r] = w.bracket();
    CHECK(l.letters() + r.letters() == w.letters());
    CHECK(l.letters() < r.letters());
    CHECK(oracles::is_lyndon_bruteforce(l.letters()));
    CHECK(oracles::is_lyndon_bruteforce(r.letters()));
    // r is the lexicographically least proper suffix
    for (std::size_t i = 1; i < w.letters().size(); ++i)
      CHECK(r.letters() <= w.letters().substr(i));
  }
  CHECK(BasicWord({1, 1, 2, 2}, 2).str() == "[z1,[[z1,z2],z2]]");
  CHECK(BasicWord({1, 1, 2, 1, 2, 2}, 2).str() == "[z1,[[z1,z2],[[z1,z2],z2]]]");
}

TEST_CASE("alpha, beta, involves_all_but_first", "[words]") {
  CHECK(embcalc::alpha(BasicWord({1}, 2)) == 0);
  CHECK(embcalc::alpha(BasicWord({1, 2}, 2)) == 1);
  CHECK(embcalc::alpha(BasicWord({1, 2, 2}, 2)) == 2);
  CHECK(embcalc::beta(BasicWord({1}, 2)) == 1);
  CHECK(embcalc::beta(BasicWord({2}, 2)) == 0);
  CHECK(embcalc::beta(BasicWord({1, 1, 2}, 2)) == 2);

  CHECK(embcalc::involves_all_but_first(BasicWord({2}, 2)));
  CHECK_FALSE(embcalc::involves_all_but_first(BasicWord({1, 2}, 3)));
  CHECK(embcalc::involves_all_but_first(BasicWord({1, 2, 3}, 3)));

  for (const auto& w : enumerate_basic_words(4, 6))
    CHECK(embcalc::alpha(w) + embcalc::beta(w) == w.weight());
}

TEST_CASE("word construction rejects bad input", "[words]") {
  CHECK_THROWS_AS(BasicWord("", 2), invalid_argument);
  CHECK_THROWS_AS(BasicWord({1, 2}, 0), invalid_argument);
  CHECK_THROWS_AS(BasicWord({3}, 2), invalid_argument);
  CHECK_THROWS_AS(BasicWord({2, 1}, 2), invalid_argument);
  CHECK_THROWS_AS(BasicWord({1, 2, 1, 2}, 2), invalid_argument);
  CHECK_NOTHROW(BasicWord({1, 1, 2, 2}, 2));
}
