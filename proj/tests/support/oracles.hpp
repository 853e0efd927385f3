#pragma once

// Brute-force reference implementations for the test suite. Everything here
// is written against the definitions only, independent of the library's data
// structures and algorithms, so that agreement is evidence rather than
// tautology.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracles {

// A word is Lyndon iff it is strictly smaller than every proper rotation,
// checked on explicitly materialized rotation strings.
inline bool is_lyndon_bruteforce(const std::string& w) {
  for (std::size_t r = 1; r < w.size(); ++r) {
    std::string rot = w.substr(r) + w.substr(0, r);
    if (!(w < rot)) return false;
  }
  return !w.empty();
}

// Every Lyndon word over {1..k} of length <= max_len, by filtering all
// strings, in generation order (length, then lexicographic).
inline std::vector<std::string> lyndon_words_bruteforce(int k, int max_len) {
  std::vector<std::string> out;
  std::vector<std::string> level{""};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& s : level)
      for (char c = 1; c <= k; ++c) next.push_back(s + c);
    for (const auto& s : next)
      if (is_lyndon_bruteforce(s)) out.push_back(s);
    level = std::move(next);
  }
  return out;
}

// Letter-content histogram of a word over {1..k}.
inline std::vector<int> content_of(const std::string& w, int k) {
  std::vector<int> d(static_cast<std::size_t>(k), 0);
  for (char c : w) ++d[static_cast<std::size_t>(c) - 1];
  return d;
}

// Lyndon-word count per content, brute force.
inline std::map<std::vector<int>, std::int64_t> lyndon_counts_by_content(int k, int max_len) {
  std::map<std::vector<int>, std::int64_t> counts;
  for (const auto& w : lyndon_words_bruteforce(k, max_len)) ++counts[content_of(w, k)];
  return counts;
}

} // namespace oracles
