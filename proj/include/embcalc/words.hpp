#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "embcalc/errors.hpp"

namespace embcalc {

/* Basic products in the free Lie algebra on letters z_1 < z_2 < ... < z_k.
 *
 * The Hall set used throughout is the set of Lyndon words with the standard
 * bracketing (Lothaire, "Combinatorics on Words", ch. 5): a word is Lyndon if
 * it is strictly smaller than each of its proper rotations, and a Lyndon word
 * w of length >= 2 brackets as [u, v] where v is the longest proper Lyndon
 * suffix of w (equivalently, its lexicographically least proper suffix).
 */

using Letter = std::uint8_t; // 1-based letter index

// Exponent vector of a word: degrees[i] counts occurrences of z_{i+1}.
struct MultiDegree {
  std::vector<int> degrees;

  int weight() const { return std::accumulate(degrees.begin(), degrees.end(), 0); }

  friend bool operator==(const MultiDegree&, const MultiDegree&) = default;
};

class BasicWord;

namespace detail {
BasicWord basic_word_unchecked(std::string letters, int k);
}

class BasicWord {
public:
  // `letters` must be a Lyndon word over {1, ..., k}.
  BasicWord(std::string letters, int k) : letters_(std::move(letters)), k_(k) {
    if (k_ < 1) throw invalid_argument("BasicWord: alphabet size must be >= 1");
    if (letters_.empty()) throw invalid_argument("BasicWord: empty word");
    for (char c : letters_)
      if (c < 1 || c > k_) throw invalid_argument("BasicWord: letter out of range");
    if (!is_lyndon(letters_)) throw invalid_argument("BasicWord: not a Lyndon word");
  }

  int alphabet_size() const { return k_; }
  int weight() const { return static_cast<int>(letters_.size()); }
  bool is_letter() const { return letters_.size() == 1; }

  // The single letter, for weight-1 words.
  Letter letter() const {
    if (!is_letter()) throw invalid_argument("BasicWord: letter() on a bracket");
    return static_cast<Letter>(letters_[0]);
  }

  // Flattened letter sequence, values in 1..k.
  const std::string& letters() const { return letters_; }

  MultiDegree multidegree() const {
    MultiDegree d{std::vector<int>(static_cast<std::size_t>(k_), 0)};
    for (char c : letters_) ++d.degrees[static_cast<std::size_t>(c) - 1];
    return d;
  }

  // Standard bracketing: w = [left, right], right the longest proper Lyndon suffix.
  std::pair<BasicWord, BasicWord> bracket() const {
    if (is_letter()) throw invalid_argument("BasicWord: bracket() on a letter");
    std::size_t cut = standard_cut(letters_);
    return {BasicWord(letters_.substr(0, cut), k_), BasicWord(letters_.substr(cut), k_)};
  }

  // Rendered with 1-based letters, e.g. "[z1,[z1,z2]]".
  std::string str() const {
    if (is_letter()) return "z" + std::to_string(static_cast<int>(letters_[0]));
    auto [l, r] = bracket();
    return "[" + l.str() + "," + r.str() + "]";
  }

  friend bool operator==(const BasicWord& a, const BasicWord& b) {
    return a.k_ == b.k_ && a.letters_ == b.letters_;
  }

  static bool is_lyndon(const std::string& w) {
    // w < every proper rotation (implies aperiodicity).
    std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t i = 0; i < n; ++i) {
        char a = w[i], b = w[(r + i) % n];
        if (a != b) {
          if (a > b) return false;
          break;
        }
        if (i + 1 == n) return false; // periodic
      }
    return true;
  }

private:
  struct unchecked_tag {};
  BasicWord(unchecked_tag, std::string letters, int k)
      : letters_(std::move(letters)), k_(k) {}
  friend BasicWord detail::basic_word_unchecked(std::string, int);

  static std::size_t standard_cut(const std::string& w) {
    // Lexicographically least proper suffix = standard right factor.
    std::size_t best = 1;
    for (std::size_t i = 2; i < w.size(); ++i)
      if (w.compare(i, std::string::npos, w, best, std::string::npos) < 0) best = i;
    return best;
  }

  std::string letters_;
  int k_;
};

namespace detail {
// For enumerators that produce Lyndon words by construction.
inline BasicWord basic_word_unchecked(std::string letters, int k) {
  return BasicWord(BasicWord::unchecked_tag{}, std::move(letters), k);
}
} // namespace detail

// Output order for word listings: weight, then multidegree (descending
// lexicographic, so words heavier in z_1 come first: z1 before z2, (2,1)
// before (1,2)), then the flattened letter string. The string overload
// avoids allocating multidegrees; large factor lists sort with it.
inline bool word_order_less(const std::string& a, const std::string& b, int k) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (int v = 1; v <= k; ++v) {
    int ca = 0, cb = 0;
    for (char c : a) ca += (c == v);
    for (char c : b) cb += (c == v);
    if (ca != cb) return ca > cb;
  }
  return a < b;
}

inline bool word_order_less(const BasicWord& a, const BasicWord& b) {
  return word_order_less(a.letters(), b.letters(), a.alphabet_size());
}

namespace detail {

// Duval's algorithm: all Lyndon words over {lo..hi} of length <= max_len,
// in lexicographic order. Visit receives the flattened letter string.
template <typename Visit>
void duval_lyndon(int lo, int hi, int max_len, Visit&& visit) {
  std::string w(1, static_cast<char>(lo));
  while (true) {
    visit(static_cast<const std::string&>(w));
    // extend periodically to max_len, then increment the last letter
    std::string ext;
    ext.reserve(static_cast<std::size_t>(max_len));
    for (int i = 0; i < max_len; ++i) ext.push_back(w[static_cast<std::size_t>(i) % w.size()]);
    w = std::move(ext);
    while (!w.empty() && w.back() == static_cast<char>(hi)) w.pop_back();
    if (w.empty()) return;
    ++w.back();
  }
}

} // namespace detail

// All Hall-set members of weight <= max_weight over k letters, in the order
// described at word_order_less. Deterministic.
inline std::vector<BasicWord> enumerate_basic_words(int k, int max_weight) {
  if (k < 1) throw invalid_argument("enumerate_basic_words: k must be >= 1");
  if (max_weight < 1) throw invalid_argument("enumerate_basic_words: max_weight must be >= 1");
  std::vector<BasicWord> out;
  detail::duval_lyndon(1, k, max_weight,
                       [&](const std::string& w) { out.push_back(detail::basic_word_unchecked(w, k)); });
  std::sort(out.begin(), out.end(),
            [](const BasicWord& a, const BasicWord& b) { return word_order_less(a, b); });
  return out;
}

// Number of letters distinct from z_1.
inline int alpha(const BasicWord& w) {
  int a = 0;
  for (char c : w.letters())
    if (c != 1) ++a;
  return a;
}

// Number of letters equal to z_1.
inline int beta(const BasicWord& w) { return w.weight() - alpha(w); }

// Does w use every letter z_2, ..., z_k (z_1 optional)?
inline bool involves_all_but_first(const BasicWord& w) {
  auto d = w.multidegree().degrees;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] == 0) return false;
  return true;
}

namespace detail {

// Moebius function by trial division; n >= 1.
inline int moebius(int n) {
  int mu = 1;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  if (n > 1) mu = -mu;
  return mu;
}

// Multinomial (sum d_i)! / prod d_i!, exact; throws on int64 overflow.
inline std::int64_t multinomial(const std::vector<int>& d) {
  unsigned __int128 acc = 1;
  int upto = 0;
  for (int di : d)
    for (int j = 1; j <= di; ++j) {
      acc = acc * static_cast<unsigned>(++upto) / static_cast<unsigned>(j);
      if (acc > static_cast<unsigned __int128>(INT64_MAX))
        throw invalid_argument("witt_count: count exceeds 64-bit range");
    }
  return static_cast<std::int64_t>(acc);
}

} // namespace detail

// Number of Hall-set members with exponent vector d (necklace/Witt formula):
//   (1/W) sum_{e | g} mu(e) * (W/e)! / prod_i (d_i/e)!
// where W is the weight and g the gcd of the nonzero d_i.
inline std::int64_t witt_count(const MultiDegree& d) {
  if (d.degrees.empty()) throw invalid_argument("witt_count: empty multidegree");
  for (int di : d.degrees)
    if (di < 0) throw invalid_argument("witt_count: negative degree");
  int W = d.weight();
  if (W < 1) throw invalid_argument("witt_count: weight must be >= 1");
  int g = 0;
  for (int di : d.degrees) g = std::gcd(g, di);
  std::int64_t total = 0;
  for (int e = 1; e <= g; ++e) {
    if (g % e != 0) continue;
    int mu = detail::moebius(e);
    if (mu == 0) continue;
    std::vector<int> scaled;
    scaled.reserve(d.degrees.size());
    for (int di : d.degrees) scaled.push_back(di / e);
    total += mu * detail::multinomial(scaled);
  }
  return total / W;
}

} // namespace embcalc
