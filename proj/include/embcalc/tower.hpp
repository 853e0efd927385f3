#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "embcalc/errors.hpp"
#include "embcalc/estimates.hpp"
#include "embcalc/ext_int.hpp"
#include "embcalc/spaces.hpp"
#include "embcalc/words.hpp"

namespace embcalc {

/* The tower of embedding spaces of an interval in a manifold N^n with
 * N ~ Susp(Y): stage k approximates emb(I, N) and the k-th layer splits as a
 * weak product of factors Loop(k, Susp(1 + alpha(n-2), Y^(beta))), one per
 * basic word in z_1..z_k involving all of z_2..z_k.
 */

// One weak-product factor of a layer.
struct Factor {
  BasicWord word;
  int alpha;
  int beta;
  SpaceExpr expr; // normalized
  ExtInt conn;
};

inline bool factor_order(const Factor& a, const Factor& b) {
  if (a.conn != b.conn) return a.conn < b.conn;
  return word_order_less(a.word, b.word);
}

namespace detail {

inline void check_layer_args(int k, int n, const SpaceExpr& y, ExtInt cutoff,
                             const char* who) {
  if (k < 2) throw invalid_argument(std::string(who) + ": k must be >= 2");
  if (n < 4) throw unsupported_range(std::string(who) + ": n must be >= 4");
  if (connectivity(y) < ExtInt(0))
    throw invalid_argument(std::string(who) + ": target must be connected");
  if (cutoff.is_pos_inf())
    throw invalid_argument(std::string(who) + ": cutoff must be < +inf");
}

} // namespace detail

// Factors of the k-th layer with connectivity <= cutoff, sorted by
// (connectivity, word order). Contractible factors (connectivity +inf, e.g.
// positive powers of a point) are dropped. Complete: the word-weight bound is
// chosen so that every omitted word's factor provably exceeds the cutoff.
inline std::vector<Factor> layer_factors(int k, int n, const SpaceExpr& y, ExtInt cutoff) {
  detail::check_layer_args(k, n, y, cutoff, "layer_factors");
  std::vector<Factor> out;
  if (cutoff.is_neg_inf()) return out;

  ExtInt cy = connectivity(y);
  int max_weight = detail::layer_weight_bound(k, n, cy, cutoff);
  if (max_weight == 0) return out;

  bool point_target = normalize(y).kind() == SpaceKind::point;
  detail::check_enumeration_size(point_target ? k - 1 : k, max_weight);

  // expr and connectivity depend only on (alpha, beta)
  std::map<std::pair<int, int>, std::pair<SpaceExpr, ExtInt>> memo;
  auto factor_of = [&](int alpha, int beta) -> const std::pair<SpaceExpr, ExtInt>& {
    auto it = memo.find({alpha, beta});
    if (it == memo.end()) {
      SpaceExpr expr = normalize(SpaceExpr::loop(
          k, SpaceExpr::susp(1 + alpha * (n - 2), SpaceExpr::smash_power(y, beta))));
      ExtInt conn = connectivity(expr);
      it = memo.emplace(std::make_pair(alpha, beta), std::make_pair(std::move(expr), conn))
               .first;
    }
    return it->second;
  };

  auto visit = [&](const std::string& w, int beta) {
    int alpha = static_cast<int>(w.size()) - beta;
    const auto& [expr, conn] = factor_of(alpha, beta);
    if (conn.is_pos_inf() || cutoff < conn) return;
    out.push_back({detail::basic_word_unchecked(w, k), alpha, beta, expr, conn});
  };

  std::vector<char> seen(static_cast<std::size_t>(k) + 1);
  auto involves_rest = [&](const std::string& w) {
    std::fill(seen.begin(), seen.end(), 0);
    for (char c : w) seen[static_cast<std::size_t>(c)] = 1;
    for (int i = 2; i <= k; ++i)
      if (!seen[static_cast<std::size_t>(i)]) return false;
    return true;
  };

  if (point_target) {
    // beta >= 1 factors smash a point and vanish; enumerate z_2..z_k only
    detail::duval_lyndon(2, k, max_weight, [&](const std::string& w) {
      if (involves_rest(w)) visit(w, 0);
    });
  } else {
    detail::duval_lyndon(1, k, max_weight, [&](const std::string& w) {
      if (!involves_rest(w)) return;
      int beta = 0;
      for (char c : w) beta += c == 1;
      visit(w, beta);
    });
  }
  std::sort(out.begin(), out.end(), factor_order);
  return out;
}

// One stage of the tower. Stage 1 is the space of immersions and carries no
// layer splitting; stages k >= 2 list the layer factors and the connectivity
// of the forgetful map r_k : T_k -> T_{k-1}.
struct TowerStage {
  int k;
  std::string description;
  std::vector<Factor> factors;
  std::optional<ExtInt> forgetful_conn;
};

struct TowerSummary {
  int n;
  std::string target;
  std::vector<TowerStage> stages;
};

// Stages 1..k_max for emb(I, N^n) with N ~ Susp(y). The forgetful-map column
// comes from the analyticity profile of emb(-, N^n) over handle dimension q
// (the interval rel endpoints needs a single handle of index 1, the default).
inline TowerSummary tower_summary(int n, const SpaceExpr& y, int k_max, ExtInt cutoff,
                                  ExtInt q = ExtInt(1)) {
  if (k_max < 1) throw invalid_argument("tower_summary: k_max must be >= 1");
  detail::check_layer_args(2, n, y, cutoff, "tower_summary");
  AnalyticCofunctor F = emb_analyticity(n);
  if (!(q < ExtInt(F.rho)))
    throw precondition_violation("tower_summary: q must be < n - 2");

  TowerSummary summary{n, render(normalize(y)), {}};
  summary.stages.push_back({1, "immersions", {}, std::nullopt});
  for (int k = 2; k <= k_max; ++k)
    summary.stages.push_back(
        {k, "layer", layer_factors(k, n, y, cutoff), layer_map_connectivity(F, q, k)});
  return summary;
}

// The knot tower sits in a fibration over a Stiefel manifold.
struct FibrationRecord {
  std::string fiber;
  std::string total;
  std::string base;
  int base_dim;
  ExtInt base_conn;
};

struct KnotTower {
  TowerSummary tower;
  FibrationRecord fibration;
};

// Tower of long knots in R^{n-1} x I, the fiber of
// emb(S^1, S^n) -> O(n+1)/O(n-1) = V_2(R^{n+1}).
inline KnotTower knot_tower(int n, int k_max, ExtInt cutoff) {
  if (n < 4) throw unsupported_range("knot_tower: n must be >= 4");
  KnotTower result{tower_summary(n, SpaceExpr::point(), k_max, cutoff), {}};
  result.fibration.fiber = "emb(I, R^" + std::to_string(n - 1) + " x I)";
  result.fibration.total = "emb(S^1, S^" + std::to_string(n) + ")";
  result.fibration.base =
      "O(" + std::to_string(n + 1) + ")/O(" + std::to_string(n - 1) + ") = V_2(R^" +
      std::to_string(n + 1) + ")";
  result.fibration.base_dim = 2 * n - 1;
  result.fibration.base_conn = ExtInt(n - 2);
  return result;
}

} // namespace embcalc
