#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "embcalc/errors.hpp"
#include "embcalc/ext_int.hpp"

namespace embcalc {

/* Closed-form connectivity and Cartesianness estimates for embedding
 * cofunctors and their polynomial approximations.
 *
 * Conventions: a space is c-connected when pi_i vanishes for i <= c; a map is
 * c-connected when its homotopy fibers are (c-1)-connected; a cube is
 * k-Cartesian when the initial vertex maps k-connectedly into the homotopy
 * inverse limit of the punctured cube. Handle index -inf marks a collar.
 */

// Ambient dimension and the handle indices q_0..q_r of a family of disjoint
// codimension-zero attachments.
struct HandleProfile {
  int n;
  std::vector<ExtInt> q_list;
};

// A cofunctor whose handle-attachment cubes are (c + sum(rho - q_i))-Cartesian.
struct AnalyticCofunctor {
  int rho;
  int c;
  std::string label;
};

namespace detail {

inline void check_index_magnitude(const ExtInt& q, const char* who) {
  if (q.is_finite() && (q.value() > 1000000000 || q.value() < -1000000000))
    throw invalid_argument(std::string(who) + ": handle index out of range");
}

inline void check_handle_indices(const std::vector<ExtInt>& q_list, ExtInt strict_bound,
                                 const char* who) {
  if (q_list.size() < 2)
    throw invalid_argument(std::string(who) + ": need at least two handle indices");
  for (const ExtInt& q : q_list) {
    check_index_magnitude(q, who);
    if (!(q < strict_bound))
      throw precondition_violation(std::string(who) + ": handle index " + q.str() +
                                   " not below " + strict_bound.str());
  }
}

} // namespace detail

// Cartesianness of the (r+1)-cube of embedding spaces obtained by deleting
// pairwise disjoint attachments with the given handle indices:
// 3 - n + sum_i (n - q_i - 2). A collar (q_i = -inf) makes the cube
// infinitely Cartesian.
inline ExtInt excision_cartesianness(const HandleProfile& p) {
  detail::check_handle_indices(p.q_list, ExtInt(p.n - 2), "excision_cartesianness");
  std::int64_t total = 3 - p.n;
  for (const ExtInt& q : p.q_list) {
    if (q.is_neg_inf()) return ExtInt::pos_inf();
    total += p.n - q.value() - 2;
  }
  return ExtInt(total);
}

// The embedding cofunctor emb(-, N^n) is (n-2)-analytic with excess 3-n.
// n = 3 is the degenerate edge of the estimate (rho = 1, excess 0); the label
// carries a marker so reports show it.
inline AnalyticCofunctor emb_analyticity(int n) {
  if (n < 3) throw unsupported_range("emb_analyticity: n must be >= 3");
  std::string label = "emb(-, N^" + std::to_string(n) + ")";
  if (n == 3) label += " [n=3 boundary]";
  return {n - 2, 3 - n, std::move(label)};
}

// Cartesianness of a handle-attachment cube for a rho-analytic cofunctor:
// c + sum_i (rho - q_i), infinite when some q_i = -inf.
inline ExtInt analytic_cube_cartesianness(const AnalyticCofunctor& F,
                                          const std::vector<ExtInt>& q_list) {
  detail::check_handle_indices(q_list, ExtInt(F.rho), "analytic_cube_cartesianness");
  std::int64_t total = F.c;
  for (const ExtInt& q : q_list) {
    if (q.is_neg_inf()) return ExtInt::pos_inf();
    total += F.rho - q.value();
  }
  return ExtInt(total);
}

// Connectivity of the approximation map eta_j : G(W) -> T_jG(W) over a W
// built from handles of index <= q: c + (j+1)(rho - q).
inline ExtInt eta_connectivity(const AnalyticCofunctor& F, ExtInt q, int j) {
  if (j < 1) throw invalid_argument("eta_connectivity: j must be >= 1");
  detail::check_index_magnitude(q, "eta_connectivity");
  if (!(q < ExtInt(F.rho)))
    throw precondition_violation("eta_connectivity: q must be < rho");
  if (q.is_neg_inf()) return ExtInt::pos_inf();
  return ExtInt(F.c + static_cast<std::int64_t>(j + 1) * (F.rho - q.value()));
}

// Specialization to emb(-, N^n): eta_k is (k(n-2-q) - q + 1)-connected.
inline ExtInt emb_eta_connectivity(int n, ExtInt q, int k) {
  if (n < 3) throw unsupported_range("emb_eta_connectivity: n must be >= 3");
  if (k < 1) throw invalid_argument("emb_eta_connectivity: k must be >= 1");
  detail::check_index_magnitude(q, "emb_eta_connectivity");
  if (!(q < ExtInt(n - 2)))
    throw precondition_violation("emb_eta_connectivity: q must be < n - 2");
  if (q.is_neg_inf()) return ExtInt::pos_inf();
  return ExtInt(static_cast<std::int64_t>(k) * (n - 2 - q.value()) - q.value() + 1);
}

// Whether the tower of a rho-analytic cofunctor converges over handle
// dimension q: eta_j connectivity tends to +inf exactly when q < rho.
inline bool converges(const AnalyticCofunctor& F, ExtInt q) { return q < ExtInt(F.rho); }

// Connectivity of the forgetful map r_k : T_kG -> T_{k-1}G: c + k(rho - q).
inline ExtInt layer_map_connectivity(const AnalyticCofunctor& F, ExtInt q, int k) {
  if (k < 0) throw invalid_argument("layer_map_connectivity: k must be >= 0");
  detail::check_index_magnitude(q, "layer_map_connectivity");
  if (!(q < ExtInt(F.rho)))
    throw precondition_violation("layer_map_connectivity: q must be < rho");
  if (k == 0) return ExtInt(F.c);
  if (q.is_neg_inf()) return ExtInt::pos_inf();
  return ExtInt(F.c + static_cast<std::int64_t>(k) * (F.rho - q.value()));
}

// Analyticity certificate for a homogeneous cofunctor of degree k whose
// values on k-point tubular neighborhoods are conn_on_Ok-connected: excess
// c = conn_on_Ok + 1 - k*rho, available only when rho >= m.
inline std::optional<AnalyticCofunctor> homogeneous_analyticity(int k, ExtInt conn_on_Ok,
                                                                int rho, int m) {
  if (k < 0) throw invalid_argument("homogeneous_analyticity: k must be >= 0");
  if (!conn_on_Ok.is_finite())
    throw invalid_argument("homogeneous_analyticity: connectivity must be finite");
  if (conn_on_Ok.value() > 1000000000 || conn_on_Ok.value() < -1000000000)
    throw invalid_argument("homogeneous_analyticity: connectivity out of range");
  if (rho < m) return std::nullopt;
  std::int64_t c = conn_on_Ok.value() + 1 - static_cast<std::int64_t>(k) * rho;
  if (c > std::numeric_limits<int>::max() || c < std::numeric_limits<int>::min())
    throw unsupported_range("homogeneous_analyticity: excess out of range");
  return AnalyticCofunctor{rho, static_cast<int>(c),
                           "homogeneous of degree " + std::to_string(k)};
}

// The metastable comparison square for emb(M^m, N^n): it is 1-Cartesian iff
// 2n > 3(m+1) and n >= 3, with excess s = 2(n-2-m) - m + 1 = 2n - 3(m+1).
struct HaefligerRange {
  bool square_1_cartesian;
  int s;
};

inline HaefligerRange haefliger_metastable(int m, int n) {
  if (m > n) throw invalid_argument("haefliger_metastable: m must be <= n");
  return {2 * n > 3 * (m + 1) && n >= 3, 2 * n - 3 * (m + 1)};
}

// Convergence criteria that rest on geometric hypotheses the caller supplies;
// nothing here checks them.

// emb(-, N^n) on open subsets of M^m: always converges when m < n-2; when
// m = n-2 it converges exactly for W with no compact component.
inline bool emb_tower_converges(int m, int n, bool no_compact_component) {
  if (n < 3) throw unsupported_range("emb_tower_converges: n must be >= 3");
  if (m < n - 2) return true;
  if (m == n - 2) return no_compact_component;
  return false;
}

// A natural map between two rho-analytic cofunctors that is an equivalence on
// tubular neighborhoods of finite sets is an equivalence on every W carrying
// a proper Morse function with critical points of index < rho only.
inline bool natural_equivalence_extends(int rho, bool agrees_on_finite_sets,
                                        ExtInt morse_index_bound) {
  return agrees_on_finite_sets && morse_index_bound < ExtInt(rho);
}

} // namespace embcalc
