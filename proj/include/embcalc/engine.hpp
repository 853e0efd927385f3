#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "embcalc/errors.hpp"
#include "embcalc/estimates.hpp"
#include "embcalc/ext_int.hpp"

namespace embcalc {

/* Connectivity bookkeeping as formal derivations.
 *
 * A ConnFact records "this cube is b-Cartesian" or "this map is b-connected"
 * for a named diagram. A small stock of inference rules combines such facts;
 * the two nontrivial bounds of the library -- the approximation-map
 * connectivity c + k(rho - q) and the handle-cube Cartesian-ness
 * c + sum(rho - q_i) of a degree-k homogeneous cofunctor -- are rebuilt here
 * as explicit step-by-step traces that can be replayed, checked and printed.
 */

enum class FactKind { cartesian, connected };

inline const char* fact_kind_name(FactKind k) {
  return k == FactKind::cartesian ? "cartesian" : "connected";
}

struct ConnFact {
  std::string subject;
  FactKind kind;
  ExtInt bound;
};

inline bool operator==(const ConnFact& a, const ConnFact& b) {
  return a.subject == b.subject && a.kind == b.kind && a.bound == b.bound;
}

// R1: a cube mapping to a base cube with all fibers Cartesian is as Cartesian
//     as the worst of base and fibers (min of the inputs).
// R2: for a map of cubes (viewed as a bigger cube), the source cube is
//     min(map, target)-Cartesian.
// R3: if a composite f.g is a-Cartesian and the left factor f is b-Cartesian,
//     then g is min(a, b-1)-Cartesian.
// R4: a map which is t-connected at every vertex of a punctured k-cube gives
//     a (t - k + 1)-connected map of homotopy inverse limits.
// R5: an a-connected map after a b-connected map is min(a, b)-connected.
enum class Rule { fiberwise, source_of_map, left_cancellation, punctured_holim, composite };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::fiberwise: return "R1";
    case Rule::source_of_map: return "R2";
    case Rule::left_cancellation: return "R3";
    case Rule::punctured_holim: return "R4";
    case Rule::composite: return "R5";
  }
  throw invalid_argument("rule_name: unknown rule");
}

namespace detail {

inline void require_fact_kind(Rule r, const ConnFact& f, FactKind want) {
  if (f.kind != want)
    throw invalid_argument(std::string("apply_rule: ") + rule_name(r) + " needs a " +
                           fact_kind_name(want) + " fact, got \"" + f.subject + "\"");
}

} // namespace detail

// Combine input facts by one rule; cube_size is consumed by R4 only.
inline ConnFact apply_rule(Rule rule, const std::vector<ConnFact>& inputs, int cube_size = 0) {
  auto min_bound = [&](FactKind want) {
    ExtInt b = ExtInt::pos_inf();
    for (const ConnFact& f : inputs) {
      detail::require_fact_kind(rule, f, want);
      b = min(b, f.bound);
    }
    return b;
  };
  switch (rule) {
    case Rule::fiberwise:
      if (inputs.size() < 2)
        throw invalid_argument("apply_rule: R1 needs a base cube and at least one fiber cube");
      return {"total cube", FactKind::cartesian, min_bound(FactKind::cartesian)};
    case Rule::source_of_map:
      if (inputs.size() != 2)
        throw invalid_argument("apply_rule: R2 needs the map-of-cubes and the target cube");
      return {"source cube", FactKind::cartesian, min_bound(FactKind::cartesian)};
    case Rule::left_cancellation:
      if (inputs.size() != 2)
        throw invalid_argument("apply_rule: R3 needs the composite and the left factor");
      detail::require_fact_kind(rule, inputs[0], FactKind::cartesian);
      detail::require_fact_kind(rule, inputs[1], FactKind::cartesian);
      return {"right factor", FactKind::cartesian,
              min(inputs[0].bound, inputs[1].bound - ExtInt(1))};
    case Rule::punctured_holim:
      if (inputs.size() != 1)
        throw invalid_argument("apply_rule: R4 needs one termwise fact");
      if (cube_size < 1)
        throw invalid_argument("apply_rule: R4 needs a positive cube size");
      detail::require_fact_kind(rule, inputs[0], FactKind::connected);
      return {"map of homotopy limits", FactKind::connected,
              inputs[0].bound - ExtInt(cube_size) + ExtInt(1)};
    case Rule::composite:
      if (inputs.size() != 2)
        throw invalid_argument("apply_rule: R5 needs two composable maps");
      return {"composite map", FactKind::connected, min_bound(FactKind::connected)};
  }
  throw invalid_argument("apply_rule: unknown rule");
}

/* One derivation step. rule is "R1".."R5" or one of the structural moves:
 *   "axiom"              assumption; no inputs
 *   "definition"         a b-Cartesian cube read as the b-connected map from
 *                        its initial vertex to the holim of the rest
 *   "pullback"           a base change of a fibration keeps its connectivity
 *   "identify"           rename along a termwise equivalence of diagrams;
 *                        may weaken the bound, never strengthen it
 *   "cancel-equivalence" a map whose composite with an equivalence is
 *                        b-connected is itself b-connected
 * inputs are indices of earlier steps.
 */
struct Step {
  std::string rule;
  std::vector<std::size_t> inputs;
  int cube_size = 0;
  ConnFact output;
};

struct DerivationTrace {
  std::vector<Step> steps;
  ConnFact conclusion;
};

// Replay every step and check it against the rule semantics; the conclusion
// must be the output of the final step.
inline bool trace_valid(const DerivationTrace& trace) {
  if (trace.steps.empty()) return false;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const Step& s = trace.steps[i];
    for (std::size_t j : s.inputs)
      if (j >= i) return false;
    auto input_fact = [&](std::size_t which) -> const ConnFact& {
      return trace.steps[s.inputs[which]].output;
    };
    if (s.rule == "axiom") {
      if (!s.inputs.empty()) return false;
    } else if (s.rule == "definition") {
      if (s.inputs.size() != 1) return false;
      const ConnFact& in = input_fact(0);
      if (in.kind != FactKind::cartesian || s.output.kind != FactKind::connected) return false;
      if (!(s.output.bound == in.bound)) return false;
    } else if (s.rule == "pullback") {
      if (s.inputs.size() != 1) return false;
      const ConnFact& in = input_fact(0);
      if (in.kind != FactKind::connected || s.output.kind != FactKind::connected) return false;
      if (!(s.output.bound == in.bound)) return false;
    } else if (s.rule == "identify") {
      if (s.inputs.size() != 1) return false;
      const ConnFact& in = input_fact(0);
      if (s.output.kind != in.kind) return false;
      if (in.bound < s.output.bound) return false;
    } else if (s.rule == "cancel-equivalence") {
      if (s.inputs.size() != 2) return false;
      const ConnFact& comp = input_fact(0);
      const ConnFact& equiv = input_fact(1);
      if (comp.kind != FactKind::connected || equiv.kind != FactKind::connected) return false;
      if (!equiv.bound.is_pos_inf()) return false;
      if (s.output.kind != FactKind::connected || !(s.output.bound == comp.bound)) return false;
    } else {
      Rule rule;
      if (s.rule == "R1") rule = Rule::fiberwise;
      else if (s.rule == "R2") rule = Rule::source_of_map;
      else if (s.rule == "R3") rule = Rule::left_cancellation;
      else if (s.rule == "R4") rule = Rule::punctured_holim;
      else if (s.rule == "R5") rule = Rule::composite;
      else return false;
      std::vector<ConnFact> facts;
      facts.reserve(s.inputs.size());
      for (std::size_t j : s.inputs) facts.push_back(trace.steps[j].output);
      try {
        ConnFact expect = apply_rule(rule, facts, s.cube_size);
        if (expect.kind != s.output.kind || !(expect.bound == s.output.bound)) return false;
      } catch (const invalid_argument&) {
        return false;
      }
    }
  }
  return trace.conclusion == trace.steps.back().output;
}

// One step per line: index, rule (R4 with its cube size), inputs, output.
inline std::string trace_text(const DerivationTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const Step& s = trace.steps[i];
    out += "#" + std::to_string(i) + " " + s.rule;
    if (s.rule == "R4") out += "{k=" + std::to_string(s.cube_size) + "}";
    if (!s.inputs.empty()) {
      out += "[";
      for (std::size_t j = 0; j < s.inputs.size(); ++j) {
        if (j > 0) out += ",";
        out += "#" + std::to_string(s.inputs[j]);
      }
      out += "]";
    }
    out += " => ";
    out += fact_kind_name(s.output.kind);
    out += " " + s.output.bound.str() + " | " + s.output.subject + "\n";
  }
  return out;
}

namespace detail {

constexpr std::size_t max_trace_steps = 1000000;

struct TraceBuilder {
  std::vector<Step> steps;

  std::size_t push(Step s) {
    if (steps.size() >= max_trace_steps)
      throw unsupported_range("derivation trace too large for this build");
    steps.push_back(std::move(s));
    return steps.size() - 1;
  }

  std::size_t axiom(std::string subject, FactKind kind, ExtInt bound) {
    return push({"axiom", {}, 0, {std::move(subject), kind, bound}});
  }

  std::size_t rule(Rule r, std::vector<std::size_t> inputs, std::string subject,
                   int cube_size = 0) {
    std::vector<ConnFact> facts;
    facts.reserve(inputs.size());
    for (std::size_t j : inputs) facts.push_back(steps[j].output);
    ConnFact out = apply_rule(r, facts, cube_size);
    out.subject = std::move(subject);
    return push({rule_name(r), std::move(inputs), cube_size, std::move(out)});
  }

  std::size_t definition(std::size_t in, std::string subject) {
    return push({"definition", {in}, 0,
                 {std::move(subject), FactKind::connected, steps[in].output.bound}});
  }

  std::size_t pullback(std::size_t in, std::string subject) {
    return push({"pullback", {in}, 0,
                 {std::move(subject), FactKind::connected, steps[in].output.bound}});
  }

  std::size_t identify(std::size_t in, std::string subject) {
    return push({"identify", {in}, 0,
                 {std::move(subject), steps[in].output.kind, steps[in].output.bound}});
  }

  std::size_t cancel(std::size_t comp, std::size_t equiv, std::string subject) {
    return push({"cancel-equivalence", {comp, equiv}, 0,
                 {std::move(subject), FactKind::connected, steps[comp].output.bound}});
  }

  DerivationTrace finish() {
    ConnFact conclusion = steps.back().output;
    return {std::move(steps), std::move(conclusion)};
  }
};

inline std::string render_handle_indices(const std::vector<int>& q) {
  std::string out = "[";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(q[i]);
  }
  return out + "]";
}

} // namespace detail

/* Connectivity of eta_{k-1}: G(W) -> T_{k-1}G(W) for a rho-analytic G over a
 * W built from handles of index <= q, derived by induction on q.
 *
 * q = 0: W is a thickened union of balls, so the stages above k are reached
 * by fibrations whose fibers are controlled by the handle cubes, and eta_k is
 * already an equivalence there; composing gives the bound c + k*rho.
 *
 * q > 0: cutting the top handles along parallel cocores trades index q for
 * index q-1 at the price of passing to a punctured k-cube of thickenings; the
 * induction bound survives the homotopy limit up to a loss of k - 1 and is
 * then capped by the Cartesian-ness of the handle cube itself.
 *
 * Conclusion bound: c + k(rho - q).
 */
inline DerivationTrace derive_eta_bound(const AnalyticCofunctor& F, int q, int k) {
  if (k < 2) throw invalid_argument("derive_eta_bound: k must be >= 2");
  if (q < 0) throw invalid_argument("derive_eta_bound: q must be >= 0");
  if (k > 100000) throw unsupported_range("derive_eta_bound: stage index too large");
  if (!(q < F.rho)) throw precondition_violation("derive_eta_bound: q must be < rho");

  detail::TraceBuilder tb;
  const std::string eta = "eta_" + std::to_string(k - 1);
  const std::string ks = std::to_string(k);

  std::size_t ana = tb.axiom("analyticity: " + ks + "-cube of index-0 attachments",
                             FactKind::cartesian,
                             analytic_cube_cartesianness(F, std::vector<ExtInt>(k, ExtInt(0))));
  std::size_t p = tb.definition(ana, "fibration p_S over stage " + std::to_string(k - 1) +
                                         ", |S| = " + ks);
  std::size_t r = tb.pullback(p, "r_" + ks + ": stage " + ks + " -> stage " +
                                     std::to_string(k - 1) + " over a union of balls");
  std::size_t eq = tb.axiom("eta_" + ks + " on a thickened union of " + ks +
                                " balls (polynomial range)",
                            FactKind::connected, ExtInt::pos_inf());
  std::size_t comp = tb.rule(Rule::composite, {r, eq},
                             "r_" + ks + " o eta_" + ks + " on a union of balls");
  std::size_t cur = tb.identify(comp, eta + " (handles of index <= 0)");

  for (int level = 1; level <= q; ++level) {
    const std::string ls = std::to_string(level);
    std::size_t h =
        tb.rule(Rule::punctured_holim, {cur},
                "holim of " + eta + " over the punctured " + ks + "-cube of thickenings", k);
    std::size_t g_ax =
        tb.axiom("analyticity: " + ks + "-cube of index-" + ls + " attachments",
                 FactKind::cartesian,
                 analytic_cube_cartesianness(F, std::vector<ExtInt>(k, ExtInt(level))));
    std::size_t a = tb.definition(g_ax, "G(W) -> holim of the punctured G-cube");
    std::size_t t_ax = tb.axiom("T_" + std::to_string(k - 1) + "G-cube of the same attachments (degree < " +
                                    ks + ")",
                                FactKind::cartesian, ExtInt::pos_inf());
    std::size_t b = tb.definition(t_ax, "T_" + std::to_string(k - 1) +
                                            "G(W) -> holim of the punctured T-cube");
    std::size_t diag = tb.rule(Rule::composite, {h, a}, "G(W) -> holim of the punctured T-cube");
    cur = tb.cancel(diag, b, eta + " (handles of index <= " + ls + ")");
  }
  return tb.finish();
}

/* Cartesian-ness of the handle cube S -> G(V_S) of a degree-k homogeneous
 * cofunctor whose values on k-component tubular neighborhoods are
 * (c - 1 + k*rho)-connected, for handle indices q_list on an m-manifold.
 *
 * All indices zero: induct on the handles of the complement; removing the
 * cocore of one more handle gives an enlarged cube (one more direction) whose
 * bound comes from the induction on cube dimension, and the removed subcube
 * is covered by the induction hypothesis.
 *
 * Top index positive: cut along two parallel cocores A, B with a strip C
 * between them. The inclusion over the strip is an isotopy equivalence, the
 * half-strip cube is the handle cube with the top index lowered by one, and
 * cancellation plus the enlarged square recover the stated bound.
 *
 * Conclusion bound: c + sum(rho - q_i); trivially +inf when q_list is longer
 * than k or some index is -inf.
 */
inline DerivationTrace derive_homogeneous_cartesianness(int k, int c, int rho, int m,
                                                        const std::vector<ExtInt>& q_list) {
  if (k < 0) throw invalid_argument("derive_homogeneous_cartesianness: k must be >= 0");
  if (q_list.empty())
    throw invalid_argument("derive_homogeneous_cartesianness: need at least one handle index");
  if (rho < m)
    throw precondition_violation("derive_homogeneous_cartesianness: rho must be >= m");
  bool collar = false;
  for (const ExtInt& q : q_list) {
    if (q.is_pos_inf())
      throw invalid_argument("derive_homogeneous_cartesianness: handle index +inf");
    if (q.is_neg_inf()) collar = true;
    else if (q.value() < 0 || q.value() > m)
      throw precondition_violation("derive_homogeneous_cartesianness: handle index " + q.str() +
                                   " outside 0.." + std::to_string(m));
  }

  detail::TraceBuilder tb;
  if (static_cast<int>(q_list.size()) > k) {
    tb.axiom("cube on " + std::to_string(q_list.size()) +
                 " handles: dimension exceeds the degree " + std::to_string(k),
             FactKind::cartesian, ExtInt::pos_inf());
    return tb.finish();
  }
  if (collar) {
    tb.axiom("cube with a collar direction: attachment is an isotopy equivalence",
             FactKind::cartesian, ExtInt::pos_inf());
    return tb.finish();
  }

  std::vector<int> top;
  top.reserve(q_list.size());
  for (const ExtInt& q : q_list) top.push_back(static_cast<int>(q.value()));
  std::sort(top.begin(), top.end(), std::greater<int>());

  std::map<std::vector<int>, std::size_t> memo;
  auto build = [&](auto&& self, const std::vector<int>& qs, int depth) -> std::size_t {
    auto hit = memo.find(qs);
    if (hit != memo.end()) return hit->second;
    if (depth > 10000)
      throw unsupported_range("derive_homogeneous_cartesianness: recursion too deep");

    const std::string name = "cube(q=" + detail::render_handle_indices(qs) + "): S -> G(V_S)";
    const int r_plus_1 = static_cast<int>(qs.size());
    std::size_t out;
    if (r_plus_1 > k) {
      out = tb.axiom("cube(q=" + detail::render_handle_indices(qs) +
                         "): dimension exceeds the degree " + std::to_string(k),
                     FactKind::cartesian, ExtInt::pos_inf());
    } else if (qs.front() == 0) {
      std::vector<int> bigger(qs);
      bigger.insert(bigger.begin(), m);
      std::size_t sq = self(self, bigger, depth + 1);
      std::size_t sub = tb.axiom("subcube(q=" + detail::render_handle_indices(qs) +
                                     ") with a cocore removed: handle-induction hypothesis",
                                 FactKind::cartesian,
                                 ExtInt(c + static_cast<std::int64_t>(r_plus_1) * rho));
      out = tb.rule(Rule::source_of_map, {sq, sub}, name);
    } else {
      std::size_t fg = tb.axiom("f o g over the strip C: inclusion is an isotopy equivalence",
                                FactKind::cartesian, ExtInt::pos_inf());
      std::vector<int> lowered(qs);
      lowered.front() -= 1;
      std::sort(lowered.begin(), lowered.end(), std::greater<int>());
      std::size_t frec = self(self, lowered, depth + 1);
      std::size_t f = tb.identify(frec, "cube f: half-strip cube, identified with cube(q=" +
                                            detail::render_handle_indices(lowered) + ")");
      std::size_t g = tb.rule(Rule::left_cancellation, {fg, f},
                              "cube g(q=" + detail::render_handle_indices(qs) + ")");
      std::vector<int> square(qs);
      square.insert(square.begin(), qs.front());
      std::size_t sqrec = self(self, square, depth + 1);
      out = tb.rule(Rule::source_of_map, {sqrec, g}, name);
    }
    memo.emplace(qs, out);
    return out;
  };
  build(build, top, 0);
  return tb.finish();
}

} // namespace embcalc
