#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "embcalc/errors.hpp"
#include "embcalc/ext_int.hpp"
#include "embcalc/words.hpp"

namespace embcalc {

/* Formal pointed-space expressions with enough structure to do connectivity
 * bookkeeping: spheres, generic CW complexes with declared connectivity,
 * iterated loops/suspensions, smash products and powers, wedges, and finite
 * truncations of weak products.
 *
 * Connectivity convention: a space is c-connected when pi_i vanishes for
 * i <= c; a map is c-connected when its homotopy fibers are (c-1)-connected.
 */

class SpaceExpr;

enum class SpaceKind {
  point,
  sphere,
  generic_cw,
  loop,
  susp,
  smash,
  smash_power,
  wedge,
  weak_prod,
};

namespace detail {
struct SpaceNode;
SpaceExpr wrap(std::shared_ptr<const SpaceNode> p);
}

class SpaceExpr {
public:
  static SpaceExpr point();
  static SpaceExpr sphere(int dim);
  static SpaceExpr generic_cw(std::string name, ExtInt conn);
  static SpaceExpr loop(int count, SpaceExpr inner);
  static SpaceExpr susp(int count, SpaceExpr inner);
  static SpaceExpr smash(std::vector<SpaceExpr> factors);
  static SpaceExpr smash_power(SpaceExpr base, int power);
  static SpaceExpr wedge(std::vector<SpaceExpr> summands);
  static SpaceExpr weak_prod(std::vector<SpaceExpr> factors);

  SpaceKind kind() const;

  // Accessors; each throws invalid_argument unless kind() matches.
  int sphere_dim() const;
  const std::string& cw_name() const;
  ExtInt cw_conn() const;
  int prefix_count() const;      // loop / susp
  const SpaceExpr& inner() const; // loop / susp / smash_power base
  int power() const;             // smash_power
  const std::vector<SpaceExpr>& parts() const; // smash / wedge / weak_prod

  friend bool operator==(const SpaceExpr& a, const SpaceExpr& b);

private:
  explicit SpaceExpr(std::shared_ptr<const detail::SpaceNode> p) : p_(std::move(p)) {}
  std::shared_ptr<const detail::SpaceNode> p_;
  friend int expr_cmp(const SpaceExpr&, const SpaceExpr&);
  friend SpaceExpr detail::wrap(std::shared_ptr<const detail::SpaceNode>);
};

namespace detail {

struct PointT {};
struct SphereT { int dim; };
struct GenericCWT { std::string name; ExtInt conn; };
struct LoopT { int count; SpaceExpr inner; };
struct SuspT { int count; SpaceExpr inner; };
struct SmashT { std::vector<SpaceExpr> factors; };
struct SmashPowerT { SpaceExpr base; int power; };
struct WedgeT { std::vector<SpaceExpr> summands; };
struct WeakProdT { std::vector<SpaceExpr> factors; };

struct SpaceNode {
  std::variant<PointT, SphereT, GenericCWT, LoopT, SuspT, SmashT, SmashPowerT,
               WedgeT, WeakProdT>
      v;
};

inline SpaceExpr wrap(std::shared_ptr<const SpaceNode> p) { return SpaceExpr(std::move(p)); }

template <typename T>
SpaceExpr make_node_from(T&& t) {
  auto node = std::make_shared<SpaceNode>();
  node->v = std::forward<T>(t);
  return wrap(std::move(node));
}

} // namespace detail

inline SpaceExpr SpaceExpr::point() { return detail::make_node_from(detail::PointT{}); }

inline SpaceExpr SpaceExpr::sphere(int dim) {
  if (dim < 0) throw invalid_argument("sphere: dimension must be >= 0");
  return detail::make_node_from(detail::SphereT{dim});
}

inline SpaceExpr SpaceExpr::generic_cw(std::string name, ExtInt conn) {
  if (conn < ExtInt(0))
    throw invalid_argument("generic_cw: declared connectivity must be >= 0");
  return detail::make_node_from(detail::GenericCWT{std::move(name), conn});
}

inline SpaceExpr SpaceExpr::loop(int count, SpaceExpr inner) {
  if (count < 0) throw invalid_argument("loop: count must be >= 0");
  return detail::make_node_from(detail::LoopT{count, std::move(inner)});
}

inline SpaceExpr SpaceExpr::susp(int count, SpaceExpr inner) {
  if (count < 0) throw invalid_argument("susp: count must be >= 0");
  return detail::make_node_from(detail::SuspT{count, std::move(inner)});
}

inline SpaceExpr SpaceExpr::smash(std::vector<SpaceExpr> factors) {
  if (factors.empty()) throw invalid_argument("smash: needs at least one factor");
  return detail::make_node_from(detail::SmashT{std::move(factors)});
}

inline SpaceExpr SpaceExpr::smash_power(SpaceExpr base, int power) {
  if (power < 0) throw invalid_argument("smash_power: power must be >= 0");
  return detail::make_node_from(detail::SmashPowerT{std::move(base), power});
}

inline SpaceExpr SpaceExpr::wedge(std::vector<SpaceExpr> summands) {
  return detail::make_node_from(detail::WedgeT{std::move(summands)});
}

inline SpaceExpr SpaceExpr::weak_prod(std::vector<SpaceExpr> factors) {
  return detail::make_node_from(detail::WeakProdT{std::move(factors)});
}

inline SpaceKind SpaceExpr::kind() const {
  return static_cast<SpaceKind>(p_->v.index());
}

inline int SpaceExpr::sphere_dim() const {
  if (auto* s = std::get_if<detail::SphereT>(&p_->v)) return s->dim;
  throw invalid_argument("SpaceExpr: not a sphere");
}

inline const std::string& SpaceExpr::cw_name() const {
  if (auto* s = std::get_if<detail::GenericCWT>(&p_->v)) return s->name;
  throw invalid_argument("SpaceExpr: not a generic CW complex");
}

inline ExtInt SpaceExpr::cw_conn() const {
  if (auto* s = std::get_if<detail::GenericCWT>(&p_->v)) return s->conn;
  throw invalid_argument("SpaceExpr: not a generic CW complex");
}

inline int SpaceExpr::prefix_count() const {
  if (auto* l = std::get_if<detail::LoopT>(&p_->v)) return l->count;
  if (auto* s = std::get_if<detail::SuspT>(&p_->v)) return s->count;
  throw invalid_argument("SpaceExpr: not a loop/suspension");
}

inline const SpaceExpr& SpaceExpr::inner() const {
  if (auto* l = std::get_if<detail::LoopT>(&p_->v)) return l->inner;
  if (auto* s = std::get_if<detail::SuspT>(&p_->v)) return s->inner;
  if (auto* p = std::get_if<detail::SmashPowerT>(&p_->v)) return p->base;
  throw invalid_argument("SpaceExpr: no inner expression");
}

inline int SpaceExpr::power() const {
  if (auto* p = std::get_if<detail::SmashPowerT>(&p_->v)) return p->power;
  throw invalid_argument("SpaceExpr: not a smash power");
}

inline const std::vector<SpaceExpr>& SpaceExpr::parts() const {
  if (auto* s = std::get_if<detail::SmashT>(&p_->v)) return s->factors;
  if (auto* w = std::get_if<detail::WedgeT>(&p_->v)) return w->summands;
  if (auto* w = std::get_if<detail::WeakProdT>(&p_->v)) return w->factors;
  throw invalid_argument("SpaceExpr: no part list");
}

// Total order on expressions (arbitrary but fixed); 0 means structurally equal.
inline int expr_cmp(const SpaceExpr& a, const SpaceExpr& b) {
  if (a.p_ == b.p_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  auto cmp_int = [](std::int64_t x, std::int64_t y) { return x < y ? -1 : (x > y ? 1 : 0); };
  auto cmp_ext = [&](ExtInt x, ExtInt y) { return x < y ? -1 : (y < x ? 1 : 0); };
  auto cmp_vec = [](const std::vector<SpaceExpr>& x, const std::vector<SpaceExpr>& y) {
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
      if (int c = expr_cmp(x[i], y[i])) return c;
    return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
  };
  switch (a.kind()) {
    case SpaceKind::point: return 0;
    case SpaceKind::sphere: return cmp_int(a.sphere_dim(), b.sphere_dim());
    case SpaceKind::generic_cw: {
      if (int c = a.cw_name().compare(b.cw_name())) return c < 0 ? -1 : 1;
      return cmp_ext(a.cw_conn(), b.cw_conn());
    }
    case SpaceKind::loop:
    case SpaceKind::susp: {
      if (int c = cmp_int(a.prefix_count(), b.prefix_count())) return c;
      return expr_cmp(a.inner(), b.inner());
    }
    case SpaceKind::smash_power: {
      if (int c = cmp_int(a.power(), b.power())) return c;
      return expr_cmp(a.inner(), b.inner());
    }
    case SpaceKind::smash:
    case SpaceKind::wedge:
    case SpaceKind::weak_prod: return cmp_vec(a.parts(), b.parts());
  }
  return 0;
}

inline bool operator==(const SpaceExpr& a, const SpaceExpr& b) { return expr_cmp(a, b) == 0; }

inline bool expr_less(const SpaceExpr& a, const SpaceExpr& b) { return expr_cmp(a, b) < 0; }

// Connectivity of a formal expression.
//   point: +inf            sphere d: d-1          generic CW: declared
//   Susp^b X: conn X + b   Loop^a X: conn X - a
//   smash: sum of conns + (#factors - 1)
//   X^(j): j*conn X + (j-1) for j >= 1, and -1 (= conn S^0) for j = 0
//   wedge, weak product: min over parts (empty: +inf)
inline ExtInt connectivity(const SpaceExpr& e) {
  switch (e.kind()) {
    case SpaceKind::point: return ExtInt::pos_inf();
    case SpaceKind::sphere: return ExtInt(e.sphere_dim() - 1);
    case SpaceKind::generic_cw: return e.cw_conn();
    case SpaceKind::loop: return connectivity(e.inner()) - ExtInt(e.prefix_count());
    case SpaceKind::susp: return connectivity(e.inner()) + ExtInt(e.prefix_count());
    case SpaceKind::smash: {
      ExtInt total = ExtInt(static_cast<int>(e.parts().size()) - 1);
      for (const auto& f : e.parts()) total = total + connectivity(f);
      return total;
    }
    case SpaceKind::smash_power: {
      int j = e.power();
      if (j == 0) return ExtInt(-1);
      return j * connectivity(e.inner()) + ExtInt(j - 1);
    }
    case SpaceKind::wedge:
    case SpaceKind::weak_prod: {
      ExtInt m = ExtInt::pos_inf();
      for (const auto& f : e.parts()) m = min(m, connectivity(f));
      return m;
    }
  }
  throw invalid_argument("connectivity: unknown expression");
}

namespace detail {

// Multiset of smash cores with multiplicities; cores carry no top-level
// suspension or sphere (those are pulled into the `susp` total).
struct SmashAccum {
  int susp = 0;
  bool is_point = false;
  std::vector<std::pair<SpaceExpr, int>> cores; // (core, multiplicity)

  void add_core(const SpaceExpr& c, int mult) {
    for (auto& [core, m] : cores)
      if (core == c) {
        m += mult;
        return;
      }
    cores.emplace_back(c, mult);
  }
};

void smash_accumulate(SmashAccum& acc, const SpaceExpr& f, int mult);

} // namespace detail

SpaceExpr normalize(const SpaceExpr& e);

namespace detail {

// Fold one normalized factor (with multiplicity) into a smash accumulator,
// using Susp^a X ^ Z = Susp^a (X ^ Z), S^d ^ X = Susp^d X, S^0 = unit.
inline void smash_accumulate(SmashAccum& acc, const SpaceExpr& f, int mult) {
  switch (f.kind()) {
    case SpaceKind::point: acc.is_point = true; return;
    case SpaceKind::sphere: acc.susp += mult * f.sphere_dim(); return;
    case SpaceKind::susp:
      acc.susp += mult * f.prefix_count();
      smash_accumulate(acc, f.inner(), mult);
      return;
    case SpaceKind::smash:
      for (const auto& g : f.parts()) smash_accumulate(acc, g, mult);
      return;
    case SpaceKind::smash_power:
      smash_accumulate(acc, f.inner(), mult * f.power());
      return;
    default: acc.add_core(f, mult); return;
  }
}

inline SpaceExpr smash_finish(SmashAccum& acc) {
  if (acc.is_point) return SpaceExpr::point();
  std::sort(acc.cores.begin(), acc.cores.end(),
            [](const auto& x, const auto& y) { return expr_less(x.first, y.first); });
  std::vector<SpaceExpr> factors;
  for (auto& [core, m] : acc.cores) {
    if (m == 1)
      factors.push_back(core);
    else if (m > 1)
      factors.push_back(SpaceExpr::smash_power(core, m));
  }
  SpaceExpr body = factors.empty()  ? SpaceExpr::sphere(0)
                   : factors.size() == 1 ? factors[0]
                                         : SpaceExpr::smash(std::move(factors));
  if (acc.susp == 0) return body;
  if (body.kind() == SpaceKind::sphere) return SpaceExpr::sphere(body.sphere_dim() + acc.susp);
  return SpaceExpr::susp(acc.susp, body);
}

} // namespace detail

// Canonical form. Identities applied (all exact for pointed CW types):
//   Loop^a Loop^b = Loop^(a+b), Susp^a Susp^b = Susp^(a+b), zero prefixes drop
//   Susp^b S^d = S^(b+d), smash with a point = point, S^0 smash-unit,
//   Susp^a X ^ Z = Susp^a (X ^ Z), equal smash factors group into powers
//   (smash reordered into a canonical order), X^(0) = S^0, X^(1) = X,
//   (S^d)^(j) = S^(jd), wedge drops point summands, weak products flatten
//   and drop point factors, one-element wedges/products unwrap.
inline SpaceExpr normalize(const SpaceExpr& e) {
  switch (e.kind()) {
    case SpaceKind::point:
    case SpaceKind::sphere:
    case SpaceKind::generic_cw: return e;
    case SpaceKind::loop: {
      SpaceExpr in = normalize(e.inner());
      int a = e.prefix_count();
      if (in.kind() == SpaceKind::point) return in;
      while (in.kind() == SpaceKind::loop) {
        a += in.prefix_count();
        in = in.inner();
      }
      return a == 0 ? in : SpaceExpr::loop(a, std::move(in));
    }
    case SpaceKind::susp: {
      SpaceExpr in = normalize(e.inner());
      int b = e.prefix_count();
      if (in.kind() == SpaceKind::point) return in;
      while (in.kind() == SpaceKind::susp) {
        b += in.prefix_count();
        in = in.inner();
      }
      if (in.kind() == SpaceKind::sphere) return SpaceExpr::sphere(in.sphere_dim() + b);
      return b == 0 ? in : SpaceExpr::susp(b, std::move(in));
    }
    case SpaceKind::smash: {
      detail::SmashAccum acc;
      for (const auto& f : e.parts()) detail::smash_accumulate(acc, normalize(f), 1);
      return detail::smash_finish(acc);
    }
    case SpaceKind::smash_power: {
      int j = e.power();
      if (j == 0) return SpaceExpr::sphere(0);
      SpaceExpr base = normalize(e.inner());
      if (j == 1) return base;
      detail::SmashAccum acc;
      detail::smash_accumulate(acc, base, j);
      return detail::smash_finish(acc);
    }
    case SpaceKind::wedge: {
      std::vector<SpaceExpr> out;
      for (const auto& s : e.parts()) {
        SpaceExpr n = normalize(s);
        if (n.kind() == SpaceKind::point) continue;
        if (n.kind() == SpaceKind::wedge) {
          for (const auto& t : n.parts()) out.push_back(t);
        } else {
          out.push_back(std::move(n));
        }
      }
      if (out.empty()) return SpaceExpr::point();
      std::sort(out.begin(), out.end(), expr_less);
      if (out.size() == 1) return out[0];
      return SpaceExpr::wedge(std::move(out));
    }
    case SpaceKind::weak_prod: {
      std::vector<SpaceExpr> out;
      for (const auto& f : e.parts()) {
        SpaceExpr n = normalize(f);
        if (n.kind() == SpaceKind::point) continue;
        if (n.kind() == SpaceKind::weak_prod) {
          for (const auto& t : n.parts()) out.push_back(t);
        } else {
          out.push_back(std::move(n));
        }
      }
      if (out.empty()) return SpaceExpr::point();
      if (out.size() == 1) return out[0];
      return SpaceExpr::weak_prod(std::move(out));
    }
  }
  throw invalid_argument("normalize: unknown expression");
}

// Text rendering: S^d, Omega^a, Sigma^b, Y^(j), ^ for smash, v for wedge.
inline std::string render(const SpaceExpr& e);

namespace detail {

// precedence: 3 atoms, 2 prefix (loop/susp), 1 smash, 0 wedge
inline int render_prec(const SpaceExpr& e) {
  switch (e.kind()) {
    case SpaceKind::point:
    case SpaceKind::sphere:
    case SpaceKind::generic_cw:
    case SpaceKind::smash_power:
    case SpaceKind::weak_prod: return 3;
    case SpaceKind::loop:
    case SpaceKind::susp: return 2;
    case SpaceKind::smash: return 1;
    case SpaceKind::wedge: return 0;
  }
  return 3;
}

inline std::string render_at(const SpaceExpr& e, int min_prec) {
  std::string s;
  switch (e.kind()) {
    case SpaceKind::point: s = "*"; break;
    case SpaceKind::sphere: s = "S^" + std::to_string(e.sphere_dim()); break;
    case SpaceKind::generic_cw: s = e.cw_name(); break;
    case SpaceKind::loop:
    case SpaceKind::susp: {
      const char* sym = e.kind() == SpaceKind::loop ? "Ω" : "Σ";
      int c = e.prefix_count();
      s = std::string(sym) + (c == 1 ? "" : "^" + std::to_string(c)) + render_at(e.inner(), 2);
      break;
    }
    case SpaceKind::smash: {
      bool first = true;
      for (const auto& f : e.parts()) {
        if (!first) s += "∧";
        s += render_at(f, 2);
        first = false;
      }
      break;
    }
    case SpaceKind::smash_power:
      s = render_at(e.inner(), 3) + "^(" + std::to_string(e.power()) + ")";
      break;
    case SpaceKind::wedge: {
      bool first = true;
      for (const auto& f : e.parts()) {
        if (!first) s += "∨";
        s += render_at(f, 1);
        first = false;
      }
      break;
    }
    case SpaceKind::weak_prod: {
      s = "∏'(";
      bool first = true;
      for (const auto& f : e.parts()) {
        if (!first) s += ", ";
        s += render_at(f, 0);
        first = false;
      }
      s += ")";
      break;
    }
  }
  if (render_prec(e) < min_prec) return "(" + s + ")";
  return s;
}

} // namespace detail

inline std::string render(const SpaceExpr& e) { return detail::render_at(e, 0); }

enum class Variance { covariant, contravariant };

// A cube of spaces: one vertex per subset of a finite index set. Vertices are
// stored by bitmask; bit i of a mask selects index_set[i].
struct CubeOfSpaces {
  std::vector<int> index_set;
  std::vector<SpaceExpr> vertices; // size 2^|index_set|
  Variance variance = Variance::contravariant;

  std::size_t vertex_count() const { return vertices.size(); }

  const SpaceExpr& vertex(std::uint32_t mask) const {
    if (mask >= vertices.size()) throw invalid_argument("CubeOfSpaces: bad subset mask");
    return vertices[mask];
  }
};

// The (k-1)-cube behind the k-th layer over subsets R of {2..k}: each vertex
// is Wedge(Susp(1, Y), one Sphere(n-1) per element of R), contravariantly.
inline CubeOfSpaces build_layer_cube(int k, int n, const SpaceExpr& target) {
  if (k < 2) throw invalid_argument("build_layer_cube: k must be >= 2");
  if (k > 20) throw unsupported_range("build_layer_cube: k must be <= 20");
  if (n < 4) throw unsupported_range("build_layer_cube: n must be >= 4");
  if (connectivity(target) < ExtInt(0))
    throw invalid_argument("build_layer_cube: target must be connected");
  CubeOfSpaces cube;
  cube.variance = Variance::contravariant;
  for (int i = 2; i <= k; ++i) cube.index_set.push_back(i);
  std::uint32_t total = std::uint32_t(1) << (k - 1);
  cube.vertices.reserve(total);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    std::vector<SpaceExpr> summands{SpaceExpr::susp(1, target)};
    for (int i = 0; i < k - 1; ++i)
      if (mask & (std::uint32_t(1) << i)) summands.push_back(SpaceExpr::sphere(n - 1));
    cube.vertices.push_back(SpaceExpr::wedge(std::move(summands)));
  }
  return cube;
}

namespace detail {

// Guards the word enumerations: Lyndon words over k letters up to the given
// weight number about k^w / w, which must stay tractable.
inline void check_enumeration_size(int k, int max_weight) {
  double words = 0, pw = 1;
  for (int w = 1; w <= max_weight; ++w) {
    pw *= k;
    words += pw / w;
    if (words > 5e7)
      throw invalid_argument("cutoff admits too many basic words to enumerate");
  }
}

} // namespace detail

// One factor of a weak-product splitting.
struct SplitFactor {
  BasicWord word;
  SpaceExpr expr;
  ExtInt conn;
};

inline bool split_factor_order(const SplitFactor& a, const SplitFactor& b) {
  if (a.conn != b.conn) return a.conn < b.conn;
  return word_order_less(a.word, b.word);
}

// Loop space of a suspended wedge as a weak product over basic words:
//   Loop Susp (X_1 v ... v X_k)  ~  prod'_w Loop Susp w(X_1, ..., X_k)
// truncated to words whose suspended smash has connectivity <= cutoff
// (conn Susp w(X) grows at least linearly in the weight of w, so the
// truncation is finite and complete). Factors are ordered by connectivity,
// then by word order.
inline SpaceExpr hilton_milnor_split(const std::vector<SpaceExpr>& summands, ExtInt cutoff) {
  if (summands.empty()) throw invalid_argument("hilton_milnor_split: no summands");
  for (const auto& s : summands)
    if (connectivity(s) < ExtInt(0))
      throw invalid_argument("hilton_milnor_split: summands must be connected");
  if (cutoff.is_pos_inf())
    throw invalid_argument("hilton_milnor_split: cutoff must be < +inf");
  if (cutoff.is_neg_inf() || cutoff < ExtInt(1)) return SpaceExpr::weak_prod({});

  int k = static_cast<int>(summands.size());
  // conn Susp w(X) = weight + sum of letter connectivities >= weight
  std::int64_t weight_bound = std::min<std::int64_t>(cutoff.value(), 1 << 30);
  if (k == 1) weight_bound = std::min<std::int64_t>(weight_bound, 1); // one unary basic word
  int max_weight = static_cast<int>(weight_bound);
  detail::check_enumeration_size(k, max_weight);
  std::vector<SplitFactor> factors;
  detail::duval_lyndon(1, k, max_weight, [&](const std::string& w) {
    ExtInt conn_susp = ExtInt(static_cast<int>(w.size()));
    for (char c : w) conn_susp = conn_susp + connectivity(summands[static_cast<std::size_t>(c) - 1]);
    if (cutoff < conn_susp) return;
    std::vector<SpaceExpr> subst;
    subst.reserve(w.size());
    for (char c : w) subst.push_back(summands[static_cast<std::size_t>(c) - 1]);
    SpaceExpr factor =
        normalize(SpaceExpr::loop(1, SpaceExpr::susp(1, SpaceExpr::smash(std::move(subst)))));
    factors.push_back({detail::basic_word_unchecked(w, k), factor, connectivity(factor)});
  });
  std::sort(factors.begin(), factors.end(), split_factor_order);
  std::vector<SpaceExpr> exprs;
  exprs.reserve(factors.size());
  for (auto& f : factors) exprs.push_back(std::move(f.expr));
  return SpaceExpr::weak_prod(std::move(exprs));
}

namespace detail {

// Shape of a cube produced by build_layer_cube, recovered by validation.
struct LayerCubeShape {
  int k;
  int n;
  SpaceExpr target;
};

inline LayerCubeShape parse_layer_cube(const CubeOfSpaces& cube) {
  const char* bad = "total_fiber_factors: cube is not a layer cube";
  if (cube.variance != Variance::contravariant) throw invalid_argument(bad);
  int k = static_cast<int>(cube.index_set.size()) + 1;
  if (k < 2) throw invalid_argument(bad);
  for (int i = 0; i < k - 1; ++i)
    if (cube.index_set[static_cast<std::size_t>(i)] != i + 2) throw invalid_argument(bad);
  if (cube.vertices.size() != (std::size_t(1) << (k - 1))) throw invalid_argument(bad);

  // Every vertex: Wedge(Susp(1, Y), |R| copies of S^(n-1)).
  const SpaceExpr& base = cube.vertices[0];
  if (base.kind() != SpaceKind::wedge || base.parts().size() != 1) throw invalid_argument(bad);
  const SpaceExpr& first = base.parts()[0];
  if (first.kind() != SpaceKind::susp || first.prefix_count() != 1) throw invalid_argument(bad);
  SpaceExpr target = first.inner();
  if (connectivity(target) < ExtInt(0)) throw invalid_argument(bad);

  int n = -1;
  for (std::uint32_t mask = 0; mask < cube.vertices.size(); ++mask) {
    const SpaceExpr& v = cube.vertices[mask];
    if (v.kind() != SpaceKind::wedge) throw invalid_argument(bad);
    const auto& parts = v.parts();
    int bits = __builtin_popcount(mask);
    if (parts.size() != static_cast<std::size_t>(bits) + 1) throw invalid_argument(bad);
    if (!(parts[0] == first)) throw invalid_argument(bad);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].kind() != SpaceKind::sphere) throw invalid_argument(bad);
      int dim = parts[i].sphere_dim();
      if (n == -1) n = dim + 1;
      if (dim + 1 != n) throw invalid_argument(bad);
    }
  }
  if (n == -1 || n < 4) throw invalid_argument(bad);
  return {k, n, target};
}

// Largest word weight worth enumerating for a truncated layer splitting.
// The factor for a word with invariants (alpha, beta), alpha >= k-1, has
// connectivity 1 + alpha*(n-2) + conn(Y^(beta)) - k. For a fixed weight
// w = alpha + beta this is linear in alpha away from beta = 0, so its
// minimum sits at alpha = k-1, beta = 1, or beta = 0; each of those chains
// grows strictly with w, giving a closed-form largest admissible weight.
inline int layer_weight_bound(int k, int n, ExtInt target_conn, ExtInt cutoff) {
  if (cutoff.is_neg_inf()) return 0;
  std::int64_t C = cutoff.value();
  std::int64_t best = 0;
  // beta = 0 chain: conn = w*(n-2) - k  (needs w >= k-1)
  if (C + k >= 0) {
    std::int64_t w = (C + k) / (n - 2);
    if (w >= k - 1) best = std::max(best, w);
  }
  if (target_conn.is_finite()) {
    std::int64_t cy = target_conn.value();
    // beta = 1 chain: conn = 1 + (w-1)*(n-2) + cy - k  (needs w >= k)
    {
      std::int64_t num = C + k - 1 - cy;
      if (num >= 0) {
        std::int64_t w = num / (n - 2) + 1;
        if (w >= k) best = std::max(best, w);
      }
    }
    // alpha = k-1 chain: conn = 1 + (k-1)*(n-2) + b*(cy+1) - 1 - k, b = w-k+1 >= 1
    {
      std::int64_t num = C + k - (k - 1) * static_cast<std::int64_t>(n - 2);
      if (num >= cy + 1) {
        std::int64_t w = k - 1 + num / (cy + 1);
        best = std::max(best, w);
      }
    }
  }
  return static_cast<int>(std::min<std::int64_t>(best, 1 << 30));
}

} // namespace detail

// Factors of the k-th layer read off from its cube: loop the cube once, split
// each vertex as a wedge of suspensions by basic words with X_1 = Y and
// X_i = S^(n-2) (i in R) or a point (i not in R), discard word cubes whose
// total fiber is contractible (every word missing a letter of {2..k}; their
// punctured cubes have a non-trivial vertex, killed by the Fubini argument),
// and keep the initial vertex of each surviving word cube, with Loop^(k-1)
// for the passage from the fiber to the section space. Truncated to factors
// with connectivity <= cutoff; contractible factors are dropped.
inline std::vector<SplitFactor> total_fiber_factors(const CubeOfSpaces& cube, ExtInt cutoff) {
  detail::LayerCubeShape shape = detail::parse_layer_cube(cube);
  if (cutoff.is_pos_inf())
    throw invalid_argument("total_fiber_factors: cutoff must be < +inf");
  std::vector<SplitFactor> out;
  if (cutoff.is_neg_inf()) return out;

  int k = shape.k, n = shape.n;
  ExtInt target_conn = connectivity(shape.target);
  int max_weight = detail::layer_weight_bound(k, n, target_conn, cutoff);
  if (max_weight == 0) return out;
  detail::check_enumeration_size(k, max_weight);

  // Normalized factor expressions depend only on the multidegree; memoize.
  std::map<std::vector<int>, std::pair<SpaceExpr, ExtInt>> memo;

  std::vector<int> content(static_cast<std::size_t>(k), 0);
  detail::duval_lyndon(1, k, max_weight, [&](const std::string& w) {
    std::fill(content.begin(), content.end(), 0);
    for (char c : w) ++content[static_cast<std::size_t>(c) - 1];
    for (int i = 1; i < k; ++i)
      if (content[static_cast<std::size_t>(i)] == 0) return; // contractible word cube
    auto it = memo.find(content);
    if (it == memo.end()) {
      std::vector<SpaceExpr> subst;
      subst.reserve(w.size());
      for (char c : w)
        subst.push_back(c == 1 ? shape.target : SpaceExpr::sphere(n - 2));
      SpaceExpr initial_vertex =
          SpaceExpr::loop(1, SpaceExpr::susp(1, SpaceExpr::smash(std::move(subst))));
      SpaceExpr factor = normalize(SpaceExpr::loop(k - 1, initial_vertex));
      ExtInt conn = connectivity(factor);
      it = memo.emplace(content, std::make_pair(std::move(factor), conn)).first;
    }
    const auto& [expr, conn] = it->second;
    if (conn.is_pos_inf() || cutoff < conn) return;
    out.push_back({detail::basic_word_unchecked(w, k), expr, conn});
  });
  std::sort(out.begin(), out.end(), split_factor_order);
  return out;
}

} // namespace embcalc
