#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "embcalc/engine.hpp"
#include "embcalc/errors.hpp"
#include "embcalc/estimates.hpp"
#include "embcalc/ext_int.hpp"
#include "embcalc/spaces.hpp"
#include "embcalc/tower.hpp"
#include "embcalc/words.hpp"

namespace embcalc::cli {

/* Command-line surface. Every subcommand prints an aligned text table by
 * default or, with --json, one machine-readable record
 *   {"command": ..., "format_version": 1, "params": ..., "results": ...}
 * with sorted keys, so equal inputs produce byte-equal output.
 */

constexpr int format_version = 1;

inline ExtInt parse_ext_int(const std::string& token) {
  if (token == "inf" || token == "+inf") return ExtInt::pos_inf();
  if (token == "-inf") return ExtInt::neg_inf();
  std::int64_t v = 0;
  const char* end = token.data() + token.size();
  auto [p, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || p != end)
    throw invalid_argument("not an extended integer: \"" + token + "\"");
  return ExtInt(v);
}

inline std::vector<ExtInt> parse_ext_int_list(const std::string& csv) {
  std::vector<ExtInt> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(parse_ext_int(csv.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

// point | sphere:D | cw:CONN
inline SpaceExpr parse_target(const std::string& spec) {
  if (spec == "point") return SpaceExpr::point();
  std::size_t colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  if (colon != std::string::npos && head == "sphere") {
    ExtInt d = parse_ext_int(spec.substr(colon + 1));
    if (!d.is_finite() || d.value() < 1 || d.value() > 1000000000)
      throw invalid_argument("sphere dimension must be a positive integer");
    return SpaceExpr::sphere(static_cast<int>(d.value()));
  }
  if (colon != std::string::npos && head == "cw")
    return SpaceExpr::generic_cw("Y", parse_ext_int(spec.substr(colon + 1)));
  throw invalid_argument("target must be point, sphere:D or cw:CONN, got \"" + spec + "\"");
}

inline ExtInt resolve_cutoff(const std::string& flag_value) {
  if (!flag_value.empty()) return parse_ext_int(flag_value);
  if (const char* env = std::getenv("EMBCALC_CUTOFF_DEFAULT")) {
    try {
      return parse_ext_int(env);
    } catch (const invalid_argument& e) {
      throw invalid_argument(std::string("EMBCALC_CUTOFF_DEFAULT: ") + e.what());
    }
  }
  return ExtInt(20);
}

namespace detail {

inline nlohmann::json to_json(ExtInt v) {
  if (v.is_finite()) return v.value();
  return v.str();
}

inline nlohmann::json to_json(const ConnFact& f) {
  return {{"subject", f.subject}, {"kind", fact_kind_name(f.kind)}, {"bound", to_json(f.bound)}};
}

inline nlohmann::json to_json(const DerivationTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    steps.push_back({{"index", i},
                     {"rule", s.rule},
                     {"cube_size", s.cube_size},
                     {"inputs", s.inputs},
                     {"output", to_json(s.output)}});
  }
  return {{"conclusion", to_json(t.conclusion)},
          {"steps", std::move(steps)},
          {"valid", trace_valid(t)}};
}

inline void write_record(std::ostream& out, const std::string& command,
                         const nlohmann::json& params, const nlohmann::json& results) {
  nlohmann::json doc{{"command", command},
                     {"format_version", format_version},
                     {"params", params},
                     {"results", results}};
  out << doc.dump(2) << "\n";
}

// Column width in code points (the rendered glyphs are one column each).
inline std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void print_table(const Table& t, std::ostream& out, const std::string& indent = "") {
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = display_width(t.header[c]);
  for (const auto& row : t.rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], display_width(row[c]));
  auto line = [&](const std::vector<std::string>& cells) {
    out << indent;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << cells[c];
      if (c + 1 < cells.size())
        out << std::string(width[c] - display_width(cells[c]) + 2, ' ');
    }
    out << "\n";
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
}

// The factor body without its outer loops: Susp(1 + alpha(n-2), Y^(beta)).
inline SpaceExpr factor_body(const Factor& f, int n, const SpaceExpr& y) {
  return normalize(SpaceExpr::susp(1 + f.alpha * (n - 2), SpaceExpr::smash_power(y, f.beta)));
}

inline Table factor_table(const std::vector<Factor>& factors, int k, int n, const SpaceExpr& y) {
  Table t;
  t.header = {"word", "loops", "space", "conn"};
  for (const Factor& f : factors)
    t.rows.push_back({f.word.str(), std::to_string(k), render(factor_body(f, n, y)),
                      f.conn.str()});
  return t;
}

inline nlohmann::json factors_json(const std::vector<Factor>& factors, int k, int n,
                                   const SpaceExpr& y) {
  nlohmann::json out = nlohmann::json::array();
  for (const Factor& f : factors)
    out.push_back({{"word", f.word.str()},
                   {"alpha", f.alpha},
                   {"beta", f.beta},
                   {"loops", k},
                   {"space", render(factor_body(f, n, y))},
                   {"conn", to_json(f.conn)}});
  return out;
}

inline nlohmann::json stages_json(const TowerSummary& ts, const SpaceExpr& y) {
  nlohmann::json stages = nlohmann::json::array();
  for (const TowerStage& st : ts.stages) {
    nlohmann::json stage{{"k", st.k},
                         {"description", st.description},
                         {"factors", factors_json(st.factors, st.k, ts.n, y)}};
    stage["forgetful_conn"] =
        st.forgetful_conn ? to_json(*st.forgetful_conn) : nlohmann::json(nullptr);
    stages.push_back(std::move(stage));
  }
  return stages;
}

inline void print_tower(const TowerSummary& ts, const SpaceExpr& y, std::ostream& out) {
  out << "tower: n=" << ts.n << ", target " << ts.target << ", stages 1.."
      << ts.stages.back().k << "\n";
  for (const TowerStage& st : ts.stages) {
    out << "stage " << st.k << ": " << st.description;
    if (st.forgetful_conn)
      out << ", r_" << st.k << " conn " << st.forgetful_conn->str();
    out << "\n";
    if (!st.factors.empty()) print_table(factor_table(st.factors, st.k, ts.n, y), out, "  ");
  }
}

// Either --n (ambient dimension) or both --rho and --c.
inline AnalyticCofunctor resolve_cofunctor(bool n_set, int n, bool rho_set, int rho, bool c_set,
                                           int c) {
  if (n_set && (rho_set || c_set))
    throw invalid_argument("give either --n or --rho/--c, not both");
  if (n_set) return emb_analyticity(n);
  if (rho_set && c_set) return {rho, c, "G"};
  throw invalid_argument("need --n or both --rho and --c");
}

} // namespace detail

// Dispatch one invocation; args excludes the program name. Returns the exit
// code: 0 success, 2 invalid arguments, 3 unsupported range.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taylor-tower calculator for embedding spaces of an interval", "embcalc"};
  app.require_subcommand(1);
  bool json_mode = false;

  int words_k = 0, words_w = 0;
  auto* words = app.add_subcommand("words", "basic words of the free Lie algebra on z_1..z_k");
  words->add_option("--k", words_k, "alphabet size")->required();
  words->add_option("--max-weight", words_w, "largest weight to list")->required();
  words->add_flag("--json", json_mode, "machine-readable output");
  words->callback([&] {
    std::vector<BasicWord> ws = enumerate_basic_words(words_k, words_w);
    if (json_mode) {
      nlohmann::json list = nlohmann::json::array();
      for (const BasicWord& w : ws)
        list.push_back({{"word", w.str()},
                        {"weight", w.weight()},
                        {"degrees", w.multidegree().degrees}});
      detail::write_record(out, "words", {{"k", words_k}, {"max_weight", words_w}},
                           {{"words", std::move(list)}});
      return;
    }
    detail::Table t;
    t.header = {"word", "weight", "degrees"};
    for (const BasicWord& w : ws) {
      std::string deg;
      for (int d : w.multidegree().degrees) deg += (deg.empty() ? "(" : ",") + std::to_string(d);
      t.rows.push_back({w.str(), std::to_string(w.weight()), deg + ")"});
    }
    detail::print_table(t, out);
  });

  int layers_k = 0, layers_n = 0;
  std::string layers_target, layers_cutoff;
  auto* layers = app.add_subcommand("layers", "weak-product factors of one layer of the tower");
  layers->add_option("--k", layers_k, "stage")->required();
  layers->add_option("--n", layers_n, "ambient dimension")->required();
  layers->add_option("--target", layers_target, "point | sphere:D | cw:CONN")->required();
  layers->add_option("--cutoff", layers_cutoff, "drop factors above this connectivity");
  layers->add_flag("--json", json_mode, "machine-readable output");
  layers->callback([&] {
    SpaceExpr y = parse_target(layers_target);
    ExtInt cutoff = resolve_cutoff(layers_cutoff);
    std::vector<Factor> fs = layer_factors(layers_k, layers_n, y, cutoff);
    if (json_mode) {
      detail::write_record(out, "layers",
                           {{"k", layers_k},
                            {"n", layers_n},
                            {"target", layers_target},
                            {"cutoff", detail::to_json(cutoff)}},
                           {{"factors", detail::factors_json(fs, layers_k, layers_n, y)}});
      return;
    }
    detail::print_table(detail::factor_table(fs, layers_k, layers_n, y), out);
  });

  int tower_n = 0, tower_kmax = 0;
  std::string tower_target, tower_cutoff, tower_q = "1";
  auto* tower = app.add_subcommand("tower", "stages 1..kmax with layers and forgetful maps");
  tower->add_option("--n", tower_n, "ambient dimension")->required();
  tower->add_option("--target", tower_target, "point | sphere:D | cw:CONN")->required();
  tower->add_option("--kmax", tower_kmax, "last stage")->required();
  tower->add_option("--cutoff", tower_cutoff, "drop factors above this connectivity");
  tower->add_option("--q", tower_q, "handle index of the domain (default 1)");
  tower->add_flag("--json", json_mode, "machine-readable output");
  tower->callback([&] {
    SpaceExpr y = parse_target(tower_target);
    ExtInt cutoff = resolve_cutoff(tower_cutoff);
    ExtInt q = parse_ext_int(tower_q);
    TowerSummary ts = tower_summary(tower_n, y, tower_kmax, cutoff, q);
    if (json_mode) {
      detail::write_record(out, "tower",
                           {{"n", tower_n},
                            {"target", tower_target},
                            {"kmax", tower_kmax},
                            {"cutoff", detail::to_json(cutoff)},
                            {"q", detail::to_json(q)}},
                           {{"stages", detail::stages_json(ts, y)}});
      return;
    }
    detail::print_tower(ts, y, out);
  });

  int knot_n = 0, knot_kmax = 0;
  std::string knot_cutoff;
  auto* knot = app.add_subcommand("knot", "the knot tower and its Stiefel fibration");
  knot->add_option("--n", knot_n, "ambient sphere dimension")->required();
  knot->add_option("--kmax", knot_kmax, "last stage")->required();
  knot->add_option("--cutoff", knot_cutoff, "drop factors above this connectivity");
  knot->add_flag("--json", json_mode, "machine-readable output");
  knot->callback([&] {
    ExtInt cutoff = resolve_cutoff(knot_cutoff);
    KnotTower kt = knot_tower(knot_n, knot_kmax, cutoff);
    SpaceExpr y = SpaceExpr::point();
    if (json_mode) {
      detail::write_record(
          out, "knot",
          {{"n", knot_n}, {"kmax", knot_kmax}, {"cutoff", detail::to_json(cutoff)}},
          {{"fibration",
            {{"fiber", kt.fibration.fiber},
             {"total", kt.fibration.total},
             {"base", kt.fibration.base},
             {"base_dim", kt.fibration.base_dim},
             {"base_conn", detail::to_json(kt.fibration.base_conn)}}},
           {"stages", detail::stages_json(kt.tower, y)}});
      return;
    }
    out << "fiber  " << kt.fibration.fiber << "\n";
    out << "total  " << kt.fibration.total << "\n";
    out << "base   " << kt.fibration.base << " (dim " << kt.fibration.base_dim << ", conn "
        << kt.fibration.base_conn.str() << ")\n";
    detail::print_tower(kt.tower, y, out);
  });

  auto* estimate = app.add_subcommand("estimate", "closed-form connectivity estimates");
  estimate->require_subcommand(1);

  int exc_n = 0;
  std::string exc_q;
  auto* exc = estimate->add_subcommand("excision", "Cartesian-ness of a handle-deletion cube");
  exc->add_option("--n", exc_n, "ambient dimension")->required();
  exc->add_option("--q", exc_q, "comma-separated handle indices (use -inf for a collar)")
      ->required();
  exc->add_flag("--json", json_mode, "machine-readable output");
  exc->callback([&] {
    std::vector<ExtInt> qs = parse_ext_int_list(exc_q);
    ExtInt value = excision_cartesianness({exc_n, qs});
    if (json_mode) {
      nlohmann::json qj = nlohmann::json::array();
      for (ExtInt q : qs) qj.push_back(detail::to_json(q));
      detail::write_record(out, "estimate excision", {{"n", exc_n}, {"q", std::move(qj)}},
                           {{"cartesianness", detail::to_json(value)}});
      return;
    }
    out << "cartesianness: " << value.str() << "\n";
  });

  int eta_n = 0, eta_rho = 0, eta_c = 0, eta_j = 0;
  std::string eta_q;
  auto* eta = estimate->add_subcommand("eta", "connectivity of the approximation map eta_j");
  auto* eta_n_opt = eta->add_option("--n", eta_n, "ambient dimension");
  auto* eta_rho_opt = eta->add_option("--rho", eta_rho, "analyticity radius");
  auto* eta_c_opt = eta->add_option("--c", eta_c, "excess");
  eta->add_option("--q", eta_q, "handle index (extended integer)")->required();
  eta->add_option("--j", eta_j, "tower stage")->required();
  eta->add_flag("--json", json_mode, "machine-readable output");
  eta->callback([&] {
    AnalyticCofunctor F =
        detail::resolve_cofunctor(eta_n_opt->count() > 0, eta_n, eta_rho_opt->count() > 0,
                                  eta_rho, eta_c_opt->count() > 0, eta_c);
    ExtInt q = parse_ext_int(eta_q);
    ExtInt value = eta_connectivity(F, q, eta_j);
    if (json_mode) {
      nlohmann::json params{
          {"rho", F.rho}, {"c", F.c}, {"q", detail::to_json(q)}, {"j", eta_j}};
      if (eta_n_opt->count() > 0) params["n"] = eta_n;
      detail::write_record(out, "estimate eta", params,
                           {{"connectivity", detail::to_json(value)}});
      return;
    }
    out << "connectivity: " << value.str() << "\n";
  });

  int lm_n = 0, lm_rho = 0, lm_c = 0, lm_k = 0;
  std::string lm_q;
  auto* lm = estimate->add_subcommand("layer-map", "connectivity of the forgetful map r_k");
  auto* lm_n_opt = lm->add_option("--n", lm_n, "ambient dimension");
  auto* lm_rho_opt = lm->add_option("--rho", lm_rho, "analyticity radius");
  auto* lm_c_opt = lm->add_option("--c", lm_c, "excess");
  lm->add_option("--q", lm_q, "handle index (extended integer)")->required();
  lm->add_option("--k", lm_k, "stage")->required();
  lm->add_flag("--json", json_mode, "machine-readable output");
  lm->callback([&] {
    AnalyticCofunctor F =
        detail::resolve_cofunctor(lm_n_opt->count() > 0, lm_n, lm_rho_opt->count() > 0, lm_rho,
                                  lm_c_opt->count() > 0, lm_c);
    ExtInt q = parse_ext_int(lm_q);
    ExtInt value = layer_map_connectivity(F, q, lm_k);
    if (json_mode) {
      nlohmann::json params{{"rho", F.rho}, {"c", F.c}, {"q", detail::to_json(q)}, {"k", lm_k}};
      if (lm_n_opt->count() > 0) params["n"] = lm_n;
      detail::write_record(out, "estimate layer-map", params,
                           {{"connectivity", detail::to_json(value)}});
      return;
    }
    out << "connectivity: " << value.str() << "\n";
  });

  int hae_m = 0, hae_n = 0;
  auto* hae = estimate->add_subcommand("haefliger", "metastable range of the degree-2 stage");
  hae->add_option("--m", hae_m, "source dimension")->required();
  hae->add_option("--n", hae_n, "ambient dimension")->required();
  hae->add_flag("--json", json_mode, "machine-readable output");
  hae->callback([&] {
    HaefligerRange r = haefliger_metastable(hae_m, hae_n);
    if (json_mode) {
      detail::write_record(out, "estimate haefliger", {{"m", hae_m}, {"n", hae_n}},
                           {{"square_1_cartesian", r.square_1_cartesian}, {"s", r.s}});
      return;
    }
    out << "square_1_cartesian: " << (r.square_1_cartesian ? "true" : "false") << "\n";
    out << "s: " << r.s << "\n";
  });

  int ana_n = 0;
  auto* ana = estimate->add_subcommand("analytic", "analyticity profile of emb(-, N^n)");
  ana->add_option("--n", ana_n, "ambient dimension")->required();
  ana->add_flag("--json", json_mode, "machine-readable output");
  ana->callback([&] {
    AnalyticCofunctor F = emb_analyticity(ana_n);
    if (json_mode) {
      detail::write_record(out, "estimate analytic", {{"n", ana_n}},
                           {{"rho", F.rho}, {"c", F.c}, {"label", F.label}});
      return;
    }
    out << "rho: " << F.rho << "\n";
    out << "c: " << F.c << "\n";
    out << "label: " << F.label << "\n";
  });

  auto* derive = app.add_subcommand("derive", "replay a connectivity bound as a checked trace");
  derive->require_subcommand(1);

  int deta_n = 0, deta_rho = 0, deta_c = 0, deta_q = 0, deta_k = 0;
  auto* deta = derive->add_subcommand("eta", "derive the approximation-map bound");
  auto* deta_n_opt = deta->add_option("--n", deta_n, "ambient dimension");
  auto* deta_rho_opt = deta->add_option("--rho", deta_rho, "analyticity radius");
  auto* deta_c_opt = deta->add_option("--c", deta_c, "excess");
  deta->add_option("--q", deta_q, "largest handle index")->required();
  deta->add_option("--k", deta_k, "stage")->required();
  deta->add_flag("--json", json_mode, "machine-readable output");
  deta->callback([&] {
    AnalyticCofunctor F =
        detail::resolve_cofunctor(deta_n_opt->count() > 0, deta_n, deta_rho_opt->count() > 0,
                                  deta_rho, deta_c_opt->count() > 0, deta_c);
    DerivationTrace t = derive_eta_bound(F, deta_q, deta_k);
    if (json_mode) {
      nlohmann::json params{{"rho", F.rho}, {"c", F.c}, {"q", deta_q}, {"k", deta_k}};
      if (deta_n_opt->count() > 0) params["n"] = deta_n;
      detail::write_record(out, "derive eta", params, detail::to_json(t));
      return;
    }
    out << "conclusion: " << fact_kind_name(t.conclusion.kind) << " "
        << t.conclusion.bound.str() << " | " << t.conclusion.subject << "\n";
    out << trace_text(t);
  });

  int dh_k = 0, dh_c = 0, dh_rho = 0, dh_m = 0;
  std::string dh_q;
  auto* dh = derive->add_subcommand("homogeneous", "derive the handle-cube bound");
  dh->add_option("--k", dh_k, "degree")->required();
  dh->add_option("--c", dh_c, "excess")->required();
  dh->add_option("--rho", dh_rho, "analyticity radius")->required();
  dh->add_option("--m", dh_m, "manifold dimension")->required();
  dh->add_option("--q", dh_q, "comma-separated handle indices")->required();
  dh->add_flag("--json", json_mode, "machine-readable output");
  dh->callback([&] {
    std::vector<ExtInt> qs = parse_ext_int_list(dh_q);
    DerivationTrace t = derive_homogeneous_cartesianness(dh_k, dh_c, dh_rho, dh_m, qs);
    if (json_mode) {
      nlohmann::json qj = nlohmann::json::array();
      for (ExtInt q : qs) qj.push_back(detail::to_json(q));
      detail::write_record(
          out, "derive homogeneous",
          {{"k", dh_k}, {"c", dh_c}, {"rho", dh_rho}, {"m", dh_m}, {"q", std::move(qj)}},
          detail::to_json(t));
      return;
    }
    out << "conclusion: " << fact_kind_name(t.conclusion.kind) << " "
        << t.conclusion.bound.str() << " | " << t.conclusion.subject << "\n";
    out << trace_text(t);
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("embcalc");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const unsupported_range& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

} // namespace embcalc::cli
