#include "klgame/cli.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "klgame/lower_bound.hpp"
#include "klgame/mltest.hpp"
#include "klgame/oracle.hpp"
#include "klgame/sweeps.hpp"

namespace klgame {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kConfigSchema = "klgame-config/1";
constexpr const char* kReportSchema = "klgame-report/1";

struct ReportBuilder {
  ojson assertions = ojson::array();
  ojson artifacts = ojson::object();
  int failures = 0;

  void add(const std::string& name, const std::string& rule, const std::string& bound,
           const std::string& measured, bool pass) {
    assertions.push_back(ojson{{"name", name},
                               {"rule", rule},
                               {"bound", bound},
                               {"measured", measured},
                               {"pass", pass}});
    if (!pass) ++failures;
  }
};

[[noreturn]] void cfg_fail(const std::string& field, const std::string& what) {
  fail(Errc::config_error, "field '" + field + "': " + what);
}

const ojson& get_field(const ojson& obj, const std::string& field) {
  auto it = obj.find(field);
  if (it == obj.end()) cfg_fail(field, "missing");
  return *it;
}

int get_int(const ojson& obj, const std::string& field, std::optional<int> def = {}) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    if (def) return *def;
    cfg_fail(field, "missing");
  }
  if (!it->is_number_integer()) cfg_fail(field, "expected an integer");
  return it->get<int>();
}

std::vector<int> get_positions(const ojson& obj, const std::string& field, int universe_length,
                               bool default_all) {
  auto it = obj.find(field);
  std::vector<int> out;
  if (it == obj.end()) {
    if (!default_all) cfg_fail(field, "missing");
    for (int p = 0; p < universe_length; ++p) out.push_back(p);
    return out;
  }
  if (!it->is_array()) cfg_fail(field, "expected an array of positions");
  for (const auto& v : *it) {
    if (!v.is_number_integer()) cfg_fail(field, "expected integers");
    int p = v.get<int>();
    if (p < 0 || p >= universe_length) cfg_fail(field, "position outside the universe");
    out.push_back(p);
  }
  return out;
}

StrategyProgram load_program(const ojson& cfg, const std::string& field) {
  const ojson& spec = get_field(cfg, field);
  if (!spec.is_object()) cfg_fail(field, "expected an object");
  StrategyProgram p;
  if (spec.contains("text")) {
    p = parse_program(spec["text"].get<std::string>());
  } else if (spec.contains("file")) {
    std::ifstream in(spec["file"].get<std::string>());
    if (!in) cfg_fail(field, "cannot read program file");
    std::stringstream buf;
    buf << in.rdbuf();
    p = parse_program(buf.str());
  } else if (spec.contains("generator")) {
    std::map<std::string, std::string> params;
    if (spec.contains("params")) {
      for (const auto& [k, v] : spec["params"].items())
        params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    std::uint64_t seed = spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : 0;
    p = make_generator(spec["generator"].get<std::string>(), seed, std::move(params));
  } else {
    cfg_fail(field, "needs one of text/file/generator");
  }
  if (spec.contains("mass")) p.initial_mass = Dyadic::parse(spec["mass"].get<std::string>());
  if (spec.contains("savings") && spec["savings"].get<bool>()) p = savings_transform(p);
  return p;
}

std::vector<long long> gap_from_config(const ojson& obj, const std::string& field, std::size_t n) {
  const ojson& g = get_field(obj, field);
  std::vector<long long> table;
  if (g.is_string()) {
    if (g.get<std::string>() != "halves") cfg_fail(field, "unknown gap function name");
    for (std::size_t l = 1; l <= n; ++l) table.push_back(static_cast<long long>((l + 1) / 2));
    return table;
  }
  if (!g.is_array()) cfg_fail(field, "expected a table or a name");
  for (const auto& v : g) table.push_back(v.get<long long>());
  if (table.size() < n) cfg_fail(field, "gap table shorter than the position sequence");
  return table;
}

std::string frac_str(const Dyadic& num, const BigInt& den) {
  return num.str() + " / " + den.str();
}

void run_simulate(const ojson& cfg, ReportBuilder& rb) {
  Universe u(get_int(cfg, "universe_length"));
  int horizon = get_int(cfg, "horizon", 64);
  const ojson& game = get_field(cfg, "game");
  std::uint64_t I_mask = positions_mask(get_positions(game, "interval", u.length, false));
  Restriction z = game.contains("z") ? Restriction::parse(game["z"].get<std::string>())
                                     : Restriction{};
  Dyadic threshold = game.contains("threshold")
                         ? Dyadic::parse(game["threshold"].get<std::string>())
                         : Dyadic(2);
  GoodnessParams params(get_int(game, "N"), get_int(game, "phi"), threshold);

  auto [a, b] = build_pair(load_program(cfg, "strategy_a"), load_program(cfg, "strategy_b"), u,
                           horizon);
  bool half = is_half_splitting(a, I_mask, horizon) && is_half_splitting(b, I_mask, horizon);
  GameTrace trace = run_basic_game(a, b, I_mask, z, params, horizon);

  ChosenMeasure cm = chosen_measure(trace, half);
  rb.add("chosen measure below Q*2^-|I|*lambda(z)", "chosen-measure-bound",
         frac_str(cm.bound_num, cm.bound_den), cm.sum.str(), cm.within_bound);
  rb.add("per-depth chosen slices at most 2^-|I|*lambda(z)", "chosen-slice-bound",
         cm.slice_bound.str(), cm.max_slice.str(), cm.slices_ok);
  TraceCheck tc = verify_trace_structure(trace, a, b, half);
  rb.add("trace structure", "trace-structure", "no violations",
         tc.ok() ? "clean" : tc.violations.front(), tc.ok());
  if (game.contains("h")) {
    LowCapReport lc = low_capital_fraction(trace, a, b, threshold, get_int(game, "h"), half);
    rb.add("low-capital survival", "low-capital-survival",
           lc.applicable ? frac_str(lc.gap_num, lc.q_den * BigInt(1)) + " * phi/num" : "vacuous",
           lc.max_fraction.str(), lc.ok);
    rb.artifacts["theta"] = lc.theta.str();
    rb.artifacts["eps"] = lc.eps.str();
  }
  bool conserved = a.conservation_violations().empty() && b.conservation_violations().empty();
  rb.add("mass and capital conservation", "mass-conservation", "exact", conserved ? "exact" : "broken",
         conserved);
  if (cfg.value("oracle", false)) {
    OracleReport rep = oracle_check_strategy(a, horizon);
    rep.merge(oracle_check_strategy(b, horizon));
    rb.add("enumeration oracle equivalence", "oracle-equivalence",
           std::to_string(rep.checks) + " checks", rep.ok() ? "match" : rep.mismatches.front(),
           rep.ok());
  }
  rb.artifacts["trace"] = export_trace(trace);
  rb.artifacts["records"] = trace.records.size();
  rb.artifacts["half_splitting"] = half;
}

void run_verify(const ojson& cfg, ReportBuilder& rb) {
  const ojson& v = get_field(cfg, "verify");
  SweepConfig sc;
  sc.universe_length = get_int(cfg, "universe_length");
  sc.horizon = get_int(cfg, "horizon", 40);
  sc.oracle = cfg.value("oracle", false);
  sc.seed_base = cfg.value("seed", 1u);
  sc.seeds = get_int(v, "seeds", 10);
  if (v.contains("interval_sizes")) {
    sc.interval_sizes.clear();
    for (const auto& s : v["interval_sizes"]) sc.interval_sizes.push_back(s.get<int>());
  }
  if (v.contains("phi_h")) {
    sc.phi_h.clear();
    for (const auto& pair : v["phi_h"])
      sc.phi_h.emplace_back(pair.at(0).get<long long>(), pair.at(1).get<long long>());
  }
  if (v.contains("families")) {
    sc.include_kl = sc.include_general = false;
    for (const auto& f : v["families"]) {
      if (f.get<std::string>() == "kl") sc.include_kl = true;
      if (f.get<std::string>() == "general") sc.include_general = true;
    }
  }
  SweepResult res = run_verify_sweep(sc);
  for (const auto& s : res.stats) {
    rb.add("sweep: " + s.rule, s.rule, "0 failures",
           std::to_string(s.failures) + " failures in " + std::to_string(s.runs) + " runs" +
               (s.detail.empty() ? "" : " (" + s.detail + ")"),
           s.failures == 0);
  }
}

void run_ml_test(const ojson& cfg, ReportBuilder& rb) {
  Universe u(get_int(cfg, "universe_length"));
  int horizon = get_int(cfg, "horizon", 4 * u.length);
  const ojson& zcfg = get_field(cfg, "zones");
  std::vector<int> pi = get_positions(zcfg, "positions", u.length, true);
  std::vector<long long> gap = gap_from_config(zcfg, "gap", pi.size());
  ZoneFlavor flavor = get_field(zcfg, "flavor").get<std::string>() == "half_splitting"
                          ? ZoneFlavor::half_splitting
                          : ZoneFlavor::general;
  int count = get_int(zcfg, "count", 2);
  int n_levels = get_int(zcfg, "levels", 2);

  StrategyProgram pa = load_program(cfg, "strategy_a");
  StrategyProgram pb = load_program(cfg, "strategy_b");
  if (pa.initial_mass + pb.initial_mass != Dyadic(1))
    fail(Errc::normalization_error, "strategy masses must sum to 1 in ml-test mode");
  auto [a, b] = build_pair(pa, pb, u, horizon);

  std::vector<Zone> zones = build_zones(pi, gap, count, flavor);
  ojson zinfo = ojson::array();
  Dyadic eps_total;
  for (const auto& [zone, check] :
       [&] {
         std::vector<std::pair<Zone, ZoneCheck>> out;
         auto checks = verify_zone_conditions(zones, flavor);
         for (std::size_t i = 0; i < zones.size(); ++i) out.emplace_back(zones[i], checks[i]);
         return out;
       }()) {
    rb.add("zone " + std::to_string(zone.index) + " choice depth bound", "zone-choice-depth-bound",
           "Q_k <= 2^(|I_k|-k-1)", check.q_bound ? "holds" : "fails", check.q_bound);
    rb.add("zone " + std::to_string(zone.index) + " split budget", "zone-split-budget",
           "N_k + k + floor(log2 phi_k) <= |I_k|", check.n_bound_floor ? "holds" : "fails",
           check.n_bound_floor);
    if (flavor == ZoneFlavor::half_splitting)
      rb.add("zone " + std::to_string(zone.index) + " split budget (exact log)",
             "zone-split-budget-exact", "phi_k * 2^(N_k+k) <= 2^|I_k|",
             check.n_bound_exact ? "holds" : "fails", check.n_bound_exact);
    Dyadic eps = violation_measure(a, b, zone, horizon);
    eps_total += eps;
    zinfo.push_back(ojson{{"index", zone.index},
                          {"interval_size", zone.interval.size()},
                          {"N", zone.N},
                          {"phi", zone.phi},
                          {"violation_measure", eps.str()},
                          {"exact_log_budget", check.n_bound_exact}});
  }
  rb.artifacts["zones"] = zinfo;

  TestLevels levels = run_levels(a, b, zones, n_levels, horizon);
  for (int n = 1; n <= n_levels; ++n) {
    Dyadic bound = Dyadic::pow2(-n);
    const Dyadic& m = levels.level_measures[n - 1];
    rb.add("level " + std::to_string(n) + " measure", "level-measure-bound", bound.str(), m.str(),
           m <= bound);
  }
  auto witness = witness_low_capital(levels, a, b, Dyadic(2), horizon);
  if (eps_total.is_zero()) {
    rb.add("witness with both capitals at most 2", "witness-low-capital", "exists",
           witness ? "found" : "absent", witness.has_value());
  } else {
    rb.artifacts["witness_presence"] = witness ? "found" : "absent (split bounds violated)";
  }
  if (witness) {
    std::string bits;
    for (int p = 0; p < u.length; ++p) bits += witness->bit(p) ? '1' : '0';
    rb.artifacts["witness"] = bits;
    rb.artifacts["witness_capital_a"] = a.achieved_capital(*witness, horizon).str();
    rb.artifacts["witness_capital_b"] = b.achieved_capital(*witness, horizon).str();
  }
  rb.artifacts["levels"] = export_levels(levels);
  bool conserved = a.conservation_violations().empty() && b.conservation_violations().empty();
  rb.add("mass and capital conservation", "mass-conservation", "exact",
         conserved ? "exact" : "broken", conserved);
  if (cfg.value("oracle", false)) {
    OracleReport rep = oracle_check_strategy(a, horizon);
    rep.merge(oracle_check_strategy(b, horizon));
    rb.add("enumeration oracle equivalence", "oracle-equivalence",
           std::to_string(rep.checks) + " checks", rep.ok() ? "match" : rep.mismatches.front(),
           rep.ok());
  }
}

void run_lower_bound_mode(const ojson& cfg, ReportBuilder& rb) {
  Universe u(get_int(cfg, "universe_length"));
  int horizon = get_int(cfg, "horizon", 1 << std::min(u.length + 2, 18));
  const ojson& lb = get_field(cfg, "lower_bound");
  std::vector<int> pi = get_positions(lb, "positions", u.length, true);
  int steps = get_int(lb, "steps");

  StrategyProgram pa = load_program(cfg, "strategy_a");
  StrategyProgram pb = load_program(cfg, "strategy_b");
  LowerBoundTrace trace = run_lower_bound(pa, pb, u, pi, steps, horizon);

  bool qh = true, qb = true, wb = true, wr = true;
  for (const auto& s : trace.steps) {
    qh = qh && s.q_halves;
    qb = qb && s.q_bound;
    wb = wb && s.w_bound;
    wr = wr && s.w_recursion;
  }
  rb.add("q_n halves each step", "lower-q-halving", "q_n <= q_{n-1}/2", qh ? "holds" : "fails", qh);
  rb.add("q_n at most 2^-n", "lower-q-bound", "q_n <= 2^-n", qb ? "holds" : "fails", qb);
  rb.add("surviving measure above half", "lower-w-bound", "lambda(W_n) >= (1+2^-n)/2 * lambda(z_n)",
         wb ? "holds" : "fails", wb);
  rb.add("surviving measure recursion", "lower-w-recursion",
         "lambda(W_n) >= (lambda(W_{n-1}) - 2^-2n)/2", wr ? "holds" : "fails", wr);
  rb.add("witness capitals within 2 + gap", "lower-witness-capital",
         "2 + " + trace.gap_a.str() + ", 2 + " + trace.gap_b.str(),
         trace.witness_capital_a.str() + ", " + trace.witness_capital_b.str(), trace.witness_ok);
  rb.artifacts["lower_bound"] = export_lower_bound(trace);
}

void run_profile(const ojson& cfg, ReportBuilder& rb) {
  Universe u(get_int(cfg, "universe_length"));
  int horizon = get_int(cfg, "horizon", 4 * u.length);
  const ojson& pcfg = get_field(cfg, "profile");
  std::vector<int> pi = get_positions(pcfg, "positions", u.length, true);
  int max_len = get_int(pcfg, "max_len", static_cast<int>(pi.size()));
  if (max_len < 1 || max_len > static_cast<int>(pi.size())) cfg_fail("max_len", "out of range");
  std::vector<long long> gap = gap_from_config(pcfg, "gap", static_cast<std::size_t>(max_len));

  auto [a, b] = build_pair(load_program(cfg, "strategy_a"), load_program(cfg, "strategy_b"), u,
                           horizon);
  std::uint64_t all_mask = positions_mask(pi);
  bool half = is_half_splitting(a, all_mask & u.mask(), horizon) &&
              is_half_splitting(b, all_mask & u.mask(), horizon);

  bool upper_general = true, upper_half = true, lower = true;
  ojson rows = ojson::array();
  for (int ell = 1; ell <= max_len; ++ell) {
    long long ceil_log = 0;
    while ((1ll << ceil_log) < ell) ++ceil_log;
    long long f_general = ell - ceil_log - gap[ell - 1];
    long long f_half = ell - gap[ell - 1];
    ojson row;
    row["ell"] = ell;
    row["f_general"] = f_general;
    row["f_half"] = f_half;
    for (const auto& [name, s] : {std::pair<const char*, const BettingStrategy*>{"a", &a},
                                  std::pair<const char*, const BettingStrategy*>{"b", &b}}) {
      Dyadic mg = split_profile_measure(*s, pi, ell, horizon, f_general, ProfileMode::at_most);
      Dyadic mh = split_profile_measure(*s, pi, ell, horizon, f_half, ProfileMode::at_most);
      Dyadic ml = split_profile_measure(*s, pi, ell, horizon, f_half, ProfileMode::at_least);
      long long max_count = 0;
      while (max_count < (1ll << std::min(ell, 40)) &&
             split_profile_measure(*s, pi, ell, horizon, max_count + 1, ProfileMode::at_least)
                     .sign() > 0)
        ++max_count;
      row[std::string("at_most_general_") + name] = mg.str();
      row[std::string("at_most_half_") + name] = mh.str();
      row[std::string("at_least_half_") + name] = ml.str();
      row[std::string("max_count_") + name] = max_count;
      if (mg != Dyadic(1)) upper_general = false;
      if (mh != Dyadic(1)) upper_half = false;
      if (ml != Dyadic(1)) lower = false;
    }
    rows.push_back(row);
  }
  rb.artifacts["profile"] = rows;
  rb.artifacts["half_splitting"] = half;
  std::string regime;
  if (upper_general) regime = "upper-bounded splits (general zones apply)";
  else if (upper_half && half) regime = "upper-bounded splits (half-splitting zones apply)";
  else if (lower) regime = "lower-bounded splits (chain construction applies)";
  else regime = "unclassified at this scale";
  rb.artifacts["classification"] = regime;
}

}  // namespace

CliResult run_cli_mode(const std::string& mode, const std::string& config_text,
                       const std::map<std::string, std::string>& overrides) {
  ojson report;
  report["schema"] = kReportSchema;
  report["mode"] = mode;
  auto finish = [&](int code, ReportBuilder* rb, const std::string& error) {
    if (rb) {
      report["assertions"] = rb->assertions;
      report["artifacts"] = rb->artifacts;
      report["summary"] =
          ojson{{"assertions", rb->assertions.size()}, {"failures", rb->failures}};
    }
    if (!error.empty()) report["error"] = error;
    std::string out_path;
    if (report.contains("inputs") && report["inputs"].contains("out") &&
        report["inputs"]["out"].is_string())
      out_path = report["inputs"]["out"].get<std::string>();
    std::string text = report.dump(2) + "\n";
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << text;
    }
    return CliResult{code, text};
  };

  ojson cfg;
  try {
    cfg = ojson::parse(config_text);
  } catch (const std::exception& e) {
    return finish(2, nullptr, std::string("config parse: ") + e.what());
  }
  try {
    for (const auto& [k, v] : overrides) {
      if (k == "horizon" || k == "seed")
        cfg[k] = std::stoll(v);
      else if (k == "oracle")
        cfg[k] = (v == "1" || v == "true");
      else
        cfg[k] = v;
    }
    report["inputs"] = cfg;
    if (!cfg.contains("schema") || cfg["schema"].get<std::string>() != kConfigSchema)
      fail(Errc::config_error, std::string("config schema must be ") + kConfigSchema);

    ReportBuilder rb;
    if (mode == "simulate")
      run_simulate(cfg, rb);
    else if (mode == "verify")
      run_verify(cfg, rb);
    else if (mode == "ml-test")
      run_ml_test(cfg, rb);
    else if (mode == "lower-bound")
      run_lower_bound_mode(cfg, rb);
    else if (mode == "profile")
      run_profile(cfg, rb);
    else
      fail(Errc::config_error, "unknown mode '" + mode + "'");
    return finish(rb.failures == 0 ? 0 : 1, &rb, "");
  } catch (const Error& e) {
    return finish(2, nullptr, e.what());
  } catch (const std::exception& e) {
    return finish(2, nullptr, std::string("unexpected: ") + e.what());
  }
}

}  // namespace klgame
