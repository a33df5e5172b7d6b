#include "klgame/program.hpp"

#include <deque>
#include <functional>
#include <sstream>

namespace klgame {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::pair<Dyadic, Dyadic> wager_to_masses(const Dyadic& mu, const Dyadic& lambda_v,
                                          const Dyadic& lambda0, const Dyadic& lambda1,
                                          const Dyadic& w, bool side) {
  if (lambda0 + lambda1 != lambda_v) fail(Errc::size_mismatch, "child sizes do not sum to the part size");
  const Dyadic& lambda_side = side ? lambda1 : lambda0;
  if (lambda_side.sign() <= 0) fail(Errc::size_mismatch, "wagered side has size zero");
  if (w.sign() < 0 || w * lambda_v > mu) fail(Errc::wager_exceeds_capital, "wager above current capital");
  // mu_side = (c - w) * lambda_side + w * lambda_v, with c = mu / lambda_v.
  Dyadic mu_side = ((mu - w * lambda_v) * lambda_side).div_exact(lambda_v) + w * lambda_v;
  Dyadic mu_other = mu - mu_side;
  if (side) return {mu_other, mu_side};
  return {mu_side, mu_other};
}

StrategyProgram savings_transform(const StrategyProgram& program) {
  if (program.kind == ProgramKind::scripted)
    fail(Errc::invalid_program, "savings transform applies to wagering programs only");
  if (program.kind == ProgramKind::generator && program.gen.name == "scripted_random")
    fail(Errc::invalid_program, "savings transform applies to wagering programs only");
  StrategyProgram out = program;
  out.savings = true;
  return out;
}

namespace {

using Decision = std::function<std::optional<KlBet>(const Restriction&)>;

std::vector<int> parse_order(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::string param_or(const GeneratorSpec& g, const std::string& key, const std::string& def) {
  auto it = g.params.find(key);
  return it == g.params.end() ? def : it->second;
}

Decision order_bettor(std::vector<int> order, Dyadic wager, const std::string& guess,
                      long long depth, std::uint64_t seed, bool random_wagers, bool low_pool) {
  static const Dyadic pool[4] = {Dyadic(0), Dyadic::pow2(-2), Dyadic::pow2(-1),
                                 Dyadic(3) * Dyadic::pow2(-2)};
  return [=](const Restriction& observed) -> std::optional<KlBet> {
    long long k = observed.arity();
    if (k >= depth || k >= static_cast<long long>(order.size())) return std::nullopt;
    KlBet bet;
    bet.position = order[k];
    if (random_wagers) {
      std::uint64_t h = mix64(seed ^ mix64(observed.dom ^ mix64(observed.val)));
      bet.guess = h & 1;
      bet.wager_fraction = low_pool ? pool[(h >> 1) & 1] : pool[(h >> 1) & 3];
    } else {
      bet.guess = guess == "alt" ? (k % 2 == 1) : (guess == "1");
      bet.wager_fraction = wager;
    }
    return bet;
  };
}

Decision make_decision(const StrategyProgram& program, Universe u) {
  if (program.kind == ProgramKind::kl_table) {
    auto table = program.table;
    return [table](const Restriction& observed) -> std::optional<KlBet> {
      for (const auto& e : table)
        if (e.observed == observed) return e.bet;
      return std::nullopt;
    };
  }
  const GeneratorSpec& g = program.gen;
  long long depth = std::stoll(param_or(g, "depth", "1000000"));
  Dyadic wager = Dyadic::parse(param_or(g, "wager", "0*2^0"));
  std::string guess = param_or(g, "guess", "0");
  if (g.name == "idle") {
    return [](const Restriction&) { return std::nullopt; };
  }
  if (g.name == "sequential" || g.name == "sequential_random") {
    std::vector<int> order;
    if (g.params.count("order"))
      order = parse_order(g.params.at("order"));
    else
      for (int p = 0; p < u.length; ++p) order.push_back(p);
    bool low_pool = param_or(g, "wager_pool", "default") == "low";
    return order_bettor(order, wager, guess, depth, g.seed, g.name == "sequential_random",
                        low_pool);
  }
  if (g.name == "skip") {
    int stride = std::stoi(param_or(g, "stride", "2"));
    int offset = std::stoi(param_or(g, "offset", "0"));
    if (stride < 1) fail(Errc::invalid_program, "skip stride must be positive");
    std::vector<int> order;
    for (int p = offset; p < u.length; p += stride) order.push_back(p);
    return order_bettor(order, wager, guess, depth, g.seed, false, false);
  }
  if (g.name == "random_kl") {
    std::uint64_t seed = g.seed;
    int L = u.length;
    return [seed, depth, L](const Restriction& observed) -> std::optional<KlBet> {
      static const Dyadic pool[4] = {Dyadic(0), Dyadic::pow2(-2), Dyadic::pow2(-1),
                                     Dyadic(3) * Dyadic::pow2(-2)};
      if (observed.arity() >= depth || observed.arity() >= L) return std::nullopt;
      std::uint64_t h = mix64(seed ^ mix64(observed.dom ^ mix64(observed.val * 3 + 1)));
      if ((h & 7) == 0) return std::nullopt;  // occasional HALT branch
      std::vector<int> unbet;
      for (int p = 0; p < L; ++p)
        if (!observed.restricts(p)) unbet.push_back(p);
      KlBet bet;
      bet.position = unbet[(h >> 3) % unbet.size()];
      bet.guess = (h >> 9) & 1;
      bet.wager_fraction = pool[(h >> 10) & 3];
      return bet;
    };
  }
  fail(Errc::invalid_program, "unknown generator '" + g.name + "'");
}

// Random general (usually non-half-splitting) refinement, expanded to a
// script over enumerated elements. Kept to small universes.
std::vector<ScriptedSplit> expand_scripted_random(const GeneratorSpec& g, Universe u,
                                                  const Dyadic& initial_mass) {
  if (u.length > 12) fail(Errc::invalid_program, "scripted_random needs universe length <= 12");
  int n_splits = std::stoi(param_or(g, "splits", "6"));
  std::uint64_t h = mix64(g.seed + 0x5851f42d4c957f2dull);

  struct Node {
    Coordinate coord;
    std::vector<std::uint64_t> elements;
    Dyadic mass;
  };
  std::vector<std::uint64_t> all;
  for (std::uint64_t e = 0; e < (1ull << u.length); ++e) all.push_back(e);
  std::vector<Node> terminals = {{"", all, initial_mass}};
  std::vector<ScriptedSplit> script;

  for (int i = 0; i < n_splits; ++i) {
    std::vector<std::size_t> eligible;
    for (std::size_t j = 0; j < terminals.size(); ++j)
      if (terminals[j].elements.size() >= 2) eligible.push_back(j);
    if (eligible.empty()) break;
    h = mix64(h);
    std::size_t picked = eligible[h % eligible.size()];
    Node n = terminals[picked];

    std::vector<std::uint64_t> left, right;
    while (true) {
      left.clear();
      right.clear();
      h = mix64(h);
      std::uint64_t bits = h;
      for (std::size_t j = 0; j < n.elements.size(); ++j) {
        if (j > 0 && j % 64 == 0) {
          h = mix64(h);
          bits = h;
        }
        ((bits >> (j % 64)) & 1 ? left : right).push_back(n.elements[j]);
      }
      if (!left.empty() && !right.empty()) break;
    }
    h = mix64(h);
    int k = 1 + static_cast<int>(h % 7);
    Dyadic m0 = n.mass * Dyadic(k) * Dyadic::pow2(-3);
    Dyadic m1 = n.mass - m0;

    auto to_cyls = [&](const std::vector<std::uint64_t>& elems) {
      std::vector<Restriction> out;
      for (auto e : elems) out.push_back(Restriction(u.mask(), e));
      return out;
    };
    script.push_back({n.coord, to_cyls(left), to_cyls(right), m0, m1});
    terminals.erase(terminals.begin() + static_cast<long>(picked));
    terminals.push_back({n.coord + "0", left, m0});
    terminals.push_back({n.coord + "1", right, m1});
  }
  return script;
}

}  // namespace

BettingStrategy build_from_program(const StrategyProgram& program, Universe u, int horizon,
                                   int clock_start, int clock_stride) {
  if (program.initial_mass.sign() <= 0) fail(Errc::invalid_program, "initial mass must be positive");
  if (clock_start < 1 || clock_stride < 1) fail(Errc::param_violation, "bad clock schedule");

  bool scripted = program.kind == ProgramKind::scripted ||
                  (program.kind == ProgramKind::generator && program.gen.name == "scripted_random");
  if (scripted) {
    const std::vector<ScriptedSplit>* script = &program.script;
    std::vector<ScriptedSplit> expanded;
    if (program.kind == ProgramKind::generator) {
      expanded = expand_scripted_random(program.gen, u, program.initial_mass);
      script = &expanded;
    }
    BettingStrategy s(u, program.initial_mass);
    int t = clock_start;
    for (const auto& sp : *script) {
      if (t > horizon) break;
      s.split_part(sp.coord, CylinderSet::of(u.mask(), sp.set0), CylinderSet::of(u.mask(), sp.set1),
                   sp.mass0, sp.mass1, t);
      t += clock_stride;
    }
    return s;
  }

  Decision decide = make_decision(program, u);
  BettingStrategy s(u, program.initial_mass);
  const Dyadic unit = program.initial_mass;  // = initial capital, lambda(root) is 1

  struct Branch {
    Coordinate coord;
    Restriction observed;
    Dyadic saved, active;
  };
  std::deque<Branch> queue;
  queue.push_back({"", Restriction{}, Dyadic(0), unit});
  if (program.savings) s.set_savings_state("", Dyadic(0), unit);

  int t = clock_start;
  while (!queue.empty()) {
    if (t > horizon) break;
    Branch b = queue.front();
    queue.pop_front();
    auto bet = decide(b.observed);
    if (!bet) continue;
    if (bet->position < 0 || bet->position >= u.length)
      fail(Errc::invalid_program, "bet position outside the universe");
    if (b.observed.restricts(bet->position))
      fail(Errc::invalid_program, "position re-bet on one branch: " + std::to_string(bet->position));
    if (bet->wager_fraction.sign() < 0 || bet->wager_fraction > Dyadic(1))
      fail(Errc::invalid_program, "wager fraction outside [0,1]");

    const Restriction& cyl = s.part(b.coord).cylinders()[0];
    Restriction obs0 = b.observed.concat(Restriction::single(bet->position, false));
    Restriction obs1 = b.observed.concat(Restriction::single(bet->position, true));
    Dyadic m0, m1, saved0, saved1, active0, active1;
    if (!program.savings) {
      const Dyadic& mu = s.mass(b.coord);
      Dyadic mu_win = (mu + bet->wager_fraction * mu).mul_pow2(-1);
      Dyadic mu_lose = (mu - bet->wager_fraction * mu).mul_pow2(-1);
      m0 = bet->guess ? mu_lose : mu_win;
      m1 = bet->guess ? mu_win : mu_lose;
    } else {
      Dyadic w = bet->wager_fraction * b.active;
      auto settle = [&](bool won, Dyadic& saved, Dyadic& active) {
        saved = b.saved;
        active = won ? b.active + w : b.active - w;
        if (active >= unit.mul_pow2(1)) {
          saved += active - unit;
          active = unit;
        }
      };
      settle(!bet->guess, saved0, active0);
      settle(bet->guess, saved1, active1);
      long depth = static_cast<long>(b.coord.size()) + 1;
      m0 = (saved0 + active0).mul_pow2(-depth);
      m1 = (saved1 + active1).mul_pow2(-depth);
    }
    s.split_part(b.coord, CylinderSet::of_cylinder(u.mask(), cyl.concat(Restriction::single(bet->position, false))),
                 CylinderSet::of_cylinder(u.mask(), cyl.concat(Restriction::single(bet->position, true))),
                 m0, m1, t);
    if (program.savings) {
      s.set_savings_state(b.coord + "0", saved0, active0);
      s.set_savings_state(b.coord + "1", saved1, active1);
    }
    queue.push_back({b.coord + "0", obs0, saved0, active0});
    queue.push_back({b.coord + "1", obs1, saved1, active1});
    t += clock_stride;
  }
  return s;
}

namespace {

std::string coord_str(const Coordinate& c) { return c.empty() ? "@" : c; }
Coordinate parse_coord(const std::string& s) {
  if (s == "@") return "";
  for (char ch : s)
    if (ch != '0' && ch != '1') fail(Errc::config_error, "bad coordinate: " + s);
  return s;
}

std::string set_str(const std::vector<Restriction>& cyls) {
  std::string out;
  for (const auto& c : cyls) {
    if (!out.empty()) out += '|';
    out += c.str();
  }
  return out.empty() ? "<none>" : out;
}

std::vector<Restriction> parse_set(const std::string& text) {
  std::vector<Restriction> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t bar = text.find('|', i);
    if (bar == std::string::npos) bar = text.size();
    out.push_back(Restriction::parse(text.substr(i, bar - i)));
    i = bar + 1;
    if (bar == text.size()) break;
  }
  return out;
}

}  // namespace

std::string emit_program(const StrategyProgram& p) {
  std::ostringstream out;
  out << "klprog 1\n";
  out << "kind "
      << (p.kind == ProgramKind::kl_table ? "kl_table"
                                          : p.kind == ProgramKind::scripted ? "scripted" : "generator")
      << "\n";
  out << "mass " << p.initial_mass.str() << "\n";
  out << "savings " << (p.savings ? 1 : 0) << "\n";
  if (p.kind == ProgramKind::kl_table) {
    for (const auto& e : p.table)
      out << "entry " << e.observed.str() << " " << e.bet.position << " " << (e.bet.guess ? 1 : 0)
          << " " << e.bet.wager_fraction.str() << "\n";
  } else if (p.kind == ProgramKind::scripted) {
    for (const auto& sp : p.script)
      out << "split " << coord_str(sp.coord) << " " << set_str(sp.set0) << " " << set_str(sp.set1)
          << " " << sp.mass0.str() << " " << sp.mass1.str() << "\n";
  } else {
    out << "gen " << p.gen.name << " " << p.gen.seed << "\n";
    for (const auto& [k, v] : p.gen.params) out << "param " << k << " " << v << "\n";
  }
  return out.str();
}

StrategyProgram parse_program(const std::string& text) {
  StrategyProgram p;
  std::istringstream in(text);
  std::string line;
  bool header = false, kind_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto need = [&](bool ok) {
      if (!ok) fail(Errc::config_error, "bad program line: " + line);
    };
    if (tag == "klprog") {
      int version = 0;
      need(static_cast<bool>(ls >> version) && version == 1);
      header = true;
    } else if (tag == "kind") {
      std::string k;
      need(static_cast<bool>(ls >> k));
      if (k == "kl_table")
        p.kind = ProgramKind::kl_table;
      else if (k == "scripted")
        p.kind = ProgramKind::scripted;
      else if (k == "generator")
        p.kind = ProgramKind::generator;
      else
        need(false);
      kind_seen = true;
    } else if (tag == "mass") {
      std::string v;
      need(static_cast<bool>(ls >> v));
      p.initial_mass = Dyadic::parse(v);
    } else if (tag == "savings") {
      int v = 0;
      need(static_cast<bool>(ls >> v) && (v == 0 || v == 1));
      p.savings = v == 1;
    } else if (tag == "entry") {
      std::string obs, wager;
      int pos = 0, guess = 0;
      need(static_cast<bool>(ls >> obs >> pos >> guess >> wager));
      p.table.push_back({Restriction::parse(obs), {pos, guess == 1, Dyadic::parse(wager)}});
    } else if (tag == "split") {
      std::string coord, s0, s1, m0, m1;
      need(static_cast<bool>(ls >> coord >> s0 >> s1 >> m0 >> m1));
      p.script.push_back(
          {parse_coord(coord), parse_set(s0), parse_set(s1), Dyadic::parse(m0), Dyadic::parse(m1)});
    } else if (tag == "gen") {
      need(static_cast<bool>(ls >> p.gen.name >> p.gen.seed));
    } else if (tag == "param") {
      std::string k, v;
      need(static_cast<bool>(ls >> k >> v));
      p.gen.params[k] = v;
    } else {
      fail(Errc::config_error, "unknown program line: " + line);
    }
  }
  if (!header || !kind_seen) fail(Errc::config_error, "missing klprog header or kind");
  return p;
}

StrategyProgram make_generator(const std::string& name, std::uint64_t seed,
                               std::map<std::string, std::string> params) {
  StrategyProgram p;
  p.kind = ProgramKind::generator;
  p.gen.name = name;
  p.gen.seed = seed;
  p.gen.params = std::move(params);
  return p;
}

}  // namespace klgame
