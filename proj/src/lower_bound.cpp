#include "klgame/lower_bound.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace klgame {

namespace {

void terminals_below(const BettingStrategy& s, const Coordinate& from, int t,
                     std::vector<Coordinate>& out) {
  if (s.is_terminal_at(from, t)) {
    out.push_back(from);
    return;
  }
  terminals_below(s, from + "0", t, out);
  terminals_below(s, from + "1", t, out);
}

struct SplitSteps {
  // Per position: times and cumulative measure of assignments both strategies
  // have split on that position by then.
  std::map<int, std::vector<std::pair<int, Dyadic>>> steps;

  Dyadic at(int p, int t) const {
    auto it = steps.find(p);
    if (it == steps.end()) return Dyadic(0);
    Dyadic out;
    for (const auto& [tc, m] : it->second) {
      if (tc > t) break;
      out = m;
    }
    return out;
  }
};

SplitSteps both_split_measures(const BettingStrategy& a, const BettingStrategy& b, int horizon) {
  struct Add {
    int time;
    char side;
    int position;
    Restriction cyl;
  };
  std::vector<Add> adds;
  auto collect = [&](const BettingStrategy& s, char side) {
    for (const auto& ev : s.events()) {
      if (ev.time > horizon) break;
      const Restriction& parent = s.part(ev.coord).cylinders()[0];
      const Restriction& child = s.part(ev.coord + "0").cylinders()[0];
      std::uint64_t fresh = child.dom & ~parent.dom;
      adds.push_back({ev.time, side, std::countr_zero(fresh), parent});
    }
  };
  collect(a, 'A');
  collect(b, 'B');
  std::stable_sort(adds.begin(), adds.end(),
                   [](const Add& x, const Add& y) { return x.time < y.time; });

  SplitSteps out;
  std::map<int, std::vector<Restriction>> seen_a, seen_b;
  std::map<int, Dyadic> both;
  for (const auto& add : adds) {
    auto& mine = add.side == 'A' ? seen_a[add.position] : seen_b[add.position];
    auto& theirs = add.side == 'A' ? seen_b[add.position] : seen_a[add.position];
    Dyadic delta;
    for (const auto& other : theirs)
      if (add.cyl.consistent(other))
        delta += Dyadic::pow2(-std::popcount(add.cyl.dom | other.dom));
    mine.push_back(add.cyl);
    if (delta.is_zero()) continue;
    both[add.position] += delta;
    out.steps[add.position].emplace_back(add.time, both[add.position]);
  }
  return out;
}

}  // namespace

LowerBoundTrace run_lower_bound(const StrategyProgram& prog_a, const StrategyProgram& prog_b,
                                Universe u, const std::vector<int>& pi, int n_steps, int horizon) {
  if (prog_a.initial_mass + prog_b.initial_mass != Dyadic(1))
    fail(Errc::normalization_error, "initial masses must sum to 1");
  BettingStrategy a = build_from_program(savings_transform(prog_a), u, horizon, 1, 2);
  BettingStrategy b = build_from_program(savings_transform(prog_b), u, horizon, 2, 2);
  if (!a.kl_parts() || !b.kl_parts())
    fail(Errc::invalid_program, "the lower bound construction needs KL strategies");
  positions_mask(pi);

  SplitSteps meas = both_split_measures(a, b, horizon);
  std::set<int> times;
  for (const auto& [p, vec] : meas.steps)
    for (const auto& [t, m] : vec) times.insert(t);

  LowerBoundTrace trace;
  trace.chain.push_back(Restriction{});
  std::vector<Coordinate> va = {""}, vb = {""};
  Dyadic q_prev = a.mass("") + b.mass("");
  Dyadic w_prev = Dyadic(1);
  std::uint64_t used = 0;
  int t_prev = 0;

  for (int n = 1; n <= n_steps; ++n) {
    Dyadic need = Dyadic(1) - Dyadic::pow2(-2 * n);
    std::optional<std::pair<int, int>> found;  // (position, time)
    std::vector<int> scan = {t_prev + 1};
    for (int t : times)
      if (t > t_prev + 1) scan.push_back(t);
    for (int t : scan) {
      if (t > horizon) break;
      for (int p : pi) {
        if (used & (1ull << p)) continue;
        if (meas.at(p, t) >= need) {
          found = {p, t};
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      std::ostringstream msg;
      msg << "no position reaches measure " << need.str() << " for step " << n
          << " within the horizon; profile:";
      for (int p : pi) msg << " p" << p << "=" << meas.at(p, horizon).str();
      fail(Errc::split_density_too_low, msg.str());
    }
    auto [p, t] = *found;
    used |= 1ull << p;

    struct SideChoice {
      std::vector<Coordinate> va, vb;
      Dyadic q;
    };
    SideChoice choice[2];
    for (int bit = 0; bit <= 1; ++bit) {
      Restriction zb = trace.chain.back().concat(Restriction::single(p, bit == 1));
      auto gather = [&](const BettingStrategy& s, const std::vector<Coordinate>& from,
                        std::vector<Coordinate>& into) {
        Dyadic mass;
        for (const auto& coord : from) {
          std::vector<Coordinate> terms;
          terminals_below(s, coord, t, terms);
          for (const auto& c : terms) {
            if (s.part(c).cylinders()[0].extends(zb)) {
              into.push_back(c);
              mass += s.mass(c);
            }
          }
        }
        return mass;
      };
      choice[bit].q = gather(a, va, choice[bit].va) + gather(b, vb, choice[bit].vb);
    }
    int bit = choice[0].q <= choice[1].q ? 0 : 1;

    LowerBoundStep step;
    step.n = n;
    step.position = p;
    step.time = t;
    step.split_measure = meas.at(p, t);
    step.bit = bit == 1;
    step.q = choice[bit].q;
    trace.chain.push_back(trace.chain.back().concat(Restriction::single(p, bit == 1)));
    va = std::move(choice[bit].va);
    vb = std::move(choice[bit].vb);

    // lambda(W^n): paired intersections of surviving parts.
    std::set<Coordinate> vb_set(vb.begin(), vb.end());
    Dyadic w;
    for (const auto& ca : va) {
      const Restriction& cyl_a = a.part(ca).cylinders()[0];
      std::vector<Coordinate> stack = {""};
      while (!stack.empty()) {
        Coordinate y = stack.back();
        stack.pop_back();
        if (!b.part(y).cylinders()[0].consistent(cyl_a)) continue;
        if (b.is_terminal_at(y, t)) {
          if (vb_set.count(y))
            w += Dyadic::pow2(-std::popcount(cyl_a.dom | b.part(y).cylinders()[0].dom));
          continue;
        }
        stack.push_back(y + "0");
        stack.push_back(y + "1");
      }
    }
    step.w_measure = w;

    Dyadic lambda_zn = Dyadic::pow2(-n);
    step.q_halves = step.q.mul_pow2(1) <= q_prev;
    step.q_bound = step.q <= lambda_zn * (a.mass("") + b.mass(""));
    step.w_bound = w.mul_pow2(1) >= (Dyadic(1) + lambda_zn) * lambda_zn;
    step.w_recursion = w.mul_pow2(1) >= w_prev - Dyadic::pow2(-2 * n);
    trace.steps.push_back(step);
    q_prev = step.q;
    w_prev = w;
    t_prev = t;
  }

  // Witness at the horizon: the surviving parts' unions are unchanged under
  // further splits, so the mass argument holds among their descendants.
  trace.gap_a = a.mass("").mul_pow2(1);
  trace.gap_b = b.mass("").mul_pow2(1);
  std::vector<Coordinate> fa, fb;
  for (const auto& c : va) terminals_below(a, c, horizon, fa);
  for (const auto& c : vb) terminals_below(b, c, horizon, fb);
  std::set<Coordinate> fb_set(fb.begin(), fb.end());
  std::optional<Dyadic> best_sum;
  Restriction best_a, best_b;
  for (const auto& ca : fa) {
    const Restriction& cyl_a = a.part(ca).cylinders()[0];
    Dyadic cap_a = a.capital(ca);
    std::vector<Coordinate> stack = {""};
    while (!stack.empty()) {
      Coordinate y = stack.back();
      stack.pop_back();
      if (!b.part(y).cylinders()[0].consistent(cyl_a)) continue;
      if (b.is_terminal_at(y, horizon)) {
        if (!fb_set.count(y)) continue;
        Dyadic sum = cap_a + b.capital(y);
        if (!best_sum || sum < *best_sum) {
          best_sum = sum;
          best_a = cyl_a;
          best_b = b.part(y).cylinders()[0];
        }
        continue;
      }
      stack.push_back(y + "0");
      stack.push_back(y + "1");
    }
  }
  if (!best_sum) fail(Errc::split_density_too_low, "no surviving part pair at the horizon");
  trace.witness = Restriction(u.mask(), best_a.merge(best_b).val);
  trace.witness_capital_a = a.achieved_capital(trace.witness, horizon);
  trace.witness_capital_b = b.achieved_capital(trace.witness, horizon);
  trace.witness_ok = trace.witness_capital_a <= Dyadic(2) + trace.gap_a &&
                     trace.witness_capital_b <= Dyadic(2) + trace.gap_b;
  return trace;
}

std::string export_lower_bound(const LowerBoundTrace& trace) {
  std::ostringstream out;
  out << "lower_bound 1\n";
  for (const auto& s : trace.steps) {
    out << "step " << s.n << " position " << s.position << " time " << s.time << " split_measure "
        << s.split_measure.str() << " bit " << (s.bit ? 1 : 0) << " q " << s.q.str() << " w "
        << s.w_measure.str() << " q_halves " << s.q_halves << " q_bound " << s.q_bound
        << " w_bound " << s.w_bound << " w_recursion " << s.w_recursion << "\n";
  }
  out << "chain";
  for (const auto& z : trace.chain) out << " " << z.str();
  out << "\n";
  std::string bits;
  for (int p = 0; p < 62; ++p)
    if (trace.witness.restricts(p)) bits += trace.witness.bit(p) ? '1' : '0';
  out << "witness " << bits << "\n";
  out << "witness_capital_a " << trace.witness_capital_a.str() << " gap_a " << trace.gap_a.str()
      << "\n";
  out << "witness_capital_b " << trace.witness_capital_b.str() << " gap_b " << trace.gap_b.str()
      << "\n";
  out << "witness_ok " << trace.witness_ok << "\n";
  return out.str();
}

}  // namespace klgame
