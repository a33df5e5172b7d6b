#include "klgame/basic_game.hpp"

#include <algorithm>
#include <sstream>

namespace klgame {

namespace {

struct MergedEvent {
  int time;
  char side;
  Coordinate coord;
};

std::vector<MergedEvent> merge_events(const BettingStrategy& a, const BettingStrategy& b,
                                      int horizon) {
  std::vector<MergedEvent> out;
  for (const auto& e : a.events())
    if (e.time <= horizon) out.push_back({e.time, 'A', e.coord});
  for (const auto& e : b.events())
    if (e.time <= horizon) out.push_back({e.time, 'B', e.coord});
  std::stable_sort(out.begin(), out.end(), [](const MergedEvent& x, const MergedEvent& y) {
    return x.time != y.time ? x.time < y.time : x.side < y.side;
  });
  return out;
}

// {tail r' : [head^r'] inside v}, in the tail space.
CylinderSet container_region(const CylinderSet& v, const Restriction& head,
                             std::uint64_t tail_space) {
  return v.complement().exists_proj(tail_space, head).complement();
}

// Splits-on count of the chain above the terminal part at coordinate x.
long long splits_on_tail(const BettingStrategy& s, const Coordinate& x, const Restriction& tail) {
  long long n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Coordinate y = x.substr(0, i);
    if (s.part(y + "0").intersects(tail) && s.part(y + "1").intersects(tail)) ++n;
  }
  return n;
}

struct GoodPart {
  Coordinate coord;
  CylinderSet heads;
};

// Terminal parts at t meeting [tail] that are good for the given params,
// with their head sets.
std::vector<GoodPart> good_parts(const BettingStrategy& s, std::uint64_t I_mask,
                                 const Restriction& tail, int t, const GoodnessParams& params) {
  std::vector<GoodPart> out;
  for (const auto& coord : s.terminal_coords_at(t)) {
    const CylinderSet& v = s.part(coord);
    if (!v.intersects(tail)) continue;
    if (splits_on_tail(s, coord, tail) >= params.N) continue;
    if (s.max_capital_ratio(coord).compare(params.threshold) >= 0) continue;
    CylinderSet heads = heads_inside(v, tail, I_mask);
    if (heads.count() <= static_cast<std::uint64_t>(params.phi)) continue;
    out.push_back({coord, std::move(heads)});
  }
  return out;
}

}  // namespace

std::optional<Restriction> least_good_head(const BettingStrategy& a, const BettingStrategy& b,
                                           std::uint64_t I_mask, const Restriction& tail, int t,
                                           const GoodnessParams& params) {
  auto ga = good_parts(a, I_mask, tail, t, params);
  auto gb = good_parts(b, I_mask, tail, t, params);
  std::optional<Restriction> best;
  for (const auto& pa : ga) {
    for (const auto& pb : gb) {
      CylinderSet common = pa.heads.intersect(pb.heads);
      if (common.empty()) continue;
      Restriction cand = common.lex_least_element();
      if (!best || value_lex_less(cand, *best)) best = cand;
    }
  }
  return best;
}

Dyadic GameTrace::lambda_chosen(const ChoiceIndex& m) const {
  const auto& rec = records.at(m);
  return Dyadic::pow2(-(std::popcount(I_mask) + rec.tail.arity()));
}

GameTrace run_basic_game(const BettingStrategy& a, const BettingStrategy& b, std::uint64_t I_mask,
                         const Restriction& z, const GoodnessParams& params, int horizon) {
  if (a.universe() != b.universe()) fail(Errc::universe_mismatch, "strategies on different universes");
  if (z.dom & I_mask) fail(Errc::zone_overlaps_z, "z restricts positions of I");
  const std::uint64_t tail_space = a.universe().mask() & ~I_mask;
  if (z.dom & ~a.universe().mask()) fail(Errc::param_violation, "z outside the universe");

  GameTrace trace;
  trace.universe = a.universe();
  trace.I_mask = I_mask;
  trace.z = z;
  trace.params = params;
  trace.horizon = horizon;

  ChoiceRecord root;
  root.index = {};
  root.head = Restriction(I_mask, 0);
  root.tail = z;
  root.time_chosen = 0;
  trace.records[{}] = root;

  struct State {
    CylinderSet fresh;
    long long viable_total = 0;
  };
  std::map<ChoiceIndex, State> state;
  state[{}] = {CylinderSet::of_cylinder(tail_space, z), 0};

  std::uint64_t inspected = 0;
  for (const auto& ev : merge_events(a, b, horizon)) {
    const BettingStrategy& s = ev.side == 'A' ? a : b;
    const CylinderSet& v = s.part(ev.coord);
    const CylinderSet& v0 = s.part(ev.coord + "0");
    const CylinderSet& v1 = s.part(ev.coord + "1");
    inspected |= (v0.essential_support() | v1.essential_support()) & a.universe().mask();
    const std::uint64_t granular_positions = inspected & ~I_mask;

    // Tails on which the split separates [r'].
    CylinderSet split_on =
        v0.exists_proj(tail_space).intersect(v1.exists_proj(tail_space));

    std::vector<ChoiceIndex> keys;
    keys.reserve(trace.records.size());
    for (const auto& [idx, rec] : trace.records)
      if (rec.time_chosen < ev.time) keys.push_back(idx);

    for (const auto& idx : keys) {
      ChoiceRecord& rec = trace.records[idx];
      State& st = state[idx];
      if (st.fresh.empty()) continue;
      CylinderSet cand = st.fresh.intersect(container_region(v, rec.head, tail_space));
      if (cand.empty()) continue;

      CylinderSet stale_split = cand.intersect(split_on);
      CylinderSet rest = cand.subtract(split_on);
      CylinderSet stale_eval0(tail_space), stale_eval1(tail_space);
      // Evaluation staleness is a transition: the part's evaluation was still
      // at most the threshold before this event.
      if (!rest.empty() && s.max_capital_ratio(ev.coord).compare(params.threshold) <= 0) {
        if (s.max_capital_ratio(ev.coord + "0").compare(params.threshold) > 0)
          stale_eval0 = rest.intersect(container_region(v0, rec.head, tail_space));
        if (s.max_capital_ratio(ev.coord + "1").compare(params.threshold) > 0)
          stale_eval1 = rest.intersect(container_region(v1, rec.head, tail_space));
      }
      CylinderSet stale = stale_split.unite(stale_eval0).unite(stale_eval1);
      if (stale.empty()) continue;
      st.fresh = st.fresh.subtract(stale);

      // Failed restrictions exist in the trace only once the common granular
      // set reaches the record's tail.
      if (rec.tail.dom & ~granular_positions) continue;

      FailBatch batch;
      batch.time = ev.time;
      struct Cand {
        Restriction tail;
        StaleCause cause;
      };
      std::vector<Cand> cands;
      for (const auto& r : stale_split.enumerate_over(granular_positions))
        cands.push_back({r, StaleCause::part_split});
      for (const auto& r : stale_eval0.unite(stale_eval1).enumerate_over(granular_positions))
        cands.push_back({r, StaleCause::eval_exceeds});
      std::sort(cands.begin(), cands.end(),
                [](const Cand& x, const Cand& y) { return value_lex_less(x.tail, y.tail); });

      long long n_viable = 0;
      for (const auto& c : cands) {
        auto head = least_good_head(a, b, I_mask, c.tail, ev.time, params);
        FailEntry entry{c.tail, head.has_value(), c.cause, ev.side};
        batch.entries.push_back(entry);
        if (head) {
          ++n_viable;
          ChoiceIndex child = idx;
          child.push_back(static_cast<int>(st.viable_total + n_viable));
          ChoiceRecord crec;
          crec.index = child;
          crec.head = *head;
          crec.tail = c.tail;
          crec.time_chosen = ev.time;
          trace.records[child] = crec;
          state[child] = {CylinderSet::of_cylinder(tail_space, c.tail), 0};
        }
      }
      st.viable_total += n_viable;
      rec.failures.push_back(std::move(batch));
    }
  }
  return trace;
}

ChosenMeasure chosen_measure(const GameTrace& trace, bool half_splitting) {
  ChosenMeasure out;
  int bits = std::popcount(trace.I_mask);
  std::map<std::size_t, Dyadic> slices;
  for (const auto& [idx, rec] : trace.records) {
    Dyadic l = trace.lambda_chosen(idx);
    out.sum += l;
    slices[idx.size()] += l;
  }
  Dyadic lambda_z = Dyadic::pow2(-trace.z.arity());
  QBound q = length_bound_fraction(bits, trace.params, half_splitting);
  out.bound_num = Dyadic::scaled(q.num, -bits) * lambda_z;
  out.bound_den = q.den;
  out.within_bound = out.sum * Dyadic::scaled(out.bound_den, 0) < out.bound_num;
  out.slice_bound = Dyadic::pow2(-bits) * lambda_z;
  out.slices_ok = true;
  for (const auto& [len, m] : slices) {
    if (m > out.max_slice) out.max_slice = m;
    if (m > out.slice_bound) out.slices_ok = false;
  }
  return out;
}

LowCapReport low_capital_fraction(const GameTrace& trace, const BettingStrategy& a,
                                  const BettingStrategy& b, const Dyadic& threshold, long long h,
                                  bool half_splitting) {
  const auto& params = trace.params;
  int bits = std::popcount(trace.I_mask);
  // Requires N <= |I| - log2(phi) - h, checked exactly: phi * 2^(N+h) <= 2^|I|.
  if (h < 0 || BigInt(params.phi) * pow2i(params.N + h) > pow2i(bits))
    fail(Errc::param_violation, "h too large for N and phi");

  LowCapReport out;
  int t = trace.horizon;
  std::uint64_t space = a.universe().mask();
  CylinderSet low = CylinderSet::of(space, low_capital_pieces(a, threshold, t))
                        .intersect(CylinderSet::of(space, low_capital_pieces(b, threshold, t)));
  Dyadic lambda_z = Dyadic::pow2(-trace.z.arity());
  out.theta = low.intersect_cylinder(trace.z).measure().div_exact(lambda_z);
  CylinderSet viol = CylinderSet::of(space, violation_pieces(a, trace.I_mask, params.N, t))
                         .unite(CylinderSet::of(space, violation_pieces(b, trace.I_mask, params.N, t)));
  out.eps = viol.intersect_cylinder(trace.z).measure().div_exact(lambda_z);
  out.gap_num = out.theta - out.eps - Dyadic::pow2(-h);
  QBound q = length_bound_fraction(bits, params, half_splitting);
  out.q_num = q.num;
  out.q_den = q.den;
  out.applicable = out.gap_num.sign() > 0;

  for (const auto& [idx, rec] : trace.records) {
    Restriction chosen = rec.head.concat(rec.tail);
    Dyadic frac = low.intersect_cylinder(chosen).measure().div_exact(Dyadic::pow2(-chosen.arity()));
    out.fractions[idx] = frac;
    if (frac > out.max_fraction) out.max_fraction = frac;
  }
  // max >= (theta - eps - 2^-h) / Q, cross-multiplied.
  out.ok = !out.applicable ||
           out.max_fraction * Dyadic::scaled(out.q_num, 0) >= out.gap_num * Dyadic::scaled(out.q_den, 0);
  return out;
}

TraceCheck verify_trace_structure(const GameTrace& trace, const BettingStrategy& a,
                                  const BettingStrategy& b, bool half_splitting) {
  TraceCheck check;
  auto complain = [&](const std::string& msg) { check.violations.push_back(msg); };
  BigInt depth_bound = length_bound(std::popcount(trace.I_mask), trace.params, half_splitting);

  for (const auto& [idx, rec] : trace.records) {
    if (BigInt(static_cast<long long>(idx.size())) >= depth_bound)
      complain("index depth not below the length bound at " + index_str(idx));
    if (!idx.empty()) {
      ChoiceIndex parent(idx.begin(), idx.end() - 1);
      auto pit = trace.records.find(parent);
      if (pit == trace.records.end()) {
        complain("missing parent record of " + index_str(idx));
      } else if (!rec.tail.extends(pit->second.tail)) {
        complain("tail does not extend the parent tail at " + index_str(idx));
      }
      auto head = least_good_head(a, b, trace.I_mask, rec.tail, rec.time_chosen, trace.params);
      if (!head)
        complain("no good head exists at the choice time of " + index_str(idx));
      else if (*head != rec.head)
        complain("head is not the least good head at " + index_str(idx));
    } else {
      // The first record is defined unconditionally with the all-zeros head;
      // when a good head exists at time 0 it must be that head.
      auto head = least_good_head(a, b, trace.I_mask, rec.tail, rec.time_chosen, trace.params);
      if (head && *head != rec.head) complain("first head is not the least good head");
    }
    // Failure tails across times are mutually inconsistent.
    std::vector<Restriction> fails;
    for (const auto& batch : rec.failures)
      for (const auto& e : batch.entries) fails.push_back(e.tail);
    for (std::size_t i = 0; i < fails.size(); ++i)
      for (std::size_t j = i + 1; j < fails.size(); ++j)
        if (fails[i].consistent(fails[j]))
          complain("consistent failure tails under " + index_str(idx));
  }
  // Sibling tails are mutually inconsistent.
  for (const auto& [idx, rec] : trace.records) {
    for (const auto& [idx2, rec2] : trace.records) {
      if (idx.size() != idx2.size() || idx.empty() || idx >= idx2) continue;
      if (!std::equal(idx.begin(), idx.end() - 1, idx2.begin())) continue;
      if (rec.tail.consistent(rec2.tail))
        complain("sibling tails consistent: " + index_str(idx) + " and " + index_str(idx2));
    }
  }
  return check;
}

std::string index_str(const ChoiceIndex& m) {
  if (m.empty()) return "_";
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(m[i]);
  }
  return out;
}

std::string export_trace(const GameTrace& trace) {
  std::ostringstream out;
  out << "trace 1\n";
  out << "universe " << trace.universe.length << "\n";
  out << "I";
  for (int p : mask_positions(trace.I_mask)) out << " " << p;
  out << "\n";
  out << "z " << trace.z.str() << "\n";
  out << "params N " << trace.params.N << " phi " << trace.params.phi << " threshold "
      << trace.params.threshold.str() << "\n";
  out << "horizon " << trace.horizon << "\n";
  for (const auto& [idx, rec] : trace.records) {
    out << "record " << index_str(idx) << " head " << rec.head.str() << " tail " << rec.tail.str()
        << " t " << rec.time_chosen << " lambda " << trace.lambda_chosen(idx).str() << "\n";
    for (const auto& batch : rec.failures) {
      for (const auto& e : batch.entries) {
        out << "fail " << index_str(idx) << " t " << batch.time << " "
            << (e.viable ? "viable" : "choiceless") << " " << e.tail.str() << " cause "
            << (e.cause == StaleCause::part_split ? "split" : "eval") << " side " << e.side
            << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace klgame
