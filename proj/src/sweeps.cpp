#include "klgame/sweeps.hpp"

#include <algorithm>
#include <sstream>

namespace klgame {

RuleStat& SweepResult::stat(const std::string& rule) {
  for (auto& s : stats)
    if (s.rule == rule) return s;
  stats.push_back({rule, 0, 0, ""});
  return stats.back();
}

const RuleStat* SweepResult::find(const std::string& rule) const {
  for (const auto& s : stats)
    if (s.rule == rule) return &s;
  return nullptr;
}

std::pair<BettingStrategy, BettingStrategy> build_pair(const StrategyProgram& a,
                                                       const StrategyProgram& b, Universe u,
                                                       int horizon) {
  return {build_from_program(a, u, horizon, 1, 2), build_from_program(b, u, horizon, 2, 2)};
}

namespace {

void tally(SweepResult& res, const std::string& rule, bool pass, const std::string& what) {
  RuleStat& s = res.stat(rule);
  ++s.runs;
  if (!pass) {
    ++s.failures;
    if (s.detail.empty()) s.detail = what;
  }
}

}  // namespace

SweepResult run_verify_sweep(const SweepConfig& config) {
  SweepResult res;
  Universe u(config.universe_length);
  std::vector<std::string> families;
  if (config.include_kl) families.push_back("kl");
  if (config.include_general) families.push_back("general");

  for (int ell : config.interval_sizes) {
    if (ell < 1 || ell >= config.universe_length)
      fail(Errc::param_violation, "interval size must be below the universe length");
    std::uint64_t I_mask = (1ull << ell) - 1;
    std::uint64_t tail_mask = u.mask() & ~I_mask;
    for (auto [phi, h] : config.phi_h) {
      long long log_phi = floor_log2(BigInt(phi));
      if ((1ll << log_phi) != phi || ell - log_phi - h < 0) continue;
      GoodnessParams params(ell - log_phi - h, phi);
      BigInt slim_bound = pow2i(ell - h);
      for (const std::string& family : families) {
        for (int seed_i = 0; seed_i < config.seeds; ++seed_i) {
          std::uint64_t seed = config.seed_base + 977u * static_cast<std::uint64_t>(seed_i);
          std::ostringstream tagbuf;
          tagbuf << "ell=" << ell << " phi=" << phi << " h=" << h << " family=" << family
                 << " seed=" << seed;
          std::string tag = tagbuf.str();

          StrategyProgram pa, pb;
          if (family == "kl") {
            pa = make_generator("random_kl", seed, {{"depth", std::to_string(u.length)}});
            pb = make_generator("random_kl", mix64(seed) | 1,
                                {{"depth", std::to_string(u.length)}});
          } else {
            pa = make_generator("scripted_random", seed, {{"splits", "7"}});
            pb = make_generator("scripted_random", mix64(seed) | 1, {{"splits", "7"}});
          }
          auto [a, b] = build_pair(pa, pb, u, config.horizon);

          tally(res, "mass-conservation",
                a.conservation_violations().empty() && b.conservation_violations().empty(), tag);

          bool half = is_half_splitting(a, I_mask, config.horizon) &&
                      is_half_splitting(b, I_mask, config.horizon);
          if (family == "kl")
            tally(res, "kl-half-splitting", half, tag);

          std::vector<int> event_times = {0};
          for (const auto& ev : a.events()) event_times.push_back(ev.time);
          for (const auto& ev : b.events()) event_times.push_back(ev.time);
          std::sort(event_times.begin(), event_times.end());

          BigInt bound_general = length_bound(ell, params, false);
          BigInt bound_half = length_bound(ell, params, true);

          for (const auto& rho : all_assignments(tail_mask)) {
            PartitionEvaluation proj_a = project(a, I_mask, rho, config.horizon);
            PartitionEvaluation proj_b = project(b, I_mask, rho, config.horizon);

            GreedySequence greedy = build_greedy_sequence(proj_a, proj_b, params);
            BigInt len(static_cast<long long>(greedy.elements.size()));
            tally(res, "nphi-sequence-length-bound", len < bound_general,
                  tag + " len=" + len.str());
            if (half)
              tally(res, "nphi-sequence-length-bound-half", len <= bound_half,
                    tag + " len=" + len.str());
            if (!greedy.elements.empty())
              tally(res, "nphi-sequence-valid",
                    is_nphi_sequence(greedy.elements, proj_a, proj_b, params), tag);

            for (int t : event_times) {
              long long bad = small_unsplit_bad_count(proj_a, proj_b, t, ell, phi, h);
              tally(res, "slim-bad-count-bound", BigInt(bad) < slim_bound,
                    tag + " t=" + std::to_string(t) + " bad=" + std::to_string(bad));
            }

            if (config.oracle) {
              OracleReport rep = oracle_check_projection(a, I_mask, rho, config.horizon, proj_a,
                                                         params);
              rep.merge(oracle_check_projection(b, I_mask, rho, config.horizon, proj_b, params));
              tally(res, "oracle-equivalence", rep.ok(),
                    tag + (rep.ok() ? "" : " " + rep.mismatches.front()));
            }
          }

          if (config.oracle) {
            OracleReport rep = oracle_check_strategy(a, config.horizon);
            rep.merge(oracle_check_strategy(b, config.horizon));
            tally(res, "oracle-equivalence", rep.ok(),
                  tag + (rep.ok() ? "" : " " + rep.mismatches.front()));
          }

          // Split-count caps over sampled assignments.
          {
            std::uint64_t code = seed;
            bool cap_ok = true, half_cap_ok = true;
            for (int k = 0; k < 32; ++k) {
              code = mix64(code);
              Restriction sigma(u.mask(), code & u.mask());
              long long n = split_count(sigma, I_mask, a, config.horizon);
              long long events_a = 0;
              for (const auto& ev : a.events())
                if (ev.time <= config.horizon) ++events_a;
              if (n > std::min<long long>(1ll << ell, events_a)) cap_ok = false;
              if (half && n > ell) half_cap_ok = false;
            }
            tally(res, "split-count-cap", cap_ok, tag);
            if (half) tally(res, "split-count-cap-half", half_cap_ok, tag);
          }

          if (!config.with_games) continue;

          std::vector<Restriction> zs = {Restriction{}};
          if (seed_i % 4 == 0 && config.universe_length >= ell + 2)
            zs.push_back(Restriction::single(ell, (seed_i / 4) % 2 == 1)
                             .concat(Restriction::single(ell + 1, seed_i % 8 >= 4)));
          for (const Restriction& z : zs) {
            GameTrace trace = run_basic_game(a, b, I_mask, z, params, config.horizon);
            ChosenMeasure cm = chosen_measure(trace, half);
            tally(res, "chosen-measure-bound", cm.within_bound, tag + " sum=" + cm.sum.str());
            tally(res, "chosen-slice-bound", cm.slices_ok, tag);
            LowCapReport lc = low_capital_fraction(trace, a, b, Dyadic(2), h, half);
            tally(res, "low-capital-survival", lc.ok, tag);
            TraceCheck tc = verify_trace_structure(trace, a, b, half);
            tally(res, "trace-structure", tc.ok(),
                  tag + (tc.ok() ? "" : " " + tc.violations.front()));

            // Records consistent with each full tail form an (N,phi)-sequence
            // for the projections on that tail.
            bool bridge_ok = true;
            for (const auto& rho : all_assignments(tail_mask)) {
              if (!rho.extends(z)) continue;
              std::vector<const ChoiceRecord*> chain;
              for (const auto& [idx, rec] : trace.records)
                if (rho.extends(rec.tail)) chain.push_back(&rec);
              std::sort(chain.begin(), chain.end(),
                        [](const ChoiceRecord* x, const ChoiceRecord* y) {
                          return x->index.size() < y->index.size();
                        });
              std::vector<Restriction> heads;
              for (const auto* rec : chain) heads.push_back(rec->head);
              if (heads.empty()) continue;
              PartitionEvaluation proj_a = project(a, I_mask, rho, config.horizon);
              PartitionEvaluation proj_b = project(b, I_mask, rho, config.horizon);
              // The first restriction is defined unconditionally; the chain is
              // an (N,phi)-sequence whenever its head is good at time 0.
              if (!is_good_pair(heads.front(), 0, proj_a, proj_b, params)) continue;
              if (!is_nphi_sequence(heads, proj_a, proj_b, params)) bridge_ok = false;
            }
            tally(res, "trace-nphi-bridge", bridge_ok, tag);
          }
        }
      }
    }
  }
  return res;
}

}  // namespace klgame
