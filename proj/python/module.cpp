#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klgame/cli.hpp"
#include "klgame/lower_bound.hpp"
#include "klgame/mltest.hpp"
#include "klgame/oracle.hpp"
#include "klgame/sweeps.hpp"

namespace py = pybind11;
using namespace klgame;

namespace {

Restriction restriction_from(const std::string& text) { return Restriction::parse(text); }

std::vector<int> positions_of(const Restriction& r) { return mask_positions(r.dom); }

}  // namespace

PYBIND11_MODULE(klgame, m) {
  m.doc() = "Exact-arithmetic betting-game simulator";

  py::register_exception<Error>(m, "KlgameError");

  py::class_<Dyadic>(m, "Dyadic")
      .def(py::init([](const std::string& s) { return Dyadic::parse(s); }))
      .def(py::init<long long>())
      .def_static("pow2", &Dyadic::pow2)
      .def("__str__", &Dyadic::str)
      .def("__repr__", [](const Dyadic& d) { return "Dyadic('" + d.str() + "')"; })
      .def("__add__", &Dyadic::operator+)
      .def("__sub__", static_cast<Dyadic (Dyadic::*)(const Dyadic&) const>(&Dyadic::operator-))
      .def("__mul__", &Dyadic::operator*)
      .def("__eq__", &Dyadic::operator==)
      .def("__lt__", &Dyadic::operator<)
      .def("__le__", &Dyadic::operator<=)
      .def("div_exact", &Dyadic::div_exact);

  py::class_<Restriction>(m, "Restriction")
      .def(py::init(&restriction_from))
      .def("__str__", &Restriction::str)
      .def("__eq__", &Restriction::operator==)
      .def("extends", &Restriction::extends)
      .def("consistent", &Restriction::consistent)
      .def("concat", &Restriction::concat)
      .def("arity", &Restriction::arity)
      .def("positions", &positions_of);

  py::class_<Universe>(m, "Universe").def(py::init<int>()).def_readonly("length", &Universe::length);

  py::class_<CylinderSet>(m, "CylinderSet")
      .def_static("full",
                  [](const Universe& u) { return CylinderSet::full(u.mask()); })
      .def_static("of",
                  [](const Universe& u, const std::vector<Restriction>& cyls) {
                    return CylinderSet::of(u.mask(), cyls);
                  })
      .def("measure", &CylinderSet::measure)
      .def("count", &CylinderSet::count)
      .def("count_consistent", &CylinderSet::count_consistent)
      .def("intersect", &CylinderSet::intersect)
      .def("unite", &CylinderSet::unite)
      .def("subtract", &CylinderSet::subtract)
      .def("complement", &CylinderSet::complement)
      .def("empty", &CylinderSet::empty)
      .def("__eq__", &CylinderSet::operator==)
      .def("__str__", &CylinderSet::str);

  py::class_<StrategyProgram>(m, "StrategyProgram")
      .def_static("parse", &parse_program)
      .def_static("generator",
                  [](const std::string& name, std::uint64_t seed,
                     const std::map<std::string, std::string>& params) {
                    return make_generator(name, seed, params);
                  },
                  py::arg("name"), py::arg("seed") = 0,
                  py::arg("params") = std::map<std::string, std::string>{})
      .def("emit", [](const StrategyProgram& p) { return emit_program(p); })
      .def("with_savings", &savings_transform)
      .def("__eq__", &StrategyProgram::operator==);

  py::class_<BettingStrategy>(m, "BettingStrategy")
      .def("capital", &BettingStrategy::capital)
      .def("max_capital", &BettingStrategy::max_capital)
      .def("achieved_capital", &BettingStrategy::achieved_capital)
      .def("mass", &BettingStrategy::mass)
      .def("part_measure", [](const BettingStrategy& s, const std::string& x) {
        return s.part(x).measure();
      })
      .def("terminal_coords_at", &BettingStrategy::terminal_coords_at)
      .def("is_terminal_at", &BettingStrategy::is_terminal_at)
      .def("conservation_violations", &BettingStrategy::conservation_violations)
      .def("kl_parts", &BettingStrategy::kl_parts)
      .def("last_event_time", &BettingStrategy::last_event_time);

  m.def("build_from_program", &build_from_program, py::arg("program"), py::arg("universe"),
        py::arg("horizon"), py::arg("clock_start") = 1, py::arg("clock_stride") = 1);
  m.def("build_pair", &build_pair);
  m.def("wager_to_masses", &wager_to_masses);
  m.def("is_half_splitting", [](const BettingStrategy& s, const std::vector<int>& I, int t) {
    return is_half_splitting(s, positions_mask(I), t);
  });
  m.def("split_count", [](const Restriction& sigma, const std::vector<int>& I,
                          const BettingStrategy& s, int t) {
    return split_count(sigma, positions_mask(I), s, t);
  });
  m.def("split_profile_measure",
        [](const BettingStrategy& s, const std::vector<int>& pi, int ell, int t, long long f,
           const std::string& mode) {
          return split_profile_measure(s, pi, ell, t, f,
                                       mode == "at_most" ? ProfileMode::at_most
                                                         : ProfileMode::at_least);
        });

  py::class_<PartitionEvaluation>(m, "PartitionEvaluation")
      .def("terminal_coords_at", &PartitionEvaluation::terminal_coords_at)
      .def("part_count", &PartitionEvaluation::part_count)
      .def("eval", [](const PartitionEvaluation& pe, int t, const std::string& x) {
        return pe.eval(t, x).num.str() + "/" + pe.eval(t, x).den.str();
      });
  m.def("project", [](const BettingStrategy& s, const std::vector<int>& I, const Restriction& rho,
                      int t_max) { return project(s, positions_mask(I), rho, t_max); });
  m.def("is_elementary", &is_elementary);
  m.def("is_granular", [](const Restriction& r, const std::vector<int>& I,
                          const BettingStrategy& s, int t) {
    return is_granular(r, positions_mask(I), s, t);
  });
  m.def("inspected_positions", [](const BettingStrategy& s, int t) {
    return mask_positions(inspected_positions(s, t));
  });

  py::class_<GoodnessParams>(m, "GoodnessParams")
      .def(py::init<long long, long long>())
      .def(py::init<long long, long long, Dyadic>())
      .def_readonly("N", &GoodnessParams::N)
      .def_readonly("phi", &GoodnessParams::phi);
  m.def("is_good", &is_good);
  m.def("stale_time",
        [](const Restriction& e, int after_t, const PartitionEvaluation& p, const Dyadic& thr) {
          return stale_time(e, after_t, p, thr);
        });
  m.def("length_bound", [](int ell, const GoodnessParams& params, bool half) {
    return length_bound(ell, params, half).str();
  });

  py::class_<GameTrace>(m, "GameTrace")
      .def("record_count", [](const GameTrace& t) { return t.records.size(); })
      .def("export_text", [](const GameTrace& t) { return export_trace(t); });
  m.def("run_basic_game", [](const BettingStrategy& a, const BettingStrategy& b,
                             const std::vector<int>& I, const Restriction& z,
                             const GoodnessParams& params, int horizon) {
    return run_basic_game(a, b, positions_mask(I), z, params, horizon);
  });
  m.def("chosen_measure", [](const GameTrace& t, bool half) {
    ChosenMeasure cm = chosen_measure(t, half);
    return py::make_tuple(cm.sum.str(), cm.bound_num.str() + "/" + cm.bound_den.str(),
                          cm.within_bound, cm.slices_ok);
  });
  m.def("verify_trace", [](const GameTrace& t, const BettingStrategy& a, const BettingStrategy& b,
                           bool half) { return verify_trace_structure(t, a, b, half).violations; });

  py::class_<Zone>(m, "Zone")
      .def_readonly("interval", &Zone::interval)
      .def_readonly("N", &Zone::N)
      .def_readonly("phi", &Zone::phi)
      .def_readonly("index", &Zone::index);
  m.def("build_zones", [](const std::vector<int>& pi, const std::vector<long long>& gap, int count,
                          const std::string& flavor) {
    return build_zones(pi, gap, count,
                       flavor == "half_splitting" ? ZoneFlavor::half_splitting
                                                  : ZoneFlavor::general);
  });

  py::class_<TestLevels>(m, "TestLevels")
      .def("level_measures",
           [](const TestLevels& l) {
             std::vector<std::string> out;
             for (const auto& m_ : l.level_measures) out.push_back(m_.str());
             return out;
           })
      .def("level_sizes", [](const TestLevels& l) {
        std::vector<std::size_t> out;
        for (const auto& level : l.levels) out.push_back(level.size());
        return out;
      });
  m.def("run_levels", &run_levels);
  m.def("witness_low_capital", &witness_low_capital);

  py::class_<LowerBoundTrace>(m, "LowerBoundTrace")
      .def("all_bounds_hold", &LowerBoundTrace::all_bounds_hold)
      .def("export_text", [](const LowerBoundTrace& t) { return export_lower_bound(t); })
      .def_readonly("witness", &LowerBoundTrace::witness);
  m.def("run_lower_bound", &run_lower_bound);

  m.def("run_cli", [](const std::string& mode, const std::string& config) {
    CliResult res = run_cli_mode(mode, config);
    return py::make_tuple(res.exit_code, res.report_text);
  });
}
