#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quantcap/channel.hpp"
#include "quantcap/quantizer_design.hpp"
#include "quantcap/solver.hpp"
#include "quantcap/sweep.hpp"
#include "quantcap/version.hpp"

namespace py = pybind11;
using namespace quantcap;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capacity of the AWGN channel under K-bin output quantization";
  m.attr("__version__") = kVersion;

  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init<double, double>(), py::arg("power"), py::arg("noise_var") = 1.0)
      .def_readonly("power", &ChannelParams::power)
      .def_readonly("noise_var", &ChannelParams::noise_var)
      .def_property_readonly("snr", &ChannelParams::snr)
      .def_property_readonly("snr_db", &ChannelParams::snr_db)
      .def_property_readonly("noise_std", &ChannelParams::noise_std)
      .def_static("from_snr_db", &ChannelParams::from_snr_db, py::arg("snr_db"),
                  py::arg("noise_var") = 1.0)
      .def("__repr__", [](const ChannelParams& p) {
        return "ChannelParams(power=" + std::to_string(p.power) +
               ", noise_var=" + std::to_string(p.noise_var) + ")";
      });

  py::class_<QuantizerSpec>(m, "QuantizerSpec")
      .def(py::init<std::vector<double>>(), py::arg("thresholds"))
      .def_property_readonly("thresholds", &QuantizerSpec::thresholds)
      .def_property_readonly("bins", &QuantizerSpec::bins)
      .def("scaled", &QuantizerSpec::scaled, py::arg("r"));

  py::class_<InputDistribution>(m, "InputDistribution")
      .def(py::init([](std::vector<double> points, std::vector<double> probs) {
             InputDistribution f{std::move(points), std::move(probs)};
             f.validate();
             return f;
           }),
           py::arg("points"), py::arg("probs"))
      .def_readonly("points", &InputDistribution::points)
      .def_readonly("probs", &InputDistribution::probs)
      .def("avg_power", &InputDistribution::avg_power)
      .def("entropy_bits", &InputDistribution::entropy_bits);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("grid_half_width", &SolverOptions::grid_half_width)
      .def_readwrite("grid_step", &SolverOptions::grid_step)
      .def_readwrite("kkt_tol", &SolverOptions::kkt_tol)
      .def_readwrite("power_tol", &SolverOptions::power_tol)
      .def_readwrite("max_outer_iters", &SolverOptions::max_outer_iters)
      .def_readwrite("prune_prob", &SolverOptions::prune_prob)
      .def_readwrite("inner_tol", &SolverOptions::inner_tol)
      .def_readwrite("max_inner_iters", &SolverOptions::max_inner_iters)
      .def_readwrite("check_inner_monotone", &SolverOptions::check_inner_monotone);

  py::class_<CapacityResult>(m, "CapacityResult")
      .def_readonly("capacity", &CapacityResult::capacity)
      .def_readonly("distribution", &CapacityResult::distribution)
      .def_readonly("gamma", &CapacityResult::gamma)
      .def_readonly("kkt_slack", &CapacityResult::kkt_slack)
      .def_readonly("power_used", &CapacityResult::power_used)
      .def_readonly("outer_iters", &CapacityResult::outer_iters)
      .def_readonly("converged", &CapacityResult::converged);

  py::class_<SupportBound>(m, "SupportBound")
      .def_readonly("lower", &SupportBound::lower)
      .def_readonly("upper", &SupportBound::upper)
      .def_readonly("saturation_level", &SupportBound::saturation_level)
      .def_readonly("onset", &SupportBound::onset)
      .def_readonly("saturated", &SupportBound::saturated);

  py::class_<FixedPointResult>(m, "FixedPointResult")
      .def_readonly("distribution", &FixedPointResult::distribution)
      .def_readonly("converged", &FixedPointResult::converged)
      .def_readonly("iterations", &FixedPointResult::iterations);

  m.def("qfunc", &qfunc, py::arg("x"));
  m.def("transition_row", &transition_row, py::arg("x"), py::arg("quantizer"),
        py::arg("noise_std"));
  m.def("mutual_information", &mutual_information, py::arg("input"),
        py::arg("quantizer"), py::arg("noise_std"));
  m.def("divergence", &divergence, py::arg("x"), py::arg("input"),
        py::arg("quantizer"), py::arg("noise_std"));
  m.def("binary_entropy_bits", &binary_entropy_bits, py::arg("p"));

  m.def("one_bit_capacity", &one_bit_capacity, py::arg("params"));
  m.def("constrained_fixed_point", &constrained_fixed_point, py::arg("points"),
        py::arg("params"), py::arg("quantizer"), py::arg("gamma"),
        py::arg("opts") = SolverOptions{});
  m.def("capacity", &capacity, py::arg("params"), py::arg("quantizer"),
        py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("kkt_certify", &kkt_certify, py::arg("result"), py::arg("params"),
        py::arg("quantizer"), py::arg("grid"), py::arg("kkt_tol") = 1e-6,
        py::arg("support_tol") = 1e-5);
  m.def("kkt_support_deviation", &kkt_support_deviation, py::arg("result"),
        py::arg("params"), py::arg("quantizer"));
  m.def("support_bound", &support_bound, py::arg("input"), py::arg("params"),
        py::arg("quantizer"), py::arg("gamma"));
  m.def("candidate_grid", &candidate_grid, py::arg("params"), py::arg("quantizer"),
        py::arg("opts") = SolverOptions{});

  py::class_<BenchmarkScheme>(m, "BenchmarkScheme")
      .def_readonly("input", &BenchmarkScheme::input)
      .def_readonly("quantizer", &BenchmarkScheme::quantizer);

  py::class_<QSweepPoint>(m, "QSweepPoint")
      .def_readonly("q", &QSweepPoint::q)
      .def_readonly("capacity", &QSweepPoint::capacity)
      .def_readonly("converged", &QSweepPoint::converged);

  py::class_<TwoBitSweepResult>(m, "TwoBitSweepResult")
      .def_readonly("curve", &TwoBitSweepResult::curve)
      .def_readonly("best_q", &TwoBitSweepResult::best_q)
      .def_readonly("best", &TwoBitSweepResult::best);

  py::class_<TwoBitOptimizeResult>(m, "TwoBitOptimizeResult")
      .def_readonly("best_q", &TwoBitOptimizeResult::best_q)
      .def_readonly("best", &TwoBitOptimizeResult::best);

  py::class_<SymmetricQuantizer3Bit>(m, "SymmetricQuantizer3Bit")
      .def(py::init([](double q1, double q2, double q3) {
             return SymmetricQuantizer3Bit{q1, q2, q3};
           }),
           py::arg("q1"), py::arg("q2"), py::arg("q3"))
      .def_readonly("q1", &SymmetricQuantizer3Bit::q1)
      .def_readonly("q2", &SymmetricQuantizer3Bit::q2)
      .def_readonly("q3", &SymmetricQuantizer3Bit::q3)
      .def("to_quantizer", &SymmetricQuantizer3Bit::to_quantizer);

  py::class_<ThreeBitOptimizeResult>(m, "ThreeBitOptimizeResult")
      .def_readonly("quantizer", &ThreeBitOptimizeResult::quantizer)
      .def_readonly("result", &ThreeBitOptimizeResult::result)
      .def_readonly("rounds", &ThreeBitOptimizeResult::rounds)
      .def_readonly("local_optimum_caveat",
                    &ThreeBitOptimizeResult::local_optimum_caveat);

  m.def("benchmark_pair", &benchmark_pair, py::arg("k"), py::arg("params"));
  m.def("benchmark_mi", &benchmark_mi, py::arg("k"), py::arg("params"));
  m.def("scale_quantizer", &scale_quantizer, py::arg("quantizer"), py::arg("r"));
  m.def("default_q_grid", &default_q_grid, py::arg("params"));
  m.def("two_bit_sweep", &two_bit_sweep, py::arg("params"), py::arg("q_grid"),
        py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("two_bit_optimize", &two_bit_optimize, py::arg("params"),
        py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("three_bit_optimize", &three_bit_optimize, py::arg("params"),
        py::arg("opts") = SolverOptions{}, py::arg("multistart") = 1,
        py::call_guard<py::gil_scoped_release>());

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("snr_db", &SweepRecord::snr_db)
      .def_readonly("scheme", &SweepRecord::scheme)
      .def_readonly("value", &SweepRecord::value)
      .def_readonly("aux", &SweepRecord::aux);

  py::class_<TableCell>(m, "TableCell")
      .def_readonly("table", &TableCell::table)
      .def_readonly("scheme", &TableCell::scheme)
      .def_readonly("param", &TableCell::param)
      .def_readonly("value", &TableCell::value)
      .def_readonly("infeasible", &TableCell::infeasible)
      .def_readonly("has_reference", &TableCell::has_reference)
      .def_readonly("reference", &TableCell::reference)
      .def_readonly("ref_infeasible", &TableCell::ref_infeasible)
      .def_readonly("tolerance", &TableCell::tolerance)
      .def_readonly("gated", &TableCell::gated)
      .def_readonly("ok", &TableCell::ok)
      .def_readonly("converged", &TableCell::converged);

  m.def("awgn_capacity", &awgn_capacity, py::arg("params"));
  m.def("scheme_labels", [] { return scheme_labels(); });
  m.def("scheme_ceiling", &scheme_ceiling, py::arg("scheme"));
  m.def("snr_for_rate", &snr_for_rate, py::arg("scheme"), py::arg("rate"),
        py::arg("window_db") = std::pair<double, double>{-20.0, 30.0},
        py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("reproduce_table", &reproduce_table, py::arg("which"),
        py::arg("points") = std::vector<double>{},
        py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("ratio_report", &ratio_report, py::arg("snr_db"),
        py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("capacity_sweep", &capacity_sweep, py::arg("scheme"),
        py::arg("snr_db_points"), py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
}
