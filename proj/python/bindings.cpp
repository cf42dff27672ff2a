#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "homesched/analysis.hpp"
#include "homesched/io.hpp"
#include "homesched/model.hpp"
#include "homesched/oracle.hpp"
#include "homesched/program_builder.hpp"
#include "homesched/qp_solver.hpp"

namespace py = pybind11;
using namespace homesched;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Day-ahead household energy scheduling: convex QP build/solve/certify";

  py::class_<Horizon>(m, "Horizon")
      .def(py::init<>())
      .def_readwrite("steps", &Horizon::steps)
      .def_readwrite("dt_hours", &Horizon::dt_hours);

  py::class_<Tariff>(m, "Tariff")
      .def(py::init<>())
      .def_readwrite("buy", &Tariff::buy)
      .def_readwrite("sell", &Tariff::sell);

  py::class_<BatteryParams>(m, "BatteryParams")
      .def(py::init<>())
      .def_readwrite("max_charge_kw", &BatteryParams::max_charge_kw)
      .def_readwrite("max_discharge_kw", &BatteryParams::max_discharge_kw)
      .def_readwrite("eta_charge", &BatteryParams::eta_charge)
      .def_readwrite("eta_discharge", &BatteryParams::eta_discharge)
      .def_readwrite("self_discharge_kw", &BatteryParams::self_discharge_kw)
      .def_readwrite("capacity_kwh", &BatteryParams::capacity_kwh)
      .def_readwrite("soc_init", &BatteryParams::soc_init)
      .def_readwrite("soc_min", &BatteryParams::soc_min)
      .def_readwrite("soc_max", &BatteryParams::soc_max);

  py::class_<TclParams>(m, "TclParams")
      .def(py::init<>())
      .def_readwrite("thermal_capacitance", &TclParams::thermal_capacitance)
      .def_readwrite("thermal_resistance", &TclParams::thermal_resistance)
      .def_readwrite("cop", &TclParams::cop)
      .def_readwrite("setpoint_c", &TclParams::setpoint_c)
      .def_readwrite("dead_band_c", &TclParams::dead_band_c)
      .def_readwrite("theta_init_c", &TclParams::theta_init_c)
      .def_readwrite("max_power_kw", &TclParams::max_power_kw)
      .def_readwrite("external_temp_c", &TclParams::external_temp_c)
      .def("leak", &TclParams::leak)
      .def("decay", &TclParams::decay)
      .def("gain", &TclParams::gain);

  py::class_<NonDynLoadParams>(m, "NonDynLoadParams")
      .def(py::init<>())
      .def_readwrite("min_power_kw", &NonDynLoadParams::min_power_kw)
      .def_readwrite("max_power_kw", &NonDynLoadParams::max_power_kw)
      .def_readwrite("total", &NonDynLoadParams::total);

  py::class_<RegularizationParams>(m, "RegularizationParams")
      .def(py::init<>())
      .def_readwrite("charge_quad", &RegularizationParams::charge_quad)
      .def_readwrite("charge_lin", &RegularizationParams::charge_lin)
      .def_readwrite("discharge_quad", &RegularizationParams::discharge_quad)
      .def_readwrite("discharge_lin", &RegularizationParams::discharge_lin)
      .def_readwrite("nd_quad", &RegularizationParams::nd_quad)
      .def_readwrite("nd_lin", &RegularizationParams::nd_lin)
      .def_readwrite("tcl_quad", &RegularizationParams::tcl_quad)
      .def_readwrite("tcl_lin", &RegularizationParams::tcl_lin);

  py::class_<HouseholdScenario>(m, "HouseholdScenario")
      .def(py::init<>())
      .def_readwrite("horizon", &HouseholdScenario::horizon)
      .def_readwrite("tariff", &HouseholdScenario::tariff)
      .def_readwrite("battery", &HouseholdScenario::battery)
      .def_readwrite("tcl", &HouseholdScenario::tcl)
      .def_readwrite("nd_load", &HouseholdScenario::nd_load)
      .def_readwrite("reg", &HouseholdScenario::reg)
      .def_readwrite("critical_kw", &HouseholdScenario::critical_kw)
      .def_readwrite("renewable_kw", &HouseholdScenario::renewable_kw);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("violations", &ValidationReport::violations)
      .def("ok", &ValidationReport::ok)
      .def("__str__", &ValidationReport::to_string);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("holds", &ConditionReport::holds)
      .def_readonly("margin", &ConditionReport::margin)
      .def_readonly("reg_witness", &ConditionReport::reg_witness);

  py::enum_<VarKind>(m, "VarKind")
      .value("Charge", VarKind::Charge)
      .value("Discharge", VarKind::Discharge)
      .value("NdLoad", VarKind::NdLoad)
      .value("Tcl", VarKind::Tcl)
      .value("Epigraph", VarKind::Epigraph);

  py::class_<VariableIndex>(m, "VariableIndex")
      .def("count", &VariableIndex::count)
      .def("steps", &VariableIndex::steps)
      .def("has", &VariableIndex::has)
      .def("at", &VariableIndex::at)
      .def("decode", &VariableIndex::decode);

  py::class_<QuadraticProgram>(m, "QuadraticProgram")
      .def_readonly("q_diag", &QuadraticProgram::q_diag)
      .def_readonly("c", &QuadraticProgram::c)
      .def_readonly("a_ineq", &QuadraticProgram::a_ineq)
      .def_readonly("b_ineq", &QuadraticProgram::b_ineq)
      .def_readonly("a_eq", &QuadraticProgram::a_eq)
      .def_readonly("b_eq", &QuadraticProgram::b_eq)
      .def_readonly("index", &QuadraticProgram::index)
      .def_readonly("notes", &QuadraticProgram::notes)
      .def("cols", &QuadraticProgram::cols)
      .def("rows", &QuadraticProgram::rows)
      .def("eq_rows", &QuadraticProgram::eq_rows)
      .def("objective", &QuadraticProgram::objective);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("Optimal", SolveStatus::Optimal)
      .value("PrimalInfeasible", SolveStatus::PrimalInfeasible)
      .value("IterationLimit", SolveStatus::IterationLimit)
      .value("NumericalFailure", SolveStatus::NumericalFailure);

  py::class_<SolverSettings>(m, "SolverSettings")
      .def(py::init<>())
      .def_readwrite("tol_primal", &SolverSettings::tol_primal)
      .def_readwrite("tol_dual", &SolverSettings::tol_dual)
      .def_readwrite("tol_gap", &SolverSettings::tol_gap)
      .def_readwrite("max_iter", &SolverSettings::max_iter)
      .def_readwrite("infeasibility_threshold", &SolverSettings::infeasibility_threshold)
      .def_readwrite("polish", &SolverSettings::polish);

  py::class_<QPResult>(m, "QPResult")
      .def_readonly("status", &QPResult::status)
      .def_readonly("primal", &QPResult::primal)
      .def_readonly("ineq_dual", &QPResult::ineq_dual)
      .def_readonly("eq_dual", &QPResult::eq_dual)
      .def_readonly("iterations", &QPResult::iterations)
      .def_readonly("r_primal", &QPResult::r_primal)
      .def_readonly("r_dual", &QPResult::r_dual)
      .def_readonly("gap", &QPResult::gap)
      .def_readonly("note", &QPResult::note);

  py::class_<ResidualReport>(m, "ResidualReport")
      .def_readonly("stationarity", &ResidualReport::stationarity)
      .def_readonly("complementarity", &ResidualReport::complementarity)
      .def_readonly("primal_ineq", &ResidualReport::primal_ineq)
      .def_readonly("primal_eq", &ResidualReport::primal_eq)
      .def_readonly("dual_feasibility", &ResidualReport::dual_feasibility)
      .def("worst", &ResidualReport::worst);

  py::class_<ScheduleSolution>(m, "ScheduleSolution")
      .def_readonly("u_charge_kw", &ScheduleSolution::u_charge_kw)
      .def_readonly("u_discharge_kw", &ScheduleSolution::u_discharge_kw)
      .def_readonly("u_nd_kw", &ScheduleSolution::u_nd_kw)
      .def_readonly("u_tcl_kw", &ScheduleSolution::u_tcl_kw)
      .def_readonly("grid_kw", &ScheduleSolution::grid_kw)
      .def_readonly("soc", &ScheduleSolution::soc)
      .def_readonly("temp_c", &ScheduleSolution::temp_c)
      .def_readonly("bill", &ScheduleSolution::bill)
      .def_readonly("reg_cost", &ScheduleSolution::reg_cost)
      .def_readonly("objective", &ScheduleSolution::objective);

  py::class_<ComplementarityReport>(m, "ComplementarityReport")
      .def_readonly("margins_kw", &ComplementarityReport::margins_kw)
      .def_readonly("max_margin_kw", &ComplementarityReport::max_margin_kw)
      .def_readonly("eps_c", &ComplementarityReport::eps_c)
      .def_readonly("non_simultaneous", &ComplementarityReport::non_simultaneous);

  py::class_<PriceInterval>(m, "PriceInterval")
      .def_readonly("lo", &PriceInterval::lo)
      .def_readonly("hi", &PriceInterval::hi)
      .def("is_point", &PriceInterval::is_point);

  py::class_<StationarityStep>(m, "StationarityStep")
      .def_readonly("residual", &StationarityStep::residual)
      .def_readonly("delta", &StationarityStep::delta)
      .def_readonly("delta_raw", &StationarityStep::delta_raw)
      .def_readonly("v_e", &StationarityStep::v_e)
      .def_readonly("at_kink", &StationarityStep::at_kink)
      .def_readonly("proof_margin", &StationarityStep::proof_margin);

  py::class_<StationarityReport>(m, "StationarityReport")
      .def_readonly("steps", &StationarityReport::steps)
      .def_readonly("max_abs_residual", &StationarityReport::max_abs_residual);

  py::class_<CertifyOptions>(m, "CertifyOptions")
      .def(py::init<>())
      .def_readwrite("eps_c", &CertifyOptions::eps_c)
      .def_readwrite("tol_stationarity", &CertifyOptions::tol_stationarity)
      .def_readwrite("tol_comp_slack", &CertifyOptions::tol_comp_slack)
      .def_readwrite("tol_primal", &CertifyOptions::tol_primal)
      .def_readwrite("tol_dual_feas", &CertifyOptions::tol_dual_feas)
      .def_readwrite("tol_battery_stationarity", &CertifyOptions::tol_battery_stationarity)
      .def_readwrite("g_zero_tol", &CertifyOptions::g_zero_tol);

  py::class_<CertificateReport>(m, "CertificateReport")
      .def_readonly("has_battery", &CertificateReport::has_battery)
      .def_readonly("condition", &CertificateReport::condition)
      .def_readonly("complementarity", &CertificateReport::complementarity)
      .def_readonly("stationarity", &CertificateReport::stationarity)
      .def_readonly("kkt", &CertificateReport::kkt)
      .def_readonly("kkt_ok", &CertificateReport::kkt_ok)
      .def_readonly("passed", &CertificateReport::passed)
      .def_readonly("eps_c", &CertificateReport::eps_c)
      .def_readonly("flags", &CertificateReport::flags);

  py::class_<PatternResult>(m, "PatternResult")
      .def_readonly("pattern", &PatternResult::pattern)
      .def_readonly("status", &PatternResult::status)
      .def_readonly("objective", &PatternResult::objective)
      .def_readonly("solution", &PatternResult::solution);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("best", &OracleResult::best)
      .def_readonly("all", &OracleResult::all)
      .def_readonly("feasible_count", &OracleResult::feasible_count);

  py::class_<GapReport>(m, "GapReport")
      .def_readonly("relaxed_objective", &GapReport::relaxed_objective)
      .def_readonly("exact_objective", &GapReport::exact_objective)
      .def_readonly("gap", &GapReport::gap)
      .def_readonly("relaxation_bound_ok", &GapReport::relaxation_bound_ok);

  py::class_<ProfileTable>(m, "ProfileTable")
      .def(py::init<>())
      .def_readwrite("house_id", &ProfileTable::house_id)
      .def_readwrite("d_kw", &ProfileTable::d_kw)
      .def_readwrite("r_kw", &ProfileTable::r_kw)
      .def_readwrite("p_buy", &ProfileTable::p_buy)
      .def_readwrite("p_sell", &ProfileTable::p_sell)
      .def_readwrite("theta_ex_c", &ProfileTable::theta_ex_c)
      .def("steps", &ProfileTable::steps);

  m.def("validate_scenario", &validate_scenario, py::arg("scenario"));
  m.def("theorem_condition", &theorem_condition, py::arg("scenario"));
  m.def("step_soc", &step_soc, py::arg("soc"), py::arg("u_charge_kw"), py::arg("u_discharge_kw"),
        py::arg("battery"), py::arg("dt_hours"));
  m.def("step_temperature", &step_temperature, py::arg("theta_c"), py::arg("u_tcl_kw"),
        py::arg("external_temp_c"), py::arg("tcl"), py::arg("dt_hours"));
  m.def("build_qp", &build_qp, py::arg("scenario"));
  m.def("solve", &solve, py::arg("qp"), py::arg("settings") = SolverSettings{});
  m.def("kkt_residuals", &kkt_residuals, py::arg("qp"), py::arg("result"));
  m.def("extract_solution", &extract_solution, py::arg("qp"), py::arg("primal"),
        py::arg("scenario"));
  m.def("schedule_from_controls", &schedule_from_controls, py::arg("scenario"),
        py::arg("u_charge_kw"), py::arg("u_discharge_kw"), py::arg("u_nd_kw"),
        py::arg("u_tcl_kw"));
  m.def("objective_value", &objective_value, py::arg("scenario"), py::arg("solution"));
  m.def("default_eps_c", &default_eps_c, py::arg("battery"));
  m.def("check_complementarity", &check_complementarity, py::arg("solution"), py::arg("eps_c"));
  m.def("bill_subgradient_interval", &bill_subgradient_interval, py::arg("g_kw"),
        py::arg("price_buy"), py::arg("price_sell"), py::arg("g_tol") = 0.0);
  m.def("battery_stationarity_residual", &battery_stationarity_residual, py::arg("scenario"),
        py::arg("solution"), py::arg("qp"), py::arg("result"), py::arg("g_zero_tol") = 1e-9);
  m.def("certify", &certify, py::arg("scenario"), py::arg("solution"), py::arg("qp"),
        py::arg("result"), py::arg("options") = CertifyOptions{});
  m.def("solve_exact", &solve_exact, py::arg("scenario"), py::arg("k_limit") = 10,
        py::arg("settings") = SolverSettings{});
  m.def("compare", &compare, py::arg("scenario"), py::arg("relaxed"), py::arg("exact"));
  m.def("synth_houses", &synth_houses, py::arg("seed"), py::arg("n_houses"), py::arg("k"));
  m.def("load_profiles", &load_profiles, py::arg("path"));
  m.def("save_profiles", &save_profiles, py::arg("table"), py::arg("path"));
  m.def("load_scenario_config", &load_scenario_config, py::arg("path"));
  m.def("make_scenario", &make_scenario, py::arg("config"), py::arg("profile"));
  m.def("certificate_to_json", &certificate_to_json, py::arg("report"));

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("horizon", &ScenarioConfig::horizon)
      .def_readwrite("battery", &ScenarioConfig::battery)
      .def_readwrite("tcl", &ScenarioConfig::tcl)
      .def_readwrite("nd_load", &ScenarioConfig::nd_load)
      .def_readwrite("reg", &ScenarioConfig::reg)
      .def_readwrite("profiles_path", &ScenarioConfig::profiles_path);

  py::register_exception<ScenarioError>(m, "ScenarioError");
  py::register_exception<ParseError>(m, "ParseError");
}
