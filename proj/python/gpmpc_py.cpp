#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpmpc/bench.hpp"
#include "gpmpc/closed_loop.hpp"
#include "gpmpc/conic.hpp"
#include "gpmpc/errors.hpp"
#include "gpmpc/gp_model.hpp"
#include "gpmpc/kernel.hpp"
#include "gpmpc/lingp.hpp"
#include "gpmpc/oracle.hpp"
#include "gpmpc/plant.hpp"
#include "gpmpc/scp.hpp"

namespace py = pybind11;
using namespace gpmpc;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian-process MPC with sequential convex programming";

    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<ScpError>(m, "ScpError", PyExc_RuntimeError);

    // kernel / GP

    py::class_<KernelHyper>(m, "KernelHyper")
        .def(py::init<>())
        .def(py::init([](const Eigen::VectorXd& l, double sf2, double sn2) {
                 KernelHyper h;
                 h.lengthscales = l;
                 h.signal_variance = sf2;
                 h.noise_variance = sn2;
                 return h;
             }),
             py::arg("lengthscales"), py::arg("signal_variance"), py::arg("noise_variance"))
        .def_readwrite("lengthscales", &KernelHyper::lengthscales)
        .def_readwrite("signal_variance", &KernelHyper::signal_variance)
        .def_readwrite("noise_variance", &KernelHyper::noise_variance)
        .def("validate", &KernelHyper::validate);

    m.def("se_kernel", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          const KernelHyper& h) { return se_kernel(a, b, h); });

    py::class_<GpPrediction>(m, "GpPrediction")
        .def_readonly("mean", &GpPrediction::mean)
        .def_readonly("variance", &GpPrediction::variance);

    py::class_<GpModel>(m, "GpModel")
        .def(py::init<Eigen::MatrixXd, Eigen::VectorXd, KernelHyper>(), py::arg("inputs"), py::arg("targets"),
             py::arg("hyper"))
        .def_property_readonly("dim", &GpModel::dim)
        .def_property_readonly("size", &GpModel::size)
        .def_property_readonly("inputs", &GpModel::inputs)
        .def_property_readonly("targets", &GpModel::targets)
        .def_property_readonly("hyper", &GpModel::hyper)
        .def("predict", [](const GpModel& g, const Eigen::VectorXd& x) { return g.predict(x); })
        .def("predict_variances", &GpModel::predict_variances)
        .def("to_json", [](const GpModel& g) { return model_to_json(g); })
        .def_static("from_json", &model_from_json)
        .def("save", [](const GpModel& g, const std::string& path) { save_model(path, g); })
        .def_static("load", &load_model);

    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init<>())
        .def_readwrite("n_starts", &FitConfig::n_starts)
        .def_readwrite("seed", &FitConfig::seed)
        .def_readwrite("max_iter", &FitConfig::max_iter)
        .def_readwrite("grad_tol", &FitConfig::grad_tol)
        .def_readwrite("fixed_noise_variance", &FitConfig::fixed_noise_variance)
        .def_readwrite("max_fit_points", &FitConfig::max_fit_points);

    m.def("fit", &fit, py::arg("inputs"), py::arg("targets"), py::arg("config") = FitConfig{});

    py::class_<TrainingData>(m, "TrainingData")
        .def_readonly("inputs", &TrainingData::inputs)
        .def_readonly("targets", &TrainingData::targets);

    // linearized GP

    py::class_<LinGp>(m, "LinGp")
        .def_readonly("center", &LinGp::center)
        .def_readonly("active", &LinGp::active)
        .def_readonly("m_hat", &LinGp::m_hat)
        .def_readonly("v_hat", &LinGp::v_hat)
        .def_readonly("v_sqrt", &LinGp::v_sqrt)
        .def("eval", [](const LinGp& lg, const Eigen::VectorXd& d) { return lingp_eval(lg, d); });

    m.def("lingp_build", [](const GpModel& g, const Eigen::VectorXd& x) { return lingp_build(g, x); });
    m.def(
        "lingp_build_masked",
        [](const GpModel& g, const Eigen::VectorXd& x, const std::vector<bool>& mask) {
            return lingp_build(g, x, mask);
        },
        py::arg("model"), py::arg("x"), py::arg("active_mask"));

    // autoregressive rollout

    py::class_<ArSpec>(m, "ArSpec")
        .def(py::init([](int l, int mlag, int nu) { return ArSpec{l, mlag, nu}; }), py::arg("output_lag") = 1,
             py::arg("input_lag") = 0, py::arg("input_dim") = 1)
        .def_readwrite("output_lag", &ArSpec::output_lag)
        .def_readwrite("input_lag", &ArSpec::input_lag)
        .def_readwrite("input_dim", &ArSpec::input_dim);

    py::class_<ArState>(m, "ArState")
        .def(py::init([](const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& u) {
                 return ArState{y, u};
             }),
             py::arg("past_means"), py::arg("past_inputs") = std::vector<Eigen::VectorXd>{})
        .def_readwrite("past_means", &ArState::past_means)
        .def_readwrite("past_inputs", &ArState::past_inputs);

    py::class_<Rollout>(m, "Rollout")
        .def_readonly("means", &Rollout::means)
        .def_readonly("variances", &Rollout::variances)
        .def_readonly("regressors", &Rollout::regressors);

    m.def("rollout_mean", &rollout_mean, py::arg("model"), py::arg("spec"), py::arg("init"), py::arg("inputs"),
          py::arg("with_variances") = true);

    // conic solver

    py::class_<SecondOrderCone>(m, "SecondOrderCone")
        .def(py::init([](const Eigen::MatrixXd& F, const Eigen::VectorXd& g, const Eigen::VectorXd& c, double d0) {
                 return SecondOrderCone{F, g, c, d0};
             }),
             py::arg("F"), py::arg("g"), py::arg("c"), py::arg("d0"))
        .def_readwrite("F", &SecondOrderCone::F)
        .def_readwrite("g", &SecondOrderCone::g)
        .def_readwrite("c", &SecondOrderCone::c)
        .def_readwrite("d0", &SecondOrderCone::d0);

    py::class_<ConicProgram>(m, "ConicProgram")
        .def(py::init([](Eigen::Index dim) { return ConicProgram::with_dim(dim); }), py::arg("dim"))
        .def_readwrite("P", &ConicProgram::P)
        .def_readwrite("q", &ConicProgram::q)
        .def_readwrite("A_eq", &ConicProgram::A_eq)
        .def_readwrite("b_eq", &ConicProgram::b_eq)
        .def_readwrite("lb", &ConicProgram::lb)
        .def_readwrite("ub", &ConicProgram::ub)
        .def_readwrite("cones", &ConicProgram::cones)
        .def("validate", &ConicProgram::validate)
        .def("objective", &ConicProgram::objective)
        .def("max_violation", &ConicProgram::max_violation);

    py::class_<ConicSettings>(m, "ConicSettings")
        .def(py::init<>())
        .def_readwrite("tol_feas", &ConicSettings::tol_feas)
        .def_readwrite("tol_gap", &ConicSettings::tol_gap)
        .def_readwrite("max_iter", &ConicSettings::max_iter);

    py::class_<ConicSolution>(m, "ConicSolution")
        .def_readonly("z", &ConicSolution::z)
        .def_readonly("objective", &ConicSolution::objective)
        .def_property_readonly("status", [](const ConicSolution& s) { return to_string(s.status); })
        .def_readonly("primal_residual", &ConicSolution::primal_residual)
        .def_readonly("dual_residual", &ConicSolution::dual_residual)
        .def_readonly("gap", &ConicSolution::gap)
        .def_readonly("iterations", &ConicSolution::iterations);

    m.def("solve", &solve, py::arg("program"), py::arg("settings") = ConicSettings{});

    // SCP controller

    py::class_<TrackingMpcSpec>(m, "TrackingMpcSpec")
        .def(py::init<>())
        .def_readwrite("horizon", &TrackingMpcSpec::horizon)
        .def_readwrite("weight_output", &TrackingMpcSpec::weight_output)
        .def_readwrite("weight_input_rate", &TrackingMpcSpec::weight_input_rate)
        .def_readwrite("weight_variance", &TrackingMpcSpec::weight_variance)
        .def_readwrite("u_min", &TrackingMpcSpec::u_min)
        .def_readwrite("u_max", &TrackingMpcSpec::u_max)
        .def_readwrite("du_min", &TrackingMpcSpec::du_min)
        .def_readwrite("du_max", &TrackingMpcSpec::du_max)
        .def_readwrite("y_lo", &TrackingMpcSpec::y_lo)
        .def_readwrite("y_hi", &TrackingMpcSpec::y_hi)
        .def_readwrite("kappa", &TrackingMpcSpec::kappa)
        .def_readwrite("terminal_delta", &TrackingMpcSpec::terminal_delta)
        .def_readwrite("reference", &TrackingMpcSpec::reference)
        .def_readwrite("previous_input", &TrackingMpcSpec::previous_input)
        .def("set_constant_reference", &TrackingMpcSpec::set_constant_reference)
        .def("validate", &TrackingMpcSpec::validate);

    py::class_<ScpConfig>(m, "ScpConfig")
        .def(py::init<>())
        .def_readwrite("rho0", &ScpConfig::rho0)
        .def_readwrite("lambda_", &ScpConfig::lambda)
        .def_readwrite("r0", &ScpConfig::r0)
        .def_readwrite("r1", &ScpConfig::r1)
        .def_readwrite("r2", &ScpConfig::r2)
        .def_readwrite("beta_fail", &ScpConfig::beta_fail)
        .def_readwrite("beta_succ", &ScpConfig::beta_succ)
        .def_readwrite("epsilon", &ScpConfig::epsilon)
        .def_readwrite("j_max", &ScpConfig::j_max)
        .def_readwrite("lambda_growth", &ScpConfig::lambda_growth)
        .def_readwrite("lambda_max", &ScpConfig::lambda_max)
        .def_readwrite("max_penalty_rounds", &ScpConfig::max_penalty_rounds)
        .def_readwrite("rho_min", &ScpConfig::rho_min);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("pass_", &IterationRecord::pass)
        .def_readonly("iteration", &IterationRecord::iteration)
        .def_readonly("lambda_", &IterationRecord::lambda)
        .def_readonly("phi", &IterationRecord::phi)
        .def_readonly("phi_candidate", &IterationRecord::phi_candidate)
        .def_readonly("delta_actual", &IterationRecord::delta_actual)
        .def_readonly("delta_predicted", &IterationRecord::delta_predicted)
        .def_readonly("ratio", &IterationRecord::ratio)
        .def_readonly("rho", &IterationRecord::rho)
        .def_readonly("rho_next", &IterationRecord::rho_next)
        .def_readonly("accepted", &IterationRecord::accepted)
        .def_readonly("terminal", &IterationRecord::terminal);

    py::class_<ScpReport>(m, "ScpReport")
        .def_readonly("iterations", &ScpReport::iterations)
        .def_readonly("inputs", &ScpReport::inputs)
        .def_readonly("rollout", &ScpReport::rollout)
        .def_readonly("phi", &ScpReport::phi)
        .def_readonly("lambda_", &ScpReport::lambda)
        .def_readonly("violation", &ScpReport::violation)
        .def_readonly("converged", &ScpReport::converged)
        .def_property_readonly("stop", [](const ScpReport& r) { return to_string(r.stop); })
        .def_readonly("passes", &ScpReport::passes)
        .def_readonly("total_time", &ScpReport::total_time)
        .def("to_json", [](const ScpReport& r) { return report_to_json(r); });

    m.def("scp_solve", &scp_solve, py::arg("model"), py::arg("spec"), py::arg("arspec"), py::arg("init"),
          py::arg("u_init"), py::arg("config") = ScpConfig{});

    m.def("penalty_cost", &penalty_cost);

    py::class_<OracleConfig>(m, "OracleConfig")
        .def(py::init<>())
        .def_readwrite("restarts", &OracleConfig::restarts)
        .def_readwrite("seed", &OracleConfig::seed)
        .def_readwrite("max_evaluations_per_restart", &OracleConfig::max_evaluations_per_restart);

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("inputs", &OracleResult::inputs)
        .def_readonly("cost", &OracleResult::cost)
        .def_readonly("evaluations", &OracleResult::evaluations)
        .def_readonly("best_after_restart", &OracleResult::best_after_restart);

    m.def("oracle_solve", &oracle_solve, py::arg("model"), py::arg("spec"), py::arg("arspec"), py::arg("init"),
          py::arg("lambda_"), py::arg("config") = OracleConfig{});

    // plant, closed loop, benchmark

    m.def("plant_dynamics", &plant_dynamics);
    m.def("clip_input", &clip_input);

    py::class_<DataGenConfig>(m, "DataGenConfig")
        .def(py::init<>())
        .def_readwrite("x0", &DataGenConfig::x0)
        .def_readwrite("hold", &DataGenConfig::hold)
        .def_readwrite("noise_on", &DataGenConfig::noise_on);

    m.def("generate_training_data", &generate_training_data, py::arg("n"), py::arg("seed"),
          py::arg("config") = DataGenConfig{});

    py::class_<ClosedLoopConfig>(m, "ClosedLoopConfig")
        .def(py::init<>())
        .def_readwrite("steps", &ClosedLoopConfig::steps)
        .def_readwrite("seed", &ClosedLoopConfig::seed)
        .def_readwrite("x0", &ClosedLoopConfig::x0)
        .def_readwrite("reference_first", &ClosedLoopConfig::reference_first)
        .def_readwrite("reference_second", &ClosedLoopConfig::reference_second)
        .def_readwrite("switch_step", &ClosedLoopConfig::switch_step)
        .def_readwrite("noise_on", &ClosedLoopConfig::noise_on);

    py::class_<StepLog>(m, "StepLog")
        .def_readonly("step", &StepLog::step)
        .def_readonly("reference", &StepLog::reference)
        .def_readonly("u", &StepLog::u)
        .def_readonly("y_pred", &StepLog::y_pred)
        .def_readonly("sigma", &StepLog::sigma)
        .def_readonly("x_true", &StepLog::x_true)
        .def_readonly("y_meas", &StepLog::y_meas)
        .def_readonly("solved", &StepLog::solved)
        .def_readonly("converged", &StepLog::converged)
        .def_readonly("iterations", &StepLog::iterations)
        .def_readonly("total_time", &StepLog::total_time)
        .def_readonly("subproblem_time", &StepLog::subproblem_time);

    py::class_<ClosedLoopResult>(m, "ClosedLoopResult")
        .def_readonly("steps", &ClosedLoopResult::steps)
        .def_readonly("reports", &ClosedLoopResult::reports)
        .def("write_csv", [](const ClosedLoopResult& r, const std::string& path) { write_log_csv(path, r); })
        .def("trace_json", [](const ClosedLoopResult& r) { return trace_to_json(r); });

    m.def("run_closed_loop", &run_closed_loop, py::arg("model"), py::arg("spec") = TrackingMpcSpec{},
          py::arg("scp") = ScpConfig{}, py::arg("config") = ClosedLoopConfig{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<BenchConfig>(m, "BenchConfig")
        .def(py::init<>())
        .def_readwrite("n_grid", &BenchConfig::n_grid)
        .def_readwrite("steps", &BenchConfig::steps)
        .def_readwrite("seed", &BenchConfig::seed)
        .def_readwrite("fit_points", &BenchConfig::fit_points)
        .def_readwrite("fit_starts", &BenchConfig::fit_starts)
        .def_readwrite("spec", &BenchConfig::spec)
        .def_readwrite("scp", &BenchConfig::scp)
        .def_readwrite("loop", &BenchConfig::loop);

    py::class_<BenchRow>(m, "BenchRow")
        .def_readonly("n", &BenchRow::n)
        .def_readonly("step", &BenchRow::step)
        .def_readonly("total_time", &BenchRow::total_time)
        .def_readonly("subproblem_time", &BenchRow::subproblem_time)
        .def_readonly("iterations", &BenchRow::iterations)
        .def_readonly("converged", &BenchRow::converged)
        .def_readonly("tracking_error", &BenchRow::tracking_error);

    py::class_<BenchResult>(m, "BenchResult")
        .def_readonly("rows", &BenchResult::rows)
        .def_readonly("failed_n", &BenchResult::failed_n)
        .def("write_csv", [](const BenchResult& r, const std::string& path) { write_bench_csv(path, r); });

    m.def(
        "benchmark", [](const BenchConfig& c) { return benchmark(c); }, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
    m.def("parse_n_grid", &parse_n_grid);
}
