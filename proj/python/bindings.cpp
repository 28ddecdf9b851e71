#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <span>

#include "bwcrm/bwcrm.hpp"

namespace py = pybind11;
using namespace bwcrm;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Best approximation onto intersections of affine subspaces via "
      "block-wise circumcentered reflections";
  m.attr("__version__") = "0.1.0";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<NonFiniteError>(m, "NonFiniteError", error.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError",
                                               error.ptr());
  py::register_exception<InconsistentSystemError>(m, "InconsistentSystemError",
                                                  error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<DegeneracyError>(m, "DegeneracyError", error.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError",
                                                error.ptr());
  py::register_exception<MatrixMarketError>(m, "MatrixMarketError", error.ptr());

  py::class_<Hyperplane>(m, "Hyperplane")
      .def(py::init<Vector, double>(), py::arg("normal"), py::arg("offset"))
      .def_property_readonly("unit_normal", &Hyperplane::normal)
      .def_property_readonly("offset", &Hyperplane::offset)
      .def("project", &Hyperplane::project, py::arg("z"))
      .def("reflect", &Hyperplane::reflect, py::arg("z"))
      .def("reflect_direction", &Hyperplane::reflect_direction, py::arg("d"))
      .def("contains", &Hyperplane::contains, py::arg("z"),
           py::arg("tol") = 1e-9)
      .def("residual_norm", &Hyperplane::residual_norm, py::arg("z"));

  py::class_<AffineSubspace>(m, "AffineSubspace")
      .def(py::init<Matrix, Vector>(), py::arg("rows"), py::arg("rhs"))
      .def(py::init<const Hyperplane&>(), py::arg("hyperplane"))
      .def_static("whole_space", &AffineSubspace::whole_space,
                  py::arg("dimension"))
      .def_property_readonly("dimension", &AffineSubspace::dimension)
      .def_property_readonly("codimension", &AffineSubspace::codimension)
      .def_property_readonly("row_count", &AffineSubspace::row_count)
      .def_property_readonly("is_hyperplane", &AffineSubspace::is_hyperplane)
      .def("project", &AffineSubspace::project, py::arg("z"))
      .def("reflect", &AffineSubspace::reflect, py::arg("z"))
      .def("reflect_direction", &AffineSubspace::reflect_direction,
           py::arg("d"))
      .def("contains", &AffineSubspace::contains, py::arg("z"),
           py::arg("tol") = 1e-9)
      .def("residual_norm", &AffineSubspace::residual_norm, py::arg("z"))
      .def("unit_normal", &AffineSubspace::unit_normal)
      .def_property_readonly("rows", &AffineSubspace::rows)
      .def_property_readonly("rhs", &AffineSubspace::rhs)
      .def("row_space_basis", &AffineSubspace::row_space_basis)
      .def("particular_solution", &AffineSubspace::particular_solution)
      .def("direction_basis", &AffineSubspace::direction_basis);

  m.def("stacked_system",
        [](const std::vector<AffineSubspace>& family) {
          return stacked_system(family);
        },
        py::arg("family"));
  m.def("oracle_intersection_projection",
        [](const std::vector<AffineSubspace>& family, const Vector& z) {
          return oracle_intersection_projection(family, z);
        },
        py::arg("family"), py::arg("z"));

  py::class_<ReflectionChain>(m, "ReflectionChain")
      .def_readonly("points", &ReflectionChain::points)
      .def_readonly("hit_flags", &ReflectionChain::hit_flags)
      .def("any_hit", &ReflectionChain::any_hit)
      .def("first_hit",
           [](const ReflectionChain& c) -> py::object {
             const auto hit = c.first_hit();
             return hit ? py::cast(*hit) : py::none();
           })
      .def("diameter", &ReflectionChain::diameter);

  m.def("reflection_chain",
        [](const std::vector<AffineSubspace>& family, const Vector& z,
           double tol) { return reflection_chain(family, z, tol); },
        py::arg("family"), py::arg("z"), py::arg("membership_tol") = 1e-9);
  m.def("circumcenter_points",
        [](const std::vector<Vector>& points) {
          return circumcenter_points(points);
        },
        py::arg("points"));
  m.def("circumcenter_block",
        [](const std::vector<AffineSubspace>& block, const Vector& z) {
          return circumcenter_block(std::span<const AffineSubspace>(block), z);
        },
        py::arg("block"), py::arg("z"));

  py::class_<Problem>(m, "Problem")
      .def_readonly("family", &Problem::family)
      .def_readonly("start", &Problem::start)
      .def_readonly("name", &Problem::name)
      .def("dimension", &Problem::dimension)
      .def("family_size", &Problem::family_size);

  m.def("make_problem", &make_problem, py::arg("family"), py::arg("start"),
        py::arg("name") = std::string());
  m.def("problem_from_rows", &problem_from_rows, py::arg("rows"),
        py::arg("rhs"), py::arg("start"), py::arg("name") = std::string());
  m.def("synth_consistent_system", &synth_consistent_system, py::arg("rows"),
        py::arg("cols"), py::arg("density"), py::arg("seed"));

  py::class_<BlockPartition>(m, "BlockPartition")
      .def_static("unit_blocks", &BlockPartition::unit_blocks,
                  py::arg("subspace_count"))
      .def_static("full_block", &BlockPartition::full_block,
                  py::arg("subspace_count"))
      .def_static("by_size", &BlockPartition::by_size,
                  py::arg("subspace_count"), py::arg("block_size"))
      .def(py::init<std::vector<Index>>(), py::arg("boundaries"))
      .def_property_readonly("block_count", &BlockPartition::block_count)
      .def_property_readonly("subspace_count", &BlockPartition::subspace_count)
      .def("block_size", &BlockPartition::block_size, py::arg("block"))
      .def_property_readonly("boundaries", &BlockPartition::boundaries);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("residual_tol", &SolverConfig::residual_tol)
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("membership_tol", &SolverConfig::membership_tol)
      .def_readwrite("rep_enabled", &SolverConfig::rep_enabled)
      .def_readwrite("rep_initial_t", &SolverConfig::rep_initial_t)
      .def_readwrite("rep_shrink", &SolverConfig::rep_shrink)
      .def_readwrite("rep_max_tries", &SolverConfig::rep_max_tries)
      .def_readwrite("trace_oracle", &SolverConfig::trace_oracle);

  py::enum_<TerminationReason>(m, "TerminationReason")
      .value("converged", TerminationReason::converged)
      .value("budget_exhausted", TerminationReason::budget_exhausted)
      .value("degeneracy", TerminationReason::degeneracy);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iteration", &IterationRecord::iteration)
      .def_readonly("iterate", &IterationRecord::iterate)
      .def_readonly("residual", &IterationRecord::residual)
      .def_readonly("error", &IterationRecord::error)
      .def_readonly("proj_count", &IterationRecord::proj_count);

  py::class_<IterationTrace>(m, "IterationTrace")
      .def_readonly("records", &IterationTrace::records)
      .def_readonly("reason", &IterationTrace::reason)
      .def_readonly("solve_seconds", &IterationTrace::solve_seconds)
      .def("iterations", &IterationTrace::iterations)
      .def("has_errors", &IterationTrace::has_errors);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("solution", &SolveResult::solution)
      .def_readonly("trace", &SolveResult::trace);

  m.def("solve", &solve, py::arg("problem"), py::arg("partition"),
        py::arg("config") = SolverConfig{});
  m.def("map_solve", &map_solve, py::arg("problem"),
        py::arg("config") = SolverConfig{});
  m.def("crm_solve", &crm_solve, py::arg("problem"),
        py::arg("config") = SolverConfig{});
  m.def("partition_by_size",
        [](const Problem& problem, Index block_size) {
          return partition_by_size(problem.family, block_size);
        },
        py::arg("problem"), py::arg("block_size"));
  m.def("rep_shift",
        [](const std::vector<AffineSubspace>& family, const Vector& z,
           const SolverConfig& config) { return rep_shift(family, z, config); },
        py::arg("family"), py::arg("z"), py::arg("config") = SolverConfig{});
  m.def("fit_empirical_rate", &fit_empirical_rate, py::arg("trace"));
  m.def("write_trace_csv",
        [](const IterationTrace& trace, const std::filesystem::path& path) {
          write_trace_csv(trace, path);
        },
        py::arg("trace"), py::arg("path"));

  m.def("friedrichs_cosine", &friedrichs_cosine, py::arg("v"), py::arg("w"));
  m.def("composed_rate_bound", &composed_rate_bound, py::arg("rate_v"),
        py::arg("rate_w"), py::arg("cosine"));
  m.def("map_rate_bound", &map_rate_bound, py::arg("cosine"),
        py::arg("sweeps"));
  m.def("chained_rate_bound", &chained_rate_bound, py::arg("cosines"));

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("friedrichs", &RateReport::friedrichs)
      .def_readonly("theoretical_bound", &RateReport::theoretical_bound)
      .def_readonly("fitted_rate", &RateReport::fitted_rate)
      .def_readonly("bound_satisfied", &RateReport::bound_satisfied);

  m.def("make_rate_report", &make_rate_report, py::arg("v"), py::arg("w"),
        py::arg("trace"));

  py::class_<BamCheck>(m, "BamCheck")
      .def_readonly("axioms_hold", &BamCheck::axioms_hold)
      .def_readonly("worst_ratio", &BamCheck::worst_ratio)
      .def("is_bam", &BamCheck::is_bam);

  m.def("verify_bam",
        [](const std::function<Vector(const Vector&)>& op,
           const AffineSubspace& target, const std::vector<Vector>& samples,
           double tol) { return verify_bam(op, target, samples, tol); },
        py::arg("op"), py::arg("target"), py::arg("samples"),
        py::arg("tol") = 1e-9);

  py::enum_<MmFormat>(m, "MmFormat")
      .value("coordinate", MmFormat::coordinate)
      .value("array", MmFormat::array);
  py::enum_<MmSymmetry>(m, "MmSymmetry")
      .value("general", MmSymmetry::general)
      .value("symmetric", MmSymmetry::symmetric);

  py::class_<MatrixMarketInfo>(m, "MatrixMarketInfo")
      .def_readonly("format", &MatrixMarketInfo::format)
      .def_readonly("symmetry", &MatrixMarketInfo::symmetry)
      .def_readonly("rows", &MatrixMarketInfo::rows)
      .def_readonly("cols", &MatrixMarketInfo::cols)
      .def_readonly("declared_entries", &MatrixMarketInfo::declared_entries);

  m.def("read_matrix_market",
        [](const std::filesystem::path& path) {
          return read_matrix_market(path);
        },
        py::arg("path"));
  m.def("write_matrix_market_array",
        [](const Matrix& matrix, const std::filesystem::path& path) {
          write_matrix_market_array(matrix, path);
        },
        py::arg("matrix"), py::arg("path"));
  m.def("format_scientific", &format_scientific, py::arg("value"),
        py::arg("digits") = 4);
  m.def("near_square_grid", &near_square_grid, py::arg("length"));
  m.def("write_pgm",
        [](const Vector& values, Index width, Index height,
           const std::filesystem::path& path) {
          write_pgm(values, width, height, path);
        },
        py::arg("values"), py::arg("width"), py::arg("height"),
        py::arg("path"));
}
