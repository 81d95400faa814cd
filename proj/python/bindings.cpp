#include "slpdigits/cli.hpp"
#include "slpdigits/coeff.hpp"
#include "slpdigits/errors.hpp"
#include "slpdigits/extract.hpp"
#include "slpdigits/plan.hpp"
#include "slpdigits/slp.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace slpdigits;

namespace {

// Python ints cross the boundary as decimal strings.
py::int_ to_py(const mpz_class& x) {
    return py::int_(py::str(x.get_str()));
}

mpz_class from_py(const py::int_& x) {
    return mpz_class(py::str(x).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Base-b digit extraction for integers given by straight-line programs";

    auto base_error = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<MalformedProgram>(m, "MalformedProgram", base_error.ptr());
    py::register_exception<ValueNotPositive>(m, "ValueNotPositive", PyExc_ValueError);
    py::register_exception<SizeCapExceeded>(m, "SizeCapExceeded", PyExc_OverflowError);
    py::register_exception<NotInvertible>(m, "NotInvertible", PyExc_ArithmeticError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
    py::register_exception<InfeasiblePlan>(m, "InfeasiblePlan", PyExc_RuntimeError);

    py::enum_<Op>(m, "Op").value("add", Op::add).value("sub", Op::sub).value("mul", Op::mul);

    py::class_<Step>(m, "Step")
        .def(py::init<Op, std::uint64_t, std::uint64_t>(), py::arg("op"), py::arg("lhs"), py::arg("rhs"))
        .def_readonly("op", &Step::op)
        .def_readonly("lhs", &Step::lhs)
        .def_readonly("rhs", &Step::rhs)
        .def("__eq__", [](const Step& a, const Step& b) { return a == b; });

    py::class_<SlpProgram>(m, "SlpProgram")
        .def(py::init<>())
        .def(py::init<std::vector<Step>>(), py::arg("steps"))
        .def_property_readonly("steps", [](const SlpProgram& p) { return std::vector<Step>(p.steps().begin(), p.steps().end()); })
        .def_property_readonly("length", &SlpProgram::length)
        .def("eval_exact",
             [](const SlpProgram& p, std::uint64_t cap) { return to_py(eval_exact(p, cap)); },
             py::arg("size_cap_bits") = kDefaultSizeCapBits)
        .def("eval_mod", [](const SlpProgram& p, const py::int_& q) { return to_py(eval_mod(p, from_py(q))); },
             py::arg("modulus"))
        .def("__str__", &serialize_slp);

    m.def("parse_slp", [](const std::string& text) { return parse_slp(text); }, py::arg("text"));
    m.def("serialize_slp", &serialize_slp, py::arg("program"));
    m.def("gen_power_slp", &gen_power_slp, py::arg("a"), py::arg("t"));

    py::class_<ExtractionPlan>(m, "ExtractionPlan")
        .def_readonly("base", &ExtractionPlan::base)
        .def_readonly("digit_index", &ExtractionPlan::digit_index)
        .def_readonly("level", &ExtractionPlan::level)
        .def_readonly("radix", &ExtractionPlan::radix)
        .def_readonly("exponent", &ExtractionPlan::exponent)
        .def_readonly("shift", &ExtractionPlan::shift)
        .def_readonly("S", &ExtractionPlan::block)
        .def_readonly("T", &ExtractionPlan::terms)
        .def_readonly("k", &ExtractionPlan::block_count)
        .def_readonly("r", &ExtractionPlan::padding)
        .def_readonly("w", &ExtractionPlan::working_digits)
        .def_readonly("digits_approx", &ExtractionPlan::digits_approx)
        .def_readonly("zero_shortcut", &ExtractionPlan::zero_shortcut);

    m.def("make_plan", &make_plan, py::arg("b"), py::arg("m"), py::arg("y"), py::arg("A"));
    m.def("plan_violations", &plan_violations, py::arg("plan"));

    py::class_<ExtractionStats>(m, "ExtractionStats")
        .def_readonly("S", &ExtractionStats::block)
        .def_readonly("T", &ExtractionStats::terms)
        .def_readonly("k", &ExtractionStats::block_count)
        .def_readonly("P", &ExtractionStats::largest_prime)
        .def_readonly("prime_count", &ExtractionStats::prime_count)
        .def_readonly("max_operand_bits", &ExtractionStats::max_operand_bits)
        .def_readonly("elapsed_ms", &ExtractionStats::elapsed_ms)
        .def_readonly("workers", &ExtractionStats::workers)
        .def_readonly("mod_mul_count", &ExtractionStats::mod_mul_count)
        .def_readonly("peak_workspace_bits", &ExtractionStats::peak_workspace_bits);

    py::class_<DigitReport>(m, "DigitReport")
        .def_property_readonly("gamma_digits", [](const DigitReport& r) { return std::vector<std::uint32_t>(r.gamma.digits().begin(), r.gamma.digits().end()); })
        .def_property_readonly("gamma", [](const DigitReport& r) { return r.gamma.digit_string(); })
        .def_readonly("digit", &DigitReport::digit)
        .def_readonly("ambiguous", &DigitReport::ambiguous)
        .def_readonly("wrapped", &DigitReport::wrapped)
        .def_readonly("zero_shortcut", &DigitReport::zero_shortcut)
        .def_readonly("stats", &DigitReport::stats);

    m.def("extract_digits", &extract_digits, py::arg("plan"), py::arg("program"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "coeff_crt", [](std::uint64_t T, std::uint64_t k, std::uint64_t j) { return to_py(coeff_crt(T, k, j)); },
        py::arg("T"), py::arg("k"), py::arg("j"));
    m.def(
        "coeff_direct",
        [](std::uint64_t T, std::uint64_t k, std::uint64_t j, std::uint64_t max_T) {
            return to_py(coeff_direct(T, k, j, max_T));
        },
        py::arg("T"), py::arg("k"), py::arg("j"), py::arg("max_T") = 64);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "slpdigits");
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
