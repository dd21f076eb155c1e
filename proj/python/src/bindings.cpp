#include "reinhardt/classifier.hpp"
#include "reinhardt/cli.hpp"
#include "reinhardt/verifier.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace reinhardt;

// Structured values cross the boundary as JSON text; the Python package
// decodes them.
namespace {

std::string dump(const nlohmann::json& j) { return j.dump(); }

std::string envelope_json(const std::string& text)
{
	try {
		return dump(envelope_to_json(envelope(parse_domain(text))));
	} catch (const NotExpressible& e) {
		return dump({{"expressible", false}, {"message", e.what()}});
	}
}

std::string synthesize_json(const std::string& d1, const std::string& d2, const std::string& tag,
                            const std::string& extras)
{
	DomainSpec D1 = parse_domain(d1), D2 = parse_domain(d2);
	SynthesisExtras ex;
	if (!extras.empty())
		ex = SynthesisExtras::from_json(nlohmann::json::parse(extras));
	for (const auto& cp : match_case(D1, D2))
		if (cp.tag == tag)
			return dump({{"case", cp.to_json()}, {"map", to_json(synthesize(cp, D1, D2, ex))}});
	throw DomainError("case " + tag + " does not apply to this pair");
}

std::string verify_json(const std::string& d1, const std::string& d2, const std::string& map, std::size_t samples,
                        std::vector<double> shells, std::size_t shell_samples, std::uint64_t seed, double tolerance,
                        unsigned threads)
{
	SampleConfig cfg;
	cfg.n_interior = samples;
	cfg.shells = std::move(shells);
	cfg.shell_samples = shell_samples;
	cfg.seed = seed;
	cfg.tolerance = tolerance;
	cfg.threads = threads;
	cfg.validate();
	HoloMap m = map_from_json(nlohmann::json::parse(map));
	py::gil_scoped_release nogil;
	return dump(verify(m, parse_domain(d1), parse_domain(d2), cfg).to_json());
}

std::pair<complex, complex> evaluate(const std::string& map, complex z, complex w)
{
	Point p = map_eval(map_from_json(nlohmann::json::parse(map)), {z, w});
	return {p.z, p.w};
}

py::tuple run(const std::vector<std::string>& args)
{
	std::ostringstream out, err;
	int code = run_cli(args, out, err);
	return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_core, m)
{
	m.doc() = "Reinhardt domain classification core";

	py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
	py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
	py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
	py::register_exception_translator([](std::exception_ptr p) {
		try {
			if (p)
				std::rethrow_exception(p);
		} catch (const nlohmann::json::exception& e) {
			PyErr_SetString(PyExc_ValueError, e.what());
		}
	});

	m.attr("SCHEMA_VERSION") = kSchemaVersion;

	m.def("normalize", [](const std::string& text) { return to_text(normalize(parse_domain(text))); });
	m.def("membership", [](const std::string& text, complex z, complex w) {
		return membership(parse_domain(text), {z, w});
	});
	m.def("margin", [](const std::string& text, complex z, complex w) { return margin(parse_domain(text), {z, w}); });
	m.def("is_bounded", [](const std::string& text) { return is_bounded(parse_domain(text)); });
	m.def("envelope_json", &envelope_json);
	m.def("boundary_json", [](const std::string& text) { return dump(boundary_to_json(classify_boundary(parse_domain(text)))); });
	m.def("classify_json", [](const std::string& d1, const std::string& d2, int bound) {
		return dump(classify_pair(parse_domain(d1), parse_domain(d2), bound).to_json());
	});
	m.def("self_maps_json", [](const std::string& text, int bound) {
		return dump(analyze_self_maps(parse_domain(text), bound).to_json());
	});
	m.def("synthesize_json", &synthesize_json);
	m.def("verify_json", &verify_json);
	m.def("evaluate", &evaluate);
	m.def("run_cli", &run);
}
