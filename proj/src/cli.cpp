#include "reinhardt/cli.hpp"

#include "reinhardt/classifier.hpp"
#include "reinhardt/verifier.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace reinhardt {

namespace {

nlohmann::json vec_json(const Vec2& p) { return {p.x, p.y}; }

nlohmann::json normal_form_json(const NormalForm& nf)
{
	nlohmann::json M = nlohmann::json::array();
	for (const auto& row : nf.map.M)
		M.push_back({row[0].str(), row[1].str()});
	return {{"type", nf.type}, {"M", M}, {"t", {nf.map.t[0], nf.map.t[1]}}};
}

nlohmann::json read_json_file(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::ios_base::failure("cannot open " + path);
	try {
		return nlohmann::json::parse(in);
	} catch (const nlohmann::json::parse_error& e) {
		throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what(), 1, 1);
	}
}

// A map file holds either a bare map or the output of `synthesize`.
HoloMap read_map(const std::string& path)
{
	auto j = read_json_file(path);
	if (j.contains("result") && j.at("result").contains("map"))
		j = j.at("result").at("map");
	else if (j.contains("map") && !j.contains("type"))
		j = j.at("map");
	return map_from_json(j);
}

struct Options {
	std::string output = "json";
	std::string d1, d2, tag, extras, map;
	int bound = 4;
	SampleConfig sample;
};

struct Outcome {
	nlohmann::json result;
	int code = kExitOk;
};

Outcome do_classify(const Options& o)
{
	return {classify_pair(load_domain(o.d1), load_domain(o.d2), o.bound).to_json()};
}

Outcome do_synthesize(const Options& o)
{
	DomainSpec D1 = load_domain(o.d1), D2 = load_domain(o.d2);
	SynthesisExtras extras;
	if (!o.extras.empty())
		extras = SynthesisExtras::from_json(read_json_file(o.extras));
	for (const auto& cp : match_case(D1, D2))
		if (cp.tag == o.tag)
			return {{{"case", cp.to_json()}, {"map", to_json(synthesize(cp, D1, D2, extras))}}};
	throw DomainError("case " + o.tag + " does not apply to this pair");
}

Outcome do_verify(const Options& o)
{
	o.sample.validate();
	auto rep = verify(read_map(o.map), load_domain(o.d1), load_domain(o.d2), o.sample);
	Outcome out{rep.to_json()};
	if (rep.has_reason(kReasonEvaluationError))
		out.code = kExitInternal;
	else if (!rep.pass)
		out.code = kExitVerifyFail;
	return out;
}

Outcome do_envelope(const Options& o)
{
	DomainSpec D = load_domain(o.d1);
	try {
		return {envelope_to_json(envelope(D))};
	} catch (const NotExpressible& e) {
		nlohmann::json verts = nlohmann::json::array();
		for (const auto& v : e.raw().vertices())
			verts.push_back(vec_json(v.point));
		return {{{"expressible", false}, {"message", e.what()}, {"vertices", verts}}};
	}
}

Outcome do_boundary(const Options& o) { return {boundary_to_json(classify_boundary(load_domain(o.d1)))}; }

Outcome do_selfmaps(const Options& o) { return {analyze_self_maps(load_domain(o.d1), o.bound).to_json()}; }

nlohmann::json error_json(const std::string& kind, const std::string& message)
{
	return {{"kind", kind}, {"message", message}};
}

} // namespace

nlohmann::json envelope_to_json(const EnvelopeResult& r)
{
	nlohmann::json axes = nlohmann::json::array();
	for (Axis a : r.added_axes)
		axes.push_back(axis_name(a));
	return {{"expressible", true},
	        {"changed", r.changed},
	        {"added_axes", axes},
	        {"cells", r.envelope.cells.size()},
	        {"envelope", to_text(r.envelope)}};
}

nlohmann::json boundary_to_json(const BoundaryReport& r)
{
	nlohmann::json pieces = nlohmann::json::array();
	for (const auto& p : r.pieces) {
		nlohmann::json j = {{"kind", boundary_kind_name(p.kind)}, {"source", p.source}};
		if (p.partner)
			j["partner"] = *p.partner;
		if (p.kind == BoundaryKind::Torus) {
			j["point"] = vec_json(p.point);
		} else {
			j["t_range"] = {p.t_start, p.t_end};
		}
		if (p.kind == BoundaryKind::Spherical)
			j["model_type"] = p.model_type;
		if (p.normal_form)
			j["normal_form"] = normal_form_json(*p.normal_form);
		pieces.push_back(j);
	}
	return {{"pieces", pieces},
	        {"torus_count", r.torus_count},
	        {"connected_spherical", r.connected_spherical},
	        {"warnings", r.warnings}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Proper holomorphic maps between Reinhardt domains in C^2", "reinhardt"};
	app.require_subcommand(1);
	Options o;
	app.add_option("--output", o.output, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));

	auto domain = [&](CLI::App* sub, std::string& slot, const char* name) {
		sub->add_option(name, slot, "domain spec file")->required()->check(CLI::ExistingFile);
	};
	auto bound = [&](CLI::App* sub) {
		sub->add_option("--bound", o.bound, "entry bound of the elementary search")->check(CLI::Range(1, 1000));
	};

	auto* classify = app.add_subcommand("classify", "classify proper maps D1 -> D2");
	domain(classify, o.d1, "D1");
	domain(classify, o.d2, "D2");
	bound(classify);

	auto* synth = app.add_subcommand("synthesize", "build a map of one non-elementary family");
	domain(synth, o.d1, "D1");
	domain(synth, o.d2, "D2");
	synth->add_option("case", o.tag, "family tag i..vi")->required()->check(
	    CLI::IsMember({"i", "ii", "iii", "iv", "v", "vi"}));
	synth->add_option("--extras", o.extras, "JSON file with Blaschke zeros, phases, automorphism")
	    ->check(CLI::ExistingFile);

	auto* ver = app.add_subcommand("verify", "numerically verify a map D1 -> D2");
	domain(ver, o.d1, "D1");
	domain(ver, o.d2, "D2");
	ver->add_option("map", o.map, "map JSON file")->required()->check(CLI::ExistingFile);
	ver->add_option("--samples", o.sample.n_interior, "interior samples")->check(CLI::PositiveNumber);
	ver->add_option("--shell-samples", o.sample.shell_samples, "samples per shell")->check(CLI::PositiveNumber);
	ver->add_option("--shells", o.sample.shells, "comma separated margins, decreasing")->delimiter(',');
	ver->add_option("--seed", o.sample.seed, "sampling seed");
	ver->add_option("--tolerance", o.sample.tolerance, "containment tolerance")->check(CLI::NonNegativeNumber);
	ver->add_option("--threads", o.sample.threads, "worker threads")->check(CLI::Range(1u, 256u));

	auto* env = app.add_subcommand("envelope", "envelope of holomorphy");
	domain(env, o.d1, "D");

	auto* bnd = app.add_subcommand("boundary", "boundary decomposition");
	domain(bnd, o.d1, "D");

	auto* self = app.add_subcommand("selfmaps", "proper self-maps that are not automorphisms");
	domain(self, o.d1, "D");
	bound(self);

	std::vector<std::string> rev(args.rbegin(), args.rend());
	try {
		app.parse(rev);
	} catch (const CLI::ParseError& e) {
		int code = app.exit(e, out, err);
		return code == 0 ? kExitOk : kExitInput;
	}

	std::string command = app.get_subcommands().front()->get_name();
	nlohmann::json doc = {{"schema_version", kSchemaVersion}, {"command", command}};
	int code = kExitOk;
	try {
		Outcome r;
		if (command == "classify")
			r = do_classify(o);
		else if (command == "synthesize")
			r = do_synthesize(o);
		else if (command == "verify")
			r = do_verify(o);
		else if (command == "envelope")
			r = do_envelope(o);
		else if (command == "boundary")
			r = do_boundary(o);
		else
			r = do_selfmaps(o);
		doc["result"] = std::move(r.result);
		code = r.code;
	} catch (const ParseError& e) {
		doc["error"] = error_json("parse", e.what());
		code = kExitInput;
	} catch (const std::ios_base::failure& e) {
		doc["error"] = error_json("io", e.what());
		code = kExitInput;
	} catch (const DomainError& e) {
		doc["error"] = error_json("domain", e.what());
		code = kExitInput;
	} catch (const std::exception& e) {
		doc["error"] = error_json("internal", e.what());
		code = kExitInternal;
	}
	if (doc.contains("error"))
		err << "error: " << doc["error"]["message"].get<std::string>() << "\n";
	out << (o.output == "pretty" ? doc.dump(2) : doc.dump()) << "\n";
	return code;
}

} // namespace reinhardt
