#include "doctest.h"

#include "fixtures.hpp"
#include "reinhardt/cli.hpp"
#include "reinhardt/holomap.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace reinhardt;
using nlohmann::json;

namespace {

struct Run {
	int code;
	std::string out;
	std::string err;
	json doc() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args)
{
	std::ostringstream out, err;
	int code = run_cli(args, out, err);
	return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content)
{
	auto p = std::filesystem::temp_directory_path() / ("reinhardt_cli_" + name);
	std::ofstream(p) << content;
	return p.string();
}

} // namespace

TEST_CASE("cli classify golden")
{
	auto r = cli({"classify", fixture_path("ball.dom"), fixture_path("bidisc.dom"), "--bound", "4"});
	CHECK(r.code == kExitOk);
	auto d = r.doc();
	CHECK(d["schema_version"] == kSchemaVersion);
	CHECK(d["command"] == "classify");
	CHECK(d["result"]["verdict"] == "NoProperMap");
	CHECK(d["result"]["complete"] == true);
}

TEST_CASE("cli boundary of the ball")
{
	auto r = cli({"boundary", fixture_path("ball.dom")});
	CHECK(r.code == kExitOk);
	auto pieces = r.doc()["result"]["pieces"];
	REQUIRE(pieces.size() == 1);
	CHECK(pieces[0]["kind"] == "spherical");
	CHECK(pieces[0]["model_type"] == 4);
}

TEST_CASE("cli synthesize then verify")
{
	std::string extras = temp_file("extras.json", R"({"blaschke": {"zeros": [0.5]}})");
	auto s = cli({"synthesize", fixture_path("bidisc.dom"), fixture_path("bidisc.dom"), "iii", "--extras", extras});
	REQUIRE(s.code == kExitOk);
	auto map = s.doc()["result"]["map"];
	// round trip through the map reader
	CHECK(to_json(map_from_json(map)) == map);

	std::string path = temp_file("iii.json", s.out);
	std::vector<std::string> args = {"verify", fixture_path("bidisc.dom"), fixture_path("bidisc.dom"), path,
	                                 "--samples", "300", "--seed", "11"};
	auto v = cli(args);
	CHECK(v.code == kExitOk);
	CHECK(v.doc()["result"]["verdict"] == "pass");

	// byte-identical with the same seed, independent of threads
	CHECK(cli(args).out == v.out);
	args.insert(args.end(), {"--threads", "3"});
	CHECK(cli(args).out == v.out);

	std::string bare = temp_file("iii_bare.json", map.dump());
	args[3] = bare;
	CHECK(cli(args).out == v.out);
}

TEST_CASE("cli verification failure")
{
	std::string path = temp_file("grow.json", R"({"type": "elementary", "exponents": [[1, 0], [0, 1]],
	                                              "constants": [2, 1]})");
	auto v = cli({"verify", fixture_path("bidisc.dom"), fixture_path("bidisc.dom"), path, "--samples", "200"});
	CHECK(v.code == kExitVerifyFail);
	auto res = v.doc()["result"];
	CHECK(res["verdict"] == "fail");
	CHECK(res["reasons"].dump().find("containment") != std::string::npos);
}

TEST_CASE("cli envelope and selfmaps")
{
	auto e = cli({"envelope", fixture_path("hartogs.dom")});
	CHECK(e.code == kExitOk);
	CHECK(e.doc()["result"]["changed"] == true);
	CHECK(e.doc()["result"]["added_axes"] == json::array({"z"}));

	auto s = cli({"selfmaps", fixture_path("ball.dom"), "--bound", "4"});
	CHECK(s.code == kExitOk);
	CHECK(s.doc()["result"]["admits_nonelementary_nonbiholomorphic"] == false);
	CHECK(s.doc()["result"]["exhaustive"] == true);

	auto p = cli({"--output", "pretty", "selfmaps", fixture_path("bidisc.dom"), "--bound", "2"});
	CHECK(p.code == kExitOk);
	CHECK(p.out.find("\n  ") != std::string::npos);
	CHECK(p.doc()["result"]["admits_nonelementary_nonbiholomorphic"] == true);
}

TEST_CASE("cli input errors")
{
	CHECK(cli({}).code == kExitInput);
	CHECK(cli({"classify", "/nonexistent.dom", fixture_path("ball.dom")}).code == kExitInput);
	CHECK(cli({"classify", fixture_path("ball.dom"), fixture_path("ball.dom"), "--bound", "0"}).code == kExitInput);
	CHECK(cli({"--output", "xml", "boundary", fixture_path("ball.dom")}).code == kExitInput);
	CHECK(cli({"synthesize", fixture_path("ball.dom"), fixture_path("ball.dom"), "vii"}).code == kExitInput);

	std::string bad = temp_file("bad.dom", "mono 1 |z| <\n");
	auto r = cli({"boundary", bad});
	CHECK(r.code == kExitInput);
	CHECK(r.doc()["error"]["kind"] == "parse");
	CHECK(r.doc()["error"]["message"].get<std::string>().find("line 1") != std::string::npos);

	// no case (iii) from the ball to itself
	auto n = cli({"synthesize", fixture_path("ball.dom"), fixture_path("ball.dom"), "iii"});
	CHECK(n.code == kExitInput);
	CHECK(n.doc()["error"]["kind"] == "domain");

	std::string notjson = temp_file("notjson.json", "{ nope");
	CHECK(cli({"verify", fixture_path("ball.dom"), fixture_path("ball.dom"), notjson}).code == kExitInput);

	CHECK(cli({"--help"}).code == kExitOk);
}
