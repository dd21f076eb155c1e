#include "doctest.h"

#include "../common/classifier_oracle.hpp"
#include "fixtures.hpp"
#include "reinhardt/classifier.hpp"
#include "reinhardt/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace reinhardt;
using numeric::Rng;

namespace {

DomainSpec dom(const char* text)
{
	return parse_domain(text);
}

std::set<std::string> tags(const std::vector<CaseParams>& cs)
{
	std::set<std::string> out;
	for (const auto& c : cs)
		out.insert(c.tag);
	return out;
}

const CaseParams* find_tag(const std::vector<CaseParams>& cs, const std::string& tag)
{
	for (const auto& c : cs)
		if (c.tag == tag)
			return &c;
	return nullptr;
}

// Random point of D by rejection in the box given by support values.
Point sample(const DomainSpec& D, Rng& rng)
{
	auto P = oracle::prepare(D);
	for (int k = 0; k < 100000; ++k) {
		double x = P.hx - 8.0 * rng.uniform(), y = P.hy - 8.0 * rng.uniform();
		double rz = std::exp(x), rw = std::exp(y);
		if (membership_moduli(D, rz, rw))
			return {std::polar(rz, rng.uniform(0.0, 2 * M_PI)), std::polar(rw, rng.uniform(0.0, 2 * M_PI))};
	}
	FAIL("could not sample the domain");
	return {};
}

std::vector<DomainSpec> classifiable_fixtures()
{
	std::vector<DomainSpec> out;
	for (const auto& name : fixture_names()) {
		auto D = load_fixture(name);
		if (oracle::classifiable(D))
			out.push_back(D);
	}
	return out;
}

} // namespace

TEST_CASE("pullback matches pointwise membership")
{
	Rng rng(11);
	for (int k = 0; k < 40; ++k) {
		DomainSpec D2 = oracle::random_domain(rng);
		ElementaryMap f = oracle::random_map(rng, D2);
		DomainSpec D1 = pullback(D2, f);
		for (int s = 0; s < 200; ++s) {
			double rz = std::exp(rng.uniform(-6.0, 2.0)), rw = std::exp(rng.uniform(-6.0, 2.0));
			Point p{rz, rw};
			Point q = elementary_eval(f, p);
			double a = signed_slack(D1, rz, rw), b = signed_slack(D2, std::abs(q.z), std::abs(q.w));
			if (std::fabs(a) < 1e-9 || std::fabs(b) < 1e-9)
				continue;
			CHECK((a > 0) == (b > 0));
		}
	}
}

TEST_CASE("solve_translation recovers the constants of a pullback")
{
	Rng rng(12);
	int done = 0;
	while (done < 25) {
		DomainSpec D2 = oracle::random_domain(rng);
		ElementaryMap f = oracle::random_map(rng, D2);
		DomainSpec D1 = pullback(D2, f);
		if (!oracle::classifiable(D1))
			continue;
		++done;
		auto t = solve_translation(D1, D2, f.exponents);
		REQUIRE(t.has_value());
		CHECK((*t)[0] == doctest::Approx(std::log(std::abs(f.constants[0]))).epsilon(1e-9));
		CHECK((*t)[1] == doctest::Approx(std::log(std::abs(f.constants[1]))).epsilon(1e-9));
		CHECK(is_proper_elementary(D1, D2, f));
	}
}

TEST_CASE("properness needs the axes to agree")
{
	// same log diagram, but one of them omits the axis
	DomainSpec bidisc = load_fixture("bidisc.dom");
	DomainSpec punctured = dom("mono 1 |z| < 1\nband 0 < 1 |w| < 1\n");
	ElementaryMap id;
	CHECK(is_proper_elementary(bidisc, bidisc, id));
	CHECK_FALSE(is_proper_elementary(punctured, bidisc, id));
	CHECK_FALSE(is_proper_elementary(bidisc, punctured, id));
	// wrong constant
	ElementaryMap off = id;
	off.constants[0] = 1.5;
	CHECK_FALSE(is_proper_elementary(bidisc, bidisc, off));
}

TEST_CASE("goldens")
{
	DomainSpec ball = load_fixture("ball.dom"), bidisc = load_fixture("bidisc.dom");
	DomainSpec e42 = load_fixture("ellipsoid42.dom"), triangle = load_fixture("triangle.dom");

	SUBCASE("ball to bidisc")
	{
		auto r = classify_pair(ball, bidisc, 4);
		CHECK(r.verdict == Verdict::NoProperMap);
		CHECK(r.complete);
		CHECK_FALSE(r.witness.has_value());
		CHECK(r.cases.empty());
	}
	SUBCASE("bidisc to bidisc")
	{
		auto r = classify_pair(bidisc, bidisc, 4);
		CHECK(r.verdict == Verdict::NonElementaryAvailable);
		CHECK(tags(r.cases) == std::set<std::string>{"i", "iii"});
		REQUIRE(r.witness.has_value());
		CHECK(r.witness->exponents == IntMatrix{{{1, 0}, {0, 1}}});
		CHECK(r.complete);
		auto* i = find_tag(r.cases, "i");
		REQUIRE(i);
		CHECK(i->ints.at("b") == Rational(0));
		CHECK(i->ints.at("p1") == Rational(1));
		CHECK(i->ints.at("q1") == Rational(0));
	}
	SUBCASE("ellipsoid to ball")
	{
		auto r = classify_pair(e42, ball, 4);
		CHECK(r.verdict == Verdict::NonElementaryAvailable);
		CHECK(tags(r.cases) == std::set<std::string>{"vi"});
		auto* vi = find_tag(r.cases, "vi");
		REQUIRE(vi);
		CHECK(vi->ints.at("a1") == Rational(2));
		CHECK(vi->ints.at("b1") == Rational(1));
		REQUIRE(r.witness.has_value());
		CHECK(r.witness->exponents == IntMatrix{{{2, 0}, {0, 1}}});
	}
	SUBCASE("triangle self pair")
	{
		auto r = classify_pair(triangle, triangle, 4);
		CHECK(r.verdict == Verdict::NonElementaryAvailable);
		CHECK(tags(r.cases) == std::set<std::string>{"i"});
		auto* i = find_tag(r.cases, "i");
		REQUIRE(i);
		CHECK(i->ints.at("p1") == Rational(1));
		CHECK(i->ints.at("q1") == Rational(-1));
		CHECK(i->ints.at("p2") == Rational(1));
		CHECK(i->ints.at("q2") == Rational(-1));
		// ratio equation q2/p2 = (a q1 - b p1)/(c p1)
		auto a = i->ints.at("a"), b = i->ints.at("b"), c = i->ints.at("c");
		CHECK((a * Rational(-1) - b) == c * Rational(-1));
	}
	SUBCASE("other ellipsoid to ball")
	{
		auto r = classify_pair(dom("sum 1 |z|^2 + 1 |w|^4 < 1"), ball, 4);
		CHECK(r.verdict == Verdict::NonElementaryAvailable);
		auto* vi = find_tag(r.cases, "vi");
		REQUIRE(vi);
		CHECK(vi->ints.at("a1") == Rational(1));
		CHECK(vi->ints.at("b1") == Rational(2));
		CHECK(vi->ints.at("a2") == Rational(1));
		CHECK(vi->ints.at("b2") == Rational(1));
	}
	SUBCASE("ball self pair")
	{
		auto cs = match_case(ball, ball);
		REQUIRE(cs.size() == 1);
		CHECK(cs[0].tag == "vi");
		for (const char* k : {"a1", "b1", "a2", "b2"})
			CHECK(cs[0].ints.at(k) == Rational(1));
	}
}

TEST_CASE("family matches for the model-domain cases")
{
	DomainSpec omega = load_fixture("omega23.dom"), chan = load_fixture("expchannel.dom");
	auto v = match_case(omega, omega);
	REQUIRE(find_tag(v, "v"));
	CHECK(find_tag(v, "v")->form == "first");
	CHECK(find_tag(v, "v")->ints.at("alpha") == Rational(2, 3));
	auto iv = match_case(chan, chan);
	REQUIRE(find_tag(iv, "iv"));
	CHECK(find_tag(iv, "iv")->ints.at("a1") == Rational(1));
	CHECK(find_tag(iv, "iv")->ints.at("b1") == Rational(1));

	DomainSpec f111 = load_fixture("annular_triangle.dom");
	auto ii = match_case(f111, f111);
	REQUIRE(find_tag(ii, "ii"));
	CHECK(find_tag(ii, "ii")->ints.at("c") == Rational(1));
	CHECK_FALSE(find_tag(ii, "ii")->sign_ambiguous);

	// no family: distinct exponent ellipsoids onto a bidisc
	CHECK(match_case(omega, load_fixture("bidisc.dom")).empty());
}

TEST_CASE("case tags survive variable swaps and normalization")
{
	for (const auto& D1 : classifiable_fixtures())
		for (const auto& D2 : classifiable_fixtures()) {
			auto base = tags(match_case(D1, D2));
			CHECK(tags(match_case(normalize(D1), normalize(D2))) == base);
			CHECK(tags(match_case(swap_variables(D1), D2)) == base);
			CHECK(tags(match_case(D1, swap_variables(D2))) == base);
		}
}

TEST_CASE("fixture corpus: families imply elementary witnesses")
{
	for (const auto& D1 : classifiable_fixtures())
		for (const auto& D2 : classifiable_fixtures()) {
			auto r = classify_pair(D1, D2, 4);
			CAPTURE(D1.label);
			CAPTURE(D2.label);
			if (!r.cases.empty()) {
				REQUIRE(r.witness.has_value());
				CHECK(is_proper_elementary(D1, D2, *r.witness));
			}
			if (&D1 == &D2)
				CHECK(r.verdict != Verdict::NoProperMap);
		}
	for (const auto& D : classifiable_fixtures())
		CHECK(classify_pair(D, D, 4).verdict != Verdict::NoProperMap);
}

TEST_CASE("find_elementary agrees with brute force")
{
	auto pairs = oracle::corpus(2024, 20);
	for (const auto& p : pairs) {
		CAPTURE(to_text(p.D1));
		CAPTURE(to_text(p.D2));
		auto search = find_elementary(p.D1, p.D2, 3);
		std::set<IntMatrix> got;
		for (const auto& w : search.witnesses)
			got.insert(w.exponents);
		CHECK(got == oracle::brute_force(p.D1, p.D2, 3));
		if (p.how == "self")
			CHECK(got.count(IntMatrix{{{1, 0}, {0, 1}}}));
		if (p.map)
			CHECK(got.count(p.map->exponents));
	}
}

TEST_CASE("witness order and determinism")
{
	DomainSpec bidisc = load_fixture("bidisc.dom");
	auto s = find_elementary(bidisc, bidisc, 3);
	// z^a w^0 / w^d with a, d in 1..3, and the swapped versions
	REQUIRE(s.witnesses.size() == 18);
	for (const auto& w : s.witnesses) {
		const auto& M = w.exponents;
		CHECK(((M[0][1] == 0 && M[1][0] == 0) || (M[0][0] == 0 && M[1][1] == 0)));
	}
	CHECK(s.witnesses[0].exponents == IntMatrix{{{1, 0}, {0, 1}}});
	CHECK(s.witnesses[1].exponents == IntMatrix{{{0, 1}, {1, 0}}});
	auto again = find_elementary(bidisc, bidisc, 3);
	CHECK(again.witnesses.size() == s.witnesses.size());
}

TEST_CASE("synthesized maps carry sample points into the target")
{
	Rng rng(31);
	struct Item {
		const char* src;
		const char* dst;
		const char* tag;
	};
	const Item items[] = {{"bidisc.dom", "bidisc.dom", "iii"}, {"bidisc.dom", "bidisc.dom", "i"},
	                      {"triangle.dom", "triangle.dom", "i"},    {"annular_triangle.dom", "annular_triangle.dom", "ii"},
	                      {"ellipsoid42.dom", "ball.dom", "vi"}, {"expchannel.dom", "expchannel.dom", "iv"},
	                      {"omega23.dom", "omega23.dom", "v"},   {"ball.dom", "ball.dom", "vi"}};
	for (const auto& it : items) {
		CAPTURE(it.src);
		CAPTURE(it.tag);
		DomainSpec D1 = load_fixture(it.src), D2 = load_fixture(it.dst);
		auto cs = match_case(D1, D2);
		auto* cp = find_tag(cs, it.tag);
		REQUIRE(cp);
		HoloMap f = synthesize(*cp, D1, D2);
		CHECK(structural_issues(f).empty());
		for (int k = 0; k < 300; ++k) {
			Point p = sample(D1, rng);
			Point q = map_eval(f, p);
			CHECK(membership(D2, q));
		}
	}
}

TEST_CASE("synthesize on scaled and swapped domains")
{
	Rng rng(32);
	DomainSpec D1 = dom("sum 3 |z|^2 + 0.5 |w|^4 < 1");
	DomainSpec D2 = dom("sum 2 |z|^2 + 0.7 |w|^(1/2) < 1");
	auto cs = match_case(D1, D2);
	auto* vi = find_tag(cs, "vi");
	REQUIRE(vi);
	HoloMap f = synthesize(*vi, D1, D2);
	for (int k = 0; k < 300; ++k)
		CHECK(membership(D2, map_eval(f, sample(D1, rng))));

	// triangle written with w first
	DomainSpec F = dom("mono 2 |w| |z|^-1 < 1\nband 0 < 1 |z| < 1.5\n");
	auto ci = match_case(F, load_fixture("triangle.dom"));
	auto* i = find_tag(ci, "i");
	REQUIRE(i);
	CHECK(i->swap_source);
	HoloMap g = synthesize(*i, F, load_fixture("triangle.dom"));
	for (int k = 0; k < 300; ++k)
		CHECK(membership(load_fixture("triangle.dom"), map_eval(g, sample(F, rng))));
}

TEST_CASE("synthesize rejects bad extras")
{
	DomainSpec bidisc = load_fixture("bidisc.dom");
	auto* iii = find_tag(match_case(bidisc, bidisc), "iii");
	REQUIRE(iii);
	SynthesisExtras bad;
	bad.blaschke = BlaschkeProduct{{complex(0.0)}, complex(1.0)};
	CHECK_THROWS_AS(synthesize(*iii, bidisc, bidisc, bad), DomainError);
	SynthesisExtras constant;
	constant.blaschke = BlaschkeProduct{{}, complex(1.0)};
	CHECK_THROWS_AS(synthesize(*iii, bidisc, bidisc, constant), DomainError);

	DomainSpec chan = load_fixture("expchannel.dom");
	auto cs = match_case(chan, chan);
	auto* iv = find_tag(cs, "iv");
	REQUIRE(iv);
	SynthesisExtras s0;
	s0.aut = AutD{0.0, 0.0, complex(0.0)};
	CHECK_THROWS_AS(synthesize(*iv, chan, chan, s0), DomainError);
	// parameters for a different pair
	CHECK_THROWS_AS(synthesize(*iv, bidisc, bidisc), DomainError);
}

TEST_CASE("CaseParams JSON round trip")
{
	auto cs = match_case(load_fixture("omega23.dom"), load_fixture("omega23.dom"));
	for (const auto& c : cs) {
		auto back = CaseParams::from_json(c.to_json());
		CHECK(back.tag == c.tag);
		CHECK(back.form == c.form);
		CHECK(back.ints == c.ints);
		CHECK(back.swap_source == c.swap_source);
	}
}

TEST_CASE("self-map analysis")
{
	SUBCASE("bidisc")
	{
		auto r = analyze_self_maps(load_fixture("bidisc.dom"), 4);
		CHECK(r.admits_nonelementary);
		CHECK(r.matched_form == "bidisc");
		bool diag23 = false;
		for (const auto& e : r.elementary)
			if (e.map.exponents == IntMatrix{{{2, 0}, {0, 3}}}) {
				diag23 = true;
				CHECK(std::all_of(e.eigen.begin(), e.eigen.end(), [](bool b) { return b; }));
			}
		CHECK(diag23);
		CHECK(r.asymptotes.size() == 2);
	}
	SUBCASE("triangle")
	{
		auto r = analyze_self_maps(load_fixture("triangle.dom"), 4);
		CHECK(r.admits_nonelementary);
		CHECK(r.matched_form == "triangle");
		CHECK_FALSE(r.elementary.empty());
	}
	SUBCASE("ball")
	{
		auto r = analyze_self_maps(load_fixture("ball.dom"), 4);
		CHECK_FALSE(r.admits_nonelementary);
		CHECK(r.matched_form == "none");
		CHECK(r.elementary.empty());
		CHECK(r.exhaustive);
	}
}

TEST_CASE("preconditions")
{
	CHECK_THROWS_AS(classify_pair(load_fixture("model_d.dom"), load_fixture("ball.dom"), 4), DomainError);
	CHECK_THROWS_AS(classify_pair(load_fixture("hartogs.dom"), load_fixture("ball.dom"), 4), DomainError);
	// a punctured bidisc is a product of domains of holomorphy
	CHECK_NOTHROW(classify_pair(dom("mono 1 |z| < 1\nband 0 < 1 |w| < 1\n"), load_fixture("ball.dom"), 4));
	CHECK_THROWS_AS(find_elementary(load_fixture("ball.dom"), load_fixture("ball.dom"), 0), DomainError);
}
