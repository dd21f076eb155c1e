#include "doctest.h"

#include "fixtures.hpp"
#include "reinhardt/errors.hpp"
#include "reinhardt/numeric.hpp"
#include "reinhardt/spec_model.hpp"

#include <cmath>

using namespace reinhardt;

TEST_CASE("parse bidisc and ball")
{
	auto bidisc = parse_domain("mono 1 |z|^1 |w|^0 < 1; mono 1 |z|^0 |w|^1 < 1");
	REQUIRE(bidisc.cells.size() == 1);
	CHECK(bidisc.cells[0].inequalities.size() == 2);
	CHECK(membership(bidisc, {0.5, 0.5}));
	CHECK_FALSE(membership(bidisc, {1.0, 0.5}));

	auto ball = parse_domain("sum 1 |z|^2 + 1 |w|^2 < 1");
	CHECK_FALSE(membership(ball, {1.0, 0.0}));
	CHECK(membership(ball, {0.7, 0.7}));
	CHECK_FALSE(membership(ball, {0.71, 0.71}));
}

TEST_CASE("exp inequality for the unbounded model domain")
{
	auto d = parse_domain("exp 1 |w|^-1 < exp(-1 |z|^2)");
	const auto& e = std::get<ExpIneq>(d.cells[0].inequalities[0]);
	CHECK(e.lhs.q == Rational(-1));
	CHECK(e.rate.p == Rational(2));
	// |w| > exp(|z|^2)
	CHECK(membership(d, {1.0, std::exp(1.0) * 1.01}));
	CHECK_FALSE(membership(d, {1.0, std::exp(1.0) * 0.99}));
	CHECK_FALSE(membership(d, {0.0, 0.0}));
}

TEST_CASE("axis convention")
{
	auto d = load_fixture("triangle.dom");
	CHECK(membership(d, {0.0, 0.5}));
	CHECK_FALSE(membership(d, {0.0, 0.0}));
	CHECK_FALSE(membership(d, {0.3, 0.0}));
	CHECK(membership(d, {0.3, 0.5}));
	CHECK_FALSE(membership(d, {0.6, 0.5}));
}

TEST_CASE("margin")
{
	auto bidisc = load_fixture("bidisc.dom");
	CHECK(margin(bidisc, {0.0, 0.0}) == doctest::Approx(1.0));
	auto ball = load_fixture("ball.dom");
	CHECK(margin(ball, {0.6, 0.0}) == doctest::Approx(0.64));
	double prev = 2.0;
	for (double t : {0.9, 0.99, 0.999, 0.9999}) {
		double m = margin(ball, {t, 0.0});
		CHECK(m > 0.0);
		CHECK(m < prev);
		prev = m;
	}
	CHECK(prev < 1e-3);
	CHECK_THROWS_AS(margin(ball, {1.0, 0.0}), DomainError);
}

TEST_CASE("parse errors carry positions")
{
	try {
		parse_domain("mono 1 |z| < 1\nmono 0 |w| < 1");
		FAIL("expected ParseError");
	} catch (const ParseError& e) {
		CHECK(e.line() == 2);
		CHECK(e.column() == 6);
	}
	CHECK_THROWS_AS(parse_domain("band 2 < 1 |z| < 1"), ParseError);
	CHECK_THROWS_AS(parse_domain("# nothing here\n"), ParseError);
	CHECK_THROWS_AS(parse_domain("mono 1 |z|^(1/0) < 1"), ParseError);
	CHECK_THROWS_AS(parse_domain("mono 1 |z| < "), ParseError);
	CHECK_THROWS_AS(parse_domain("ball 1 |z| < 1"), ParseError);
	CHECK_THROWS_AS(parse_domain("sum 1 |z| + 2 |z| < 1"), ParseError);
	try {
		parse_domain("mono 1 |z| < 1; mono 1 |w| ? 1");
		FAIL("expected ParseError");
	} catch (const ParseError& e) {
		CHECK(e.line() == 1);
		CHECK(e.column() == 28);
	}
}

TEST_CASE("rhs folds into the coefficient")
{
	auto d = parse_domain("mono 3 |z| < 2");
	CHECK(std::get<MonoIneq>(d.cells[0].inequalities[0]).m.coeff == doctest::Approx(1.5));
}

TEST_CASE("normalize reduces exponents")
{
	auto n = normalize(parse_domain("mono 1 |z|^2 |w|^-2 < 1"));
	auto ref = parse_domain("mono 1 |z|^1 |w|^-1 < 1");
	CHECK(n == ref);
	CHECK(to_text(n) == "mono 1 |z|^1 |w|^-1 < 1\n");
}

TEST_CASE("normalize merges a redundant bound into the band")
{
	auto n = normalize(parse_domain("mono 1 |z| |w|^-1 < 1\nband 0.5 < 1 |w| < 1\nmono 1 |w| < 1\nmono 1 |w| < 1"));
	REQUIRE(n.cells[0].inequalities.size() == 2);
	const auto& band = std::get<BandIneq>(n.cells[0].inequalities[1]);
	CHECK(band.lo == doctest::Approx(0.5));
	CHECK(band.hi == doctest::Approx(1.0));

	auto m = normalize(parse_domain("mono 2 |w| < 1; mono 0.25 |w|^-1 < 1"));
	REQUIRE(m.cells[0].inequalities.size() == 1);
	const auto& b2 = std::get<BandIneq>(m.cells[0].inequalities[0]);
	CHECK(b2.lo == doctest::Approx(0.25));
	CHECK(b2.hi == doctest::Approx(0.5));
}

TEST_CASE("normalize flips a band with negative leading exponent")
{
	auto n = normalize(parse_domain("band 0.5 < 1 |z|^-1 < 4"));
	const auto& b = std::get<BandIneq>(n.cells[0].inequalities[0]);
	CHECK(b.m.p == Rational(1));
	CHECK(b.lo == doctest::Approx(0.25));
	CHECK(b.hi == doctest::Approx(2.0));
}

TEST_CASE("normalize detects empty cells")
{
	CHECK_THROWS_AS(normalize(parse_domain("band 0.5 < 1 |z| < 1; mono 3 |z| < 1")), DomainError);
	CHECK_THROWS_AS(normalize(parse_domain("mono 1 |z| < 1; mono 1 |z|^-1 |w|^0 < 1")), DomainError);
	CHECK_THROWS_AS(normalize(parse_domain("sum 1 |z| |w|^-1 + 1 |w| |z|^-1 < 1")), DomainError);
}

TEST_CASE("fixture round trip and idempotence")
{
	for (const auto& name : fixture_names()) {
		CAPTURE(name);
		auto d = load_fixture(name);
		CHECK(parse_domain(to_text(d)) == d);
		auto n = normalize(d);
		CHECK(normalize(n) == n);
		CHECK(parse_domain(to_text(n)) == n);
	}
}

TEST_CASE("membership properties on random probes")
{
	numeric::Rng rng(11);
	for (const auto& name : fixture_names()) {
		CAPTURE(name);
		auto d = load_fixture(name);
		auto n = normalize(d);
		int mismatches = 0;
		for (int k = 0; k < 10000; ++k) {
			double rz = std::exp(rng.uniform(-4.0, 1.5)), rw = std::exp(rng.uniform(-4.0, 1.5));
			if (k % 50 == 0)
				rz = 0.0;
			if (k % 70 == 0)
				rw = 0.0;
			complex z = std::polar(rz, rng.uniform(0, 6.283)), w = std::polar(rw, rng.uniform(0, 6.283));
			bool in = membership(d, {z, w});
			CHECK(in == membership(d, {std::polar(rz, rng.uniform(0, 6.283)), std::polar(rw, rng.uniform(0, 6.283))}));
			if (in != membership(n, {z, w}))
				++mismatches;
			CHECK((signed_slack(d, rz, rw) > 0.0) == in);
		}
		CHECK(mismatches == 0);
	}
}

TEST_CASE("axis meeting")
{
	CHECK(meets_axis(load_fixture("bidisc.dom"), Axis::Z));
	CHECK(meets_axis(load_fixture("triangle.dom"), Axis::Z));
	CHECK_FALSE(meets_axis(load_fixture("triangle.dom"), Axis::W));
	CHECK_FALSE(meets_axis(load_fixture("expchannel.dom"), Axis::W));
	CHECK(meets_axis(load_fixture("expchannel.dom"), Axis::Z));
	CHECK_FALSE(meets_axis(load_fixture("model_d.dom"), Axis::W));
	CHECK(meets_axis(load_fixture("model_d.dom"), Axis::Z));
}

TEST_CASE("swap variables")
{
	auto d = swap_variables(load_fixture("triangle.dom"));
	CHECK(membership(d, {0.5, 0.0}));
	CHECK_FALSE(membership(d, {0.0, 0.5}));
}
