#include "doctest.h"

#include "fixtures.hpp"
#include "reinhardt/boundary.hpp"

#include <cmath>

using namespace reinhardt;

namespace {

std::size_t count(const BoundaryReport& r, BoundaryKind k)
{
	std::size_t n = 0;
	for (const auto& p : r.pieces)
		n += p.kind == k;
	return n;
}

// Samples of the model curve of the given type, X in [-3, 0.3].
std::vector<Vec2> model_samples(int type)
{
	std::vector<Vec2> out;
	for (int k = 0; k < 50; ++k) {
		double X = -3.0 + 3.3 * k / 49.0;
		if (type == 2)
			out.push_back({X, std::exp(2 * X)});
		else
			out.push_back({std::min(X, -0.01), 0.5 * std::log1p(-std::exp(2 * std::min(X, -0.01)))});
	}
	return out;
}

} // namespace

TEST_CASE("bidisc boundary")
{
	auto r = classify_boundary(load_fixture("bidisc.dom"));
	CHECK(count(r, BoundaryKind::LeviFlat) == 2);
	CHECK(count(r, BoundaryKind::Torus) == 1);
	CHECK(r.torus_count == 1);
	CHECK_FALSE(r.connected_spherical);
}

TEST_CASE("ball boundary")
{
	auto r = classify_boundary(load_fixture("ball.dom"));
	REQUIRE(r.pieces.size() == 1);
	CHECK(r.pieces[0].kind == BoundaryKind::Spherical);
	CHECK(r.pieces[0].model_type == 4);
	CHECK(r.torus_count == 0);
	CHECK(r.connected_spherical);
	auto nf = spherical_normal_form(r.pieces[0], r.region);
	CHECK(nf.map.M[0][0] == Rational(1));
	CHECK(nf.map.M[0][1] == Rational(0));
	CHECK(nf.map.M[1][1] == Rational(1));
	CHECK(nf.map.t[0] == 0.0);
	CHECK(nf.map.t[1] == 0.0);
}

TEST_CASE("exp channel boundary is one spherical piece of type 2")
{
	auto r = classify_boundary(load_fixture("expchannel.dom"));
	REQUIRE(r.pieces.size() == 1);
	CHECK(r.pieces[0].model_type == 2);
	CHECK(r.connected_spherical);
}

TEST_CASE("triangle boundary")
{
	auto r = classify_boundary(load_fixture("triangle.dom"));
	CHECK(count(r, BoundaryKind::LeviFlat) == 2);
	CHECK(r.torus_count == 1);
	auto r2 = classify_boundary(load_fixture("annular_triangle.dom"));
	CHECK(count(r2, BoundaryKind::LeviFlat) == 3);
	CHECK(r2.torus_count == 2);
	CHECK(r2.warnings.empty());
}

TEST_CASE("normal forms")
{
	auto d = to_log_region(load_fixture("model_d.dom"));
	auto nf = spherical_normal_form(d.constraints()[0]);
	CHECK(nf.type == 2);
	CHECK(nf.map.M[0][0] == Rational(1));
	CHECK(nf.map.M[0][1] == Rational(0));
	CHECK(nf.map.M[1][0] == Rational(0));
	CHECK(nf.map.M[1][1] == Rational(1));

	auto om = to_log_region(load_fixture("omega23.dom"));
	auto nfo = spherical_normal_form(om.constraints()[0]);
	CHECK(nfo.type == 4);
	CHECK(nfo.map.M[0][0] == Rational(1));
	CHECK(nfo.map.M[1][1] == Rational(1, 3));
	CHECK(nfo.map.M[0][1] == Rational(0));
	CHECK(nfo.map.M[1][0] == Rational(0));

	auto line = to_log_region(load_fixture("bidisc.dom"));
	CHECK_THROWS_AS(spherical_normal_form(line.constraints()[0]), DomainError);
}

TEST_CASE("normal form round trips on every curved fixture")
{
	for (const char* name : {"ball.dom", "ellipsoid42.dom", "expchannel.dom", "omega23.dom", "model_d.dom"}) {
		CAPTURE(name);
		auto r = to_log_region(load_fixture(name));
		for (const auto& c : r.constraints()) {
			if (std::holds_alternative<LineConstraint>(c))
				continue;
			auto nf = spherical_normal_form(c);
			CHECK((nf.type == 2 || nf.type == 4));
			auto [lo, hi] = parameter_range(c);
			for (int k = 0; k < 50; ++k) {
				double t = std::max(lo, -5.0) + (std::min(hi, 2.0) - std::max(lo, -5.0)) * k / 49.0;
				CHECK(model_residual(nf.type, nf.map.apply(curve_point(c, t))) < 1e-10);
			}
			for (const auto& m : model_samples(nf.type)) {
				Vec2 p = nf.map.apply_inverse(m);
				CHECK(std::fabs(constraint_slack(c, p.x, p.y)) < 1e-10);
			}
		}
	}
}

TEST_CASE("classification preconditions")
{
	CHECK_THROWS_AS(classify_boundary(load_fixture("hartogs.dom")), DomainError);
	CHECK_THROWS_AS(classify_boundary(load_fixture("model_d.dom")), DomainError);
}
