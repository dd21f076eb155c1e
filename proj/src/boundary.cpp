#include "reinhardt/boundary.hpp"

#include <cmath>

namespace reinhardt {

Vec2 AffineMap::apply(const Vec2& p) const
{
	return {M[0][0].to_double() * p.x + M[0][1].to_double() * p.y + t[0],
	        M[1][0].to_double() * p.x + M[1][1].to_double() * p.y + t[1]};
}

Vec2 AffineMap::apply_inverse(const Vec2& p) const
{
	double d = det().to_double();
	double X = p.x - t[0], Y = p.y - t[1];
	return {(M[1][1].to_double() * X - M[0][1].to_double() * Y) / d,
	        (M[0][0].to_double() * Y - M[1][0].to_double() * X) / d};
}

double model_residual(int type, const Vec2& p)
{
	switch (type) {
	case 1:
		return std::fabs(p.y - p.x * p.x) / (1.0 + std::fabs(p.y));
	case 2:
		return std::fabs(p.y - std::exp(2.0 * p.x)) / (1.0 + std::fabs(p.y));
	case 3:
		return std::fabs(std::cos(p.y) - std::exp(p.x));
	case 4:
		return std::fabs(std::exp(2.0 * p.x) + std::exp(2.0 * p.y) - 1.0);
	default:
		throw DomainError("unknown model type " + std::to_string(type));
	}
}

const char* boundary_kind_name(BoundaryKind k)
{
	switch (k) {
	case BoundaryKind::LeviFlat:
		return "levi_flat";
	case BoundaryKind::Torus:
		return "torus";
	case BoundaryKind::Spherical:
		return "spherical";
	case BoundaryKind::OutOfGrammar:
		return "out_of_grammar";
	}
	return "?";
}

NormalForm spherical_normal_form(const LogConstraint& c)
{
	NormalForm nf;
	if (auto* e = std::get_if<ExpCurveConstraint>(&c)) {
		// X = u.x + ln(E)/2, Y = c - a.x  turns  c - a.x = E e^{2u.x}  into Y = e^{2X}
		nf.type = 2;
		nf.map.M = {{{e->u, e->v}, {-e->a, -e->b}}};
		nf.map.t = {0.5 * std::log(e->E), e->c};
	} else if (auto* s = std::get_if<SumCurveConstraint>(&c)) {
		nf.type = 4;
		nf.map.M = {{{s->a, s->b}, {s->u, s->v}}};
		nf.map.t = {0.5 * std::log(s->C), 0.5 * std::log(s->E)};
		// The model is symmetric in X and Y; keep the orientation positive.
		if (nf.map.det().sign() < 0) {
			std::swap(nf.map.M[0], nf.map.M[1]);
			std::swap(nf.map.t[0], nf.map.t[1]);
		}
	} else {
		throw DomainError("a LINE boundary piece is Levi-flat, not spherical");
	}
	if (nf.map.det().is_zero())
		throw DomainError("singular exponent configuration: the curve is not a spherical model");
	return nf;
}

NormalForm spherical_normal_form(const BoundaryPiece& piece, const LogRegion& region)
{
	if (piece.kind != BoundaryKind::Spherical)
		throw DomainError("normal form requested for a non-spherical piece");
	return spherical_normal_form(region.constraints().at(piece.source));
}

BoundaryReport classify_boundary(const DomainSpec& spec)
{
	DomainSpec n = normalize(spec);
	if (n.cells.size() != 1)
		throw DomainError("boundary classification needs a single-cell domain");
	auto env = envelope(n);
	if (env.changed)
		throw DomainError("domain is not pseudoconvex; take its envelope first");

	BoundaryReport rep;
	rep.region = to_log_region(n);
	const LogCell& cell = rep.region.cells[0];
	std::size_t flat = 0, spherical = 0;
	for (const auto& arc : cell.arcs) {
		BoundaryPiece p;
		p.source = arc.source;
		p.t_start = arc.t_start;
		p.t_end = arc.t_end;
		const auto& c = cell.constraints[arc.source];
		if (std::holds_alternative<LineConstraint>(c)) {
			p.kind = BoundaryKind::LeviFlat;
			++flat;
		} else {
			p.kind = BoundaryKind::Spherical;
			p.normal_form = spherical_normal_form(c);
			p.model_type = p.normal_form->type;
			++spherical;
		}
		rep.pieces.push_back(p);
	}
	for (const auto& v : cell.vertices) {
		BoundaryPiece p;
		p.kind = BoundaryKind::Torus;
		p.source = v.first;
		p.partner = v.second;
		p.point = v.point;
		rep.pieces.push_back(p);
		if (v.exact)
			++rep.torus_count;
	}
	rep.connected_spherical = spherical == 1 && flat == 0 && cell.vertices.empty();
	if (flat > 0 && rep.torus_count > 2)
		rep.warnings.push_back("more than two tori on a boundary with Levi-flat pieces");
	return rep;
}

} // namespace reinhardt
