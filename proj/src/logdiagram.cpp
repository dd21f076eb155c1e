#include "reinhardt/logdiagram.hpp"

#include "reinhardt/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reinhardt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kArcSamples = 8001;
constexpr double kUnboundedLog = 40.0;

double dot(const Rational& a, const Rational& b, double x, double y) { return a.to_double() * x + b.to_double() * y; }

RVec2 primitive(const RVec2& d)
{
	Rational g = rational_gcd(d.x, d.y);
	if (g.is_zero())
		return d;
	return {d.x / g, d.y / g};
}

struct Normal {
	Rational a, b;
};

std::vector<Normal> recession_normals(const std::vector<LogConstraint>& cs)
{
	std::vector<Normal> out;
	for (const auto& c : cs) {
		std::visit(
		    [&](const auto& k) {
			    using T = std::decay_t<decltype(k)>;
			    out.push_back({k.a, k.b});
			    if constexpr (!std::is_same_v<T, LineConstraint>)
				    out.push_back({k.u, k.v});
		    },
		    c);
	}
	return out;
}

bool feasible_direction(const std::vector<Normal>& ns, const RVec2& d)
{
	return std::all_of(ns.begin(), ns.end(), [&](const Normal& n) { return (n.a * d.x + n.b * d.y).sign() <= 0; });
}

void push_unique(std::vector<RVec2>& v, const RVec2& d)
{
	if (std::find(v.begin(), v.end(), d) == v.end())
		v.push_back(d);
}

// Generators of the recession cone {d : n.d <= 0 for all n}. Works for
// pointed cones, half-planes, lines, the plane and {0}.
std::vector<RVec2> cone_generators(const std::vector<Normal>& ns)
{
	std::vector<RVec2> cand;
	if (ns.empty())
		cand = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
	for (const auto& n : ns) {
		cand.push_back(primitive({-n.b, n.a}));
		cand.push_back(primitive({n.b, -n.a}));
		cand.push_back(primitive({-n.a, -n.b}));
	}
	std::vector<RVec2> out;
	for (const auto& d : cand)
		if (feasible_direction(ns, d))
			push_unique(out, d);
	return out;
}

double angle(const RVec2& d) { return std::atan2(d.y.to_double(), d.x.to_double()); }

// Converts the 1D convex condition g(s) < 0, s = d.(x, y), into LINEs.
void interval_lines(const std::function<double(double)>& g, const RVec2& d, std::vector<LogConstraint>& out)
{
	constexpr double span = 1e4;
	auto best = numeric::golden_max([&](double s) { return -g(s); }, -span, span, 1e-14);
	if (!(best.value > 0.0))
		throw DomainError("cell describes an empty region");
	double s0 = best.arg;
	if (g(span) > 0.0) {
		double hi = numeric::bisect([&](double s) { return -g(s); }, s0, span);
		out.push_back(LineConstraint{d.x, d.y, hi});
	}
	if (g(-span) > 0.0) {
		double lo = numeric::bisect([&](double s) { return -g(s); }, s0, -span);
		out.push_back(LineConstraint{-d.x, -d.y, -lo});
	}
}

LineConstraint make_line(const Rational& a, const Rational& b, double c)
{
	Rational g = rational_gcd(a, b);
	return {a / g, b / g, c / g.to_double()};
}

// (e2 = lambda * d) for d primitive along e1; returns lambda.
Rational along(const RVec2& d, const Rational& ex, const Rational& ey) { return d.x.is_zero() ? ey / d.y : ex / d.x; }

void append_constraints(const Inequality& ineq, std::vector<LogConstraint>& out)
{
	if (auto* mo = std::get_if<MonoIneq>(&ineq)) {
		out.push_back(make_line(mo->m.p, mo->m.q, -std::log(mo->m.coeff)));
	} else if (auto* ba = std::get_if<BandIneq>(&ineq)) {
		double lc = std::log(ba->m.coeff);
		out.push_back(make_line(ba->m.p, ba->m.q, std::log(ba->hi) - lc));
		if (ba->lo > 0.0)
			out.push_back(make_line(-ba->m.p, -ba->m.q, lc - std::log(ba->lo)));
	} else if (auto* su = std::get_if<SumIneq>(&ineq)) {
		const Monomial& m1 = su->first;
		const Monomial& m2 = su->second;
		if ((m1.p * m2.q - m1.q * m2.p).is_zero()) {
			RVec2 d = primitive({m1.p, m1.q});
			double l1 = along(d, m1.p, m1.q).to_double(), l2 = along(d, m2.p, m2.q).to_double();
			double c1 = std::log(m1.coeff), c2 = std::log(m2.coeff);
			interval_lines([=](double s) { return numeric::log_sum_exp(c1 + l1 * s, c2 + l2 * s); }, d, out);
			return;
		}
		out.push_back(SumCurveConstraint{m1.coeff, m1.p / 2, m1.q / 2, m2.coeff, m2.p / 2, m2.q / 2});
	} else if (auto* ex = std::get_if<ExpIneq>(&ineq)) {
		const Monomial& m1 = ex->lhs;
		const Monomial& m2 = ex->rate;
		if ((m1.p * m2.q - m1.q * m2.p).is_zero()) {
			RVec2 d = primitive({m1.p, m1.q});
			double l1 = along(d, m1.p, m1.q).to_double(), l2 = along(d, m2.p, m2.q).to_double();
			double c1 = std::log(m1.coeff), E = m2.coeff;
			interval_lines([=](double s) { return c1 + l1 * s + E * numeric::safe_exp(l2 * s); }, d, out);
			return;
		}
		out.push_back(ExpCurveConstraint{m1.p, m1.q, -std::log(m1.coeff), m2.coeff, m2.p / 2, m2.q / 2});
	}
}

// Sinh-spaced samples of [lo, hi]; dense near zero, sparse in the tails.
std::vector<double> parameter_samples(double lo, double hi, int n)
{
	double a = std::asinh(lo), b = std::asinh(hi);
	std::vector<double> ts(static_cast<std::size_t>(n));
	for (int k = 0; k < n; ++k)
		ts[static_cast<std::size_t>(k)] = std::sinh(a + (b - a) * k / (n - 1));
	ts.front() = lo;
	ts.back() = hi;
	return ts;
}

Vec2 solve2(const Rational& a, const Rational& b, const Rational& u, const Rational& v, double r, double s)
{
	// [a b; u v] (x, y) = (r, s)
	double det = (a * v - b * u).to_double();
	return {(r * v.to_double() - b.to_double() * s) / det, (a.to_double() * s - u.to_double() * r) / det};
}

bool is_line(const LogConstraint& c) { return std::holds_alternative<LineConstraint>(c); }

} // namespace

// ---------------------------------------------------------------------------
// Constraints and curves
// ---------------------------------------------------------------------------

double constraint_slack(const LogConstraint& c, double x, double y)
{
	return std::visit(
	    [&](const auto& k) -> double {
		    using T = std::decay_t<decltype(k)>;
		    if constexpr (std::is_same_v<T, LineConstraint>) {
			    return k.c - dot(k.a, k.b, x, y);
		    } else if constexpr (std::is_same_v<T, ExpCurveConstraint>) {
			    return k.c - dot(k.a, k.b, x, y) - k.E * numeric::safe_exp(2.0 * dot(k.u, k.v, x, y));
		    } else {
			    return -numeric::log_sum_exp(std::log(k.C) + 2.0 * dot(k.a, k.b, x, y),
			                                 std::log(k.E) + 2.0 * dot(k.u, k.v, x, y));
		    }
	    },
	    c);
}

std::pair<double, double> parameter_range(const LogConstraint& c)
{
	if (is_line(c))
		return {-1e6, 1e6};
	if (auto* e = std::get_if<ExpCurveConstraint>(&c))
		return {-1e6, 0.5 * (690.0 - std::log(e->E))};
	return {-700.0, 7.0};
}

Vec2 curve_point(const LogConstraint& c, double t)
{
	return std::visit(
	    [&](const auto& k) -> Vec2 {
		    using T = std::decay_t<decltype(k)>;
		    if constexpr (std::is_same_v<T, LineConstraint>) {
			    double a = k.a.to_double(), b = k.b.to_double();
			    double nn = a * a + b * b, len = std::sqrt(nn);
			    return {k.c * a / nn - t * b / len, k.c * b / nn + t * a / len};
		    } else if constexpr (std::is_same_v<T, ExpCurveConstraint>) {
			    double r = k.c - k.E * std::exp(2.0 * t);
			    return solve2(k.a, k.b, k.u, k.v, r, t);
		    } else {
			    double e = std::exp(t);
			    double alpha = -0.5 * std::log(k.C) - e;
			    double beta = 0.5 * std::log(-std::expm1(-2.0 * e) / k.E);
			    return solve2(k.a, k.b, k.u, k.v, alpha, beta);
		    }
	    },
	    c);
}

std::vector<BoundaryArc> boundary_arcs(const std::vector<LogConstraint>& cs)
{
	std::vector<BoundaryArc> arcs;
	for (std::size_t i = 0; i < cs.size(); ++i) {
		auto inside = [&](double t) {
			Vec2 p = curve_point(cs[i], t);
			if (!std::isfinite(p.x) || !std::isfinite(p.y))
				return false;
			for (std::size_t j = 0; j < cs.size(); ++j)
				if (j != i && !(constraint_slack(cs[j], p.x, p.y) > 0.0))
					return false;
			return true;
		};
		auto blocker = [&](double t) {
			Vec2 p = curve_point(cs[i], t);
			std::size_t best = i == 0 ? 1 : 0;
			double lowest = kInf;
			for (std::size_t j = 0; j < cs.size(); ++j) {
				if (j == i)
					continue;
				double s = constraint_slack(cs[j], p.x, p.y);
				if (s < lowest) {
					lowest = s;
					best = j;
				}
			}
			return best;
		};
		auto [lo, hi] = parameter_range(cs[i]);
		auto ts = parameter_samples(lo, hi, kArcSamples);
		std::vector<char> in(ts.size());
		for (std::size_t k = 0; k < ts.size(); ++k)
			in[k] = inside(ts[k]) ? 1 : 0;
		std::size_t k = 0;
		while (k < ts.size()) {
			if (!in[k]) {
				++k;
				continue;
			}
			std::size_t k0 = k;
			while (k < ts.size() && in[k])
				++k;
			std::size_t k1 = k - 1;
			BoundaryArc arc;
			arc.source = i;
			if (k0 == 0) {
				arc.t_start = ts[0];
			} else {
				double out_t = ts[k0 - 1], in_t = ts[k0];
				for (int it = 0; it < 200; ++it) {
					double mid = 0.5 * (out_t + in_t);
					if (mid == out_t || mid == in_t)
						break;
					(inside(mid) ? in_t : out_t) = mid;
				}
				arc.t_start = in_t;
				arc.start_neighbor = blocker(out_t);
			}
			if (k1 == ts.size() - 1) {
				arc.t_end = ts.back();
			} else {
				double in_t = ts[k1], out_t = ts[k1 + 1];
				for (int it = 0; it < 200; ++it) {
					double mid = 0.5 * (out_t + in_t);
					if (mid == out_t || mid == in_t)
						break;
					(inside(mid) ? in_t : out_t) = mid;
				}
				arc.t_end = in_t;
				arc.end_neighbor = blocker(out_t);
			}
			arcs.push_back(arc);
		}
	}
	return arcs;
}

namespace {

std::vector<Vertex> vertices_from_arcs(const std::vector<LogConstraint>& cs, const std::vector<BoundaryArc>& arcs)
{
	std::vector<Vertex> out;
	auto add = [&](std::size_t i, std::size_t j, double t) {
		Vertex v;
		v.first = std::min(i, j);
		v.second = std::max(i, j);
		if (is_line(cs[i]) && is_line(cs[j])) {
			const auto& l1 = std::get<LineConstraint>(cs[v.first]);
			const auto& l2 = std::get<LineConstraint>(cs[v.second]);
			Rational det = l1.a * l2.b - l1.b * l2.a;
			double dd = det.to_double();
			v.point = {(l1.c * l2.b.to_double() - l2.c * l1.b.to_double()) / dd,
			           (l1.a.to_double() * l2.c - l2.a.to_double() * l1.c) / dd};
			v.exact = true;
		} else {
			v.point = curve_point(cs[i], t);
		}
		for (const auto& o : out) {
			if (o.first == v.first && o.second == v.second &&
			    std::hypot(o.point.x - v.point.x, o.point.y - v.point.y) < 1e-6 * (1.0 + std::hypot(v.point.x, v.point.y)))
				return;
		}
		out.push_back(v);
	};
	for (const auto& a : arcs) {
		if (a.start_neighbor)
			add(a.source, *a.start_neighbor, a.t_start);
		if (a.end_neighbor)
			add(a.source, *a.end_neighbor, a.t_end);
	}
	return out;
}

void finish_cell(LogCell& cell)
{
	cell.arcs = boundary_arcs(cell.constraints);
	cell.vertices = vertices_from_arcs(cell.constraints, cell.arcs);
}

void dedupe_lines(std::vector<LogConstraint>& cs)
{
	for (std::size_t i = 0; i < cs.size(); ++i) {
		auto* li = std::get_if<LineConstraint>(&cs[i]);
		if (!li)
			continue;
		for (std::size_t j = i + 1; j < cs.size();) {
			auto* lj = std::get_if<LineConstraint>(&cs[j]);
			if (lj && lj->a == li->a && lj->b == li->b) {
				li->c = std::min(li->c, lj->c);
				cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(j));
			} else {
				++j;
			}
		}
	}
}

} // namespace

double LogCell::slack(double x, double y) const
{
	double s = kInf;
	for (const auto& c : constraints)
		s = std::min(s, constraint_slack(c, x, y));
	return s;
}

const std::vector<LogConstraint>& LogRegion::constraints() const
{
	if (cells.size() != 1)
		throw DomainError("operation requires a single-cell log region");
	return cells.front().constraints;
}

std::vector<Vertex> LogRegion::vertices() const
{
	std::vector<Vertex> out;
	for (const auto& c : cells)
		out.insert(out.end(), c.vertices.begin(), c.vertices.end());
	return out;
}

double LogRegion::slack(double x, double y) const
{
	double s = -kInf;
	for (const auto& c : cells)
		s = std::max(s, c.slack(x, y));
	return s;
}

bool LogRegion::contains(double x, double y) const { return slack(x, y) > 0.0; }

LogCell to_log_cell(const Cell& raw)
{
	Cell cell = normalize_cell(raw);
	LogCell out;
	for (const auto& in : cell.inequalities)
		append_constraints(in, out.constraints);
	dedupe_lines(out.constraints);
	out.meets_z = cell_meets_axis(cell, Axis::Z);
	out.meets_w = cell_meets_axis(cell, Axis::W);
	finish_cell(out);
	return out;
}

LogRegion to_log_region(const DomainSpec& spec)
{
	LogRegion r;
	for (const auto& c : spec.cells)
		r.cells.push_back(to_log_cell(c));
	if (r.cells.empty())
		throw DomainError("empty domain");
	if (r.single_cell()) {
		try {
			r.asymptotes = recession_extreme_rays(r.cells[0].constraints);
		} catch (const DomainError&) {
			r.asymptotes.clear();
		}
	}
	return r;
}

Cell to_spec_cell(const std::vector<LogConstraint>& cs)
{
	Cell cell;
	for (const auto& c : cs) {
		std::visit(
		    [&](const auto& k) {
			    using T = std::decay_t<decltype(k)>;
			    if constexpr (std::is_same_v<T, LineConstraint>) {
				    cell.inequalities.push_back(MonoIneq{Monomial{std::exp(-k.c), k.a, k.b}});
			    } else if constexpr (std::is_same_v<T, ExpCurveConstraint>) {
				    cell.inequalities.push_back(
				        ExpIneq{Monomial{std::exp(-k.c), k.a, k.b}, Monomial{k.E, k.u * 2, k.v * 2}});
			    } else {
				    cell.inequalities.push_back(
				        SumIneq{Monomial{k.C, k.a * 2, k.b * 2}, Monomial{k.E, k.u * 2, k.v * 2}});
			    }
		    },
		    c);
	}
	return cell;
}

// ---------------------------------------------------------------------------
// Boundedness and recession
// ---------------------------------------------------------------------------

namespace {

// Is there a point of the cell with the given log coordinate fixed to K?
bool slice_feasible(const Cell& cell, Axis fixed, double K)
{
	auto f = [&](double eta) {
		double other = std::sinh(eta);
		return fixed == Axis::Z ? cell_log_slack(cell, K, other) : cell_log_slack(cell, other, K);
	};
	return numeric::golden_max(f, -705.0, 705.0, 1e-13).value > 0.0;
}

} // namespace

bool is_bounded(const DomainSpec& spec)
{
	DomainSpec n = normalize(spec);
	for (const auto& c : n.cells)
		if (slice_feasible(c, Axis::Z, kUnboundedLog) || slice_feasible(c, Axis::W, kUnboundedLog))
			return false;
	return true;
}

bool in_recession_cone(const std::vector<LogConstraint>& cs, const RVec2& d)
{
	return feasible_direction(recession_normals(cs), d);
}

std::vector<RVec2> recession_extreme_rays(const std::vector<LogConstraint>& cs)
{
	auto ns = recession_normals(cs);
	std::vector<RVec2> rays;
	for (const auto& n : ns) {
		for (RVec2 d : {primitive({-n.b, n.a}), primitive({n.b, -n.a})})
			if (feasible_direction(ns, d))
				push_unique(rays, d);
	}
	if (ns.empty())
		throw DomainError("log region is the whole plane");
	if (rays.empty())
		throw DomainError("log region is bounded in the plane; no asymptotes");
	for (std::size_t i = 0; i < rays.size(); ++i)
		for (std::size_t j = i + 1; j < rays.size(); ++j)
			if (rays[i].x == -rays[j].x && rays[i].y == -rays[j].y)
				throw DomainError("recession cone of the log region is not pointed");
	if (rays.size() > 2)
		throw DomainError("recession cone of the log region is not pointed");
	std::sort(rays.begin(), rays.end(), [](const RVec2& a, const RVec2& b) { return angle(a) < angle(b); });
	return rays;
}

std::vector<RVec2> asymptote_directions(const LogRegion& region) { return recession_extreme_rays(region.constraints()); }

// ---------------------------------------------------------------------------
// Hull and envelope
// ---------------------------------------------------------------------------

std::optional<Rational> recover_rational(double v, std::int64_t max_den, double tol)
{
	if (!std::isfinite(v))
		return std::nullopt;
	// Continued-fraction convergents.
	double x = v;
	std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
	for (int it = 0; it < 64; ++it) {
		double a = std::floor(x);
		if (std::fabs(a) > 1e15)
			break;
		auto ai = static_cast<std::int64_t>(a);
		std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
		if (q2 > max_den)
			break;
		p0 = p1;
		q0 = q1;
		p1 = p2;
		q1 = q2;
		if (std::fabs(v - static_cast<double>(p1) / static_cast<double>(q1)) <= tol * std::max(1.0, std::fabs(v)))
			return Rational(p1, q1);
		double frac = x - a;
		if (frac < 1e-300)
			break;
		x = 1.0 / frac;
	}
	if (q1 != 0 && std::fabs(v - static_cast<double>(p1) / static_cast<double>(q1)) <= tol * std::max(1.0, std::fabs(v)))
		return Rational(p1, q1);
	return std::nullopt;
}

namespace {

struct HullPoint {
	Vec2 p;
	int ray = -1;  // index into rays for far points
};

double cross(const Vec2& o, const Vec2& a, const Vec2& b)
{
	return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<HullPoint> convex_hull(std::vector<HullPoint> pts)
{
	std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
		return a.p.x < b.p.x || (a.p.x == b.p.x && a.p.y < b.p.y);
	});
	if (pts.size() < 3)
		return pts;
	std::vector<HullPoint> h(2 * pts.size());
	std::size_t k = 0;
	for (const auto& pt : pts) {
		while (k >= 2 && cross(h[k - 2].p, h[k - 1].p, pt.p) <= 0)
			--k;
		h[k++] = pt;
	}
	for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
		const auto& pt = pts[i];
		while (k >= t && cross(h[k - 2].p, h[k - 1].p, pt.p) <= 0)
			--k;
		h[k++] = pt;
	}
	h.resize(k - 1);
	return h;
}

std::optional<RVec2> rational_direction(double dx, double dy)
{
	if (std::fabs(dx) >= std::fabs(dy)) {
		auto r = recover_rational(dy / dx);
		if (!r)
			return std::nullopt;
		RVec2 d{Rational(r->den()), Rational(r->num())};
		if (dx < 0)
			d = {-d.x, -d.y};
		return d;
	}
	auto r = recover_rational(dx / dy);
	if (!r)
		return std::nullopt;
	RVec2 d{Rational(r->num()), Rational(r->den())};
	if (dy < 0)
		d = {-d.x, -d.y};
	return d;
}

Vec2 interior_point(const LogCell& cell)
{
	auto best = numeric::maximize_2d([&](double x, double y) { return std::min(1.0, cell.slack(x, y)); }, -400.0,
	                                 400.0, -400.0, 400.0, 1e-11);
	return {best.x, best.y};
}

bool is_pure_line(const LogCell& c) { return std::all_of(c.constraints.begin(), c.constraints.end(), is_line); }

// Sample points of the closure of `inner` and check they lie in the closure
// of `outer`; the recession cones are compared exactly.
bool cell_contains(const LogCell& outer, const LogCell& inner)
{
	auto outer_normals = recession_normals(outer.constraints);
	for (const auto& d : cone_generators(recession_normals(inner.constraints)))
		if (!feasible_direction(outer_normals, d))
			return false;
	auto ok = [&](const Vec2& p) {
		if (!std::isfinite(p.x) || !std::isfinite(p.y))
			return true;
		return outer.slack(p.x, p.y) >= -1e-9 * (1.0 + std::fabs(p.x) + std::fabs(p.y));
	};
	for (const auto& v : inner.vertices)
		if (!ok(v.point))
			return false;
	for (const auto& a : inner.arcs) {
		for (double t : parameter_samples(a.t_start, a.t_end, 401))
			if (!ok(curve_point(inner.constraints[a.source], t)))
				return false;
	}
	if (inner.arcs.empty())
		return ok(interior_point(inner));
	return true;
}

LogCell polyhedral_hull(const std::vector<const LogCell*>& cells, const std::vector<RVec2>& extra_rays,
                        const LogRegion& raw)
{
	std::vector<Vec2> points;
	std::vector<RVec2> rays = extra_rays;
	for (const LogCell* c : cells) {
		for (const auto& d : cone_generators(recession_normals(c->constraints)))
			push_unique(rays, d);
		if (!c->vertices.empty()) {
			for (const auto& v : c->vertices)
				points.push_back(v.point);
			continue;
		}
		Vec2 p = interior_point(*c);
		points.push_back(p);
		for (const auto& a : c->arcs) {
			const auto& l = std::get<LineConstraint>(c->constraints[a.source]);
			double na = l.a.to_double(), nb = l.b.to_double();
			double k = (l.c - na * p.x - nb * p.y) / (na * na + nb * nb);
			points.push_back({p.x + k * na, p.y + k * nb});
		}
	}
	double extent = 1.0;
	for (const auto& p : points)
		extent = std::max({extent, std::fabs(p.x), std::fabs(p.y)});
	const double far = 1e4 * extent;
	std::vector<HullPoint> all;
	for (const auto& p : points)
		all.push_back({p, -1});
	for (std::size_t r = 0; r < rays.size(); ++r) {
		Vec2 d = rays[r].to_double();
		double len = std::hypot(d.x, d.y);
		for (const auto& p : points)
			all.push_back({{p.x + far * d.x / len, p.y + far * d.y / len}, static_cast<int>(r)});
	}
	auto hull = convex_hull(all);

	LogCell out;
	auto add_line = [&](const RVec2& n) {
		for (const auto& r : rays)
			if ((n.x * r.x + n.y * r.y).sign() > 0)
				return;
		double c = -kInf;
		for (const auto& p : points)
			c = std::max(c, dot(n.x, n.y, p.x, p.y));
		out.constraints.push_back(make_line(n.x, n.y, c));
	};
	for (std::size_t i = 0; i < hull.size(); ++i) {
		const auto& u = hull[i];
		const auto& v = hull[(i + 1) % hull.size()];
		if (u.ray >= 0 && v.ray >= 0)
			continue;
		RVec2 d;
		if (u.ray >= 0 || v.ray >= 0) {
			// Edge along a recession ray: leaving the real points toward
			// infinity, or coming back from it.
			const RVec2& r = rays[static_cast<std::size_t>(u.ray >= 0 ? u.ray : v.ray)];
			d = v.ray >= 0 ? r : RVec2{-r.x, -r.y};
		} else {
			auto rd = rational_direction(v.p.x - u.p.x, v.p.y - u.p.y);
			if (!rd)
				throw NotExpressible("hull edge with irrational slope", raw);
			d = *rd;
		}
		add_line(primitive({d.y, -d.x}));
	}
	dedupe_lines(out.constraints);
	finish_cell(out);
	// Drop lines that carry no boundary arc.
	if (out.arcs.size() < out.constraints.size()) {
		std::vector<LogConstraint> active;
		for (std::size_t i = 0; i < out.constraints.size(); ++i)
			if (std::any_of(out.arcs.begin(), out.arcs.end(), [&](const BoundaryArc& a) { return a.source == i; }))
				active.push_back(out.constraints[i]);
		out.constraints = active;
		finish_cell(out);
	}
	return out;
}

LogRegion hull_impl(const LogRegion& region, const std::vector<RVec2>& extra_rays, int* source_cell)
{
	*source_cell = -1;
	auto covers_rays = [&](const LogCell& c) {
		return std::all_of(extra_rays.begin(), extra_rays.end(),
		                   [&](const RVec2& r) { return in_recession_cone(c.constraints, r); });
	};
	for (std::size_t i = 0; i < region.cells.size(); ++i) {
		const LogCell& c = region.cells[i];
		if (!covers_rays(c))
			continue;
		bool all = true;
		for (std::size_t j = 0; j < region.cells.size() && all; ++j)
			if (j != i)
				all = cell_contains(c, region.cells[j]);
		if (all) {
			*source_cell = static_cast<int>(i);
			LogRegion out;
			out.cells.push_back(c);
			try {
				out.asymptotes = recession_extreme_rays(c.constraints);
			} catch (const DomainError&) {
			}
			return out;
		}
	}
	if (!std::all_of(region.cells.begin(), region.cells.end(), is_pure_line))
		throw NotExpressible("convex hull of curved cells is not expressible in the grammar", region);
	std::vector<const LogCell*> cells;
	for (const auto& c : region.cells)
		cells.push_back(&c);
	LogRegion out;
	out.cells.push_back(polyhedral_hull(cells, extra_rays, region));
	try {
		out.asymptotes = recession_extreme_rays(out.cells[0].constraints);
	} catch (const DomainError&) {
	}
	return out;
}

// Does `after` contain points of the axis that `before` lacks? Checked on a
// log grid of the other coordinate, plus the origin.
bool axis_slice_grows(const DomainSpec& before, const DomainSpec& after, Axis axis)
{
	auto at = [&](const DomainSpec& d, double r) {
		return axis == Axis::Z ? membership_moduli(d, 0.0, r) : membership_moduli(d, r, 0.0);
	};
	if (at(after, 0.0) && !at(before, 0.0))
		return true;
	for (int k = 0; k <= 24000; ++k) {
		double r = std::exp(-60.0 + 0.005 * k);
		if (at(after, r) && !at(before, r))
			return true;
	}
	return false;
}

} // namespace

LogRegion log_convex_hull(const LogRegion& region, const std::vector<RVec2>& extra_rays)
{
	int source = -1;
	LogRegion out = hull_impl(region, extra_rays, &source);
	if (source < 0) {
		Cell sc = to_spec_cell(out.cells[0].constraints);
		out.cells[0].meets_z = cell_meets_axis(sc, Axis::Z);
		out.cells[0].meets_w = cell_meets_axis(sc, Axis::W);
	}
	return out;
}

EnvelopeResult envelope(const DomainSpec& spec)
{
	DomainSpec in = normalize(spec);
	if (!is_bounded(in))
		throw DomainError("envelope requires a bounded domain");
	LogRegion region = to_log_region(in);
	const bool mz = meets_axis(in, Axis::Z), mw = meets_axis(in, Axis::W);
	std::vector<RVec2> extra;
	if (mz)
		extra.push_back({-1, 0});
	if (mw)
		extra.push_back({0, -1});

	EnvelopeResult res;
	int source = -1;
	LogRegion hull = hull_impl(region, extra, &source);
	res.envelope.label = in.label;
	res.envelope.notes = in.notes;
	if (source >= 0) {
		res.envelope.cells.push_back(in.cells[static_cast<std::size_t>(source)]);
		res.changed = in.cells.size() > 1;
	} else {
		Cell cell = to_spec_cell(hull.cells[0].constraints);
		if (!mz && cell_meets_axis(cell, Axis::Z))
			cell.inequalities.push_back(PunctureIneq{Axis::Z});
		if (!mw && cell_meets_axis(cell, Axis::W))
			cell.inequalities.push_back(PunctureIneq{Axis::W});
		res.envelope.cells.push_back(normalize_cell(cell));
		res.changed = true;
	}
	for (Axis a : {Axis::Z, Axis::W})
		if (axis_slice_grows(in, res.envelope, a))
			res.added_axes.push_back(a);
	return res;
}

} // namespace reinhardt
