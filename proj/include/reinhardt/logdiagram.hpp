#pragma once

#include "reinhardt/errors.hpp"
#include "reinhardt/rational.hpp"
#include "reinhardt/spec_model.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace reinhardt {

struct Vec2 {
	double x = 0.0;
	double y = 0.0;
};

struct RVec2 {
	Rational x;
	Rational y;
	friend bool operator==(const RVec2&, const RVec2&) = default;
	Vec2 to_double() const { return {x.to_double(), y.to_double()}; }
};

/// a*x + b*y < c with (a, b) a primitive integer vector.
struct LineConstraint {
	Rational a, b;
	double c = 0.0;
};

/// a*x + b*y < c - E*exp(2*(u*x + v*y))
struct ExpCurveConstraint {
	Rational a, b;
	double c = 0.0;
	double E = 1.0;
	Rational u, v;
};

/// C*exp(2*(a*x + b*y)) + E*exp(2*(u*x + v*y)) < 1
struct SumCurveConstraint {
	double C = 1.0;
	Rational a, b;
	double E = 1.0;
	Rational u, v;
};

using LogConstraint = std::variant<LineConstraint, ExpCurveConstraint, SumCurveConstraint>;

/// Positive iff (x, y) satisfies the constraint. Concave in (x, y).
double constraint_slack(const LogConstraint& c, double x, double y);

/// The boundary curve of a constraint, parametrized by t over
/// parameter_range(c). LINE: arclength-like offset along the line;
/// EXPCURVE: s = u.x; SUMCURVE: s = s_max - e^t.
Vec2 curve_point(const LogConstraint& c, double t);
std::pair<double, double> parameter_range(const LogConstraint& c);

/// A maximal piece of a constraint's boundary curve on which every other
/// constraint of the cell holds strictly.
struct BoundaryArc {
	std::size_t source = 0;
	double t_start = 0.0;
	double t_end = 0.0;
	/// The constraint whose boundary ends the arc; nullopt when the arc runs
	/// off to infinity at that end.
	std::optional<std::size_t> start_neighbor;
	std::optional<std::size_t> end_neighbor;
};

struct Vertex {
	Vec2 point;
	std::size_t first = 0;
	std::size_t second = 0;
	/// Both constraints are LINEs; coordinates solved in closed form.
	bool exact = false;
};

struct LogCell {
	std::vector<LogConstraint> constraints;
	std::vector<Vertex> vertices;
	std::vector<BoundaryArc> arcs;
	bool meets_z = false;
	bool meets_w = false;

	double slack(double x, double y) const;
};

/// Logarithmic diagram of a Reinhardt domain: the union of its cells'
/// images under (z, w) -> (ln|z|, ln|w|).
struct LogRegion {
	std::vector<LogCell> cells;
	/// Primitive extreme recession directions (single-cell regions only).
	std::vector<RVec2> asymptotes;

	bool single_cell() const { return cells.size() == 1; }
	const std::vector<LogConstraint>& constraints() const;
	std::vector<Vertex> vertices() const;
	bool contains(double x, double y) const;
	double slack(double x, double y) const;
};

/// Raised when a computed envelope has no representation in the grammar.
class NotExpressible : public DomainError {
public:
	NotExpressible(const std::string& what, LogRegion raw)
	: DomainError(what)
	, raw_(std::move(raw))
	{}
	const LogRegion& raw() const { return raw_; }

private:
	LogRegion raw_;
};

struct EnvelopeResult {
	DomainSpec envelope;
	bool changed = false;
	std::vector<Axis> added_axes;
};

LogCell to_log_cell(const Cell& cell);

/// Log region of a spec; every cell is normalized first.
LogRegion to_log_region(const DomainSpec& spec);

/// Inverse of to_log_cell up to normalization.
Cell to_spec_cell(const std::vector<LogConstraint>& constraints);

/// Boundary arcs of a single convex cell.
std::vector<BoundaryArc> boundary_arcs(const std::vector<LogConstraint>& constraints);

/// True iff the domain is bounded in C^2. Radii are considered unbounded
/// once the diagram reaches ln r = 40.
bool is_bounded(const DomainSpec& spec);

/// Primitive extreme rays of the recession cone of a convex cell. Throws
/// DomainError when the cone is trivial (bounded diagram) or not pointed.
std::vector<RVec2> asymptote_directions(const LogRegion& region);
std::vector<RVec2> recession_extreme_rays(const std::vector<LogConstraint>& constraints);

/// Whether d lies in the recession cone of the cell.
bool in_recession_cone(const std::vector<LogConstraint>& constraints, const RVec2& d);

/// Smallest convex region containing the union of the cells. With
/// `extra_rays` the result is additionally closed under those directions.
LogRegion log_convex_hull(const LogRegion& region, const std::vector<RVec2>& extra_rays = {});

EnvelopeResult envelope(const DomainSpec& spec);

/// Best rational approximation p/q of v with q <= max_den, or nullopt if the
/// error exceeds tol.
std::optional<Rational> recover_rational(double v, std::int64_t max_den = 1000000, double tol = 1e-9);

} // namespace reinhardt
