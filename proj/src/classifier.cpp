#include "reinhardt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace reinhardt {

namespace {

constexpr double kMatchTol = 1e-8;
constexpr double kAxisTol = 1e-9;
constexpr std::size_t kMaxCombos = 200000;
constexpr std::size_t kMaxActive = 8;

// ---------------------------------------------------------------------------
// Canonical boundary constraints
// ---------------------------------------------------------------------------

// A boundary constraint in a form where equal sets have equal data: LINE and
// EXPCURVE scaled so that v is a primitive integer vector.
struct Canon {
	enum Kind { Line, Exp, Sum };
	Kind kind = Line;
	RVec2 v;
	RVec2 u;
	double c = 0.0;
	double C = 1.0;
	double E = 1.0;
};

Canon scaled(Canon k)
{
	if (k.kind == Canon::Sum)
		return k;
	Rational g = rational_gcd(k.v.x, k.v.y);
	if (g.is_zero())
		return k;
	double gd = g.to_double();
	k.v = {k.v.x / g, k.v.y / g};
	k.c /= gd;
	if (k.kind == Canon::Exp)
		k.E /= gd;
	return k;
}

Canon canon(const LogConstraint& c)
{
	Canon k;
	if (auto* l = std::get_if<LineConstraint>(&c)) {
		k.kind = Canon::Line;
		k.v = {l->a, l->b};
		k.c = l->c;
	} else if (auto* e = std::get_if<ExpCurveConstraint>(&c)) {
		k.kind = Canon::Exp;
		k.v = {e->a, e->b};
		k.c = e->c;
		k.E = e->E;
		k.u = {e->u, e->v};
	} else {
		const auto& s = std::get<SumCurveConstraint>(c);
		k.kind = Canon::Sum;
		k.v = {s.a, s.b};
		k.C = s.C;
		k.u = {s.u, s.v};
		k.E = s.E;
	}
	return scaled(k);
}

// Constraints of a single-cell spec that carry a piece of the boundary.
std::vector<Canon> active(const DomainSpec& spec)
{
	LogRegion r = to_log_region(spec);
	if (!r.single_cell())
		throw DomainError("expected a single-cell domain");
	const LogCell& cell = r.cells[0];
	std::vector<bool> used(cell.constraints.size(), false);
	for (const auto& arc : cell.arcs)
		used[arc.source] = true;
	std::vector<Canon> out;
	for (std::size_t i = 0; i < used.size(); ++i)
		if (used[i])
			out.push_back(canon(cell.constraints[i]));
	return out;
}

// M^T v: how a direction of the target diagram reads in source coordinates.
RVec2 transpose_apply(const IntMatrix& M, const RVec2& v)
{
	return {Rational(M[0][0]) * v.x + Rational(M[1][0]) * v.y, Rational(M[0][1]) * v.x + Rational(M[1][1]) * v.y};
}

double dot(const RVec2& v, const std::array<double, 2>& t)
{
	return v.x.to_double() * t[0] + v.y.to_double() * t[1];
}

// Constraint of the target pulled back through x -> M x + t.
Canon pull(const Canon& b, const IntMatrix& M, const std::array<double, 2>& t)
{
	Canon r = b;
	r.v = transpose_apply(M, b.v);
	switch (b.kind) {
	case Canon::Line:
		r.c = b.c - dot(b.v, t);
		break;
	case Canon::Exp:
		r.c = b.c - dot(b.v, t);
		r.E = b.E * std::exp(2.0 * dot(b.u, t));
		r.u = transpose_apply(M, b.u);
		break;
	case Canon::Sum:
		r.C = b.C * std::exp(2.0 * dot(b.v, t));
		r.E = b.E * std::exp(2.0 * dot(b.u, t));
		r.u = transpose_apply(M, b.u);
		break;
	}
	return scaled(r);
}

bool close(double a, double b)
{
	return std::fabs(a - b) <= kMatchTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool close_log(double a, double b)
{
	return std::fabs(std::log(a) - std::log(b)) <= kMatchTol;
}

bool same(const Canon& a, const Canon& b)
{
	if (a.kind != b.kind)
		return false;
	switch (a.kind) {
	case Canon::Line:
		return a.v == b.v && close(a.c, b.c);
	case Canon::Exp:
		return a.v == b.v && a.u == b.u && close(a.c, b.c) && close_log(a.E, b.E);
	case Canon::Sum:
		return (a.v == b.v && a.u == b.u && close_log(a.C, b.C) && close_log(a.E, b.E)) ||
		       (a.v == b.u && a.u == b.v && close_log(a.C, b.E) && close_log(a.E, b.C));
	}
	return false;
}

bool same_sets(const std::vector<Canon>& A, const std::vector<Canon>& B)
{
	if (A.size() != B.size())
		return false;
	std::vector<bool> used(B.size(), false);
	for (const auto& a : A) {
		bool found = false;
		for (std::size_t j = 0; j < B.size() && !found; ++j)
			if (!used[j] && same(a, B[j]))
				used[j] = found = true;
		if (!found)
			return false;
	}
	return true;
}

double mod_pow(double r, std::int64_t e)
{
	if (e == 0)
		return 1.0;
	if (r == 0.0)
		return e > 0 ? 0.0 : std::numeric_limits<double>::infinity();
	return std::pow(r, static_cast<double>(e));
}

// On the axes the log picture says nothing; compare D1 with the preimage
// pointwise along both axes and at the origin.
bool axes_compatible(const DomainSpec& D1, const DomainSpec& D2, const ElementaryMap& f)
{
	const auto& M = f.exponents;
	double k1 = std::abs(f.constants[0]), k2 = std::abs(f.constants[1]);
	auto agree = [&](double rz, double rw) {
		double s1 = signed_slack(D1, rz, rw);
		bool defined = !((rz == 0.0 && (M[0][0] < 0 || M[1][0] < 0)) || (rw == 0.0 && (M[0][1] < 0 || M[1][1] < 0)));
		if (!defined)
			return !(s1 > kAxisTol);
		double R1 = k1 * mod_pow(rz, M[0][0]) * mod_pow(rw, M[0][1]);
		double R2 = k2 * mod_pow(rz, M[1][0]) * mod_pow(rw, M[1][1]);
		double s2 = signed_slack(D2, R1, R2);
		// both near the boundary; an exact zero on one side alone (a band
		// starting at 0) still counts as outside
		if (std::min(std::fabs(s1), std::fabs(s2)) < kAxisTol && std::max(std::fabs(s1), std::fabs(s2)) < 1e-6)
			return true;
		return (s1 > 0.0) == (s2 > 0.0);
	};
	// Off-axis points map off the axes, so axis points of D2 need axis
	// preimages in D1 (otherwise f misses them and is not proper).
	auto inside = [](double s) { return s > -kAxisTol; };
	auto covered = [&](bool target_z_axis, double R) {
		// target (0, R) when target_z_axis, else (R, 0)
		int zero_row = target_z_axis ? 0 : 1, live_row = 1 - zero_row;
		double k_live = target_z_axis ? k2 : k1;
		for (int col = 0; col < 2; ++col) {
			// source point with coordinate `col` zero and the other r > 0
			int other = 1 - col;
			if (M[0][col] < 0 || M[1][col] < 0)
				continue;  // undefined there
			if (M[zero_row][col] <= 0 || M[live_row][col] != 0 || M[live_row][other] == 0)
				continue;
			double r = std::pow(R / k_live, 1.0 / double(M[live_row][other]));
			double s1 = col == 0 ? signed_slack(D1, 0.0, r) : signed_slack(D1, r, 0.0);
			if (inside(s1))
				return true;
		}
		return false;
	};
	auto origin_covered = [&]() {
		bool all_nonneg = M[0][0] >= 0 && M[0][1] >= 0 && M[1][0] >= 0 && M[1][1] >= 0;
		if (all_nonneg && inside(signed_slack(D1, 0.0, 0.0)))
			return true;
		for (int col = 0; col < 2; ++col) {
			if (M[0][col] <= 0 || M[1][col] <= 0)
				continue;
			int other = 1 - col;
			if (M[0][other] < 0 || M[1][other] < 0)
				continue;
			for (int k = 0; k <= 160; ++k) {
				double r = std::exp(-30.0 + 0.25 * k);
				if (inside(col == 0 ? signed_slack(D1, 0.0, r) : signed_slack(D1, r, 0.0)))
					return true;
			}
		}
		return false;
	};
	auto need = [&](double rz, double rw) { return signed_slack(D2, rz, rw) > 1e-6; };

	if (!agree(0.0, 0.0))
		return false;
	if (need(0.0, 0.0) && !origin_covered())
		return false;
	for (int k = 0; k <= 160; ++k) {
		double r = std::exp(-30.0 + 0.25 * k);
		if (!agree(0.0, r) || !agree(r, 0.0))
			return false;
		if (need(0.0, r) && !covered(true, r))
			return false;
		if (need(r, 0.0) && !covered(false, r))
			return false;
	}
	return true;
}

// ---------------------------------------------------------------------------
// Small linear algebra
// ---------------------------------------------------------------------------

// Reduced row echelon form of an augmented system with n unknowns. Returns
// false when inconsistent; pivots[r] is the pivot column of row r.
bool rref(std::vector<std::vector<Rational>>& A, int n, std::vector<int>& pivots)
{
	pivots.clear();
	std::size_t row = 0;
	for (int col = 0; col < n && row < A.size(); ++col) {
		std::size_t p = row;
		while (p < A.size() && A[p][col].is_zero())
			++p;
		if (p == A.size())
			continue;
		std::swap(A[p], A[row]);
		Rational inv = Rational(1) / A[row][col];
		for (auto& x : A[row])
			x *= inv;
		for (std::size_t r = 0; r < A.size(); ++r) {
			if (r == row || A[r][col].is_zero())
				continue;
			Rational f = A[r][col];
			for (int k = 0; k <= n; ++k)
				A[r][k] -= f * A[row][k];
		}
		pivots.push_back(col);
		++row;
	}
	for (std::size_t r = row; r < A.size(); ++r)
		if (!A[r][n].is_zero())
			return false;
	A.resize(row);
	return true;
}

// Least squares via normal equations with partial pivoting. Returns nullopt
// when the columns are (numerically) dependent.
std::optional<std::vector<double>> least_squares(const std::vector<std::vector<double>>& rows,
                                                 const std::vector<double>& rhs, std::size_t n)
{
	std::vector<std::vector<double>> N(n, std::vector<double>(n + 1, 0.0));
	double scale = 0.0;
	for (std::size_t r = 0; r < rows.size(); ++r)
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t j = 0; j < n; ++j)
				N[i][j] += rows[r][i] * rows[r][j];
			N[i][n] += rows[r][i] * rhs[r];
			scale = std::max(scale, std::fabs(rows[r][i]));
		}
	for (std::size_t col = 0; col < n; ++col) {
		std::size_t p = col;
		for (std::size_t r = col + 1; r < n; ++r)
			if (std::fabs(N[r][col]) > std::fabs(N[p][col]))
				p = r;
		if (std::fabs(N[p][col]) <= 1e-10 * std::max(1.0, scale * scale))
			return std::nullopt;
		std::swap(N[p], N[col]);
		for (std::size_t r = 0; r < n; ++r) {
			if (r == col)
				continue;
			double f = N[r][col] / N[col][col];
			for (std::size_t k = col; k <= n; ++k)
				N[r][k] -= f * N[col][k];
		}
	}
	std::vector<double> x(n);
	for (std::size_t i = 0; i < n; ++i)
		x[i] = N[i][n] / N[i][i];
	return x;
}

// ---------------------------------------------------------------------------
// Matchings between boundary constraints
// ---------------------------------------------------------------------------

// Target constraint j is matched to source constraint target[j]; flip swaps
// the two terms of a SUM.
struct Pairing {
	std::vector<std::size_t> target;
	std::vector<bool> flip;
};

void enumerate_pairings(const std::vector<Canon>& A, const std::vector<Canon>& B,
                        const std::function<bool(std::size_t, std::size_t, bool)>& allowed,
                        const std::function<void(const Pairing&)>& emit)
{
	Pairing p;
	p.target.resize(B.size());
	p.flip.resize(B.size());
	std::vector<bool> used(A.size(), false);
	std::function<void(std::size_t)> rec = [&](std::size_t j) {
		if (j == B.size()) {
			emit(p);
			return;
		}
		for (std::size_t i = 0; i < A.size(); ++i) {
			if (used[i] || A[i].kind != B[j].kind)
				continue;
			for (bool flip : {false, true}) {
				if (flip && B[j].kind != Canon::Sum)
					continue;
				if (!allowed(j, i, flip))
					continue;
				used[i] = true;
				p.target[j] = i;
				p.flip[j] = flip;
				rec(j + 1);
				used[i] = false;
			}
		}
	};
	rec(0);
}

// Offset equations for t once the linear part and scale factors are known.
void offset_rows(const Canon& a, const Canon& b, bool flip, double g, std::vector<std::vector<double>>& rows,
                 std::vector<double>& rhs)
{
	auto row = [&](const RVec2& v, double r) {
		rows.push_back({v.x.to_double(), v.y.to_double()});
		rhs.push_back(r);
	};
	switch (b.kind) {
	case Canon::Line:
		row(b.v, b.c - g * a.c);
		break;
	case Canon::Exp:
		row(b.v, b.c - g * a.c);
		row(b.u, 0.5 * std::log(g * a.E / b.E));
		break;
	case Canon::Sum:
		if (!flip) {
			row(b.v, 0.5 * std::log(a.C / b.C));
			row(b.u, 0.5 * std::log(a.E / b.E));
		} else {
			row(b.v, 0.5 * std::log(a.E / b.C));
			row(b.u, 0.5 * std::log(a.C / b.E));
		}
		break;
	}
}

// g with P v_B = g v_A, or nullopt if not a positive multiple.
std::optional<Rational> scale_factor(const RVec2& PvB, const RVec2& vA)
{
	Rational g = !vA.x.is_zero() ? PvB.x / vA.x : PvB.y / vA.y;
	if (g.sign() <= 0 || !(PvB.x == g * vA.x) || !(PvB.y == g * vA.y))
		return std::nullopt;
	return g;
}

std::optional<std::array<double, 2>> translation_for(const std::vector<Canon>& A, const std::vector<Canon>& B,
                                                     const IntMatrix& M, const Pairing& p)
{
	std::vector<std::vector<double>> rows;
	std::vector<double> rhs;
	for (std::size_t j = 0; j < B.size(); ++j) {
		const Canon& a = A[p.target[j]];
		const Canon& b = B[j];
		double g = 1.0;
		if (b.kind != Canon::Sum) {
			auto s = scale_factor(transpose_apply(M, b.v), a.v);
			if (!s)
				return std::nullopt;
			g = s->to_double();
		}
		offset_rows(a, b, p.flip[j], g, rows, rhs);
	}
	auto x = least_squares(rows, rhs, 2);
	if (!x)
		return std::nullopt;
	return std::array<double, 2>{(*x)[0], (*x)[1]};
}

bool directions_fit(const Canon& a, const Canon& b, bool flip, const IntMatrix& M)
{
	RVec2 Pv = transpose_apply(M, b.v);
	switch (b.kind) {
	case Canon::Line:
		return scale_factor(Pv, a.v).has_value();
	case Canon::Exp:
		return scale_factor(Pv, a.v).has_value() && transpose_apply(M, b.u) == a.u;
	case Canon::Sum: {
		RVec2 Pu = transpose_apply(M, b.u);
		return flip ? (Pv == a.u && Pu == a.v) : (Pv == a.v && Pu == a.u);
	}
	}
	return false;
}

bool log_match(const std::vector<Canon>& A, const std::vector<Canon>& B, const IntMatrix& M,
               const std::array<double, 2>& t)
{
	std::vector<Canon> pulled;
	for (const auto& b : B)
		pulled.push_back(pull(b, M, t));
	return same_sets(A, pulled);
}

std::int64_t det(const IntMatrix& M)
{
	return M[0][0] * M[1][1] - M[0][1] * M[1][0];
}

bool witness_less(const ElementaryMap& a, const ElementaryMap& b)
{
	auto da = std::llabs(det(a.exponents)), db = std::llabs(det(b.exponents));
	if (da != db)
		return da < db;
	// larger entries first, so the identity precedes the swap
	return a.exponents > b.exponents;
}

std::int64_t max_entry(const IntMatrix& M)
{
	std::int64_t m = 0;
	for (const auto& row : M)
		for (auto e : row)
			m = std::max<std::int64_t>(m, std::llabs(e));
	return m;
}

// ---------------------------------------------------------------------------
// Shapes of the non-elementary families
// ---------------------------------------------------------------------------

struct Shape {
	enum Kind { None, Bidisc, Final1, Final111, Ellipsoid, PuncturedSum, DType };
	Kind kind = None;
	// triangle/annular_triangle: the monomial exponent (p, q); ellipsoid: P = p, Q = r;
	// punctured sum: z-term (p, q), w-term exponent r; D-type: u = (p, q).
	Rational p, q, r;
	// bidisc: radii C (z) and E (w); triangle/annular_triangle: A|z|^p|w|^q < 1 with
	// E < |w| < C; sums: coefficients C (z-term) and E (w-term); D-type:
	// |w| < C exp(-E ...).
	double A = 1.0, C = 1.0, E = 1.0;
};

bool is_vec(const RVec2& v, std::int64_t x, std::int64_t y)
{
	return v.x == Rational(x) && v.y == Rational(y);
}

Shape recognize(const DomainSpec& spec)
{
	Shape s;
	std::vector<Canon> act = active(spec);
	bool mz = meets_axis(spec, Axis::Z), mw = meets_axis(spec, Axis::W);
	std::size_t lines = 0;
	for (const auto& a : act)
		lines += a.kind == Canon::Line;
	if (lines == act.size()) {
		const Canon *wz = nullptr, *hi = nullptr, *lo = nullptr, *mono = nullptr;
		for (const auto& a : act) {
			if (is_vec(a.v, 1, 0))
				wz = &a;
			if (is_vec(a.v, 0, 1))
				hi = &a;
			else if (is_vec(a.v, 0, -1))
				lo = &a;
			else if (a.v.x.sign() > 0)
				mono = &a;
		}
		if (act.size() == 2 && wz && hi && mz && mw) {
			s.kind = Shape::Bidisc;
			s.C = std::exp(wz->c);
			s.E = std::exp(hi->c);
			return s;
		}
		if (act.size() == 2 && hi && mono && mz && !mw && mono->v.y.sign() <= 0) {
			s.kind = Shape::Final1;
		} else if (act.size() == 3 && hi && lo && mono && mz && !mw) {
			s.kind = Shape::Final111;
			s.E = std::exp(-lo->c);
		} else {
			return s;
		}
		s.p = mono->v.x;
		s.q = mono->v.y;
		s.A = std::exp(-mono->c);
		s.C = std::exp(hi->c);
		return s;
	}
	if (act.size() != 1)
		return s;
	const Canon& a = act[0];
	if (a.kind == Canon::Sum) {
		// identify the pure-w term
		RVec2 zt = a.v, wt = a.u;
		double Cz = a.C, Ew = a.E;
		if (zt.x.is_zero()) {
			std::swap(zt, wt);
			std::swap(Cz, Ew);
		}
		if (!wt.x.is_zero() || wt.y.sign() <= 0 || zt.x.sign() <= 0)
			return s;
		s.C = Cz;
		s.E = Ew;
		s.p = zt.x;
		s.q = zt.y;
		s.r = wt.y;
		if (zt.y.is_zero() && mz && mw)
			s.kind = Shape::Ellipsoid;
		else if (zt.y.sign() <= 0 && mz && !mw)
			s.kind = Shape::PuncturedSum;
		return s;
	}
	if (a.kind == Canon::Exp && is_vec(a.v, 0, 1) && a.u.x.sign() > 0 && a.u.y.sign() <= 0 && !mw) {
		s.kind = Shape::DType;
		s.p = a.u.x;
		s.q = a.u.y;
		s.C = std::exp(a.c);
		s.E = a.E;
	}
	return s;
}

bool positive_integer(const Rational& r)
{
	return r.is_integer() && r.sign() > 0;
}

std::optional<Rational> reciprocal_integer(const Rational& r)
{
	if (r.sign() <= 0)
		return std::nullopt;
	Rational inv = Rational(1) / r;
	if (!inv.is_integer())
		return std::nullopt;
	return inv;
}

// Integers a > 0, c > 0 (or c = c_fixed) and b with
// (a q1 - b p1) p2 = c p1 q2, smallest first.
std::optional<std::array<std::int64_t, 3>> ratio_solution(std::int64_t p1, std::int64_t q1, std::int64_t p2,
                                                          std::int64_t q2, std::optional<std::int64_t> c_fixed,
                                                          bool need_nonpositive)
{
	for (std::int64_t total = 2; total <= 60; ++total)
		for (std::int64_t a = 1; a < total; ++a) {
			std::int64_t c = total - a;
			if (c_fixed) {
				if (a != total - 1)
					continue;
				c = *c_fixed;
			}
			// a q1 - b p1 = c p1 q2 / p2
			std::int64_t num = c * p1 * q2;
			if (num % p2 != 0)
				continue;
			std::int64_t R = num / p2;
			std::int64_t rem = a * q1 - R;
			if (rem % p1 != 0)
				continue;
			std::int64_t b = rem / p1;
			if (need_nonpositive && a * q1 - b * p1 > 0)
				continue;
			return std::array<std::int64_t, 3>{a, b, c};
		}
	return std::nullopt;
}

std::int64_t as_int(const Rational& r)
{
	return r.num() / r.den();
}

std::optional<CaseParams> match_i(const Shape& s1, const Shape& s2)
{
	CaseParams cp;
	cp.tag = "i";
	if (s1.kind == Shape::Bidisc && s2.kind == Shape::Bidisc) {
		cp.form = "bidisc";
		cp.ints = {{"a", 1}, {"b", 0}, {"c", 1}, {"p1", 1}, {"q1", 0}, {"p2", 1}, {"q2", 0}};
		cp.coeffs = {{"A1", 1 / s1.C}, {"C1", s1.E}, {"A2", 1 / s2.C}, {"C2", s2.E}};
		return cp;
	}
	if (s1.kind != Shape::Final1 || s2.kind != Shape::Final1)
		return std::nullopt;
	std::int64_t p1 = as_int(s1.p), q1 = as_int(s1.q), p2 = as_int(s2.p), q2 = as_int(s2.q);
	auto sol = ratio_solution(p1, q1, p2, q2, std::nullopt, true);
	std::array<std::int64_t, 3> abc = sol ? *sol : std::array<std::int64_t, 3>{p1, q1 - q2, p2};
	cp.form = "triangle";
	cp.ints = {{"a", abc[0]}, {"b", abc[1]}, {"c", abc[2]}, {"p1", p1}, {"q1", q1}, {"p2", p2}, {"q2", q2}};
	cp.coeffs = {{"A1", s1.A}, {"C1", s1.C}, {"A2", s2.A}, {"C2", s2.C}};
	return cp;
}

std::optional<CaseParams> match_ii(const Shape& s1, const Shape& s2)
{
	if (s1.kind != Shape::Final111 || s2.kind != Shape::Final111)
		return std::nullopt;
	double rho = std::log(s2.C / s2.E) / std::log(s1.C / s1.E);
	double cabs = std::round(rho);
	if (cabs < 1.0 || std::fabs(rho - cabs) > 1e-9 * std::max(1.0, rho))
		return std::nullopt;
	std::int64_t p1 = as_int(s1.p), q1 = as_int(s1.q), p2 = as_int(s2.p), q2 = as_int(s2.q);
	for (std::int64_t c : {static_cast<std::int64_t>(cabs), -static_cast<std::int64_t>(cabs)}) {
		auto sol = ratio_solution(p1, q1, p2, q2, c, false);
		if (!sol)
			continue;
		CaseParams cp;
		cp.tag = "ii";
		cp.form = "annular_triangle";
		cp.ints = {{"a", (*sol)[0]}, {"b", (*sol)[1]}, {"c", c}, {"p1", p1}, {"q1", q1}, {"p2", p2}, {"q2", q2}};
		cp.coeffs = {{"A1", s1.A}, {"C1", s1.C}, {"E1", s1.E}, {"A2", s2.A}, {"C2", s2.C}, {"E2", s2.E}};
		cp.sign_ambiguous = c < 0;
		return cp;
	}
	return std::nullopt;
}

std::optional<CaseParams> match_iii(const Shape& s1, const Shape& s2)
{
	if (s1.kind != Shape::Bidisc || s2.kind != Shape::Bidisc)
		return std::nullopt;
	CaseParams cp;
	cp.tag = "iii";
	cp.form = "bidisc";
	cp.ints = {{"a", 1}, {"b", 1}};
	cp.coeffs = {{"R1z", s1.C}, {"R1w", s1.E}, {"R2z", s2.C}, {"R2w", s2.E}};
	return cp;
}

std::optional<CaseParams> match_iv(const Shape& s1, const Shape& s2)
{
	if (s1.kind != Shape::DType || s2.kind != Shape::DType)
		return std::nullopt;
	if (!positive_integer(s1.p) || !s1.q.is_integer())
		return std::nullopt;
	auto a2 = reciprocal_integer(s2.p);
	if (!a2)
		return std::nullopt;
	Rational ratio = -s2.q * *a2;  // b2 / c2
	CaseParams cp;
	cp.tag = "iv";
	cp.form = "D";
	cp.ints = {{"a1", s1.p}, {"b1", -s1.q}, {"c1", 1}, {"a2", *a2}, {"b2", ratio.num()}, {"c2", ratio.den()}};
	cp.coeffs = {{"C1", s1.C}, {"E1", s1.E}, {"C2", s2.C}, {"E2", s2.E}};
	return cp;
}

std::optional<CaseParams> match_v(const Shape& s1, const Shape& s2)
{
	bool first = s1.kind == Shape::Ellipsoid && s2.kind == Shape::Ellipsoid;
	bool second = s1.kind == Shape::PuncturedSum && s2.kind == Shape::PuncturedSum;
	if (!first && !second)
		return std::nullopt;
	if (!positive_integer(s1.p) || !s1.q.is_integer())
		return std::nullopt;
	auto a2 = reciprocal_integer(s2.p);
	if (!a2)
		return std::nullopt;
	Rational n = s1.r / s2.r;
	if (!positive_integer(n))
		return std::nullopt;
	for (std::int64_t c1 = 1; c1 <= n.num(); ++c1) {
		if (n.num() % c1 != 0)
			continue;
		std::int64_t c2 = n.num() / c1;
		Rational alpha = Rational(2) * s1.r / Rational(c1);
		Rational b2 = -s2.q * *a2 * Rational(c2);
		if (!b2.is_integer())
			continue;
		CaseParams cp;
		cp.tag = "v";
		cp.form = first ? "first" : "second";
		cp.ints = {{"a1", s1.p}, {"b1", -s1.q}, {"c1", c1}, {"a2", *a2}, {"b2", b2}, {"c2", c2}, {"alpha", alpha}};
		cp.coeffs = {{"C1", s1.C}, {"E1", s1.E}, {"C2", s2.C}, {"E2", s2.E}};
		return cp;
	}
	return std::nullopt;
}

std::optional<CaseParams> match_vi(const Shape& s1, const Shape& s2)
{
	if (s1.kind != Shape::Ellipsoid || s2.kind != Shape::Ellipsoid)
		return std::nullopt;
	if (!positive_integer(s1.p) || !positive_integer(s1.r))
		return std::nullopt;
	auto a2 = reciprocal_integer(s2.p), b2 = reciprocal_integer(s2.r);
	if (!a2 || !b2)
		return std::nullopt;
	CaseParams cp;
	cp.tag = "vi";
	cp.form = "ball";
	cp.ints = {{"a1", s1.p}, {"b1", s1.r}, {"a2", *a2}, {"b2", *b2}};
	cp.coeffs = {{"C1", s1.C}, {"E1", s1.E}, {"C2", s2.C}, {"E2", s2.E}};
	return cp;
}

DomainSpec oriented(const DomainSpec& n, bool swap)
{
	return swap ? normalize(swap_variables(n)) : n;
}

// ---------------------------------------------------------------------------
// Synthesis helpers
// ---------------------------------------------------------------------------

DomainSpec model_spec(ModelDomain model, const Rational& alpha)
{
	Cell cell;
	switch (model) {
	case ModelDomain::D:
		cell.inequalities.push_back(ExpIneq{Monomial{1.0, 0, -1}, Monomial{1.0, 2, 0}});
		break;
	case ModelDomain::Omega:
		cell.inequalities.push_back(SumIneq{Monomial{1.0, 2, 0}, Monomial{1.0, 0, alpha}});
		break;
	case ModelDomain::Ball:
		cell.inequalities.push_back(SumIneq{Monomial{1.0, 2, 0}, Monomial{1.0, 0, 2}});
		break;
	}
	DomainSpec s;
	s.cells.push_back(cell);
	return normalize(s);
}

std::int64_t get_int(const CaseParams& p, const std::string& name)
{
	auto it = p.ints.find(name);
	if (it == p.ints.end())
		throw DomainError("case " + p.tag + " needs parameter '" + name + "'");
	if (!it->second.is_integer())
		throw DomainError("parameter '" + name + "' must be an integer");
	return it->second.num();
}

complex phase(double t)
{
	return std::polar(1.0, t);
}

BlaschkeProduct checked_blaschke(const std::optional<BlaschkeProduct>& b)
{
	BlaschkeProduct out = b ? *b : BlaschkeProduct{{complex(0.5, 0.0)}, complex(1.0)};
	check_blaschke(out);
	if (out.zeros.empty())
		throw DomainError("the Blaschke product must be non-constant");
	if (out.vanishes_at_zero())
		throw DomainError("the Blaschke product must not vanish at 0");
	return out;
}

IntMatrix swap_cols(const IntMatrix& m)
{
	return {{{m[0][1], m[0][0]}, {m[1][1], m[1][0]}}};
}

IntMatrix swap_rows(const IntMatrix& m)
{
	return {{m[1], m[0]}};
}

ElementaryMap fitted(const DomainSpec& from, const DomainSpec& to, const IntMatrix& M, std::array<double, 2> phases,
                     const char* what)
{
	auto t = solve_translation(from, to, M);
	if (!t)
		throw DomainError(std::string("no constants make ") + what + " carry its source onto its target");
	ElementaryMap e = elementary_from_log(M, *t);
	e.constants[0] *= phase(phases[0]);
	e.constants[1] *= phase(phases[1]);
	return e;
}

nlohmann::json rational_json(const Rational& r)
{
	if (r.is_integer())
		return r.num();
	return r.str();
}

nlohmann::json map_matrix_json(const IntMatrix& M)
{
	return {{M[0][0], M[0][1]}, {M[1][0], M[1][1]}};
}

} // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

DomainSpec pullback(const DomainSpec& D, const ElementaryMap& f)
{
	const auto& M = f.exponents;
	double k1 = std::abs(f.constants[0]), k2 = std::abs(f.constants[1]);
	auto tr = [&](const Monomial& m) {
		Monomial r;
		r.coeff = m.coeff * std::pow(k1, m.p.to_double()) * std::pow(k2, m.q.to_double());
		r.p = m.p * Rational(M[0][0]) + m.q * Rational(M[1][0]);
		r.q = m.p * Rational(M[0][1]) + m.q * Rational(M[1][1]);
		return r;
	};
	DomainSpec out;
	out.label = D.label;
	for (const auto& cell : D.cells) {
		Cell c;
		bool pz = M[0][0] < 0 || M[1][0] < 0, pw = M[0][1] < 0 || M[1][1] < 0;
		for (const auto& in : cell.inequalities) {
			if (auto* mo = std::get_if<MonoIneq>(&in)) {
				c.inequalities.push_back(MonoIneq{tr(mo->m)});
			} else if (auto* su = std::get_if<SumIneq>(&in)) {
				c.inequalities.push_back(SumIneq{tr(su->first), tr(su->second)});
			} else if (auto* ex = std::get_if<ExpIneq>(&in)) {
				c.inequalities.push_back(ExpIneq{tr(ex->lhs), tr(ex->rate)});
			} else if (auto* ba = std::get_if<BandIneq>(&in)) {
				c.inequalities.push_back(BandIneq{tr(ba->m), ba->lo, ba->hi});
			} else {
				auto axis = std::get<PunctureIneq>(in).axis;
				const auto& row = M[axis == Axis::Z ? 0 : 1];
				pz = pz || row[0] != 0;
				pw = pw || row[1] != 0;
			}
		}
		if (pz)
			c.inequalities.push_back(PunctureIneq{Axis::Z});
		if (pw)
			c.inequalities.push_back(PunctureIneq{Axis::W});
		out.cells.push_back(c);
	}
	return out;
}

ElementaryMap elementary_from_log(const IntMatrix& M, const std::array<double, 2>& t)
{
	ElementaryMap e;
	e.exponents = M;
	e.constants = {complex(std::exp(t[0])), complex(std::exp(t[1]))};
	return e;
}

DomainSpec require_classifiable(const DomainSpec& spec, const std::string& role)
{
	DomainSpec n = normalize(spec);
	if (n.cells.size() != 1)
		throw DomainError(role + " must be a single cell");
	if (!is_bounded(n))
		throw DomainError(role + " must be bounded");
	if (envelope(n).changed)
		throw DomainError(role + " must be pseudoconvex");
	return n;
}

std::optional<std::array<double, 2>> solve_translation(const DomainSpec& D1, const DomainSpec& D2, const IntMatrix& M)
{
	if (det(M) == 0)
		return std::nullopt;
	auto A = active(normalize(D1));
	auto B = active(normalize(D2));
	if (A.size() != B.size() || A.size() > kMaxActive)
		return std::nullopt;
	std::optional<std::array<double, 2>> found;
	enumerate_pairings(
	    A, B, [&](std::size_t j, std::size_t i, bool flip) { return !found && directions_fit(A[i], B[j], flip, M); },
	    [&](const Pairing& p) {
		    if (found)
			    return;
		    auto t = translation_for(A, B, M, p);
		    if (t && log_match(A, B, M, *t))
			    found = t;
	    });
	return found;
}

bool is_proper_elementary(const DomainSpec& D1, const DomainSpec& D2, const ElementaryMap& f)
{
	if (f.det() == 0)
		return false;
	DomainSpec n1 = normalize(D1), n2 = normalize(D2);
	auto A = active(n1);
	auto B = active(n2);
	std::array<double, 2> t{std::log(std::abs(f.constants[0])), std::log(std::abs(f.constants[1]))};
	return log_match(A, B, f.exponents, t) && axes_compatible(n1, n2, f);
}

ElementarySearch find_elementary(const DomainSpec& D1, const DomainSpec& D2, int bound)
{
	if (bound < 1)
		throw DomainError("search bound must be at least 1");
	ElementarySearch out;
	out.bound = bound;
	DomainSpec n1 = normalize(D1), n2 = normalize(D2);
	auto A = active(n1);
	auto B = active(n2);
	if (A.size() != B.size() || A.empty() || A.size() > kMaxActive) {
		// Affine bijections carry boundary pieces to boundary pieces, so there
		// is nothing to try.
		out.complete = out.exhaustive = !A.empty() && A.size() == B.size() ? false : true;
		return out;
	}

	bool all_certified = true;
	auto try_candidate = [&](const IntMatrix& M, const std::vector<double>& g, const Pairing& p,
	                         bool in_box) -> bool {
		++out.candidates_tested;
		std::vector<std::vector<double>> rows;
		std::vector<double> rhs;
		std::size_t gi = 0;
		for (std::size_t j = 0; j < B.size(); ++j) {
			double gj = B[j].kind == Canon::Sum ? 1.0 : g[gi++];
			offset_rows(A[p.target[j]], B[j], p.flip[j], gj, rows, rhs);
		}
		auto t = least_squares(rows, rhs, 2);
		if (!t)
			return false;
		std::array<double, 2> tt{(*t)[0], (*t)[1]};
		if (!log_match(A, B, M, tt))
			return false;
		ElementaryMap f = elementary_from_log(M, tt);
		if (!axes_compatible(n1, n2, f))
			return false;
		if (in_box) {
			bool dup = false;
			for (const auto& w : out.witnesses)
				dup = dup || w.exponents == M;
			if (!dup)
				out.witnesses.push_back(f);
		} else {
			out.beyond_bound = true;
		}
		return true;
	};

	enumerate_pairings(
	    A, B, [](std::size_t, std::size_t, bool) { return true; },
	    [&](const Pairing& p) {
		    ++out.families;
		    // Unknowns: P = M^T entries (p00, p01, p10, p11), then one scale per
		    // LINE or EXP pair.
		    std::vector<std::size_t> gpair;
		    for (std::size_t j = 0; j < B.size(); ++j)
			    if (B[j].kind != Canon::Sum)
				    gpair.push_back(j);
		    int n = 4 + static_cast<int>(gpair.size());
		    std::vector<std::vector<Rational>> sys;
		    auto equation = [&](const RVec2& vB, int gvar, const RVec2& rhs_or_scaled) {
			    for (int comp = 0; comp < 2; ++comp) {
				    std::vector<Rational> row(static_cast<std::size_t>(n + 1));
				    row[static_cast<std::size_t>(2 * comp)] = vB.x;
				    row[static_cast<std::size_t>(2 * comp + 1)] = vB.y;
				    const Rational& target = comp == 0 ? rhs_or_scaled.x : rhs_or_scaled.y;
				    if (gvar >= 0)
					    row[static_cast<std::size_t>(gvar)] = -target;
				    else
					    row[static_cast<std::size_t>(n)] = target;
				    sys.push_back(row);
			    }
		    };
		    int gv = 4;
		    for (std::size_t j = 0; j < B.size(); ++j) {
			    const Canon& a = A[p.target[j]];
			    const Canon& b = B[j];
			    switch (b.kind) {
			    case Canon::Line:
				    equation(b.v, gv++, a.v);
				    break;
			    case Canon::Exp:
				    equation(b.v, gv++, a.v);
				    equation(b.u, -1, a.u);
				    break;
			    case Canon::Sum:
				    equation(b.v, -1, p.flip[j] ? a.u : a.v);
				    equation(b.u, -1, p.flip[j] ? a.v : a.u);
				    break;
			    }
		    }
		    std::vector<int> piv;
		    if (!rref(sys, n, piv))
			    return;  // directions cannot be matched: family empty
		    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
		    for (int c : piv)
			    is_pivot[static_cast<std::size_t>(c)] = true;
		    std::vector<int> free;
		    for (int c = 0; c < n; ++c)
			    if (!is_pivot[static_cast<std::size_t>(c)])
				    free.push_back(c);

		    auto solution = [&](const std::vector<Rational>& phi) {
			    std::vector<Rational> x(static_cast<std::size_t>(n));
			    for (std::size_t k = 0; k < free.size(); ++k)
				    x[static_cast<std::size_t>(free[k])] = phi[k];
			    for (std::size_t r = 0; r < piv.size(); ++r) {
				    Rational v = sys[r][static_cast<std::size_t>(n)];
				    for (std::size_t k = 0; k < free.size(); ++k)
					    v -= sys[r][static_cast<std::size_t>(free[k])] * phi[k];
				    x[static_cast<std::size_t>(piv[r])] = v;
			    }
			    return x;
		    };
		    // Accepts a solution vector if it gives an integer matrix with
		    // positive scales; returns the matrix and scales.
		    auto realize = [&](const std::vector<Rational>& x, IntMatrix& M, std::vector<double>& g) {
			    for (int k = 0; k < 4; ++k)
				    if (!x[static_cast<std::size_t>(k)].is_integer())
					    return false;
			    for (int k = 4; k < n; ++k)
				    if (x[static_cast<std::size_t>(k)].sign() <= 0)
					    return false;
			    M = {{{x[0].num(), x[2].num()}, {x[1].num(), x[3].num()}}};
			    if (det(M) == 0)
				    return false;
			    g.clear();
			    for (int k = 4; k < n; ++k)
				    g.push_back(x[static_cast<std::size_t>(k)].to_double());
			    return true;
		    };

		    // Ranges of the free unknowns inside the entry box.
		    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
		    bool scale_only = true;
		    std::size_t combos = 1;
		    for (int c : free) {
			    std::pair<std::int64_t, std::int64_t> rg{-bound, bound};
			    if (c >= 4) {
				    const Canon& b = B[gpair[static_cast<std::size_t>(c - 4)]];
				    const Canon& a = A[p.target[gpair[static_cast<std::size_t>(c - 4)]]];
				    Rational cap = Rational(bound) * (abs(b.v.x) + abs(b.v.y)) / std::max(abs(a.v.x), abs(a.v.y));
				    rg = {1, std::max<std::int64_t>(1, cap.num() / cap.den())};
			    } else {
				    scale_only = false;
			    }
			    combos *= static_cast<std::size_t>(rg.second - rg.first + 1);
			    ranges.push_back(rg);
		    }
		    if (combos > kMaxCombos) {
			    all_certified = false;
			    return;
		    }
		    std::vector<Rational> phi(free.size());
		    std::function<void(std::size_t)> sweep = [&](std::size_t k) {
			    if (k == free.size()) {
				    IntMatrix M;
				    std::vector<double> g;
				    if (realize(solution(phi), M, g) && max_entry(M) <= bound)
					    try_candidate(M, g, p, true);
				    return;
			    }
			    for (std::int64_t v = ranges[k].first; v <= ranges[k].second; ++v) {
				    phi[k] = Rational(v);
				    sweep(k + 1);
			    }
		    };
		    sweep(0);

		    if (free.empty()) {
			    IntMatrix M;
			    std::vector<double> g;
			    if (realize(solution({}), M, g) && max_entry(M) > bound)
				    try_candidate(M, g, p, false);
			    return;
		    }
		    if (!scale_only) {
			    all_certified = false;
			    return;
		    }
		    // The free scales enter the LINE and EXP offsets linearly; when
		    // those pin them down the family holds at most one map.
		    std::size_t nv = 2 + free.size();
		    std::vector<std::vector<double>> rows;
		    std::vector<double> rhs;
		    std::vector<Rational> zero(free.size());
		    auto base = solution(zero);
		    for (std::size_t j = 0; j < B.size(); ++j) {
			    const Canon& a = A[p.target[j]];
			    const Canon& b = B[j];
			    if (b.kind == Canon::Sum) {
				    std::vector<std::vector<double>> r2;
				    std::vector<double> h2;
				    offset_rows(a, b, p.flip[j], 1.0, r2, h2);
				    for (std::size_t k = 0; k < r2.size(); ++k) {
					    std::vector<double> row(nv, 0.0);
					    row[0] = r2[k][0];
					    row[1] = r2[k][1];
					    rows.push_back(row);
					    rhs.push_back(h2[k]);
				    }
				    continue;
			    }
			    int var = 4 + static_cast<int>(std::find(gpair.begin(), gpair.end(), j) - gpair.begin());
			    std::vector<double> row(nv, 0.0);
			    row[0] = b.v.x.to_double();
			    row[1] = b.v.y.to_double();
			    // g = base[var] + sum_k phi_k * d g / d phi_k
			    for (std::size_t k = 0; k < free.size(); ++k) {
				    std::vector<Rational> unit(free.size());
				    unit[k] = Rational(1);
				    Rational dg = solution(unit)[static_cast<std::size_t>(var)] - base[static_cast<std::size_t>(var)];
				    row[2 + k] = a.c * dg.to_double();
			    }
			    rows.push_back(row);
			    rhs.push_back(b.c - a.c * base[static_cast<std::size_t>(var)].to_double());
		    }
		    auto sol = least_squares(rows, rhs, nv);
		    if (!sol) {
			    if (out.witnesses.empty())
				    all_certified = false;
			    return;
		    }
		    double resid = 0.0;
		    for (std::size_t r = 0; r < rows.size(); ++r) {
			    double v = -rhs[r];
			    for (std::size_t k = 0; k < nv; ++k)
				    v += rows[r][k] * (*sol)[k];
			    resid = std::max(resid, std::fabs(v));
		    }
		    if (resid > 1e-7)
			    return;
		    std::vector<Rational> phi_star(free.size());
		    for (std::size_t k = 0; k < free.size(); ++k) {
			    double v = (*sol)[2 + k], rv = std::round(v);
			    if (std::fabs(v - rv) > 1e-6 || std::fabs(rv) > 1e12)
				    return;
			    phi_star[k] = Rational(static_cast<std::int64_t>(rv));
		    }
		    IntMatrix M;
		    std::vector<double> g;
		    if (realize(solution(phi_star), M, g) && max_entry(M) > bound)
			    try_candidate(M, g, p, false);
	    });

	std::sort(out.witnesses.begin(), out.witnesses.end(), witness_less);
	out.exhaustive = all_certified;
	out.complete = !out.witnesses.empty() || (all_certified && !out.beyond_bound);
	return out;
}

nlohmann::json CaseParams::to_json() const
{
	nlohmann::json ji = nlohmann::json::object();
	for (const auto& [k, v] : ints)
		ji[k] = rational_json(v);
	nlohmann::json jc = nlohmann::json::object();
	for (const auto& [k, v] : coeffs)
		jc[k] = v;
	return {{"tag", tag},
	        {"form", form},
	        {"swap_source", swap_source},
	        {"swap_target", swap_target},
	        {"params", ji},
	        {"coefficients", jc},
	        {"sign_ambiguous", sign_ambiguous}};
}

CaseParams CaseParams::from_json(const nlohmann::json& j)
{
	CaseParams p;
	p.tag = j.at("tag").get<std::string>();
	p.form = j.value("form", std::string());
	p.swap_source = j.value("swap_source", false);
	p.swap_target = j.value("swap_target", false);
	p.sign_ambiguous = j.value("sign_ambiguous", false);
	if (j.contains("params"))
		for (const auto& [k, v] : j.at("params").items())
			p.ints[k] = v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<std::int64_t>());
	if (j.contains("coefficients"))
		for (const auto& [k, v] : j.at("coefficients").items())
			p.coeffs[k] = v.get<double>();
	return p;
}

std::vector<CaseParams> match_case(const DomainSpec& D1, const DomainSpec& D2)
{
	DomainSpec n1 = normalize(D1), n2 = normalize(D2);
	if (n1.cells.size() != 1 || n2.cells.size() != 1)
		return {};
	std::array<Shape, 2> s1{recognize(n1), recognize(oriented(n1, true))};
	std::array<Shape, 2> s2{recognize(n2), recognize(oriented(n2, true))};
	using Matcher = std::optional<CaseParams> (*)(const Shape&, const Shape&);
	const Matcher matchers[] = {match_i, match_ii, match_iii, match_iv, match_v, match_vi};
	std::vector<CaseParams> out;
	for (Matcher m : matchers) {
		bool done = false;
		for (int a = 0; a < 2 && !done; ++a)
			for (int b = 0; b < 2 && !done; ++b) {
				auto cp = m(s1[a], s2[b]);
				if (!cp)
					continue;
				cp->swap_source = a == 1;
				cp->swap_target = b == 1;
				out.push_back(*cp);
				done = true;
			}
	}
	// Between pseudoellipsoids the Omega route of case v factors through the
	// ball; report the ball case alone.
	bool has_vi = std::any_of(out.begin(), out.end(), [](const CaseParams& c) { return c.tag == "vi"; });
	if (has_vi)
		out.erase(std::remove_if(out.begin(), out.end(),
		                         [](const CaseParams& c) { return c.tag == "v" && c.form == "first"; }),
		          out.end());
	return out;
}

SynthesisExtras SynthesisExtras::from_json(const nlohmann::json& j)
{
	SynthesisExtras e;
	auto blaschke = [](const nlohmann::json& b) {
		BlaschkeProduct out;
		for (const auto& z : b.at("zeros"))
			out.zeros.push_back(complex_from_json(z));
		if (b.contains("unimodular"))
			out.unimodular = complex_from_json(b.at("unimodular"));
		return out;
	};
	try {
		if (j.contains("blaschke"))
			e.blaschke = blaschke(j.at("blaschke"));
		if (j.contains("blaschke2"))
			e.blaschke2 = blaschke(j.at("blaschke2"));
		if (j.contains("phases"))
			e.phases = {j.at("phases").at(0).get<double>(), j.at("phases").at(1).get<double>()};
		if (j.contains("aut")) {
			// reuse the composite reader for the automorphism
			nlohmann::json wrap = {{"type", "composite"},
			                       {"model", "ball"},
			                       {"h", {{"type", "elementary"}, {"exponents", {{1, 0}, {0, 1}}}}},
			                       {"g", {{"type", "elementary"}, {"exponents", {{1, 0}, {0, 1}}}}},
			                       {"mid", j.at("aut")}};
			e.aut = std::get<CompositeMap>(map_from_json(wrap)).mid;
		}
	} catch (const nlohmann::json::exception& ex) {
		throw DomainError(std::string("malformed extras: ") + ex.what());
	}
	return e;
}

HoloMap synthesize(const CaseParams& params, const DomainSpec& D1, const DomainSpec& D2, const SynthesisExtras& extras)
{
	DomainSpec n1 = normalize(D1), n2 = normalize(D2);
	DomainSpec o1 = oriented(n1, params.swap_source), o2 = oriented(n2, params.swap_target);
	Shape s1 = recognize(o1), s2 = recognize(o2);
	auto mismatch = [&]() { return DomainError("case " + params.tag + " does not fit this pair of domains"); };
	const std::string& tag = params.tag;

	if (tag == "i" || tag == "ii" || tag == "iii") {
		BlaschkeMonomialMap m;
		m.swap_variables = params.swap_source;
		m.swap_components = params.swap_target;
		m.blaschke = checked_blaschke(extras.blaschke);
		if (tag == "iii") {
			if (s1.kind != Shape::Bidisc || s2.kind != Shape::Bidisc)
				throw mismatch();
			m.kase = BlaschkeCase::III;
			m.a = get_int(params, "a");
			m.b = get_int(params, "b");
			if (m.a < 0 || m.b < 0)
				throw DomainError("case iii needs a >= 0 and b >= 0");
			m.blaschke2 = checked_blaschke(extras.blaschke2 ? extras.blaschke2 : extras.blaschke);
			m.A1 = 1.0 / s1.C;
			m.C = 1.0 / s1.E;
			m.constants = {s2.C / std::pow(s1.C, double(m.a)) * phase(extras.phases[0]),
			               s2.E / std::pow(s1.E, double(m.b)) * phase(extras.phases[1])};
			return m;
		}
		m.kase = tag == "i" ? BlaschkeCase::I : BlaschkeCase::II;
		m.a = get_int(params, "a");
		m.b = get_int(params, "b");
		m.c = get_int(params, "c");
		m.p1 = get_int(params, "p1");
		m.q1 = get_int(params, "q1");
		std::int64_t p2 = get_int(params, "p2"), q2 = get_int(params, "q2");
		double A1, C1, A2, C2, E1 = 0.0;
		if (tag == "i" && s1.kind == Shape::Bidisc && s2.kind == Shape::Bidisc) {
			A1 = 1.0 / s1.C;
			C1 = s1.E;
			A2 = 1.0 / s2.C;
			C2 = s2.E;
		} else {
			Shape::Kind want = tag == "i" ? Shape::Final1 : Shape::Final111;
			if (s1.kind != want || s2.kind != want)
				throw mismatch();
			A1 = s1.A;
			C1 = s1.C;
			E1 = s1.E;
			A2 = s2.A;
			C2 = s2.C;
		}
		if (m.p1 != as_int(s1.kind == Shape::Bidisc ? Rational(1) : s1.p) ||
		    m.q1 != as_int(s1.kind == Shape::Bidisc ? Rational(0) : s1.q))
			throw DomainError("p1, q1 do not match the source domain");
		if ((m.a * m.q1 - m.b * m.p1) * p2 != m.c * m.p1 * q2)
			throw DomainError("exponents violate q2/p2 = (a q1 - b p1)/(c p1)");
		if (m.c == 0 || m.a <= 0)
			throw DomainError("case " + tag + " needs a > 0 and c != 0");
		m.A1 = A1;
		double K2 = (m.c > 0 || tag == "i") ? C2 / std::pow(C1, double(m.c)) : C2 / std::pow(E1, double(m.c));
		double K1 = std::pow(std::pow(A1, double(m.a * p2) / double(m.p1)) / (A2 * std::pow(K2, double(q2))), 1.0 / double(p2));
		m.constants = {K1 * phase(extras.phases[0]), K2 * phase(extras.phases[1])};
		auto issues = structural_issues(m);
		if (!issues.empty())
			throw DomainError(issues.front());
		return m;
	}

	CompositeMap c;
	IntMatrix h, g;
	Rational alpha(2);
	if (tag == "iv") {
		if (s1.kind != Shape::DType || s2.kind != Shape::DType)
			throw mismatch();
		c.model = ModelDomain::D;
		h = {{{get_int(params, "a1"), -get_int(params, "b1")}, {0, -get_int(params, "c1")}}};
		g = {{{get_int(params, "a2"), -get_int(params, "b2")}, {0, -get_int(params, "c2")}}};
		AutD f;
		if (extras.aut) {
			auto* d = std::get_if<AutD>(&*extras.aut);
			if (!d)
				throw DomainError("case iv needs an automorphism of D");
			f = *d;
		}
		if (f.s == 0.0)
			throw DomainError("the automorphism of D needs s != 0");
		c.mid = f;
	} else if (tag == "v") {
		bool first = s1.kind == Shape::Ellipsoid && s2.kind == Shape::Ellipsoid;
		bool second = s1.kind == Shape::PuncturedSum && s2.kind == Shape::PuncturedSum;
		if (!first && !second)
			throw mismatch();
		c.model = ModelDomain::Omega;
		auto it = params.ints.find("alpha");
		if (it == params.ints.end() || it->second.sign() <= 0)
			throw DomainError("case v needs a positive rational alpha");
		alpha = it->second;
		h = {{{get_int(params, "a1"), -get_int(params, "b1")}, {0, get_int(params, "c1")}}};
		g = {{{get_int(params, "a2"), get_int(params, "b2")}, {0, get_int(params, "c2")}}};
		AutOmega f;
		f.alpha = alpha;
		if (extras.aut) {
			auto* o = std::get_if<AutOmega>(&*extras.aut);
			if (!o)
				throw DomainError("case v needs an automorphism of Omega");
			f.a = o->a;
			f.t1 = o->t1;
			f.t2 = o->t2;
		}
		if (f.a == 0.0 || !(std::abs(f.a) < 1.0))
			throw DomainError("the automorphism of Omega needs 0 < |a| < 1");
		c.mid = f;
	} else if (tag == "vi") {
		if (s1.kind != Shape::Ellipsoid || s2.kind != Shape::Ellipsoid)
			throw mismatch();
		c.model = ModelDomain::Ball;
		h = {{{get_int(params, "a1"), 0}, {0, get_int(params, "b1")}}};
		g = {{{get_int(params, "a2"), 0}, {0, get_int(params, "b2")}}};
		AutBall f;
		if (extras.aut) {
			auto* b = std::get_if<AutBall>(&*extras.aut);
			if (!b)
				throw DomainError("case vi needs a ball automorphism");
			f = *b;
		} else {
			double r = 1.0 / std::sqrt(2.0);
			f.U = {{{complex(r), complex(r)}, {complex(-r), complex(r)}}};
		}
		auto [lz, lw] = ball_axis_conditions(f);
		if (!lz || !lw)
			throw DomainError("the ball automorphism maps a coordinate slice into the axes");
		c.mid = f;
	} else {
		throw DomainError("unknown case tag '" + tag + "'");
	}
	if (params.swap_source)
		h = swap_cols(h);
	if (params.swap_target)
		g = swap_rows(g);
	DomainSpec model = model_spec(c.model, alpha);
	c.h = fitted(n1, model, h, {0.0, 0.0}, "h");
	c.g = fitted(model, n2, g, extras.phases, "g");
	auto issues = structural_issues(c);
	if (!issues.empty())
		throw DomainError(issues.front());
	return c;
}

const char* verdict_name(Verdict v)
{
	switch (v) {
	case Verdict::NoProperMap:
		return "NoProperMap";
	case Verdict::ElementaryOnly:
		return "ElementaryOnly";
	case Verdict::NonElementaryAvailable:
		return "NonElementaryAvailable";
	case Verdict::Unknown:
		return "Unknown";
	}
	return "?";
}

nlohmann::json ClassificationResult::to_json() const
{
	nlohmann::json cs = nlohmann::json::array();
	for (const auto& c : cases)
		cs.push_back(c.to_json());
	return {{"verdict", verdict_name(verdict)},
	        {"witness", witness ? reinhardt::to_json(HoloMap(*witness)) : nlohmann::json(nullptr)},
	        {"cases", cs},
	        {"search_bound_used", search_bound_used},
	        {"complete", complete},
	        {"certificate", certificate},
	        {"notes", notes}};
}

ClassificationResult classify_pair(const DomainSpec& D1, const DomainSpec& D2, int bound)
{
	DomainSpec n1 = require_classifiable(D1, "source domain");
	DomainSpec n2 = require_classifiable(D2, "target domain");
	ClassificationResult r;
	r.search_bound_used = bound;
	auto search = find_elementary(n1, n2, bound);
	r.complete = search.complete;
	r.witness = search.best();
	r.cases = match_case(n1, n2);
	for (const auto& c : r.cases)
		if (c.sign_ambiguous)
			r.notes.push_back("case " + c.tag + " uses c < 0; the target orientation is not spelled out for that sign");
	if (r.witness) {
		r.verdict = r.cases.empty() ? Verdict::ElementaryOnly : Verdict::NonElementaryAvailable;
	} else if (search.complete) {
		r.verdict = Verdict::NoProperMap;
		r.certificate = "all " + std::to_string(search.families) +
		                " type-compatible boundary matchings were solved exactly and none yields an elementary "
		                "proper map; without one no proper map exists";
	} else {
		r.verdict = Verdict::Unknown;
		r.notes.push_back(search.beyond_bound ? "an elementary map exists with exponents beyond the bound"
		                                      : "search inconclusive at this bound");
		if (!r.cases.empty())
			r.notes.push_back("a family matched but no elementary witness was found within the bound");
	}
	return r;
}

nlohmann::json rvec_to_json(const RVec2& v)
{
	return {rational_json(v.x), rational_json(v.y)};
}

nlohmann::json SelfMapReport::to_json() const
{
	nlohmann::json as = nlohmann::json::array();
	for (const auto& a : asymptotes)
		as.push_back(rvec_to_json(a));
	nlohmann::json el = nlohmann::json::array();
	for (const auto& e : elementary)
		el.push_back({{"map", reinhardt::to_json(HoloMap(e.map))}, {"exponents", map_matrix_json(e.map.exponents)}, {"eigen", e.eigen}});
	return {{"admits_nonelementary_nonbiholomorphic", admits_nonelementary},
	        {"matched_form", matched_form},
	        {"asymptotes", as},
	        {"elementary_self_maps", el},
	        {"exhaustive", exhaustive},
	        {"bound", bound}};
}

SelfMapReport analyze_self_maps(const DomainSpec& D, int bound)
{
	DomainSpec n = require_classifiable(D, "domain");
	SelfMapReport rep;
	rep.bound = bound;
	for (bool swap : {false, true}) {
		Shape s = recognize(oriented(n, swap));
		if (rep.matched_form != "none")
			break;
		if (s.kind == Shape::Bidisc)
			rep.matched_form = "bidisc";
		else if (s.kind == Shape::Final1)
			rep.matched_form = "triangle";
		else if (s.kind == Shape::Final111)
			rep.matched_form = "annular_triangle";
	}
	rep.admits_nonelementary = rep.matched_form != "none";
	rep.asymptotes = to_log_region(n).asymptotes;

	auto search = find_elementary(n, n, bound);
	rep.exhaustive = search.exhaustive && !search.beyond_bound;
	for (const auto& w : search.witnesses) {
		if (std::llabs(w.det()) < 2)
			continue;
		ElementarySelfMap e{w, {}};
		const auto& M = w.exponents;
		IntMatrix M2;
		for (int i = 0; i < 2; ++i)
			for (int j = 0; j < 2; ++j)
				M2[i][j] = M[i][0] * M[0][j] + M[i][1] * M[1][j];
		auto eigen = [](const IntMatrix& A, const RVec2& d) {
			Rational x = Rational(A[0][0]) * d.x + Rational(A[0][1]) * d.y;
			Rational y = Rational(A[1][0]) * d.x + Rational(A[1][1]) * d.y;
			return (x * d.y - y * d.x).is_zero();
		};
		for (const auto& d : rep.asymptotes)
			e.eigen.push_back(eigen(M, d) || eigen(M2, d));
		rep.elementary.push_back(e);
	}
	return rep;
}

} // namespace reinhardt
