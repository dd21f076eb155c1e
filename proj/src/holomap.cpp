#include "reinhardt/holomap.hpp"

#include <cmath>
#include <numeric>

namespace reinhardt {

namespace {

constexpr double kMidTolerance = 1e-9;

complex ipow(complex base, std::int64_t e)
{
	if (e == 0)
		return 1.0;
	if (base == 0.0) {
		if (e < 0)
			throw EvalError("negative exponent at a zero coordinate");
		return 0.0;
	}
	bool invert = e < 0;
	std::uint64_t n = invert ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
	complex result = 1.0;
	while (n) {
		if (n & 1)
			result *= base;
		base *= base;
		n >>= 1;
	}
	return invert ? 1.0 / result : result;
}

complex monomial(complex z, complex w, std::int64_t p, std::int64_t q)
{
	return ipow(z, p) * ipow(w, q);
}

complex cis(double t)
{
	return std::polar(1.0, t);
}

Point swap(const Point& p)
{
	return {p.w, p.z};
}

Point blaschke_monomial_eval(const BlaschkeMonomialMap& m, Point p)
{
	if (m.swap_variables)
		p = swap(p);
	Point out;
	if (m.kase == BlaschkeCase::III) {
		out.z = m.constants[0] * ipow(p.z, m.a) * blaschke_eval(m.blaschke, m.A1 * p.z);
		out.w = m.constants[1] * ipow(p.w, m.b) * blaschke_eval(m.blaschke2, m.C * p.w);
	} else {
		complex arg = m.A1 * monomial(p.z, p.w, m.p1, m.q1);
		out.z = m.constants[0] * monomial(p.z, p.w, m.a, m.b) * blaschke_eval(m.blaschke, arg);
		out.w = m.constants[1] * ipow(p.w, m.c);
	}
	return m.swap_components ? swap(out) : out;
}

Point aut_d_eval(const AutD& f, const Point& p)
{
	complex e1 = cis(f.t1);
	return {e1 * p.z + f.s, cis(f.t2) * std::exp(2.0 * std::conj(f.s) * e1 * p.z + std::norm(f.s)) * p.w};
}

Point aut_omega_eval(const AutOmega& f, const Point& p)
{
	double alpha = f.alpha.to_double();
	complex denom = 1.0 - std::conj(f.a) * p.z;
	// |conj(a) z| < 1 on the domain, so denom has positive real part and the
	// principal logarithm is continuous there.
	complex scale = std::pow(1.0 - std::norm(f.a), 1.0 / alpha) * std::exp(-(2.0 / alpha) * std::log(denom));
	return {cis(f.t1) * (p.z - f.a) / denom, cis(f.t2) * scale * p.w};
}

Point aut_ball_eval(const AutBall& f, const Point& p)
{
	complex v0 = p.z, v1 = p.w;
	double na = std::norm(f.a[0]) + std::norm(f.a[1]);
	if (na > 0.0) {
		// phi_a(v) = (a - P_a v - s_a Q_a v) / (1 - <v, a>)
		complex inner = v0 * std::conj(f.a[0]) + v1 * std::conj(f.a[1]);
		complex P0 = inner / na * f.a[0], P1 = inner / na * f.a[1];
		double sa = std::sqrt(1.0 - na);
		complex denom = 1.0 - inner;
		complex r0 = (f.a[0] - P0 - sa * (v0 - P0)) / denom;
		complex r1 = (f.a[1] - P1 - sa * (v1 - P1)) / denom;
		v0 = r0;
		v1 = r1;
	}
	return {f.U[0][0] * v0 + f.U[0][1] * v1, f.U[1][0] * v0 + f.U[1][1] * v1};
}

Rational model_alpha(const CompositeMap& c)
{
	if (auto* o = std::get_if<AutOmega>(&c.mid))
		return o->alpha;
	return Rational(2);
}

Point composite_eval(const CompositeMap& c, const Point& p)
{
	Point q = elementary_eval(c.h, p);
	if (model_defect(c.model, model_alpha(c), q) < -kMidTolerance)
		throw EvalError("intermediate point leaves the model domain");
	return elementary_eval(c.g, aut_eval(c.mid, q));
}

ElementaryMap fuse(const ElementaryMap& outer, const ElementaryMap& inner)
{
	ElementaryMap r;
	for (int i = 0; i < 2; ++i)
		for (int j = 0; j < 2; ++j)
			r.exponents[i][j] = outer.exponents[i][0] * inner.exponents[0][j] + outer.exponents[i][1] * inner.exponents[1][j];
	for (int i = 0; i < 2; ++i)
		r.constants[i] = outer.constants[i] * ipow(inner.constants[0], outer.exponents[i][0]) *
		                 ipow(inner.constants[1], outer.exponents[i][1]);
	return r;
}

bool unimodular(complex u)
{
	return std::fabs(std::abs(u) - 1.0) < 1e-12;
}

void blaschke_issues(const BlaschkeProduct& b, const std::string& name, bool need_nonconstant,
                     std::vector<std::string>& out)
{
	for (const auto& a : b.zeros)
		if (!(std::abs(a) < 1.0))
			out.push_back(name + " has a zero outside the open unit disc");
	if (!unimodular(b.unimodular))
		out.push_back(name + " constant is not unimodular");
	if (need_nonconstant) {
		if (b.zeros.empty())
			out.push_back(name + " is constant");
		if (b.vanishes_at_zero())
			out.push_back(name + " vanishes at 0");
	}
}

IntMatrix swap_columns(const IntMatrix& m)
{
	return {{{m[0][1], m[0][0]}, {m[1][1], m[1][0]}}};
}

IntMatrix swap_rows(const IntMatrix& m)
{
	return {{m[1], m[0]}};
}

// Triangular pattern [[a, sb*b], [0, sc*c]] with a, c > 0 and b >= 0.
bool triangular(const IntMatrix& m, int sb, int sc)
{
	return m[0][0] > 0 && sb * m[0][1] >= 0 && m[1][0] == 0 && sc * m[1][1] > 0;
}

bool diagonal(const IntMatrix& m)
{
	return m[0][0] > 0 && m[0][1] == 0 && m[1][0] == 0 && m[1][1] > 0;
}

void elementary_issues(const ElementaryMap& m, const std::string& name, std::vector<std::string>& out)
{
	if (m.det() == 0)
		out.push_back(name + " has singular exponent matrix");
	for (const auto& k : m.constants)
		if (k == 0.0)
			out.push_back(name + " has a zero constant");
}

void composite_issues(const CompositeMap& c, std::vector<std::string>& out)
{
	elementary_issues(c.h, "h", out);
	elementary_issues(c.g, "g", out);
	switch (c.model) {
	case ModelDomain::D: {
		auto* f = std::get_if<AutD>(&c.mid);
		if (!f) {
			out.push_back("model D needs an automorphism of D");
			break;
		}
		if (f->s == 0.0)
			out.push_back("s must be nonzero");
		const auto& h = c.h.exponents;
		if (!triangular(h, -1, -1) && !triangular(swap_columns(h), -1, -1))
			out.push_back("h does not have the form (z^a1 w^-b1, w^-c1)");
		const auto& g = c.g.exponents;
		if (!triangular(g, -1, -1) && !triangular(swap_rows(g), -1, -1))
			out.push_back("g does not have the form (z^a2 w^-b2, w^-c2)");
		break;
	}
	case ModelDomain::Omega: {
		auto* f = std::get_if<AutOmega>(&c.mid);
		if (!f) {
			out.push_back("model Omega needs an automorphism of Omega");
			break;
		}
		if (f->alpha.sign() <= 0)
			out.push_back("alpha must be positive");
		if (f->a == 0.0 || !(std::abs(f->a) < 1.0))
			out.push_back("a must satisfy 0 < |a| < 1");
		const auto& h = c.h.exponents;
		if (!triangular(h, -1, 1) && !triangular(swap_columns(h), -1, 1))
			out.push_back("h does not have the form (z^a1 w^-b1, w^c1)");
		const auto& g = c.g.exponents;
		if (!triangular(g, 1, 1) && !triangular(swap_rows(g), 1, 1))
			out.push_back("g does not have the form (z^a2 w^b2, w^c2)");
		break;
	}
	case ModelDomain::Ball: {
		auto* f = std::get_if<AutBall>(&c.mid);
		if (!f) {
			out.push_back("model ball needs a ball automorphism");
			break;
		}
		if (!(std::norm(f->a[0]) + std::norm(f->a[1]) < 1.0))
			out.push_back("ball automorphism centre lies outside the ball");
		const auto& U = f->U;
		for (int i = 0; i < 2; ++i)
			for (int j = 0; j < 2; ++j) {
				complex dot = U[0][i] * std::conj(U[0][j]) + U[1][i] * std::conj(U[1][j]);
				if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-12)
					out.push_back("U is not unitary");
			}
		auto [lz, lw] = ball_axis_conditions(*f);
		if (!lz)
			out.push_back("f maps {z = 0} into the coordinate axes");
		if (!lw)
			out.push_back("f maps {w = 0} into the coordinate axes");
		if (!diagonal(c.h.exponents) && !diagonal(swap_columns(c.h.exponents)))
			out.push_back("h does not have the form (z^a1, w^b1)");
		if (!diagonal(c.g.exponents) && !diagonal(swap_columns(c.g.exponents)))
			out.push_back("g does not have the form (z^a2, w^b2)");
		break;
	}
	}
}

void blaschke_monomial_issues(const BlaschkeMonomialMap& m, std::vector<std::string>& out)
{
	for (const auto& k : m.constants)
		if (k == 0.0)
			out.push_back("zero constant");
	if (m.kase == BlaschkeCase::III) {
		if (m.a < 0 || m.b < 0)
			out.push_back("case iii needs a >= 0 and b >= 0");
		if (!(m.A1 > 0.0) || !(m.C > 0.0))
			out.push_back("case iii needs A > 0 and C > 0");
		blaschke_issues(m.blaschke, "B1", true, out);
		blaschke_issues(m.blaschke2, "B2", true, out);
		return;
	}
	if (m.a <= 0)
		out.push_back("a must be positive");
	if (m.p1 <= 0)
		out.push_back("p1 must be positive");
	if (std::gcd(m.p1, m.q1 < 0 ? -m.q1 : m.q1) != 1)
		out.push_back("p1 and q1 must be coprime");
	if (!(m.A1 > 0.0))
		out.push_back("A1 must be positive");
	if (m.kase == BlaschkeCase::I) {
		if (m.c <= 0)
			out.push_back("case i needs c > 0");
		if (m.q1 > 0)
			out.push_back("case i needs q1 <= 0");
		if (m.a * m.q1 - m.b * m.p1 > 0)
			out.push_back("case i needs a*q1 - b*p1 <= 0");
	} else if (m.c == 0) {
		out.push_back("case ii needs c != 0");
	}
	blaschke_issues(m.blaschke, "B", true, out);
}

template <class... Ts> struct overloaded : Ts... {
	using Ts::operator()...;
};

// Central difference of f along one coordinate, refined once by Richardson.
template <class F> Point derivative(F&& f, const Point& p, int coord)
{
	auto diff = [&](double h) {
		Point plus = p, minus = p;
		(coord == 0 ? plus.z : plus.w) += h;
		(coord == 0 ? minus.z : minus.w) -= h;
		Point fp = f(plus), fm = f(minus);
		return Point{(fp.z - fm.z) / (2.0 * h), (fp.w - fm.w) / (2.0 * h)};
	};
	double scale = std::max(1.0, std::abs(coord == 0 ? p.z : p.w));
	double h = 1e-6 * scale;
	Point d1 = diff(h), d2 = diff(h / 2.0);
	return {(4.0 * d2.z - d1.z) / 3.0, (4.0 * d2.w - d1.w) / 3.0};
}

IntMatrix matrix_from_json(const nlohmann::json& j)
{
	IntMatrix m;
	for (int i = 0; i < 2; ++i)
		for (int k = 0; k < 2; ++k)
			m[i][k] = j.at(i).at(k).get<std::int64_t>();
	return m;
}

nlohmann::json blaschke_to_json(const BlaschkeProduct& b)
{
	nlohmann::json zeros = nlohmann::json::array();
	for (const auto& a : b.zeros)
		zeros.push_back(complex_to_json(a));
	return {{"zeros", zeros}, {"unimodular", complex_to_json(b.unimodular)}};
}

BlaschkeProduct blaschke_from_json(const nlohmann::json& j)
{
	BlaschkeProduct b;
	for (const auto& z : j.at("zeros"))
		b.zeros.push_back(complex_from_json(z));
	if (j.contains("unimodular"))
		b.unimodular = complex_from_json(j.at("unimodular"));
	return b;
}

nlohmann::json elementary_to_json(const ElementaryMap& m)
{
	return {{"type", "elementary"},
	        {"exponents", m.exponents},
	        {"constants", {complex_to_json(m.constants[0]), complex_to_json(m.constants[1])}}};
}

ElementaryMap elementary_from_json(const nlohmann::json& j)
{
	ElementaryMap m;
	m.exponents = matrix_from_json(j.at("exponents"));
	if (j.contains("constants"))
		for (int i = 0; i < 2; ++i)
			m.constants[i] = complex_from_json(j.at("constants").at(i));
	return m;
}

nlohmann::json aut_to_json(const ModelAut& f)
{
	return std::visit(overloaded{
	                      [](const AutD& d) -> nlohmann::json {
		                      return {{"type", "aut_d"}, {"t1", d.t1}, {"t2", d.t2}, {"s", complex_to_json(d.s)}};
	                      },
	                      [](const AutOmega& o) -> nlohmann::json {
		                      return {{"type", "aut_omega"},
		                              {"alpha", o.alpha.str()},
		                              {"a", complex_to_json(o.a)},
		                              {"t1", o.t1},
		                              {"t2", o.t2}};
	                      },
	                      [](const AutBall& b) -> nlohmann::json {
		                      nlohmann::json U = nlohmann::json::array();
		                      for (const auto& row : b.U)
			                      U.push_back({complex_to_json(row[0]), complex_to_json(row[1])});
		                      return {{"type", "aut_ball"},
		                              {"a", {complex_to_json(b.a[0]), complex_to_json(b.a[1])}},
		                              {"U", U}};
	                      },
	                  },
	                  f);
}

ModelAut aut_from_json(const nlohmann::json& j)
{
	std::string type = j.at("type").get<std::string>();
	if (type == "aut_d") {
		AutD d;
		d.t1 = j.value("t1", 0.0);
		d.t2 = j.value("t2", 0.0);
		d.s = complex_from_json(j.at("s"));
		return d;
	}
	if (type == "aut_omega") {
		AutOmega o;
		const auto& alpha = j.at("alpha");
		o.alpha = alpha.is_string() ? Rational::parse(alpha.get<std::string>()) : Rational(alpha.get<std::int64_t>());
		o.a = complex_from_json(j.at("a"));
		o.t1 = j.value("t1", 0.0);
		o.t2 = j.value("t2", 0.0);
		return o;
	}
	if (type == "aut_ball") {
		AutBall b;
		if (j.contains("a"))
			for (int i = 0; i < 2; ++i)
				b.a[i] = complex_from_json(j.at("a").at(i));
		if (j.contains("U"))
			for (int i = 0; i < 2; ++i)
				for (int k = 0; k < 2; ++k)
					b.U[i][k] = complex_from_json(j.at("U").at(i).at(k));
		return b;
	}
	throw DomainError("unknown automorphism type '" + type + "'");
}

ModelDomain model_from_name(const std::string& s)
{
	if (s == "D")
		return ModelDomain::D;
	if (s == "omega")
		return ModelDomain::Omega;
	if (s == "ball")
		return ModelDomain::Ball;
	throw DomainError("unknown model '" + s + "'");
}

BlaschkeCase case_from_name(const std::string& s)
{
	if (s == "i")
		return BlaschkeCase::I;
	if (s == "ii")
		return BlaschkeCase::II;
	if (s == "iii")
		return BlaschkeCase::III;
	throw DomainError("unknown case '" + s + "'");
}

} // namespace

bool BlaschkeProduct::vanishes_at_zero() const
{
	for (const auto& a : zeros)
		if (a == 0.0)
			return true;
	return false;
}

complex blaschke_eval(const BlaschkeProduct& b, complex zeta)
{
	if (std::abs(zeta) > 1.0 + 1e-12)
		throw EvalError("Blaschke product evaluated outside the closed unit disc");
	complex v = b.unimodular;
	for (const auto& a : b.zeros)
		v *= (zeta - a) / (1.0 - std::conj(a) * zeta);
	return v;
}

void check_blaschke(const BlaschkeProduct& b)
{
	std::vector<std::string> issues;
	blaschke_issues(b, "Blaschke product", false, issues);
	if (!issues.empty())
		throw DomainError(issues.front());
}

const char* case_name(BlaschkeCase c)
{
	switch (c) {
	case BlaschkeCase::I:
		return "i";
	case BlaschkeCase::II:
		return "ii";
	case BlaschkeCase::III:
		return "iii";
	}
	return "?";
}

const char* model_name(ModelDomain m)
{
	switch (m) {
	case ModelDomain::D:
		return "D";
	case ModelDomain::Omega:
		return "omega";
	case ModelDomain::Ball:
		return "ball";
	}
	return "?";
}

Point elementary_eval(const ElementaryMap& m, const Point& p)
{
	const auto& e = m.exponents;
	return {m.constants[0] * monomial(p.z, p.w, e[0][0], e[0][1]), m.constants[1] * monomial(p.z, p.w, e[1][0], e[1][1])};
}

Point aut_eval(const ModelAut& f, const Point& p)
{
	return std::visit(overloaded{
	                      [&](const AutD& d) { return aut_d_eval(d, p); },
	                      [&](const AutOmega& o) { return aut_omega_eval(o, p); },
	                      [&](const AutBall& b) { return aut_ball_eval(b, p); },
	                  },
	                  f);
}

Point map_eval(const HoloMap& m, const Point& p)
{
	return std::visit(overloaded{
	                      [&](const ElementaryMap& e) { return elementary_eval(e, p); },
	                      [&](const BlaschkeMonomialMap& b) { return blaschke_monomial_eval(b, p); },
	                      [&](const CompositeMap& c) { return composite_eval(c, p); },
	                  },
	                  m);
}

complex jacobian_det(const HoloMap& m, const Point& p)
{
	auto f = [&](const Point& q) { return map_eval(m, q); };
	Point dz = derivative(f, p, 0), dw = derivative(f, p, 1);
	return dz.z * dw.w - dw.z * dz.w;
}

double model_defect(ModelDomain model, const Rational& alpha, const Point& p)
{
	switch (model) {
	case ModelDomain::D:
		return std::log(std::abs(p.w)) - std::norm(p.z);
	case ModelDomain::Omega:
		return 1.0 - std::norm(p.z) - std::pow(std::abs(p.w), alpha.to_double());
	case ModelDomain::Ball:
		return 1.0 - std::norm(p.z) - std::norm(p.w);
	}
	return 0.0;
}

Point theta_eval(int type, const Point& p)
{
	const complex I(0.0, 1.0);
	switch (type) {
	case 1:
		return {p.z / std::sqrt(2.0), p.w - p.z * p.z / 2.0};
	case 2:
		return {std::exp(p.z), p.w};
	case 3:
		return {std::exp((p.z + I * p.w) / 2.0), std::exp(I * p.w)};
	case 4: {
		complex ew = std::exp(p.w);
		if (std::abs(ew - 1.0) < 1e-14)
			throw EvalError("chart 4 is singular where e^w = 1");
		return {std::exp(p.z) / (ew - 1.0), -(ew + 1.0) / (ew - 1.0)};
	}
	default:
		throw DomainError("unknown model type " + std::to_string(type));
	}
}

Point DeckElement::apply(const Point& p) const
{
	const complex I(0.0, 1.0);
	switch (type) {
	case 1:
		return {p.z + I * alpha1, -2.0 * I * alpha1 * p.z + p.w + alpha1 * alpha1 + I * alpha2};
	case 2:
		return {cis(alpha1) * p.z, p.w + I * alpha2};
	case 3:
		return {std::exp(complex(alpha2, alpha1)) * p.z, std::exp(2.0 * alpha2) * p.w};
	case 4: {
		complex e1 = cis(alpha1), e2 = cis(alpha2);
		complex D = 1.0 + e2 + (1.0 - e2) * p.w;
		if (D == 0.0)
			throw EvalError("deck transformation is singular at this point");
		return {2.0 * e1 * p.z / D, ((e2 + 1.0) * p.w + 1.0 - e2) / D};
	}
	default:
		throw DomainError("unknown model type " + std::to_string(type));
	}
}

DeckElement deck_transform(const DeckGroup& group, std::int64_t n, std::int64_t m)
{
	if (group.type < 1 || group.type > 4)
		throw DomainError("unknown model type " + std::to_string(group.type));
	double det = group.alpha[0] * group.beta[1] - group.alpha[1] * group.beta[0];
	if (std::fabs(det) < 1e-12)
		throw DomainError("deck group generators are linearly dependent");
	DeckElement e;
	e.type = group.type;
	e.alpha1 = double(n) * group.alpha[0] + double(m) * group.beta[0];
	e.alpha2 = double(n) * group.alpha[1] + double(m) * group.beta[1];
	return e;
}

HoloMap compose(const HoloMap& outer, const HoloMap& inner)
{
	auto* eo = std::get_if<ElementaryMap>(&outer);
	auto* ei = std::get_if<ElementaryMap>(&inner);
	if (eo && ei)
		return fuse(*eo, *ei);
	if (eo)
		if (auto* ci = std::get_if<CompositeMap>(&inner)) {
			CompositeMap r = *ci;
			r.g = fuse(*eo, ci->g);
			return r;
		}
	if (ei)
		if (auto* co = std::get_if<CompositeMap>(&outer)) {
			CompositeMap r = *co;
			r.h = fuse(co->h, *ei);
			return r;
		}
	throw ModelMismatch("maps cannot be chained: no shared model domain");
}

std::pair<bool, bool> ball_axis_conditions(const AutBall& f)
{
	const complex samples[] = {0.0, {0.3, 0.0}, {0.0, 0.5}, {-0.4, 0.2}};
	auto escapes = [&](bool zero_z) {
		bool in_lz = true, in_lw = true;
		for (const auto& s : samples) {
			Point img = aut_ball_eval(f, zero_z ? Point{0.0, s} : Point{s, 0.0});
			in_lz = in_lz && std::abs(img.z) < 1e-12;
			in_lw = in_lw && std::abs(img.w) < 1e-12;
		}
		return !in_lz && !in_lw;
	};
	return {escapes(true), escapes(false)};
}

std::vector<std::string> structural_issues(const HoloMap& m)
{
	std::vector<std::string> out;
	std::visit(overloaded{
	               [&](const ElementaryMap& e) { elementary_issues(e, "map", out); },
	               [&](const BlaschkeMonomialMap& b) { blaschke_monomial_issues(b, out); },
	               [&](const CompositeMap& c) { composite_issues(c, out); },
	           },
	           m);
	return out;
}

nlohmann::json complex_to_json(complex c)
{
	return nlohmann::json::array({c.real(), c.imag()});
}

complex complex_from_json(const nlohmann::json& j)
{
	if (j.is_number())
		return {j.get<double>(), 0.0};
	if (!j.is_array() || j.size() != 2)
		throw DomainError("complex numbers are encoded as [re, im]");
	return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json to_json(const HoloMap& m)
{
	return std::visit(
	    overloaded{
	        [](const ElementaryMap& e) { return elementary_to_json(e); },
	        [](const BlaschkeMonomialMap& b) -> nlohmann::json {
		        nlohmann::json j = {{"type", "blaschke_monomial"},
		                            {"case", case_name(b.kase)},
		                            {"a", b.a},
		                            {"b", b.b},
		                            {"c", b.c},
		                            {"p1", b.p1},
		                            {"q1", b.q1},
		                            {"A1", b.A1},
		                            {"C", b.C},
		                            {"blaschke", blaschke_to_json(b.blaschke)},
		                            {"constants", {complex_to_json(b.constants[0]), complex_to_json(b.constants[1])}},
		                            {"swap_components", b.swap_components},
		                            {"swap_variables", b.swap_variables}};
		        if (b.kase == BlaschkeCase::III)
			        j["blaschke2"] = blaschke_to_json(b.blaschke2);
		        return j;
	        },
	        [](const CompositeMap& c) -> nlohmann::json {
		        return {{"type", "composite"},
		                {"model", model_name(c.model)},
		                {"h", elementary_to_json(c.h)},
		                {"mid", aut_to_json(c.mid)},
		                {"g", elementary_to_json(c.g)}};
	        },
	    },
	    m);
}

HoloMap map_from_json(const nlohmann::json& j)
{
	try {
		std::string type = j.at("type").get<std::string>();
		if (type == "elementary")
			return elementary_from_json(j);
		if (type == "blaschke_monomial") {
			BlaschkeMonomialMap b;
			b.kase = case_from_name(j.at("case").get<std::string>());
			b.a = j.value("a", std::int64_t{1});
			b.b = j.value("b", std::int64_t{0});
			b.c = j.value("c", std::int64_t{1});
			b.p1 = j.value("p1", std::int64_t{1});
			b.q1 = j.value("q1", std::int64_t{0});
			b.A1 = j.value("A1", 1.0);
			b.C = j.value("C", 1.0);
			b.blaschke = blaschke_from_json(j.at("blaschke"));
			if (j.contains("blaschke2"))
				b.blaschke2 = blaschke_from_json(j.at("blaschke2"));
			if (j.contains("constants"))
				for (int i = 0; i < 2; ++i)
					b.constants[i] = complex_from_json(j.at("constants").at(i));
			b.swap_components = j.value("swap_components", false);
			b.swap_variables = j.value("swap_variables", false);
			return b;
		}
		if (type == "composite") {
			CompositeMap c;
			c.model = model_from_name(j.at("model").get<std::string>());
			c.h = elementary_from_json(j.at("h"));
			c.mid = aut_from_json(j.at("mid"));
			c.g = elementary_from_json(j.at("g"));
			return c;
		}
		throw DomainError("unknown map type '" + type + "'");
	} catch (const nlohmann::json::exception& e) {
		throw DomainError(std::string("malformed map JSON: ") + e.what());
	}
}

} // namespace reinhardt
