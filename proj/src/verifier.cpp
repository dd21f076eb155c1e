#include "reinhardt/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace reinhardt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoxDepth = 8.0;
constexpr double kJacobianZero = 1e-8;

// sup of u . (x, y) over the log image of one cell; -inf if the cell is
// empty, +inf if unbounded in that direction.
double cell_support(const Cell& cell, double ux, double uy)
{
	auto slack = [&](double x, double y) { return cell_log_slack(cell, x, y); };
	auto level = [&](double s) {
		return numeric::golden_max([&](double r) { return slack(s * ux - r * uy, s * uy + r * ux); }, -40.0, 40.0,
		                           1e-12)
		    .value;
	};
	auto inner = numeric::maximize_2d(slack, -40.0, 20.0, -40.0, 20.0);
	if (!(inner.value > 0.0))
		return -kInf;
	double lo = inner.x * ux + inner.y * uy, hi = 80.0;
	if (level(hi) > 0.0)
		return kInf;
	for (int i = 0; i < 60; ++i) {
		double mid = 0.5 * (lo + hi);
		(level(mid) > 0.0 ? lo : hi) = mid;
	}
	return lo;
}

struct Box {
	double x0, x1, y0, y1;
};

Box sampling_box(const DomainSpec& D)
{
	double hx = -kInf, hy = -kInf, lx = kInf, ly = kInf;
	for (const auto& cell : D.cells) {
		hx = std::max(hx, cell_support(cell, 1.0, 0.0));
		hy = std::max(hy, cell_support(cell, 0.0, 1.0));
		lx = std::min(lx, -cell_support(cell, -1.0, 0.0));
		ly = std::min(ly, -cell_support(cell, 0.0, -1.0));
	}
	if (!std::isfinite(hx) || !std::isfinite(hy))
		throw DomainError("cannot sample an unbounded or empty domain");
	return {std::max(lx, hx - kBoxDepth), hx, std::max(ly, hy - kBoxDepth), hy};
}

Point with_phases(double x, double y, numeric::Rng& rng)
{
	return {std::polar(std::exp(x), rng.uniform(0.0, 2 * M_PI)), std::polar(std::exp(y), rng.uniform(0.0, 2 * M_PI))};
}

double slack_at(const DomainSpec& D, const Point& p)
{
	return signed_slack(D, std::abs(p.z), std::abs(p.w));
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once, so per-index outputs do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F body)
{
	unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
	if (t == 1) {
		for (std::size_t i = 0; i < n; ++i)
			body(i);
		return;
	}
	std::vector<std::thread> pool;
	for (unsigned k = 0; k < t; ++k)
		pool.emplace_back([&, k] {
			for (std::size_t i = k; i < n; i += t)
				body(i);
		});
	for (auto& th : pool)
		th.join();
}

enum class Outcome { Inside, Outside, EvalFailed, Crashed };

struct Image {
	Outcome outcome = Outcome::Inside;
	double margin = -kInf;
	std::string error;
};

Image image_of(const HoloMap& m, const DomainSpec& D2, const Point& p)
{
	Image r;
	try {
		Point q = map_eval(m, p);
		r.margin = slack_at(D2, q);
		r.outcome = r.margin > 0.0 ? Outcome::Inside : Outcome::Outside;
	} catch (const EvalError& e) {
		r.outcome = Outcome::EvalFailed;
		r.error = e.what();
	} catch (const std::exception& e) {
		r.outcome = Outcome::Crashed;
		r.error = e.what();
	}
	return r;
}

std::string point_str(const Point& p)
{
	std::ostringstream os;
	os.precision(6);
	os << "(" << p.z.real() << (p.z.imag() < 0 ? "" : "+") << p.z.imag() << "i, " << p.w.real()
	   << (p.w.imag() < 0 ? "" : "+") << p.w.imag() << "i)";
	return os.str();
}

nlohmann::json opt(const std::optional<double>& v)
{
	return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

void SampleConfig::validate() const
{
	if (n_interior == 0)
		throw DomainError("n_interior must be positive");
	if (shells.empty())
		throw DomainError("at least one shell level is needed");
	for (std::size_t i = 0; i < shells.size(); ++i) {
		if (!(shells[i] > 0.0))
			throw DomainError("shell levels must be positive");
		if (i > 0 && !(shells[i] < shells[i - 1]))
			throw DomainError("shell levels must be strictly decreasing");
	}
	if (shell_samples == 0)
		throw DomainError("shell_samples must be positive");
	if (!(tolerance > 0.0))
		throw DomainError("tolerance must be positive");
}

void VerificationReport::fail(const std::string& reason, const std::string& message)
{
	pass = false;
	if (!has_reason(reason))
		reasons.push_back(reason);
	messages.push_back(message);
}

bool VerificationReport::has_reason(const std::string& reason) const
{
	return std::find(reasons.begin(), reasons.end(), reason) != reasons.end();
}

void VerificationReport::merge(const VerificationReport& o)
{
	if (o.containment_pass_rate)
		containment_pass_rate = o.containment_pass_rate;
	if (o.first_escape && !first_escape)
		first_escape = o.first_escape;
	if (!o.shells.empty())
		shells = o.shells;
	if (o.fitted_gamma)
		fitted_gamma = o.fitted_gamma;
	if (o.jacobian_zero_fraction)
		jacobian_zero_fraction = o.jacobian_zero_fraction;
	if (o.invariant_residual_max)
		invariant_residual_max = o.invariant_residual_max;
	if (o.log_commutation_residual)
		log_commutation_residual = o.log_commutation_residual;
	pass = pass && o.pass;
	for (const auto& r : o.reasons)
		if (!has_reason(r))
			reasons.push_back(r);
	messages.insert(messages.end(), o.messages.begin(), o.messages.end());
}

nlohmann::json VerificationReport::to_json() const
{
	nlohmann::json sh = nlohmann::json::array();
	for (const auto& s : shells)
		sh.push_back({{"delta", s.delta},
		              {"samples", s.samples},
		              {"max_image_margin", std::isfinite(s.max_image_margin) ? nlohmann::json(s.max_image_margin)
		                                                                      : nlohmann::json(nullptr)}});
	nlohmann::json esc = nullptr;
	if (first_escape)
		esc = {complex_to_json(first_escape->z), complex_to_json(first_escape->w)};
	return {{"verdict", pass ? "pass" : "fail"},
	        {"reasons", reasons},
	        {"messages", messages},
	        {"containment_pass_rate", opt(containment_pass_rate)},
	        {"first_escape", esc},
	        {"shells", sh},
	        {"fitted_gamma", opt(fitted_gamma)},
	        {"jacobian_zero_fraction", opt(jacobian_zero_fraction)},
	        {"invariant_residual_max", opt(invariant_residual_max)},
	        {"log_commutation_residual", opt(log_commutation_residual)}};
}

std::vector<Point> sample_interior(const DomainSpec& D, std::size_t n, numeric::Rng& rng)
{
	Box b = sampling_box(D);
	std::vector<Point> out;
	out.reserve(n);
	std::size_t budget = 2000 * n + 10000;
	while (out.size() < n && budget-- > 0) {
		double x = rng.uniform(b.x0, b.x1), y = rng.uniform(b.y0, b.y1);
		if (signed_slack(D, std::exp(x), std::exp(y)) > 0.0)
			out.push_back(with_phases(x, y, rng));
	}
	return out;
}

std::vector<Point> sample_shell(const DomainSpec& D, double delta, std::size_t n, numeric::Rng& rng)
{
	Box b = sampling_box(D);
	auto slack = [&](double x, double y) { return signed_slack(D, std::exp(x), std::exp(y)); };
	std::vector<Point> out;
	std::size_t budget = 200 * n + 1000;
	while (out.size() < n && budget-- > 0) {
		double x0 = rng.uniform(b.x0, b.x1), y0 = rng.uniform(b.y0, b.y1);
		if (!(slack(x0, y0) > delta))
			continue;
		double th = rng.uniform(0.0, 2 * M_PI), dx = std::cos(th), dy = std::sin(th);
		double s_in = 0.0, s_out = 0.25;
		while (s_out < 40.0 && slack(x0 + s_out * dx, y0 + s_out * dy) > 0.0) {
			s_in = s_out;
			s_out *= 2.0;
		}
		if (!(s_out < 40.0))
			continue;
		// bisect towards the level 3 delta / 4, stop inside the window
		double target = 0.75 * delta;
		for (int it = 0; it < 200; ++it) {
			double s = 0.5 * (s_in + s_out);
			double v = slack(x0 + s * dx, y0 + s * dy);
			if (v >= 0.5 * delta && v <= delta) {
				out.push_back(with_phases(x0 + s * dx, y0 + s * dy, rng));
				break;
			}
			(v > target ? s_in : s_out) = s;
		}
	}
	return out;
}

VerificationReport verify_containment(const HoloMap& m, const DomainSpec& D1, const DomainSpec& D2,
                                      const SampleConfig& cfg)
{
	cfg.validate();
	VerificationReport rep;
	numeric::Rng rng(cfg.seed);
	auto pts = sample_interior(D1, cfg.n_interior, rng);
	if (pts.size() < cfg.n_interior) {
		rep.fail(kReasonInsufficientSamples, "only " + std::to_string(pts.size()) + " interior samples found");
		if (pts.empty())
			return rep;
	}
	std::vector<Image> img(pts.size());
	std::vector<char> jzero(pts.size(), 0);
	parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
		img[i] = image_of(m, D2, pts[i]);
		if (img[i].outcome == Outcome::Inside) {
			try {
				jzero[i] = std::abs(jacobian_det(m, pts[i])) < kJacobianZero;
			} catch (const std::exception&) {
				jzero[i] = 1;
			}
		}
	});
	std::size_t ok = 0, zeros = 0;
	for (std::size_t i = 0; i < pts.size(); ++i) {
		zeros += jzero[i];
		switch (img[i].outcome) {
		case Outcome::Inside:
			++ok;
			break;
		case Outcome::Outside:
			if (!rep.first_escape) {
				rep.first_escape = pts[i];
				rep.fail(kReasonContainment, "image of " + point_str(pts[i]) + " lies outside the target");
			}
			break;
		case Outcome::EvalFailed:
			if (!rep.first_escape) {
				rep.first_escape = pts[i];
				rep.fail(kReasonContainment, "map undefined at " + point_str(pts[i]) + ": " + img[i].error);
			}
			break;
		case Outcome::Crashed:
			rep.fail(kReasonEvaluationError, "evaluation failed at " + point_str(pts[i]) + ": " + img[i].error);
			break;
		}
	}
	rep.containment_pass_rate = double(ok) / double(pts.size());
	rep.jacobian_zero_fraction = double(zeros) / double(pts.size());
	return rep;
}

VerificationReport verify_properness(const HoloMap& m, const DomainSpec& D1, const DomainSpec& D2,
                                     const SampleConfig& cfg)
{
	cfg.validate();
	VerificationReport rep;
	// separate stream from the interior samples
	numeric::Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
	std::vector<std::vector<Point>> pts;
	for (double d : cfg.shells)
		pts.push_back(sample_shell(D1, d, cfg.shell_samples, rng));
	for (std::size_t k = 0; k < cfg.shells.size(); ++k) {
		ShellStat st{cfg.shells[k], pts[k].size(), -kInf};
		std::vector<Image> img(pts[k].size());
		parallel_for(pts[k].size(), cfg.threads, [&](std::size_t i) { img[i] = image_of(m, D2, pts[k][i]); });
		for (std::size_t i = 0; i < img.size(); ++i) {
			if (img[i].outcome == Outcome::Crashed)
				rep.fail(kReasonEvaluationError, "evaluation failed at " + point_str(pts[k][i]) + ": " + img[i].error);
			else if (img[i].outcome != Outcome::Inside && !rep.has_reason(kReasonContainment))
				rep.fail(kReasonContainment, "shell point " + point_str(pts[k][i]) + " is not mapped into the target");
			if (img[i].outcome == Outcome::Inside || img[i].outcome == Outcome::Outside)
				st.max_image_margin = std::max(st.max_image_margin, img[i].margin);
		}
		if (st.samples < cfg.shell_samples / 2)
			rep.fail(kReasonInsufficientSamples, "shell " + std::to_string(st.delta) + " has only " +
			                                         std::to_string(st.samples) + " samples");
		rep.shells.push_back(st);
	}
	if (rep.has_reason(kReasonInsufficientSamples))
		return rep;

	bool decreasing = true;
	for (std::size_t k = 1; k < rep.shells.size(); ++k)
		decreasing = decreasing && rep.shells[k].max_image_margin < rep.shells[k - 1].max_image_margin;
	bool positive = std::all_of(rep.shells.begin(), rep.shells.end(),
	                            [](const ShellStat& s) { return s.max_image_margin > 0.0; });
	if (positive && rep.shells.size() >= 2) {
		double mx = 0, my = 0;
		for (const auto& s : rep.shells) {
			mx += std::log(s.delta);
			my += std::log(s.max_image_margin);
		}
		mx /= double(rep.shells.size());
		my /= double(rep.shells.size());
		double sxy = 0, sxx = 0;
		for (const auto& s : rep.shells) {
			sxy += (std::log(s.delta) - mx) * (std::log(s.max_image_margin) - my);
			sxx += (std::log(s.delta) - mx) * (std::log(s.delta) - mx);
		}
		rep.fitted_gamma = sxy / sxx;
	}
	if (!decreasing)
		rep.fail(kReasonNotProper, "image margins do not shrink towards the boundary");
	else if (!positive)
		rep.fail(kReasonNotProper, "boundary shells are not mapped inside the target");
	else if (rep.fitted_gamma && *rep.fitted_gamma < kMinShellExponent)
		rep.fail(kReasonNotProper, "image margins decay too slowly (exponent " + std::to_string(*rep.fitted_gamma) + ")");
	return rep;
}

VerificationReport verify_invariants(const ModelAut& mid, const SampleConfig& cfg)
{
	VerificationReport rep;
	numeric::Rng rng(cfg.seed ^ 0x5bd1e995ULL);
	auto disc = [&](double r) { return std::polar(r * std::sqrt(rng.uniform()), rng.uniform(0.0, 2 * M_PI)); };
	double worst = 0.0;
	std::size_t n = std::max<std::size_t>(cfg.n_interior, 1);
	for (std::size_t k = 0; k < n; ++k) {
		double res = 0.0;
		if (auto* d = std::get_if<AutD>(&mid)) {
			Point p{disc(2.0), std::polar(std::exp(rng.uniform(-3.0, 5.0)), rng.uniform(0.0, 2 * M_PI))};
			Point q = aut_eval(mid, p);
			(void)d;
			res = std::fabs((std::log(std::abs(q.w)) - std::norm(q.z)) - (std::log(std::abs(p.w)) - std::norm(p.z)));
		} else if (auto* o = std::get_if<AutOmega>(&mid)) {
			double al = o->alpha.to_double();
			Point p{disc(0.95), disc(0.95)};
			Point q = aut_eval(mid, p);
			double lhs = (1 - std::norm(q.z) - std::pow(std::abs(q.w), al)) * std::norm(1.0 - std::conj(o->a) * p.z);
			double rhs = (1 - std::norm(o->a)) * (1 - std::norm(p.z) - std::pow(std::abs(p.w), al));
			res = std::fabs(lhs - rhs);
		} else {
			const auto& b = std::get<AutBall>(mid);
			Point p{disc(0.7), disc(0.7)};
			Point q = aut_eval(mid, p);
			double na = std::norm(b.a[0]) + std::norm(b.a[1]);
			complex inner = p.z * std::conj(b.a[0]) + p.w * std::conj(b.a[1]);
			double lhs = 1 - std::norm(q.z) - std::norm(q.w);
			double rhs = (1 - na) * (1 - std::norm(p.z) - std::norm(p.w)) / std::norm(1.0 - inner);
			res = std::fabs(lhs - rhs);
		}
		if (!std::isfinite(res))
			res = kInf;
		worst = std::max(worst, res);
	}
	rep.invariant_residual_max = worst;
	if (!(worst < cfg.tolerance))
		rep.fail(kReasonInvariant, "automorphism invariant residual " + std::to_string(worst));
	return rep;
}

VerificationReport verify_log_commutation(const ElementaryMap& m, const SampleConfig& cfg)
{
	VerificationReport rep;
	numeric::Rng rng(cfg.seed ^ 0x2545f4914f6cdd1dULL);
	const auto& M = m.exponents;
	double lk0 = std::log(std::abs(m.constants[0])), lk1 = std::log(std::abs(m.constants[1]));
	double worst = 0.0;
	std::size_t n = std::max<std::size_t>(cfg.n_interior, 1);
	for (std::size_t k = 0; k < n; ++k) {
		double x = rng.uniform(-3.0, 3.0), y = rng.uniform(-3.0, 3.0);
		Point p = with_phases(x, y, rng);
		double lx = std::log(std::abs(p.z)), ly = std::log(std::abs(p.w));
		Point q = elementary_eval(m, p);
		double e0 = double(M[0][0]) * lx + double(M[0][1]) * ly + lk0;
		double e1 = double(M[1][0]) * lx + double(M[1][1]) * ly + lk1;
		double res = std::max(std::fabs(std::log(std::abs(q.z)) - e0), std::fabs(std::log(std::abs(q.w)) - e1));
		if (!std::isfinite(res))
			res = kInf;
		worst = std::max(worst, res);
	}
	rep.log_commutation_residual = worst;
	if (!(worst < cfg.tolerance))
		rep.fail(kReasonLogCommutation, "log-moduli residual " + std::to_string(worst));
	return rep;
}

VerificationReport verify(const HoloMap& m, const DomainSpec& D1, const DomainSpec& D2, const SampleConfig& cfg)
{
	cfg.validate();
	VerificationReport rep;
	for (const auto& issue : structural_issues(m))
		rep.fail(kReasonInvalidMap, issue);
	if (!rep.pass)
		return rep;
	rep.merge(verify_containment(m, D1, D2, cfg));
	rep.merge(verify_properness(m, D1, D2, cfg));
	if (auto* e = std::get_if<ElementaryMap>(&m))
		rep.merge(verify_log_commutation(*e, cfg));
	if (auto* c = std::get_if<CompositeMap>(&m)) {
		rep.merge(verify_invariants(c->mid, cfg));
		rep.merge(verify_log_commutation(c->h, cfg));
		rep.merge(verify_log_commutation(c->g, cfg));
	}
	return rep;
}

} // namespace reinhardt
