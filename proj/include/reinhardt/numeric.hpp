#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>

namespace reinhardt::numeric {

/// exp that stays finite and strictly increasing past the overflow point, so
/// comparisons between huge arguments keep their order.
inline double safe_exp(double v)
{
	if (v > 700.0)
		return 1e300 * (1.0 + std::log1p(v - 700.0));
	return std::exp(v);
}

/// log(e^a + e^b) without overflow.
inline double log_sum_exp(double a, double b)
{
	double m = a > b ? a : b;
	if (std::isinf(m))
		return m;
	return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Extremum {
	double arg;
	double value;
};

/// Golden-section maximization of a unimodal function on [lo, hi].
inline Extremum golden_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10)
{
	constexpr double inv_phi = 0.6180339887498949;
	double a = lo, b = hi;
	double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
	double fc = f(c), fd = f(d);
	while (b - a > tol * (1.0 + std::fabs(a) + std::fabs(b))) {
		if (fc >= fd) {
			b = d;
			d = c;
			fd = fc;
			c = b - inv_phi * (b - a);
			fc = f(c);
		} else {
			a = c;
			c = d;
			fc = fd;
			d = a + inv_phi * (b - a);
			fd = f(d);
		}
	}
	double x = 0.5 * (a + b);
	double fx = f(x);
	if (fc > fx) {
		x = c;
		fx = fc;
	}
	if (fd > fx) {
		x = d;
		fx = fd;
	}
	return {x, fx};
}

struct Extremum2 {
	double x;
	double y;
	double value;
};

/// Maximizes a jointly quasi-concave function over a box by nested golden
/// sections. Partial maximization preserves quasi-concavity, so the outer
/// search is unimodal as well.
inline Extremum2 maximize_2d(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                             double y_lo, double y_hi, double tol = 1e-9)
{
	auto inner = [&](double x) { return golden_max([&](double y) { return f(x, y); }, y_lo, y_hi, tol); };
	auto outer = golden_max([&](double x) { return inner(x).value; }, x_lo, x_hi, tol);
	auto in = inner(outer.arg);
	return {outer.arg, in.arg, in.value};
}

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must have
/// opposite signs (zero counts as the sign of `hi`).
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200)
{
	bool lo_pos = f(lo) > 0;
	for (int i = 0; i < iterations; ++i) {
		double mid = 0.5 * (lo + hi);
		if (mid == lo || mid == hi)
			break;
		if ((f(mid) > 0) == lo_pos)
			lo = mid;
		else
			hi = mid;
	}
	return 0.5 * (lo + hi);
}

/// Deterministic uniform source: identical seeds give identical streams on
/// every platform (no std:: distributions involved).
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
	std::int64_t integer(std::int64_t lo, std::int64_t hi)
	{
		auto span = static_cast<std::uint64_t>(hi - lo + 1);
		return lo + static_cast<std::int64_t>(engine_() % span);
	}
	double normal()
	{
		double u1 = uniform(), u2 = uniform();
		if (u1 < 1e-300)
			u1 = 1e-300;
		return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
	}
	std::uint64_t next() { return engine_(); }

private:
	std::mt19937_64 engine_;
};

} // namespace reinhardt::numeric
