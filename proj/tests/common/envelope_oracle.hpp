#pragma once

// Grid oracle for envelopes: rasterize the union on a log grid (plus the
// boundary crossings along grid lines), close it under the axis directions
// the domain actually meets, take the convex hull of the point set and
// compare membership probe by probe.

#include "reinhardt/logdiagram.hpp"
#include "reinhardt/spec_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

struct GridPoint {
	double x, y;
};

inline double cross(const GridPoint& o, const GridPoint& a, const GridPoint& b)
{
	return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
inline std::vector<GridPoint> convex_hull(std::vector<GridPoint> pts)
{
	std::sort(pts.begin(), pts.end(), [](const GridPoint& a, const GridPoint& b) {
		return a.x < b.x || (a.x == b.x && a.y < b.y);
	});
	pts.erase(std::unique(pts.begin(), pts.end(),
	                      [](const GridPoint& a, const GridPoint& b) { return a.x == b.x && a.y == b.y; }),
	          pts.end());
	if (pts.size() < 3)
		return pts;
	std::vector<GridPoint> h(2 * pts.size());
	std::size_t k = 0;
	for (std::size_t i = 0; i < pts.size(); ++i) {
		while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0)
			--k;
		h[k++] = pts[i];
	}
	for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
		while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0)
			--k;
		h[k++] = pts[i];
	}
	h.resize(k - 1);
	return h;
}

inline bool in_hull(const std::vector<GridPoint>& h, const GridPoint& p)
{
	if (h.size() < 3)
		return false;
	for (std::size_t i = 0; i < h.size(); ++i)
		if (cross(h[i], h[(i + 1) % h.size()], p) < -1e-9)
			return false;
	return true;
}

struct EnvelopeCheck {
	std::size_t probes = 0;
	std::size_t agree = 0;
	// disagreements with no status change anywhere in their 3x3 block
	std::size_t far = 0;
	// envelope claims a probe the oracle hull does not contain, and vice versa
	std::size_t extra = 0;
	std::size_t missing = 0;
	double agreement() const { return probes ? double(agree) / double(probes) : 0.0; }
};

// Compares `env` against the grid envelope of `spec` on an n x n grid over
// [x0, x1] x [y0, y1]. The box must contain the bounded part of the diagram;
// everything beyond it must be reachable from the box along axis directions.
inline EnvelopeCheck compare_envelope(const reinhardt::DomainSpec& spec, const reinhardt::DomainSpec& env, int n,
                                      double x0, double x1, double y0, double y1)
{
	auto X = [&](int i) { return x0 + (x1 - x0) * (i + 0.5) / n; };
	auto Y = [&](int j) { return y0 + (y1 - y0) * (j + 0.5) / n; };
	bool meets_z = false, meets_w = false;
	for (int i = 0; i < n; ++i) {
		meets_z = meets_z || reinhardt::membership_moduli(spec, 0.0, std::exp(Y(i)));
		meets_w = meets_w || reinhardt::membership_moduli(spec, std::exp(X(i)), 0.0);
	}
	constexpr double far_away = -1e4;
	auto inside = [&](double x, double y) { return reinhardt::membership_moduli(spec, std::exp(x), std::exp(y)); };
	std::vector<GridPoint> pts;
	auto add = [&](double x, double y) {
		pts.push_back({x, y});
		if (meets_z)
			pts.push_back({far_away, y});
		if (meets_w)
			pts.push_back({x, far_away});
		if (meets_z && meets_w)
			pts.push_back({far_away, far_away});
	};
	// boundary crossing between an inside and an outside point, inside side kept
	auto crossing = [&](GridPoint in, GridPoint out) {
		for (int it = 0; it < 50; ++it) {
			GridPoint mid{0.5 * (in.x + out.x), 0.5 * (in.y + out.y)};
			(inside(mid.x, mid.y) ? in : out) = mid;
		}
		add(in.x, in.y);
	};
	std::vector<char> member(n * n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			if ((member[i * n + j] = inside(X(i), Y(j))))
				add(X(i), Y(j));
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) {
			GridPoint p{X(i), Y(j)};
			if (i + 1 < n && member[i * n + j] != member[(i + 1) * n + j]) {
				GridPoint q{X(i + 1), Y(j)};
				member[i * n + j] ? crossing(p, q) : crossing(q, p);
			}
			if (j + 1 < n && member[i * n + j] != member[i * n + j + 1]) {
				GridPoint q{X(i), Y(j + 1)};
				member[i * n + j] ? crossing(p, q) : crossing(q, p);
			}
		}
	auto hull = convex_hull(pts);

	std::vector<char> want(n * n), got(n * n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) {
			want[i * n + j] = in_hull(hull, {X(i), Y(j)});
			got[i * n + j] = reinhardt::membership_moduli(env, std::exp(X(i)), std::exp(Y(j)));
		}
	EnvelopeCheck out;
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) {
			++out.probes;
			int k = i * n + j;
			if (want[k] == got[k]) {
				++out.agree;
				continue;
			}
			++(got[k] ? out.extra : out.missing);
			bool edge = false;
			for (int di = -1; di <= 1; ++di)
				for (int dj = -1; dj <= 1; ++dj) {
					int a = i + di, b = j + dj;
					if (a < 0 || b < 0 || a >= n || b >= n)
						continue;
					edge = edge || want[a * n + b] != want[k] || got[a * n + b] != got[k];
				}
			if (!edge)
				++out.far;
		}
	return out;
}

// Random union of 2 or 3 LINE cells through a common point. Offsets are
// multiples of ln 2 so hull edges have small rational slopes. Every cell is
// monotone (exponents >= 0), so its unbounded part is a union of axis rays
// over the probe box [-4 ln2 - 0.3, ln2 + 0.3]^2.
struct RandomUnion {
	reinhardt::DomainSpec spec;
	std::string text;
	double lo, hi;
};

inline RandomUnion random_union(std::mt19937_64& rng)
{
	auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
	auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
	auto pow2 = [](int k) {
		std::ostringstream os;
		os << std::ldexp(1.0, k);
		return os.str();
	};
	std::ostringstream text;
	int cells = pick(2, 3);
	for (int c = 0; c < cells; ++c) {
		if (c > 0)
			text << "cell\n";
		for (const char* var : {"z", "w"}) {
			int up = pick(-1, 1);
			// upper bound e^{up ln2}, optional lower bound below the common point (-1.5 ln2)
			if (coin(0.3))
				text << "band " << pow2(-pick(2, 3)) << " < 1 |" << var << "| < " << pow2(up) << "\n";
			else
				text << "mono " << pow2(-up) << " |" << var << "| < 1\n";
		}
		if (coin(0.6)) {
			int p = pick(1, 2), q = pick(1, 2), k = pick(-2, 0);
			if (p == 2 && q == 2)
				q = 1;
			text << "mono " << pow2(-k) << " |z|^" << p << " |w|^" << q << " < 1\n";
		}
	}
	double l2 = std::log(2.0);
	return {reinhardt::parse_domain(text.str()), text.str(), -4 * l2 - 0.3, l2 + 0.3};
}

} // namespace oracle
