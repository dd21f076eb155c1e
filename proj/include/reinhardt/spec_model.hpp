#pragma once

#include "reinhardt/rational.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reinhardt {

using complex = std::complex<double>;

/// A point of C^2.
struct Point {
	complex z;
	complex w;
};

enum class Axis { Z, W };

inline const char* axis_name(Axis a) { return a == Axis::Z ? "z" : "w"; }

/// coeff * |z|^p * |w|^q with coeff > 0 and exact rational exponents.
struct Monomial {
	double coeff = 1.0;
	Rational p;
	Rational q;

	/// Value at the given moduli. A factor with positive exponent at a zero
	/// coordinate makes the whole monomial 0; otherwise a negative exponent at
	/// a zero coordinate makes it +inf.
	double value(double rz, double rw) const;

	/// ln(value) at (ln|z|, ln|w|) = (x, y); only meaningful off the axes.
	double log_value(double x, double y) const
	{
		return std::log(coeff) + p.to_double() * x + q.to_double() * y;
	}

	bool same_exponents(const Monomial& o) const { return p == o.p && q == o.q; }

	friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// m < 1
struct MonoIneq {
	Monomial m;
	friend bool operator==(const MonoIneq&, const MonoIneq&) = default;
};

/// m1 + m2 < 1
struct SumIneq {
	Monomial first;
	Monomial second;
	friend bool operator==(const SumIneq&, const SumIneq&) = default;
};

/// lhs < exp(-rate)
struct ExpIneq {
	Monomial lhs;
	Monomial rate;
	friend bool operator==(const ExpIneq&, const ExpIneq&) = default;
};

/// lo < m < hi, 0 <= lo < hi. The monomial of a band carries coeff 1 after
/// normalization.
struct BandIneq {
	Monomial m;
	double lo = 0.0;
	double hi = 1.0;
	friend bool operator==(const BandIneq&, const BandIneq&) = default;
};

/// The named coordinate is nonzero.
struct PunctureIneq {
	Axis axis = Axis::Z;
	friend bool operator==(const PunctureIneq&, const PunctureIneq&) = default;
};

using Inequality = std::variant<MonoIneq, SumIneq, ExpIneq, BandIneq, PunctureIneq>;

struct Cell {
	std::vector<Inequality> inequalities;
	friend bool operator==(const Cell&, const Cell&) = default;
};

/// A Reinhardt domain in C^2 given as a union of cells, each cell a
/// conjunction of strict inequalities in |z| and |w|.
struct DomainSpec {
	std::vector<Cell> cells;
	std::string label;
	/// Free-form notes carried through parsing, e.g. the rational chosen
	/// in place of an irrational exponent.
	std::vector<std::string> notes;

	friend bool operator==(const DomainSpec& a, const DomainSpec& b) { return a.cells == b.cells; }
};

/// Parses the domain source format (see docs/grammar.md).
/// Throws ParseError with line and column on syntax or semantic errors.
DomainSpec parse_domain(std::string_view text);

/// Reads and parses a file; IO failures raise std::runtime_error.
DomainSpec load_domain(const std::string& path);

/// Canonical source text; parse_domain(to_text(s)) == s.
std::string to_text(const DomainSpec& spec);
std::string to_text(const Inequality& ineq);

/// Signed slack of one inequality at the given moduli: positive iff the
/// inequality holds. See margin() for the normalization.
double inequality_slack(const Inequality& ineq, double rz, double rw);

/// Signed slack of a cell (minimum over its inequalities).
double cell_slack(const Cell& cell, double rz, double rw);

/// Signed slack of the domain (maximum over cells). Positive iff the point
/// is in the domain.
double signed_slack(const DomainSpec& spec, double rz, double rw);

bool membership(const DomainSpec& spec, const Point& point);
bool membership_moduli(const DomainSpec& spec, double rz, double rw);

/// Defining-function proxy for the distance to the boundary: the minimum
/// normalized slack of the best containing cell. Throws DomainError when the
/// point is outside.
double margin(const DomainSpec& spec, const Point& point);

/// Concave log-space slack of a cell at (x, y) = (ln|z|, ln|w|), capped at 1.
/// Its positivity set is the logarithmic diagram of the cell.
double cell_log_slack(const Cell& cell, double x, double y);

/// True when the cell contains a point on the given coordinate axis.
bool cell_meets_axis(const Cell& cell, Axis axis);
bool meets_axis(const DomainSpec& spec, Axis axis);

/// Canonical form: exponents in lowest terms, band monomials with leading
/// exponent positive (when the lower bound is positive) and unit coefficient,
/// duplicates merged, inequalities ordered. Idempotent. Throws DomainError
/// when a cell is empty.
DomainSpec normalize(const DomainSpec& spec);
Cell normalize_cell(const Cell& cell);

/// Exchanges the roles of z and w.
DomainSpec swap_variables(const DomainSpec& spec);

} // namespace reinhardt
