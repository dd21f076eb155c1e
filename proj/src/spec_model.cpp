#include "reinhardt/spec_model.hpp"

#include "reinhardt/errors.hpp"
#include "reinhardt/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <tuple>

namespace reinhardt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Search window for log-moduli. e^400 is far beyond anything a bounded
// domain with sane coefficients reaches.
constexpr double kLogWindow = 400.0;

} // namespace

double Monomial::value(double rz, double rw) const
{
	const bool zero_z = rz == 0.0, zero_w = rw == 0.0;
	if ((zero_z && p.sign() > 0) || (zero_w && q.sign() > 0))
		return 0.0;
	if ((zero_z && p.sign() < 0) || (zero_w && q.sign() < 0))
		return kInf;
	double lv = std::log(coeff);
	if (!p.is_zero())
		lv += p.to_double() * std::log(rz);
	if (!q.is_zero())
		lv += q.to_double() * std::log(rw);
	return std::exp(lv);
}

// ---------------------------------------------------------------------------
// Slacks
// ---------------------------------------------------------------------------

double inequality_slack(const Inequality& ineq, double rz, double rw)
{
	return std::visit(
	    [&](const auto& in) -> double {
		    using T = std::decay_t<decltype(in)>;
		    if constexpr (std::is_same_v<T, MonoIneq>) {
			    return 1.0 - in.m.value(rz, rw);
		    } else if constexpr (std::is_same_v<T, SumIneq>) {
			    return 1.0 - (in.first.value(rz, rw) + in.second.value(rz, rw));
		    } else if constexpr (std::is_same_v<T, ExpIneq>) {
			    double m1 = in.lhs.value(rz, rw), m2 = in.rate.value(rz, rw);
			    if (std::isinf(m2) || std::isinf(m1))
				    return -kInf;
			    if (m1 == 0.0)
				    return kInf;
			    return -std::log(m1) - m2;
		    } else if constexpr (std::is_same_v<T, BandIneq>) {
			    double m = in.m.value(rz, rw);
			    if (std::isinf(m))
				    return -kInf;
			    return std::min(m - in.lo, in.hi - m) / in.hi;
		    } else {
			    double r = in.axis == Axis::Z ? rz : rw;
			    return r != 0.0 ? kInf : -kInf;
		    }
	    },
	    ineq);
}

double cell_slack(const Cell& cell, double rz, double rw)
{
	double s = kInf;
	for (const auto& in : cell.inequalities)
		s = std::min(s, inequality_slack(in, rz, rw));
	return s;
}

double signed_slack(const DomainSpec& spec, double rz, double rw)
{
	double s = -kInf;
	for (const auto& c : spec.cells)
		s = std::max(s, cell_slack(c, rz, rw));
	return s;
}

bool membership_moduli(const DomainSpec& spec, double rz, double rw)
{
	return signed_slack(spec, rz, rw) > 0.0;
}

bool membership(const DomainSpec& spec, const Point& point)
{
	return membership_moduli(spec, std::abs(point.z), std::abs(point.w));
}

double margin(const DomainSpec& spec, const Point& point)
{
	double s = signed_slack(spec, std::abs(point.z), std::abs(point.w));
	if (!(s > 0.0))
		throw DomainError("margin requested for a point outside the domain");
	return s;
}

namespace {

// Log-space slack of one inequality given a rule for the log-value of each
// monomial. Concave in (x, y) for every variant.
double ineq_log_slack(const Inequality& ineq, const std::function<double(const Monomial&)>& logv,
                      std::optional<Axis> zero_axis)
{
	return std::visit(
	    [&](const auto& in) -> double {
		    using T = std::decay_t<decltype(in)>;
		    if constexpr (std::is_same_v<T, MonoIneq>) {
			    return -logv(in.m);
		    } else if constexpr (std::is_same_v<T, SumIneq>) {
			    return -numeric::log_sum_exp(logv(in.first), logv(in.second));
		    } else if constexpr (std::is_same_v<T, ExpIneq>) {
			    double l2 = logv(in.rate);
			    if (l2 == kInf)
				    return -kInf;
			    return -logv(in.lhs) - numeric::safe_exp(l2);
		    } else if constexpr (std::is_same_v<T, BandIneq>) {
			    double l = logv(in.m);
			    if (std::isinf(l))
				    return -kInf;
			    return std::min(std::log(in.hi) - l, l - std::log(in.lo));
		    } else {
			    return zero_axis && *zero_axis == in.axis ? -kInf : kInf;
		    }
	    },
	    ineq);
}

double capped_min(const Cell& cell, const std::function<double(const Monomial&)>& logv, std::optional<Axis> zero_axis)
{
	double s = 1.0;
	for (const auto& in : cell.inequalities) {
		s = std::min(s, ineq_log_slack(in, logv, zero_axis));
		if (std::isnan(s))
			return -kInf;
	}
	return s;
}

} // namespace

double cell_log_slack(const Cell& cell, double x, double y)
{
	return capped_min(cell, [&](const Monomial& m) { return m.log_value(x, y); }, std::nullopt);
}

bool cell_meets_axis(const Cell& cell, Axis axis)
{
	if (cell_slack(cell, 0.0, 0.0) > 0.0)
		return true;
	// Along the axis the other coordinate has log-modulus t.
	auto at = [&](double t) {
		auto logv = [&](const Monomial& m) -> double {
			const Rational& on_axis = axis == Axis::Z ? m.p : m.q;
			const Rational& off_axis = axis == Axis::Z ? m.q : m.p;
			if (on_axis.sign() > 0)
				return -kInf;
			if (on_axis.sign() < 0)
				return kInf;
			return std::log(m.coeff) + off_axis.to_double() * t;
		};
		return capped_min(cell, logv, axis);
	};
	return numeric::golden_max(at, -kLogWindow, kLogWindow, 1e-12).value > 0.0;
}

bool meets_axis(const DomainSpec& spec, Axis axis)
{
	return std::any_of(spec.cells.begin(), spec.cells.end(), [&](const Cell& c) { return cell_meets_axis(c, axis); });
}

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v)
{
	char buf[64];
	for (int prec = 15; prec <= 17; ++prec) {
		std::snprintf(buf, sizeof buf, "%.*g", prec, v);
		if (std::strtod(buf, nullptr) == v)
			break;
	}
	return buf;
}

std::string format_factors(const Monomial& m)
{
	std::string out;
	if (!m.p.is_zero())
		out += " |z|^" + m.p.str();
	if (!m.q.is_zero())
		out += " |w|^" + m.q.str();
	return out;
}

std::string format_monomial(const Monomial& m) { return format_double(m.coeff) + format_factors(m); }

} // namespace

std::string to_text(const Inequality& ineq)
{
	return std::visit(
	    [](const auto& in) -> std::string {
		    using T = std::decay_t<decltype(in)>;
		    if constexpr (std::is_same_v<T, MonoIneq>)
			    return "mono " + format_monomial(in.m) + " < 1";
		    else if constexpr (std::is_same_v<T, SumIneq>)
			    return "sum " + format_monomial(in.first) + " + " + format_monomial(in.second) + " < 1";
		    else if constexpr (std::is_same_v<T, ExpIneq>)
			    return "exp " + format_monomial(in.lhs) + " < exp(-" + format_monomial(in.rate) + ")";
		    else if constexpr (std::is_same_v<T, BandIneq>)
			    return "band " + format_double(in.lo) + " < " + format_monomial(in.m) + " < " + format_double(in.hi);
		    else
			    return std::string("puncture ") + axis_name(in.axis);
	    },
	    ineq);
}

std::string to_text(const DomainSpec& spec)
{
	std::ostringstream os;
	if (!spec.label.empty())
		os << "label " << spec.label << "\n";
	for (const auto& n : spec.notes)
		os << "note " << n << "\n";
	for (std::size_t i = 0; i < spec.cells.size(); ++i) {
		if (i > 0)
			os << "cell\n";
		for (const auto& in : spec.cells[i].inequalities)
			os << to_text(in) << "\n";
	}
	return os.str();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
	enum Kind { Word, Number, AbsZ, AbsW, Symbol, End } kind = End;
	std::string text;
	int column = 0;
};

class StatementParser {
public:
	StatementParser(std::string_view text, int line, int column_offset)
	: text_(text)
	, line_(line)
	, offset_(column_offset)
	{
		advance();
	}

	// Returns nullopt for statements that do not produce an inequality.
	struct Result {
		enum Kind { Ineq, NewCell, Label, Note } kind;
		Inequality ineq;
		std::string text;
	};

	Result parse()
	{
		if (tok_.kind != Token::Word)
			fail("expected a keyword");
		std::string kw = tok_.text;
		int kw_col = tok_.column;
		if (kw == "cell" || kw == "or") {
			advance();
			expect_end();
			return {Result::NewCell, {}, {}};
		}
		if (kw == "label" || kw == "note") {
			std::size_t after = static_cast<std::size_t>(kw_col - offset_ - 1) + kw.size();
			std::string rest(trim(text_.substr(after)));
			return {kw == "label" ? Result::Label : Result::Note, {}, rest};
		}
		advance();
		Inequality ineq;
		if (kw == "mono") {
			Monomial m = monomial();
			expect_symbol("<");
			double rhs = positive_number("right-hand side");
			m.coeff /= rhs;
			ineq = MonoIneq{m};
		} else if (kw == "sum") {
			Monomial a = monomial();
			expect_symbol("+");
			Monomial b = monomial();
			expect_symbol("<");
			double rhs = positive_number("right-hand side");
			a.coeff /= rhs;
			b.coeff /= rhs;
			if (a.same_exponents(b))
				fail_at("the two monomials of a sum must be distinct", kw_col);
			ineq = SumIneq{a, b};
		} else if (kw == "exp") {
			Monomial a = monomial();
			expect_symbol("<");
			if (tok_.kind != Token::Word || tok_.text != "exp")
				fail("expected 'exp('");
			advance();
			expect_symbol("(");
			expect_symbol("-");
			Monomial b = monomial();
			expect_symbol(")");
			ineq = ExpIneq{a, b};
		} else if (kw == "band") {
			int lo_col = tok_.column;
			double lo = number("lower bound");
			expect_symbol("<");
			Monomial m = monomial();
			expect_symbol("<");
			double hi = number("upper bound");
			if (lo < 0.0)
				fail_at("band lower bound must be nonnegative", lo_col);
			if (!(lo < hi))
				fail_at("band requires lower bound < upper bound", lo_col);
			ineq = BandIneq{m, lo, hi};
		} else if (kw == "puncture") {
			if (tok_.kind != Token::Word || (tok_.text != "z" && tok_.text != "w"))
				fail("expected 'z' or 'w' after puncture");
			ineq = PunctureIneq{tok_.text == "z" ? Axis::Z : Axis::W};
			advance();
		} else {
			fail_at("unknown keyword '" + kw + "'", kw_col);
		}
		expect_end();
		return {Result::Ineq, ineq, {}};
	}

private:
	static std::string_view trim(std::string_view s)
	{
		while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
			s.remove_prefix(1);
		while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
			s.remove_suffix(1);
		return s;
	}

	[[noreturn]] void fail(const std::string& msg) const { fail_at(msg, tok_.column); }
	[[noreturn]] void fail_at(const std::string& msg, int column) const { throw ParseError(msg, line_, column); }

	void advance()
	{
		while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
			++pos_;
		tok_ = Token{};
		tok_.column = offset_ + static_cast<int>(pos_) + 1;
		if (pos_ >= text_.size())
			return;
		char c = text_[pos_];
		if (std::isalpha(static_cast<unsigned char>(c))) {
			std::size_t s = pos_;
			while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
				++pos_;
			tok_.kind = Token::Word;
			tok_.text = std::string(text_.substr(s, pos_ - s));
			return;
		}
		if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
			std::size_t s = pos_;
			while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
				++pos_;
			if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
				std::size_t save = pos_;
				++pos_;
				if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
					++pos_;
				if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
					while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
						++pos_;
				} else {
					pos_ = save;
				}
			}
			tok_.kind = Token::Number;
			tok_.text = std::string(text_.substr(s, pos_ - s));
			return;
		}
		if (c == '|' && pos_ + 2 < text_.size() && text_[pos_ + 2] == '|' &&
		    (text_[pos_ + 1] == 'z' || text_[pos_ + 1] == 'w')) {
			tok_.kind = text_[pos_ + 1] == 'z' ? Token::AbsZ : Token::AbsW;
			tok_.text = std::string(text_.substr(pos_, 3));
			pos_ += 3;
			return;
		}
		if (std::string_view("<+()-^/").find(c) != std::string_view::npos) {
			tok_.kind = Token::Symbol;
			tok_.text = std::string(1, c);
			++pos_;
			return;
		}
		fail("unexpected character '" + std::string(1, c) + "'");
	}

	void expect_symbol(const char* s)
	{
		if (tok_.kind != Token::Symbol || tok_.text != s)
			fail(std::string("expected '") + s + "'");
		advance();
	}

	void expect_end()
	{
		if (tok_.kind != Token::End)
			fail("unexpected trailing input '" + tok_.text + "'");
	}

	double number(const char* what)
	{
		bool negative = false;
		if (tok_.kind == Token::Symbol && tok_.text == "-") {
			negative = true;
			advance();
		}
		if (tok_.kind != Token::Number)
			fail(std::string("expected a number for the ") + what);
		double v = 0.0;
		auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), v);
		if (res.ec != std::errc() || res.ptr != tok_.text.data() + tok_.text.size() || !std::isfinite(v))
			fail("malformed number '" + tok_.text + "'");
		advance();
		return negative ? -v : v;
	}

	double positive_number(const char* what)
	{
		int col = tok_.column;
		double v = number(what);
		if (!(v > 0.0))
			fail_at(std::string(what) + " must be positive", col);
		return v;
	}

	std::int64_t integer()
	{
		if (tok_.kind != Token::Number || tok_.text.find_first_not_of("0123456789") != std::string::npos)
			fail("expected an integer exponent");
		std::int64_t v = 0;
		auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), v);
		if (res.ec != std::errc())
			fail("exponent out of range");
		advance();
		return v;
	}

	Rational exponent()
	{
		bool paren = false;
		if (tok_.kind == Token::Symbol && tok_.text == "(") {
			paren = true;
			advance();
		}
		int sign = 1;
		if (tok_.kind == Token::Symbol && (tok_.text == "-" || tok_.text == "+")) {
			sign = tok_.text == "-" ? -1 : 1;
			advance();
		}
		std::int64_t n = integer();
		std::int64_t d = 1;
		if (tok_.kind == Token::Symbol && tok_.text == "/") {
			advance();
			int col = tok_.column;
			d = integer();
			if (d == 0)
				fail_at("zero denominator in exponent", col);
		}
		if (paren)
			expect_symbol(")");
		return Rational(sign * n, d);
	}

	Monomial monomial()
	{
		Monomial m;
		int col = tok_.column;
		m.coeff = number("coefficient");
		if (!(m.coeff > 0.0))
			fail_at("coefficient must be positive", col);
		bool seen_z = false, seen_w = false;
		while (tok_.kind == Token::AbsZ || tok_.kind == Token::AbsW) {
			bool is_z = tok_.kind == Token::AbsZ;
			if ((is_z && seen_z) || (!is_z && seen_w))
				fail("repeated factor " + tok_.text);
			advance();
			Rational e(1);
			if (tok_.kind == Token::Symbol && tok_.text == "^") {
				advance();
				e = exponent();
			}
			(is_z ? m.p : m.q) = e;
			(is_z ? seen_z : seen_w) = true;
		}
		return m;
	}

	std::string_view text_;
	int line_;
	int offset_;
	std::size_t pos_ = 0;
	Token tok_;
};

} // namespace

DomainSpec parse_domain(std::string_view text)
{
	DomainSpec spec;
	Cell current;
	int line_no = 0;
	std::size_t start = 0;
	int last_line = 1;
	while (start <= text.size()) {
		std::size_t nl = text.find('\n', start);
		std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
		++line_no;
		if (!line.empty() && line.back() == '\r')
			line.remove_suffix(1);
		if (auto hash = line.find('#'); hash != std::string_view::npos)
			line = line.substr(0, hash);
		std::size_t s = 0;
		while (s <= line.size()) {
			std::size_t semi = line.find(';', s);
			std::string_view stmt = line.substr(s, semi == std::string_view::npos ? std::string_view::npos : semi - s);
			bool blank = std::all_of(stmt.begin(), stmt.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
			if (!blank) {
				StatementParser p(stmt, line_no, static_cast<int>(s));
				auto r = p.parse();
				switch (r.kind) {
				case StatementParser::Result::Ineq:
					current.inequalities.push_back(r.ineq);
					last_line = line_no;
					break;
				case StatementParser::Result::NewCell:
					if (!current.inequalities.empty())
						spec.cells.push_back(std::move(current));
					current = Cell{};
					break;
				case StatementParser::Result::Label:
					spec.label = r.text;
					break;
				case StatementParser::Result::Note:
					spec.notes.push_back(r.text);
					break;
				}
			}
			if (semi == std::string_view::npos)
				break;
			s = semi + 1;
		}
		if (nl == std::string_view::npos)
			break;
		start = nl + 1;
	}
	if (!current.inequalities.empty())
		spec.cells.push_back(std::move(current));
	if (spec.cells.empty())
		throw ParseError("domain has no inequalities", last_line, 1);
	return spec;
}

DomainSpec load_domain(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot open domain file '" + path + "'");
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_domain(buf.str());
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

namespace {

Rational leading(const Monomial& m) { return m.p.is_zero() ? m.q : m.p; }

bool zero_exponents(const Monomial& m) { return m.p.is_zero() && m.q.is_zero(); }

// Raise m to the power 1/g so the exponents become coprime integers.
Rational reduce_exponents(Monomial& m)
{
	Rational g = rational_gcd(m.p, m.q);
	if (g.is_zero())
		return Rational(1);
	m.p /= g;
	m.q /= g;
	m.coeff = std::pow(m.coeff, 1.0 / g.to_double());
	return g;
}

Monomial negate(Monomial m)
{
	m.p = -m.p;
	m.q = -m.q;
	m.coeff = 1.0 / m.coeff;
	return m;
}

bool exps_less(const Monomial& a, const Monomial& b)
{
	return std::tie(a.p, a.q) < std::tie(b.p, b.q);
}

struct EmptyCell {};

// Canonical form of a single inequality; nullopt when it always holds.
std::optional<Inequality> canonical(const Inequality& in);

std::optional<Inequality> canonical_band(BandIneq b)
{
	b.lo /= b.m.coeff;
	b.hi /= b.m.coeff;
	b.m.coeff = 1.0;
	if (zero_exponents(b.m)) {
		if (b.lo < 1.0 && 1.0 < b.hi)
			return std::nullopt;
		throw EmptyCell{};
	}
	Rational g = reduce_exponents(b.m);
	b.m.coeff = 1.0;
	double inv = 1.0 / g.to_double();
	b.lo = b.lo > 0.0 ? std::pow(b.lo, inv) : 0.0;
	b.hi = std::pow(b.hi, inv);
	if (b.lo == 0.0 && b.m.p.sign() <= 0 && b.m.q.sign() <= 0) {
		// 0 < m always holds for a monomial that never vanishes.
		Monomial m = b.m;
		m.coeff = 1.0 / b.hi;
		return MonoIneq{m};
	}
	if (leading(b.m).sign() < 0 && b.lo > 0.0) {
		b.m.p = -b.m.p;
		b.m.q = -b.m.q;
		double lo = 1.0 / b.hi, hi = 1.0 / b.lo;
		b.lo = lo;
		b.hi = hi;
	}
	if (!(b.lo < b.hi))
		throw EmptyCell{};
	return b;
}

std::optional<Inequality> canonical(const Inequality& in)
{
	if (auto* mo = std::get_if<MonoIneq>(&in)) {
		Monomial m = mo->m;
		if (zero_exponents(m)) {
			if (m.coeff < 1.0)
				return std::nullopt;
			throw EmptyCell{};
		}
		reduce_exponents(m);
		return MonoIneq{m};
	}
	if (auto* su = std::get_if<SumIneq>(&in)) {
		Monomial a = su->first, b = su->second;
		if (a.same_exponents(b)) {
			a.coeff += b.coeff;
			return canonical(MonoIneq{a});
		}
		if (zero_exponents(a))
			std::swap(a, b);
		if (zero_exponents(b)) {
			if (b.coeff >= 1.0)
				throw EmptyCell{};
			a.coeff /= (1.0 - b.coeff);
			return canonical(MonoIneq{a});
		}
		if (exps_less(a, b))
			std::swap(a, b);
		return SumIneq{a, b};
	}
	if (auto* ex = std::get_if<ExpIneq>(&in)) {
		Monomial lhs = ex->lhs, rate = ex->rate;
		if (zero_exponents(lhs)) {
			if (lhs.coeff >= 1.0)
				throw EmptyCell{};
			rate.coeff /= -std::log(lhs.coeff);
			return canonical(MonoIneq{rate});
		}
		if (zero_exponents(rate)) {
			lhs.coeff *= std::exp(rate.coeff);
			return canonical(MonoIneq{lhs});
		}
		Rational g = reduce_exponents(lhs);
		rate.coeff /= g.to_double();
		return ExpIneq{lhs, rate};
	}
	if (auto* ba = std::get_if<BandIneq>(&in))
		return canonical_band(*ba);
	return in;
}

// Merges pairs of inequalities on the same monomial into tighter ones.
// Returns true when something changed.
bool merge_pass(std::vector<Inequality>& v)
{
	for (std::size_t i = 0; i < v.size(); ++i) {
		for (std::size_t j = 0; j < v.size(); ++j) {
			if (i == j)
				continue;
			if (v[i] == v[j]) {
				v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
				return true;
			}
			auto* mi = std::get_if<MonoIneq>(&v[i]);
			auto* mj = std::get_if<MonoIneq>(&v[j]);
			auto* bi = std::get_if<BandIneq>(&v[i]);
			auto* bj = std::get_if<BandIneq>(&v[j]);
			if (mi && mj && mi->m.same_exponents(mj->m)) {
				mi->m.coeff = std::max(mi->m.coeff, mj->m.coeff);
				v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
				return true;
			}
			if (mi && mj && mi->m.same_exponents(negate(mj->m)) && leading(mi->m).sign() > 0) {
				// c1 M < 1 and c2 M^-1 < 1  <=>  c2 < M < 1/c1
				Monomial unit = mi->m;
				unit.coeff = 1.0;
				BandIneq b{unit, mj->m.coeff, 1.0 / mi->m.coeff};
				if (!(b.lo < b.hi))
					throw EmptyCell{};
				v[i] = b;
				v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
				return true;
			}
			if (bi && mj) {
				if (bi->m.same_exponents(mj->m)) {
					bi->hi = std::min(bi->hi, 1.0 / mj->m.coeff);
				} else if (bi->m.same_exponents(negate(mj->m))) {
					bi->lo = std::max(bi->lo, mj->m.coeff);
				} else {
					continue;
				}
				if (!(bi->lo < bi->hi))
					throw EmptyCell{};
				v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
				return true;
			}
			if (bi && bj && bi->m.same_exponents(bj->m)) {
				bi->lo = std::max(bi->lo, bj->lo);
				bi->hi = std::min(bi->hi, bj->hi);
				if (!(bi->lo < bi->hi))
					throw EmptyCell{};
				v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
				return true;
			}
		}
	}
	return false;
}

auto sort_key(const Inequality& in)
{
	std::vector<double> k{static_cast<double>(in.index())};
	auto push = [&](const Monomial& m) {
		k.push_back(m.p.to_double());
		k.push_back(m.q.to_double());
		k.push_back(m.coeff);
	};
	std::visit(
	    [&](const auto& x) {
		    using T = std::decay_t<decltype(x)>;
		    if constexpr (std::is_same_v<T, MonoIneq>) {
			    push(x.m);
		    } else if constexpr (std::is_same_v<T, SumIneq>) {
			    push(x.first);
			    push(x.second);
		    } else if constexpr (std::is_same_v<T, ExpIneq>) {
			    push(x.lhs);
			    push(x.rate);
		    } else if constexpr (std::is_same_v<T, BandIneq>) {
			    push(x.m);
			    k.push_back(x.lo);
			    k.push_back(x.hi);
		    } else {
			    k.push_back(x.axis == Axis::Z ? 0 : 1);
		    }
	    },
	    in);
	return k;
}

bool cell_nonempty(const Cell& cell)
{
	auto best = numeric::maximize_2d([&](double x, double y) { return cell_log_slack(cell, x, y); }, -kLogWindow,
	                                 kLogWindow, -kLogWindow, kLogWindow, 1e-11);
	return best.value > 0.0;
}

} // namespace

Cell normalize_cell(const Cell& cell)
{
	Cell out;
	try {
		for (const auto& in : cell.inequalities)
			if (auto c = canonical(in))
				out.inequalities.push_back(*c);
		while (merge_pass(out.inequalities)) {
			for (auto& in : out.inequalities)
				if (auto* b = std::get_if<BandIneq>(&in))
					if (auto c = canonical_band(*b))
						in = *c;
		}
	} catch (const EmptyCell&) {
		throw DomainError("cell describes an empty region");
	}
	std::sort(out.inequalities.begin(), out.inequalities.end(),
	          [](const Inequality& a, const Inequality& b) { return sort_key(a) < sort_key(b); });
	if (out.inequalities.empty())
		throw DomainError("cell has no constraints left (unbounded region)");
	if (!cell_nonempty(out))
		throw DomainError("cell describes an empty region");
	return out;
}

DomainSpec normalize(const DomainSpec& spec)
{
	DomainSpec out;
	out.label = spec.label;
	out.notes = spec.notes;
	for (const auto& c : spec.cells) {
		Cell n = normalize_cell(c);
		if (std::find(out.cells.begin(), out.cells.end(), n) == out.cells.end())
			out.cells.push_back(std::move(n));
	}
	return out;
}

DomainSpec swap_variables(const DomainSpec& spec)
{
	DomainSpec out = spec;
	auto sw = [](Monomial& m) { std::swap(m.p, m.q); };
	for (auto& c : out.cells)
		for (auto& in : c.inequalities)
			std::visit(
			    [&](auto& x) {
				    using T = std::decay_t<decltype(x)>;
				    if constexpr (std::is_same_v<T, MonoIneq>) {
					    sw(x.m);
				    } else if constexpr (std::is_same_v<T, SumIneq>) {
					    sw(x.first);
					    sw(x.second);
				    } else if constexpr (std::is_same_v<T, ExpIneq>) {
					    sw(x.lhs);
					    sw(x.rate);
				    } else if constexpr (std::is_same_v<T, BandIneq>) {
					    sw(x.m);
				    } else {
					    x.axis = x.axis == Axis::Z ? Axis::W : Axis::Z;
				    }
			    },
			    in);
	return out;
}

} // namespace reinhardt
