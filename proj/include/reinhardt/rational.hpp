#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace reinhardt {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Exponents in this library are small, so 64-bit storage with 128-bit
/// intermediates is plenty; overflow is reported rather than wrapped.
class Rational {
public:
	constexpr Rational() = default;
	constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
	Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

	std::int64_t num() const { return num_; }
	std::int64_t den() const { return den_; }

	bool is_integer() const { return den_ == 1; }
	bool is_zero() const { return num_ == 0; }
	int sign() const { return (num_ > 0) - (num_ < 0); }
	double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

	Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

	friend Rational operator+(const Rational& a, const Rational& b)
	{
		return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
		                 static_cast<__int128>(a.den_) * b.den_);
	}
	friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
	friend Rational operator*(const Rational& a, const Rational& b)
	{
		return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
	}
	friend Rational operator/(const Rational& a, const Rational& b)
	{
		if (b.num_ == 0)
			throw std::domain_error("rational division by zero");
		return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
	}
	Rational& operator+=(const Rational& o) { return *this = *this + o; }
	Rational& operator-=(const Rational& o) { return *this = *this - o; }
	Rational& operator*=(const Rational& o) { return *this = *this * o; }
	Rational& operator/=(const Rational& o) { return *this = *this / o; }

	friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
	friend bool operator<(const Rational& a, const Rational& b)
	{
		return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
	}
	friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
	friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
	friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

	std::string str() const
	{
		return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
	}
	friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

	/// Parses "p" or "p/q" with optional sign.
	static Rational parse(const std::string& text);

private:
	static Rational from_wide(__int128 n, __int128 d)
	{
		if (d == 0)
			throw std::domain_error("rational with zero denominator");
		if (d < 0) {
			n = -n;
			d = -d;
		}
		__int128 a = n < 0 ? -n : n, b = d;
		while (b != 0) {
			__int128 t = a % b;
			a = b;
			b = t;
		}
		if (a > 1) {
			n /= a;
			d /= a;
		}
		constexpr __int128 lim = INT64_MAX;
		if (n > lim || n < -lim || d > lim)
			throw std::overflow_error("rational overflow");
		Rational r;
		r.num_ = static_cast<std::int64_t>(n);
		r.den_ = static_cast<std::int64_t>(d);
		return r;
	}

	void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

	std::int64_t num_ = 0;
	std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// gcd over rationals: the largest rational g with a/g and b/g both integers.
inline Rational rational_gcd(const Rational& a, const Rational& b)
{
	std::int64_t n = std::gcd(a.num(), b.num());
	std::int64_t d = std::lcm(a.den(), b.den());
	if (n == 0)
		return Rational(0);
	return Rational(n, d);
}

inline Rational Rational::parse(const std::string& text)
{
	auto slash = text.find('/');
	try {
		std::size_t used = 0;
		if (slash == std::string::npos) {
			auto v = std::stoll(text, &used);
			if (used != text.size())
				throw std::invalid_argument(text);
			return Rational(v);
		}
		std::string a = text.substr(0, slash), b = text.substr(slash + 1);
		auto n = std::stoll(a, &used);
		if (used != a.size())
			throw std::invalid_argument(text);
		auto d = std::stoll(b, &used);
		if (used != b.size())
			throw std::invalid_argument(text);
		return Rational(n, d);
	} catch (const std::logic_error&) {
		throw std::invalid_argument("malformed rational '" + text + "'");
	}
}

} // namespace reinhardt
