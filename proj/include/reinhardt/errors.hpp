#pragma once

#include <stdexcept>
#include <string>

namespace reinhardt {

/// Malformed domain or map source text. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
	ParseError(const std::string& what, int line, int column)
	: std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what)
	, line_(line)
	, column_(column)
	{}

	int line() const { return line_; }
	int column() const { return column_; }

private:
	int line_;
	int column_;
};

/// Well-formed input that violates a semantic constraint (empty region,
/// non-positive coefficient, precondition of an analysis).
class DomainError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Failure while evaluating a map at a point.
class EvalError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

} // namespace reinhardt
