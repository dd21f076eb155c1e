#pragma once

#include "reinhardt/holomap.hpp"
#include "reinhardt/numeric.hpp"
#include "reinhardt/spec_model.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reinhardt {

struct SampleConfig {
	std::size_t n_interior = 1000;
	/// Margin levels, strictly decreasing and positive.
	std::vector<double> shells{1e-2, 1e-3, 1e-4};
	std::size_t shell_samples = 200;
	std::uint64_t seed = 0;
	double tolerance = 1e-9;
	unsigned threads = 1;

	/// Throws DomainError on a malformed configuration.
	void validate() const;
};

// Reason codes attached to a failing report.
inline constexpr const char* kReasonContainment = "containment";
inline constexpr const char* kReasonNotProper = "not_proper";
inline constexpr const char* kReasonInvalidMap = "invalid_map";
inline constexpr const char* kReasonInvariant = "invariant";
inline constexpr const char* kReasonLogCommutation = "log_commutation";
inline constexpr const char* kReasonInsufficientSamples = "insufficient_samples";
inline constexpr const char* kReasonEvaluationError = "evaluation_error";

struct ShellStat {
	double delta = 0.0;
	std::size_t samples = 0;
	/// Largest signed slack of D2 at the images; -inf when nothing was sampled.
	double max_image_margin = 0.0;
};

struct VerificationReport {
	std::optional<double> containment_pass_rate;
	std::optional<Point> first_escape;
	std::vector<ShellStat> shells;
	/// Slope of ln(max image margin) against ln(delta).
	std::optional<double> fitted_gamma;
	std::optional<double> jacobian_zero_fraction;
	std::optional<double> invariant_residual_max;
	std::optional<double> log_commutation_residual;
	bool pass = true;
	std::vector<std::string> reasons;
	std::vector<std::string> messages;

	void fail(const std::string& reason, const std::string& message);
	/// Folds another partial report into this one.
	void merge(const VerificationReport& other);
	bool has_reason(const std::string& reason) const;
	nlohmann::json to_json() const;
};

/// Minimum exponent of the shell decay accepted as boundary-to-boundary.
inline constexpr double kMinShellExponent = 0.5;

/// Torus-invariant samples of D: log-moduli uniform in the top 8 units of
/// the diagram's bounding box (rejection), phases uniform. Never on an axis.
/// Returns fewer than n points if rejection keeps failing.
std::vector<Point> sample_interior(const DomainSpec& D, std::size_t n, numeric::Rng& rng);

/// Samples with signed slack of D in [delta/2, delta], found by bisection
/// along random rays in the log diagram.
std::vector<Point> sample_shell(const DomainSpec& D, double delta, std::size_t n, numeric::Rng& rng);

VerificationReport verify_containment(const HoloMap& m, const DomainSpec& D1, const DomainSpec& D2,
                                      const SampleConfig& cfg);
VerificationReport verify_properness(const HoloMap& m, const DomainSpec& D1, const DomainSpec& D2,
                                     const SampleConfig& cfg);
VerificationReport verify_invariants(const ModelAut& mid, const SampleConfig& cfg);
VerificationReport verify_log_commutation(const ElementaryMap& m, const SampleConfig& cfg);

/// Structure, containment, shells, Jacobian health and the exact residuals
/// that apply to the map's kind.
VerificationReport verify(const HoloMap& m, const DomainSpec& D1, const DomainSpec& D2, const SampleConfig& cfg);

} // namespace reinhardt
