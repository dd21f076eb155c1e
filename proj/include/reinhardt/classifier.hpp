#pragma once

#include "reinhardt/holomap.hpp"
#include "reinhardt/logdiagram.hpp"

#include "json.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reinhardt {

/// {p : f is defined at p and f(p) in D}, written in the domain grammar.
DomainSpec pullback(const DomainSpec& D, const ElementaryMap& f);

/// Elementary map with positive real constants e^t.
ElementaryMap elementary_from_log(const IntMatrix& M, const std::array<double, 2>& t);

/// Throws DomainError unless the spec is bounded, a single cell after
/// normalization and pseudoconvex. Returns the normalized spec.
DomainSpec require_classifiable(const DomainSpec& spec, const std::string& role);

/// Translation t with x -> M x + t carrying the log diagram of D1 exactly
/// onto that of D2 (boundary constraints matched one to one).
std::optional<std::array<double, 2>> solve_translation(const DomainSpec& D1, const DomainSpec& D2, const IntMatrix& M);

/// Whether the elementary map f sends D1 properly onto D2: the log diagrams
/// correspond under the induced affine map and, on each coordinate axis, a
/// point lies in D1 exactly when f is defined there with image in D2.
bool is_proper_elementary(const DomainSpec& D1, const DomainSpec& D2, const ElementaryMap& f);

struct ElementarySearch {
	/// All witnesses with |entries| <= bound: |det| ascending, then entries in
	/// decreasing lexicographic order (identity before swap).
	std::vector<ElementaryMap> witnesses;
	/// The existence answer is certified: either a witness was found or every
	/// boundary matching was shown to admit no map at all.
	bool complete = false;
	/// Every matching family was settled exactly, independent of the bound.
	bool exhaustive = false;
	/// A valid map exists whose exponents exceed the bound.
	bool beyond_bound = false;
	int bound = 0;
	std::size_t families = 0;
	std::size_t candidates_tested = 0;

	std::optional<ElementaryMap> best() const
	{
		if (witnesses.empty())
			return std::nullopt;
		return witnesses.front();
	}
};

/// Elementary proper maps D1 -> D2. Candidate exponent matrices come from
/// matching boundary constraints of the two diagrams by type and direction.
ElementarySearch find_elementary(const DomainSpec& D1, const DomainSpec& D2, int bound);

/// Parameters of one of the six non-elementary families.
struct CaseParams {
	std::string tag;
	/// Sub-shape: "bidisc", "triangle", "annular_triangle", "first", "second", ...
	std::string form;
	/// The family matches after exchanging z and w in D1 (resp. D2).
	bool swap_source = false;
	bool swap_target = false;
	std::map<std::string, Rational> ints;
	std::map<std::string, double> coeffs;
	bool sign_ambiguous = false;

	nlohmann::json to_json() const;
	static CaseParams from_json(const nlohmann::json& j);
};

std::vector<CaseParams> match_case(const DomainSpec& D1, const DomainSpec& D2);

/// Free data of a synthesized map; defaults give a valid choice.
struct SynthesisExtras {
	std::optional<BlaschkeProduct> blaschke;
	std::optional<BlaschkeProduct> blaschke2;
	std::array<double, 2> phases{0.0, 0.0};
	std::optional<ModelAut> aut;

	static SynthesisExtras from_json(const nlohmann::json& j);
};

/// Builds a map of the given family from D1 onto D2. Constant moduli are
/// derived from the domain coefficients. Throws DomainError on inconsistent
/// parameters or extras.
HoloMap synthesize(const CaseParams& params, const DomainSpec& D1, const DomainSpec& D2,
                   const SynthesisExtras& extras = {});

enum class Verdict { NoProperMap, ElementaryOnly, NonElementaryAvailable, Unknown };

const char* verdict_name(Verdict v);

struct ClassificationResult {
	Verdict verdict = Verdict::Unknown;
	std::optional<ElementaryMap> witness;
	std::vector<CaseParams> cases;
	int search_bound_used = 0;
	bool complete = false;
	std::string certificate;
	std::vector<std::string> notes;

	nlohmann::json to_json() const;
};

ClassificationResult classify_pair(const DomainSpec& D1, const DomainSpec& D2, int bound);

struct ElementarySelfMap {
	ElementaryMap map;
	/// Per asymptote direction: an eigendirection of M or of M^2.
	std::vector<bool> eigen;
};

struct SelfMapReport {
	bool admits_nonelementary = false;
	/// "triangle", "annular_triangle", "bidisc" or "none".
	std::string matched_form = "none";
	std::vector<RVec2> asymptotes;
	/// Elementary self-maps with |det| >= 2 and |entries| <= bound.
	std::vector<ElementarySelfMap> elementary;
	/// The list above is all there is, at any bound.
	bool exhaustive = false;
	int bound = 0;

	nlohmann::json to_json() const;
};

SelfMapReport analyze_self_maps(const DomainSpec& D, int bound);

nlohmann::json rvec_to_json(const RVec2& v);

} // namespace reinhardt
