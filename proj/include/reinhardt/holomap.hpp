#pragma once

#include "reinhardt/errors.hpp"
#include "reinhardt/rational.hpp"
#include "reinhardt/spec_model.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace reinhardt {

/// Raised by compose() when the two maps cannot be chained.
class ModelMismatch : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// unimodular * prod (zeta - a_k) / (1 - conj(a_k) zeta)
struct BlaschkeProduct {
	std::vector<complex> zeros;
	complex unimodular{1.0, 0.0};

	std::size_t degree() const { return zeros.size(); }
	bool vanishes_at_zero() const;
};

/// Throws EvalError for |zeta| > 1 + 1e-12.
complex blaschke_eval(const BlaschkeProduct& b, complex zeta);
/// Throws DomainError for zeros outside the open unit disc or a
/// non-unimodular constant.
void check_blaschke(const BlaschkeProduct& b);

using IntMatrix = std::array<std::array<std::int64_t, 2>, 2>;

/// (z, w) -> (k1 z^a w^b, k2 z^c w^d) with exponents [[a, b], [c, d]].
struct ElementaryMap {
	IntMatrix exponents{{{1, 0}, {0, 1}}};
	std::array<complex, 2> constants{complex(1.0), complex(1.0)};

	std::int64_t det() const { return exponents[0][0] * exponents[1][1] - exponents[0][1] * exponents[1][0]; }
};

enum class BlaschkeCase { I, II, III };

const char* case_name(BlaschkeCase c);

/// Cases i-ii:  z -> K1 z^a w^b B(A1 z^p1 w^q1),  w -> K2 w^c
/// Case iii:    z -> K1 z^a B(A1 z),               w -> K2 w^b B2(C w)
/// swap_variables exchanges (z, w) before evaluating, swap_components
/// exchanges the two outputs afterwards.
struct BlaschkeMonomialMap {
	BlaschkeCase kase = BlaschkeCase::I;
	std::int64_t a = 1;
	std::int64_t b = 0;
	std::int64_t c = 1;
	std::int64_t p1 = 1;
	std::int64_t q1 = 0;
	double A1 = 1.0;
	double C = 1.0;
	BlaschkeProduct blaschke;
	BlaschkeProduct blaschke2;
	std::array<complex, 2> constants{complex(1.0), complex(1.0)};
	bool swap_components = false;
	bool swap_variables = false;
};

/// Automorphism of D = {|w| > exp(|z|^2)}:
///   z -> e^{i t1} z + s,  w -> e^{i t2} exp(2 conj(s) e^{i t1} z + |s|^2) w
struct AutD {
	double t1 = 0.0;
	double t2 = 0.0;
	complex s{1.0, 0.0};
};

/// Automorphism of Omega^alpha = {|z|^2 + |w|^alpha < 1}:
///   z -> e^{i t1} (z - a) / (1 - conj(a) z)
///   w -> e^{i t2} (1 - |a|^2)^{1/alpha} w / (1 - conj(a) z)^{2/alpha}
struct AutOmega {
	Rational alpha{2};
	complex a{0.5, 0.0};
	double t1 = 0.0;
	double t2 = 0.0;
};

/// Ball automorphism U o phi_a, with phi_a the involution exchanging a and 0.
struct AutBall {
	std::array<complex, 2> a{complex(0.0), complex(0.0)};
	std::array<std::array<complex, 2>, 2> U{{{complex(1.0), complex(0.0)}, {complex(0.0), complex(1.0)}}};
};

using ModelAut = std::variant<AutD, AutOmega, AutBall>;

enum class ModelDomain { D, Omega, Ball };

const char* model_name(ModelDomain m);

/// g o mid o h
struct CompositeMap {
	ElementaryMap h;
	ModelAut mid;
	ElementaryMap g;
	ModelDomain model = ModelDomain::Ball;
};

using HoloMap = std::variant<ElementaryMap, BlaschkeMonomialMap, CompositeMap>;

Point elementary_eval(const ElementaryMap& m, const Point& p);
Point aut_eval(const ModelAut& f, const Point& p);

/// Throws EvalError on an axis violation (negative exponent at a zero
/// coordinate) or when the intermediate point of a composite leaves the
/// model domain by more than 1e-9.
Point map_eval(const HoloMap& m, const Point& p);

/// Complex Jacobian determinant by central differences (step 1e-6) with one
/// Richardson extrapolation.
complex jacobian_det(const HoloMap& m, const Point& p);

/// Defining function of the model domain; positive inside.
double model_defect(ModelDomain model, const Rational& alpha, const Point& p);

/// Sphere charts of the four model tube hypersurfaces, landing on
/// Re w = |z|^2. Type 4 throws EvalError at e^w = 1.
Point theta_eval(int type, const Point& p);

struct DeckGroup {
	int type = 2;
	std::array<double, 2> alpha{};
	std::array<double, 2> beta{};
};

/// One element of a deck group, acting on the ball realization of its type.
struct DeckElement {
	int type = 2;
	double alpha1 = 0.0;
	double alpha2 = 0.0;
	Point apply(const Point& p) const;
};

/// The lattice element n*alpha + m*beta. Throws DomainError if the
/// generators are dependent.
DeckElement deck_transform(const DeckGroup& group, std::int64_t n, std::int64_t m);

/// outer o inner. Elementary pairs fuse; an elementary map on either side of
/// a composite is absorbed into its g or h. Anything else throws
/// ModelMismatch.
HoloMap compose(const HoloMap& outer, const HoloMap& inner);

/// For a ball automorphism: does the image of the slice {z = 0} (resp.
/// {w = 0}) avoid lying inside the coordinate axes?
std::pair<bool, bool> ball_axis_conditions(const AutBall& f);

/// Structural problems with a map's parameters, as readable messages;
/// empty when the map satisfies the invariants of its family.
std::vector<std::string> structural_issues(const HoloMap& m);

nlohmann::json to_json(const HoloMap& m);
HoloMap map_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(complex c);
complex complex_from_json(const nlohmann::json& j);

} // namespace reinhardt
