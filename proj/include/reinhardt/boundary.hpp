#pragma once

#include "reinhardt/logdiagram.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace reinhardt {

/// Affine map x -> M x + t of the log plane with rational linear part.
struct AffineMap {
	std::array<std::array<Rational, 2>, 2> M{};
	std::array<double, 2> t{};

	Vec2 apply(const Vec2& p) const;
	Vec2 apply_inverse(const Vec2& p) const;
	Rational det() const { return M[0][0] * M[1][1] - M[0][1] * M[1][0]; }
};

/// The four model tube hypersurfaces, as curves in the log plane:
///   1: Y = X^2   2: Y = e^{2X}   3: cos Y = e^X   4: e^{2X} + e^{2Y} = 1
/// Only 2 and 4 arise from the grammar.
double model_residual(int type, const Vec2& p);

struct NormalForm {
	int type = 0;
	AffineMap map;
};

enum class BoundaryKind { LeviFlat, Torus, Spherical, OutOfGrammar };

const char* boundary_kind_name(BoundaryKind k);

struct BoundaryPiece {
	/// Index of the generating constraint in the cell's log region.
	std::size_t source = 0;
	/// Second constraint of a torus (corner) piece.
	std::optional<std::size_t> partner;
	BoundaryKind kind = BoundaryKind::LeviFlat;
	/// Model type for spherical pieces.
	int model_type = 0;
	std::optional<NormalForm> normal_form;
	/// Parameter interval of the arc along the source curve.
	double t_start = 0.0;
	double t_end = 0.0;
	/// Log-plane position of a torus piece.
	Vec2 point;
};

struct BoundaryReport {
	std::vector<BoundaryPiece> pieces;
	/// Number of corners where two LINE pieces meet.
	std::size_t torus_count = 0;
	bool connected_spherical = false;
	std::vector<std::string> warnings;
	LogRegion region;
};

/// Decomposes the boundary of a bounded, single-cell, pseudoconvex domain.
/// Throws DomainError otherwise.
BoundaryReport classify_boundary(const DomainSpec& spec);

/// Affine normalization of a spherical piece onto its model curve. Throws
/// DomainError for pieces that are not spherical.
NormalForm spherical_normal_form(const BoundaryPiece& piece, const LogRegion& region);
NormalForm spherical_normal_form(const LogConstraint& c);

} // namespace reinhardt
