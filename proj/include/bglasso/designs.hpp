#pragma once

#include "bglasso/distributions.hpp"
#include "bglasso/matrix_core.hpp"
#include "bglasso/metrics.hpp"

#include <array>
#include <string_view>

namespace bglasso {

enum class DesignKind { ar1, ar2, block, star, circle, full };

inline constexpr std::array<DesignKind, 6> kAllDesigns{DesignKind::ar1,  DesignKind::ar2,    DesignKind::block,
                                                       DesignKind::star, DesignKind::circle, DesignKind::full};

/// "ar1", "ar2", "block", "star", "circle", "full".
std::string_view to_string(DesignKind kind);
DesignKind parse_design_kind(std::string_view name);

struct GraphDesign {
  DesignKind kind;
  Index p;
};

struct TrueModel {
  SymMatrix omega_true;
  SymMatrix sigma_true;
  Adjacency adjacency_true;
};

/// The six simulation structures:
///   ar1    σij = 0.7^|i-j|                                   (p >= 2)
///   ar2    ωii = 1, ω at lag 1 = 0.5, at lag 2 = 0.25        (p >= 3)
///   block  σii = 1, σij = 0.5 within {0..p/2-1} and
///          {p/2..p-1}, 0 across                             (p even)
///   star   ωii = 1, ω0j = 0.1 (hub = first index)            (2 <= p <= 100)
///   circle ωii = 2, ω at lag 1 = 1, ω0,p-1 = 0.9             (p >= 3)
///   full   ωii = 2, ωij = 1                                  (p >= 2)
/// Designs given through Σ get Ω by inversion; entries that vanish in exact
/// arithmetic are set to exactly zero (the tridiagonal band for ar1, a 1e-8
/// magnitude cutoff for block). Throws std::invalid_argument for an
/// unsupported p.
TrueModel build_design(const GraphDesign& design);

/// n independent rows from N(0, sigma_true).
Matrix simulate_data(const TrueModel& model, Index n, RngStream& rng);

/// S = YᵀY, parallel over columns. scatter_matrix_serial is the reference.
SymMatrix scatter_matrix(const Matrix& y);
SymMatrix scatter_matrix_serial(const Matrix& y);

}  // namespace bglasso
