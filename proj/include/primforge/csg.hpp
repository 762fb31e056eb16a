#pragma once

#include <cstdint>

#include "primforge/mesh.hpp"

namespace pf {

struct CsgOptions {
  double plane_epsilon = 1e-7;
  double weld_tolerance = 1e-7;
  double jitter = 1e-5;
  int max_retries = 3;
};

struct CsgStats {
  int retries = 0;
  size_t components_cut = 0;
};

/// Solid difference target \ cutter using BSP polygon clipping.
///
/// The target may be a concatenation of overlapping closed shells (as produced
/// by composition); the difference is taken shell by shell, and shells whose
/// bounds miss the cutter are passed through untouched. Faces exposed inside
/// the target inherit the surface group of the nearest target triangle and the
/// cutter's UVs. The result is welded and T-junction free; if it is not
/// watertight the cutter is jittered and the cut retried. Inside-ness of cutter
/// pieces is decided by ray parity against the target shell, so targets that
/// pass through themselves still give crack-free results, possibly with
/// pinched edges or locally flipped faces where the target folds.
///
/// Throws invalid-input for open inputs and invalid-input after max_retries
/// failed attempts.
TriMesh boolean_difference(const TriMesh& target, const TriMesh& cutter,
                           const CsgOptions& opts = {}, CsgStats* stats = nullptr);

// Splits triangle edges at vertices that lie on them (within `tolerance`)
// until no such vertex remains.
TriMesh repair_t_junctions(const TriMesh& mesh, double tolerance);

}  // namespace pf
