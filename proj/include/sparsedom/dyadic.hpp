#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsedom/cube.hpp"
#include "sparsedom/grid.hpp"

namespace sparsedom {

/// Pairwise-disjoint dyadic cubes inside the 3-fold dilate of a top cube,
/// with scale-separation and shadow-containment axioms. `shadow` caches the
/// union of the members as a grid mask.
struct StoppingCollection {
    Cube top;
    std::vector<Cube> members;
    Mask shadow;

    bool in_shadow(Index x, Index y = 0) const {
        return x >= 0 && x < shadow.n && (shadow.dim == 1 || (y >= 0 && y < shadow.n)) &&
               shadow.get(x, y);
    }
};

struct StoppingViolation {
    std::string axiom;   // "disjoint" | "inside-3Q" | "separation" | "shadow"
    std::string detail;  // witness cubes / cell
};

struct StoppingValidation {
    bool ok = false;
    std::optional<StoppingViolation> violation;
    std::optional<StoppingCollection> collection;
};

/// Maximal dyadic cubes L with 9L inside the domain and every cell of 9L in E.
/// Output is pairwise disjoint, ordered by scale (descending) then corner.
std::vector<Cube> whitney_maximal(const Mask& E);

/// Checks the three collection axioms:
///   1. members pairwise disjoint, each inside 3*top;
///   2. |s_L - s_L'| >= 8 implies the 7-fold dilates are disjoint;
///   3. for members L whose 3-fold dilate meets 2*top, the cells of 9L lie in
///      the shadow. When `ambient` is given (the full decomposition the
///      members were drawn from), cells covered by no ambient cube are exempt:
///      the check then asserts that every ambient cube meeting such a 9L
///      belongs to the collection itself.
/// On success returns the collection with its cached shadow.
StoppingValidation validate_stopping(const Cube& top, const std::vector<Cube>& members,
                                     int extent,
                                     const std::vector<Cube>* ambient = nullptr);

}  // namespace sparsedom
