#pragma once

#include "ellim/limits.hpp"
#include "ellim/polytope.hpp"

#include <string>
#include <vector>

namespace ellim {

/// One class of faces up to coordinate permutation, with the function attached to it.
struct FaceCatalogRow {
    FaceDescriptor face;  // lexicographically smallest member of the class
    std::size_t class_size = 0;
    std::string family_tag;
    std::string symmetry_type;         // m = 1 only
    std::string affine_symmetry_type;  // m = 1 only
    LimitFormula formula;
};

struct FaceCatalog {
    int m = 1;
    std::vector<FaceCatalogRow> rows;            // simplicial classes, by dimension
    std::vector<FaceCatalogRow> non_simplicial;  // reported separately
};

/// m = 1: S8-classes of faces of P.  m = 0: classes of faces of PI, PII and
/// PIII under their own coordinate symmetries, each face listed once, under
/// the first piece (in the order PI, PII, PIII) that contains it.
FaceCatalog catalog_simplicial_faces(int m = 1);

/// Row of the catalog containing the class of face (m = 1).
const FaceCatalogRow& catalog_row_of(const FaceDescriptor& face);

}  // namespace ellim
