#pragma once

#include <string>
#include <vector>

#include "pfm/complex.hpp"
#include "pfm/foliation.hpp"

namespace pfm {

struct IoFailure : GeometryError {
  using GeometryError::GeometryError;
};

// Text space-definition format, versioned, lossless round-trip (coordinates
// written with 17 significant digits):
//
//   space 1
//   name <rest of line>
//   dim <2|3>
//   cell
//   v <x> <y> [<z>]        (one per vertex)
//   f <i0> <i1> ...        (one per facet, vertex cycle)
//   glue <src_cell> <src_facet> <dst_cell> <dst_facet> <dst_vertices...>
std::string space_to_string(const Complex& cx);
Complex space_from_string(const std::string& text);
void save_space(const Complex& cx, const std::string& path);
Complex load_space(const std::string& path);

// Wavefront OBJ with one group per leaf named leaf_<level>, vertices
// deduplicated within 1e-9, faces wound counterclockwise around each
// piece's normal. Dimension-2 leaves export as line elements.
std::string obj_from_leaves(const std::vector<Leaf>& leaves);
void export_obj(const std::vector<Leaf>& leaves, const std::string& path);

}  // namespace pfm
