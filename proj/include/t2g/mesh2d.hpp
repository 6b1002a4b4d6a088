#pragma once

// Conforming P1 triangulations of thin star domains. Tubes are structured
// grids (ceil((l_j - eps*l)/h) columns x transversal_layers rows, two
// triangles per cell); the junction polygon is triangulated coarsely (fan
// from O when star-shaped, ear clipping otherwise) and refined uniformly so
// that every mouth segment carries exactly the tube's transversal nodes —
// interface nodes are shared by index, never duplicated.

#include <array>
#include <string>
#include <vector>

#include "t2g/thin_domain.hpp"

namespace t2g {

// Region tag of a triangle: tube index j >= 0, or kJunctionRegion.
inline constexpr int kJunctionRegion = -1;
// Boundary tags: outer tube face Gamma_j carries the edge index j >= 0,
// side walls and junction chords carry kSigmaBoundary.
inline constexpr int kSigmaBoundary = -1;

struct Mesh2D {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<int> region;                    // per triangle

  struct BoundaryEdge {
    int a = 0, b = 0;
    int tag = kSigmaBoundary;
  };
  std::vector<BoundaryEdge> boundary;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int tri_count() const { return static_cast<int>(triangles.size()); }
  double tri_area(int t) const;
  double region_area(int tag) const;
};

// transversal_layers >= 2 cells across the tube width; requires h <= eps.
Mesh2D triangulate(const ThinDomainSpec& spec, double h, int transversal_layers);

struct MeshQuality {
  double min_angle_deg = 0.0;
  double max_aspect = 0.0;  // longest edge / shortest edge per triangle, maximum
  int n_nodes = 0;
  int n_tris = 0;
};

MeshQuality mesh_quality(const Mesh2D& mesh);

// Positive areas, no hanging nodes (every edge in <= 2 triangles), disk Euler
// characteristic, and the minimum-angle floor. Throws MeshError.
void validate_mesh(const Mesh2D& mesh, double min_angle_deg = 20.0);

// Plain-text format: node count, "x y" lines, triangle count, "i j k tag"
// lines. %.17g formatting makes the round trip bit-exact. Boundary edges are
// not part of the format; the importer rebuilds them topologically with the
// generic side-wall tag.
std::string mesh_to_text(const Mesh2D& mesh);
Mesh2D mesh_from_text(const std::string& text);

// Standalone structured tube on R * ([y1_lo, y1_hi] x [-half_width, half_width]);
// building block exposed for direct-form tests.
Mesh2D structured_tube_mesh(const Eigen::Matrix2d& R, double y1_lo, double y1_hi,
                            double half_width, int nx, int ny, int region_tag = 0);

// The coarse (unrefined) junction triangles used by the mesher and by the
// junction quadrature in the measure checks.
std::vector<std::array<Vec2, 3>> junction_coarse_triangles(const ThinDomainSpec& spec);

}  // namespace t2g
