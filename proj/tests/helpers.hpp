#pragma once

#include <initializer_list>
#include <set>
#include <vector>

#include "collapse/complex.hpp"
#include "oracles.hpp"

namespace testing_helpers {

inline collapse::Complex make_complex(std::uint32_t n, std::uint32_t d,
                                      std::initializer_list<std::vector<collapse::Vertex>> faces) {
  collapse::Complex c(n, d);
  for (const auto& f : faces) c.add_facet(f);
  return c;
}

inline collapse::Complex tetrahedron_boundary(std::uint32_t n = 4) {
  return make_complex(n, 2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

inline collapse::RidgeId ridge(const collapse::Complex& c, std::vector<collapse::Vertex> v) {
  return c.ridge_id(v);
}

inline std::set<oracle::Face> face_set(const collapse::Complex& c) {
  std::set<oracle::Face> out;
  for (auto f : c.facets()) out.insert(c.vertices(f));
  return out;
}

inline std::set<oracle::Face> ridge_set(const collapse::Complex& c, const std::vector<collapse::RidgeId>& ids) {
  std::set<oracle::Face> out;
  for (auto r : ids) out.insert(c.vertices(r));
  return out;
}

}  // namespace testing_helpers
