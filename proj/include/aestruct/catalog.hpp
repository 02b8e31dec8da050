#pragma once

// Bundled example manifolds. The 4-dimensional ones are built from 2x2 blocks
// whose entries depend on the coordinates of the other block (f = 1 + x3,
// h = 1 + x1), which keeps J non-integrable.

#include <array>
#include <optional>
#include <string_view>

#include "aestruct/structure.hpp"

namespace aestruct {

struct CatalogEntry {
  std::string_view name;
  std::string_view summary;
  std::string_view json;
};

inline constexpr std::array<CatalogEntry, 10> kCatalog = {{
    {"flat_kahler", "flat almost Hermitian plane, J rotation, g = Id (alpha=-1, epsilon=1)", R"json({
  "name": "flat_kahler",
  "dimension": 2,
  "alpha": -1,
  "epsilon": 1,
  "coordinates": ["x1", "x2"],
  "metric": [["1", "0"], ["0", "1"]],
  "J": [["0", "-1"], ["1", "0"]],
  "domain": [[-1, 1], [-1, 1]],
  "seed": 1
})json"},
    {"flat_para_kahler", "flat para-Hermitian plane, J = diag(1,-1), g hyperbolic (alpha=1, epsilon=-1)", R"json({
  "name": "flat_para_kahler",
  "dimension": 2,
  "alpha": 1,
  "epsilon": -1,
  "coordinates": ["x1", "x2"],
  "metric": [["0", "1"], ["1", "0"]],
  "J": [["1", "0"], ["0", "-1"]],
  "domain": [[-1, 1], [-1, 1]],
  "seed": 2
})json"},
    {"flat_norden", "flat Norden plane, J rotation, g = diag(1,-1) (alpha=-1, epsilon=-1)", R"json({
  "name": "flat_norden",
  "dimension": 2,
  "alpha": -1,
  "epsilon": -1,
  "coordinates": ["x1", "x2"],
  "metric": [["1", "0"], ["0", "-1"]],
  "J": [["0", "-1"], ["1", "0"]],
  "domain": [[-1, 1], [-1, 1]],
  "seed": 3
})json"},
    {"flat_product", "flat product Riemannian plane, J = diag(1,-1), g = Id (alpha=1, epsilon=1)", R"json({
  "name": "flat_product",
  "dimension": 2,
  "alpha": 1,
  "epsilon": 1,
  "coordinates": ["x1", "x2"],
  "metric": [["1", "0"], ["0", "1"]],
  "J": [["1", "0"], ["0", "-1"]],
  "domain": [[-1, 1], [-1, 1]],
  "seed": 4
})json"},
    {"norden2d", "Norden surface, f = 1 + x1, g = diag(1,-f^2)", R"json({
  "name": "norden2d",
  "dimension": 2,
  "alpha": -1,
  "epsilon": -1,
  "coordinates": ["x1", "x2"],
  "metric": [["1", "0"], ["0", "-(1 + x1)^2"]],
  "J": [["0", "-(1 + x1)"], ["1/(1 + x1)", "0"]],
  "domain": [[-0.5, 0.5], [-0.5, 0.5]],
  "seed": 5
})json"},
    {"hermitian2d", "almost Hermitian surface, f = 1 + x1, g = diag(1,f^2)", R"json({
  "name": "hermitian2d",
  "dimension": 2,
  "alpha": -1,
  "epsilon": 1,
  "coordinates": ["x1", "x2"],
  "metric": [["1", "0"], ["0", "(1 + x1)^2"]],
  "J": [["0", "-(1 + x1)"], ["1/(1 + x1)", "0"]],
  "domain": [[-0.5, 0.5], [-0.5, 0.5]],
  "seed": 6
})json"},
    {"hermitian4d", "non-integrable almost Hermitian 4-manifold", R"json({
  "name": "hermitian4d",
  "dimension": 4,
  "alpha": -1,
  "epsilon": 1,
  "coordinates": ["x1", "x2", "x3", "x4"],
  "metric": [["1", "0", "0", "0"],
             ["0", "(1 + x3)^2", "0", "0"],
             ["0", "0", "1", "0"],
             ["0", "0", "0", "(1 + x1)^2"]],
  "J": [["0", "-(1 + x3)", "0", "0"],
        ["1/(1 + x3)", "0", "0", "0"],
        ["0", "0", "0", "-(1 + x1)"],
        ["0", "0", "1/(1 + x1)", "0"]],
  "domain": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]],
  "seed": 7
})json"},
    {"para4d", "non-integrable almost para-Hermitian 4-manifold", R"json({
  "name": "para4d",
  "dimension": 4,
  "alpha": 1,
  "epsilon": -1,
  "coordinates": ["x1", "x2", "x3", "x4"],
  "metric": [["1", "0", "0", "0"],
             ["0", "-(1 + x3)^2", "0", "0"],
             ["0", "0", "1", "0"],
             ["0", "0", "0", "-(1 + x1)^2"]],
  "J": [["0", "1 + x3", "0", "0"],
        ["1/(1 + x3)", "0", "0", "0"],
        ["0", "0", "0", "1 + x1"],
        ["0", "0", "1/(1 + x1)", "0"]],
  "domain": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]],
  "seed": 8
})json"},
    {"norden4d", "non-integrable almost Norden 4-manifold", R"json({
  "name": "norden4d",
  "dimension": 4,
  "alpha": -1,
  "epsilon": -1,
  "coordinates": ["x1", "x2", "x3", "x4"],
  "metric": [["1", "0", "0", "0"],
             ["0", "-(1 + x3)^2", "0", "0"],
             ["0", "0", "1", "0"],
             ["0", "0", "0", "-(1 + x1)^2"]],
  "J": [["0", "-(1 + x3)", "0", "0"],
        ["1/(1 + x3)", "0", "0", "0"],
        ["0", "0", "0", "-(1 + x1)"],
        ["0", "0", "1/(1 + x1)", "0"]],
  "domain": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]],
  "seed": 9
})json"},
    {"product4d", "non-integrable almost product Riemannian 4-manifold", R"json({
  "name": "product4d",
  "dimension": 4,
  "alpha": 1,
  "epsilon": 1,
  "coordinates": ["x1", "x2", "x3", "x4"],
  "metric": [["1", "0", "0", "0"],
             ["0", "(1 + x3)^2", "0", "0"],
             ["0", "0", "1", "0"],
             ["0", "0", "0", "(1 + x1)^2"]],
  "J": [["0", "1 + x3", "0", "0"],
        ["1/(1 + x3)", "0", "0", "0"],
        ["0", "0", "0", "1 + x1"],
        ["0", "0", "1/(1 + x1)", "0"]],
  "domain": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]],
  "seed": 10
})json"},
}};

inline std::optional<CatalogEntry> find_catalog_entry(std::string_view name) {
  for (const auto& e : kCatalog) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

inline ManifoldSpec catalog_spec(std::string_view name) {
  auto e = find_catalog_entry(name);
  if (!e) throw SpecError("no catalog spec named '" + std::string(name) + "'");
  return load_spec(e->json);
}

}  // namespace aestruct
