#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace sphereot {

enum class GridKind { sphere, cylinder, so3 };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

struct GridDescriptor {
  GridKind kind = GridKind::sphere;
  int band_limit = 0;
  int gamma_count = 0;  // so3 only

  std::size_t size() const;
  bool operator==(const GridDescriptor&) const = default;
};

// Samples of a function on one of the quadrature grids, in the grid's index order.
struct GridDensity {
  GridDescriptor grid;
  std::vector<double> values;

  // Throws ValidationError if values.size() does not match the grid.
  void validate() const;
};

// CSV: header "# grid=<kind> N=<int> [G=<int>]", then one sample per line.
void write_csv(std::ostream& out, const GridDensity& density);
GridDensity read_grid_density_csv(std::istream& in);
void write_grid_density_file(const std::string& path, const GridDensity& density);
GridDensity read_grid_density_file(const std::string& path);

// JSON with explicit node coordinates (phi/theta, psi/t or alpha/beta/gamma).
nlohmann::json to_json(const GridDensity& density);
GridDensity grid_density_from_json(const nlohmann::json& j);

}  // namespace sphereot
