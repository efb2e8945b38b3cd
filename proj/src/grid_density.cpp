#include "sphereot/grid_density.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphereot/diagnostics.hpp"
#include "sphereot/quadrature.hpp"

namespace sphereot {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int_field(const std::string& token, const std::string& key) {
  int v = 0;
  const auto* first = token.data() + key.size() + 1;
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ValidationError("grid header: malformed " + key + " field '" + token + "'");
  return v;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("grid density line " + std::to_string(line) + ": not a number '" + s + "'");
}

}  // namespace

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::sphere: return "sphere";
    case GridKind::cylinder: return "cylinder";
    case GridKind::so3: return "so3";
  }
  return "unknown";
}

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "sphere") return GridKind::sphere;
  if (s == "cylinder") return GridKind::cylinder;
  if (s == "so3") return GridKind::so3;
  throw ValidationError("unknown grid kind '" + s + "'");
}

std::size_t GridDescriptor::size() const {
  const auto n1 = static_cast<std::size_t>(band_limit + 1);
  const std::size_t m = 2 * n1 * n1;
  return kind == GridKind::so3 ? m * static_cast<std::size_t>(gamma_count) : m;
}

void GridDensity::validate() const {
  if (grid.band_limit < 0) throw ValidationError("grid: N must be nonnegative");
  if (grid.kind == GridKind::so3 && grid.gamma_count < 2 * grid.band_limit + 1) {
    throw ValidationError("grid: G must be at least 2N+1");
  }
  if (values.size() != grid.size()) {
    throw ValidationError("grid density has " + std::to_string(values.size()) + " samples, grid " +
                          to_string(grid.kind) + " N=" + std::to_string(grid.band_limit) + " needs " +
                          std::to_string(grid.size()));
  }
}

void write_csv(std::ostream& out, const GridDensity& density) {
  density.validate();
  out << "# grid=" << to_string(density.grid.kind) << " N=" << density.grid.band_limit;
  if (density.grid.kind == GridKind::so3) out << " G=" << density.grid.gamma_count;
  out << '\n';
  char buf[32];
  for (double v : density.values) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.write(buf, ptr - buf);
    out << '\n';
  }
}

GridDensity read_grid_density_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("grid density file is empty");
  line = trim(line);
  if (line.rfind('#', 0) != 0) throw ValidationError("grid density: first line must be a '# grid=...' header");
  GridDensity d;
  bool have_grid = false, have_n = false, have_g = false;
  std::istringstream hs(line.substr(1));
  std::string tok;
  while (hs >> tok) {
    if (tok.rfind("grid=", 0) == 0) {
      d.grid.kind = grid_kind_from_string(tok.substr(5));
      have_grid = true;
    } else if (tok.rfind("N=", 0) == 0) {
      d.grid.band_limit = parse_int_field(tok, "N");
      have_n = true;
    } else if (tok.rfind("G=", 0) == 0) {
      d.grid.gamma_count = parse_int_field(tok, "G");
      have_g = true;
    } else {
      throw ValidationError("grid header: unknown field '" + tok + "'");
    }
  }
  if (!have_grid || !have_n) throw ValidationError("grid header: needs grid= and N= fields");
  if (d.grid.kind == GridKind::so3 && !have_g) throw ValidationError("grid header: so3 grid needs G=");
  if (d.grid.kind != GridKind::so3 && have_g) throw ValidationError("grid header: G= only applies to so3");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const double v = parse_double(line, lineno);
    if (!std::isfinite(v)) throw ValidationError("grid density line " + std::to_string(lineno) + ": non-finite value");
    d.values.push_back(v);
  }
  d.validate();
  return d;
}

void write_grid_density_file(const std::string& path, const GridDensity& density) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  write_csv(out, density);
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

GridDensity read_grid_density_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return read_grid_density_csv(in);
}

nlohmann::json to_json(const GridDensity& density) {
  density.validate();
  nlohmann::json j;
  j["grid"] = to_string(density.grid.kind);
  j["N"] = density.grid.band_limit;
  const int N = density.grid.band_limit;
  switch (density.grid.kind) {
    case GridKind::sphere: {
      const SphereGrid g(N);
      std::vector<double> phi, theta;
      for (const auto& xi : g.nodes()) {
        phi.push_back(azi(xi));
        theta.push_back(zen(xi));
      }
      j["phi"] = phi;
      j["theta"] = theta;
      break;
    }
    case GridKind::cylinder: {
      const CylinderGrid g(N);
      std::vector<double> psi, t;
      for (int jj = 0; jj < g.t_count(); ++jj)
        for (int i = 0; i < g.psi_count(); ++i) {
          psi.push_back(g.psi()[static_cast<std::size_t>(i)]);
          t.push_back(g.t()[static_cast<std::size_t>(jj)]);
        }
      j["psi"] = psi;
      j["t"] = t;
      break;
    }
    case GridKind::so3: {
      j["G"] = density.grid.gamma_count;
      const SO3Grid g(N, density.grid.gamma_count);
      std::vector<double> a, b, c;
      for (std::size_t l = 0; l < g.size(); ++l) {
        const auto e = g.angles(l);
        a.push_back(e.alpha);
        b.push_back(e.beta);
        c.push_back(e.gamma);
      }
      j["alpha"] = a;
      j["beta"] = b;
      j["gamma"] = c;
      break;
    }
  }
  j["values"] = density.values;
  return j;
}

GridDensity grid_density_from_json(const nlohmann::json& j) {
  GridDensity d;
  try {
    d.grid.kind = grid_kind_from_string(j.at("grid").get<std::string>());
    d.grid.band_limit = j.at("N").get<int>();
    if (d.grid.kind == GridKind::so3) d.grid.gamma_count = j.at("G").get<int>();
    d.values = j.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("grid density JSON: ") + e.what());
  }
  d.validate();
  return d;
}

}  // namespace sphereot
