#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "fracmc/errors.hpp"
#include "fracmc/hypersurface.hpp"

namespace fracmc {

// Mesh exchange: OFF text files for triangle meshes, two-column CSV for
// polylines (an optional leading component column marks multi-chain curves).

inline void write_off(const Hypersurface<3>& M, std::ostream& os) {
  os << "OFF\n" << M.vertices.size() << ' ' << M.facets.size() << " 0\n";
  os << std::setprecision(17);
  for (const auto& v : M.vertices)
    os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : M.facets)
    os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

inline void write_off(const Hypersurface<3>& M, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_off(M, os);
}

inline Hypersurface<3> read_off(std::istream& is) {
  std::string tok;
  if (!(is >> tok) || tok != "OFF") throw IoError("missing OFF header");
  size_t nv = 0, nf = 0, ne = 0;
  if (!(is >> nv >> nf >> ne)) throw IoError("bad OFF counts");
  std::vector<Vec3> vertices(nv);
  for (size_t i = 0; i < nv; ++i)
    if (!(is >> vertices[i][0] >> vertices[i][1] >> vertices[i][2]))
      throw IoError("bad OFF vertex");
  std::vector<std::array<int, 3>> tris(nf);
  for (size_t i = 0; i < nf; ++i) {
    int k = 0;
    if (!(is >> k) || k != 3) throw IoError("only triangle facets supported");
    if (!(is >> tris[i][0] >> tris[i][1] >> tris[i][2]))
      throw IoError("bad OFF facet");
  }
  return build_trimesh(vertices, tris);
}

inline Hypersurface<3> read_off(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_off(is);
}

inline void write_polyline_csv(const Hypersurface<2>& M, std::ostream& os) {
  os << std::setprecision(17);
  os << "x,y\r\n";
  for (const auto& v : M.vertices) os << v[0] << ',' << v[1] << "\r\n";
}

inline void write_polyline_csv(const Hypersurface<2>& M,
                               const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_polyline_csv(M, os);
}

// Reads x,y rows into an ordered point list (header row optional).
inline std::vector<Vec2> read_polyline_csv(std::istream& is) {
  std::vector<Vec2> points;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) points.push_back({x, y});
  }
  if (points.size() < 2) throw IoError("polyline CSV needs >= 2 points");
  return points;
}

inline std::vector<Vec2> read_polyline_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_polyline_csv(is);
}

}  // namespace fracmc
