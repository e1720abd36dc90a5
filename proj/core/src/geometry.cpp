#include "gkl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gkl/errors.hpp"

namespace gkl {

namespace {

// Keeps the first occurrence of every exact point; order is preserved.
void dedup(CandidateSet& set) {
  std::set<std::vector<double>> seen;
  std::vector<double> out;
  out.reserve(set.coords.size());
  const std::size_t n = set.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto p = set.point(i);
    std::vector<double> key(p.begin(), p.end());
    if (seen.insert(std::move(key)).second) {
      out.insert(out.end(), p.begin(), p.end());
    }
  }
  set.coords = std::move(out);
}

}  // namespace

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

CandidateSet sample_random(std::uint64_t seed, std::size_t count, int dim) {
  if (count < 1) throw std::invalid_argument("sample_random: count must be >= 1");
  if (dim < 1) throw std::invalid_argument("sample_random: dim must be >= 1");
  CandidateSet set;
  set.dim = dim;
  set.provenance = {CandidateSet::Provenance::Kind::SeededRandom, seed, count, 0, -1, 0.0};
  set.coords.reserve(count * dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < count * dim; ++i) set.coords.push_back(unit(rng));
  dedup(set);
  return set;
}

CandidateSet uniform_grid(std::size_t resolution, int dim) {
  if (resolution < 2) throw std::invalid_argument("uniform_grid: resolution must be >= 2");
  if (dim < 1) throw std::invalid_argument("uniform_grid: dim must be >= 1");
  CandidateSet set;
  set.dim = dim;
  set.provenance.kind = CandidateSet::Provenance::Kind::UniformGrid;
  set.provenance.resolution = resolution;
  std::vector<std::size_t> idx(dim, 0);
  const double h = 1.0 / static_cast<double>(resolution - 1);
  while (true) {
    for (int a = 0; a < dim; ++a) set.coords.push_back(static_cast<double>(idx[a]) * h);
    int axis = dim - 1;
    while (axis >= 0 && ++idx[axis] == resolution) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return set;
}

CandidateSet explicit_points(std::vector<double> coords, int dim) {
  if (dim < 1) throw std::invalid_argument("explicit_points: dim must be >= 1");
  if (coords.size() % dim != 0) {
    throw std::invalid_argument("explicit_points: coordinate count is not a multiple of dim");
  }
  CandidateSet set;
  set.dim = dim;
  set.coords = std::move(coords);
  dedup(set);
  return set;
}

CandidateSet load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open point file '" + path + "'");
  std::vector<double> coords;
  int dim = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream row(line);
    std::string cell;
    int d = 0;
    while (std::getline(row, cell, ',')) {
      try {
        coords.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw io_error("bad number in '" + path + "' line " + std::to_string(lineno));
      }
      ++d;
    }
    if (dim == -1) dim = d;
    if (d != dim) throw io_error("ragged row in '" + path + "' line " + std::to_string(lineno));
  }
  if (dim <= 0) throw io_error("no points in '" + path + "'");
  return explicit_points(std::move(coords), dim);
}

CandidateSet project_to_slice(const CandidateSet& set, int axis, double value) {
  if (axis < 0 || axis >= set.dim) {
    throw std::invalid_argument("project_to_slice: axis out of range");
  }
  CandidateSet out;
  out.dim = set.dim;
  out.coords = set.coords;
  out.provenance = {CandidateSet::Provenance::Kind::SubdomainProjection,
                    set.provenance.seed, set.size(), 0, axis, value};
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out.coords[i * out.dim + axis] = value;
  dedup(out);
  return out;
}

double fill_distance(const CandidateSet& selected, const CandidateSet& evaluation) {
  if (selected.size() == 0) throw std::invalid_argument("fill_distance: empty selected set");
  double h = 0.0;
  for (std::size_t i = 0; i < evaluation.size(); ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < selected.size(); ++j) {
      dmin = std::min(dmin, euclidean_distance(evaluation.point(i), selected.point(j)));
    }
    h = std::max(h, dmin);
  }
  return h;
}

double separation_distance(const CandidateSet& selected) {
  if (selected.size() < 2) {
    throw std::invalid_argument("separation_distance: need at least 2 points");
  }
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (std::size_t j = i + 1; j < selected.size(); ++j) {
      dmin = std::min(dmin, euclidean_distance(selected.point(i), selected.point(j)));
    }
  }
  return 0.5 * dmin;
}

}  // namespace gkl
