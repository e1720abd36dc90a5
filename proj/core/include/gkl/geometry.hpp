#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gkl {

/// Finite discretization of the domain. All suprema and argmaxes of the
/// continuous setting are taken over one of these. Immutable after
/// construction; points are pairwise distinct and their order is
/// deterministic given the provenance.
struct CandidateSet {
  struct Provenance {
    enum class Kind { UniformGrid, SeededRandom, SubdomainProjection, Explicit };
    Kind kind = Kind::Explicit;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t resolution = 0;
    int fixed_axis = -1;
    double fixed_value = 0.0;
  };

  int dim = 1;
  std::vector<double> coords;  // size() * dim, row-major
  Provenance provenance;

  std::size_t size() const { return dim > 0 ? coords.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * dim, dim);
  }
};

/// `count` i.i.d. uniform points in [0,1]^dim from a generator seeded by
/// `seed`. Identical seed gives an identical set on the same build.
CandidateSet sample_random(std::uint64_t seed, std::size_t count, int dim);

/// Uniform tensor grid with `resolution` points per axis on [0,1]^dim,
/// endpoints included.
CandidateSet uniform_grid(std::size_t resolution, int dim);

/// Wraps an explicit flat coordinate list (deduplicated, order preserved).
CandidateSet explicit_points(std::vector<double> coords, int dim);

/// One point per row, comma-separated coordinates.
CandidateSet load_points_csv(const std::string& path);

/// Replaces each point's `axis` coordinate by `value`; duplicates after
/// projection are removed. Idempotent.
CandidateSet project_to_slice(const CandidateSet& set, int axis, double value);

/// max over evaluation points of the min Euclidean distance to a selected
/// point. Throws on empty `selected`.
double fill_distance(const CandidateSet& selected, const CandidateSet& evaluation);

/// Half the minimal pairwise Euclidean distance. Needs >= 2 points.
double separation_distance(const CandidateSet& selected);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace gkl
