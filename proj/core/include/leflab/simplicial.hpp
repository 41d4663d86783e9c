// Oriented simplicial complexes with a marked boundary subcomplex, their
// absolute/relative cochain complexes over Q, and induced cochain maps of
// boundary-preserving simplicial self-maps.
//
// Conventions: a q-simplex is stored as its ascending vertex tuple; the
// stored tuple is the positively oriented representative. Top simplices
// additionally carry a coherent orientation sign relative to that tuple.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leflab/rational_matrix.hpp"

namespace leflab::simplicial {

using VertexTuple = std::vector<int>;  // ascending

struct SimplicialComplex {
    int dim = 0;
    int num_vertices = 0;
    std::vector<std::vector<VertexTuple>> simplices;  // [q][i]
    std::vector<std::vector<char>> on_boundary;       // [q][i] in boundary subcomplex
    std::vector<int> top_orientation;                 // sign per top simplex

    std::vector<std::map<VertexTuple, int>> index;    // [q]: tuple -> id

    int simplex_id(int q, const VertexTuple& t) const;

    // Integer boundary operator del_q : C_q -> C_{q-1}.
    la::SparseMatQ boundary_matrix(int q) const;

    std::vector<int> count_per_dim() const;
};

// Build from top simplices: vertex tuples (any order) with orientation signs
// meaning "the given tuple order is positive". Faces are generated, the
// boundary subcomplex is detected as the closure of (dim-1)-faces incident to
// exactly one top simplex. Throws if some face is shared by more than two.
SimplicialComplex build_from_top_simplices(int num_vertices,
                                           const std::vector<VertexTuple>& tops,
                                           const std::vector<int>& orientations);

// Boundary of the fundamental chain as a chain in C_{dim-1}: pairs (id, coeff).
la::SparseVec fundamental_boundary(const SimplicialComplex& sc);

enum class Flavor { absolute, relative };

struct CochainComplex {
    int top_dim = 0;
    Flavor flavor = Flavor::absolute;
    std::vector<std::vector<int>> kept;   // [q]: original simplex ids in basis order
    std::vector<int> dims;                // [q] = kept[q].size()
    std::vector<la::SparseMatQ> d;        // [q]: C^q -> C^{q+1}; d[top] is 0 x n_top

    std::vector<int> betti() const;       // exact ranks over Q
};

CochainComplex build_cochain_complex(const SimplicialComplex& sc, Flavor flavor);

// A simplicial self-map given by its vertex images.
struct VertexMap {
    std::vector<int> image;

    bool is_identity() const;
    bool is_involution() const;
};

// Validation errors carry a human-readable reason.
struct MapValidation {
    bool simplicial = false;
    bool boundary_preserving = false;
    std::string detail;
};

MapValidation validate_vertex_map(const SimplicialComplex& sc, const VertexMap& vm);

// Matrix of the induced cochain map on C^q of the given flavor.
la::SparseMatQ cochain_map_matrix(const SimplicialComplex& sc, const CochainComplex& cc,
                                  const VertexMap& vm, int q);

// Exact traces of the induced map on H^q for q = 0..top_dim.
// Uses kernel-restricted traces; for involutions on large complexes the
// caller may prefer cohomology_traces_involution.
std::vector<Rat> cohomology_traces(const SimplicialComplex& sc, const CochainComplex& cc,
                                   const VertexMap& vm);

// Involution fast path: traces from betti numbers of the +/- eigencomplexes.
// Requires vm to be a simplicial involution (checked).
std::vector<Rat> cohomology_traces_involution(const SimplicialComplex& sc,
                                              const CochainComplex& cc,
                                              const VertexMap& vm);

// Evaluate a q-cochain (coefficients in cc basis order) on a chain in C_q
// given as (original simplex id, coeff) pairs. Ids kept out of the basis
// (relative flavor) contribute zero.
Rat evaluate_cochain(const CochainComplex& cc, int q, const std::vector<Rat>& cochain,
                     const la::SparseVec& chain);

}  // namespace leflab::simplicial
