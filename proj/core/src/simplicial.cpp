#include "leflab/simplicial.hpp"

#include <algorithm>
#include <stdexcept>

namespace leflab::simplicial {

namespace {

// Sort a vertex tuple ascending; returns the permutation sign, 0 if degenerate.
int sort_tuple(VertexTuple& t) {
    int sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i) {
        for (std::size_t j = i; j > 0 && t[j] < t[j - 1]; --j) {
            std::swap(t[j], t[j - 1]);
            sign = -sign;
        }
    }
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] == t[i - 1]) return 0;
    return sign;
}

VertexTuple face_of(const VertexTuple& t, int drop) {
    VertexTuple f;
    f.reserve(t.size() - 1);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (static_cast<int>(i) != drop) f.push_back(t[i]);
    return f;
}

}  // namespace

int SimplicialComplex::simplex_id(int q, const VertexTuple& t) const {
    auto it = index[q].find(t);
    return it == index[q].end() ? -1 : it->second;
}

la::SparseMatQ SimplicialComplex::boundary_matrix(int q) const {
    const int n_q = static_cast<int>(simplices[q].size());
    const int n_qm1 = q > 0 ? static_cast<int>(simplices[q - 1].size()) : 0;
    la::SparseMatQ del(n_qm1, n_q);
    if (q == 0) return del;
    for (int i = 0; i < n_q; ++i) {
        const auto& t = simplices[q][i];
        for (int k = 0; k <= q; ++k) {
            VertexTuple f = face_of(t, k);
            int fid = simplex_id(q - 1, f);
            del.add_entry(fid, i, rat(k % 2 == 0 ? 1 : -1));
        }
    }
    return del;
}

std::vector<int> SimplicialComplex::count_per_dim() const {
    std::vector<int> c;
    for (const auto& s : simplices) c.push_back(static_cast<int>(s.size()));
    return c;
}

SimplicialComplex build_from_top_simplices(int num_vertices,
                                           const std::vector<VertexTuple>& tops,
                                           const std::vector<int>& orientations) {
    if (tops.empty()) throw std::invalid_argument("no top simplices");
    if (orientations.size() != tops.size())
        throw std::invalid_argument("orientations size mismatch");
    SimplicialComplex sc;
    sc.dim = static_cast<int>(tops[0].size()) - 1;
    sc.num_vertices = num_vertices;
    sc.simplices.resize(sc.dim + 1);
    sc.index.resize(sc.dim + 1);

    // vertices 0..num_vertices-1 always present
    for (int v = 0; v < num_vertices; ++v) {
        sc.index[0][{v}] = v;
        sc.simplices[0].push_back({v});
    }

    auto intern = [&sc](int q, VertexTuple t) {
        auto it = sc.index[q].find(t);
        if (it != sc.index[q].end()) return it->second;
        int id = static_cast<int>(sc.simplices[q].size());
        sc.index[q][t] = id;
        sc.simplices[q].push_back(std::move(t));
        return id;
    };

    for (std::size_t i = 0; i < tops.size(); ++i) {
        VertexTuple t = tops[i];
        int sign = sort_tuple(t);
        if (sign == 0) throw std::invalid_argument("degenerate top simplex");
        if (static_cast<int>(t.size()) != sc.dim + 1)
            throw std::invalid_argument("mixed top dimensions");
        int id = intern(sc.dim, t);
        if (id != static_cast<int>(sc.top_orientation.size()))
            throw std::invalid_argument("duplicate top simplex");
        sc.top_orientation.push_back(orientations[i] * sign);
    }
    // Generate faces level by level.
    for (int q = sc.dim; q >= 1; --q) {
        for (const auto& t : sc.simplices[q]) {
            for (int k = 0; k <= q; ++k) {
                VertexTuple f = face_of(t, k);
                if (q - 1 >= 1) intern(q - 1, std::move(f));
            }
        }
    }

    // Boundary detection: (dim-1)-faces incident to exactly one top simplex.
    std::vector<int> incidence(sc.simplices[sc.dim - 1].size(), 0);
    for (const auto& t : sc.simplices[sc.dim]) {
        for (int k = 0; k <= sc.dim; ++k) {
            VertexTuple f = face_of(t, k);
            ++incidence[sc.simplex_id(sc.dim - 1, f)];
        }
    }
    for (int cnt : incidence)
        if (cnt > 2) throw std::runtime_error("non-manifold face (incidence > 2)");

    sc.on_boundary.resize(sc.dim + 1);
    for (int q = 0; q <= sc.dim; ++q)
        sc.on_boundary[q].assign(sc.simplices[q].size(), 0);
    for (std::size_t i = 0; i < incidence.size(); ++i) {
        if (incidence[i] != 1) continue;
        // closure: mark the face and all its subfaces
        const VertexTuple& f = sc.simplices[sc.dim - 1][i];
        std::vector<VertexTuple> stack{f};
        while (!stack.empty()) {
            VertexTuple cur = stack.back();
            stack.pop_back();
            int q = static_cast<int>(cur.size()) - 1;
            int id = sc.simplex_id(q, cur);
            if (sc.on_boundary[q][id]) continue;
            sc.on_boundary[q][id] = 1;
            if (q > 0)
                for (int k = 0; k <= q; ++k) stack.push_back(face_of(cur, k));
        }
    }
    return sc;
}

la::SparseVec fundamental_boundary(const SimplicialComplex& sc) {
    la::SparseMatQ del = sc.boundary_matrix(sc.dim);
    la::SparseVec fund;
    for (std::size_t i = 0; i < sc.simplices[sc.dim].size(); ++i)
        fund.emplace_back(static_cast<int>(i), rat(sc.top_orientation[i]));
    return del.apply(fund);
}

CochainComplex build_cochain_complex(const SimplicialComplex& sc, Flavor flavor) {
    CochainComplex cc;
    cc.top_dim = sc.dim;
    cc.flavor = flavor;
    cc.kept.resize(sc.dim + 1);
    cc.dims.resize(sc.dim + 1);
    std::vector<std::vector<int>> pos(sc.dim + 1);  // original id -> basis index or -1
    for (int q = 0; q <= sc.dim; ++q) {
        pos[q].assign(sc.simplices[q].size(), -1);
        for (std::size_t i = 0; i < sc.simplices[q].size(); ++i) {
            if (flavor == Flavor::relative && sc.on_boundary[q][i]) continue;
            pos[q][i] = static_cast<int>(cc.kept[q].size());
            cc.kept[q].push_back(static_cast<int>(i));
        }
        cc.dims[q] = static_cast<int>(cc.kept[q].size());
    }
    cc.d.resize(sc.dim + 1);
    for (int q = 0; q < sc.dim; ++q) {
        // d_q = (del_{q+1})^T restricted to kept simplices;
        // del[r][col] couples the q-simplex r with the (q+1)-simplex col
        la::SparseMatQ del = sc.boundary_matrix(q + 1);
        la::SparseMatQ dq(cc.dims[q + 1], cc.dims[q]);
        for (int r = 0; r < del.rows; ++r) {
            if (pos[q][r] < 0) continue;
            for (const auto& [col, v] : del.row[r]) {
                if (pos[q + 1][col] < 0) continue;
                dq.add_entry(pos[q + 1][col], pos[q][r], v);
            }
        }
        cc.d[q] = std::move(dq);
    }
    cc.d[sc.dim] = la::SparseMatQ(0, cc.dims[sc.dim]);
    return cc;
}

std::vector<int> CochainComplex::betti() const {
    std::vector<int> b(top_dim + 1, 0);
    std::vector<int> ranks(top_dim + 1, 0);
    for (int q = 0; q <= top_dim; ++q) ranks[q] = la::rank(d[q]);
    for (int q = 0; q <= top_dim; ++q)
        b[q] = dims[q] - ranks[q] - (q > 0 ? ranks[q - 1] : 0);
    return b;
}

bool VertexMap::is_identity() const {
    for (std::size_t v = 0; v < image.size(); ++v)
        if (image[v] != static_cast<int>(v)) return false;
    return true;
}

bool VertexMap::is_involution() const {
    for (std::size_t v = 0; v < image.size(); ++v) {
        int w = image[v];
        if (w < 0 || w >= static_cast<int>(image.size())) return false;
        if (image[w] != static_cast<int>(v)) return false;
    }
    return true;
}

MapValidation validate_vertex_map(const SimplicialComplex& sc, const VertexMap& vm) {
    MapValidation r;
    if (static_cast<int>(vm.image.size()) != sc.num_vertices) {
        r.detail = "vertex image table has wrong size";
        return r;
    }
    r.simplicial = true;
    r.boundary_preserving = true;
    for (int q = 1; q <= sc.dim && r.simplicial; ++q) {
        for (const auto& t : sc.simplices[q]) {
            VertexTuple img(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) img[i] = vm.image[t[i]];
            int sign = sort_tuple(img);
            if (sign == 0) continue;  // degenerate collapse is allowed
            if (sc.simplex_id(q, img) < 0) {
                r.simplicial = false;
                r.detail = "image of a simplex is not a simplex of the complex";
                break;
            }
        }
    }
    if (!r.simplicial) return r;
    for (int q = 0; q <= sc.dim && r.boundary_preserving; ++q) {
        for (std::size_t i = 0; i < sc.simplices[q].size(); ++i) {
            if (!sc.on_boundary[q][i]) continue;
            VertexTuple img(sc.simplices[q][i].size());
            for (std::size_t k = 0; k < img.size(); ++k) img[k] = vm.image[sc.simplices[q][i][k]];
            int sign = sort_tuple(img);
            if (sign == 0) continue;
            int id = sc.simplex_id(q, img);
            if (id < 0 || !sc.on_boundary[q][id]) {
                r.boundary_preserving = false;
                r.detail = "boundary simplex maps off the boundary subcomplex";
                break;
            }
        }
    }
    return r;
}

la::SparseMatQ cochain_map_matrix(const SimplicialComplex& sc, const CochainComplex& cc,
                                  const VertexMap& vm, int q) {
    std::vector<int> pos(sc.simplices[q].size(), -1);
    for (std::size_t k = 0; k < cc.kept[q].size(); ++k) pos[cc.kept[q][k]] = static_cast<int>(k);
    la::SparseMatQ f(cc.dims[q], cc.dims[q]);
    for (std::size_t bi = 0; bi < cc.kept[q].size(); ++bi) {
        const auto& t = sc.simplices[q][cc.kept[q][bi]];
        VertexTuple img(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) img[i] = vm.image[t[i]];
        int sign = sort_tuple(img);
        if (sign == 0) continue;
        int id = sc.simplex_id(q, img);
        if (id < 0)
            throw std::runtime_error("cochain_map_matrix: map is not simplicial");
        if (pos[id] < 0) continue;  // image lies on boundary, relative cochain vanishes
        f.add_entry(static_cast<int>(bi), pos[id], rat(sign));
    }
    return f;
}

std::vector<Rat> cohomology_traces(const SimplicialComplex& sc, const CochainComplex& cc,
                                   const VertexMap& vm) {
    const int m = cc.top_dim;
    std::vector<Rat> ztr(m + 1, Rat(0)), ctr(m + 1, Rat(0)), h(m + 1, Rat(0));
    for (int q = 0; q <= m; ++q) {
        la::SparseMatQ f = cochain_map_matrix(sc, cc, vm, q);
        ctr[q] = f.trace();
        la::Rref rr = la::rref(cc.d[q]);
        auto basis = la::kernel_basis(rr);
        ztr[q] = la::restricted_trace(f, basis, rr.free_cols);
    }
    for (int q = 0; q <= m; ++q) {
        h[q] = ztr[q];
        if (q > 0) h[q] += ztr[q - 1] - ctr[q - 1];
    }
    return h;
}

std::vector<Rat> cohomology_traces_involution(const SimplicialComplex& sc,
                                              const CochainComplex& cc,
                                              const VertexMap& vm) {
    if (!vm.is_involution())
        throw std::invalid_argument("cohomology_traces_involution: map is not an involution");
    const int m = cc.top_dim;

    // Per degree, the signed permutation action on kept simplices.
    // Eigencomplex bases: fixed simplices (sign +1 -> plus, -1 -> minus),
    // 2-orbits give one vector in each eigenspace, indexed by the smaller id.
    struct Action {
        std::vector<int> img;    // basis index -> basis index
        std::vector<int> sign;   // matching sign
    };
    std::vector<Action> act(m + 1);
    for (int q = 0; q <= m; ++q) {
        std::vector<int> pos(sc.simplices[q].size(), -1);
        for (std::size_t k = 0; k < cc.kept[q].size(); ++k)
            pos[cc.kept[q][k]] = static_cast<int>(k);
        act[q].img.assign(cc.dims[q], -1);
        act[q].sign.assign(cc.dims[q], 0);
        for (int bi = 0; bi < cc.dims[q]; ++bi) {
            const auto& t = sc.simplices[q][cc.kept[q][bi]];
            VertexTuple img(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) img[i] = vm.image[t[i]];
            int sign = sort_tuple(img);
            if (sign == 0)
                throw std::invalid_argument("involution route: degenerate image");
            int id = sc.simplex_id(q, img);
            int bid = id >= 0 ? pos[id] : -1;
            if (bid < 0)
                throw std::invalid_argument("involution route: image leaves the basis");
            act[q].img[bi] = bid;
            act[q].sign[bi] = sign;
        }
    }

    // Eigencomplex dimensions and orbit-representative tables.
    // rep_index[q][bi] = row of the eigenvector led by bi (or -1).
    auto build_side = [&](int side) {  // side = +1 or -1
        std::vector<std::vector<int>> reps(m + 1);
        std::vector<std::vector<int>> lead(m + 1);
        for (int q = 0; q <= m; ++q) {
            lead[q].assign(cc.dims[q], -1);
            for (int bi = 0; bi < cc.dims[q]; ++bi) {
                int im = act[q].img[bi], sg = act[q].sign[bi];
                if (im == bi) {
                    if (sg == side) {
                        lead[q][bi] = static_cast<int>(reps[q].size());
                        reps[q].push_back(bi);
                    }
                } else if (im > bi) {
                    lead[q][bi] = static_cast<int>(reps[q].size());
                    reps[q].push_back(bi);
                }
            }
        }
        // d restricted to the eigenspace, in the rep basis. Eigenvector for a
        // 2-orbit rep bi is e_bi + side*sign*e_im; for a fixed simplex just e_bi.
        std::vector<int> b(m + 1, 0);
        std::vector<int> ranks(m + 1, 0);
        std::vector<la::SparseMatQ> dd(m + 1);
        for (int q = 0; q <= m; ++q) {
            const int nin = static_cast<int>(reps[q].size());
            const int nout = q < m ? static_cast<int>(reps[q + 1].size()) : 0;
            la::SparseMatQ dq(nout, nin);
            if (q < m) {
                for (int col = 0; col < nin; ++col) {
                    int bi = reps[q][col];
                    // image of the eigenvector under d, read at representative rows
                    la::SparseVec vec;
                    vec.emplace_back(bi, Rat(1));
                    int im = act[q].img[bi];
                    if (im != bi) vec.emplace_back(im, rat(side * act[q].sign[bi]));
                    la::SparseVec dimg = cc.d[q].apply(vec);
                    for (const auto& [row, v] : dimg) {
                        int lr = lead[q + 1][row];
                        if (lr >= 0) dq.add_entry(lr, col, v);
                    }
                }
            }
            dd[q] = std::move(dq);
        }
        for (int q = 0; q <= m; ++q) ranks[q] = la::rank(dd[q]);
        for (int q = 0; q <= m; ++q)
            b[q] = static_cast<int>(reps[q].size()) - ranks[q] - (q > 0 ? ranks[q - 1] : 0);
        return b;
    };

    std::vector<int> bplus = build_side(+1), bminus = build_side(-1);
    std::vector<Rat> h(m + 1, Rat(0));
    for (int q = 0; q <= m; ++q) h[q] = rat(bplus[q] - bminus[q]);
    return h;
}

Rat evaluate_cochain(const CochainComplex& cc, int q, const std::vector<Rat>& cochain,
                     const la::SparseVec& chain) {
    int max_id = -1;
    for (const auto& [id, v] : chain) max_id = std::max(max_id, id);
    for (int id : cc.kept[q]) max_id = std::max(max_id, id);
    std::vector<int> table(max_id + 1, -1);
    for (std::size_t k = 0; k < cc.kept[q].size(); ++k) table[cc.kept[q][k]] = static_cast<int>(k);
    Rat s(0);
    for (const auto& [id, v] : chain) {
        int bi = id <= max_id ? table[id] : -1;
        if (bi >= 0) s += cochain[bi] * v;
    }
    return s;
}

}  // namespace leflab::simplicial
