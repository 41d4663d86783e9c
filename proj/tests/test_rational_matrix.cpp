#include <doctest.h>

#include <random>

#include "leflab/rational_matrix.hpp"

using namespace leflab;
using namespace leflab::la;

TEST_CASE("rank of small known matrices") {
    SparseMatQ a(3, 3);
    a.add_entry(0, 0, rat(1));
    a.add_entry(0, 1, rat(2));
    a.add_entry(1, 1, rat(1));
    a.add_entry(2, 0, rat(2));
    a.add_entry(2, 1, rat(5));
    a.add_entry(2, 2, rat(0));
    // row2 = 2*row0 + row1
    CHECK(rank(a) == 2);

    SparseMatQ id(4, 4);
    for (int i = 0; i < 4; ++i) id.add_entry(i, i, rat(1));
    CHECK(rank(id) == 4);

    SparseMatQ z(5, 3);
    CHECK(rank(z) == 0);
}

TEST_CASE("kernel basis solves A x = 0 and rank-nullity holds") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(-3, 3);
    for (int trial = 0; trial < 25; ++trial) {
        int rows = 3 + trial % 5, cols = 4 + trial % 4;
        SparseMatQ a(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (val(rng) > 0) a.add_entry(r, c, rat(val(rng)));
        Rref rr = rref(a);
        auto basis = kernel_basis(rr);
        CHECK(static_cast<int>(basis.size()) + rr.rank() == cols);
        for (const auto& v : basis) {
            SparseVec img = a.apply(v);
            CHECK(img.empty());
        }
    }
}

TEST_CASE("solve_particular finds consistent solutions and rejects inconsistent ones") {
    SparseMatQ a(2, 3);
    a.add_entry(0, 0, rat(1));
    a.add_entry(0, 2, rat(1));
    a.add_entry(1, 1, rat(2));
    std::vector<Rat> b = {rat(3), rat(4)};
    auto x = solve_particular(a, b);
    auto img = a.apply_dense(x);
    CHECK(img[0] == rat(3));
    CHECK(img[1] == rat(4));

    SparseMatQ bad(2, 1);
    bad.add_entry(0, 0, rat(1));
    bad.add_entry(1, 0, rat(1));
    CHECK_THROWS(solve_particular(bad, {rat(1), rat(2)}));
}

TEST_CASE("restricted trace on an invariant kernel subspace") {
    // F = permutation swapping coordinates 0,1 and fixing 2,3;
    // d = [1 1 0 0] has kernel containing e0 - e1, e2, e3
    SparseMatQ d(1, 4);
    d.add_entry(0, 0, rat(1));
    d.add_entry(0, 1, rat(1));
    SparseMatQ f(4, 4);
    f.add_entry(0, 1, rat(1));
    f.add_entry(1, 0, rat(1));
    f.add_entry(2, 2, rat(1));
    f.add_entry(3, 3, rat(1));
    Rref rr = rref(d);
    auto basis = kernel_basis(rr);
    REQUIRE(basis.size() == 3);
    // trace of swap on span{e0-e1, e2, e3} = -1 + 1 + 1
    CHECK(restricted_trace(f, basis, rr.free_cols) == rat(1));
}

TEST_CASE("exact arithmetic survives awkward pivots") {
    // Hilbert-like fragment where floating point would drift
    SparseMatQ h(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h.add_entry(i, j, rat(1, i + j + 1));
    CHECK(rank(h) == 3);
}
