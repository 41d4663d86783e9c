#include "leflab/rational_matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace leflab::la {

namespace {

// a += s * b, both sparse and sorted.
SparseVec axpy(const SparseVec& a, const Rat& s, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i >= a.size() || b[j].first < a[i].first) {
            Rat v = s * b[j].second;
            if (v != 0) out.emplace_back(b[j].first, std::move(v));
            ++j;
        } else {
            Rat v = a[i].second + s * b[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

const Rat* find_entry(const SparseVec& v, int c) {
    auto it = std::lower_bound(v.begin(), v.end(), c,
                               [](const auto& p, int col) { return p.first < col; });
    if (it != v.end() && it->first == c) return &it->second;
    return nullptr;
}

bool is_unit(const Rat& v) { return v == 1 || v == -1; }

}  // namespace

void SparseMatQ::add_entry(int r, int c, Rat v) {
    if (v == 0) return;
    auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, int col) { return p.first < col; });
    if (it != rw.end() && it->first == c) {
        it->second += v;
        if (it->second == 0) rw.erase(it);
    } else {
        rw.insert(it, {c, std::move(v)});
    }
}

Rat SparseMatQ::at(int r, int c) const {
    const Rat* p = find_entry(row[r], c);
    return p ? *p : Rat(0);
}

std::int64_t SparseMatQ::nnz() const {
    std::int64_t n = 0;
    for (const auto& r : row) n += static_cast<std::int64_t>(r.size());
    return n;
}

SparseVec SparseMatQ::apply(const SparseVec& x) const {
    // y_r = sum_c A[r][c] x_c; iterate rows, merge against x.
    SparseVec y;
    for (int r = 0; r < rows; ++r) {
        Rat acc(0);
        std::size_t i = 0, j = 0;
        const auto& rw = row[r];
        while (i < rw.size() && j < x.size()) {
            if (rw[i].first < x[j].first) ++i;
            else if (x[j].first < rw[i].first) ++j;
            else { acc += rw[i].second * x[j].second; ++i; ++j; }
        }
        if (acc != 0) y.emplace_back(r, std::move(acc));
    }
    return y;
}

std::vector<Rat> SparseMatQ::apply_dense(const std::vector<Rat>& x) const {
    std::vector<Rat> y(rows, Rat(0));
    for (int r = 0; r < rows; ++r)
        for (const auto& [c, v] : row[r]) y[r] += v * x[c];
    return y;
}

SparseMatQ SparseMatQ::transpose() const {
    SparseMatQ t(cols, rows);
    for (int r = 0; r < rows; ++r)
        for (const auto& [c, v] : row[r]) t.row[c].emplace_back(r, v);
    return t;  // rows already sorted because r increases
}

Rat SparseMatQ::trace() const {
    Rat s(0);
    for (int r = 0; r < rows && r < cols; ++r) {
        const Rat* p = find_entry(row[r], r);
        if (p) s += *p;
    }
    return s;
}

SparseMatQ SparseMatQ::submatrix(const std::vector<int>& keep_rows,
                                 const std::vector<int>& keep_cols) const {
    std::vector<int> colmap(cols, -1);
    for (std::size_t i = 0; i < keep_cols.size(); ++i) colmap[keep_cols[i]] = static_cast<int>(i);
    SparseMatQ out(static_cast<int>(keep_rows.size()), static_cast<int>(keep_cols.size()));
    for (std::size_t i = 0; i < keep_rows.size(); ++i) {
        for (const auto& [c, v] : row[keep_rows[i]])
            if (colmap[c] >= 0) out.row[i].emplace_back(colmap[c], v);
    }
    return out;
}

SparseMatQ multiply(const SparseMatQ& a, const SparseMatQ& b) {
    if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
    SparseMatQ out(a.rows, b.cols);
    for (int r = 0; r < a.rows; ++r) {
        SparseVec acc;
        for (const auto& [k, v] : a.row[r]) acc = axpy(acc, v, b.row[k]);
        out.row[r] = std::move(acc);
    }
    return out;
}

bool is_zero(const SparseMatQ& a) {
    for (const auto& r : a.row)
        if (!r.empty()) return false;
    return true;
}

namespace {

// Forward elimination engine shared by rank() and rref(). When `reduce_full`
// is set, finished pivot rows are also reduced against later pivots, giving
// reduced row echelon form.
struct Eliminator {
    int rows, cols;
    int pivot_col_limit;
    std::vector<SparseVec> work;
    std::vector<bool> row_active;
    std::vector<std::vector<int>> col_rows;  // lazy: may hold stale row ids
    std::vector<int> col_count;

    explicit Eliminator(const SparseMatQ& a, int pivot_limit = -1)
        : rows(a.rows), cols(a.cols),
          pivot_col_limit(pivot_limit < 0 ? a.cols : pivot_limit), work(a.row),
          row_active(a.rows, true), col_rows(a.cols), col_count(a.cols, 0) {
        for (int r = 0; r < rows; ++r)
            for (const auto& [c, v] : work[r]) {
                col_rows[c].push_back(r);
                ++col_count[c];
            }
    }

    void refresh_col(int c) {
        auto& lst = col_rows[c];
        std::vector<int> fresh;
        fresh.reserve(lst.size());
        for (int r : lst)
            if (row_active[r] && find_entry(work[r], c)) fresh.push_back(r);
        lst = std::move(fresh);
        col_count[c] = static_cast<int>(lst.size());
    }

    // Markowitz-ish pivot choice: scan active rows by length, score
    // (row_nnz-1)*(col_nnz-1), prefer unit entries.
    std::pair<int, int> choose_pivot() {
        long best_score = std::numeric_limits<long>::max();
        int best_r = -1, best_c = -1;
        bool best_unit = false;
        std::vector<int> order;
        order.reserve(rows);
        for (int r = 0; r < rows; ++r)
            if (row_active[r] && !work[r].empty()) order.push_back(r);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return work[x].size() < work[y].size();
        });
        int scanned = 0;
        for (int r : order) {
            for (const auto& [c, v] : work[r]) {
                if (c >= pivot_col_limit) continue;
                long score = (static_cast<long>(work[r].size()) - 1) *
                             (static_cast<long>(col_count[c]) - 1);
                bool unit = is_unit(v);
                if (score < best_score || (score == best_score && unit && !best_unit)) {
                    // col_count is an upper bound; verify lazily only for candidates
                    best_score = score;
                    best_r = r;
                    best_c = c;
                    best_unit = unit;
                }
            }
            if (++scanned >= 16 && best_r >= 0) break;  // bounded scan
        }
        return {best_r, best_c};
    }

    void eliminate_column(int pr, int pc) {
        const Rat* pv = find_entry(work[pr], pc);
        Rat inv = Rat(1) / *pv;
        // normalize pivot row to pivot value 1
        if (*pv != 1)
            for (auto& [c, v] : work[pr]) v *= inv;
        refresh_col(pc);
        for (int r : col_rows[pc]) {
            if (r == pr || !row_active[r]) continue;
            const Rat* e = find_entry(work[r], pc);
            if (!e) continue;
            Rat s = -(*e);
            work[r] = axpy(work[r], s, work[pr]);
            for (const auto& [c, v] : work[r]) {
                col_rows[c].push_back(r);
                ++col_count[c];
            }
        }
        row_active[pr] = false;
    }
};

}  // namespace

int rank(const SparseMatQ& a) {
    Eliminator e(a);
    int rk = 0;
    while (true) {
        auto [pr, pc] = e.choose_pivot();
        if (pr < 0) break;
        e.eliminate_column(pr, pc);
        ++rk;
    }
    return rk;
}

Rref rref(const SparseMatQ& a, int pivot_col_limit) {
    Eliminator e(a, pivot_col_limit);
    std::vector<int> pivot_row_ids, pivot_cols;
    while (true) {
        auto [pr, pc] = e.choose_pivot();
        if (pr < 0) break;
        e.eliminate_column(pr, pc);
        pivot_row_ids.push_back(pr);
        pivot_cols.push_back(pc);
    }
    // Back-substitute so each pivot row is clear of every other pivot column.
    const int k = static_cast<int>(pivot_cols.size());
    for (int i = k - 1; i >= 0; --i) {
        auto& ri = e.work[pivot_row_ids[i]];
        for (int j = i + 1; j < k; ++j) {
            const Rat* v = find_entry(ri, pivot_cols[j]);
            if (v) {
                Rat s = -(*v);
                ri = axpy(ri, s, e.work[pivot_row_ids[j]]);
            }
        }
    }
    Rref out;
    out.rows = a.rows;
    out.cols = a.cols;
    std::vector<bool> is_pivot_col(a.cols, false);
    for (int i = 0; i < k; ++i) {
        out.pivot_rows.push_back(e.work[pivot_row_ids[i]]);
        out.pivot_col.push_back(pivot_cols[i]);
        is_pivot_col[pivot_cols[i]] = true;
    }
    for (int c = 0; c < a.cols; ++c)
        if (!is_pivot_col[c]) out.free_cols.push_back(c);
    return out;
}

std::vector<SparseVec> kernel_basis(const Rref& r) {
    std::vector<SparseVec> basis;
    basis.reserve(r.free_cols.size());
    for (int f : r.free_cols) {
        SparseVec v;
        v.emplace_back(f, Rat(1));
        for (std::size_t i = 0; i < r.pivot_rows.size(); ++i) {
            const Rat* e = find_entry(r.pivot_rows[i], f);
            if (e) v.emplace_back(r.pivot_col[i], -(*e));  // pivot value is 1
        }
        std::sort(v.begin(), v.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Rat> solve_particular(const SparseMatQ& a, const std::vector<Rat>& b) {
    if (static_cast<int>(b.size()) != a.rows)
        throw std::invalid_argument("solve_particular: rhs size mismatch");
    SparseMatQ aug(a.rows, a.cols + 1);
    aug.row = a.row;
    for (int r = 0; r < a.rows; ++r)
        if (b[r] != 0) aug.row[r].emplace_back(a.cols, b[r]);
    Rref rr = rref(aug, a.cols);  // never pivot on the rhs column
    // consistency: with free coordinates at zero, every eliminated-away row
    // must have zero rhs; equivalently rank(aug) with rhs pivots allowed
    // equals rank(a). With the rhs excluded from pivoting, inconsistency
    // shows up as a nonzero rhs entry in a fully reduced zero row.
    std::vector<Rat> x(a.cols, Rat(0));
    for (std::size_t i = 0; i < rr.pivot_rows.size(); ++i) {
        const Rat* rhs = find_entry(rr.pivot_rows[i], a.cols);
        if (rhs) x[rr.pivot_col[i]] = *rhs;
    }
    auto check = a.apply_dense(x);
    for (int r = 0; r < a.rows; ++r)
        if (check[r] != b[r]) throw std::runtime_error("solve_particular: inconsistent system");
    return x;
}

Rat restricted_trace(const SparseMatQ& f, const std::vector<SparseVec>& basis,
                     const std::vector<int>& unit_rows) {
    if (basis.size() != unit_rows.size())
        throw std::invalid_argument("restricted_trace: basis/unit_rows mismatch");
    Rat tr(0);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        // (F z_j) evaluated at coordinate unit_rows[j]
        const auto& frow = f.row[unit_rows[j]];
        Rat acc(0);
        std::size_t i = 0, k = 0;
        const auto& z = basis[j];
        while (i < frow.size() && k < z.size()) {
            if (frow[i].first < z[k].first) ++i;
            else if (z[k].first < frow[i].first) ++k;
            else { acc += frow[i].second * z[k].second; ++i; ++k; }
        }
        tr += acc;
    }
    return tr;
}

}  // namespace leflab::la
