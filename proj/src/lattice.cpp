#include "qconv/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <utility>

namespace qconv {

namespace {

int64_t chk_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in add");
  return r;
}
int64_t chk_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in sub");
  return r;
}
int64_t chk_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in mul");
  return r;
}
int64_t chk_neg(int64_t a) { return chk_sub(0, a); }

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// row_i -= q * row_j
void row_axpy(IntMatrix& m, size_t i, int64_t q, size_t j) {
  if (q == 0) return;
  for (size_t c = 0; c < m[i].size(); ++c)
    m[i][c] = chk_sub(m[i][c], chk_mul(q, m[j][c]));
}

bool row_is_zero(const LatticeVector& r) {
  return std::all_of(r.begin(), r.end(), [](int64_t x) { return x == 0; });
}

// Row HNF in place; optionally applies the same row operations to *u.
// Returns the number of nonzero (pivot) rows, which end up on top.
size_t hnf_in_place(IntMatrix& m, IntMatrix* u) {
  const size_t nrows = m.size();
  const size_t ncols = nrows ? m[0].size() : 0;
  size_t r = 0;
  auto swap_rows = [&](size_t i, size_t j) {
    if (i == j) return;
    std::swap(m[i], m[j]);
    if (u) std::swap((*u)[i], (*u)[j]);
  };
  auto axpy = [&](size_t i, int64_t q, size_t j) {
    row_axpy(m, i, q, j);
    if (u) row_axpy(*u, i, q, j);
  };
  auto negate_row = [&](size_t i) {
    for (auto& x : m[i]) x = chk_neg(x);
    if (u)
      for (auto& x : (*u)[i]) x = chk_neg(x);
  };
  for (size_t col = 0; col < ncols && r < nrows; ++col) {
    // Euclidean elimination: leave a single nonzero entry in this column
    // among rows >= r, at position r.
    for (;;) {
      size_t best = nrows;
      for (size_t i = r; i < nrows; ++i)
        if (m[i][col] != 0 &&
            (best == nrows || std::llabs(m[i][col]) < std::llabs(m[best][col])))
          best = i;
      if (best == nrows) break;  // column already clear
      swap_rows(r, best);
      bool clean = true;
      for (size_t i = r + 1; i < nrows; ++i) {
        if (m[i][col] == 0) continue;
        axpy(i, m[i][col] / m[r][col], r);
        if (m[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (m[r][col] == 0) continue;
    if (m[r][col] < 0) negate_row(r);
    for (size_t i = 0; i < r; ++i)
      axpy(i, floor_div(m[i][col], m[r][col]), r);
    ++r;
  }
  return r;
}

}  // namespace

LatticeVector lat_add(const LatticeVector& a, const LatticeVector& b) {
  if (a.size() != b.size()) throw Error("lat_add: dimension mismatch");
  LatticeVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = chk_add(a[i], b[i]);
  return r;
}

LatticeVector lat_sub(const LatticeVector& a, const LatticeVector& b) {
  if (a.size() != b.size()) throw Error("lat_sub: dimension mismatch");
  LatticeVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = chk_sub(a[i], b[i]);
  return r;
}

LatticeVector lat_scale(int64_t s, const LatticeVector& v) {
  LatticeVector r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = chk_mul(s, v[i]);
  return r;
}

bool lat_is_zero(const LatticeVector& v) { return row_is_zero(v); }

IntMatrix hermite_normal_form(IntMatrix rows) {
  size_t r = hnf_in_place(rows, nullptr);
  rows.resize(r);
  return rows;
}

SmithResult smith_normal_form(IntMatrix a) {
  const size_t nrows = a.size();
  const size_t ncols = nrows ? a[0].size() : 0;
  // col_inv starts as the identity; every column operation on `a` is mirrored
  // by the inverse row operation on col_inv, keeping col_inv equal to the
  // inverse of the accumulated column transform.
  IntMatrix vinv(ncols, LatticeVector(ncols, 0));
  IntMatrix v(ncols, LatticeVector(ncols, 0));
  for (size_t i = 0; i < ncols; ++i) vinv[i][i] = v[i][i] = 1;

  auto col_axpy = [&](size_t j, int64_t q, size_t i) {
    // col_j -= q * col_i
    if (q == 0) return;
    for (size_t r = 0; r < nrows; ++r) a[r][j] = chk_sub(a[r][j], chk_mul(q, a[r][i]));
    for (size_t r = 0; r < ncols; ++r) v[r][j] = chk_sub(v[r][j], chk_mul(q, v[r][i]));
    row_axpy(vinv, i, chk_neg(q), j);
  };
  auto col_swap = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < nrows; ++r) std::swap(a[r][i], a[r][j]);
    for (size_t r = 0; r < ncols; ++r) std::swap(v[r][i], v[r][j]);
    std::swap(vinv[i], vinv[j]);
  };
  auto col_negate = [&](size_t j) {
    for (size_t r = 0; r < nrows; ++r) a[r][j] = chk_neg(a[r][j]);
    for (size_t r = 0; r < ncols; ++r) v[r][j] = chk_neg(v[r][j]);
    for (auto& x : vinv[j]) x = chk_neg(x);
  };

  std::vector<int64_t> diag;
  size_t p = 0;  // current pivot index
  while (p < nrows && p < ncols) {
    // locate a nonzero entry in the remaining block, minimal |value|
    size_t pr = nrows, pc = ncols;
    for (size_t i = p; i < nrows; ++i)
      for (size_t j = p; j < ncols; ++j)
        if (a[i][j] != 0 &&
            (pr == nrows || std::llabs(a[i][j]) < std::llabs(a[pr][pc])))
          pr = i, pc = j;
    if (pr == nrows) break;
    std::swap(a[p], a[pr]);
    col_swap(p, pc);
    for (;;) {
      bool dirty = false;
      for (size_t i = p + 1; i < nrows; ++i) {
        if (a[i][p] == 0) continue;
        row_axpy(a, i, a[i][p] / a[p][p], p);
        if (a[i][p] != 0) {
          std::swap(a[p], a[i]);
          dirty = true;
        }
      }
      for (size_t j = p + 1; j < ncols; ++j) {
        if (a[p][j] == 0) continue;
        col_axpy(j, a[p][j] / a[p][p], p);
        if (a[p][j] != 0) {
          col_swap(p, j);
          dirty = true;
        }
      }
      if (!dirty) break;
    }
    // divisibility fix-up: pivot must divide every remaining entry
    bool restart = false;
    for (size_t i = p + 1; i < nrows && !restart; ++i)
      for (size_t j = p + 1; j < ncols && !restart; ++j)
        if (a[i][j] % a[p][p] != 0) {
          row_axpy(a, p, -1, i);  // row_p += row_i
          restart = true;
        }
    if (restart) continue;
    if (a[p][p] < 0) col_negate(p);
    diag.push_back(a[p][p]);
    ++p;
  }
  return {std::move(diag), std::move(vinv), std::move(v)};
}

Subgroup::Subgroup(int ambient_rank, std::vector<LatticeVector> generators)
    : ambient_rank_(ambient_rank), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (static_cast<int>(g.size()) != ambient_rank_)
      throw Error("Subgroup: generator has wrong dimension");
  basis_ = hermite_normal_form(generators_);
}

Subgroup Subgroup::zero(int ambient_rank) { return Subgroup(ambient_rank, {}); }

bool Subgroup::contains(const LatticeVector& v) const {
  if (static_cast<int>(v.size()) != ambient_rank_)
    throw Error("Subgroup::contains: dimension mismatch");
  LatticeVector w = v;
  for (const auto& row : basis_) {
    size_t p = 0;
    while (p < row.size() && row[p] == 0) ++p;
    if (w[p] % row[p] != 0) return false;
    int64_t q = w[p] / row[p];
    for (size_t c = 0; c < w.size(); ++c) w[c] = chk_sub(w[c], chk_mul(q, row[c]));
  }
  return row_is_zero(w);
}

bool Subgroup::contains(const Subgroup& other) const {
  if (ambient_rank_ != other.ambient_rank_)
    throw Error("Subgroup::contains: ambient rank mismatch");
  for (const auto& row : other.basis_)
    if (!contains(row)) return false;
  return true;
}

std::vector<int64_t> Subgroup::coordinates(const LatticeVector& v) const {
  if (static_cast<int>(v.size()) != ambient_rank_)
    throw Error("Subgroup::coordinates: dimension mismatch");
  LatticeVector w = v;
  std::vector<int64_t> coords;
  coords.reserve(basis_.size());
  for (const auto& row : basis_) {
    size_t p = 0;
    while (p < row.size() && row[p] == 0) ++p;
    if (w[p] % row[p] != 0) throw NotInSubgroup("coordinates: vector not in subgroup");
    int64_t q = w[p] / row[p];
    coords.push_back(q);
    for (size_t c = 0; c < w.size(); ++c) w[c] = chk_sub(w[c], chk_mul(q, row[c]));
  }
  if (!row_is_zero(w)) throw NotInSubgroup("coordinates: vector not in subgroup");
  return coords;
}

Subgroup span(int ambient_rank, const std::vector<LatticeVector>& vectors) {
  return Subgroup(ambient_rank, vectors);
}

Subgroup saturate(const Subgroup& s) {
  const auto& b = s.hermite_basis();
  if (b.empty()) return s;
  // With B = U^-1 D V^-1 (Smith form), the row span of B is generated by
  // d_i * row_i(V^-1), so the saturation is generated by the first rank rows
  // of V^-1.
  SmithResult sm = smith_normal_form(b);
  std::vector<LatticeVector> gens(sm.col_inv.begin(),
                                  sm.col_inv.begin() + sm.diagonal.size());
  return Subgroup(s.ambient_rank(), std::move(gens));
}

Subgroup subgroup_sum(const Subgroup& a, const Subgroup& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw Error("subgroup_sum: ambient rank mismatch");
  std::vector<LatticeVector> gens = a.hermite_basis();
  for (const auto& r : b.hermite_basis()) gens.push_back(r);
  return Subgroup(a.ambient_rank(), std::move(gens));
}

Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw Error("subgroup_intersection: ambient rank mismatch");
  const IntMatrix& ab = a.hermite_basis();
  const IntMatrix& bb = b.hermite_basis();
  if (ab.empty() || bb.empty()) return Subgroup::zero(a.ambient_rank());
  // (x, y) with x*A - y*B = 0 form the left kernel of the stacked matrix;
  // the intersection is { x*A }.
  IntMatrix stacked;
  for (const auto& r : ab) stacked.push_back(r);
  for (const auto& r : bb) {
    LatticeVector neg(r.size());
    for (size_t i = 0; i < r.size(); ++i) neg[i] = chk_neg(r[i]);
    stacked.push_back(neg);
  }
  const size_t m = stacked.size();
  IntMatrix u(m, LatticeVector(m, 0));
  for (size_t i = 0; i < m; ++i) u[i][i] = 1;
  size_t r = hnf_in_place(stacked, &u);
  std::vector<LatticeVector> gens;
  for (size_t i = r; i < m; ++i) {
    // kernel row: first |A| entries are the combination of A's basis rows
    LatticeVector v(a.ambient_rank(), 0);
    for (size_t j = 0; j < ab.size(); ++j)
      for (size_t c = 0; c < v.size(); ++c)
        v[c] = chk_add(v[c], chk_mul(u[i][j], ab[j][c]));
    gens.push_back(std::move(v));
  }
  return Subgroup(a.ambient_rank(), std::move(gens));
}

std::vector<int64_t> QuotientPresentation::project(const LatticeVector& v) const {
  std::vector<int64_t> out(projection_num.size());
  for (size_t i = 0; i < projection_num.size(); ++i) {
    if (projection_num[i].size() != v.size())
      throw Error("QuotientPresentation::project: dimension mismatch");
    int64_t acc = 0;
    for (size_t j = 0; j < v.size(); ++j)
      acc = chk_add(acc, chk_mul(projection_num[i][j], v[j]));
    if (acc % projection_den != 0)
      throw NotInSubgroup("project: vector not in the numerator subgroup");
    out[i] = acc / projection_den;
  }
  return out;
}

QuotientPresentation quotient_torsion_free(const Subgroup& num, const Subgroup& den) {
  if (num.ambient_rank() != den.ambient_rank())
    throw NotASubgroup("quotient: ambient rank mismatch");
  if (!num.contains(den)) throw NotASubgroup("quotient: denominator not contained in numerator");

  const int rN = num.rank();
  const int rD = den.rank();
  QuotientPresentation q;
  q.rank = rN - rD;

  // Denominator basis in numerator coordinates.
  IntMatrix c;
  for (const auto& row : den.hermite_basis()) c.push_back(num.coordinates(row));

  IntMatrix vmat;  // column transform of the Smith form, identity when rD == 0
  if (rD > 0) {
    SmithResult sm = smith_normal_form(c);
    for (int64_t d : sm.diagonal)
      if (d > 1) q.torsion_orders.push_back(d);
    vmat = std::move(sm.col);
  } else {
    vmat.assign(rN, LatticeVector(rN, 0));
    for (int i = 0; i < rN; ++i) vmat[i][i] = 1;
  }

  if (q.rank == 0) {
    q.projection_den = 1;
    return q;
  }

  // For v in Num with numerator coordinates x (x * H = v), the torsion-free
  // quotient coordinates are the last rank entries of x * V. As a matrix on
  // ambient coordinates: x = v * H^T * M^-1 with M = H * H^T, so
  //   quotient coords = V_free^T * adj(M) * H * v / det(M).
  const IntMatrix& h = num.hermite_basis();
  const int n = num.ambient_rank();
  IntMatrix mm(rN, LatticeVector(rN, 0));
  for (int i = 0; i < rN; ++i)
    for (int j = 0; j < rN; ++j)
      for (int cidx = 0; cidx < n; ++cidx)
        mm[i][j] = chk_add(mm[i][j], chk_mul(h[i][cidx], h[j][cidx]));

  // determinant and adjugate by cofactor expansion (ranks here are small)
  std::function<int64_t(const IntMatrix&)> det = [&](const IntMatrix& m) -> int64_t {
    const size_t k = m.size();
    if (k == 0) return 1;
    if (k == 1) return m[0][0];
    int64_t acc = 0;
    for (size_t j = 0; j < k; ++j) {
      if (m[0][j] == 0) continue;
      IntMatrix minor;
      for (size_t i = 1; i < k; ++i) {
        LatticeVector row;
        for (size_t jj = 0; jj < k; ++jj)
          if (jj != j) row.push_back(m[i][jj]);
        minor.push_back(std::move(row));
      }
      int64_t term = chk_mul(m[0][j], det(minor));
      acc = (j % 2 == 0) ? chk_add(acc, term) : chk_sub(acc, term);
    }
    return acc;
  };
  int64_t dm = det(mm);
  IntMatrix adj(rN, LatticeVector(rN, 0));
  for (int i = 0; i < rN; ++i)
    for (int j = 0; j < rN; ++j) {
      IntMatrix minor;
      for (int r = 0; r < rN; ++r) {
        if (r == i) continue;
        LatticeVector row;
        for (int cidx = 0; cidx < rN; ++cidx)
          if (cidx != j) row.push_back(mm[r][cidx]);
        minor.push_back(std::move(row));
      }
      int64_t cof = det(minor);
      adj[j][i] = ((i + j) % 2 == 0) ? cof : chk_neg(cof);
    }

  // projection_num = V_free^T * adj(M) * H
  IntMatrix vf_adj(q.rank, LatticeVector(rN, 0));  // V_free^T * adj(M)
  for (int i = 0; i < q.rank; ++i)
    for (int j = 0; j < rN; ++j)
      for (int k = 0; k < rN; ++k)
        vf_adj[i][j] = chk_add(vf_adj[i][j], chk_mul(vmat[k][rD + i], adj[k][j]));
  q.projection_num.assign(q.rank, LatticeVector(n, 0));
  for (int i = 0; i < q.rank; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < rN; ++k)
        q.projection_num[i][j] =
            chk_add(q.projection_num[i][j], chk_mul(vf_adj[i][k], h[k][j]));
  q.projection_den = dm;

  // normalize: positive denominator, divide out the common gcd
  if (q.projection_den < 0) {
    q.projection_den = chk_neg(q.projection_den);
    for (auto& row : q.projection_num)
      for (auto& x : row) x = chk_neg(x);
  }
  int64_t g = q.projection_den;
  for (const auto& row : q.projection_num)
    for (int64_t x : row) g = std::gcd(g, x);
  if (g > 1) {
    q.projection_den /= g;
    for (auto& row : q.projection_num)
      for (auto& x : row) x /= g;
  }
  return q;
}

bool independent_over_Q(const std::vector<Subgroup>& subgroups) {
  if (subgroups.empty()) return true;
  int total = 0;
  std::vector<LatticeVector> gens;
  for (const auto& s : subgroups) {
    total += s.rank();
    for (const auto& r : s.hermite_basis()) gens.push_back(r);
  }
  Subgroup sum(subgroups.front().ambient_rank(), std::move(gens));
  return sum.rank() == total;
}

}  // namespace qconv
