#include "deepho/exact_linear.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "deepho/errors.hpp"

namespace deepho {

// ---------------------------------------------------------------------------
// SparseIntMatrix

SparseIntMatrix::SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require(rows >= 0 && cols >= 0, "matrix dimensions must be non-negative");
}

SparseIntMatrix SparseIntMatrix::fromTriplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseIntMatrix m(rows, cols);
  std::vector<std::vector<std::pair<int, Integer>>> tmp(cols);
  for (const auto& e : t) {
    require(e.row >= 0 && e.row < rows && e.col >= 0 && e.col < cols, "triplet out of range");
    tmp[e.col].emplace_back(e.row, e.value);
  }
  for (int c = 0; c < cols; ++c) {
    auto& v = tmp[c];
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [r, val] : v) {
      if (!m.cols_[c].empty() && m.cols_[c].back().row == r) {
        m.cols_[c].back().value += val;
      } else {
        m.cols_[c].push_back({r, val});
      }
    }
    std::erase_if(m.cols_[c], [](const Entry& e) { return e.value == 0; });
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::fromDense(const std::vector<std::vector<Integer>>& rows, int cols) {
  int r = static_cast<int>(rows.size());
  int c = cols >= 0 ? cols : (r > 0 ? static_cast<int>(rows[0].size()) : 0);
  SparseIntMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    require(static_cast<int>(rows[i].size()) == c, "ragged dense matrix");
    for (int j = 0; j < c; ++j)
      if (rows[i][j] != 0) m.cols_[j].push_back({i, rows[i][j]});
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::identity(int n) {
  SparseIntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.cols_[i].push_back({i, 1});
  return m;
}

SparseIntMatrix SparseIntMatrix::fromColumns(int rows, std::vector<Column> cols) {
  SparseIntMatrix m(rows, static_cast<int>(cols.size()));
  for (auto& c : cols) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      require(c[k].row >= 0 && c[k].row < rows, "column entry out of range");
      require(k == 0 || c[k - 1].row < c[k].row, "column entries must be sorted");
    }
    std::erase_if(c, [](const Entry& e) { return e.value == 0; });
  }
  m.cols_ = std::move(cols);
  return m;
}

SparseIntMatrix SparseIntMatrix::fromColumnVectors(int rows, const std::vector<IntVector>& cols) {
  SparseIntMatrix m(rows, static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    require(static_cast<int>(cols[c].size()) == rows, "column vector has wrong length");
    for (int r = 0; r < rows; ++r)
      if (cols[c][r] != 0) m.cols_[c].push_back({r, cols[c][r]});
  }
  return m;
}

std::size_t SparseIntMatrix::nonZeros() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

Integer SparseIntMatrix::at(int r, int c) const {
  const auto& col = cols_.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, int row) { return e.row < row; });
  if (it != col.end() && it->row == r) return it->value;
  return 0;
}

void SparseIntMatrix::set(int r, int c, const Integer& v) {
  require(r >= 0 && r < rows_ && c >= 0 && c < cols(), "set out of range");
  auto& col = cols_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, int row) { return e.row < row; });
  if (it != col.end() && it->row == r) {
    if (v == 0) col.erase(it); else it->value = v;
  } else if (v != 0) {
    col.insert(it, Entry{r, v});
  }
}

IntVector SparseIntMatrix::denseColumn(int c) const {
  IntVector v(rows_);
  for (const auto& e : cols_.at(c)) v[e.row] = e.value;
  return v;
}

std::vector<std::vector<Integer>> SparseIntMatrix::toDense() const {
  std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols()));
  for (int c = 0; c < cols(); ++c)
    for (const auto& e : cols_[c]) d[e.row][c] = e.value;
  return d;
}

std::vector<Triplet> SparseIntMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nonZeros());
  for (int c = 0; c < cols(); ++c)
    for (const auto& e : cols_[c]) t.push_back({e.row, c, e.value});
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return t;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t(cols(), rows_);
  for (int c = 0; c < cols(); ++c)
    for (const auto& e : cols_[c]) t.cols_[e.row].push_back({c, e.value});
  return t;
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& o) const {
  require(cols() == o.rows(), "matrix product dimension mismatch");
  SparseIntMatrix p(rows_, o.cols());
  std::vector<Integer> acc(rows_);
  std::vector<int> touched;
  std::vector<char> mark(rows_, 0);
  for (int c = 0; c < o.cols(); ++c) {
    touched.clear();
    for (const auto& oe : o.cols_[c]) {
      for (const auto& e : cols_[oe.row]) {
        if (!mark[e.row]) {
          mark[e.row] = 1;
          touched.push_back(e.row);
          acc[e.row] = 0;
        }
        acc[e.row] += e.value * oe.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int r : touched) {
      if (acc[r] != 0) p.cols_[c].push_back({r, acc[r]});
      mark[r] = 0;
    }
  }
  return p;
}

SparseIntMatrix SparseIntMatrix::operator+(const SparseIntMatrix& o) const {
  require(rows_ == o.rows_ && cols() == o.cols(), "matrix sum dimension mismatch");
  SparseIntMatrix s(rows_, cols());
  for (int c = 0; c < cols(); ++c) {
    const auto& a = cols_[c];
    const auto& b = o.cols_[c];
    std::size_t i = 0, j = 0;
    auto& out = s.cols_[c];
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].row < b[j].row)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].row < a[i].row) {
        out.push_back(b[j++]);
      } else {
        Integer v = a[i].value + b[j].value;
        if (v != 0) out.push_back({a[i].row, v});
        ++i;
        ++j;
      }
    }
  }
  return s;
}

SparseIntMatrix SparseIntMatrix::operator-() const {
  SparseIntMatrix n = *this;
  for (auto& c : n.cols_)
    for (auto& e : c) e.value = -e.value;
  return n;
}

SparseIntMatrix SparseIntMatrix::operator-(const SparseIntMatrix& o) const { return *this + (-o); }

IntVector SparseIntMatrix::apply(const IntVector& x) const {
  require(static_cast<int>(x.size()) == cols(), "matrix-vector dimension mismatch");
  IntVector y(rows_);
  for (int c = 0; c < cols(); ++c) {
    if (x[c] == 0) continue;
    for (const auto& e : cols_[c]) y[e.row] += e.value * x[c];
  }
  return y;
}

bool SparseIntMatrix::operator==(const SparseIntMatrix& o) const {
  if (rows_ != o.rows_ || cols() != o.cols()) return false;
  for (int c = 0; c < cols(); ++c) {
    const auto& a = cols_[c];
    const auto& b = o.cols_[c];
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].row != b[k].row || a[k].value != b[k].value) return false;
  }
  return true;
}

SparseIntMatrix SparseIntMatrix::selectColumns(const std::vector<int>& idx) const {
  SparseIntMatrix s(rows_, static_cast<int>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) s.cols_[k] = cols_.at(idx[k]);
  return s;
}

SparseIntMatrix SparseIntMatrix::selectRows(const std::vector<int>& idx) const {
  std::vector<int> where(rows_, -1);
  std::vector<std::vector<int>> multi;
  bool distinct = true;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (where[idx[k]] >= 0) distinct = false;
    where[idx[k]] = static_cast<int>(k);
  }
  if (!distinct) return transpose().selectColumns(idx).transpose();
  SparseIntMatrix s(static_cast<int>(idx.size()), cols());
  for (int c = 0; c < cols(); ++c) {
    for (const auto& e : cols_[c])
      if (where[e.row] >= 0) s.cols_[c].push_back({where[e.row], e.value});
    std::sort(s.cols_[c].begin(), s.cols_[c].end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  }
  return s;
}

SparseIntMatrix SparseIntMatrix::hcat(const SparseIntMatrix& o) const {
  require(rows_ == o.rows_, "hcat row mismatch");
  SparseIntMatrix s(rows_, 0);
  s.cols_ = cols_;
  s.cols_.insert(s.cols_.end(), o.cols_.begin(), o.cols_.end());
  return s;
}

std::string SparseIntMatrix::dump() const {
  std::ostringstream os;
  auto t = triplets();
  os << rows_ << ' ' << cols() << ' ' << t.size() << '\n';
  for (const auto& e : t) os << e.row << ' ' << e.col << ' ' << e.value << '\n';
  return os.str();
}

SparseIntMatrix SparseIntMatrix::parseDump(const std::string& text) {
  std::istringstream is(text);
  long long r = 0, c = 0, nnz = 0;
  if (!(is >> r >> c >> nnz) || r < 0 || c < 0 || nnz < 0) throw ContractViolation("bad matrix dump header");
  std::vector<Triplet> t;
  for (long long k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    std::string v;
    if (!(is >> i >> j >> v)) throw ContractViolation("truncated matrix dump");
    t.push_back({i, j, Integer(v)});
  }
  return fromTriplets(static_cast<int>(r), static_cast<int>(c), t);
}

// ---------------------------------------------------------------------------
// Smith normal form by sparse elimination

namespace {

using SVec = std::vector<std::pair<int, Integer>>;

Integer absInt(const Integer& x) { return x < 0 ? Integer(-x) : x; }

// y += c * x
void axpy(SVec& y, const Integer& c, const SVec& x) {
  if (c == 0 || x.empty()) return;
  SVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, c * x[j].second);
      ++j;
    } else {
      Integer v = y[i].second + c * x[j].second;
      if (v != 0) out.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

// (a, b) <- (s a + t b, x a + y b)
void combine2(SVec& a, SVec& b, const Integer& s, const Integer& t, const Integer& x, const Integer& y) {
  SVec na, nb;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int key;
    Integer va = 0, vb = 0;
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      key = a[i].first;
      va = a[i++].second;
    } else if (i == a.size() || b[j].first < a[i].first) {
      key = b[j].first;
      vb = b[j++].second;
    } else {
      key = a[i].first;
      va = a[i++].second;
      vb = b[j++].second;
    }
    Integer ra = s * va + t * vb;
    Integer rb = x * va + y * vb;
    if (ra != 0) na.emplace_back(key, std::move(ra));
    if (rb != 0) nb.emplace_back(key, std::move(rb));
  }
  a = std::move(na);
  b = std::move(nb);
}

void scale(SVec& a, const Integer& c) {
  for (auto& e : a) e.second *= c;
}

Integer get(const SVec& v, int key) {
  auto it = std::lower_bound(v.begin(), v.end(), key, [](const auto& e, int k) { return e.first < k; });
  return (it != v.end() && it->first == key) ? it->second : Integer(0);
}

struct Eliminator {
  int m, n;
  bool tr;
  std::size_t maxLimbs;
  std::vector<SVec> rows;
  std::vector<std::set<int>> colRows;
  std::vector<SVec> Urows, UinvCols, Vcols, VinvRows;

  Eliminator(const SparseIntMatrix& A, const SnfOptions& opt)
      : m(A.rows()), n(A.cols()), tr(opt.computeTransforms),
        maxLimbs(std::max<std::size_t>(1, opt.maxCoefficientBits / 64)) {
    rows.assign(m, {});
    colRows.assign(n, {});
    for (int c = 0; c < n; ++c)
      for (const auto& e : A.column(c)) {
        rows[e.row].emplace_back(c, e.value);
        colRows[c].insert(e.row);
      }
    if (tr) {
      Urows.resize(m);
      UinvCols.resize(m);
      for (int i = 0; i < m; ++i) Urows[i] = UinvCols[i] = SVec{{i, Integer(1)}};
      Vcols.resize(n);
      VinvRows.resize(n);
      for (int j = 0; j < n; ++j) Vcols[j] = VinvRows[j] = SVec{{j, Integer(1)}};
    }
  }

  void checkSize(const SVec& v) const {
    for (const auto& e : v)
      if (e.second.backend().size() > maxLimbs)
        throw ResourceError("coefficient growth exceeded the Smith normal form budget");
  }

  // row_i += c row_p
  void rowAdd(int i, int p, const Integer& c) {
    axpy(rows[i], c, rows[p]);
    checkSize(rows[i]);
    // refresh column membership for touched columns
    for (const auto& [j, v] : rows[p]) {
      bool nowNonzero = get(rows[i], j) != 0;
      if (nowNonzero) colRows[j].insert(i); else colRows[j].erase(i);
    }
    if (tr) {
      axpy(Urows[i], c, Urows[p]);
      axpy(UinvCols[p], -c, UinvCols[i]);
    }
  }

  // col_j += c col_q
  void colAdd(int j, int q, const Integer& c) {
    std::vector<int> rs(colRows[q].begin(), colRows[q].end());
    for (int r : rs) {
      Integer v = get(rows[r], q) * c;
      SVec delta{{j, v}};
      axpy(rows[r], 1, delta);
      checkSize(rows[r]);
      if (get(rows[r], j) != 0) colRows[j].insert(r); else colRows[j].erase(r);
    }
    if (tr) {
      axpy(Vcols[j], c, Vcols[q]);
      axpy(VinvRows[q], -c, VinvRows[j]);
    }
  }
};

}  // namespace

SparseIntMatrix SmithDecomposition::D() const {
  SparseIntMatrix d(rows, cols);
  for (int i = 0; i < rank(); ++i) d.set(i, i, diagonal[i]);
  return d;
}

SmithDecomposition smithNormalForm(const SparseIntMatrix& A, const SnfOptions& opt) {
  Eliminator el(A, opt);
  const int m = el.m, n = el.n;
  std::vector<char> activeRow(m, 1);
  struct Pivot {
    int row, col;
    Integer value;
  };
  std::vector<Pivot> pivots;

  auto findPivot = [&](int& pr, int& pc) {
    pr = pc = -1;
    Integer best = 0;
    for (int i = 0; i < m; ++i) {
      if (!activeRow[i]) continue;
      for (const auto& [j, v] : el.rows[i]) {
        Integer a = absInt(v);
        if (pr < 0 || a < best) {
          pr = i;
          pc = j;
          best = a;
          if (best == 1) return;
        }
      }
    }
  };

  while (true) {
    int p, q;
    findPivot(p, q);
    if (p < 0) break;
    while (true) {
      Integer a = get(el.rows[p], q);
      std::vector<int> others;
      for (int i : el.colRows[q])
        if (i != p) others.push_back(i);
      for (int i : others) {
        Integer qt = get(el.rows[i], q) / a;
        if (qt != 0) el.rowAdd(i, p, -qt);
      }
      if (el.colRows[q].size() > 1) {
        int best = -1;
        Integer bv = 0;
        for (int i : el.colRows[q]) {
          if (i == p) continue;
          Integer v = absInt(get(el.rows[i], q));
          if (best < 0 || v < bv) {
            best = i;
            bv = v;
          }
        }
        p = best;
        continue;
      }
      SVec rowp = el.rows[p];
      for (const auto& [j, v] : rowp) {
        if (j == q) continue;
        Integer qt = v / a;
        if (qt != 0) el.colAdd(j, q, -qt);
      }
      if (el.rows[p].size() > 1) {
        int best = -1;
        Integer bv = 0;
        for (const auto& [j, v] : el.rows[p]) {
          if (j == q) continue;
          Integer av = absInt(v);
          if (best < 0 || av < bv) {
            best = j;
            bv = av;
          }
        }
        q = best;
        continue;
      }
      break;
    }
    Integer a = get(el.rows[p], q);
    if (a < 0) {
      scale(el.rows[p], -1);
      if (el.tr) {
        scale(el.Urows[p], -1);
        scale(el.UinvCols[p], -1);
      }
      a = -a;
    }
    activeRow[p] = 0;
    pivots.push_back({p, q, a});
  }

  // enforce the divisibility chain
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    for (std::size_t j = i + 1; j < pivots.size(); ++j) {
      const Integer a = pivots[i].value, b = pivots[j].value;
      if (b % a == 0) continue;
      Integer s, t;
      Integer g = extendedGcd(a, b, s, t);
      const int pi = pivots[i].row, pj = pivots[j].row, qi = pivots[i].col, qj = pivots[j].col;
      if (el.tr) {
        // col_qi += col_qj
        axpy(el.Vcols[qi], 1, el.Vcols[qj]);
        axpy(el.VinvRows[qj], -1, el.VinvRows[qi]);
        // rows (pi, pj) <- [[s, t], [-b/g, a/g]]
        Integer x = -b / g, y = a / g;
        combine2(el.Urows[pi], el.Urows[pj], s, t, x, y);
        combine2(el.UinvCols[pi], el.UinvCols[pj], y, -x, -t, s);
        // col_qj -= (t b / g) col_qi
        Integer c = -(t * b / g);
        axpy(el.Vcols[qj], c, el.Vcols[qi]);
        axpy(el.VinvRows[qi], -c, el.VinvRows[qj]);
      }
      pivots[i].value = g;
      pivots[j].value = a * b / g;
    }
  }

  SmithDecomposition out;
  out.rows = m;
  out.cols = n;
  std::vector<int> rowOrder, colOrder;
  std::vector<char> rowUsed(m, 0), colUsed(n, 0);
  for (const auto& pv : pivots) {
    out.diagonal.push_back(pv.value);
    rowOrder.push_back(pv.row);
    colOrder.push_back(pv.col);
    rowUsed[pv.row] = 1;
    colUsed[pv.col] = 1;
  }
  for (int i = 0; i < m; ++i)
    if (!rowUsed[i]) rowOrder.push_back(i);
  for (int j = 0; j < n; ++j)
    if (!colUsed[j]) colOrder.push_back(j);

  if (el.tr) {
    auto toCols = [](int dim, const std::vector<SVec>& vecs, const std::vector<int>& order) {
      std::vector<SparseIntMatrix::Column> cols;
      cols.reserve(order.size());
      for (int k : order) {
        SparseIntMatrix::Column c;
        c.reserve(vecs[k].size());
        for (const auto& [r, v] : vecs[k]) c.push_back({r, v});
        cols.push_back(std::move(c));
      }
      return SparseIntMatrix::fromColumns(dim, std::move(cols));
    };
    out.U = toCols(m, el.Urows, rowOrder).transpose();
    out.Uinv = toCols(m, el.UinvCols, rowOrder);
    out.V = toCols(n, el.Vcols, colOrder);
    out.Vinv = toCols(n, el.VinvRows, colOrder).transpose();
  }
  return out;
}

std::vector<Integer> invariantFactors(const SparseIntMatrix& A) {
  SnfOptions opt;
  opt.computeTransforms = false;
  return smithNormalForm(A, opt).diagonal;
}

std::optional<IntVector> solveIntegerLinear(const SmithDecomposition& snf, const IntVector& b) {
  require(static_cast<int>(b.size()) == snf.rows, "right-hand side has wrong length");
  require(snf.U.rows() == snf.rows, "decomposition lacks transforms");
  IntVector y = snf.U.apply(b);
  IntVector z(snf.cols);
  for (int i = 0; i < snf.rows; ++i) {
    if (i < snf.rank()) {
      if (y[i] % snf.diagonal[i] != 0) return std::nullopt;
      z[i] = y[i] / snf.diagonal[i];
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V.apply(z);
}

std::optional<IntVector> solveIntegerLinear(const SparseIntMatrix& A, const IntVector& b) {
  return solveIntegerLinear(smithNormalForm(A), b);
}

KernelBasis integerKernel(const SmithDecomposition& snf) {
  std::vector<int> idx;
  for (int j = snf.rank(); j < snf.cols; ++j) idx.push_back(j);
  KernelBasis kb;
  kb.basis = snf.V.selectColumns(idx);
  kb.leftInverse = snf.Vinv.selectRows(idx);
  return kb;
}

KernelBasis integerKernel(const SparseIntMatrix& A) { return integerKernel(smithNormalForm(A)); }

SparseIntMatrix latticeBasis(const SparseIntMatrix& G) {
  if (G.cols() == 0 || G.isZero()) return SparseIntMatrix(G.rows(), 0);
  auto snf = smithNormalForm(G);
  std::vector<IntVector> cols;
  for (int i = 0; i < snf.rank(); ++i) {
    IntVector c = snf.Uinv.denseColumn(i);
    for (auto& x : c) x *= snf.diagonal[i];
    cols.push_back(std::move(c));
  }
  return SparseIntMatrix::fromColumnVectors(G.rows(), cols);
}

Integer extendedGcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Integer s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    Integer t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  s = s0;
  t = t0;
  return r0;
}

// ---------------------------------------------------------------------------
// Groups and homomorphisms

FgAbGroup::FgAbGroup(int freeRank, std::vector<Integer> torsion) : freeRank_(freeRank), torsion_(std::move(torsion)) {
  require(freeRank >= 0, "negative free rank");
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    require(torsion_[i] > 1, "torsion coefficients must exceed 1");
    require(i == 0 || torsion_[i] % torsion_[i - 1] == 0, "torsion coefficients must form a divisibility chain");
  }
}

Integer FgAbGroup::order(int i) const {
  require(i >= 0 && i < generatorCount(), "generator index out of range");
  return i < static_cast<int>(torsion_.size()) ? torsion_[i] : Integer(0);
}

bool FgAbGroup::isomorphic(const FgAbGroup& o) const {
  return freeRank_ == o.freeRank_ && torsion_ == o.torsion_;
}

IntVector FgAbGroup::normalize(IntVector x) const {
  require(static_cast<int>(x.size()) == generatorCount(), "coordinate vector has wrong length");
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    x[i] %= torsion_[i];
    if (x[i] < 0) x[i] += torsion_[i];
  }
  return x;
}

bool FgAbGroup::isZero(const IntVector& x) const {
  for (const auto& v : normalize(x))
    if (v != 0) return false;
  return true;
}

std::string FgAbGroup::str() const {
  if (isTrivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (freeRank_ > 0) {
    os << "Z";
    if (freeRank_ > 1) os << "^" << freeRank_;
    first = false;
  }
  for (const auto& t : torsion_) {
    if (!first) os << " + ";
    os << "Z/" << t;
    first = false;
  }
  return os.str();
}

void FgAbGroup::setAmbient(int m, SparseIntMatrix gens, SparseIntMatrix coords) {
  require(gens.rows() == m && gens.cols() == generatorCount(), "ambient generator matrix has wrong shape");
  require(coords.rows() == generatorCount() && coords.cols() == m, "coordinate map has wrong shape");
  ambientDim_ = m;
  ambientGenerators_ = std::move(gens);
  coordinateMap_ = std::move(coords);
}

IntVector FgAbGroup::coordinatesOf(const IntVector& ambient) const {
  require(ambientDim_ >= 0, "group has no ambient presentation");
  return normalize(coordinateMap_.apply(ambient));
}

IntVector FgAbGroup::ambientOf(const IntVector& coords) const {
  require(ambientDim_ >= 0, "group has no ambient presentation");
  return ambientGenerators_.apply(coords);
}

FgAbGroup cokernelPresentation(const SparseIntMatrix& A) {
  auto snf = smithNormalForm(A);
  std::vector<int> pos;
  std::vector<Integer> torsion;
  for (int i = 0; i < snf.rank(); ++i)
    if (snf.diagonal[i] != 1) {
      pos.push_back(i);
      torsion.push_back(snf.diagonal[i]);
    }
  int freeRank = 0;
  for (int i = snf.rank(); i < A.rows(); ++i) {
    pos.push_back(i);
    ++freeRank;
  }
  FgAbGroup G(freeRank, torsion);
  G.setAmbient(A.rows(), snf.Uinv.selectColumns(pos), snf.U.selectRows(pos));
  return G;
}

namespace {

SparseIntMatrix canonicalMatrix(const FgAbGroup& cod, const SparseIntMatrix& M) {
  std::vector<Triplet> t;
  for (const auto& e : M.triplets()) {
    Integer ord = cod.order(e.row);
    Integer v = e.value;
    if (ord != 0) {
      v %= ord;
      if (v < 0) v += ord;
    }
    if (v != 0) t.push_back({e.row, e.col, v});
  }
  return SparseIntMatrix::fromTriplets(M.rows(), M.cols(), t);
}

// Columns t_i e_i for the torsion generators of G.
SparseIntMatrix relationColumns(const FgAbGroup& G) {
  std::vector<Triplet> t;
  int s = static_cast<int>(G.torsion().size());
  for (int i = 0; i < s; ++i) t.push_back({i, i, G.torsion()[i]});
  return SparseIntMatrix::fromTriplets(G.generatorCount(), s, t);
}

IntVector unitVector(int n, int i) {
  IntVector e(n);
  e[i] = 1;
  return e;
}

IntVector firstEntries(const IntVector& v, int k) { return IntVector(v.begin(), v.begin() + k); }

// Coordinates of the columns of X in a lattice basis B (exact).
SparseIntMatrix coordinatesInBasis(const SparseIntMatrix& B, const SparseIntMatrix& X) {
  auto snf = smithNormalForm(B);
  std::vector<IntVector> cols;
  for (int j = 0; j < X.cols(); ++j) {
    auto y = solveIntegerLinear(snf, X.denseColumn(j));
    if (!y) throw ContractViolation("vector is not in the lattice");
    cols.push_back(*y);
  }
  return SparseIntMatrix::fromColumnVectors(B.cols(), cols);
}

FgAbGroup typeOfCokernel(const SparseIntMatrix& Rel) {
  auto d = invariantFactors(Rel);
  std::vector<Integer> torsion;
  for (const auto& x : d)
    if (x != 1) torsion.push_back(x);
  return FgAbGroup(Rel.rows() - static_cast<int>(d.size()), torsion);
}

}  // namespace

AbHom homFromMatrix(const FgAbGroup& dom, const FgAbGroup& cod, const SparseIntMatrix& M) {
  require(M.rows() == cod.generatorCount() && M.cols() == dom.generatorCount(), "homomorphism matrix has wrong shape");
  for (int j = 0; j < static_cast<int>(dom.torsion().size()); ++j) {
    const Integer& t = dom.torsion()[j];
    for (const auto& e : M.column(j)) {
      Integer ord = cod.order(e.row);
      Integer v = t * e.value;
      bool ok = ord == 0 ? v == 0 : v % ord == 0;
      if (!ok) throw ContractViolation("matrix does not send torsion to relations");
    }
  }
  AbHom h;
  h.dom_ = dom;
  h.cod_ = cod;
  h.m_ = canonicalMatrix(cod, M);
  return h;
}

IntVector AbHom::apply(const IntVector& x) const { return cod_.normalize(m_.apply(x)); }

bool AbHom::operator==(const AbHom& o) const {
  return dom_.isomorphic(o.dom_) && cod_.isomorphic(o.cod_) && m_ == o.m_;
}

AbHom identityHom(const FgAbGroup& G) {
  return homFromMatrix(G, G, SparseIntMatrix::identity(G.generatorCount()));
}

AbHom zeroHom(const FgAbGroup& dom, const FgAbGroup& cod) {
  return homFromMatrix(dom, cod, SparseIntMatrix(cod.generatorCount(), dom.generatorCount()));
}

AbHom compose(const AbHom& g, const AbHom& f) {
  require(f.codomain().isomorphic(g.domain()), "composition of incompatible homomorphisms");
  return homFromMatrix(f.domain(), g.codomain(), g.matrix() * f.matrix());
}

AbHom negate(const AbHom& f) { return homFromMatrix(f.domain(), f.codomain(), -f.matrix()); }

Subgroup wholeGroup(const FgAbGroup& G) {
  return Subgroup{G, SparseIntMatrix::identity(G.generatorCount())};
}

Subgroup imageSubgroup(const AbHom& f) { return Subgroup{f.codomain(), f.matrix()}; }

Subgroup kernelSubgroup(const AbHom& f) {
  const int g = f.domain().generatorCount();
  SparseIntMatrix B = f.matrix().hcat(relationColumns(f.codomain()));
  if (B.cols() == 0) return Subgroup{f.domain(), SparseIntMatrix(0, 0)};
  auto kb = integerKernel(B);
  std::vector<int> top(g);
  for (int i = 0; i < g; ++i) top[i] = i;
  return Subgroup{f.domain(), kb.basis.selectRows(top)};
}

bool subgroupContains(const Subgroup& s, const IntVector& x) {
  SparseIntMatrix L = s.generators.hcat(relationColumns(s.ambient));
  if (L.cols() == 0) {
    for (const auto& v : x)
      if (v != 0) return false;
    return true;
  }
  return solveIntegerLinear(L, x).has_value();
}

bool subgroupIncluded(const Subgroup& a, const Subgroup& b) {
  require(a.ambient.isomorphic(b.ambient), "subgroups of different groups");
  SparseIntMatrix L = b.generators.hcat(relationColumns(b.ambient));
  if (L.cols() == 0) return a.generators.isZero();
  auto snf = smithNormalForm(L);
  for (int j = 0; j < a.generators.cols(); ++j)
    if (!solveIntegerLinear(snf, a.generators.denseColumn(j))) return false;
  return true;
}

bool subgroupEquals(const Subgroup& a, const Subgroup& b) {
  return subgroupIncluded(a, b) && subgroupIncluded(b, a);
}

FgAbGroup subgroupType(const Subgroup& s) {
  SparseIntMatrix T = relationColumns(s.ambient);
  SparseIntMatrix basis = latticeBasis(s.generators.hcat(T));
  if (basis.cols() == 0) return FgAbGroup::trivial();
  return typeOfCokernel(coordinatesInBasis(basis, T));
}

FgAbGroup quotientType(const Subgroup& s, const Subgroup& t) {
  SparseIntMatrix T = relationColumns(s.ambient);
  SparseIntMatrix basis = latticeBasis(s.generators.hcat(T));
  if (basis.cols() == 0) return FgAbGroup::trivial();
  return typeOfCokernel(coordinatesInBasis(basis, t.generators.hcat(T)));
}

KernelImage kernelImage(const AbHom& f) {
  const FgAbGroup& dom = f.domain();
  const int g = dom.generatorCount();
  KernelImage out;
  Subgroup ks = kernelSubgroup(f);
  SparseIntMatrix BK = latticeBasis(ks.generators.hcat(relationColumns(dom)));
  if (BK.cols() == 0) {
    out.kernel = FgAbGroup::trivial();
    out.kernelInclusion = zeroHom(out.kernel, dom);
  } else {
    SparseIntMatrix rel = coordinatesInBasis(BK, relationColumns(dom));
    FgAbGroup K = cokernelPresentation(rel);
    SparseIntMatrix incl = BK * K.ambientGenerators();
    out.kernel = FgAbGroup(K.freeRank(), K.torsion());
    out.kernelInclusion = homFromMatrix(out.kernel, dom, incl);
  }
  SparseIntMatrix BKfull = BK.cols() == 0 ? SparseIntMatrix(g, 0) : BK;
  FgAbGroup I = cokernelPresentation(BKfull);
  out.image = FgAbGroup(I.freeRank(), I.torsion());
  out.imageInclusion = homFromMatrix(out.image, f.codomain(), f.matrix() * I.ambientGenerators());
  return out;
}

bool isInjective(const AbHom& f) { return kernelImage(f).kernel.isTrivial(); }

bool isSurjective(const AbHom& f) {
  return subgroupIncluded(wholeGroup(f.codomain()), imageSubgroup(f));
}

bool isIsomorphism(const AbHom& f) { return isSurjective(f) && isInjective(f); }

AbHom inverse(const AbHom& f) {
  require(isIsomorphism(f), "inverse requested for a non-isomorphism");
  const int g = f.domain().generatorCount();
  const int h = f.codomain().generatorCount();
  SparseIntMatrix B = f.matrix().hcat(relationColumns(f.codomain()));
  std::vector<IntVector> cols;
  if (h > 0) {
    auto snf = smithNormalForm(B);
    for (int i = 0; i < h; ++i) {
      auto y = solveIntegerLinear(snf, unitVector(h, i));
      if (!y) throw ContractViolation("inverse: generator not in image");
      cols.push_back(firstEntries(*y, g));
    }
  }
  return homFromMatrix(f.codomain(), f.domain(), SparseIntMatrix::fromColumnVectors(g, cols));
}

bool isExactAt(const AbHom& f, const AbHom& g) {
  require(f.codomain().isomorphic(g.domain()), "exactness check on incompatible maps");
  return subgroupEquals(imageSubgroup(f), kernelSubgroup(g));
}

}  // namespace deepho
