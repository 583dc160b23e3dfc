#include "opalg/linalg.hpp"

#include <algorithm>

namespace opalg {

std::vector<int> rref(std::vector<Vec>& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    const int ncols = static_cast<int>(rows[0].size());
    const int nrows = static_cast<int>(rows.size());
    int r = 0;
    for (int c = 0; c < ncols && r < nrows; ++c) {
        int p = -1;
        for (int i = r; i < nrows; ++i)
            if (!rows[i][c].isZero()) { p = i; break; }
        if (p < 0) continue;
        std::swap(rows[r], rows[p]);
        if (!rows[r][c].isOne()) {
            Scalar inv = rows[r][c].inverse();
            for (int j = c; j < ncols; ++j)
                if (!rows[r][j].isZero()) rows[r][j] *= inv;
        }
        for (int i = 0; i < nrows; ++i) {
            if (i == r || rows[i][c].isZero()) continue;
            Scalar f = rows[i][c];
            for (int j = c; j < ncols; ++j)
                if (!rows[r][j].isZero()) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(pivots.size());
    return pivots;
}

VecSubspace VecSubspace::span(int ambientDim, std::vector<Vec> vectors) {
    if (ambientDim < 0) throw InputError("VecSubspace: negative ambient dimension");
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != ambientDim)
            throw InputError("VecSubspace: vector of length " + std::to_string(v.size()) +
                             " in ambient dimension " + std::to_string(ambientDim));
    auto pivots = rref(vectors);
    return VecSubspace(ambientDim, std::move(vectors), std::move(pivots));
}

VecSubspace VecSubspace::full(int ambientDim) {
    std::vector<Vec> rows;
    rows.reserve(ambientDim);
    for (int i = 0; i < ambientDim; ++i) {
        Vec v(ambientDim);
        v[i] = Scalar(1);
        rows.push_back(std::move(v));
    }
    return span(ambientDim, std::move(rows));
}

bool VecSubspace::contains(const Vec& v) const {
    return coordsOf(v).has_value();
}

std::optional<Vec> VecSubspace::coordsOf(const Vec& v) const {
    if (static_cast<int>(v.size()) != ambient_)
        throw InputError("VecSubspace::coordsOf: ambient dimension mismatch");
    Vec w = v;
    Vec coords(basis_.size());
    for (size_t k = 0; k < basis_.size(); ++k) {
        const Scalar& c = w[pivots_[k]];
        if (c.isZero()) continue;
        coords[k] = c;
        Scalar f = c;
        const Vec& row = basis_[k];
        for (int j = pivots_[k]; j < ambient_; ++j)
            if (!row[j].isZero()) w[j] -= f * row[j];
    }
    for (const auto& x : w)
        if (!x.isZero()) return std::nullopt;
    return coords;
}

bool VecSubspace::contains(const VecSubspace& other) const {
    if (ambient_ != other.ambient_) throw InputError("VecSubspace: ambient dimension mismatch");
    for (const auto& row : other.basis_)
        if (!contains(row)) return false;
    return true;
}

VecSubspace VecSubspace::sum(const VecSubspace& other) const {
    if (ambient_ != other.ambient_) throw InputError("VecSubspace: ambient dimension mismatch");
    std::vector<Vec> rows = basis_;
    rows.insert(rows.end(), other.basis_.begin(), other.basis_.end());
    return span(ambient_, std::move(rows));
}

VecSubspace VecSubspace::annihilator() const {
    Mat m(dim(), ambient_);
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < ambient_; ++j) m.at(i, j) = basis_[i][j];
    return kernel(m);
}

VecSubspace VecSubspace::intersectViaAnnihilators(const VecSubspace& other) const {
    if (ambient_ != other.ambient_) throw InputError("VecSubspace: ambient dimension mismatch");
    VecSubspace a1 = annihilator();
    VecSubspace a2 = other.annihilator();
    Mat stacked(a1.dim() + a2.dim(), ambient_);
    for (int i = 0; i < a1.dim(); ++i)
        for (int j = 0; j < ambient_; ++j) stacked.at(i, j) = a1.basis_[i][j];
    for (int i = 0; i < a2.dim(); ++i)
        for (int j = 0; j < ambient_; ++j) stacked.at(a1.dim() + i, j) = a2.basis_[i][j];
    return kernel(stacked);
}

VecSubspace VecSubspace::intersect(const VecSubspace& other) const {
    if (ambient_ != other.ambient_) throw InputError("VecSubspace: ambient dimension mismatch");
    const int p = dim(), q = other.dim();
    if (p + q > ambient_) return intersectViaAnnihilators(other);
    // Solve sum a_i u_i = sum b_j v_j directly: kernel of n x (p+q) matrix
    // whose columns are u_i and -v_j.
    Mat m(ambient_, p + q);
    for (int i = 0; i < p; ++i)
        for (int r = 0; r < ambient_; ++r) m.at(r, i) = basis_[i][r];
    for (int j = 0; j < q; ++j)
        for (int r = 0; r < ambient_; ++r) m.at(r, p + j) = -other.basis_[j][r];
    VecSubspace coeff = kernel(m);
    std::vector<Vec> result;
    result.reserve(coeff.dim());
    for (const auto& ab : coeff.basis()) {
        Vec x(ambient_);
        for (int i = 0; i < p; ++i) {
            if (ab[i].isZero()) continue;
            for (int r = 0; r < ambient_; ++r)
                if (!basis_[i][r].isZero()) x[r] += ab[i] * basis_[i][r];
        }
        result.push_back(std::move(x));
    }
    return span(ambient_, std::move(result));
}

VecSubspace kernel(const Mat& m) {
    std::vector<Vec> rows;
    rows.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        Vec v(m.cols());
        for (int j = 0; j < m.cols(); ++j) v[j] = m.at(i, j);
        rows.push_back(std::move(v));
    }
    auto pivots = rref(rows);
    std::vector<bool> isPivot(m.cols(), false);
    for (int p : pivots) isPivot[p] = true;
    std::vector<Vec> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (isPivot[f]) continue;
        Vec v(m.cols());
        v[f] = Scalar(1);
        for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -rows[k][f];
        basis.push_back(std::move(v));
    }
    return VecSubspace::span(m.cols(), std::move(basis));
}

Mat orthoProject(const VecSubspace& s) {
    const int n = s.ambient();
    const int k = s.dim();
    if (k == 0) return Mat::zero(n, n);
    // Columns of A are the basis vectors; P = A (A* A)^{-1} A*.
    Mat a(n, k);
    for (int j = 0; j < k; ++j)
        for (int r = 0; r < n; ++r) a.at(r, j) = s.basis()[j][r];
    Mat astar = a.adjoint();
    Mat gram = astar * a;
    Mat ginv = inverse(gram); // Gram matrix of independent vectors is invertible
    return a * (ginv * astar);
}

LinearSolution solveLinear(const Mat& a, const Vec& rhs) {
    if (static_cast<int>(rhs.size()) != a.rows())
        throw InputError("solveLinear: rhs length mismatch");
    const int n = a.cols();
    std::vector<Vec> rows;
    rows.reserve(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        Vec v(n + 1);
        for (int j = 0; j < n; ++j) v[j] = a.at(i, j);
        v[n] = rhs[i];
        rows.push_back(std::move(v));
    }
    auto pivots = rref(rows);
    LinearSolution sol(kernel(a));
    if (!pivots.empty() && pivots.back() == n) return sol; // pivot in rhs column: inconsistent
    sol.consistent = true;
    sol.particular.assign(n, Scalar());
    for (size_t kk = 0; kk < pivots.size(); ++kk) sol.particular[pivots[kk]] = rows[kk][n];
    return sol;
}

Mat solveUnique(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw InputError("solveUnique: row mismatch");
    const int n = a.cols(), k = b.cols();
    std::vector<Vec> rows;
    rows.reserve(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        Vec v(n + k);
        for (int j = 0; j < n; ++j) v[j] = a.at(i, j);
        for (int j = 0; j < k; ++j) v[n + j] = b.at(i, j);
        rows.push_back(std::move(v));
    }
    auto pivots = rref(rows);
    int rankA = 0;
    for (int p : pivots)
        if (p < n) ++rankA;
    if (rankA < n) throw InternalError("solveUnique: solution not unique");
    if (static_cast<int>(pivots.size()) > rankA)
        throw InternalError("solveUnique: inconsistent system");
    Mat x(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) x.at(i, j) = rows[i][n + j];
    return x;
}

Mat inverse(const Mat& m) {
    if (!m.isSquare()) throw InputError("inverse: matrix not square");
    const int n = m.rows();
    std::vector<Vec> rows;
    rows.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec v(2 * n);
        for (int j = 0; j < n; ++j) v[j] = m.at(i, j);
        v[n + i] = Scalar(1);
        rows.push_back(std::move(v));
    }
    auto pivots = rref(rows);
    if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1)
        throw InputError("inverse: singular matrix");
    Mat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = rows[i][n + j];
    return r;
}

int rank(const Mat& m) {
    std::vector<Vec> rows;
    rows.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        Vec v(m.cols());
        for (int j = 0; j < m.cols(); ++j) v[j] = m.at(i, j);
        rows.push_back(std::move(v));
    }
    return static_cast<int>(rref(rows).size());
}

} // namespace opalg
