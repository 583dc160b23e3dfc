#include "opalg/opspace.hpp"

namespace opalg {

OpSpace OpSpace::span(int domDim, int codDim, const std::vector<Mat>& mats) {
    if (domDim < 0 || codDim < 0) throw InputError("OpSpace: negative dimension");
    std::vector<Vec> rows;
    rows.reserve(mats.size());
    for (const auto& m : mats) {
        if (m.rows() != codDim || m.cols() != domDim)
            throw InputError("OpSpace: basis matrix of shape " + m.shapeStr() + " in B(" +
                             std::to_string(domDim) + "," + std::to_string(codDim) + ")");
        rows.push_back(m.vec());
    }
    VecSubspace vs = VecSubspace::span(codDim * domDim, std::move(rows));
    std::vector<Mat> basis;
    basis.reserve(vs.dim());
    for (const auto& row : vs.basis()) basis.push_back(Mat::unvec(row, codDim, domDim));
    return OpSpace(domDim, codDim, std::move(basis), std::move(vs));
}

OpSpace OpSpace::full(int domDim, int codDim) {
    std::vector<Mat> units;
    units.reserve(static_cast<size_t>(domDim) * codDim);
    for (int i = 0; i < codDim; ++i)
        for (int j = 0; j < domDim; ++j) units.push_back(Mat::unit(codDim, domDim, i, j));
    return span(domDim, codDim, units);
}

bool OpSpace::contains(const Mat& m) const {
    if (m.rows() != codDim_ || m.cols() != domDim_) return false;
    return vecSpan_.contains(m.vec());
}

std::optional<Vec> OpSpace::coordsOf(const Mat& m) const {
    if (m.rows() != codDim_ || m.cols() != domDim_) return std::nullopt;
    return vecSpan_.coordsOf(m.vec());
}

bool OpSpace::contains(const OpSpace& other) const {
    if (other.domDim_ != domDim_ || other.codDim_ != codDim_)
        throw InputError("OpSpace::contains: shape mismatch");
    return vecSpan_.contains(other.vecSpan_);
}

OpSpace OpSpace::sum(const OpSpace& other) const {
    if (other.domDim_ != domDim_ || other.codDim_ != codDim_)
        throw InputError("OpSpace::sum: shape mismatch");
    std::vector<Mat> all = basis_;
    all.insert(all.end(), other.basis_.begin(), other.basis_.end());
    return span(domDim_, codDim_, all);
}

OpSpace OpSpace::intersect(const OpSpace& other) const {
    if (other.domDim_ != domDim_ || other.codDim_ != codDim_)
        throw InputError("OpSpace::intersect: shape mismatch");
    VecSubspace vs = vecSpan_.intersect(other.vecSpan_);
    std::vector<Mat> mats;
    mats.reserve(vs.dim());
    for (const auto& row : vs.basis()) mats.push_back(Mat::unvec(row, codDim_, domDim_));
    return span(domDim_, codDim_, mats);
}

bool OpSpace::containsIdentity() const {
    return domDim_ == codDim_ && contains(Mat::identity(domDim_));
}

bool OpSpace::isSelfadjoint() const {
    if (domDim_ != codDim_) return false;
    for (const auto& b : basis_)
        if (!contains(b.adjoint())) return false;
    return true;
}

bool OpSpace::isClosedUnderProducts() const {
    if (domDim_ != codDim_) return false;
    for (const auto& x : basis_)
        for (const auto& y : basis_)
            if (!contains(x * y)) return false;
    return true;
}

OpSpace productSpan(const OpSpace& x, const OpSpace& y) {
    if (x.domDim() != y.codDim())
        throw InputError("productSpan: dimension mismatch (domDim " + std::to_string(x.domDim()) +
                         " vs codDim " + std::to_string(y.codDim()) + ")");
    std::vector<Mat> prods;
    prods.reserve(static_cast<size_t>(x.dim()) * y.dim());
    for (const auto& a : x.basis())
        for (const auto& b : y.basis()) prods.push_back(a * b);
    return OpSpace::span(y.domDim(), x.codDim(), prods);
}

OpSpace adjointSpace(const OpSpace& x) {
    std::vector<Mat> adj;
    adj.reserve(x.dim());
    for (const auto& b : x.basis()) adj.push_back(b.adjoint());
    return OpSpace::span(x.codDim(), x.domDim(), adj);
}

OpAlgebra OpAlgebra::fromSpaceUnchecked(OpSpace s) {
    if (s.domDim() != s.codDim()) throw InputError("OpAlgebra: domDim != codDim");
    OpAlgebra a{std::move(s)};
    a.unital = a.space.containsIdentity();
    a.selfadjoint = a.space.isSelfadjoint();
    return a;
}

OpAlgebra OpAlgebra::fromSpaceChecked(OpSpace s) {
    if (s.domDim() != s.codDim()) throw InputError("OpAlgebra: domDim != codDim");
    if (!s.isClosedUnderProducts())
        throw InputError("OpAlgebra: span is not closed under products");
    return fromSpaceUnchecked(std::move(s));
}

OpAlgebra generatedAlgebra(const OpSpace& x, bool unital) {
    if (x.domDim() != x.codDim()) throw InputError("generatedAlgebra: domDim != codDim");
    OpSpace cur = x;
    if (unital) {
        std::vector<Mat> seed = cur.basis();
        seed.push_back(Mat::identity(x.domDim()));
        cur = OpSpace::span(x.domDim(), x.codDim(), seed);
    }
    // Terminates: dimension is bounded by domDim^2 and strictly grows.
    while (true) {
        OpSpace next = cur.sum(productSpan(cur, cur));
        if (next.dim() == cur.dim()) break;
        cur = next;
    }
    return OpAlgebra::fromSpaceUnchecked(cur);
}

OpAlgebra commutant(const OpSpace& x) {
    if (x.domDim() != x.codDim()) throw InputError("commutant: domDim != codDim");
    const int n = x.domDim();
    // Rows of the constraint system for T A - A T = 0, unknown T vectorized
    // row-major: constraint (i,j) has coeff A_vj on T_iv and -A_iu on T_uj.
    std::vector<Vec> rows;
    rows.reserve(static_cast<size_t>(x.dim()) * n * n);
    for (const auto& a : x.basis()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vec row(n * n);
                bool nonzero = false;
                for (int v = 0; v < n; ++v) {
                    const Scalar& c = a.at(v, j);
                    if (c.isZero()) continue;
                    row[i * n + v] += c;
                    nonzero = true;
                }
                for (int u = 0; u < n; ++u) {
                    const Scalar& c = a.at(i, u);
                    if (c.isZero()) continue;
                    row[u * n + j] -= c;
                    nonzero = true;
                }
                if (nonzero) rows.push_back(std::move(row));
            }
    }
    VecSubspace sol = rows.empty() ? VecSubspace::full(n * n) : [&] {
        Mat m(static_cast<int>(rows.size()), n * n);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < n * n; ++j) m.at(i, j) = rows[i][j];
        return kernel(m);
    }();
    std::vector<Mat> basis;
    basis.reserve(sol.dim());
    for (const auto& row : sol.basis()) basis.push_back(Mat::unvec(row, n, n));
    return OpAlgebra::fromSpaceUnchecked(OpSpace::span(n, n, basis));
}

OpAlgebra bicommutant(const OpSpace& x) {
    if (x.domDim() != x.codDim()) throw InputError("bicommutant: domDim != codDim");
    OpSpace w = x.sum(adjointSpace(x));
    // Dual route: the generated unital *-algebra must coincide.
    OpAlgebra gen = generatedAlgebra(w, /*unital=*/true);
    if (w.containsIdentity() && w.isClosedUnderProducts()) {
        // w is already a unital von Neumann algebra; it equals its own
        // bicommutant, and the generated-algebra route collapses onto it.
        if (gen.space != w) throw InternalError("bicommutant: generated-algebra route disagrees");
        return OpAlgebra::fromSpaceUnchecked(std::move(w));
    }
    OpAlgebra c1 = commutant(w);
    OpAlgebra c2 = commutant(c1.space);
    if (c2.space != gen.space)
        throw InternalError("bicommutant: commutant route and generated-algebra route disagree");
    return c2;
}

OpAlgebra diagonal(const OpAlgebra& a) {
    OpSpace d = a.space.intersect(adjointSpace(a.space));
    return OpAlgebra::fromSpaceUnchecked(std::move(d));
}

bool isIdealIn(const OpSpace& j, const OpAlgebra& a) {
    if (j.domDim() != a.space.domDim() || j.codDim() != a.space.codDim())
        throw InputError("isIdealIn: dimension mismatch");
    return j.contains(productSpan(a.space, j)) && j.contains(productSpan(j, a.space));
}

bool isBimoduleOver(const OpSpace& u, const OpAlgebra& left, const OpAlgebra& right) {
    if (left.space.domDim() != u.codDim() || right.space.domDim() != u.domDim())
        throw InputError("isBimoduleOver: dimension mismatch");
    return u.contains(productSpan(left.space, u)) && u.contains(productSpan(u, right.space));
}

} // namespace opalg
