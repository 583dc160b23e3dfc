#ifndef OPALG_MAT_HPP
#define OPALG_MAT_HPP

#include "opalg/scalar.hpp"

#include <string>
#include <vector>

namespace opalg {

/// Dense matrix over Gaussian rationals, row-major. Values are immutable in
/// spirit: operations return fresh matrices.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw InputError("Mat: negative dimension");
    }

    static Mat zero(int rows, int cols) { return Mat(rows, cols); }
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
        return m;
    }
    /// Matrix unit E_{ij} of the given shape.
    static Mat unit(int rows, int cols, int i, int j) {
        Mat m(rows, cols);
        m.at(i, j) = Scalar(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool isSquare() const { return rows_ == cols_; }

    Scalar& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    bool isZero() const {
        for (const auto& x : e_)
            if (!x.isZero()) return false;
        return true;
    }

    Mat adjoint() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).conj();
        return r;
    }

    Scalar trace() const {
        Scalar t;
        for (int i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
        return t;
    }

    bool isHermitian() const { return isSquare() && *this == adjoint(); }
    bool isProjection() const { return isHermitian() && (*this) * (*this) == *this; }

    friend Mat operator+(const Mat& a, const Mat& b) {
        a.requireSameShape(b, "+");
        Mat r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
        return r;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        a.requireSameShape(b, "-");
        Mat r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
        return r;
    }
    Mat operator-() const {
        Mat r(rows_, cols_);
        for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = -e_[k];
        return r;
    }
    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_)
            throw InputError("Mat: shape mismatch in product (" + a.shapeStr() + " * " + b.shapeStr() + ")");
        Mat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Scalar& f = a.at(i, k);
                if (f.isZero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const Scalar& g = b.at(k, j);
                    if (g.isZero()) continue;
                    r.at(i, j) += f * g;
                }
            }
        return r;
    }
    friend Mat operator*(const Scalar& c, const Mat& a) {
        Mat r(a.rows_, a.cols_);
        if (c.isZero()) return r;
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = c * a.e_[k];
        return r;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    /// Row-major flattening; the global vectorization order of the project.
    std::vector<Scalar> vec() const { return e_; }
    static Mat unvec(const std::vector<Scalar>& v, int rows, int cols) {
        Mat m(rows, cols);
        if (v.size() != m.e_.size()) throw InputError("Mat::unvec: size mismatch");
        m.e_ = v;
        return m;
    }

    /// Lexicographic by (rows, cols, entries) under Scalar total order;
    /// used only for canonical sorting.
    int cmpTotal(const Mat& o) const {
        if (rows_ != o.rows_) return rows_ < o.rows_ ? -1 : 1;
        if (cols_ != o.cols_) return cols_ < o.cols_ ? -1 : 1;
        for (size_t k = 0; k < e_.size(); ++k) {
            int c = e_[k].cmpTotal(o.e_[k]);
            if (c != 0) return c;
        }
        return 0;
    }

    std::string shapeStr() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < rows_; ++i) {
            s += i ? "; " : "";
            for (int j = 0; j < cols_; ++j) s += (j ? ", " : "") + at(i, j).str();
        }
        return s + "]";
    }

private:
    void requireSameShape(const Mat& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw InputError(std::string("Mat: shape mismatch in ") + op + " (" + shapeStr() + " vs " + o.shapeStr() + ")");
    }

    int rows_, cols_;
    std::vector<Scalar> e_;
};

} // namespace opalg

#endif
