#ifndef OPALG_LINALG_HPP
#define OPALG_LINALG_HPP

#include "opalg/mat.hpp"

#include <optional>
#include <vector>

namespace opalg {

using Vec = std::vector<Scalar>;

/// In-place Gauss-Jordan to reduced row echelon form over the Gaussian
/// rationals. Zero rows are dropped. Returns the pivot column indices.
std::vector<int> rref(std::vector<Vec>& rows);

/// A linear subspace of C^n held as its unique reduced-row-echelon basis.
/// Two values are equal as values iff they are equal as subspaces.
class VecSubspace {
public:
    static VecSubspace span(int ambientDim, std::vector<Vec> vectors);
    static VecSubspace zero(int ambientDim) { return span(ambientDim, {}); }
    static VecSubspace full(int ambientDim);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Vec>& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    bool contains(const Vec& v) const;
    bool contains(const VecSubspace& other) const;

    /// Coordinates of v in the canonical basis; empty if v is not a member.
    std::optional<Vec> coordsOf(const Vec& v) const;

    VecSubspace sum(const VecSubspace& other) const;

    /// Largest subspace contained in both. Dispatches between a direct
    /// coefficient solve and the stacked-annihilator route by size; the two
    /// routes agree (tested).
    VecSubspace intersect(const VecSubspace& other) const;
    VecSubspace intersectViaAnnihilators(const VecSubspace& other) const;

    /// Vectors z with b . z = 0 (plain bilinear dot) for every basis row b.
    VecSubspace annihilator() const;

    friend bool operator==(const VecSubspace& a, const VecSubspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const VecSubspace& a, const VecSubspace& b) { return !(a == b); }

private:
    VecSubspace(int ambient, std::vector<Vec> basis, std::vector<int> pivots)
        : ambient_(ambient), basis_(std::move(basis)), pivots_(std::move(pivots)) {}

    int ambient_ = 0;
    std::vector<Vec> basis_;
    std::vector<int> pivots_;
};

/// {x : m x = 0}.
VecSubspace kernel(const Mat& m);

/// The Hermitian idempotent with range s, via exact Gram-matrix inversion.
Mat orthoProject(const VecSubspace& s);

/// Full solution set of a x = rhs: a particular solution plus the kernel,
/// or an explicit no-solution flag.
struct LinearSolution {
    bool consistent = false;
    Vec particular;       // valid iff consistent
    VecSubspace kernel;   // homogeneous part

    explicit LinearSolution(VecSubspace k) : kernel(std::move(k)) {}
};

LinearSolution solveLinear(const Mat& a, const Vec& rhs);

/// Solves a X = b for the unique X; throws InternalError when the solution
/// is absent or not unique (callers use this only where theory guarantees
/// uniqueness).
Mat solveUnique(const Mat& a, const Mat& b);

/// Exact inverse of a square matrix; throws InputError when singular.
Mat inverse(const Mat& m);

int rank(const Mat& m);

} // namespace opalg

#endif
