#ifndef OPALG_POLY_HPP
#define OPALG_POLY_HPP

#include "opalg/scalar.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace opalg {

/// Sparse multivariate polynomial over the Gaussian rationals; exponent
/// vectors have a fixed length (the variable count). Supports the exact
/// division required by fraction-free elimination.
class Poly {
public:
    using Expo = std::vector<std::uint32_t>;

    explicit Poly(int nvars) : nvars_(nvars) {}
    static Poly constant(int nvars, Scalar c);
    static Poly variable(int nvars, int var);

    int nvars() const { return nvars_; }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    const std::map<Expo, Scalar>& terms() const { return terms_; }

    int degreeIn(int var) const;
    int totalDegree() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;

    /// Exact quotient; throws InternalError when the division is not exact
    /// (fraction-free elimination guarantees exactness at its call sites).
    Poly divExact(const Poly& d) const;

    Scalar eval(const std::vector<Scalar>& point) const;

    /// Substitute var -> num/den and clear the denominator by den^degreeIn(var):
    /// returns den^deg * p(..., num/den, ...), a polynomial again.
    Poly substituteCleared(int var, const Poly& num, const Poly& den) const;

    /// Coefficients of the polynomial viewed as univariate in var (all other
    /// variables must be absent).
    std::vector<Scalar> univariateCoeffs(int var) const;

    bool dependsOnlyOn(int var) const;

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    std::string str() const;

private:
    void addTerm(const Expo& e, const Scalar& c);
    int nvars_;
    std::map<Expo, Scalar> terms_; // lex-ordered by exponent vector
};

/// Fraction-free (Bareiss) elimination over the polynomial ring.
struct BareissResult {
    int rank = 0;
    std::vector<Poly> pivots; // pivot polynomials in elimination order
};

BareissResult bareissRank(std::vector<std::vector<Poly>> m);

} // namespace opalg

#endif
