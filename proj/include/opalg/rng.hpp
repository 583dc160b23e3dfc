#ifndef OPALG_RNG_HPP
#define OPALG_RNG_HPP

#include "opalg/linalg.hpp"

#include <cstdint>

namespace opalg {

/// Deterministic seeded stream (splitmix64). Hand-rolled so that corpora and
/// reports are byte-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi] inclusive.
    int range(int lo, int hi) {
        if (hi < lo) throw InternalError("Rng::range: empty range");
        return lo + static_cast<int>(u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(int num, int den) { return range(1, den) <= num; }

    Rat smallRat(int maxNum = 3, int maxDen = 2) {
        Rat r(range(-maxNum, maxNum), range(1, maxDen));
        r.canonicalize();
        return r;
    }

    Scalar smallScalar(int maxNum = 3, int maxDen = 2) {
        // bias towards real and integer entries to keep arithmetic light
        Rat re = smallRat(maxNum, maxDen);
        Rat im = chance(1, 3) ? smallRat(maxNum, maxDen) : Rat(0);
        return Scalar(re, im);
    }

    Scalar nonzeroScalar(int maxNum = 3, int maxDen = 2) {
        for (;;) {
            Scalar s = smallScalar(maxNum, maxDen);
            if (!s.isZero()) return s;
        }
    }

    Mat randomMat(int rows, int cols, int maxNum = 2, int maxDen = 2) {
        Mat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (chance(2, 3)) m.at(i, j) = smallScalar(maxNum, maxDen);
        return m;
    }

    Vec randomVec(int n, int maxNum = 3, int maxDen = 2) {
        Vec v(n);
        for (auto& x : v) x = smallScalar(maxNum, maxDen);
        return v;
    }

    /// Random orthogonal projection of random rank (exact).
    Mat randomProjection(int n) {
        int d = range(0, n);
        std::vector<Vec> vs;
        vs.reserve(d);
        for (int i = 0; i < d; ++i) vs.push_back(randomVec(n));
        return orthoProject(VecSubspace::span(n, std::move(vs)));
    }

private:
    std::uint64_t state_;
};

} // namespace opalg

#endif
