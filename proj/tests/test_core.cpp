#include "opalg/linalg.hpp"
#include "opalg/rng.hpp"

#include <doctest.h>

using namespace opalg;

namespace {

Vec vec(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.push_back(Scalar(x));
    return v;
}

Mat matOf(int rows, int cols, std::initializer_list<long> entries) {
    Mat m(rows, cols);
    auto it = entries.begin();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar(*it++);
    return m;
}

} // namespace

TEST_CASE("scalar parsing and printing round trip") {
    CHECK(Scalar::parse("1/2").str() == "1/2");
    CHECK(Scalar::parse("2/4").str() == "1/2");
    CHECK(Scalar::parse("-3").str() == "-3");
    CHECK(Scalar::parse("0").str() == "0");
    CHECK(Scalar::parse("i").str() == "1i");
    CHECK(Scalar::parse("-i").str() == "-1i");
    CHECK(Scalar::parse("3i").str() == "3i");
    CHECK(Scalar::parse("1/2-2/3i").str() == "1/2-2/3i");
    CHECK(Scalar::parse("+1/2+1/3i").str() == "1/2+1/3i");
    CHECK(Scalar::parse(" 1 + 2i ").str() == "1+2i");
    CHECK(Scalar::parse("1/2i").str() == "1/2i");
    CHECK_THROWS_AS(Scalar::parse(""), InputError);
    CHECK_THROWS_AS(Scalar::parse("1/0"), InputError);
    CHECK_THROWS_AS(Scalar::parse("abc"), InputError);
    CHECK_THROWS_AS(Scalar::parse("1+"), InputError);
    CHECK_THROWS_AS(Scalar::parse("1.5"), InputError);
}

TEST_CASE("scalar field axioms on random values") {
    Rng rng(2024);
    for (int t = 0; t < 200; ++t) {
        Scalar a = rng.smallScalar(5, 4), b = rng.smallScalar(5, 4), c = rng.smallScalar(5, 4);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + Scalar(0) == a);
        CHECK(a * Scalar(1) == a);
        if (!a.isZero()) {
            CHECK(a * a.inverse() == Scalar(1));
            CHECK((b / a) * a == b);
        }
        CHECK(a * a.conj() == Scalar(a.norm2()));
        // round trip through the text form stays exact
        CHECK(Scalar::parse(a.str()) == a);
    }
}

TEST_CASE("canonicalize examples") {
    // dependent vectors collapse
    VecSubspace s = VecSubspace::span(2, {vec({1, 0}), vec({2, 0})});
    CHECK(s.dim() == 1);
    CHECK(s.basis()[0] == vec({1, 0}));

    // empty span
    CHECK(VecSubspace::span(3, {}).dim() == 0);

    // {(1,1),(1,-1)} spans C^2
    VecSubspace full = VecSubspace::span(2, {vec({1, 1}), vec({1, -1})});
    CHECK(full == VecSubspace::full(2));

    CHECK_THROWS_AS(VecSubspace::span(2, {vec({1, 2, 3})}), InputError);
}

TEST_CASE("canonicalize is idempotent and order-insensitive") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        int n = rng.range(1, 5);
        std::vector<Vec> vs;
        int k = rng.range(0, 4);
        for (int i = 0; i < k; ++i) vs.push_back(rng.randomVec(n));
        VecSubspace a = VecSubspace::span(n, vs);
        std::reverse(vs.begin(), vs.end());
        VecSubspace b = VecSubspace::span(n, vs);
        CHECK(a == b);
        CHECK(VecSubspace::span(n, a.basis()) == a);
    }
}

TEST_CASE("kernel examples") {
    CHECK(kernel(Mat::identity(3)).dim() == 0);
    CHECK(kernel(Mat::zero(2, 3)) == VecSubspace::full(3));
    Mat ones = matOf(2, 2, {1, 1, 1, 1});
    VecSubspace k = kernel(ones);
    CHECK(k.dim() == 1);
    CHECK(k.contains(vec({1, -1})));
}

TEST_CASE("rank-nullity and adjoint rank identities") {
    Rng rng(11);
    for (int t = 0; t < 60; ++t) {
        Mat m = rng.randomMat(rng.range(1, 5), rng.range(1, 5));
        CHECK(kernel(m).dim() + rank(m) == m.cols());
        CHECK(rank(m) == rank(m.adjoint()));
        // kernel of the adjoint is the orthocomplement of the image: check
        // dimension and orthogonality of all pairs
        VecSubspace ka = kernel(m.adjoint());
        CHECK(ka.dim() == m.rows() - rank(m));
        for (const auto& z : ka.basis())
            for (int j = 0; j < m.cols(); ++j) {
                Scalar dot;
                for (int i = 0; i < m.rows(); ++i) dot += z[i].conj() * m.at(i, j);
                CHECK(dot.isZero());
            }
    }
}

TEST_CASE("intersect examples and route agreement") {
    VecSubspace e1 = VecSubspace::span(3, {vec({1, 0, 0})});
    VecSubspace e2 = VecSubspace::span(3, {vec({0, 1, 0})});
    VecSubspace e12 = VecSubspace::span(3, {vec({1, 0, 0}), vec({0, 1, 0})});
    VecSubspace e23 = VecSubspace::span(3, {vec({0, 1, 0}), vec({0, 0, 1})});

    CHECK(e12.intersect(e12) == e12);
    CHECK(e1.intersect(e2).dim() == 0);
    CHECK(e12.intersect(e23) == e2);

    Rng rng(13);
    for (int t = 0; t < 60; ++t) {
        int n = rng.range(1, 5);
        std::vector<Vec> va, vb;
        for (int i = rng.range(0, n); i > 0; --i) va.push_back(rng.randomVec(n));
        for (int i = rng.range(0, n); i > 0; --i) vb.push_back(rng.randomVec(n));
        VecSubspace a = VecSubspace::span(n, va), b = VecSubspace::span(n, vb);
        VecSubspace direct = a.intersect(b);
        CHECK(direct == a.intersectViaAnnihilators(b));
        CHECK(a.contains(direct));
        CHECK(b.contains(direct));
    }
}

TEST_CASE("orthoProject examples and properties") {
    CHECK(orthoProject(VecSubspace::full(3)) == Mat::identity(3));
    CHECK(orthoProject(VecSubspace::zero(2)) == Mat::zero(2, 2));

    Mat half = orthoProject(VecSubspace::span(2, {vec({1, 1})}));
    Mat expected(2, 2);
    expected.at(0, 0) = Scalar(Rat(1, 2));
    expected.at(0, 1) = Scalar(Rat(1, 2));
    expected.at(1, 0) = Scalar(Rat(1, 2));
    expected.at(1, 1) = Scalar(Rat(1, 2));
    CHECK(half == expected);

    Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        int n = rng.range(1, 5);
        std::vector<Vec> vs;
        for (int i = rng.range(0, n); i > 0; --i) vs.push_back(rng.randomVec(n, 3, 2));
        VecSubspace s = VecSubspace::span(n, vs);
        Mat p = orthoProject(s);
        CHECK(p.isHermitian());
        CHECK(p * p == p);
        // range is exactly s: members project to themselves, and columns lie in s
        for (const auto& v : s.basis()) {
            Mat x(n, 1);
            for (int i = 0; i < n; ++i) x.at(i, 0) = v[i];
            CHECK(p * x == x);
        }
        for (int j = 0; j < n; ++j) {
            Vec col(n);
            for (int i = 0; i < n; ++i) col[i] = p.at(i, j);
            CHECK(s.contains(col));
        }
    }
}

TEST_CASE("solveLinear examples") {
    // identity system
    LinearSolution s1 = solveLinear(Mat::identity(2), vec({3, 4}));
    CHECK(s1.consistent);
    CHECK(s1.particular == vec({3, 4}));
    CHECK(s1.kernel.dim() == 0);

    // 0 x = 0: full solution space
    LinearSolution s2 = solveLinear(Mat::zero(2, 3), vec({0, 0}));
    CHECK(s2.consistent);
    CHECK(s2.kernel == VecSubspace::full(3));

    // inconsistent
    LinearSolution s3 = solveLinear(Mat::zero(1, 2), vec({1}));
    CHECK_FALSE(s3.consistent);
}

TEST_CASE("intertwiner equation T diag(1,0) = diag(1,1,0) T has a 3-dim solution space") {
    // unknown T is 3x2, vectorized row-major; build the constraint matrix by hand
    Mat l = matOf(2, 2, {1, 0, 0, 0});          // diag(1,0) on C^2
    Mat r = matOf(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 0}); // diag(1,1,0) on C^3
    // constraint (i,j): sum_v T_iv l_vj - sum_u r_iu T_uj = 0
    Mat cons(6, 6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            int row = i * 2 + j;
            for (int v = 0; v < 2; ++v) cons.at(row, i * 2 + v) += l.at(v, j);
            for (int u = 0; u < 3; ++u) cons.at(row, u * 2 + j) -= r.at(i, u);
        }
    CHECK(kernel(cons).dim() == 3);
}

TEST_CASE("inverse and solveUnique") {
    Mat m = matOf(2, 2, {1, 2, 3, 5});
    Mat inv = inverse(m);
    CHECK(m * inv == Mat::identity(2));
    CHECK_THROWS_AS(inverse(matOf(2, 2, {1, 2, 2, 4})), InputError);

    Mat b = matOf(2, 2, {1, 0, 0, 1});
    Mat x = solveUnique(m, b);
    CHECK(m * x == b);
}
