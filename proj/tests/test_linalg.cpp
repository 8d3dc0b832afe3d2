#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nilforge/linalg.hpp"
#include "nilforge/rational.hpp"

using namespace nilforge;
using Mat = Matrix<Rational>;

namespace {

Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::uniform_int_distribution<long> entry(-5, 5);
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Rational(entry(rng));
    return m;
}

}  // namespace

TEST_CASE("rref pivots and normalization") {
    Mat m(3, 4);
    // rows: [0 2 4 6], [1 1 1 1], [1 3 5 7]
    long data[3][4] = {{0, 2, 4, 6}, {1, 1, 1, 1}, {1, 3, 5, 7}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) m.at(i, j) = Rational(data[i][j]);
    auto pivots = rref(m);
    CHECK(pivots == std::vector<int>{0, 1});
    CHECK(m.at(0, 0) == Rational(1));
    CHECK(m.at(0, 1) == Rational(0));
    CHECK(m.at(1, 1) == Rational(1));
    CHECK(m.at(2, 0) == Rational(0));
}

TEST_CASE("kernel basis spans the null space exactly") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        Mat m = random_matrix(rng, 4, 6);
        auto kernel = kernel_basis(m);
        CHECK(static_cast<int>(kernel.size()) == 6 - rank(m));
        for (const auto& v : kernel) {
            for (const Rational& x : m.apply(v)) CHECK(x.is_zero());
        }
    }
}

TEST_CASE("solve returns a particular solution or reports inconsistency") {
    std::mt19937_64 rng(37);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Mat m = random_matrix(rng, 4, 5);
        std::vector<Rational> b(4);
        std::uniform_int_distribution<long> entry(-5, 5);
        for (auto& x : b) x = Rational(entry(rng));
        auto x = solve(m, b);
        if (x) {
            ++solved;
            CHECK(m.apply(*x) == b);
        } else {
            // inconsistent: the augmented matrix must gain rank
            Mat aug(4, 6);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 5; ++j) aug.at(i, j) = m.at(i, j);
                aug.at(i, 5) = b[i];
            }
            CHECK(rank(aug) == rank(m) + 1);
        }
    }
    CHECK(solved > 0);
}

TEST_CASE("inverse round-trips and rejects singular input") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        Mat m = random_matrix(rng, 4, 4);
        auto inv = inverse(m);
        if (!inv) {
            CHECK(rank(m) < 4);
            continue;
        }
        CHECK((*inv) * m == Mat::identity(4));
        CHECK(m * (*inv) == Mat::identity(4));
    }
    Mat zero(3, 3);
    CHECK_FALSE(inverse(zero).has_value());
}

TEST_CASE("rref is invariant under row permutations of the input") {
    std::mt19937_64 rng(43);
    Mat m = random_matrix(rng, 5, 5);
    Mat shuffled(5, 5);
    int perm[5] = {3, 0, 4, 1, 2};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) shuffled.at(i, j) = m.at(perm[i], j);
    Mat a = m, b = shuffled;
    rref(a);
    rref(b);
    CHECK(a == b);
}
