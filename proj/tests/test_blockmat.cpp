#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpvsyn/blockmat.hpp"

#include <random>

using namespace lpvsyn;

namespace {
Matrix randomMatrix(Index r, Index c, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}
}  // namespace

TEST_CASE("he basics") {
    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    Matrix expect(2, 2);
    expect << 2, 5, 5, 8;
    CHECK(he(m).isApprox(expect));
    CHECK(he(Matrix::Zero(3, 3)).isZero());
    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK(he(skew).isZero());
    CHECK_THROWS_AS(he(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("projections on 2x2 partitions") {
    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    Partition p = Partition::two(1, 1);
    Matrix lo = project(m, p, p, Projector::Lower);
    Matrix up = project(m, p, p, Projector::StrictUpper);
    Matrix expectLo(2, 2), expectUp(2, 2);
    expectLo << 1, 0, 3, 4;
    expectUp << 0, 2, 0, 0;
    CHECK(lo.isApprox(expectLo));
    CHECK(up.isApprox(expectUp));

    Matrix r(1, 2);
    r << 5, 6;
    Matrix rp = project(r, Partition::single(1), Partition::two(1, 1), Projector::Right);
    Matrix expectR(1, 2);
    expectR << 0, 6;
    CHECK(rp.isApprox(expectR));
}

TEST_CASE("projection algebra identities") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Partition rp = Partition::two(1 + trial % 3, 2);
        Partition cp = Partition::two(2, 1 + trial % 2);
        Matrix a = randomMatrix(rp.total(), cp.total(), rng);
        Matrix b = randomMatrix(rp.total(), cp.total(), rng);

        // L(M) + U(M) = M
        CHECK((project(a, rp, cp, Projector::Lower) + project(a, rp, cp, Projector::StrictUpper))
                  .isApprox(a));
        // idempotence and U o L = 0
        Matrix la = project(a, rp, cp, Projector::Lower);
        CHECK(project(la, rp, cp, Projector::Lower).isApprox(la));
        CHECK(project(la, rp, cp, Projector::StrictUpper).isZero());
        // linearity
        Matrix mix = 2.5 * a - 0.75 * b;
        CHECK(project(mix, rp, cp, Projector::Lower)
                  .isApprox(2.5 * project(a, rp, cp, Projector::Lower) -
                            0.75 * project(b, rp, cp, Projector::Lower)));
        // L(M) always satisfies the lower mask with zero tolerance
        CHECK(structure_check(la, rp, cp, StructureMask::lower(), 0.0));
    }
}

TEST_CASE("structured example matrix") {
    // 3x6 matrix with mixed structure classes.
    Matrix m(3, 6);
    m << 1, 1, 0, 0, 0, 3,
         0, 1, 1, 2, 2, 3,
         4, 4, 0, 5, 5, 0;

    // (1,1)x(2,1) lower triangular part
    CHECK(structure_check(m.topLeftCorner(2, 3), Partition::two(1, 1), Partition::two(2, 1),
                          StructureMask::lower(), 0.0));
    // (1,1)x2 top-zero part
    CHECK(structure_check(m.block(0, 3, 2, 2), Partition::two(1, 1), Partition::two(2, 0),
                          StructureMask::topZero(), 0.0));
    // (1,1)x1 unstructured part
    CHECK(structure_check(m.block(0, 5, 2, 1), Partition::two(1, 1), Partition::two(1, 0),
                          StructureMask::none(), 0.0));
    // 1x(2,1) right-zero part
    CHECK(structure_check(m.block(2, 0, 1, 3), Partition::two(1, 0), Partition::two(2, 1),
                          StructureMask::rightZero(), 0.0));
    // bottom-right zero block
    CHECK(structure_check(m.block(2, 5, 1, 1), Partition::two(1, 0), Partition::two(1, 0),
                          StructureMask::zero(), 0.0));
}

TEST_CASE("structure_check examples") {
    Partition p = Partition::two(1, 1);
    CHECK(structure_check(Matrix::Identity(2, 2), p, p, StructureMask::lower(), 0.0));
    Matrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_FALSE(structure_check(bad, p, p, StructureMask::lower(), 0.0));
    CHECK(structure_check(bad, p, p, StructureMask::lower(), 2.0));
}

TEST_CASE("degenerate partitions collapse") {
    // (a1,0) behaves like a single block: lower mask imposes nothing.
    Matrix m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    CHECK(structure_check(m, Partition::two(2, 0), Partition::two(3, 0), StructureMask::lower(), 0.0));
    // (0,a2) x (b1,b2) lower mask also imposes nothing.
    CHECK(structure_check(m, Partition::two(0, 2), Partition::two(2, 1), StructureMask::lower(), 0.0));
    // Right projector with degenerate second part zeroes everything.
    Matrix r = project(m, Partition::single(2), Partition::two(3, 0), Projector::Right);
    CHECK(r.isZero());
}

TEST_CASE("block access") {
    Matrix m(3, 3);
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    BlockMatrix bm(m, Partition::two(1, 2), Partition::two(2, 1));
    CHECK(bm.block(0, 0).isApprox(m.topLeftCorner(1, 2)));
    CHECK(bm.block(1, 1).isApprox(m.bottomRightCorner(2, 1)));
    CHECK_THROWS_AS(BlockMatrix(m, Partition::two(1, 1), Partition::two(2, 1)), DimensionError);
}
