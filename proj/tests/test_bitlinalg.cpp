#include <doctest.h>

#include "lcodec/bitlinalg.hpp"
#include "lcodec/rng.hpp"

using namespace lcodec;

namespace {

BitMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng.next_bit());
    return m;
}

BitMatrix random_full_col_rank(Rng& rng, std::size_t rows, std::size_t cols) {
    for (;;) {
        BitMatrix m = random_matrix(rng, rows, cols);
        if (rank_mod2(m) == cols) return m;
    }
}

const BitMatrix kHamming74H = BitMatrix::from_rows({{1, 1, 0, 1, 1, 0, 0},
                                                    {1, 0, 1, 1, 0, 1, 0},
                                                    {0, 1, 1, 1, 0, 0, 1}});

}  // namespace

TEST_CASE("mat_vec_mod2 basics") {
    CHECK(mat_vec_mod2(BitMatrix::identity(3),
                       BitVector::from_bits({1, 0, 1})) ==
          BitVector::from_bits({1, 0, 1}));
    CHECK(mat_vec_mod2(BitMatrix(2, 3), BitVector::from_bits({1, 1, 1})) ==
          BitVector(2));
    // column 0 of the Hamming(7,4) parity-check matrix
    BitVector e0(7);
    e0.set(0, true);
    CHECK(mat_vec_mod2(kHamming74H, e0) == BitVector::from_bits({1, 1, 0}));
    CHECK_THROWS_AS(mat_vec_mod2(kHamming74H, BitVector(6)),
                    std::invalid_argument);
}

TEST_CASE("rank_mod2") {
    CHECK(rank_mod2(BitMatrix::identity(5)) == 5);
    CHECK(rank_mod2(BitMatrix(3, 4)) == 0);
    CHECK(rank_mod2(BitMatrix::from_rows({{1, 0, 1, 1}, {1, 0, 1, 1}})) == 1);

    SUBCASE("invariant under row permutation and row addition") {
        Rng rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            BitMatrix m = random_matrix(rng, 5, 8);
            const std::size_t r0 = rank_mod2(m);
            BitMatrix p = m;
            p.swap_rows(0, 4);
            CHECK(rank_mod2(p) == r0);
            BitMatrix q = m;
            q.xor_row_into(1, 3);
            CHECK(rank_mod2(q) == r0);
        }
    }
}

TEST_CASE("left_inverse") {
    CHECK(left_inverse(BitMatrix::identity(4)) == BitMatrix::identity(4));

    SUBCASE("systematic G gives projection") {
        // G = [I_3 over P]
        BitMatrix g = BitMatrix::from_rows(
            {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}});
        BitMatrix a = left_inverse(g);
        CHECK(a.multiply(g) == BitMatrix::identity(3));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                CHECK(a.get(i, j) == (i == j));
    }

    SUBCASE("A*G = I for random full-rank G") {
        Rng rng(42);
        for (int trial = 0; trial < 100; ++trial) {
            BitMatrix g = random_full_col_rank(rng, 7, 4);
            CHECK(left_inverse(g).multiply(g) == BitMatrix::identity(4));
        }
    }

    SUBCASE("rank-deficient input throws") {
        BitMatrix g(4, 2);
        g.set(0, 0, true);
        g.set(1, 0, true);  // second column all-zero
        CHECK_THROWS_AS(left_inverse(g), std::invalid_argument);
    }
}

TEST_CASE("right_inverse") {
    CHECK(right_inverse(BitMatrix::identity(4)) == BitMatrix::identity(4));

    SUBCASE("parity-layout H gives trailing identity") {
        BitMatrix d = right_inverse(kHamming74H);
        CHECK(kHamming74H.multiply(d) == BitMatrix::identity(3));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK_FALSE(d.get(i, j));
    }

    SUBCASE("H*D = I for random full-row-rank H") {
        Rng rng(43);
        for (int trial = 0; trial < 100; ++trial) {
            BitMatrix h = random_full_col_rank(rng, 7, 3).transpose();
            CHECK(h.multiply(right_inverse(h)) == BitMatrix::identity(3));
        }
    }

    SUBCASE("rank-deficient input throws") {
        CHECK_THROWS_AS(right_inverse(BitMatrix(2, 5)), std::invalid_argument);
    }
}

TEST_CASE("remove_redundant_rows") {
    SUBCASE("full-rank matrix unchanged") {
        CHECK(remove_redundant_rows(kHamming74H) == kHamming74H);
    }
    SUBCASE("duplicate dropped, stable order") {
        BitMatrix h = BitMatrix::from_rows(
            {{1, 0, 1}, {0, 1, 1}, {1, 0, 1}});
        BitMatrix r = remove_redundant_rows(h);
        CHECK(r == BitMatrix::from_rows({{1, 0, 1}, {0, 1, 1}}));
    }
    SUBCASE("appended XOR of first two rows dropped, rank preserved") {
        BitMatrix extra(1, 7);
        extra.set_row(0, kHamming74H.row(0) ^ kHamming74H.row(1));
        BitMatrix h = BitMatrix::stack(kHamming74H, extra);
        CHECK(rank_mod2(h) == 3);
        CHECK(remove_redundant_rows(h) == kHamming74H);
    }
}
