#include <doctest.h>

#include <sstream>

#include "lcodec/code.hpp"
#include "lcodec/rng.hpp"

using namespace lcodec;

namespace {

// polynomial long division check: does g divide x^n + 1 over GF(2)?
bool divides_xn_plus_1(const std::vector<int>& g, std::size_t n) {
    std::vector<int> xn(n + 1, 0);
    xn[0] = 1;
    xn[n] = 1;
    std::vector<int> rem = detail::poly_mod(xn, g);
    for (int c : rem)
        if (c) return false;
    return true;
}

BitVector cyclic_shift(const BitVector& v) {
    BitVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.set(i, v.get((i + 1) % v.size()));
    return out;
}

}  // namespace

TEST_CASE("bch generator polynomials") {
    SUBCASE("(15,11): g = x^4+x+1") {
        const auto g = bch_generator_poly({4, 1, 0});
        CHECK(g == std::vector<int>{1, 1, 0, 0, 1});
    }
    SUBCASE("(15,7): g = x^8+x^7+x^6+x^4+1") {
        const auto g = bch_generator_poly({4, 2, 0});
        CHECK(g == std::vector<int>{1, 0, 0, 0, 1, 0, 1, 1, 1});
    }
    SUBCASE("(63,45): deg(g) = 18") {
        const auto g = bch_generator_poly({6, 3, 0});
        CHECK(g.size() == 19);
        CHECK(g.back() == 1);
    }
    SUBCASE("g divides x^n + 1") {
        CHECK(divides_xn_plus_1(bch_generator_poly({4, 1, 0}), 15));
        CHECK(divides_xn_plus_1(bch_generator_poly({4, 2, 0}), 15));
        CHECK(divides_xn_plus_1(bch_generator_poly({6, 3, 0}), 63));
    }
    SUBCASE("non-primitive polynomial rejected") {
        // x^4 + x^3 + x^2 + x + 1 has order 5, not 15
        CHECK_THROWS_AS(bch_generator_poly({4, 1, 0x1f}),
                        std::invalid_argument);
    }
}

TEST_CASE("bch_construct dimensions and invariants") {
    const LinearCode c15_11 = bch_construct({4, 1, 0});
    CHECK(c15_11.n == 15);
    CHECK(c15_11.k == 11);
    const LinearCode c15_7 = bch_construct({4, 2, 0});
    CHECK(c15_7.n == 15);
    CHECK(c15_7.k == 7);
    const LinearCode c63_45 = bch_construct({6, 3, 0});
    CHECK(c63_45.n == 63);
    CHECK(c63_45.k == 45);

    for (const LinearCode* code : {&c15_11, &c15_7, &c63_45}) {
        CHECK(code->parity_layout);
        CHECK(rank_mod2(code->G) == code->k);
        CHECK(rank_mod2(code->H) == code->n - code->k);
        CHECK(code->A.multiply(code->G) == BitMatrix::identity(code->k));
        CHECK(rank_mod2(BitMatrix::stack(code->H, code->A)) == code->n);
    }
}

TEST_CASE("encode / syndrome") {
    const LinearCode code = hamming_7_4();
    SUBCASE("zero message encodes to zero") {
        CHECK(encode(code, BitVector(4)) == BitVector(7));
    }
    SUBCASE("unit message, hand-computed") {
        const BitVector m = BitVector::from_bits({1, 0, 0, 0});
        CHECK(encode(code, m) == BitVector::from_bits({1, 0, 0, 0, 1, 1, 0}));
    }
    SUBCASE("A recovers the message; syndrome of codewords is zero") {
        Rng rng(5);
        for (std::size_t msg = 0; msg < 16; ++msg) {
            BitVector m(4);
            for (int j = 0; j < 4; ++j) m.set(j, (msg >> j) & 1);
            const BitVector x = encode(code, m);
            CHECK(syndrome(code, x).is_zero());
            CHECK(recover_message(code, x) == m);
        }
    }
    SUBCASE("single flipped bit gives the matching H column") {
        BitVector x = encode(code, BitVector::from_bits({0, 1, 1, 0}));
        x.flip(0);
        CHECK(syndrome(code, x) == BitVector::from_bits({1, 1, 0}));
    }
    SUBCASE("syndrome is linear in the error") {
        Rng rng(6);
        const LinearCode bch = bch_construct({4, 2, 0});
        for (int trial = 0; trial < 50; ++trial) {
            BitVector m(bch.k), e(bch.n);
            for (std::size_t j = 0; j < bch.k; ++j) m.set(j, rng.next_bit());
            for (std::size_t j = 0; j < bch.n; ++j) e.set(j, rng.next_bit());
            const BitVector y = encode(bch, m) ^ e;
            CHECK(syndrome(bch, y) == syndrome(bch, e));
        }
    }
    SUBCASE("length mismatches throw") {
        CHECK_THROWS_AS(encode(code, BitVector(5)), std::invalid_argument);
        CHECK_THROWS_AS(syndrome(code, BitVector(6)), std::invalid_argument);
    }
}

TEST_CASE("bch cyclicity and minimum distance") {
    SUBCASE("(15,7): every cyclic shift of every codeword is a codeword") {
        const LinearCode code = bch_construct({4, 2, 0});
        for (std::size_t msg = 0; msg < (1u << 7); ++msg) {
            BitVector m(7);
            for (int j = 0; j < 7; ++j) m.set(j, (msg >> j) & 1);
            const BitVector shifted = cyclic_shift(encode(code, m));
            CHECK(syndrome(code, shifted).is_zero());
        }
    }
    SUBCASE("(63,45): sampled cyclicity") {
        const LinearCode code = bch_construct({6, 3, 0});
        Rng rng(8);
        for (int trial = 0; trial < 200; ++trial) {
            BitVector m(code.k);
            for (std::size_t j = 0; j < code.k; ++j) m.set(j, rng.next_bit());
            CHECK(syndrome(code, cyclic_shift(encode(code, m))).is_zero());
        }
    }
    SUBCASE("(15,7,t=2) has minimum distance >= 5") {
        const LinearCode code = bch_construct({4, 2, 0});
        for (std::size_t msg = 1; msg < (1u << 7); ++msg) {
            BitVector m(7);
            for (int j = 0; j < 7; ++j) m.set(j, (msg >> j) & 1);
            CHECK(encode(code, m).weight() >= 5);
        }
    }
}

TEST_CASE("redundant-row variants") {
    const LinearCode base = bch_construct({4, 2, 0});
    const LinearCode red = with_redundant_rows(base, 3);
    CHECK(red.H.rows() == base.H.rows() + 3);
    CHECK(rank_mod2(red.H) == base.n - base.k);
    CHECK(rank_mod2(BitMatrix::stack(red.H, red.A)) == red.n);
    // same codebook
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        BitVector m(base.k);
        for (std::size_t j = 0; j < base.k; ++j) m.set(j, rng.next_bit());
        CHECK(syndrome(red, encode(base, m)).is_zero());
    }
}

TEST_CASE("alist round trip and errors") {
    SUBCASE("identity") {
        std::istringstream in("2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n");
        CHECK(load_alist(in) == BitMatrix::identity(2));
    }
    SUBCASE("hamming H round-trips") {
        const LinearCode code = hamming_7_4();
        std::ostringstream out;
        emit_alist(code.H, out);
        std::istringstream in(out.str());
        CHECK(load_alist(in) == code.H);
    }
    SUBCASE("zero index in a 1-based list is rejected") {
        // a lone 0 makes the column list shorter than its declared degree
        std::istringstream in("2 2\n1 1\n1 1\n1 1\n0\n2\n1\n2\n");
        CHECK_THROWS_AS(load_alist(in), std::runtime_error);
    }
    SUBCASE("out-of-range index names a line") {
        std::istringstream in("2 2\n1 1\n1 1\n1 1\n3\n2\n1\n2\n");
        try {
            load_alist(in);
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line 5") != std::string::npos);
        }
    }
    SUBCASE("row/column inconsistency is rejected") {
        std::istringstream in("2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n");
        CHECK_THROWS_AS(load_alist(in), std::runtime_error);
    }
}

TEST_CASE("code_from_matrices detects layout") {
    const LinearCode base = hamming_7_4();
    const LinearCode rebuilt = code_from_matrices(base.G, base.H, "rebuilt");
    CHECK(rebuilt.parity_layout);
    CHECK(rebuilt.A == base.A);
}
