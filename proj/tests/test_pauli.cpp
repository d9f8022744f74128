#include <random>

#include "catch_amalgamated.hpp"
#include "dqsim/pauli.hpp"
#include "test_util.hpp"

using namespace dqsim;

TEST_CASE("parse_pauli_sum basics") {
    auto h = parse_pauli_sum("1.0 X");
    REQUIRE(h.qubit_count == 1);
    REQUIRE(h.term_count() == 1);
    REQUIRE(h.terms[0].first == 1.0);
    REQUIRE(h.terms[0].second.str() == "X");

    auto merged = parse_pauli_sum("0.5 XX\n0.5 XX");
    REQUIRE(merged.term_count() == 1);
    REQUIRE(merged.terms[0].first == 1.0);

    auto cancelled = parse_pauli_sum("0.5 XX\n-0.5 XX");
    REQUIRE(cancelled.term_count() == 0);
    REQUIRE(cancelled.qubit_count == 2);
}

TEST_CASE("parse_pauli_sum errors carry line numbers") {
    REQUIRE_THROWS_WITH(parse_pauli_sum("1.0 XX\nbogus"),
                        Catch::Matchers::ContainsSubstring("line 2"));
    REQUIRE_THROWS_AS(parse_pauli_sum("1.0 XX\n1.0 XXX"), config_error);
    REQUIRE_THROWS_AS(parse_pauli_sum("1.0 QX"), config_error);
    REQUIRE_THROWS_AS(parse_pauli_sum(""), config_error);
}

TEST_CASE("one_norm") {
    REQUIRE(one_norm(parse_pauli_sum("0.5 XX\n-0.5 ZZ")) == 1.0);
    REQUIRE(one_norm(parse_pauli_sum("0.5 XX\n-0.5 XX")) == 0.0);
    REQUIRE(one_norm(parse_pauli_sum("2 ZZ")) == 2.0);
}

TEST_CASE("spectral_norm against dense eigen-oracle") {
    REQUIRE(spectral_norm(parse_pauli_sum("1 X")) == Catch::Approx(1.0).margin(1e-12));

    auto h = parse_pauli_sum("1 XX\n1 ZZ");
    Matrix oracle = testutil::word_matrix("XX") + testutil::word_matrix("ZZ");
    double expected = testutil::largest_abs_eigenvalue(oracle);
    REQUIRE(expected == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(spectral_norm(h) == Catch::Approx(expected).margin(1e-10));

    REQUIRE(spectral_norm(parse_pauli_sum("1 X\n-1 X")) == 0.0);

    OperatorSum big(13);
    PauliString p(13);
    p.axes[0] = 3;
    big.add(1.0, p);
    REQUIRE_THROWS_AS(spectral_norm(big), capability_error);
}

TEST_CASE("cluster splits locals and interactions") {
    auto h = parse_pauli_sum("1 XXII\n1 IZZI\n1 IIXX");
    auto part = QubitPartition::from_groups({{0, 1}, {2, 3}}, 4);
    auto ch = cluster(h, part);
    REQUIRE(ch.gamma() == 2);
    REQUIRE(ch.edge_count() == 1);
    REQUIRE(ch.locals[0].term_count() == 1);
    REQUIRE(ch.locals[0].terms[0].second.str() == "XXII");
    REQUIRE(ch.locals[1].terms[0].second.str() == "IIXX");
    REQUIRE(ch.interactions[0].pauli.str() == "IZZI");
    REQUIRE(ch.interactions[0].support_nodes == std::vector<int>{0, 1});

    auto single = cluster(h, QubitPartition::from_groups({{0, 1, 2, 3}}, 4));
    REQUIRE(single.edge_count() == 0);
    REQUIRE(single.locals[0].term_count() == 3);

    auto three = cluster(parse_pauli_sum("1 ZZZ"),
                         QubitPartition::from_groups({{0}, {1}, {2}}, 3));
    REQUIRE(three.edge_count() == 1);
    REQUIRE(three.interactions[0].support_nodes.size() == 3);
}

TEST_CASE("partition validation") {
    REQUIRE_THROWS_AS(QubitPartition::from_groups({{0}, {0}}, 1), config_error);
    REQUIRE_THROWS_AS(QubitPartition::from_groups({{0}}, 2), config_error);
    REQUIRE_THROWS_AS(QubitPartition::from_groups({{0}, {}}, 1), config_error);
}

TEST_CASE("cluster then flatten is the identity on canonical sums") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto h = testutil::random_operator(rng, 5, 6);
        auto part = QubitPartition::from_groups({{0, 1}, {2, 3, 4}}, 5);
        auto back = cluster(h, part).flatten();
        REQUIRE(back.qubit_count == h.qubit_count);
        REQUIRE(back.terms == h.terms);
    }
}

TEST_CASE("one_norm dominates spectral_norm") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int qubits = 1 + static_cast<int>(rng() % 5);
        auto h = testutil::random_operator(rng, qubits, 4);
        REQUIRE(one_norm(h) >= spectral_norm(h) - 1e-10);
    }
}

TEST_CASE("nested_commutator_norm") {
    SECTION("commuting pair gives zero") {
        auto h = parse_pauli_sum("1 ZI\n1 ZZ");
        auto ch = cluster(h, QubitPartition::from_groups({{0}, {1}}, 2));
        REQUIRE(nested_commutator_norm(ch, 1).value == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("X vs ZZ, first order") {
        // Oracle: ||[X x I, Z x Z]|| with both ordered pairs contributing.
        Matrix a = testutil::word_matrix("XI"), b = testutil::word_matrix("ZZ");
        double comm = testutil::svd_norm(a * b - b * a);
        REQUIRE(comm == Catch::Approx(2.0).margin(1e-12));

        auto h = parse_pauli_sum("1 XI\n1 ZZ");
        auto ch = cluster(h, QubitPartition::from_groups({{0}, {1}}, 2));
        auto got = nested_commutator_norm(ch, 1);
        REQUIRE_FALSE(got.upper_bound);
        REQUIRE(got.value == Catch::Approx(2 * comm).margin(1e-9));
    }
    SECTION("no interactions gives zero") {
        auto h = parse_pauli_sum("1 XI\n1 IZ");
        auto ch = cluster(h, QubitPartition::from_groups({{0, 1}}, 2));
        REQUIRE(nested_commutator_norm(ch, 1).value == 0.0);
    }
    SECTION("invariant under interaction relabeling") {
        auto h = parse_pauli_sum("0.7 XII\n0.4 ZZI\n-0.3 IXX\n0.9 XIX");
        auto ch = cluster(h, QubitPartition::from_groups({{0}, {1}, {2}}, 3));
        REQUIRE(ch.edge_count() >= 2);
        auto base = nested_commutator_norm(ch, 2);
        auto shuffled = ch;
        std::swap(shuffled.interactions[0], shuffled.interactions[1]);
        auto perm = nested_commutator_norm(shuffled, 2);
        REQUIRE(base.value == Catch::Approx(perm.value).margin(1e-9));
    }
    SECTION("enumeration cap falls back to a flagged triangle bound") {
        auto h = parse_pauli_sum("1 XI\n1 ZZ");
        auto ch = cluster(h, QubitPartition::from_groups({{0}, {1}}, 2));
        auto bounded = nested_commutator_norm(ch, 1, /*enumeration_cap=*/1);
        REQUIRE(bounded.upper_bound);
        REQUIRE(bounded.value >= nested_commutator_norm(ch, 1).value - 1e-9);
    }
    SECTION("orders beyond two fall back to the flagged bound") {
        auto h = parse_pauli_sum("1 XI\n1 ZZ");
        auto ch = cluster(h, QubitPartition::from_groups({{0}, {1}}, 2));
        REQUIRE(nested_commutator_norm(ch, 3).upper_bound);
        REQUIRE_THROWS_AS(nested_commutator_norm(ch, 0), config_error);
    }
}

TEST_CASE("induced_one_norm") {
    REQUIRE(induced_one_norm(parse_pauli_sum("1 ZZ"), 2) == 1.0);

    // Brute-force oracle over legs: qubit 0 carries both terms.
    auto h = parse_pauli_sum("1 ZZI\n1 ZIZ");
    REQUIRE(induced_one_norm(h, 2) == 2.0);

    REQUIRE(induced_one_norm(parse_pauli_sum("1 X\n-1 X"), 1) == 0.0);
    REQUIRE_THROWS_AS(induced_one_norm(parse_pauli_sum("1 ZZZ"), 2), config_error);
}

TEST_CASE("dense_matrix literals and properties") {
    Matrix z = dense_matrix(parse_pauli_sum("1 Z"));
    REQUIRE(z(0, 0) == cd(1, 0));
    REQUIRE(z(1, 1) == cd(-1, 0));
    REQUIRE(z(0, 1) == cd(0, 0));

    Matrix x = dense_matrix(parse_pauli_sum("1 X"));
    REQUIRE(x(0, 1) == cd(1, 0));
    REQUIRE(x(1, 0) == cd(1, 0));

    Matrix mix = dense_matrix(parse_pauli_sum("0.5 XX\n0.5 ZZ"));
    REQUIRE(is_hermitian(mix, 1e-14));
    REQUIRE(std::abs(mix.trace()) < 1e-14);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = testutil::random_operator(rng, 3, 3);
        auto b = testutil::random_operator(rng, 3, 3);
        OperatorSum sum(3);
        for (auto& [c, p] : a.terms) sum.add(c, p);
        for (auto& [c, p] : b.terms) sum.add(c, p);
        sum.canonicalize();
        Matrix lhs = dense_matrix(sum);
        Matrix rhs = dense_matrix(a) + dense_matrix(b);
        REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("dense_matrix respects qubit order") {
    // X on qubit 0 of two flips the least significant index bit.
    Matrix m = dense_matrix(parse_pauli_sum("1 XI"));
    REQUIRE(m(1, 0) == cd(1, 0));
    REQUIRE(m(3, 2) == cd(1, 0));
    REQUIRE(m(2, 0) == cd(0, 0));
}
