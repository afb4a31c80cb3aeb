#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "ordjump/jump.hpp"
#include "ordjump/verify.hpp"

using namespace oj;

namespace {

FiniteString S(std::initializer_list<std::uint64_t> v) {
    FiniteString s;
    for (auto x : v) s.push_back(Nat{x});
    return s;
}

void require_pass(const SuiteResult& r) {
    INFO(r.name << ": " << r.counterexample);
    CHECK(r.checks > 0);
    CHECK(r.pass());
}

const std::vector<Ord> kLevels{ord_zero(), ord_nat(1), ord_nat(2), ord_omega()};

}  // namespace

TEST_CASE("ordinal notations and fundamental sequences") {
    CHECK(fundamental_seq(ord_nat(1), 5) == ord_zero());
    for (std::uint64_t i = 0; i < 6; ++i) CHECK(fundamental_seq(ord_omega(), i) == ord_nat(i));
    Ord w2 = ord_mul_nat(ord_omega(), 2);
    CHECK(fundamental_seq(w2, 3) == ord_add(ord_omega(), ord_nat(3)));
    CHECK_THROWS_AS(fundamental_seq(ord_zero(), 0), DomainError);
    for (Ord a : {ord_omega(), w2, parse_ord("w^2"), parse_ord("w^w"), parse_ord("w^2*3+w")}) {
        for (std::uint64_t i = 0; i < 5; ++i) {
            CHECK(ord_less(fundamental_seq(a, i), a));
            CHECK_FALSE(ord_less(fundamental_seq(a, i + 1), fundamental_seq(a, i)));
        }
    }
    CHECK(format_ord(parse_ord("omega^2*3 + omega + 1")) == "w^2*3+w+1");
    CHECK(parse_ord(format_ord(parse_ord("w^(w+1)"))) == parse_ord("w^(w+1)"));
    CHECK_THROWS(parse_ord("w^"));
}

TEST_CASE("jump_string examples") {
    auto div = diverge_semantics();
    CHECK(jump_string(div, {}).empty());
    CHECK(jump_string(div, S({4})).empty());
    CHECK(jump_string(div, S({1, 2, 3})) == FiniteString{encode_string(S({1, 2})), encode_string(S({1, 2, 3}))});
    for (std::size_t m = 2; m < 8; ++m) CHECK(jump_string(div, FiniteString(m, Nat{1})).size() == m - 1);
}

TEST_CASE("k_string and images") {
    auto div = diverge_semantics();
    CHECK(k_string({}).empty());
    CHECK(k_string({encode_string(S({1})), encode_string(S({1, 7}))}) == S({1, 7}));
    CHECK(in_jump_image(div, {}));
    CHECK_FALSE(in_jump_image(div, {encode_string(S({9, 9, 9}))}));
    for (const auto& s : all_strings(2, 4)) {
        if (s.size() == 4) CHECK(k_string(jump_string(div, s)) == s);
        CHECK(in_jump_image(div, jump_string(div, s)));
    }
}

TEST_CASE("string jump agrees with the brute-force evaluator") {
    for (const auto& tb : {oracle::diverge(), oracle::threshold_a(), oracle::threshold_b(), oracle::threshold_c()}) {
        auto s = threshold_semantics(tb.b, std::nullopt, tb.name);
        for (const auto& sg : all_strings(2, 7)) CHECK(jump_string(s, sg) == oracle::jump(tb, sg));
    }
}

TEST_CASE("omega jump examples") {
    auto div = diverge_semantics();
    CHECK(omega_jump_string(div, S({3})).empty());
    CHECK(omega_jump_string(div, S({0, 1, 0, 1})).size() == 3);
    for (const auto& sg : all_strings(2, 5)) {
        if (sg.size() < 2) continue;
        CHECK(omega_jump_string(div, sg)[0] == jump_string(div, sg)[0]);
        CHECK(omega_k_string(omega_jump_string(div, sg)) == sg);
        auto j = omega_jump_string(div, sg);
        CHECK(omega_k_string(j).size() > j.size());
    }
    CHECK(omega_k_string(FiniteString{}).empty());
    CHECK_THROWS_AS(omega_k_string(div, {encode_string(S({9, 9, 9}))}), DomainError);
}

TEST_CASE("alpha jump: level 1 is the omega jump, level 2 unrolls through omega jumps") {
    auto div = diverge_semantics();
    for (const auto& sg : all_strings(2, 5)) {
        CHECK(alpha_jump_string(div, ord_nat(1), sg) == omega_jump_string(div, sg));
        CHECK(alpha_jump_string(div, ord_zero(), sg) == jump_string(div, sg));
        for (Ord a : kLevels) {
            if (sg.size() <= 1) CHECK(alpha_jump_string(div, a, sg).empty());
        }
    }
    // w^2 with every a_i = 1: read off the first entries of iterated omega jumps.
    FiniteString sg = S({0, 1, 1, 0, 1, 0});
    FiniteString expect;
    for (FiniteString cur = omega_jump_string(div, sg); !cur.empty(); cur = omega_jump_string(div, cur)) {
        expect.push_back(cur.front());
    }
    CHECK(alpha_jump_string(div, ord_nat(2), sg) == expect);
    CHECK(alpha_jump_n(div, ord_nat(2), 2, sg) == omega_jump_string(div, omega_jump_string(div, sg)));
}

TEST_CASE("alpha inverse examples") {
    auto b = fixture_threshold_b();
    CHECK(alpha_k_string(ord_nat(2), FiniteString{}).empty());
    for (auto s : {diverge_semantics(), fixture_threshold_a(), b}) {
        for (const auto& sg : all_strings(2, 5)) {
            if (sg.size() != 5) continue;
            auto j = alpha_jump_string(s, ord_nat(2), sg);
            CHECK(alpha_k_string(s, ord_nat(2), j) == sg);
            if (!j.empty()) CHECK(alpha_k_string(ord_nat(2), j).size() > j.size());
        }
    }
}

TEST_CASE("P-properties at every level for three fixtures") {
    for (auto s : {universal_semantics(), diverge_semantics(), fixture_threshold_b()}) {
        for (Ord a : kLevels) require_pass(suite_p_properties(s, a, 5));
        require_pass(suite_level_coincidence(s, 5));
    }
}

TEST_CASE("jump trees") {
    auto div = diverge_semantics();
    StreamHandle z = constant_stream(Nat{1});
    Tree tz = path_tree(z, 12);
    Tree full = full_tree(2, 4);
    CHECK(jump_tree_member(div, tz, {}));
    CHECK(jump_tree_member(div, tz, jump_string(div, z.take(5))));
    CHECK_FALSE(jump_tree_member(div, tz, jump_string(div, S({0, 0, 0}))));
    for (Ord a : kLevels) {
        CHECK(alpha_jump_tree_member(div, a, tz, {}));
        CHECK(alpha_jump_tree_member(div, a, tz, alpha_jump_string(div, a, z.take(6))));
        Tree jt = alpha_jump_tree(div, a, full);
        CHECK(is_prefix_closed(jt, 3));
    }
    // Level 0 agrees with the plain membership test.
    auto b = fixture_threshold_b();
    Tree jt0 = alpha_jump_tree(b, ord_zero(), full);
    for (const auto& sg : full.enumerate(4)) {
        for (std::size_t i = 0; i <= 4; ++i) {
            auto tau = prefix(jump_string(b, sg), i);
            CHECK(jt0.member(tau) == jump_tree_member(b, full, tau));
        }
    }
}

TEST_CASE("local jump trees agree with their recursive description") {
    for (auto s : {diverge_semantics(), fixture_threshold_a()}) {
        auto eng = JumpEngine::make(s);
        Tree full = full_tree(2, 6);
        for (Ord a : {ord_nat(1), ord_nat(2), ord_omega()}) {
            // tau = empty: the tree one level down.
            Tree l0 = eng->local_tree(a, full, {});
            Tree down = eng->tree(fundamental_seq(a, 0), full);
            for (const auto& sg : full.enumerate(5)) {
                auto rho = eng->jump(fundamental_seq(a, 0), sg);
                CHECK(l0.member(rho) == down.member(rho));
            }
            std::vector<FiniteString> taus{{}};
            for (const auto& sg : full.enumerate(6)) {
                auto j = eng->jump(a, sg);
                for (std::size_t i = 0; i <= std::min<std::size_t>(j.size(), 2); ++i) taus.push_back(prefix(j, i));
            }
            std::sort(taus.begin(), taus.end());
            taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
            for (const auto& tau : taus) {
                Tree direct = eng->local_tree(a, full, tau);
                Tree rec = eng->local_tree_recursive(a, full, tau);
                for (const auto& sg : full.enumerate(6)) {
                    auto r = eng->jump_n(a, tau.size() + 1, sg);
                    for (std::size_t i = 0; i <= r.size(); ++i) {
                        auto p = prefix(r, i);
                        CHECK(direct.member(p) == rec.member(p));
                    }
                }
                // tau^<c> is in JT(T) iff <c> is in the local tree at tau.
                if (tau.size() < 3) {
                    for (const auto& sg : full.enumerate(6)) {
                        auto j = eng->jump(a, sg);
                        if (j.size() <= tau.size() || !is_prefix(tau, j)) continue;
                        FiniteString c{j[tau.size()]};
                        CHECK(direct.member(c) == eng->tree_member(a, full, prefix(j, tau.size() + 1)));
                    }
                }
            }
            // Outside the jump tree the local tree is empty.
            CHECK_FALSE(eng->local_tree(a, full, {encode_string(S({9, 9, 9}))}).member({}));
        }
    }
    // For the w-jump, the root local tree is JT(T).
    auto div = diverge_semantics();
    Tree full = full_tree(2, 5);
    Tree l = alpha_jump_tree_local(div, ord_nat(1), full, {});
    for (const auto& sg : full.enumerate(5)) {
        auto j = jump_string(div, sg);
        CHECK(l.member(j) == jump_tree_member(div, full, j));
    }
}

TEST_CASE("streams agree with the brute-force real operators") {
    StreamHandle z = constant_stream(Nat{0});
    auto zr = oracle::constant_real(Nat{0});
    for (const auto& tb : {oracle::diverge(), oracle::threshold_a()}) {
        auto s = threshold_semantics(tb.b, std::nullopt, tb.name);
        const std::vector<std::pair<Ord, int>> levels{
            {ord_zero(), 0}, {ord_nat(1), 1}, {ord_nat(2), 2}, {ord_omega(), oracle::kOmega}};
        for (const auto& [a, lv] : levels) {
            auto ref = oracle::level_real(tb, lv, zr);
            for (std::size_t n = 0; n <= 8; ++n) {
                auto v = alpha_jump_stream(s, a, z, n, 40);
                REQUIRE(v.has_value());
                CHECK(*v == ref->at(n));
            }
        }
        for (std::size_t n = 0; n <= 8; ++n) {
            CHECK(jump_stream(s, z, n, 40) == oracle::jump_real(tb, zr)->at(n));
            CHECK(omega_jump_stream(s, z, n, 40) == oracle::level_real(tb, 1, zr)->at(n));
        }
    }
}

TEST_CASE("stream examples") {
    auto div = diverge_semantics();
    StreamHandle z = constant_stream(Nat{3});
    for (std::size_t n = 0; n < 6; ++n) CHECK(jump_stream(div, z, n, 20) == encode_string(z.take(n + 2)));
    CHECK_FALSE(jump_stream(div, z, 0, 0).has_value());
    auto low = threshold_semantics({{0, 4}, {1, 2}, {2, 3}}, std::nullopt);
    CHECK(jump_stream(low, z, 0, 10) == encode_string(z.take(4)));
    // Not enough fuel to see index 5.
    CHECK_FALSE(jump_stream(div, z, 5, 4).has_value());
}

TEST_CASE("stream convergence, tail law, reconstruction") {
    StreamHandle z = constant_stream(Nat{0});
    for (auto s : {diverge_semantics(), fixture_threshold_a()}) {
        for (Ord a : kLevels) {
            require_pass(suite_stream(s, a, z, 8, 24));
            require_pass(suite_reconstruction(s, a, z, 10, 24));
        }
    }
    for (auto s : {diverge_semantics(), fixture_threshold_a(), fixture_threshold_b()}) require_pass(suite_tail_law(s, z, 8, 48));
}

TEST_CASE("universal machine streams are honest about missing certificates") {
    auto uni = universal_semantics();
    StreamHandle z = constant_stream(Nat{0});
    auto eng = JumpEngine::make(uni);
    // Whatever comes back must match the string jump of the full budget.
    for (std::size_t n = 0; n < 4; ++n) {
        auto v = eng->stream(ord_zero(), z, n, 12);
        if (v) CHECK(jump_string(uni, z.take(12))[n] == *v);
    }
}
