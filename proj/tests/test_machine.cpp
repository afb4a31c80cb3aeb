#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ordjump/machine.hpp"
#include "ordjump/verify.hpp"

using namespace oj;

namespace {

FiniteString zeros(std::size_t n) { return FiniteString(n, Nat{0}); }

std::string fixture(const std::string& name) { return std::string(ORDJUMP_FIXTURES) + "/" + name; }

std::uint64_t index_of(const Program& p) {
    auto e = program_index(p);
    REQUIRE(e.has_value());
    return *e;
}

}  // namespace

TEST_CASE("decode_program basics") {
    CHECK(decode_program(0).empty());
    CHECK(run(0, 0, zeros(5), 5).status == RunOutcome::Status::StillRunning);

    Program halt{{Op::Halt, 0, 0, 0}};
    std::uint64_t e = index_of(halt);
    CHECK(decode_program(e) == halt);
    auto padded = pad_index(e);
    REQUIRE(padded.has_value());
    CHECK(*padded != e);
    for (std::size_t len = 0; len < 5; ++len) {
        CHECK(run(*padded, 3, zeros(len), len) == run(e, 3, zeros(len), len));
    }
}

TEST_CASE("every crafted program has an index") {
    std::vector<Program> crafted{
        {},
        {{Op::Halt, 0, 0, 0}},
        {{Op::LoadI, 2, 0, 3}, {Op::Query, 3, 2, 0}, {Op::Halt, 3, 0, 0}},
        {{Op::Jz, 0, 0, 0}},
        {{Op::Mov, 4, 1, 0}, {Op::Add, 4, 1, 0}, {Op::Monus, 4, 1, 0}, {Op::Halt, 4, 0, 0}},
    };
    for (const auto& p : crafted) CHECK(decode_program(index_of(p)) == p);
    // Decoding then re-indexing is stable for small indices.
    for (std::uint64_t e = 0; e < 3000; ++e) {
        auto back = program_index(decode_program(e));
        REQUIRE(back.has_value());
        CHECK(decode_program(*back) == decode_program(e));
    }
}

TEST_CASE("run examples") {
    std::uint64_t e = index_of({{Op::Halt, 0, 0, 0}});
    auto r = run(e, 1, zeros(2), 2);
    CHECK(r.status == RunOutcome::Status::Halted);
    CHECK(r.steps == 1);
    CHECK(r.value == 0);
    // No budget at all with the empty oracle.
    for (std::uint64_t i = 1; i < 200; ++i) CHECK(run(i, i, {}, 10).status != RunOutcome::Status::Halted);
    // Reading past the oracle.
    std::uint64_t q = index_of({{Op::LoadI, 2, 0, 3}, {Op::Query, 3, 2, 0}, {Op::Halt, 3, 0, 0}});
    CHECK(run(q, 0, zeros(3), 3).status == RunOutcome::Status::OracleExhausted);
    FiniteString sigma{Nat{0}, Nat{0}, Nat{0}, Nat{9}};
    auto hit = run(q, 0, sigma, 4);
    CHECK(hit.status == RunOutcome::Status::Halted);
    CHECK(hit.value == 9);
}

TEST_CASE("halting runs survive oracle extension") {
    for (std::uint64_t e = 0; e < 400; ++e) {
        for (const auto& s : all_strings(2, 4)) {
            auto r = run(e, e, s, s.size());
            if (r.status != RunOutcome::Status::Halted) continue;
            for (std::uint64_t d = 0; d < 2; ++d) {
                FiniteString t = append(s, Nat{d});
                CHECK(run(e, e, t, t.size()) == r);
            }
        }
    }
}

TEST_CASE("diag_converges") {
    auto div = diverge_semantics();
    for (const auto& s : all_strings(2, 4)) {
        for (std::uint64_t n = 0; n < 8; ++n) CHECK_FALSE(diag_converges(div, n, s));
    }
    auto tb = threshold_semantics({{0, 3}, {1, 5}}, std::nullopt);
    CHECK_FALSE(diag_converges(tb, 0, zeros(2)));
    CHECK(diag_converges(tb, 0, zeros(3)));
    CHECK_FALSE(diag_converges(tb, 2, zeros(50)));
    auto uni = universal_semantics();
    std::uint64_t e = index_of({{Op::Halt, 0, 0, 0}});
    CHECK(diag_converges(uni, e, zeros(3)));
    CHECK_FALSE(diag_converges(uni, e, zeros(1)));
}

TEST_CASE("mu_stage examples and laws") {
    auto div = diverge_semantics();
    CHECK(mu_stage(div, 0, zeros(5), 1) == 2);
    auto b3 = threshold_semantics({{0, 3}}, std::nullopt);
    CHECK(mu_stage(b3, 0, zeros(4), 1) == 3);
    auto b2 = threshold_semantics({{0, 2}}, std::nullopt);
    CHECK(mu_stage(b2, 0, zeros(8), 5) == 6);

    std::vector<DiagonalSemantics> all{universal_semantics(), div, fixture_threshold_a(), fixture_threshold_b(),
                                       fixture_threshold_c()};
    for (const auto& s : all) {
        for (const auto& sg : all_strings(2, 5)) {
            for (std::uint64_t n = 0; n < 6; ++n) {
                for (std::size_t tp = 1; tp < 5; ++tp) {
                    std::size_t t = mu_stage(s, n, sg, tp);
                    CHECK(t > tp);
                    // Only stages found by a convergence are fixed; the fallback may move.
                    if (!diag_converges(s, n, sg)) continue;
                    CHECK(t <= std::max(tp + 1, sg.size()));
                    for (std::uint64_t d = 0; d < 2; ++d) CHECK(mu_stage(s, n, append(sg, Nat{d}), tp) == t);
                }
            }
        }
    }
    // A fallback stage inside sigma is not stable under extension.
    CHECK(mu_stage(b3, 0, zeros(2), 1) == 2);
    CHECK(mu_stage(b3, 0, zeros(3), 1) == 3);
}

TEST_CASE("monotonicity sweep over the universal machine and every fixture") {
    CHECK_FALSE(check_monotone(universal_semantics(), 2, 6, 64).has_value());
    for (const char* f : {"diverge.json", "threshold-a.json", "threshold-b.json", "threshold-c.json"}) {
        auto s = semantics_from_selector("table:" + fixture(f));
        CHECK_FALSE(check_monotone(s, 2, 6, 64).has_value());
    }
    auto broken = semantics_from_selector("table:" + fixture("broken.json"));
    auto bad = check_monotone(broken, 2, 6, 64);
    REQUIRE(bad.has_value());
    CHECK(bad->find("monotonicity") != std::string::npos);
}

TEST_CASE("fixture files match the built-in tables") {
    auto file = semantics_from_selector("table:" + fixture("threshold-b.json"));
    auto lib = fixture_threshold_b();
    for (std::size_t len = 0; len < 12; ++len) {
        for (std::uint64_t n = 0; n < 6; ++n) CHECK(file.conv(n, zeros(len)) == lib.conv(n, zeros(len)));
    }
    CHECK_THROWS(semantics_from_json(R"({"kind":"nope"})"));
    CHECK_THROWS(semantics_from_selector("bogus"));
}
