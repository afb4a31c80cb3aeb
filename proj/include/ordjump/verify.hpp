#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ordjump/descent.hpp"

namespace oj {

struct SuiteResult {
    SuiteResult() = default;
    explicit SuiteResult(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string counterexample;  // the first failure, if any

    [[nodiscard]] bool pass() const { return failures == 0; }
    void check(bool ok, const std::string& what);
    void absorb(const SuiteResult& other);
};

// Every string over {0..arity-1} of length <= max_len, shortest first.
std::vector<FiniteString> all_strings(std::uint64_t arity, std::size_t max_len);

// P1-P6 at level 0, P1-P7 at a > 0, over binary strings of length <= max_len.
SuiteResult suite_p_properties(const DiagonalSemantics& s, Ord a, std::size_t max_len);
// K o J is the identity on strings of length >= 2.
SuiteResult suite_inverse(const DiagonalSemantics& s, Ord a, std::size_t max_len);
// Level 0 matches the plain jump; level 1 matches the iterated plain jump read at position 0.
SuiteResult suite_level_coincidence(const DiagonalSemantics& s, std::size_t max_len);
SuiteResult suite_monotone(const DiagonalSemantics& s, std::uint64_t arity, std::size_t max_len, std::uint64_t n_bound);
// Returned stream values exist, do not move when fuel grows, and agree with the string jump of a long prefix.
SuiteResult suite_stream(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t n_max, std::size_t fuel);
// The w-jump stream of J(z) is the w-jump stream of z minus its first entry.
SuiteResult suite_tail_law(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n_max, std::size_t fuel);
// Reassembles z|m from K^{w^a} applied to prefixes of the level-a stream.
SuiteResult suite_reconstruction(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t m,
                                 std::size_t fuel);

SuiteResult suite_order_axioms(const TermSystem& sys, std::uint64_t seed, std::size_t pairs, std::size_t max_size);
SuiteResult suite_phi_eps_coincidence(const OrderHandle& x, int depth);
SuiteResult suite_iso_omega_eps(const OrderHandle& x, int depth);
SuiteResult suite_embedding(Ord a, const OrderHandle& x, std::uint64_t seed, std::size_t pairs);

SuiteResult suite_descent(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t count);
// Extraction from the level-0 witness against the plain jump stream of z.
SuiteResult suite_extraction(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n_max);

struct VerifyConfig {
    std::string suite = "all";  // all | p-properties | inverse | order-axioms | monotonicity | streams | tail
                                // | reconstruction | descent | extraction | embedding
    std::size_t len = 5;
    std::vector<DiagonalSemantics> semantics;  // empty: the built-in fixtures
};

std::vector<std::string> suite_names();
std::vector<SuiteResult> run_suites(const VerifyConfig& cfg);

// Fixtures shipped with the library: diverge plus two lossy threshold tables.
DiagonalSemantics fixture_threshold_a();
DiagonalSemantics fixture_threshold_b();
DiagonalSemantics fixture_threshold_c();

}  // namespace oj
