#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "ordjump/ordinal_terms.hpp"
#include "ordjump/verify.hpp"

using namespace oj;

namespace {

Elem E(std::uint64_t n) { return Elem::of(Nat{n}); }
Term C(std::uint64_t n) { return t_const(E(n)); }

void require_pass(const SuiteResult& r) {
    INFO(r.name << ": " << r.counterexample);
    CHECK(r.checks > 0);
    CHECK(r.pass());
}

// Unnormalized terms straight from the grammar.
Term raw(const TermSystem& sys, std::mt19937_64& rng, int depth) {
    auto xs = sys.x.listing();
    std::vector<Elem> ys = sys.kind == TermSystem::Kind::Phi ? sys.y.listing() : std::vector<Elem>{};
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 1);
    switch (pick(rng)) {
        case 0: return t_zero();
        case 1:
            if (xs.empty()) return t_zero();
            return t_const(xs[rng() % xs.size()]);
        case 2: return t_sum({raw(sys, rng, depth - 1), raw(sys, rng, depth - 1), raw(sys, rng, depth - 1)});
        default:
            if (sys.kind == TermSystem::Kind::Eps) return t_w(raw(sys, rng, depth - 1));
            return t_phi(ys[rng() % ys.size()], raw(sys, rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("omega_exp_compare") {
    auto x = fin_order(3);
    CHECK(omega_exp_compare({}, {E(0)}, x) == Cmp::LT);
    CHECK(omega_exp_compare({E(1), E(0)}, {E(1), E(1)}, x) == Cmp::LT);
    CHECK(omega_exp_compare({E(2)}, {E(2)}, x) == Cmp::EQ);
    CHECK(omega_exp_compare({E(2), E(0)}, {E(2)}, x) == Cmp::GT);
    CHECK_THROWS_AS(omega_exp_compare({E(0), E(1)}, {E(2)}, x), ContractError);
}

TEST_CASE("iexp_op") {
    auto x = fin_order(3);
    auto i0 = iexp_op(0, x);
    CHECK(i0.cmp(E(0), E(2)) == x.cmp(E(0), E(2)));
    auto i1 = iexp_op(1, x);
    auto el = [](std::vector<std::uint64_t> v) {
        FiniteString s;
        for (auto n : v) s.push_back(Nat{n});
        return Elem::of(encode_string(s));
    };
    CHECK(i1.cmp(el({1, 0}), el({1, 1})) == omega_exp_compare({E(1), E(0)}, {E(1), E(1)}, x));
    CHECK(i1.cmp(el({2}), el({1, 1, 1})) == Cmp::GT);
    CHECK_FALSE(i1.carrier(el({0, 1})));
    for (std::uint64_t n = 1; n < 4; ++n) {
        auto in = iexp_op(n, x);
        Elem bottom = el({});
        for (const auto& e : in.listing()) CHECK(in.cmp(bottom, e) != Cmp::GT);
    }
}

TEST_CASE("eps normalization examples") {
    auto x = fin_order(2);
    auto sys = eps_system(x);
    CHECK(eps_normalize(t_w(C(1)), x) == C(1));
    Term t = normalize(sys, t_add(t_w(C(0)), t_w(t_zero())));
    CHECK(eps_normalize(t_sum({t, t_zero()}), x) == t);
    CHECK(eps_normalize(t_sum({t_w(t_zero()), t_w(C(1))}), x) == C(1));
    CHECK(format_term(sys, eps_normalize(parse_term(sys, "w^(eps[1])"), x)) == "eps[1]");
    CHECK(format_term(sys, eps_normalize(parse_term(sys, "0 + 0"), x)) == "0");
}

TEST_CASE("eps comparison examples") {
    auto x = fin_order(2);
    auto sys = eps_system(x);
    for (Term s : enumerate_terms(sys, 2, 200)) {
        if (s != t_zero()) CHECK(eps_compare(t_zero(), s, x) == Cmp::LT);
    }
    CHECK(eps_compare(C(0), C(1), x) == Cmp::LT);
    CHECK(eps_compare(t_w(t_add(C(0), t_w(t_zero()))), C(0), x) == Cmp::GT);
}

TEST_CASE("phi normalization and comparison examples") {
    auto x = fin_order(2);
    auto y = fin_order(2);
    auto sys = phi_system(y, x);
    Term t = t_phi(E(0), t_phi(E(0), t_zero()));
    CHECK(phi_normalize(t_phi(E(1), C(0)), x, y) == C(0));
    CHECK(phi_normalize(t_phi(E(0), t_phi(E(1), t)), x, y) == t_phi(E(1), t));
    CHECK(phi_normalize(t_add(t_zero(), t), x, y) == t);
    for (Term s : enumerate_terms(sys, 2, 200)) {
        if (s != t_zero()) CHECK(phi_compare(t_zero(), s, x, y) == Cmp::LT);
    }
    for (Term a : enumerate_terms(sys, 2, 60)) {
        for (Term b : enumerate_terms(sys, 2, 60)) {
            CHECK(phi_compare(t_phi(E(1), a), t_phi(E(1), b), x, y) ==
                  compare(sys, t_phi(E(1), a), t_phi(E(1), b)));
            if (normalize(sys, t_phi(E(0), a))->kind == TermKind::Phi &&
                normalize(sys, t_phi(E(0), b))->kind == TermKind::Phi &&
                normalize(sys, t_phi(E(0), a))->delta == E(0) && normalize(sys, t_phi(E(0), b))->delta == E(0)) {
                CHECK(phi_compare(t_phi(E(0), a), t_phi(E(0), b), x, y) == phi_compare(a, b, x, y));
            }
        }
    }
    Term w0 = t_phi(E(0), t_zero());
    CHECK(phi_compare(t_add(w0, w0), t_phi(E(1), t_zero()), x, y) == Cmp::LT);
}

TEST_CASE("normalization is idempotent and comparison respects it") {
    std::mt19937_64 rng(11);
    for (const auto& x : {empty_order(), fin_order(2), nat_order()}) {
        for (const auto& sys : {eps_system(x), phi_system(fin_order(2), x)}) {
            for (int i = 0; i < 10000; ++i) {
                Term t = raw(sys, rng, 3);
                Term n = normalize(sys, t);
                CHECK(normalize(sys, n) == n);
                CHECK(is_normal(sys, n));
                Term s = raw(sys, rng, 3);
                CHECK(compare(sys, t, s) == compare_normal(sys, n, normalize(sys, s)));
            }
        }
    }
}

TEST_CASE("comparison matches the clause list read literally") {
    std::mt19937_64 rng(5);
    for (const auto& x : {empty_order(), fin_order(2), nat_order()}) {
        auto eps = eps_system(x);
        auto y = fin_order(3);
        auto phi = phi_system(y, x);
        for (int i = 0; i < 10000; ++i) {
            Term t = random_normal_term(eps, rng, 12);
            Term s = random_normal_term(eps, rng, 12);
            INFO(format_term(eps, t) << " vs " << format_term(eps, s));
            CHECK(oracle::eps_le(t, s, x) == (compare_normal(eps, t, s) != Cmp::GT));
            Term p = random_normal_term(phi, rng, 12);
            Term q = random_normal_term(phi, rng, 12);
            INFO(format_term(phi, p) << " vs " << format_term(phi, q));
            CHECK(oracle::phi_le(p, q, x, y) == (compare_normal(phi, p, q) != Cmp::GT));
        }
    }
}

TEST_CASE("order axioms, system coincidence, isomorphism") {
    for (const auto& x : {empty_order(), fin_order(2), nat_order()}) {
        require_pass(suite_order_axioms(eps_system(x), 1, 10000, 12));
        require_pass(suite_order_axioms(phi_system(fin_order(2), x), 2, 10000, 12));
    }
    require_pass(suite_phi_eps_coincidence(fin_order(2), 3));
    require_pass(suite_iso_omega_eps(fin_order(2), 2));
}

TEST_CASE("iso_omega_eps examples") {
    auto x = fin_order(2);
    auto sys = eps_system(x);
    Term t = normalize(sys, t_w(t_w(t_zero())));
    CHECK(iso_omega_eps({}, t, x) == t_zero());
    Term s = normalize(sys, t_w(t_zero()));
    CHECK(iso_omega_eps({s}, t, x) == normalize(sys, t_w(s)));
    CHECK_THROWS_AS(iso_omega_eps({t}, t, x), ContractError);
    CHECK_THROWS_AS(iso_omega_eps({t_zero(), s}, t, x), ContractError);
}

TEST_CASE("embed_phi") {
    auto x = fin_order(2);
    for (Ord a : {ord_nat(1), ord_nat(2), ord_omega()}) {
        auto dst = embed_target(a, x);
        CHECK(embed_phi(t_zero(), a, x) == t_zero());
        CHECK(embed_phi(C(1), a, x) == t_phi(E(1), t_zero()));
        Term d = t_phi(Elem::of(ord_zero()), t_zero());
        Term sum = t_add(d, C(0));
        CHECK(embed_phi(sum, a, x) == normalize(dst, t_add(embed_phi(d, a, x), embed_phi(C(0), a, x))));
        for (const auto& xx : {fin_order(2), fin_order(3)}) require_pass(suite_embedding(a, xx, 3, 1000));
    }
}

TEST_CASE("order_restrict") {
    auto x = fin_order(2);
    auto sys = eps_system(x);
    auto o = term_order(sys);
    auto below_c0 = order_restrict(o, C(0));
    CHECK_FALSE(below_c0.carrier(C(0)));
    CHECK(below_c0.carrier(normalize(sys, t_w(t_zero()))));
    auto below_zero = order_restrict(o, t_zero());
    for (Term t : enumerate_terms(sys, 2, 100)) CHECK_FALSE(below_zero.carrier(t));
    CHECK_THROWS_AS(order_restrict(o, t_w(C(0))), DomainError);
    CHECK_THROWS_AS(order_restrict(o, C(5)), DomainError);
    // Below w^t the carrier is the image of the isomorphism.
    Term t = normalize(sys, t_w(t_zero()));
    Term wt = normalize(sys, t_w(t));
    auto cut = order_restrict(o, wt);
    for (Term s : enumerate_terms(sys, 2, 400)) {
        if (!cut.carrier(s)) continue;
        std::vector<Term> exps;
        for (Term p : summands(s)) exps.push_back(p->kind == TermKind::W ? p->kids[0] : p);
        CHECK(iso_omega_eps(exps, t, x) == s);
    }
}

TEST_CASE("term grammar round trips") {
    std::mt19937_64 rng(3);
    auto x = fin_order(3);
    for (const auto& sys : {eps_system(x), phi_system(ordinals_below(ord_omega()), x), phi_system(fin_order(2), x)}) {
        for (int i = 0; i < 500; ++i) {
            Term t = random_normal_term(sys, rng, 12);
            CHECK(parse_term(sys, format_term(sys, t)) == t);
        }
    }
    auto eps = eps_system(x);
    CHECK_THROWS(parse_term(eps, "w^(0"));
    CHECK_THROWS(parse_term(eps, "phi(0, 0)"));
    CHECK_THROWS(parse_term(eps, "c[0]"));
    CHECK_THROWS(parse_term(phi_system(fin_order(2), x), "eps[0]"));
    CHECK_THROWS_AS(parse_term(eps, "eps[7]"), DomainError);
}
