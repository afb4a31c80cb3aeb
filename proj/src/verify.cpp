#include "ordjump/verify.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace oj {

void SuiteResult::check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) counterexample = what;
}

void SuiteResult::absorb(const SuiteResult& other) {
    checks += other.checks;
    if (other.failures && failures == 0) counterexample = other.name + ": " + other.counterexample;
    failures += other.failures;
}

std::vector<FiniteString> all_strings(std::uint64_t arity, std::size_t max_len) {
    std::vector<FiniteString> out{FiniteString{}};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].size() == max_len) continue;
        for (std::uint64_t d = 0; d < arity; ++d) out.push_back(append(out[i], Nat{d}));
    }
    return out;
}

namespace {

std::string show(const FiniteString& s) { return format_string(s); }

std::string level_name(Ord a) { return "w^" + format_ord(a); }

bool proper_prefix(const FiniteString& a, const FiniteString& b) { return a.size() < b.size() && is_prefix(a, b); }

}  // namespace

// ---- jump laws ---------------------------------------------------------------------

SuiteResult suite_p_properties(const DiagonalSemantics& s, Ord a, std::size_t max_len) {
    SuiteResult r{"P-properties " + level_name(a) + " [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    const auto strings = all_strings(2, max_len);
    auto J = [&](const FiniteString& x) { return eng->jump(a, x); };
    auto K = [&](const FiniteString& t) { return alpha_k_string(a, t); };

    std::map<FiniteString, FiniteString> images;  // J(sigma) -> sigma
    for (const auto& sg : strings) {
        FiniteString j = J(sg);
        r.check(j.empty() == (sg.size() <= 1), "P1 sigma=" + show(sg));
        if (sg.size() >= 2) {
            r.check(K(j) == sg, "P2 sigma=" + show(sg));
            auto [it, fresh] = images.emplace(j, sg);
            r.check(fresh, "P4 sigma=" + show(sg) + " sigma'=" + show(it->second));
        }
        if (!sg.empty()) r.check(j.size() < sg.size(), "P5 |J(sigma)| sigma=" + show(sg));
    }
    images.emplace(FiniteString{}, FiniteString{});
    for (const auto& [tau, sg] : images) {
        FiniteString k = K(tau);
        r.check(J(k) == tau, "P3 tau=" + show(tau));
        if (!tau.empty()) r.check(k.size() > tau.size(), "P5 |K(tau)| tau=" + show(tau));
        for (std::size_t i = 0; i < tau.size(); ++i) {
            FiniteString sub = prefix(tau, i);
            r.check(eng->in_image(a, sub), "P6 image tau'=" + show(sub));
            r.check(proper_prefix(K(sub), k), "P6 K(tau') below K(tau) tau=" + show(tau) + " i=" + std::to_string(i));
        }
    }
    if (ord_is_zero(a)) return r;
    for (const auto& x : strings) {
        for (const auto& y : strings) {
            if (!is_prefix(J(y), J(x))) continue;
            std::size_t top = std::max(x.size(), y.size()) + 1;
            // J_0 is the identity, so m = 0 only says something once sigma' has length >= 2.
            for (std::size_t m = y.size() >= 2 ? 0 : 1; m <= top; ++m) {
                r.check(is_prefix(eng->jump_n(a, m, y), eng->jump_n(a, m, x)),
                        "P7 sigma=" + show(x) + " sigma'=" + show(y) + " m=" + std::to_string(m));
            }
        }
    }
    return r;
}

SuiteResult suite_inverse(const DiagonalSemantics& s, Ord a, std::size_t max_len) {
    SuiteResult r{"inverse " + level_name(a) + " [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    for (const auto& sg : all_strings(2, max_len)) {
        if (sg.size() < 2) continue;
        FiniteString j = eng->jump(a, sg);
        r.check(alpha_k_string(a, j) == sg, "K(J(sigma)) sigma=" + show(sg));
        bool checked = false;
        try {
            checked = eng->k_checked(a, j) == sg;
        } catch (const DomainError&) {
        }
        r.check(checked, "checked K sigma=" + show(sg));
    }
    return r;
}

SuiteResult suite_level_coincidence(const DiagonalSemantics& s, std::size_t max_len) {
    SuiteResult r{"level coincidence [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    for (const auto& sg : all_strings(2, max_len)) {
        r.check(eng->jump(ord_zero(), sg) == jump_string(s, sg), "level 0 sigma=" + show(sg));
        FiniteString iter;
        for (FiniteString cur = jump_string(s, sg); !cur.empty(); cur = jump_string(s, cur)) iter.push_back(cur.front());
        r.check(eng->jump(ord_nat(1), sg) == iter, "level 1 sigma=" + show(sg));
    }
    return r;
}

SuiteResult suite_monotone(const DiagonalSemantics& s, std::uint64_t arity, std::size_t max_len, std::uint64_t n_bound) {
    SuiteResult r{"monotonicity [" + s.name + "]"};
    auto bad = check_monotone(s, arity, max_len, n_bound);
    r.check(!bad, bad.value_or(""));
    return r;
}

SuiteResult suite_stream(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t n_max, std::size_t fuel) {
    SuiteResult r{"stream " + level_name(a) + " [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    FiniteString got;
    for (std::size_t n = 0; n <= n_max; ++n) {
        auto v = eng->stream(a, z, n, fuel);
        r.check(v.has_value(), "no value at n=" + std::to_string(n));
        if (!v) return r;
        auto more = eng->stream(a, z, n, fuel + fuel / 2);
        r.check(more == v, "value moved with more fuel at n=" + std::to_string(n));
        got.push_back(*v);
        bool seen = false;
        for (std::size_t m = 0; m <= fuel && !seen; ++m) seen = is_prefix(got, eng->jump(a, z.take(m)));
        r.check(seen, "no prefix jump reaches the stream at n=" + std::to_string(n));
    }
    return r;
}

SuiteResult suite_tail_law(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n_max, std::size_t fuel) {
    SuiteResult r{"tail law [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    StreamHandle jz = eng->real(ord_zero(), z, fuel);
    for (std::size_t n = 0; n <= n_max; ++n) {
        std::optional<Nat> lhs;
        try {
            lhs = eng->stream(ord_nat(1), jz, n, fuel);
        } catch (const ContractError&) {
        }
        auto rhs = eng->stream(ord_nat(1), z, n + 1, fuel);
        r.check(lhs && rhs && *lhs == *rhs, "n=" + std::to_string(n));
    }
    return r;
}

SuiteResult suite_reconstruction(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t m,
                                 std::size_t fuel) {
    SuiteResult r{"reconstruction " + level_name(a) + " [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    StreamHandle y = eng->real(a, z, fuel);
    FiniteString prev;
    FiniteString yk;
    try {
        for (std::size_t k = 1; prev.size() < m && k <= m; ++k) {
            yk.push_back(y.at(k - 1));
            FiniteString cur = eng->k_checked(a, yk);
            r.check(cur == z.take(cur.size()), "K(Y|" + std::to_string(k) + ") is not a prefix of z");
            r.check(cur.size() > k, "K(Y|" + std::to_string(k) + ") too short");
            r.check(proper_prefix(prev, cur), "K(Y|" + std::to_string(k) + ") does not extend the previous one");
            prev = cur;
        }
    } catch (const std::exception& e) {
        r.check(false, e.what());
    }
    r.check(prev.size() >= m, "reconstruction stopped at length " + std::to_string(prev.size()));
    return r;
}

// ---- term orders -------------------------------------------------------------------

SuiteResult suite_order_axioms(const TermSystem& sys, std::uint64_t seed, std::size_t pairs, std::size_t max_size) {
    std::string kind = sys.kind == TermSystem::Kind::Eps ? "eps" : "phi";
    SuiteResult r{"order axioms " + kind + " over " + sys.x.name};
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
        std::array<Term, 3> t{random_normal_term(sys, rng, max_size), random_normal_term(sys, rng, max_size),
                              random_normal_term(sys, rng, max_size)};
        auto c = [&](int p, int q) { return compare_normal(sys, t[p], t[q]); };
        auto tag = [&] { return format_term(sys, t[0]) + " | " + format_term(sys, t[1]) + " | " + format_term(sys, t[2]); };
        r.check(c(0, 1) == flip(c(1, 0)), "antisymmetry " + tag());
        r.check((c(0, 1) == Cmp::EQ) == (t[0] == t[1]), "EQ only for equal normal forms " + tag());
        std::array<int, 3> p{0, 1, 2};
        do {
            if (c(p[0], p[1]) != Cmp::GT && c(p[1], p[2]) != Cmp::GT) {
                r.check(c(p[0], p[2]) != Cmp::GT, "transitivity " + tag());
            }
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return r;
}

namespace {

Term eps_to_phi(Term t, const Elem& zero) {
    switch (t->kind) {
        case TermKind::W: return t_phi(zero, eps_to_phi(t->kids[0], zero));
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (Term k : t->kids) parts.push_back(eps_to_phi(k, zero));
            return t_sum(std::move(parts));
        }
        default: return t;
    }
}

}  // namespace

SuiteResult suite_phi_eps_coincidence(const OrderHandle& x, int depth) {
    SuiteResult r{"phi/eps coincidence over " + x.name};
    TermSystem eps = eps_system(x);
    TermSystem phi = phi_system(fin_order(1), x);
    const Elem zero = Elem::of(Nat{0});
    auto all = enumerate_terms(eps, depth, 1u << 14);
    std::vector<Term> img;
    for (Term t : all) {
        Term u = eps_to_phi(t, zero);
        r.check(is_normal(phi, u), "image not normal: " + format_term(eps, t));
        img.push_back(normalize(phi, u));
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
            r.check(compare_normal(eps, all[i], all[j]) == compare_normal(phi, img[i], img[j]),
                    format_term(eps, all[i]) + " vs " + format_term(eps, all[j]));
        }
    }
    return r;
}

SuiteResult suite_iso_omega_eps(const OrderHandle& x, int depth) {
    SuiteResult r{"iso w^eps over " + x.name};
    TermSystem sys = eps_system(x);
    auto all = enumerate_terms(sys, depth, 1u << 12);
    auto below = [&](Term b) {
        std::vector<Term> v;
        for (Term u : all) {
            if (compare_normal(sys, u, b) == Cmp::LT) v.push_back(u);
        }
        std::sort(v.begin(), v.end(), [&](Term p, Term q) { return compare_normal(sys, p, q) == Cmp::GT; });
        return v;
    };
    for (Term t : all) {
        auto ent = below(t);
        // Nonincreasing sequences of length <= 2.
        std::vector<std::vector<Term>> seqs{{}};
        for (std::size_t i = 0; i < ent.size(); ++i) {
            seqs.push_back({ent[i]});
            for (std::size_t j = i; j < ent.size(); ++j) seqs.push_back({ent[i], ent[j]});
        }
        Term top = normalize(sys, t_w(t));
        std::vector<Term> img;
        for (const auto& s : seqs) {
            Term u = iso_omega_eps(s, t, x);
            r.check(compare_normal(sys, u, top) == Cmp::LT, "image not below w^t: " + format_term(sys, u));
            img.push_back(u);
        }
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            for (std::size_t j = 0; j < seqs.size(); ++j) {
                Cmp lex = Cmp::EQ;
                const auto& p = seqs[i];
                const auto& q = seqs[j];
                for (std::size_t k = 0; k < std::min(p.size(), q.size()) && lex == Cmp::EQ; ++k) {
                    lex = compare_normal(sys, p[k], q[k]);
                }
                if (lex == Cmp::EQ && p.size() != q.size()) lex = p.size() < q.size() ? Cmp::LT : Cmp::GT;
                r.check(lex == compare_normal(sys, img[i], img[j]), "order not preserved below " + format_term(sys, t));
            }
        }
        // Onto: each sampled term below w^t with at most two summands comes from its exponents.
        for (Term s : all) {
            auto parts = summands(s);
            if (compare_normal(sys, s, top) != Cmp::LT || parts.size() > 2) continue;
            std::vector<Term> exps;
            for (Term p : parts) exps.push_back(p->kind == TermKind::W ? p->kids[0] : p);
            bool ok = false;
            try {
                ok = iso_omega_eps(exps, t, x) == s;
            } catch (const ContractError&) {
            }
            r.check(ok, "not onto at " + format_term(sys, s) + " below " + format_term(sys, top));
        }
    }
    return r;
}

SuiteResult suite_embedding(Ord a, const OrderHandle& x, std::uint64_t seed, std::size_t pairs) {
    SuiteResult r{"embedding a=" + format_ord(a) + " X=" + x.name};
    TermSystem src = phi_system(ordinals_below(a), x);
    TermSystem dst = embed_target(a, x);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
        Term s = random_normal_term(src, rng, 12);
        Term t = random_normal_term(src, rng, 12);
        r.check(compare_normal(src, s, t) == compare_normal(dst, embed_phi(s, a, x), embed_phi(t, a, x)),
                format_term(src, s) + " vs " + format_term(src, t));
    }
    return r;
}

// ---- descent -----------------------------------------------------------------------

SuiteResult suite_descent(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t count) {
    SuiteResult r{"descent a=" + format_ord(a) + " count=" + std::to_string(count) + " [" + s.name + "]"};
    Witness w = descending_witness(a, s, z, count);
    for (std::size_t n = 0; n + 1 < w.terms.size(); ++n) {
        bool ok = compare_normal(w.sys, w.terms[n + 1], w.terms[n]) == Cmp::LT;
        // Witness terms can be enormous; only small ones are worth printing.
        std::string what = "not decreasing at n=" + std::to_string(n);
        if (!ok && w.terms[n + 1]->size < 200) what += ": " + format_term(w.sys, w.terms[n + 1]);
        r.check(ok, what);
    }
    return r;
}

SuiteResult suite_extraction(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n_max) {
    SuiteResult r{"extraction [" + s.name + "]"};
    auto eng = JumpEngine::make(s);
    const std::size_t horizon = 4 * (n_max + 2);
    Tree tz = path_tree(z, horizon + 1);
    MonotoneMap g = identity_map(eng->tree(ord_zero(), tz), horizon + 1);
    ExpSeq seq = [eng, g, tz, z](std::size_t k) { return h_g(*eng, g, tz, z.take(k)); };
    std::vector<Elem> out;
    try {
        out = extract_descending(seq, g.codomain, horizon_oracle(seq, g.codomain, horizon), n_max + 2);
    } catch (const std::exception& e) {
        r.check(false, e.what());
        return r;
    }
    FiniteString prev;
    for (std::size_t i = 0; i < out.size(); ++i) {
        FiniteString cur = decode_string(out[i].nat);
        if (i) {
            r.check(kb_compare(cur, prev) == Cmp::LT, "not KB-descending at " + std::to_string(i));
            r.check(proper_prefix(prev, cur), "not extending at " + std::to_string(i));
        }
        prev = cur;
    }
    r.check(prev.size() > n_max, "union too short: " + show(prev));
    for (std::size_t n = 0; n <= n_max && n < prev.size(); ++n) {
        r.check(eng->stream(ord_zero(), z, n, horizon) == prev[n], "mismatch with the jump stream at n=" + std::to_string(n));
    }
    return r;
}

// ---- driver ------------------------------------------------------------------------

DiagonalSemantics fixture_threshold_a() { return threshold_semantics({{0, 2}, {2, 3}, {4, 5}}, std::nullopt, "threshold-a"); }
DiagonalSemantics fixture_threshold_b() { return threshold_semantics({{0, 3}, {1, 5}}, std::nullopt, "threshold-b"); }
DiagonalSemantics fixture_threshold_c() { return threshold_semantics({{1, 4}, {3, 7}}, std::nullopt, "threshold-c"); }

std::vector<std::string> suite_names() {
    return {"p-properties", "inverse", "order-axioms", "monotonicity", "streams", "tail",
            "reconstruction", "descent", "extraction", "embedding"};
}

std::vector<SuiteResult> run_suites(const VerifyConfig& cfg) {
    const bool all = cfg.suite == "all";
    const auto names = suite_names();
    if (!all && std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
        throw std::invalid_argument("unknown suite: " + cfg.suite);
    }
    auto want = [&](const char* n) { return all || cfg.suite == n; };
    const bool custom = !cfg.semantics.empty();
    // Laws that hold for any monotone semantics, and cheap fixtures for stream-heavy suites.
    std::vector<DiagonalSemantics> laws = custom ? cfg.semantics
                                                 : std::vector{universal_semantics(), diverge_semantics(), fixture_threshold_b()};
    std::vector<DiagonalSemantics> cheap = custom ? cfg.semantics : std::vector{diverge_semantics(), fixture_threshold_a()};
    std::vector<DiagonalSemantics> lossy = custom ? cfg.semantics : std::vector{fixture_threshold_b(), fixture_threshold_c()};
    const std::vector<Ord> levels{ord_zero(), ord_nat(1), ord_nat(2), ord_omega()};
    const StreamHandle z = constant_stream(Nat{0});

    std::vector<SuiteResult> out;
    if (want("monotonicity")) {
        std::vector<DiagonalSemantics> sweep = laws;
        if (!custom) sweep.push_back(fixture_threshold_a()), sweep.push_back(fixture_threshold_c());
        for (const auto& s : sweep) out.push_back(suite_monotone(s, 2, 6, 64));
    }
    if (want("p-properties")) {
        for (const auto& s : laws) {
            for (Ord a : levels) out.push_back(suite_p_properties(s, a, cfg.len));
            out.push_back(suite_level_coincidence(s, cfg.len));
        }
    }
    if (want("inverse")) {
        for (const auto& s : laws) {
            for (Ord a : levels) out.push_back(suite_inverse(s, a, cfg.len));
        }
    }
    if (want("streams")) {
        for (const auto& s : cheap) {
            for (Ord a : levels) out.push_back(suite_stream(s, a, z, 8, 24));
        }
    }
    if (want("tail")) {
        auto tail = cheap;
        if (!custom) tail.push_back(fixture_threshold_b());
        for (const auto& s : tail) out.push_back(suite_tail_law(s, z, 8, 48));
    }
    if (want("reconstruction")) {
        for (const auto& s : cheap) {
            for (Ord a : levels) out.push_back(suite_reconstruction(s, a, z, 10, 24));
        }
    }
    if (want("order-axioms")) {
        for (const auto& x : {empty_order(), fin_order(2), nat_order()}) {
            out.push_back(suite_order_axioms(eps_system(x), 1, 10000, 12));
            out.push_back(suite_order_axioms(phi_system(fin_order(2), x), 2, 10000, 12));
        }
        out.push_back(suite_phi_eps_coincidence(fin_order(2), 3));
        out.push_back(suite_iso_omega_eps(fin_order(2), 2));
    }
    if (want("embedding")) {
        for (Ord a : {ord_nat(1), ord_nat(2), ord_omega()}) {
            for (const auto& x : {fin_order(2), fin_order(3)}) out.push_back(suite_embedding(a, x, 7, 1000));
        }
    }
    if (want("descent")) {
        for (const auto& s : lossy) {
            for (Ord a : levels) out.push_back(suite_descent(s, a, z, 25));
        }
    }
    if (want("extraction")) {
        for (const auto& s : cheap) out.push_back(suite_extraction(s, z, 10));
    }
    return out;
}

}  // namespace oj
