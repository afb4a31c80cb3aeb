#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ordjump/ord_notation.hpp"
#include "ordjump/order_core.hpp"

namespace oj {

// ---- w^X ------------------------------------------------------------------------

// <x_0, ..., x_{k-1}> read as w^{x_0} + ... + w^{x_{k-1}}, nonincreasing in X.
using OmegaExpElement = std::vector<Elem>;

bool omega_exp_sorted(const OmegaExpElement& a, const OrderHandle& x);
// Throws ContractError on unsorted input.
Cmp omega_exp_compare(const OmegaExpElement& a, const OmegaExpElement& b, const OrderHandle& x);

// The n-fold w-exponential of X. Level n+1 elements are codes of strings of
// level n elements; level 0 is X itself (whose elements must be naturals).
OrderHandle iexp_op(std::uint64_t n, const OrderHandle& x);

// ---- terms ----------------------------------------------------------------------

enum class TermKind : std::uint8_t { Zero, Const, Sum, W, Phi };

struct TermNode {
    TermKind kind = TermKind::Zero;
    Elem x{};      // Const
    Elem delta{};  // Phi
    std::vector<const TermNode*> kids;  // Sum: summands; W, Phi: one argument
    std::size_t hash = 0;
    std::size_t size = 1;
};

// Interned: structurally equal terms are the same pointer.
using Term = const TermNode*;

Term t_zero();
Term t_const(const Elem& x);
Term t_sum(std::vector<Term> parts);
Term t_add(Term a, Term b);
Term t_w(Term t);
Term t_phi(const Elem& delta, Term t);
Term t_nat(std::uint64_t n);  // w^0 + ... + w^0, for the eps system

// The eps system over X, or the phi system over (Y, X).
struct TermSystem {
    enum class Kind { Eps, Phi };
    Kind kind = Kind::Eps;
    OrderHandle x;
    OrderHandle y;  // Phi only
};

TermSystem eps_system(const OrderHandle& x);
TermSystem phi_system(const OrderHandle& y, const OrderHandle& x);

Term normalize(const TermSystem& sys, Term t);
// One rewriting pass at the root, for terms whose arguments are already normal.
Term normalize_top(const TermSystem& sys, Term t);
bool is_normal(const TermSystem& sys, Term t);
// Normalizes both sides, then compares; EQ exactly when the normal forms coincide.
Cmp compare(const TermSystem& sys, Term t, Term s);
// Comparison of terms already in normal form.
Cmp compare_normal(const TermSystem& sys, Term t, Term s);

Term eps_normalize(Term t, const OrderHandle& x);
Cmp eps_compare(Term t, Term s, const OrderHandle& x);
Term phi_normalize(Term t, const OrderHandle& x, const OrderHandle& y);
Cmp phi_compare(Term t, Term s, const OrderHandle& x, const OrderHandle& y);

// Grammar: 0 | eps[x] | c[x] | w^(t) | phi(d, t) | t + s | (t)
std::string format_term(const TermSystem& sys, Term t);
Term parse_term(const TermSystem& sys, std::string_view text);

// Summands of a normal form (empty for 0).
std::vector<Term> summands(Term t);
// Every constant occurring anywhere in t.
std::vector<Elem> constants_in(Term t);

// ---- restrictions and maps --------------------------------------------------------

// Normal-form terms of one system, optionally cut below a bound.
struct TermOrder {
    TermSystem sys;
    std::optional<Term> bound;

    bool carrier(Term t) const;
    Cmp cmp(Term a, Term b) const { return compare_normal(sys, a, b); }
};

TermOrder term_order(const TermSystem& sys);
// {s : s < t}; DomainError when t is outside o's carrier.
TermOrder order_restrict(const TermOrder& o, Term t);

// The isomorphism w^{eps_X | t} -> eps_X | w^t: <t_0..t_k> goes to w^{t_0} + ... + w^{t_k}.
// ContractError unless the entries are normal, nonincreasing and below t.
Term iso_omega_eps(const std::vector<Term>& e, Term t, const OrderHandle& x);

// phi(a, X) into phi(a + X, 0): constants c[x] go to phi(x, 0).
Term embed_phi(Term t, Ord a, const OrderHandle& x);
TermSystem embed_target(Ord a, const OrderHandle& x);

// ---- samplers -------------------------------------------------------------------

// Uniform choice by grammar production with a depth cap; the result is normalized.
Term random_term(const TermSystem& sys, std::mt19937_64& rng, int depth);
// Random normal form with at most max_size nodes (resampled until it fits).
Term random_normal_term(const TermSystem& sys, std::mt19937_64& rng, std::size_t max_size);
// Distinct normal forms of raw depth <= depth, capped at budget terms.
std::vector<Term> enumerate_terms(const TermSystem& sys, int depth, std::size_t budget);

}  // namespace oj
