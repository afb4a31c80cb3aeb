#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ordjump/jump.hpp"
#include "ordjump/ordinal_terms.hpp"

namespace oj {

// A map from tree nodes into a linear order; (⊃, <)-monotone when used as g.
struct MonotoneMap {
    Tree domain;
    OrderHandle codomain;
    std::function<Elem(const FiniteString&)> eval;
};

// g(tau) = code(tau), into the KB order on t.
MonotoneMap identity_map(const Tree& t, std::size_t depth);

// h(sigma) over (JT(T), KB): entries are codes of J(sigma)|i, written KB-decreasingly.
OmegaExpElement h_base(JumpEngine& eng, const Tree& t, const FiniteString& sigma);
// The same sum with exponents g(J(sigma)|i), written decreasingly in g's codomain.
OmegaExpElement h_g(JumpEngine& eng, const MonotoneMap& g, const Tree& t, const FiniteString& sigma);
// A w^X element as a term of phi(0, X), where c[x] plays the part of w^x.
Term omega_exp_as_term(const OmegaExpElement& e);

// Evaluates h^a_g (phi system over (ordinals below a, codomain of g)) or,
// in eps mode, h^w_g (eps system over the codomain of g). Values of the
// intermediate functions f_tau are memoized for the lifetime of the object.
class HEvaluator {
public:
    enum class Mode { Phi, Eps };

    HEvaluator(std::shared_ptr<JumpEngine> eng, Ord top, Mode mode, MonotoneMap g, Tree t);
    ~HEvaluator();
    HEvaluator(const HEvaluator&) = delete;
    HEvaluator& operator=(const HEvaluator&) = delete;

    Term eval(const FiniteString& sigma);
    const TermSystem& system() const { return sys_; }

private:
    struct Fn;
    Term h(Ord beta, Fn& e, const FiniteString& sigma);
    Term lift(Ord beta, Term q) const;

    std::shared_ptr<JumpEngine> eng_;
    Ord top_;
    Mode mode_;
    MonotoneMap g_;
    Tree t_;
    TermSystem sys_;
    std::unique_ptr<Fn> root_;
};

Term h_omega(const std::shared_ptr<JumpEngine>& eng, const MonotoneMap& g, const Tree& t, const FiniteString& sigma);
Term h_alpha(const std::shared_ptr<JumpEngine>& eng, Ord a, const MonotoneMap& g, const Tree& t,
             const FiniteString& sigma);

// X_Z = (JT^{w^a}(T_Z), KB) with T_Z the prefixes of z.
OrderHandle build_xz(const std::shared_ptr<JumpEngine>& eng, Ord a, const StreamHandle& z, std::size_t depth);
OrderHandle build_xz(Ord a, const DiagonalSemantics& s, const StreamHandle& z, std::size_t depth);

struct Witness {
    TermSystem sys;
    std::vector<Term> terms;
};
// <h^a_id(z|n) : n < count> over X_Z.
Witness descending_witness(Ord a, const DiagonalSemantics& s, const StreamHandle& z, std::size_t count);
Witness descending_witness(const std::shared_ptr<JumpEngine>& eng, Ord a, const StreamHandle& z, std::size_t count);

// ---- extraction ------------------------------------------------------------------

using CnfPair = std::pair<Elem, std::uint64_t>;  // w^x * m
using CnfDecomposition = std::vector<CnfPair>;
using ExpSeq = std::function<OmegaExpElement(std::size_t)>;
// Least h > k whose decomposition at position i is below the threshold, if any.
using ExistentialOracle = std::function<std::optional<std::size_t>(std::size_t k, std::size_t i, const CnfPair& threshold)>;

CnfDecomposition decompose(const OmegaExpElement& e, const OrderHandle& x);
Cmp cnf_pair_compare(const CnfPair& a, const CnfPair& b, const OrderHandle& x);

// Searches h in (k, limit).
ExistentialOracle horizon_oracle(ExpSeq seq, OrderHandle x, std::size_t limit);
// Searches h in (k, k + fuel].
ExistentialOracle fuel_oracle(ExpSeq seq, OrderHandle x, std::size_t fuel);

std::vector<Elem> extract_descending(const ExpSeq& seq, const OrderHandle& x, const ExistentialOracle& o,
                                     std::size_t count, std::size_t max_steps = 100000);

}  // namespace oj
