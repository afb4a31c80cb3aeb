#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ordjump/machine.hpp"
#include "ordjump/ord_notation.hpp"
#include "ordjump/order_core.hpp"

namespace oj {

struct Stage {
    std::size_t t = 0;
    bool found = false;  // convergence witnessed, as opposed to the t_{n-1}+1 fallback

    friend bool operator==(const Stage&, const Stage&) = default;
};
using TrueStageTrace = std::vector<Stage>;

// Stages t_0 < t_1 < ... of sigma, stopping before the first t_k > |sigma|.
TrueStageTrace true_stages(const DiagonalSemantics& s, const FiniteString& sigma);

// J^{w^a} and friends for one semantics instance, with a shared memo table.
// Level a = 0 is the plain jump J; a = 1 is the w-jump.
class JumpEngine : public std::enable_shared_from_this<JumpEngine> {
public:
    explicit JumpEngine(DiagonalSemantics s) : sem_(std::move(s)) {}
    static std::shared_ptr<JumpEngine> make(DiagonalSemantics s) { return std::make_shared<JumpEngine>(std::move(s)); }

    const DiagonalSemantics& semantics() const { return sem_; }

    FiniteString jump(Ord a, const FiniteString& sigma);
    // J^{w^a}_n: n-fold composition along the fundamental sequence of a (a > 0).
    FiniteString jump_n(Ord a, std::size_t n, const FiniteString& sigma);
    // Inverse on the image; throws DomainError when tau is not J^{w^a}(x) for any x.
    FiniteString k_checked(Ord a, const FiniteString& tau);
    bool in_image(Ord a, const FiniteString& tau);

    bool tree_member(Ord a, const Tree& t, const FiniteString& tau);
    Tree tree(Ord a, const Tree& t);
    // JT^{w^a}_tau(T); the empty tree when tau is not in JT^{w^a}(T).
    Tree local_tree(Ord a, const Tree& t, const FiniteString& tau);
    // The same tree built from the recursion on |tau| through restrictions.
    Tree local_tree_recursive(Ord a, const Tree& t, const FiniteString& tau);

    // Longest prefix of J^{w^a}(sigma) that already agrees with the jump of
    // every real extending sigma, as far as the semantics lets us tell.
    FiniteString certified(Ord a, const FiniteString& sigma);
    // Stream value at n, scanning prefixes of z up to fuel; nullopt = unknown.
    std::optional<Nat> stream(Ord a, const StreamHandle& z, std::size_t n, std::size_t fuel);
    // The jump of z as a lazy stream; throws ContractError when fuel runs out.
    StreamHandle real(Ord a, const StreamHandle& z, std::size_t fuel);

private:
    struct Key {
        Ord a;
        FiniteString s;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    using Memo = std::unordered_map<Key, FiniteString, KeyHash>;

    FiniteString jump0(const FiniteString& sigma) const;
    FiniteString certified0(const FiniteString& sigma) const;
    std::optional<FiniteString> lookup(const Memo& m, const Key& k);
    void store(Memo& m, Key k, const FiniteString& v);

    DiagonalSemantics sem_;
    std::mutex mu_;
    Memo jumps_;
    Memo certs_;
};

// ---- plain jump --------------------------------------------------------------

FiniteString jump_string(const DiagonalSemantics& s, const FiniteString& sigma);
FiniteString k_string(const FiniteString& tau);
bool in_jump_image(const DiagonalSemantics& s, const FiniteString& tau);
bool jump_tree_member(const DiagonalSemantics& s, const Tree& t, const FiniteString& tau);
std::optional<Nat> jump_stream(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n, std::size_t fuel);

// ---- w-jump ------------------------------------------------------------------

FiniteString omega_jump_string(const DiagonalSemantics& s, const FiniteString& sigma);
FiniteString omega_k_string(const FiniteString& tau);  // no image check
FiniteString omega_k_string(const DiagonalSemantics& s, const FiniteString& tau);
std::optional<Nat> omega_jump_stream(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n, std::size_t fuel);

// ---- w^a-jump ----------------------------------------------------------------

FiniteString alpha_jump_string(const DiagonalSemantics& s, Ord a, const FiniteString& sigma);
FiniteString alpha_jump_n(const DiagonalSemantics& s, Ord a, std::size_t n, const FiniteString& sigma);
FiniteString alpha_k_string(Ord a, const FiniteString& tau);  // no image check
FiniteString alpha_k_string(const DiagonalSemantics& s, Ord a, const FiniteString& tau);
// K^{w^a}_n = K^{w^{a_0}} o ... o K^{w^{a_{n-1}}}.
FiniteString alpha_k_n(Ord a, std::size_t n, const FiniteString& rho);
std::optional<Nat> alpha_jump_stream(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t n,
                                     std::size_t fuel);

bool alpha_jump_tree_member(const DiagonalSemantics& s, Ord a, const Tree& t, const FiniteString& tau);
Tree alpha_jump_tree(const DiagonalSemantics& s, Ord a, const Tree& t);
Tree alpha_jump_tree_local(const DiagonalSemantics& s, Ord a, const Tree& t, const FiniteString& tau);

}  // namespace oj
