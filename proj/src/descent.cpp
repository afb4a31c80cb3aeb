#include "ordjump/descent.hpp"

#include <algorithm>

namespace oj {

MonotoneMap identity_map(const Tree& t, std::size_t depth) {
    return MonotoneMap{t, kb_tree_order(t, depth), [](const FiniteString& tau) { return Elem::of(encode_string(tau)); }};
}

namespace {

void require_node(const Tree& t, const FiniteString& sigma) {
    if (!t.member(sigma)) throw DomainError("node " + format_string(sigma) + " is not in the tree");
}

// The exponents of h_g(sigma) in the order the definition lists them.
std::vector<FiniteString> h_exponents(JumpEngine& eng, const FiniteString& sigma) {
    if (sigma.empty()) return {FiniteString{}, FiniteString{}, FiniteString{}};
    FiniteString j = eng.jump(ord_zero(), sigma);
    std::vector<FiniteString> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!eng.semantics().conv(i, sigma)) out.push_back(prefix(j, i));
    }
    out.push_back(j);
    out.push_back(j);
    return out;
}

OmegaExpElement sorted_down(OmegaExpElement v, const OrderHandle& o) {
    std::stable_sort(v.begin(), v.end(), [&](const Elem& a, const Elem& b) { return o.cmp(a, b) == Cmp::GT; });
    return v;
}

}  // namespace

OmegaExpElement h_base(JumpEngine& eng, const Tree& t, const FiniteString& sigma) {
    require_node(t, sigma);
    OmegaExpElement out;
    for (const auto& e : h_exponents(eng, sigma)) out.push_back(Elem::of(encode_string(e)));
    return sorted_down(std::move(out), kb_tree_order(t, 0));
}

OmegaExpElement h_g(JumpEngine& eng, const MonotoneMap& g, const Tree& t, const FiniteString& sigma) {
    require_node(t, sigma);
    OmegaExpElement out;
    for (const auto& e : h_exponents(eng, sigma)) {
        if (!g.domain.member(e)) throw DomainError("g is undefined at " + format_string(e));
        out.push_back(g.eval(e));
    }
    return sorted_down(std::move(out), g.codomain);
}

Term omega_exp_as_term(const OmegaExpElement& e) {
    std::vector<Term> parts;
    for (const auto& x : e) parts.push_back(t_const(x));
    return t_sum(std::move(parts));
}

// ---- h^a_g -------------------------------------------------------------------------

// A string -> term function: either the top-level g (as constants), or a member
// f_tau of the family built from a parent function at some level beta.
struct HEvaluator::Fn {
    HEvaluator* owner = nullptr;
    Fn* parent = nullptr;  // null for the top-level g
    Ord beta = nullptr;
    FiniteString tau;
    std::unordered_map<FiniteString, Term, StringHash> memo;
    std::map<std::pair<Ord, FiniteString>, std::unique_ptr<Fn>> children;

    Fn& child(Ord b, const FiniteString& t) {
        auto& slot = children[{b, t}];
        if (!slot) {
            slot = std::make_unique<Fn>();
            slot->owner = owner;
            slot->parent = this;
            slot->beta = b;
            slot->tau = t;
        }
        return *slot;
    }

    Term at(const FiniteString& rho) {
        if (auto it = memo.find(rho); it != memo.end()) return it->second;
        Term v;
        if (parent == nullptr) {
            if (!owner->g_.domain.member(rho)) throw DomainError("g is undefined at " + format_string(rho));
            v = t_const(owner->g_.eval(rho));
        } else if (rho.empty()) {
            v = owner->lift(beta, parent->at(tau));
        } else {
            Fn& next = parent->child(beta, append(tau, rho.front()));
            v = owner->h(fundamental_seq(beta, tau.size() + 1), next, rho);
        }
        memo.emplace(rho, v);
        return v;
    }
};

HEvaluator::HEvaluator(std::shared_ptr<JumpEngine> eng, Ord top, Mode mode, MonotoneMap g, Tree t)
    : eng_(std::move(eng)), top_(top), mode_(mode), g_(std::move(g)), t_(std::move(t)) {
    if (mode_ == Mode::Eps) {
        if (top_ != ord_nat(1)) throw DomainError("eps mode evaluates the w-level only");
        sys_ = eps_system(g_.codomain);
    } else {
        sys_ = phi_system(ordinals_below(top_), g_.codomain);
    }
    root_ = std::make_unique<Fn>();
    root_->owner = this;
}

HEvaluator::~HEvaluator() = default;

Term HEvaluator::lift(Ord beta, Term q) const {
    if (beta == top_) return q;
    if (mode_ == Mode::Eps) return normalize_top(sys_, t_w(q));
    return normalize_top(sys_, t_phi(Elem::of(beta), q));
}

Term HEvaluator::h(Ord beta, Fn& e, const FiniteString& sigma) {
    if (!ord_is_zero(beta)) return h(fundamental_seq(beta, 0), e.child(beta, {}), sigma);
    std::vector<Term> parts;
    for (const auto& x : h_exponents(*eng_, sigma)) parts.push_back(lift(beta, e.at(x)));
    return normalize_top(sys_, t_sum(std::move(parts)));
}

Term HEvaluator::eval(const FiniteString& sigma) {
    require_node(t_, sigma);
    return h(top_, *root_, sigma);
}

Term h_omega(const std::shared_ptr<JumpEngine>& eng, const MonotoneMap& g, const Tree& t, const FiniteString& sigma) {
    return HEvaluator(eng, ord_nat(1), HEvaluator::Mode::Eps, g, t).eval(sigma);
}

Term h_alpha(const std::shared_ptr<JumpEngine>& eng, Ord a, const MonotoneMap& g, const Tree& t,
             const FiniteString& sigma) {
    return HEvaluator(eng, a, HEvaluator::Mode::Phi, g, t).eval(sigma);
}

// ---- X_Z and witnesses -------------------------------------------------------------

OrderHandle build_xz(const std::shared_ptr<JumpEngine>& eng, Ord a, const StreamHandle& z, std::size_t depth) {
    Tree tz = path_tree(z, depth);
    OrderHandle o = kb_tree_order(eng->tree(a, tz), depth);
    o.name = "X_Z";
    return o;
}

OrderHandle build_xz(Ord a, const DiagonalSemantics& s, const StreamHandle& z, std::size_t depth) {
    return build_xz(JumpEngine::make(s), a, z, depth);
}

Witness descending_witness(const std::shared_ptr<JumpEngine>& eng, Ord a, const StreamHandle& z, std::size_t count) {
    Tree tz = path_tree(z, count + 1);
    MonotoneMap g = identity_map(eng->tree(a, tz), count + 1);
    HEvaluator ev(eng, a, HEvaluator::Mode::Phi, g, tz);
    Witness w{ev.system(), {}};
    for (std::size_t n = 0; n < count; ++n) w.terms.push_back(ev.eval(z.take(n)));
    return w;
}

Witness descending_witness(Ord a, const DiagonalSemantics& s, const StreamHandle& z, std::size_t count) {
    return descending_witness(JumpEngine::make(s), a, z, count);
}

// ---- extraction ------------------------------------------------------------------

CnfDecomposition decompose(const OmegaExpElement& e, const OrderHandle& x) {
    if (!omega_exp_sorted(e, x)) throw ContractError("decompose: entries must be nonincreasing");
    CnfDecomposition out;
    for (const auto& v : e) {
        if (!out.empty() && x.cmp(out.back().first, v) == Cmp::EQ) {
            ++out.back().second;
        } else {
            out.emplace_back(v, 1);
        }
    }
    return out;
}

Cmp cnf_pair_compare(const CnfPair& a, const CnfPair& b, const OrderHandle& x) {
    Cmp c = x.cmp(a.first, b.first);
    if (c != Cmp::EQ) return c;
    if (a.second == b.second) return Cmp::EQ;
    return a.second < b.second ? Cmp::LT : Cmp::GT;
}

namespace {

class DecompCache {
public:
    DecompCache(ExpSeq seq, OrderHandle x) : seq_(std::move(seq)), x_(std::move(x)) {}
    const CnfDecomposition& at(std::size_t k) {
        auto it = cache_.find(k);
        if (it == cache_.end()) it = cache_.emplace(k, decompose(seq_(k), x_)).first;
        return it->second;
    }
    const OrderHandle& order() const { return x_; }

private:
    ExpSeq seq_;
    OrderHandle x_;
    std::map<std::size_t, CnfDecomposition> cache_;
};

ExistentialOracle search_oracle(ExpSeq seq, OrderHandle x, std::function<std::size_t(std::size_t)> end) {
    auto cache = std::make_shared<DecompCache>(std::move(seq), std::move(x));
    return [cache, end](std::size_t k, std::size_t i, const CnfPair& threshold) -> std::optional<std::size_t> {
        for (std::size_t h = k + 1; h < end(k); ++h) {
            const auto& d = cache->at(h);
            // A shorter decomposition that agrees before i cannot occur in an infinite descent.
            if (i < d.size() && cnf_pair_compare(d[i], threshold, cache->order()) == Cmp::LT) return h;
        }
        return std::nullopt;
    };
}

}  // namespace

ExistentialOracle horizon_oracle(ExpSeq seq, OrderHandle x, std::size_t limit) {
    return search_oracle(std::move(seq), std::move(x), [limit](std::size_t) { return limit; });
}

ExistentialOracle fuel_oracle(ExpSeq seq, OrderHandle x, std::size_t fuel) {
    return search_oracle(std::move(seq), std::move(x), [fuel](std::size_t k) { return k + fuel + 1; });
}

std::vector<Elem> extract_descending(const ExpSeq& seq, const OrderHandle& x, const ExistentialOracle& o,
                                     std::size_t count, std::size_t max_steps) {
    std::vector<Elem> out;
    if (count == 0) return out;
    DecompCache d(seq, x);
    std::size_t k = 0;
    std::size_t i = 0;
    if (d.at(0).empty()) throw ContractError("extract_descending: the sequence starts at 0");
    CnfPair cur = d.at(0)[0];
    out.push_back(cur.first);
    for (std::size_t step = 0; out.size() < count; ++step) {
        if (step >= max_steps) throw ContractError("extract_descending: step budget exhausted");
        if (auto h = o(k, i, cur)) {
            if (*h <= k || i >= d.at(*h).size() || cnf_pair_compare(d.at(*h)[i], cur, x) != Cmp::LT) {
                throw ContractError("extract_descending: oracle witness is not below the threshold");
            }
            k = *h;
        } else {
            if (i + 1 >= d.at(k).size()) throw ContractError("extract_descending: input is not descending");
            ++i;
        }
        CnfPair next = d.at(k)[i];
        if (x.cmp(next.first, cur.first) == Cmp::LT) out.push_back(next.first);
        cur = next;
    }
    return out;
}

}  // namespace oj
