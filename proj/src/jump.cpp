#include "ordjump/jump.hpp"

#include <algorithm>
#include <map>

namespace oj {

namespace {

Tree empty_tree() {
    Tree t;
    t.member = [](const FiniteString&) { return false; };
    t.enumerate = [](std::size_t) { return std::vector<FiniteString>{}; };
    return t;
}

std::vector<FiniteString> sort_unique(std::vector<FiniteString> v) {
    std::sort(v.begin(), v.end(), [](const FiniteString& x, const FiniteString& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Ord require_positive(Ord a, const char* who) {
    if (ord_is_zero(a)) throw DomainError(std::string(who) + ": level must be positive");
    return a;
}

}  // namespace

TrueStageTrace true_stages(const DiagonalSemantics& s, const FiniteString& sigma) {
    TrueStageTrace out;
    std::size_t t_prev = 1;
    for (std::uint64_t n = 0;; ++n) {
        std::size_t t = mu_stage(s, n, sigma, t_prev);
        if (t > sigma.size()) break;
        out.push_back({t, s.conv(n, sigma)});
        t_prev = t;
    }
    return out;
}

// ---- engine -------------------------------------------------------------------

std::size_t JumpEngine::KeyHash::operator()(const Key& k) const {
    return StringHash{}(k.s) * 31 + std::hash<const void*>{}(k.a);
}

std::optional<FiniteString> JumpEngine::lookup(const Memo& m, const Key& k) {
    std::lock_guard lock(mu_);
    auto it = m.find(k);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

void JumpEngine::store(Memo& m, Key k, const FiniteString& v) {
    std::lock_guard lock(mu_);
    m.insert_or_assign(std::move(k), v);
}

FiniteString JumpEngine::jump0(const FiniteString& sigma) const {
    FiniteString out;
    for (const auto& st : true_stages(sem_, sigma)) out.push_back(encode_string(prefix(sigma, st.t)));
    return out;
}

FiniteString JumpEngine::certified0(const FiniteString& sigma) const {
    FiniteString out;
    std::uint64_t n = 0;
    for (const auto& st : true_stages(sem_, sigma)) {
        if (!st.found && sem_.settle_bound) {
            // A fallback stage is final once the settle bound lies inside sigma.
            auto b = sem_.settle_bound(n);
            if (!b || *b > sigma.size()) break;
        }
        out.push_back(encode_string(prefix(sigma, st.t)));
        ++n;
    }
    return out;
}

FiniteString JumpEngine::jump(Ord a, const FiniteString& sigma) {
    if (ord_is_zero(a)) return jump0(sigma);
    Key key{a, sigma};
    if (auto hit = lookup(jumps_, key)) return *hit;
    FiniteString out;
    FiniteString cur = sigma;
    for (std::uint64_t j = 0; !cur.empty(); ++j) {
        cur = jump(fundamental_seq(a, j), cur);
        if (cur.empty()) break;
        out.push_back(cur.front());
    }
    store(jumps_, std::move(key), out);
    return out;
}

FiniteString JumpEngine::jump_n(Ord a, std::size_t n, const FiniteString& sigma) {
    require_positive(a, "jump_n");
    FiniteString cur = sigma;
    for (std::size_t j = 0; j < n; ++j) cur = jump(fundamental_seq(a, j), cur);
    return cur;
}

FiniteString JumpEngine::k_checked(Ord a, const FiniteString& tau) {
    FiniteString r = alpha_k_string(a, tau);
    if (jump(a, r) != tau) throw DomainError("K: " + format_string(tau) + " is not in the jump image");
    return r;
}

bool JumpEngine::in_image(Ord a, const FiniteString& tau) { return jump(a, alpha_k_string(a, tau)) == tau; }

bool JumpEngine::tree_member(Ord a, const Tree& t, const FiniteString& tau) {
    FiniteString r = alpha_k_string(a, tau);
    return jump(a, r) == tau && t.member(r);
}

Tree JumpEngine::tree(Ord a, const Tree& t) {
    auto self = shared_from_this();
    Tree out;
    out.depth_bound = t.depth_bound;
    out.member = [self, a, t](const FiniteString& tau) { return self->tree_member(a, t, tau); };
    out.enumerate = [self, a, t](std::size_t max_len) {
        std::vector<FiniteString> v;
        for (const auto& sigma : t.enumerate(t.depth_bound)) {
            auto j = self->jump(a, sigma);
            if (j.size() <= max_len) v.push_back(std::move(j));
        }
        return sort_unique(std::move(v));
    };
    return out;
}

Tree JumpEngine::local_tree(Ord a, const Tree& t, const FiniteString& tau) {
    require_positive(a, "local_tree");
    if (!tree_member(a, t, tau)) return empty_tree();
    auto self = shared_from_this();
    const std::size_t depth = tau.size() + 1;
    Tree out;
    out.depth_bound = t.depth_bound;
    out.member = [self, a, t, tau, depth](const FiniteString& rho) {
        if (rho.empty()) return true;
        // A nonempty value of J_n has a unique preimage, recovered by K_n.
        FiniteString sigma = alpha_k_n(a, depth, rho);
        return t.member(sigma) && self->jump_n(a, depth, sigma) == rho && is_prefix(tau, self->jump(a, sigma));
    };
    out.enumerate = [self, a, t, tau, depth](std::size_t max_len) {
        std::vector<FiniteString> v{FiniteString{}};
        for (const auto& sigma : t.enumerate(t.depth_bound)) {
            if (!is_prefix(tau, self->jump(a, sigma))) continue;
            auto r = self->jump_n(a, depth, sigma);
            if (r.size() <= max_len) v.push_back(std::move(r));
        }
        return sort_unique(std::move(v));
    };
    return out;
}

Tree JumpEngine::local_tree_recursive(Ord a, const Tree& t, const FiniteString& tau) {
    require_positive(a, "local_tree_recursive");
    if (!tree_member(a, t, tau)) return empty_tree();
    Tree cur = tree(fundamental_seq(a, 0), t);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        cur = tree(fundamental_seq(a, i + 1), tree_restrict(cur, FiniteString{tau[i]}));
    }
    return cur;
}

FiniteString JumpEngine::certified(Ord a, const FiniteString& sigma) {
    if (ord_is_zero(a)) return certified0(sigma);
    Key key{a, sigma};
    if (auto hit = lookup(certs_, key)) return *hit;
    // Each level only sees the part of the previous one that is already right.
    FiniteString out;
    FiniteString cur = sigma;
    for (std::uint64_t j = 0; !cur.empty(); ++j) {
        cur = certified(fundamental_seq(a, j), cur);
        if (cur.empty()) break;
        out.push_back(cur.front());
    }
    store(certs_, std::move(key), out);
    return out;
}

std::optional<Nat> JumpEngine::stream(Ord a, const StreamHandle& z, std::size_t n, std::size_t fuel) {
    if (fuel == 0) return std::nullopt;
    std::size_t m = std::min(fuel, n + 2);
    while (true) {
        auto u = certified(a, z.take(m));
        if (u.size() > n) {
            if (sem_.settle_bound) return u[n];
            // Without a settle bound, insist the value survives the whole budget.
            auto w = certified(a, z.take(fuel));
            if (w.size() > n && w[n] == u[n]) return u[n];
            return std::nullopt;
        }
        if (m == fuel) return std::nullopt;
        m = std::min(fuel, m < 16 ? m + 1 : m + m / 4);
    }
}

StreamHandle JumpEngine::real(Ord a, const StreamHandle& z, std::size_t fuel) {
    auto self = shared_from_this();
    auto cache = std::make_shared<std::pair<std::mutex, std::map<std::size_t, Nat>>>();
    StreamHandle out;
    out.at = [self, a, z, fuel, cache](std::size_t n) {
        {
            std::lock_guard lock(cache->first);
            auto it = cache->second.find(n);
            if (it != cache->second.end()) return it->second;
        }
        auto v = self->stream(a, z, n, fuel);
        if (!v) throw ContractError("jump stream: fuel exhausted at index " + std::to_string(n));
        std::lock_guard lock(cache->first);
        cache->second.emplace(n, *v);
        return *v;
    };
    return out;
}

// ---- free functions -------------------------------------------------------------

FiniteString jump_string(const DiagonalSemantics& s, const FiniteString& sigma) {
    return JumpEngine::make(s)->jump(ord_zero(), sigma);
}

FiniteString k_string(const FiniteString& tau) {
    if (tau.empty()) return {};
    return decode_string(tau.back());
}

bool in_jump_image(const DiagonalSemantics& s, const FiniteString& tau) {
    return jump_string(s, k_string(tau)) == tau;
}

bool jump_tree_member(const DiagonalSemantics& s, const Tree& t, const FiniteString& tau) {
    return in_jump_image(s, tau) && t.member(k_string(tau));
}

std::optional<Nat> jump_stream(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n, std::size_t fuel) {
    return JumpEngine::make(s)->stream(ord_zero(), z, n, fuel);
}

FiniteString omega_jump_string(const DiagonalSemantics& s, const FiniteString& sigma) {
    return JumpEngine::make(s)->jump(ord_nat(1), sigma);
}

FiniteString omega_k_string(const FiniteString& tau) { return alpha_k_string(ord_nat(1), tau); }

FiniteString omega_k_string(const DiagonalSemantics& s, const FiniteString& tau) {
    return JumpEngine::make(s)->k_checked(ord_nat(1), tau);
}

std::optional<Nat> omega_jump_stream(const DiagonalSemantics& s, const StreamHandle& z, std::size_t n,
                                     std::size_t fuel) {
    return JumpEngine::make(s)->stream(ord_nat(1), z, n, fuel);
}

FiniteString alpha_jump_string(const DiagonalSemantics& s, Ord a, const FiniteString& sigma) {
    return JumpEngine::make(s)->jump(a, sigma);
}

FiniteString alpha_jump_n(const DiagonalSemantics& s, Ord a, std::size_t n, const FiniteString& sigma) {
    return JumpEngine::make(s)->jump_n(a, n, sigma);
}

FiniteString alpha_k_string(Ord a, const FiniteString& tau) {
    if (ord_is_zero(a)) return k_string(tau);
    if (tau.empty()) return {};
    return alpha_k_n(a, tau.size(), last_singleton(tau));
}

FiniteString alpha_k_n(Ord a, std::size_t n, const FiniteString& rho) {
    require_positive(a, "alpha_k_n");
    FiniteString cur = rho;
    for (std::size_t j = n; j-- > 0;) cur = alpha_k_string(fundamental_seq(a, j), cur);
    return cur;
}

FiniteString alpha_k_string(const DiagonalSemantics& s, Ord a, const FiniteString& tau) {
    return JumpEngine::make(s)->k_checked(a, tau);
}

std::optional<Nat> alpha_jump_stream(const DiagonalSemantics& s, Ord a, const StreamHandle& z, std::size_t n,
                                     std::size_t fuel) {
    return JumpEngine::make(s)->stream(a, z, n, fuel);
}

bool alpha_jump_tree_member(const DiagonalSemantics& s, Ord a, const Tree& t, const FiniteString& tau) {
    return JumpEngine::make(s)->tree_member(a, t, tau);
}

Tree alpha_jump_tree(const DiagonalSemantics& s, Ord a, const Tree& t) { return JumpEngine::make(s)->tree(a, t); }

Tree alpha_jump_tree_local(const DiagonalSemantics& s, Ord a, const Tree& t, const FiniteString& tau) {
    return JumpEngine::make(s)->local_tree(a, t, tau);
}

}  // namespace oj
