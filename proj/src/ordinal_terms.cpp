#include "ordjump/ordinal_terms.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace oj {

// ---- w^X ------------------------------------------------------------------------

bool omega_exp_sorted(const OmegaExpElement& a, const OrderHandle& x) {
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (x.cmp(a[i - 1], a[i]) == Cmp::LT) return false;
    }
    return true;
}

Cmp omega_exp_compare(const OmegaExpElement& a, const OmegaExpElement& b, const OrderHandle& x) {
    if (!omega_exp_sorted(a, x) || !omega_exp_sorted(b, x)) {
        throw ContractError("omega_exp_compare: entries must be nonincreasing");
    }
    std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        Cmp c = x.cmp(a[i], b[i]);
        if (c != Cmp::EQ) return c;
    }
    if (a.size() == b.size()) return Cmp::EQ;
    return a.size() < b.size() ? Cmp::LT : Cmp::GT;
}

namespace {

OmegaExpElement unpack(const Elem& e) {
    OmegaExpElement out;
    for (const auto& n : decode_string(e.nat)) out.push_back(Elem::of(n));
    return out;
}

}  // namespace

OrderHandle iexp_op(std::uint64_t n, const OrderHandle& x) {
    if (n == 0) return x;
    OrderHandle inner = iexp_op(n - 1, x);
    OrderHandle o;
    o.kind = OrderKind::Term;
    o.name = "w^(" + inner.name + ")";
    o.carrier = [inner](const Elem& e) {
        if (e.is_ord()) return false;
        auto v = unpack(e);
        for (const auto& y : v) {
            if (!inner.carrier(y)) return false;
        }
        return omega_exp_sorted(v, inner);
    };
    o.cmp = [inner](const Elem& a, const Elem& b) {
        if (a == b) return Cmp::EQ;
        return omega_exp_compare(unpack(a), unpack(b), inner);
    };
    o.show = [inner](const Elem& e) {
        std::string s = "<";
        auto v = unpack(e);
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + inner.show(v[i]);
        return s + ">";
    };
    o.parse = checked_parse(o.carrier, [](std::string_view t) { return Elem::of(parse_nat(t)); }, o.name);
    o.listing = [inner] {
        // Nonincreasing strings of length <= 2 over a short prefix of the inner listing.
        auto base = inner.listing();
        if (base.size() > 4) base.resize(4);
        std::vector<Elem> v{Elem::of(encode_string({}))};
        for (const auto& p : base) {
            v.push_back(Elem::of(encode_string({p.nat})));
            for (const auto& q : base) {
                if (inner.cmp(p, q) != Cmp::LT) v.push_back(Elem::of(encode_string({p.nat, q.nat})));
            }
        }
        return v;
    };
    return o;
}

// ---- interning ------------------------------------------------------------------

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

struct TermTable {
    struct H {
        std::size_t operator()(Term t) const { return t->hash; }
    };
    struct E {
        bool operator()(Term a, Term b) const {
            return a->hash == b->hash && a->kind == b->kind && a->x == b->x && a->delta == b->delta &&
                   a->kids == b->kids;
        }
    };

    Term intern(TermNode n) {
        std::size_t h = static_cast<std::size_t>(n.kind);
        h = mix(h, n.x.hash());
        h = mix(h, n.delta.hash());
        n.size = 1;
        for (Term k : n.kids) {
            h = mix(h, std::hash<const void*>{}(k));
            n.size = k->size > SIZE_MAX - n.size ? SIZE_MAX : n.size + k->size;
        }
        n.hash = h;
        std::lock_guard lock(mu);
        auto it = set.find(&n);
        if (it != set.end()) return *it;
        auto& slot = store.emplace_back(std::make_unique<TermNode>(std::move(n)));
        set.insert(slot.get());
        return slot.get();
    }

    std::mutex mu;
    std::deque<std::unique_ptr<TermNode>> store;
    std::unordered_set<Term, H, E> set;
};

TermTable& terms() {
    static TermTable t;
    return t;
}

}  // namespace

Term t_zero() {
    static const Term z = terms().intern(TermNode{});
    return z;
}

Term t_const(const Elem& x) {
    TermNode n;
    n.kind = TermKind::Const;
    n.x = x;
    return terms().intern(std::move(n));
}

Term t_sum(std::vector<Term> parts) {
    if (parts.empty()) return t_zero();
    if (parts.size() == 1) return parts.front();
    TermNode n;
    n.kind = TermKind::Sum;
    n.kids = std::move(parts);
    return terms().intern(std::move(n));
}

Term t_add(Term a, Term b) { return t_sum({a, b}); }

Term t_w(Term t) {
    TermNode n;
    n.kind = TermKind::W;
    n.kids = {t};
    return terms().intern(std::move(n));
}

Term t_phi(const Elem& delta, Term t) {
    TermNode n;
    n.kind = TermKind::Phi;
    n.delta = delta;
    n.kids = {t};
    return terms().intern(std::move(n));
}

Term t_nat(std::uint64_t n) {
    std::vector<Term> parts(n, t_w(t_zero()));
    return t_sum(std::move(parts));
}

TermSystem eps_system(const OrderHandle& x) { return TermSystem{TermSystem::Kind::Eps, x, empty_order()}; }

TermSystem phi_system(const OrderHandle& y, const OrderHandle& x) { return TermSystem{TermSystem::Kind::Phi, x, y}; }

std::vector<Term> summands(Term t) {
    if (t->kind == TermKind::Zero) return {};
    if (t->kind == TermKind::Sum) return t->kids;
    return {t};
}

// ---- comparison -------------------------------------------------------------------

namespace {

void check_kind(const TermSystem& sys, Term t) {
    if (t->kind == TermKind::W && sys.kind != TermSystem::Kind::Eps) throw ContractError("w^(t) outside the eps system");
    if (t->kind == TermKind::Phi && sys.kind != TermSystem::Kind::Phi) throw ContractError("phi outside the phi system");
}

// Both arguments are additively principal normal forms (a constant, w^t or phi_d(t)).
Cmp compare_single(const TermSystem& sys, Term a, Term b) {
    if (a == b) return Cmp::EQ;
    check_kind(sys, a);
    check_kind(sys, b);
    const bool ca = a->kind == TermKind::Const;
    const bool cb = b->kind == TermKind::Const;
    if (ca && cb) return sys.x.cmp(a->x, b->x);
    // Constants are fixed points of every w^ / phi_d: phi_d(t) < c iff t < c.
    if (ca) return flip(compare_normal(sys, b->kids[0], a));
    if (cb) return compare_normal(sys, a->kids[0], b);
    if (a->kind == TermKind::W) return compare_normal(sys, a->kids[0], b->kids[0]);
    switch (sys.y.cmp(a->delta, b->delta)) {
        case Cmp::LT: return compare_normal(sys, a->kids[0], b);
        case Cmp::EQ: return compare_normal(sys, a->kids[0], b->kids[0]);
        case Cmp::GT: return compare_normal(sys, a, b->kids[0]);
    }
    return Cmp::EQ;
}

}  // namespace

Cmp compare_normal(const TermSystem& sys, Term t, Term s) {
    if (t == s) return Cmp::EQ;
    auto ts = summands(t);
    auto ss = summands(s);
    std::size_t m = std::min(ts.size(), ss.size());
    for (std::size_t i = 0; i < m; ++i) {
        Cmp c = compare_single(sys, ts[i], ss[i]);
        if (c != Cmp::EQ) return c;
    }
    if (ts.size() == ss.size()) return Cmp::EQ;
    return ts.size() < ss.size() ? Cmp::LT : Cmp::GT;
}

// ---- normalization ------------------------------------------------------------------

Term normalize_top(const TermSystem& sys, Term t) {
    check_kind(sys, t);
    switch (t->kind) {
        case TermKind::Zero:
        case TermKind::Const:
            return t;
        case TermKind::W: {
            Term a = t->kids[0];
            if (a->kind == TermKind::Const) return a;  // w^{eps_x} = eps_x
            return t;
        }
        case TermKind::Phi: {
            Term a = t->kids[0];
            if (a->kind == TermKind::Const) return a;
            if (a->kind == TermKind::Phi && sys.y.cmp(a->delta, t->delta) == Cmp::GT) return a;
            return t;
        }
        case TermKind::Sum: {
            // Flatten, drop zeros, and let each summand absorb smaller ones to its left.
            std::vector<Term> stack;
            for (Term k : t->kids) {
                for (Term u : summands(k)) {
                    while (!stack.empty() && compare_single(sys, stack.back(), u) == Cmp::LT) stack.pop_back();
                    stack.push_back(u);
                }
            }
            return t_sum(std::move(stack));
        }
    }
    return t;
}

Term normalize(const TermSystem& sys, Term t) {
    switch (t->kind) {
        case TermKind::Zero:
        case TermKind::Const:
            check_kind(sys, t);
            return t;
        case TermKind::W: return normalize_top(sys, t_w(normalize(sys, t->kids[0])));
        case TermKind::Phi: return normalize_top(sys, t_phi(t->delta, normalize(sys, t->kids[0])));
        case TermKind::Sum: {
            std::vector<Term> kids;
            for (Term k : t->kids) kids.push_back(normalize(sys, k));
            return normalize_top(sys, t_sum(std::move(kids)));
        }
    }
    return t;
}

bool is_normal(const TermSystem& sys, Term t) { return normalize(sys, t) == t; }

Cmp compare(const TermSystem& sys, Term t, Term s) { return compare_normal(sys, normalize(sys, t), normalize(sys, s)); }

Term eps_normalize(Term t, const OrderHandle& x) { return normalize(eps_system(x), t); }

Cmp eps_compare(Term t, Term s, const OrderHandle& x) { return compare(eps_system(x), t, s); }

Term phi_normalize(Term t, const OrderHandle& x, const OrderHandle& y) { return normalize(phi_system(y, x), t); }

Cmp phi_compare(Term t, Term s, const OrderHandle& x, const OrderHandle& y) { return compare(phi_system(y, x), t, s); }

std::vector<Elem> constants_in(Term t) {
    std::vector<Elem> out;
    std::vector<Term> todo{t};
    while (!todo.empty()) {
        Term u = todo.back();
        todo.pop_back();
        if (u->kind == TermKind::Const) out.push_back(u->x);
        for (Term k : u->kids) todo.push_back(k);
    }
    return out;
}

// ---- printing and parsing -------------------------------------------------------------

std::string format_term(const TermSystem& sys, Term t) {
    switch (t->kind) {
        case TermKind::Zero: return "0";
        case TermKind::Const:
            return (sys.kind == TermSystem::Kind::Eps ? "eps[" : "c[") + sys.x.show(t->x) + "]";
        case TermKind::W: return "w^(" + format_term(sys, t->kids[0]) + ")";
        case TermKind::Phi: return "phi(" + sys.y.show(t->delta) + ", " + format_term(sys, t->kids[0]) + ")";
        case TermKind::Sum: {
            std::string s;
            for (std::size_t i = 0; i < t->kids.size(); ++i) {
                if (i) s += " + ";
                Term k = t->kids[i];
                s += k->kind == TermKind::Sum ? "(" + format_term(sys, k) + ")" : format_term(sys, k);
            }
            return s;
        }
    }
    return "?";
}

namespace {

struct TermParser {
    const TermSystem& sys;
    std::string_view in;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("term parse error at " + std::to_string(pos) + ": " + what);
    }
    void skip() {
        while (pos < in.size() && std::isspace(static_cast<unsigned char>(in[pos]))) ++pos;
    }
    bool eat(std::string_view tok) {
        skip();
        if (in.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok) {
        if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
    }
    // Raw text up to the first unnested character in `stops`.
    std::string_view chunk(std::string_view stops) {
        std::size_t start = pos;
        int depth = 0;
        while (pos < in.size()) {
            char c = in[pos];
            if (depth == 0 && stops.find(c) != std::string_view::npos) break;
            if (c == '[' || c == '(') ++depth;
            if (c == ']' || c == ')') --depth;
            ++pos;
        }
        if (pos >= in.size()) fail("unterminated element");
        return in.substr(start, pos - start);
    }
    Term atom() {
        skip();
        bool eps_const = eat("eps[");
        if (eps_const || eat("c[")) {
            if (eps_const != (sys.kind == TermSystem::Kind::Eps)) {
                fail(eps_const ? "eps[x] is only available in the eps system" : "c[x] is only available in the phi system");
            }
            auto text = chunk("]");
            expect("]");
            return t_const(sys.x.parse(text));
        }
        if (eat("w^")) {
            if (sys.kind != TermSystem::Kind::Eps) fail("w^ is only available in the eps system");
            if (eat("(")) {
                Term e = expr();
                expect(")");
                return t_w(e);
            }
            return t_w(atom());
        }
        if (eat("phi(")) {
            if (sys.kind != TermSystem::Kind::Phi) fail("phi is only available in the phi system");
            auto text = chunk(",");
            expect(",");
            Elem d = sys.y.parse(text);
            Term e = expr();
            expect(")");
            return t_phi(d, e);
        }
        if (eat("(")) {
            Term e = expr();
            expect(")");
            return e;
        }
        if (eat("0")) return t_zero();
        fail("expected a term");
    }
    Term expr() {
        std::vector<Term> parts{atom()};
        while (eat("+")) parts.push_back(atom());
        return t_sum(std::move(parts));
    }
};

}  // namespace

Term parse_term(const TermSystem& sys, std::string_view text) {
    TermParser p{sys, text};
    Term t = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return t;
}

// ---- restrictions and maps --------------------------------------------------------------

bool TermOrder::carrier(Term t) const {
    if (!is_normal(sys, t)) return false;
    for (const auto& c : constants_in(t)) {
        if (!sys.x.carrier(c)) return false;
    }
    if (sys.kind == TermSystem::Kind::Phi) {
        std::vector<Term> todo{t};
        while (!todo.empty()) {
            Term u = todo.back();
            todo.pop_back();
            if (u->kind == TermKind::Phi && !sys.y.carrier(u->delta)) return false;
            for (Term k : u->kids) todo.push_back(k);
        }
    }
    return !bound || compare_normal(sys, t, *bound) == Cmp::LT;
}

TermOrder term_order(const TermSystem& sys) { return TermOrder{sys, std::nullopt}; }

TermOrder order_restrict(const TermOrder& o, Term t) {
    if (!o.carrier(t)) throw DomainError("order_restrict: bound is not in the carrier");
    return TermOrder{o.sys, t};
}

Term iso_omega_eps(const std::vector<Term>& e, Term t, const OrderHandle& x) {
    TermSystem sys = eps_system(x);
    std::vector<Term> parts;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!is_normal(sys, e[i])) throw ContractError("iso_omega_eps: entry not in normal form");
        if (compare_normal(sys, e[i], t) != Cmp::LT) throw ContractError("iso_omega_eps: entry not below the bound");
        if (i && compare_normal(sys, e[i - 1], e[i]) == Cmp::LT) {
            throw ContractError("iso_omega_eps: entries must be nonincreasing");
        }
        parts.push_back(t_w(e[i]));
    }
    return normalize(sys, t_sum(std::move(parts)));
}

TermSystem embed_target(Ord a, const OrderHandle& x) { return phi_system(sum_order(a, x), empty_order()); }

namespace {

Term embed_raw(Term t) {
    switch (t->kind) {
        case TermKind::Zero: return t;
        case TermKind::Const: return t_phi(t->x, t_zero());  // nat-tagged: lands in the X part of a + X
        case TermKind::Phi: return t_phi(t->delta, embed_raw(t->kids[0]));
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (Term k : t->kids) parts.push_back(embed_raw(k));
            return t_sum(std::move(parts));
        }
        case TermKind::W: break;
    }
    throw ContractError("embed_phi: w^ is not a phi term");
}

}  // namespace

Term embed_phi(Term t, Ord a, const OrderHandle& x) {
    for (const auto& c : constants_in(t)) {
        if (c.is_ord()) throw ContractError("embed_phi: constants must be elements of X");
    }
    return normalize(embed_target(a, x), embed_raw(t));
}

// ---- samplers -------------------------------------------------------------------------

namespace {

Term random_raw(const TermSystem& sys, std::mt19937_64& rng, int depth, const std::vector<Elem>& xs,
                const std::vector<Elem>& ys) {
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
    // Productions: 0, constant, sum, and the unary function symbol.
    std::vector<int> prods{0};
    if (!xs.empty()) prods.push_back(1);
    if (depth > 0) {
        prods.push_back(2);
        if (sys.kind == TermSystem::Kind::Eps || !ys.empty()) {
            prods.push_back(3);
            prods.push_back(3);
        }
    }
    switch (prods[pick(prods.size())]) {
        case 0: return t_zero();
        case 1: return t_const(xs[pick(xs.size())]);
        case 2: {
            std::vector<Term> parts;
            std::size_t n = 2 + pick(2);
            for (std::size_t i = 0; i < n; ++i) parts.push_back(random_raw(sys, rng, depth - 1, xs, ys));
            return t_sum(std::move(parts));
        }
        default: {
            Term a = random_raw(sys, rng, depth - 1, xs, ys);
            if (sys.kind == TermSystem::Kind::Eps) return t_w(a);
            return t_phi(ys[pick(ys.size())], a);
        }
    }
}

}  // namespace

Term random_term(const TermSystem& sys, std::mt19937_64& rng, int depth) {
    auto xs = sys.x.listing ? sys.x.listing() : std::vector<Elem>{};
    auto ys = sys.kind == TermSystem::Kind::Phi && sys.y.listing ? sys.y.listing() : std::vector<Elem>{};
    return normalize(sys, random_raw(sys, rng, depth, xs, ys));
}

Term random_normal_term(const TermSystem& sys, std::mt19937_64& rng, std::size_t max_size) {
    while (true) {
        int depth = static_cast<int>(std::uniform_int_distribution<int>(0, 4)(rng));
        Term t = random_term(sys, rng, depth);
        if (t->size <= max_size) return t;
    }
}

std::vector<Term> enumerate_terms(const TermSystem& sys, int depth, std::size_t budget) {
    auto xs = sys.x.listing ? sys.x.listing() : std::vector<Elem>{};
    auto ys = sys.kind == TermSystem::Kind::Phi && sys.y.listing ? sys.y.listing() : std::vector<Elem>{};
    std::vector<Term> all;
    std::unordered_set<Term> seen;
    auto add = [&](Term t) {
        if (all.size() >= budget) return;
        t = normalize(sys, t);
        if (seen.insert(t).second) all.push_back(t);
    };
    add(t_zero());
    for (const auto& x : xs) add(t_const(x));
    for (int d = 0; d < depth; ++d) {
        std::vector<Term> level = all;
        for (Term t : level) {
            if (sys.kind == TermSystem::Kind::Eps) {
                add(t_w(t));
            } else {
                for (const auto& y : ys) add(t_phi(y, t));
            }
        }
        for (Term a : level) {
            for (Term b : level) add(t_add(a, b));
        }
    }
    return all;
}

}  // namespace oj
