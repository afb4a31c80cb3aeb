#include "ordjump/ord_notation.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

namespace oj {

namespace {

using Terms = std::vector<std::pair<Ord, std::uint64_t>>;

std::size_t hash_terms(const Terms& t) {
    std::size_t h = 0x84222325cbf29ce4ULL ^ t.size();
    for (const auto& [e, c] : t) {
        h ^= std::hash<const void*>{}(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::uint64_t>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

class OrdTable {
public:
    Ord intern(Terms t) {
        OrdNode probe{std::move(t), 0};
        probe.hash = hash_terms(probe.terms);
        std::lock_guard lock(mu_);
        auto it = set_.find(&probe);
        if (it != set_.end()) return *it;
        auto& slot = store_.emplace_back(std::make_unique<OrdNode>(std::move(probe)));
        set_.insert(slot.get());
        return slot.get();
    }

private:
    struct H {
        std::size_t operator()(Ord n) const { return n->hash; }
    };
    struct E {
        bool operator()(Ord a, Ord b) const { return a->hash == b->hash && a->terms == b->terms; }
    };
    std::mutex mu_;
    std::deque<std::unique_ptr<OrdNode>> store_;
    std::unordered_set<Ord, H, E> set_;
};

OrdTable& table() {
    static OrdTable t;
    return t;
}

}  // namespace

Ord ord_zero() {
    static const Ord z = table().intern({});
    return z;
}

Ord ord_nat(std::uint64_t n) {
    if (n == 0) return ord_zero();
    return table().intern({{ord_zero(), n}});
}

Ord ord_omega() {
    static const Ord w = table().intern({{ord_nat(1), 1}});
    return w;
}

Ord ord_omega_pow(Ord e) { return table().intern({{e, 1}}); }

Cmp ord_compare(Ord a, Ord b) {
    if (a == b) return Cmp::EQ;
    const auto& x = a->terms;
    const auto& y = b->terms;
    std::size_t m = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < m; ++i) {
        Cmp c = ord_compare(x[i].first, y[i].first);
        if (c != Cmp::EQ) return c;
        if (x[i].second != y[i].second) return x[i].second < y[i].second ? Cmp::LT : Cmp::GT;
    }
    if (x.size() == y.size()) return Cmp::EQ;
    return x.size() < y.size() ? Cmp::LT : Cmp::GT;
}

Ord ord_add(Ord a, Ord b) {
    if (b->terms.empty()) return a;
    Ord lead = b->terms.front().first;
    Terms out;
    for (const auto& t : a->terms) {
        Cmp c = ord_compare(t.first, lead);
        if (c == Cmp::GT) {
            out.push_back(t);
        } else if (c == Cmp::EQ) {
            out.emplace_back(t.first, t.second + b->terms.front().second);
        }
    }
    bool merged = !out.empty() && out.back().first == lead;
    for (std::size_t i = merged ? 1 : 0; i < b->terms.size(); ++i) out.push_back(b->terms[i]);
    return table().intern(std::move(out));
}

Ord ord_mul_nat(Ord a, std::uint64_t k) {
    if (k == 0 || a->terms.empty()) return ord_zero();
    Terms t = a->terms;
    t.front().second *= k;
    return table().intern(std::move(t));
}

bool ord_is_zero(Ord a) { return a->terms.empty(); }

bool ord_is_successor(Ord a) { return !a->terms.empty() && ord_is_zero(a->terms.back().first); }

bool ord_is_limit(Ord a) { return !a->terms.empty() && !ord_is_successor(a); }

Ord ord_pred(Ord a) {
    if (!ord_is_successor(a)) throw DomainError("ord_pred: not a successor");
    Terms t = a->terms;
    if (--t.back().second == 0) t.pop_back();
    return table().intern(std::move(t));
}

Ord fundamental_seq(Ord a, std::uint64_t i) {
    if (ord_is_zero(a)) throw DomainError("fundamental_seq: 0 has no fundamental sequence");
    if (ord_is_successor(a)) return ord_pred(a);
    // a = g + w^b, with b > 0.
    Terms head = a->terms;
    Ord b = head.back().first;
    if (--head.back().second == 0) head.pop_back();
    Ord g = table().intern(std::move(head));
    if (ord_is_successor(b)) return ord_add(g, ord_mul_nat(ord_omega_pow(ord_pred(b)), i));
    return ord_add(g, ord_omega_pow(fundamental_seq(b, i)));
}

std::string format_ord(Ord a) {
    if (a->terms.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < a->terms.size(); ++k) {
        const auto& [e, c] = a->terms[k];
        if (k) out += '+';
        if (ord_is_zero(e)) {
            out += std::to_string(c);
            continue;
        }
        out += 'w';
        if (e != ord_nat(1)) {
            std::string inner = format_ord(e);
            bool atomic = e->terms.size() == 1 && (e->terms[0].second == 1 || ord_is_zero(e->terms[0].first)) &&
                          (ord_is_zero(e->terms[0].first) || e->terms[0].first == ord_nat(1));
            out += '^';
            out += atomic ? inner : "(" + inner + ")";
        }
        if (c != 1) out += "*" + std::to_string(c);
    }
    return out;
}

namespace {

struct OrdParser {
    std::string_view in;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("ordinal parse error at " + std::to_string(pos) + ": " + what);
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
    std::uint64_t number() {
        skip();
        if (pos >= in.size() || !std::isdigit(static_cast<unsigned char>(in[pos]))) fail("expected a number");
        std::uint64_t v = 0;
        while (pos < in.size() && std::isdigit(static_cast<unsigned char>(in[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(in[pos] - '0');
            ++pos;
        }
        return v;
    }
    Ord primary() {
        skip();
        if (eat("(")) {
            Ord e = expr();
            if (!eat(")")) fail("expected ')'");
            return e;
        }
        if (eat("omega") || eat("w")) {
            if (eat("^")) return ord_omega_pow(primary());
            return ord_omega();
        }
        return ord_nat(number());
    }
    Ord term() {
        Ord p = primary();
        while (eat("*")) p = ord_mul_nat(p, number());
        return p;
    }
    Ord expr() {
        Ord acc = term();
        while (eat("+")) acc = ord_add(acc, term());
        return acc;
    }
};

}  // namespace

Ord parse_ord(std::string_view text) {
    OrdParser p{text};
    Ord r = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

OrderHandle ordinals_below(Ord a) {
    OrderHandle o;
    o.kind = OrderKind::Ordinals;
    o.name = "ord<" + format_ord(a);
    o.carrier = [a](const Elem& e) { return e.is_ord() && ord_less(e.ord, a); };
    o.cmp = [](const Elem& x, const Elem& y) { return ord_compare(x.ord, y.ord); };
    o.show = [](const Elem& e) { return format_ord(e.ord); };
    o.parse = checked_parse(o.carrier, [](std::string_view t) { return Elem::of(parse_ord(t)); }, o.name);
    o.listing = [a] {
        // A finite sample: small naturals, a few familiar limits, and the
        // fundamental sequence of a with successors.
        std::vector<Ord> cand;
        for (std::uint64_t n = 0; n < 4; ++n) cand.push_back(ord_nat(n));
        for (const char* txt : {"w", "w+1", "w*2", "w^2", "w^2+w", "w^w"}) cand.push_back(parse_ord(txt));
        if (!ord_is_zero(a)) {
            for (std::uint64_t i = 0; i < 4; ++i) {
                Ord f = fundamental_seq(a, i);
                cand.push_back(f);
                cand.push_back(ord_add(f, ord_nat(1)));
            }
        }
        std::sort(cand.begin(), cand.end(), ord_less);
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<Elem> v;
        for (Ord c : cand) {
            if (ord_less(c, a)) v.push_back(Elem::of(c));
        }
        return v;
    };
    return o;
}

OrderHandle sum_order(Ord a, const OrderHandle& x) {
    OrderHandle o;
    o.kind = OrderKind::SumOrder;
    o.name = format_ord(a) + "+" + x.name;
    auto below = ordinals_below(a);
    o.carrier = [below, x](const Elem& e) { return e.is_ord() ? below.carrier(e) : x.carrier(e); };
    o.cmp = [x](const Elem& p, const Elem& q) {
        if (p.is_ord() && q.is_ord()) return ord_compare(p.ord, q.ord);
        if (p.is_ord()) return Cmp::LT;
        if (q.is_ord()) return Cmp::GT;
        return x.cmp(p, q);
    };
    o.show = [x](const Elem& e) { return e.is_ord() ? format_ord(e.ord) : "@" + x.show(e); };
    o.parse = [below, x](std::string_view t) {
        auto p = t.find_first_not_of(" \t");
        if (p != std::string_view::npos && t[p] == '@') return x.parse(t.substr(p + 1));
        return below.parse(t);
    };
    o.listing = [below, x] {
        auto v = below.listing();
        auto w = x.listing();
        v.insert(v.end(), w.begin(), w.end());
        return v;
    };
    return o;
}

}  // namespace oj
