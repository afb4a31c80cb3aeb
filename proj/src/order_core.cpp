#include "ordjump/order_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <unordered_set>

#include "json.hpp"

namespace oj {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_entries(const FiniteString& s) {
    std::size_t h = 0xcbf29ce484222325ULL ^ s.size();
    for (const auto& n : s) h = mix(h, n.hash());
    return h;
}

// Interned strings whose code does not fit in 64 bits.
class InternTable {
public:
    const StrNode* intern(const FiniteString& s) {
        StrNode probe{s, hash_entries(s)};
        std::lock_guard lock(mu_);
        auto it = set_.find(&probe);
        if (it != set_.end()) return *it;
        auto& slot = store_.emplace_back(std::make_unique<StrNode>(std::move(probe)));
        set_.insert(slot.get());
        return slot.get();
    }

private:
    struct H {
        std::size_t operator()(const StrNode* n) const { return n->hash; }
    };
    struct E {
        bool operator()(const StrNode* a, const StrNode* b) const {
            return a->hash == b->hash && a->entries == b->entries;
        }
    };
    std::mutex mu_;
    std::deque<std::unique_ptr<StrNode>> store_;
    std::unordered_set<const StrNode*, H, E> set_;
};

InternTable& table() {
    static InternTable t;
    return t;
}

using u128 = unsigned __int128;

// Cantor pairing plus one, if it fits in 64 bits.
std::optional<std::uint64_t> pair_succ(std::uint64_t a, std::uint64_t b) {
    u128 s = static_cast<u128>(a) + b;
    if (s >= (static_cast<u128>(1) << 33)) return std::nullopt;
    u128 v = s * (s + 1) / 2 + b + 1;
    if (v > UINT64_MAX) return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

std::uint64_t tri(std::uint64_t w) {
    return static_cast<std::uint64_t>(static_cast<u128>(w) * (w + 1) / 2);
}

// Inverse of z = pair(a, b).
std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t z) {
    auto w = static_cast<std::uint64_t>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
    while (static_cast<u128>(w + 1) * (w + 2) / 2 <= z) ++w;
    while (tri(w) > z) --w;
    std::uint64_t b = z - tri(w);
    return {w - b, b};
}

}  // namespace

std::size_t Nat::hash() const {
    if (node_ != nullptr) return node_->hash ^ 0x5bd1e995ULL;
    return std::hash<std::uint64_t>{}(small_);
}

std::strong_ordering operator<=>(const Nat& a, const Nat& b) {
    if (a.is_small() && b.is_small()) return a.small_ <=> b.small_;
    if (a.is_small()) return std::strong_ordering::less;
    if (b.is_small()) return std::strong_ordering::greater;
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    // Both codes exceed 2^64: order by length, then entrywise.
    const auto& x = a.node_->entries;
    const auto& y = b.node_->entries;
    if (x.size() != y.size()) return x.size() <=> y.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto c = x[i] <=> y[i];
        if (c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::string cmp_name(Cmp c) {
    switch (c) {
        case Cmp::LT: return "LT";
        case Cmp::EQ: return "EQ";
        case Cmp::GT: return "GT";
    }
    return "?";
}

std::size_t StringHash::operator()(const FiniteString& s) const { return hash_entries(s); }

std::size_t Elem::hash() const {
    if (ord != nullptr) return std::hash<const void*>{}(ord) ^ 0x2545f491ULL;
    return nat.hash();
}

SeqCode encode_string(const FiniteString& s) {
    std::uint64_t c = 0;
    for (const auto& n : s) {
        std::optional<std::uint64_t> next;
        if (n.is_small()) next = pair_succ(c, n.small());
        if (!next) return Nat::from_node(table().intern(s));
        c = *next;
    }
    return Nat{c};
}

FiniteString decode_string(const SeqCode& c) {
    if (!c.is_small()) return c.node()->entries;
    FiniteString out;
    std::uint64_t z = c.small();
    while (z != 0) {
        auto [a, b] = unpair(z - 1);
        out.emplace_back(b);
        z = a;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

FiniteString last_singleton(const FiniteString& s) {
    if (s.empty()) throw DomainError("last_singleton: empty string");
    return FiniteString{s.back()};
}

FiniteString prefix(const FiniteString& s, std::size_t t) {
    if (t >= s.size()) return s;
    return FiniteString(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(t));
}

bool is_prefix(const FiniteString& a, const FiniteString& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

FiniteString append(FiniteString s, const Nat& n) {
    s.push_back(n);
    return s;
}

Cmp kb_compare(const FiniteString& a, const FiniteString& b) {
    std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] != b[i]) return to_cmp(a[i] <=> b[i]);
    }
    // One extends the other; the longer one sits lower.
    if (a.size() == b.size()) return Cmp::EQ;
    return a.size() > b.size() ? Cmp::LT : Cmp::GT;
}

std::string format_nat(const Nat& n) {
    if (n.is_small()) return std::to_string(n.small());
    return "code" + format_string(n.node()->entries);
}

std::string format_string(const FiniteString& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += format_nat(s[i]);
    }
    out += ']';
    return out;
}

namespace {

struct StrParser {
    std::string_view in;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("parse error at " + std::to_string(pos) + ": " + what);
    }
    void skip() {
        while (pos < in.size() && std::isspace(static_cast<unsigned char>(in[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < in.size() && in[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    Nat nat() {
        skip();
        if (in.substr(pos, 4) == "code") {
            pos += 4;
            return encode_string(string());
        }
        if (pos >= in.size() || !std::isdigit(static_cast<unsigned char>(in[pos]))) fail("expected a natural");
        u128 v = 0;
        while (pos < in.size() && std::isdigit(static_cast<unsigned char>(in[pos]))) {
            v = v * 10 + static_cast<unsigned>(in[pos] - '0');
            if (v > UINT64_MAX) fail("natural out of range");
            ++pos;
        }
        return Nat{static_cast<std::uint64_t>(v)};
    }
    FiniteString string() {
        if (!eat('[')) fail("expected '['");
        FiniteString s;
        if (eat(']')) return s;
        do {
            s.push_back(nat());
        } while (eat(','));
        if (!eat(']')) fail("expected ']'");
        return s;
    }
};

}  // namespace

FiniteString parse_string(std::string_view text) {
    StrParser p{text};
    auto s = p.string();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return s;
}

Nat parse_nat(std::string_view text) {
    StrParser p{text};
    auto n = p.nat();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return n;
}

FiniteString StreamHandle::take(std::size_t n) const {
    FiniteString s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(at(i));
    return s;
}

StreamHandle constant_stream(Nat v) {
    return StreamHandle{[v](std::size_t) { return v; }};
}

// ---- trees -----------------------------------------------------------------

namespace {

std::vector<FiniteString> sorted_unique(std::vector<FiniteString> v) {
    std::sort(v.begin(), v.end(), [](const FiniteString& a, const FiniteString& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

Tree full_tree(std::uint64_t arity, std::size_t depth_bound) {
    Tree t;
    t.depth_bound = depth_bound;
    t.member = [arity](const FiniteString& s) {
        return std::all_of(s.begin(), s.end(), [&](const Nat& n) { return n < Nat{arity}; });
    };
    t.enumerate = [arity, depth_bound](std::size_t max_len) {
        std::size_t lim = std::min(max_len, depth_bound);
        std::vector<FiniteString> out{FiniteString{}};
        std::size_t begin = 0;
        for (std::size_t len = 0; len < lim; ++len) {
            std::size_t end = out.size();
            for (std::size_t i = begin; i < end; ++i) {
                for (std::uint64_t c = 0; c < arity; ++c) out.push_back(append(out[i], Nat{c}));
            }
            begin = end;
        }
        return out;
    };
    return t;
}

Tree path_tree(const StreamHandle& z, std::size_t depth_bound) {
    Tree t;
    t.depth_bound = depth_bound;
    t.member = [z](const FiniteString& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != z.at(i)) return false;
        }
        return true;
    };
    t.enumerate = [z, depth_bound](std::size_t max_len) {
        std::vector<FiniteString> out;
        std::size_t lim = std::min(max_len, depth_bound);
        for (std::size_t n = 0; n <= lim; ++n) out.push_back(z.take(n));
        return out;
    };
    return t;
}

Tree finite_tree(std::vector<FiniteString> nodes) {
    std::vector<FiniteString> closed;
    for (const auto& n : nodes) {
        for (std::size_t t = 0; t <= n.size(); ++t) closed.push_back(prefix(n, t));
    }
    if (closed.empty()) closed.emplace_back();
    auto all = std::make_shared<const std::vector<FiniteString>>(sorted_unique(std::move(closed)));
    auto set = std::make_shared<std::unordered_set<FiniteString, StringHash>>(all->begin(), all->end());
    std::size_t depth = 0;
    for (const auto& n : *all) depth = std::max(depth, n.size());
    Tree t;
    t.depth_bound = depth;
    t.member = [set](const FiniteString& s) { return set->count(s) > 0; };
    t.enumerate = [all](std::size_t max_len) {
        std::vector<FiniteString> out;
        for (const auto& n : *all) {
            if (n.size() <= max_len) out.push_back(n);
        }
        return out;
    };
    return t;
}

Tree tree_restrict(const Tree& t, const FiniteString& s) {
    Tree r;
    r.depth_bound = t.depth_bound;
    auto keep = [s](const FiniteString& rho) { return is_prefix(rho, s) || is_prefix(s, rho); };
    r.member = [t, keep](const FiniteString& rho) { return keep(rho) && t.member(rho); };
    r.enumerate = [t, keep](std::size_t max_len) {
        std::vector<FiniteString> out;
        for (auto& n : t.enumerate(max_len)) {
            if (keep(n)) out.push_back(std::move(n));
        }
        return out;
    };
    return r;
}

bool is_prefix_closed(const Tree& t, std::size_t max_len) {
    for (const auto& n : t.enumerate(max_len)) {
        if (!t.member(n)) return false;
        for (std::size_t k = 0; k < n.size(); ++k) {
            if (!t.member(prefix(n, k))) return false;
        }
    }
    return true;
}

std::string dump_tree_json(const Tree& t, std::size_t depth) {
    auto nodes = sorted_unique(t.enumerate(depth));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : nodes) {
        if (n.size() > depth || !t.member(n)) continue;
        nlohmann::json row = nlohmann::json::array();
        for (const auto& e : n) {
            if (e.is_small()) {
                row.push_back(e.small());
            } else {
                row.push_back(format_nat(e));
            }
        }
        arr.push_back(std::move(row));
    }
    nlohmann::json doc;
    doc["nodes"] = std::move(arr);
    return doc.dump();
}

Tree parse_tree_json(std::string_view json) {
    auto doc = nlohmann::json::parse(json);
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw std::invalid_argument("tree json: expected {\"nodes\": [...]}");
    }
    std::vector<FiniteString> nodes;
    for (const auto& row : doc["nodes"]) {
        if (!row.is_array()) throw std::invalid_argument("tree json: node must be an array");
        FiniteString s;
        for (const auto& e : row) {
            if (e.is_number_unsigned()) {
                s.emplace_back(e.get<std::uint64_t>());
            } else if (e.is_string()) {
                s.push_back(parse_nat(e.get<std::string>()));
            } else {
                throw std::invalid_argument("tree json: entries must be naturals");
            }
        }
        nodes.push_back(std::move(s));
    }
    return finite_tree(std::move(nodes));
}

FiniteString kb_descending_to_path(const Tree& t, const std::function<FiniteString(std::size_t)>& f,
                                   std::size_t fuel) {
    std::vector<FiniteString> seen;
    seen.reserve(fuel);
    for (std::size_t k = 0; k < fuel; ++k) {
        auto v = f(k);
        if (!t.member(v)) throw ContractError("kb_descending_to_path: value outside the tree");
        if (!seen.empty() && kb_compare(v, seen.back()) != Cmp::LT) {
            throw ContractError("kb_descending_to_path: sequence is not KB-descending at " + std::to_string(k));
        }
        seen.push_back(std::move(v));
    }
    // rho is strictly left of s: they split and rho is smaller at the split.
    auto left_of = [](const FiniteString& rho, const FiniteString& s) {
        std::size_t m = std::min(rho.size(), s.size());
        for (std::size_t i = 0; i < m; ++i) {
            if (rho[i] != s[i]) return rho[i] < s[i];
        }
        return false;
    };
    FiniteString best;
    for (std::size_t k = 0; k < seen.size(); ++k) {
        FiniteString cand = prefix(seen[k], fuel);
        // Shrink until no later value lies to the left.
        for (std::size_t j = k + 1; j < seen.size(); ++j) {
            while (!cand.empty() && left_of(seen[j], cand)) cand.pop_back();
        }
        if (cand.size() > best.size()) best = std::move(cand);
    }
    return best;
}

// ---- orders ----------------------------------------------------------------

std::function<Elem(std::string_view)> checked_parse(std::function<bool(const Elem&)> carrier,
                                                   std::function<Elem(std::string_view)> read, std::string name) {
    return [carrier = std::move(carrier), read = std::move(read), name = std::move(name)](std::string_view t) {
        Elem e = read(t);
        if (!carrier(e)) throw DomainError(std::string(t) + " is not an element of " + name);
        return e;
    };
}

OrderHandle empty_order() {
    OrderHandle o;
    o.kind = OrderKind::Empty;
    o.name = "empty";
    o.carrier = [](const Elem&) { return false; };
    o.cmp = [](const Elem&, const Elem&) -> Cmp { throw DomainError("empty order has no elements"); };
    o.show = [](const Elem& e) { return format_nat(e.nat); };
    o.parse = [](std::string_view) -> Elem { throw DomainError("empty order has no elements"); };
    o.listing = [] { return std::vector<Elem>{}; };
    return o;
}

OrderHandle fin_order(std::uint64_t k) {
    OrderHandle o;
    o.kind = OrderKind::Fin;
    o.size = k;
    o.name = "fin:" + std::to_string(k);
    o.carrier = [k](const Elem& e) { return !e.is_ord() && e.nat < Nat{k}; };
    o.cmp = [](const Elem& a, const Elem& b) { return to_cmp(a.nat <=> b.nat); };
    o.show = [](const Elem& e) { return format_nat(e.nat); };
    o.parse = checked_parse(o.carrier, [](std::string_view t) { return Elem::of(parse_nat(t)); }, o.name);
    o.listing = [k] {
        std::vector<Elem> v;
        for (std::uint64_t i = 0; i < k; ++i) v.push_back(Elem::of(Nat{i}));
        return v;
    };
    return o;
}

OrderHandle nat_order(std::uint64_t sample_bound) {
    OrderHandle o;
    o.kind = OrderKind::Nat;
    o.name = "nat";
    o.carrier = [](const Elem& e) { return !e.is_ord() && e.nat.is_small(); };
    o.cmp = [](const Elem& a, const Elem& b) { return to_cmp(a.nat <=> b.nat); };
    o.show = [](const Elem& e) { return format_nat(e.nat); };
    o.parse = checked_parse(o.carrier, [](std::string_view t) { return Elem::of(parse_nat(t)); }, o.name);
    o.listing = [sample_bound] {
        std::vector<Elem> v;
        for (std::uint64_t i = 0; i < sample_bound; ++i) v.push_back(Elem::of(Nat{i}));
        return v;
    };
    return o;
}

OrderHandle kb_tree_order(const Tree& t, std::size_t depth) {
    OrderHandle o;
    o.kind = OrderKind::KbTree;
    o.name = "kbtree";
    o.carrier = [t](const Elem& e) { return !e.is_ord() && t.member(decode_string(e.nat)); };
    o.cmp = [](const Elem& a, const Elem& b) {
        if (a.nat == b.nat) return Cmp::EQ;
        return kb_compare(decode_string(a.nat), decode_string(b.nat));
    };
    o.show = [](const Elem& e) { return format_string(decode_string(e.nat)); };
    // A bracketed string is a tree node; a bare natural is read as its code.
    o.parse = checked_parse(
        o.carrier,
        [](std::string_view t) {
            auto p = t.find_first_not_of(" \t");
            if (p != std::string_view::npos && t[p] == '[') return Elem::of(encode_string(parse_string(t)));
            return Elem::of(parse_nat(t));
        },
        o.name);
    o.listing = [t, depth] {
        std::vector<Elem> v;
        for (const auto& n : t.enumerate(depth)) v.push_back(Elem::of(encode_string(n)));
        return v;
    };
    return o;
}

}  // namespace oj
