#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oj {

struct StrNode;

// A natural number that may be the code of a finite string.
// Codes below 2^64 are stored as machine words; larger codes are kept
// symbolically as a pointer to the interned string they encode.
class Nat {
public:
    constexpr Nat() = default;
    constexpr Nat(std::uint64_t v) : small_(v) {}  // NOLINT(google-explicit-constructor)

    static Nat from_node(const StrNode* n) {
        Nat r;
        r.node_ = n;
        return r;
    }

    [[nodiscard]] bool is_small() const { return node_ == nullptr; }
    [[nodiscard]] std::uint64_t small() const { return small_; }
    [[nodiscard]] const StrNode* node() const { return node_; }
    [[nodiscard]] std::size_t hash() const;

    friend bool operator==(const Nat& a, const Nat& b) {
        return a.node_ == b.node_ && (a.node_ != nullptr || a.small_ == b.small_);
    }
    friend std::strong_ordering operator<=>(const Nat& a, const Nat& b);

private:
    std::uint64_t small_ = 0;
    const StrNode* node_ = nullptr;
};

using FiniteString = std::vector<Nat>;
using SeqCode = Nat;

struct StrNode {
    FiniteString entries;
    std::size_t hash = 0;
};

enum class Cmp { LT = -1, EQ = 0, GT = 1 };

inline Cmp to_cmp(std::strong_ordering o) {
    if (o < 0) return Cmp::LT;
    if (o > 0) return Cmp::GT;
    return Cmp::EQ;
}
inline Cmp flip(Cmp c) { return static_cast<Cmp>(-static_cast<int>(c)); }
std::string cmp_name(Cmp c);

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

struct StringHash {
    std::size_t operator()(const FiniteString& s) const;
};

// ---- strings ---------------------------------------------------------------

SeqCode encode_string(const FiniteString& s);
FiniteString decode_string(const SeqCode& c);

FiniteString last_singleton(const FiniteString& s);
FiniteString prefix(const FiniteString& s, std::size_t t);
bool is_prefix(const FiniteString& a, const FiniteString& b);  // a ⊆ b
FiniteString append(FiniteString s, const Nat& n);

Cmp kb_compare(const FiniteString& a, const FiniteString& b);

std::string format_nat(const Nat& n);
std::string format_string(const FiniteString& s);
// Accepts `[1,2,5]`, with entries either decimal or `code[...]`.
FiniteString parse_string(std::string_view text);
Nat parse_nat(std::string_view text);

// ---- streams ---------------------------------------------------------------

struct StreamHandle {
    std::function<Nat(std::size_t)> at;
    FiniteString take(std::size_t n) const;
};

StreamHandle constant_stream(Nat v);

// ---- trees -----------------------------------------------------------------

struct Tree {
    std::function<bool(const FiniteString&)> member;
    // All members of length <= max_len that the enumeration reaches.
    std::function<std::vector<FiniteString>(std::size_t max_len)> enumerate;
    std::size_t depth_bound = 0;

    bool contains(const FiniteString& s) const { return member(s); }
};

Tree full_tree(std::uint64_t arity, std::size_t depth_bound);
Tree path_tree(const StreamHandle& z, std::size_t depth_bound);
Tree finite_tree(std::vector<FiniteString> nodes);  // prefix closure is taken
Tree tree_restrict(const Tree& t, const FiniteString& s);
bool is_prefix_closed(const Tree& t, std::size_t max_len);

std::string dump_tree_json(const Tree& t, std::size_t depth);
Tree parse_tree_json(std::string_view json);

FiniteString kb_descending_to_path(const Tree& t,
                                   const std::function<FiniteString(std::size_t)>& f,
                                   std::size_t fuel);

// ---- linear orders ----------------------------------------------------------

struct OrdNode;

// An element of a base order: a natural number, or an ordinal notation.
struct Elem {
    const OrdNode* ord = nullptr;
    Nat nat{};

    static Elem of(Nat n) { return Elem{nullptr, n}; }
    static Elem of(const OrdNode* o) { return Elem{o, Nat{}}; }
    [[nodiscard]] bool is_ord() const { return ord != nullptr; }

    friend bool operator==(const Elem& a, const Elem& b) {
        return a.ord == b.ord && (a.ord != nullptr || a.nat == b.nat);
    }
    [[nodiscard]] std::size_t hash() const;
};

enum class OrderKind { Empty, Fin, Nat, KbTree, Ordinals, SumOrder, Term };

struct OrderHandle {
    OrderKind kind = OrderKind::Empty;
    std::uint64_t size = 0;  // for Fin
    std::string name;
    std::function<bool(const Elem&)> carrier;
    std::function<Cmp(const Elem&, const Elem&)> cmp;
    std::function<std::string(const Elem&)> show;
    // Inverse of show; throws DomainError for text outside the carrier.
    std::function<Elem(std::string_view)> parse;
    // Optional finite listing, used by enumerators and samplers.
    std::function<std::vector<Elem>()> listing;
};

// Wraps a reader so that results outside the carrier raise DomainError.
std::function<Elem(std::string_view)> checked_parse(std::function<bool(const Elem&)> carrier,
                                                   std::function<Elem(std::string_view)> read, std::string name);

OrderHandle empty_order();
OrderHandle fin_order(std::uint64_t k);
OrderHandle nat_order(std::uint64_t sample_bound = 16);
OrderHandle kb_tree_order(const Tree& t, std::size_t depth);

}  // namespace oj

template <>
struct std::hash<oj::Nat> {
    std::size_t operator()(const oj::Nat& n) const { return n.hash(); }
};
template <>
struct std::hash<oj::Elem> {
    std::size_t operator()(const oj::Elem& e) const { return e.hash(); }
};
