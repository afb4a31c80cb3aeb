#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ordjump/order_core.hpp"

namespace oj {

// Cantor normal form w^{b_1}*c_1 + ... + w^{b_m}*c_m with b_1 > ... > b_m, c_i >= 1.
// Nodes are interned, so equal notations share one pointer.
struct OrdNode {
    std::vector<std::pair<const OrdNode*, std::uint64_t>> terms;
    std::size_t hash = 0;
};

using Ord = const OrdNode*;

Ord ord_zero();
Ord ord_nat(std::uint64_t n);
Ord ord_omega();
Ord ord_omega_pow(Ord e);
Ord ord_add(Ord a, Ord b);
Ord ord_mul_nat(Ord a, std::uint64_t k);

Cmp ord_compare(Ord a, Ord b);
inline bool ord_less(Ord a, Ord b) { return ord_compare(a, b) == Cmp::LT; }

bool ord_is_zero(Ord a);
bool ord_is_successor(Ord a);
bool ord_is_limit(Ord a);
Ord ord_pred(Ord a);  // requires a successor

// Nondecreasing a_i with sup(a_i + 1) = a. Domain error at 0.
Ord fundamental_seq(Ord a, std::uint64_t i);

std::string format_ord(Ord a);
// Grammar: sums of w^x*k, w, naturals and parentheses; `omega` is accepted for w.
Ord parse_ord(std::string_view text);

// The order of notations strictly below a.
OrderHandle ordinals_below(Ord a);
// The sum order a + X: notations below a, then the elements of X.
OrderHandle sum_order(Ord a, const OrderHandle& x);

}  // namespace oj
