#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ordjump/order_core.hpp"

namespace oj {

enum class Op : std::uint8_t { LoadI, Mov, Add, Monus, Jz, Query, Halt };

struct Instr {
    Op op = Op::Halt;
    std::uint8_t a = 0;  // register
    std::uint8_t b = 0;  // register (Mov, Add, Monus, Query)
    std::int64_t imm = 0;  // constant (LoadI) or offset (Jz)

    friend bool operator==(const Instr&, const Instr&) = default;
};

using Program = std::vector<Instr>;

inline constexpr int kRegisters = 8;

// Size of the digit alphabet; digit 1 is padding, digits 2.. are instructions.
std::uint64_t isa_size();
Instr digit_instr(std::uint64_t digit);  // digit in [2, isa_size()]
std::uint64_t instr_digit(const Instr& ins);

Program decode_program(std::uint64_t e);
std::optional<std::uint64_t> program_index(const Program& p);  // nullopt when it overflows
std::optional<std::uint64_t> pad_index(std::uint64_t e);
std::string format_program(const Program& p);

struct RunOutcome {
    enum class Status { Halted, StillRunning, OracleExhausted };
    Status status = Status::StillRunning;
    std::uint64_t steps = 0;
    std::uint64_t value = 0;

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

RunOutcome run_program(const Program& p, std::uint64_t input, const FiniteString& sigma, std::uint64_t bound);
RunOutcome run(std::uint64_t e, std::uint64_t input, const FiniteString& sigma, std::uint64_t bound);

// The diagonal predicate "machine n on input n halts with oracle sigma".
struct DiagonalSemantics {
    std::string name;
    std::function<bool(std::uint64_t n, const FiniteString& sigma)> conv;
    // When present: if conv(n, rho) ever holds along a real, it already holds
    // at the prefix of this length. Lets stream approximations certify
    // that a fallback stage is final.
    std::function<std::optional<std::size_t>(std::uint64_t n)> settle_bound;
};

DiagonalSemantics universal_semantics();
DiagonalSemantics diverge_semantics();
// b[n] = least length at which n converges; missing entries use fallback_b
// (nullopt means never).
DiagonalSemantics threshold_semantics(std::map<std::uint64_t, std::uint64_t> b,
                                      std::optional<std::uint64_t> fallback_b, std::string name = "threshold");
DiagonalSemantics semantics_from_json(const std::string& json_text, const std::string& name = "table");
DiagonalSemantics semantics_from_selector(const std::string& selector);  // universal|diverge|table:<file>

bool diag_converges(const DiagonalSemantics& s, std::uint64_t n, const FiniteString& sigma);
std::size_t mu_stage(const DiagonalSemantics& s, std::uint64_t n, const FiniteString& sigma, std::size_t t_prev);

// Checks conv(n, sigma) => conv(n, rho) for sigma ⊆ rho over {0..arity-1}, lengths <= max_len, n < n_bound.
// Returns a description of the first violation.
std::optional<std::string> check_monotone(const DiagonalSemantics& s, std::uint64_t arity, std::size_t max_len,
                                          std::uint64_t n_bound);

}  // namespace oj
