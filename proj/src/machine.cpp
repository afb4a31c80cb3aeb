#include "ordjump/machine.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace oj {

namespace {

constexpr std::int64_t kMaxOffset = 3;
constexpr std::int64_t kMaxConst = 3;
constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

// The instruction alphabet, in digit order starting at 2.
const std::vector<Instr>& alphabet() {
    static const std::vector<Instr> table = [] {
        std::vector<Instr> t;
        for (int r = 0; r < kRegisters; ++r) t.push_back({Op::Halt, static_cast<std::uint8_t>(r), 0, 0});
        for (int d = 0; d < kRegisters; ++d) {
            for (int p = 0; p < kRegisters; ++p) {
                t.push_back({Op::Query, static_cast<std::uint8_t>(d), static_cast<std::uint8_t>(p), 0});
            }
        }
        for (int r = 0; r < kRegisters; ++r) {
            for (std::int64_t off = -kMaxOffset; off <= kMaxOffset; ++off) {
                t.push_back({Op::Jz, static_cast<std::uint8_t>(r), 0, off});
            }
        }
        for (int r = 0; r < kRegisters; ++r) {
            for (std::int64_t c = 0; c <= kMaxConst; ++c) t.push_back({Op::LoadI, static_cast<std::uint8_t>(r), 0, c});
        }
        for (Op op : {Op::Mov, Op::Add, Op::Monus}) {
            for (int a = 0; a < kRegisters; ++a) {
                for (int b = 0; b < kRegisters; ++b) {
                    t.push_back({op, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), 0});
                }
            }
        }
        return t;
    }();
    return table;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

}  // namespace

std::uint64_t isa_size() { return alphabet().size() + 1; }

Instr digit_instr(std::uint64_t digit) {
    if (digit < 2 || digit > isa_size()) throw DomainError("digit_instr: not an instruction digit");
    return alphabet()[digit - 2];
}

std::uint64_t instr_digit(const Instr& ins) {
    const auto& t = alphabet();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == ins) return i + 2;
    }
    throw DomainError("instr_digit: instruction outside the alphabet");
}

// Bijective base-N numeration, least significant digit first; digit 1 is a pad.
Program decode_program(std::uint64_t e) {
    const std::uint64_t n = isa_size();
    Program p;
    while (e > 0) {
        std::uint64_t d = (e - 1) % n + 1;
        e = (e - d) / n;
        if (d != 1) p.push_back(digit_instr(d));
    }
    return p;
}

std::optional<std::uint64_t> program_index(const Program& p) {
    const std::uint64_t n = isa_size();
    unsigned __int128 e = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        e = e * n + instr_digit(*it);
        if (e > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    return static_cast<std::uint64_t>(e);
}

std::optional<std::uint64_t> pad_index(std::uint64_t e) {
    // Put a pad digit above the most significant one.
    const std::uint64_t n = isa_size();
    unsigned __int128 place = 1;
    std::uint64_t rest = e;
    while (rest > 0) {
        std::uint64_t d = (rest - 1) % n + 1;
        rest = (rest - d) / n;
        place *= n;
    }
    unsigned __int128 r = static_cast<unsigned __int128>(e) + place;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(r);
}

std::string format_program(const Program& p) {
    std::ostringstream os;
    os << '<';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << "; ";
        const auto& ins = p[i];
        int a = ins.a;
        int b = ins.b;
        switch (ins.op) {
            case Op::LoadI: os << "LOADI r" << a << ' ' << ins.imm; break;
            case Op::Mov: os << "MOV r" << a << " r" << b; break;
            case Op::Add: os << "ADD r" << a << " r" << b; break;
            case Op::Monus: os << "MONUS r" << a << " r" << b; break;
            case Op::Jz: os << "JZ r" << a << ' ' << ins.imm; break;
            case Op::Query: os << "QUERY r" << a << " r" << b; break;
            case Op::Halt: os << "HALT r" << a; break;
        }
    }
    os << '>';
    return os.str();
}

RunOutcome run_program(const Program& p, std::uint64_t input, const FiniteString& sigma, std::uint64_t bound) {
    const std::uint64_t budget = std::min<std::uint64_t>(bound, sigma.size());
    std::array<std::uint64_t, kRegisters> reg{};
    reg[1] = input;  // r0 starts at zero, the input sits in r1
    std::size_t pc = 0;
    for (std::uint64_t step = 1; step <= budget; ++step) {
        if (pc >= p.size()) continue;  // ran off the end: idle forever
        const Instr& ins = p[pc];
        switch (ins.op) {
            case Op::LoadI: reg[ins.a] = static_cast<std::uint64_t>(ins.imm); ++pc; break;
            case Op::Mov: reg[ins.a] = reg[ins.b]; ++pc; break;
            case Op::Add: reg[ins.a] = sat_add(reg[ins.a], reg[ins.b]); ++pc; break;
            case Op::Monus: reg[ins.a] = reg[ins.a] > reg[ins.b] ? reg[ins.a] - reg[ins.b] : 0; ++pc; break;
            case Op::Jz: {
                if (reg[ins.a] == 0) {
                    auto target = static_cast<std::int64_t>(pc) + ins.imm;
                    if (target < 0) target = 0;
                    if (target >= static_cast<std::int64_t>(p.size())) target = static_cast<std::int64_t>(p.size()) - 1;
                    pc = static_cast<std::size_t>(target);
                } else {
                    ++pc;
                }
                break;
            }
            case Op::Query: {
                std::uint64_t pos = reg[ins.b];
                if (pos >= sigma.size()) return {RunOutcome::Status::OracleExhausted, step, 0};
                const Nat& v = sigma[pos];
                reg[ins.a] = v.is_small() ? v.small() : std::numeric_limits<std::uint64_t>::max();
                ++pc;
                break;
            }
            case Op::Halt:
                if (step < budget) return {RunOutcome::Status::Halted, step, reg[ins.a]};
                return {RunOutcome::Status::StillRunning, step, 0};
        }
    }
    return {RunOutcome::Status::StillRunning, budget, 0};
}

RunOutcome run(std::uint64_t e, std::uint64_t input, const FiniteString& sigma, std::uint64_t bound) {
    return run_program(decode_program(e), input, sigma, bound);
}

DiagonalSemantics universal_semantics() {
    DiagonalSemantics s;
    s.name = "universal";
    s.conv = [](std::uint64_t n, const FiniteString& sigma) {
        return run(n, n, sigma, sigma.size()).status == RunOutcome::Status::Halted;
    };
    return s;
}

DiagonalSemantics diverge_semantics() {
    DiagonalSemantics s;
    s.name = "diverge";
    s.conv = [](std::uint64_t, const FiniteString&) { return false; };
    s.settle_bound = [](std::uint64_t) -> std::optional<std::size_t> { return 0; };
    return s;
}

DiagonalSemantics threshold_semantics(std::map<std::uint64_t, std::uint64_t> b, std::optional<std::uint64_t> fallback_b,
                                      std::string name) {
    auto table = std::make_shared<const std::map<std::uint64_t, std::uint64_t>>(std::move(b));
    auto lookup = [table, fallback_b](std::uint64_t n) -> std::optional<std::uint64_t> {
        auto it = table->find(n);
        if (it != table->end()) return it->second;
        return fallback_b;
    };
    DiagonalSemantics s;
    s.name = std::move(name);
    s.conv = [lookup](std::uint64_t n, const FiniteString& sigma) {
        auto t = lookup(n);
        return t.has_value() && sigma.size() >= *t;
    };
    s.settle_bound = [lookup](std::uint64_t n) -> std::optional<std::size_t> {
        auto t = lookup(n);
        return (t && *t != kNever) ? static_cast<std::size_t>(*t) : 0;
    };
    return s;
}

DiagonalSemantics semantics_from_json(const std::string& json_text, const std::string& name) {
    auto doc = nlohmann::json::parse(json_text);
    if (!doc.is_object() || !doc.contains("kind")) throw std::invalid_argument("semantics json: missing \"kind\"");
    const auto kind = doc["kind"].get<std::string>();
    if (kind == "diverge") {
        auto s = diverge_semantics();
        s.name = name;
        return s;
    }
    if (kind == "universal") {
        auto s = universal_semantics();
        s.name = name;
        return s;
    }
    if (kind == "explicit") {
        // conv(n, sigma) holds exactly for the listed strings; nothing forces the list to be upward closed.
        auto table = std::make_shared<std::map<std::uint64_t, std::set<FiniteString>>>();
        if (doc.contains("conv")) {
            for (const auto& [key, val] : doc["conv"].items()) {
                auto& slot = (*table)[std::stoull(key)];
                for (const auto& str : val) slot.insert(parse_string(str.get<std::string>()));
            }
        }
        DiagonalSemantics s;
        s.name = name;
        s.conv = [table](std::uint64_t n, const FiniteString& sigma) {
            auto it = table->find(n);
            return it != table->end() && it->second.count(sigma) > 0;
        };
        return s;
    }
    if (kind != "threshold") throw std::invalid_argument("semantics json: unknown kind " + kind);
    std::map<std::uint64_t, std::uint64_t> b;
    std::optional<std::uint64_t> fallback;
    if (doc.contains("b")) {
        for (const auto& [key, val] : doc["b"].items()) {
            std::optional<std::uint64_t> v;
            if (val.is_string()) {
                if (val.get<std::string>() != "never") throw std::invalid_argument("semantics json: bad value for " + key);
            } else if (val.is_number_unsigned()) {
                v = val.get<std::uint64_t>();
            } else {
                throw std::invalid_argument("semantics json: bad value for " + key);
            }
            if (key == "default") {
                fallback = v;
            } else {
                std::size_t used = 0;
                std::uint64_t n = std::stoull(key, &used);
                if (used != key.size()) throw std::invalid_argument("semantics json: bad key " + key);
                b[n] = v ? *v : kNever;
            }
        }
    }
    return threshold_semantics(std::move(b), fallback, name);
}

DiagonalSemantics semantics_from_selector(const std::string& selector) {
    if (selector == "universal") return universal_semantics();
    if (selector == "diverge") return diverge_semantics();
    if (selector.rfind("table:", 0) == 0) {
        std::string path = selector.substr(6);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open semantics file " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return semantics_from_json(buf.str(), selector);
    }
    throw std::invalid_argument("unknown semantics selector: " + selector);
}

bool diag_converges(const DiagonalSemantics& s, std::uint64_t n, const FiniteString& sigma) { return s.conv(n, sigma); }

std::size_t mu_stage(const DiagonalSemantics& s, std::uint64_t n, const FiniteString& sigma, std::size_t t_prev) {
    // conv is prefix-monotone, so a miss on the whole string settles it.
    if (!s.conv(n, sigma)) return t_prev + 1;
    for (std::size_t t = 1; t <= sigma.size(); ++t) {
        if (s.conv(n, prefix(sigma, t))) return std::max(t_prev + 1, t);
    }
    return t_prev + 1;
}

std::optional<std::string> check_monotone(const DiagonalSemantics& s, std::uint64_t arity, std::size_t max_len,
                                          std::uint64_t n_bound) {
    auto strings = full_tree(arity, max_len).enumerate(max_len);
    for (const auto& rho : strings) {
        for (std::uint64_t n = 0; n < n_bound; ++n) {
            bool later = s.conv(n, rho);
            for (std::size_t t = 0; t < rho.size(); ++t) {
                if (s.conv(n, prefix(rho, t)) && !later) {
                    return "monotonicity violated: n=" + std::to_string(n) + " sigma=" +
                           format_string(prefix(rho, t)) + " rho=" + format_string(rho);
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace oj
