// ordjump: term calculator, jump evaluator and verification runner.
// Exit codes: 0 success, 1 a checked property failed, 2 usage or parse error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ordjump/descent.hpp"
#include "ordjump/jump.hpp"
#include "ordjump/machine.hpp"
#include "ordjump/ordinal_terms.hpp"
#include "ordjump/verify.hpp"

using namespace oj;
using nlohmann::json;

namespace {

constexpr std::size_t kDefaultKbDepth = 8;
constexpr std::size_t kPrintLimit = 4000;  // larger witness terms are summarized

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad " + what + ": " + s);
    }
}

// empty | fin:k | nat | kbtree:<json> | kbtree:@file | below:<ordinal>
OrderHandle order_from_selector(const std::string& sel) {
    if (sel == "empty") return empty_order();
    if (sel == "nat") return nat_order();
    if (sel.rfind("fin:", 0) == 0) return fin_order(to_u64(sel.substr(4), "fin size"));
    if (sel.rfind("below:", 0) == 0) return ordinals_below(parse_ord(sel.substr(6)));
    if (sel.rfind("kbtree:", 0) == 0) {
        std::string body = sel.substr(7);
        if (!body.empty() && body[0] == '@') body = read_file(body.substr(1));
        Tree t = parse_tree_json(body);
        return kb_tree_order(t, t.depth_bound ? t.depth_bound : kDefaultKbDepth);
    }
    throw UsageError("unknown order selector: " + sel);
}

StreamHandle stream_from_selector(const std::string& sel) {
    if (sel.rfind("const:", 0) == 0) return constant_stream(Nat{to_u64(sel.substr(6), "constant")});
    throw UsageError("unknown real selector (expected const:<n>): " + sel);
}

// "0" is the plain jump, "omega" or "w" the w-jump, "w^a" the w^a-jump.
Ord level_exponent(const std::string& text) {
    if (text == "0") return ord_zero();
    if (text == "omega" || text == "w") return ord_nat(1);
    if (text.rfind("w^", 0) == 0) {
        std::string rest = text.substr(2);
        if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        return parse_ord(rest);
    }
    throw UsageError("level must be 0, omega or w^a: " + text);
}

json string_json(const FiniteString& s) {
    json row = json::array();
    for (const auto& e : s) {
        if (e.is_small()) {
            row.push_back(e.small());
        } else {
            row.push_back(format_nat(e));
        }
    }
    return row;
}

std::string show_term(const TermSystem& sys, Term t) {
    if (t->size > kPrintLimit) return "<term with " + std::to_string(t->size) + " nodes>";
    return format_term(sys, t);
}

void emit(bool as_json, const json& doc, const std::string& text) {
    if (as_json) {
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << text;
    }
}

struct Common {
    std::string semantics = "diverge";
    std::string order = "nat";
    bool json_out = false;
};

// ---- term commands ------------------------------------------------------------

struct TermOpts {
    std::string y = "below:w";
};

std::optional<Term> try_parse(const TermSystem& sys, const std::string& text, std::string& err) {
    try {
        return parse_term(sys, text);
    } catch (const std::invalid_argument& e) {
        err = e.what();
    } catch (const ContractError& e) {
        err = e.what();
    }
    return std::nullopt;
}

int cmd_normalize(const Common& c, const TermOpts& o, const std::string& text) {
    auto x = order_from_selector(c.order);
    TermSystem eps = eps_system(x), phi = phi_system(order_from_selector(o.y), x);
    std::string err;
    const TermSystem* sys = &eps;
    auto t = try_parse(eps, text, err);
    if (!t) {
        std::string err2;
        sys = &phi;
        t = try_parse(phi, text, err2);
        if (!t) throw UsageError(err);
    }
    Term n = normalize(*sys, *t);
    std::string out = format_term(*sys, n);
    json doc{{"command", "normalize"}, {"order", c.order}, {"input", text}, {"normal_form", out},
             {"system", sys->kind == TermSystem::Kind::Eps ? "eps" : "phi"}};
    emit(c.json_out, doc, out + "\n");
    return 0;
}

int cmd_compare(const Common& c, const TermOpts& o, const std::vector<std::string>& args) {
    if (args.size() != 2) throw UsageError("compare takes exactly two terms");
    auto x = order_from_selector(c.order);
    TermSystem eps = eps_system(x), phi = phi_system(order_from_selector(o.y), x);
    std::string e1, e2, p1, p2;
    auto a_eps = try_parse(eps, args[0], e1), b_eps = try_parse(eps, args[1], e2);
    const TermSystem* sys = nullptr;
    Term a = nullptr, b = nullptr;
    if (a_eps && b_eps) {
        sys = &eps;
        a = *a_eps;
        b = *b_eps;
    } else {
        auto a_phi = try_parse(phi, args[0], p1), b_phi = try_parse(phi, args[1], p2);
        if (a_phi && b_phi) {
            sys = &phi;
            a = *a_phi;
            b = *b_phi;
        } else if ((a_eps || a_phi) && (b_eps || b_phi)) {
            throw UsageError("the two terms belong to different systems");
        } else {
            throw UsageError(!(a_eps || a_phi) ? e1 : e2);
        }
    }
    Cmp r = compare(*sys, a, b);
    std::string out = r == Cmp::LT ? "LT" : r == Cmp::EQ ? "EQ" : "GT";
    json doc{{"command", "compare"}, {"order", c.order}, {"terms", args}, {"result", out},
             {"system", sys->kind == TermSystem::Kind::Eps ? "eps" : "phi"}};
    emit(c.json_out, doc, out + "\n");
    return 0;
}

// ---- jump commands ------------------------------------------------------------

int cmd_jump(const Common& c, const std::string& level, const std::string& sigma_text) {
    Ord a = level_exponent(level);
    FiniteString sigma = parse_string(sigma_text);
    auto eng = JumpEngine::make(semantics_from_selector(c.semantics));
    FiniteString j = eng->jump(a, sigma);
    std::string out = format_string(j);
    json doc{{"command", "jump"}, {"semantics", c.semantics}, {"level", level}, {"exponent", format_ord(a)},
             {"sigma", string_json(sigma)}, {"jump", string_json(j)}};
    emit(c.json_out, doc, out + "\n");
    return 0;
}

struct TreeOpts {
    std::string level = "0";
    std::string tree = "full:2";
    std::size_t depth = 3;
};

Tree tree_from_selector(const std::string& sel, std::size_t depth) {
    if (sel.rfind("full:", 0) == 0) return full_tree(to_u64(sel.substr(5), "arity"), depth);
    if (sel.rfind("path:", 0) == 0) return path_tree(stream_from_selector(sel.substr(5)), depth);
    if (sel.rfind("json:", 0) == 0) {
        std::string body = sel.substr(5);
        if (!body.empty() && body[0] == '@') body = read_file(body.substr(1));
        return parse_tree_json(body);
    }
    throw UsageError("unknown tree selector: " + sel);
}

int cmd_jump_tree(const Common& c, const TreeOpts& o) {
    Ord a = level_exponent(o.level);
    auto eng = JumpEngine::make(semantics_from_selector(c.semantics));
    Tree base = tree_from_selector(o.tree, o.depth);
    Tree jt = eng->tree(a, base);
    json dump = json::parse(dump_tree_json(jt, o.depth));
    if (c.json_out) {
        json doc{{"command", "jump-tree"}, {"semantics", c.semantics}, {"level", o.level},
                 {"exponent", format_ord(a)}, {"tree", o.tree}, {"depth", o.depth}, {"nodes", dump["nodes"]}};
        std::cout << doc.dump() << "\n";
    } else {
        for (const auto& row : dump["nodes"]) std::cout << row.dump() << "\n";
    }
    return 0;
}

// ---- descent commands ---------------------------------------------------------

struct DescendOpts {
    std::string alpha = "0";
    std::string z = "const:0";
    std::size_t count = 25;
    std::string print = "terms";
    std::string oracle = "exact";
};

int cmd_descend(const Common& c, const DescendOpts& o) {
    Ord a = parse_ord(o.alpha);
    if (o.print != "terms" && o.print != "checks") throw UsageError("--print must be terms or checks");
    auto w = descending_witness(a, semantics_from_selector(c.semantics), stream_from_selector(o.z), o.count);
    bool ok = true;
    json rows = json::array();
    std::ostringstream text;
    for (std::size_t n = 0; n < w.terms.size(); ++n) {
        if (o.print == "terms") {
            std::string s = show_term(w.sys, w.terms[n]);
            rows.push_back(s);
            text << s << "\n";
        } else if (n > 0) {
            Cmp r = compare_normal(w.sys, w.terms[n], w.terms[n - 1]);
            ok = ok && r == Cmp::LT;
            const char* tag = r == Cmp::LT ? "LT" : r == Cmp::EQ ? "EQ" : "GT";
            rows.push_back(tag);
            text << "h(z|" << n << ") vs h(z|" << n - 1 << "): " << tag << "\n";
        }
    }
    if (o.print == "checks") text << (ok ? "strictly decreasing\n" : "NOT strictly decreasing\n");
    json doc{{"command", "descend"}, {"semantics", c.semantics}, {"alpha", o.alpha}, {"z", o.z},
             {"count", o.count}, {o.print, rows}};
    if (o.print == "checks") doc["decreasing"] = ok;
    emit(c.json_out, doc, text.str());
    return ok ? 0 : 1;
}

int cmd_extract(const Common& c, const DescendOpts& o) {
    auto s = semantics_from_selector(c.semantics);
    StreamHandle z = stream_from_selector(o.z);
    auto eng = JumpEngine::make(s);
    std::size_t horizon = 4 * (o.count + 2);
    Tree tz = path_tree(z, horizon + 1);
    MonotoneMap g = identity_map(eng->tree(ord_zero(), tz), horizon + 1);
    ExpSeq seq = [&](std::size_t k) { return h_g(*eng, g, tz, z.take(k)); };
    ExistentialOracle oracle;
    if (o.oracle == "exact") {
        oracle = horizon_oracle(seq, g.codomain, horizon);
    } else if (o.oracle.rfind("fuel:", 0) == 0) {
        oracle = fuel_oracle(seq, g.codomain, to_u64(o.oracle.substr(5), "fuel"));
    } else {
        throw UsageError("--oracle must be exact or fuel:<n>");
    }
    auto out = extract_descending(seq, g.codomain, oracle, o.count);
    json rows = json::array();
    std::ostringstream text;
    FiniteString last;
    for (const auto& e : out) {
        last = decode_string(e.nat);
        rows.push_back(string_json(last));
        text << format_string(last) << "\n";
    }
    // Compare the union with the jump stream wherever the latter is known.
    bool ok = true;
    for (std::size_t n = 0; n < last.size(); ++n) {
        auto v = eng->stream(ord_zero(), z, n, horizon);
        if (v && *v != last[n]) ok = false;
    }
    text << (ok ? "agrees with the jump stream\n" : "DISAGREES with the jump stream\n");
    json doc{{"command", "extract"}, {"semantics", c.semantics}, {"z", o.z}, {"oracle", o.oracle},
             {"count", o.count}, {"prefixes", rows}, {"agrees", ok}};
    emit(c.json_out, doc, text.str());
    return ok ? 0 : 1;
}

// ---- verify -------------------------------------------------------------------

int cmd_verify(const Common& c, const std::string& suite, std::size_t len, const std::vector<std::string>& sems) {
    VerifyConfig cfg;
    cfg.suite = suite;
    cfg.len = len;
    for (const auto& sel : sems) cfg.semantics.push_back(semantics_from_selector(sel));
    std::vector<SuiteResult> results;
    try {
        results = run_suites(cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    bool ok = true;
    json rows = json::array();
    std::ostringstream text;
    for (const auto& r : results) {
        ok = ok && r.pass();
        rows.push_back({{"suite", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"pass", r.pass()},
                        {"counterexample", r.counterexample}});
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-48s %8zu checks %4zu failures\n", r.pass() ? "ok" : "FAIL",
                      r.name.c_str(), r.checks, r.failures);
        text << line;
        if (!r.pass()) text << "     counterexample: " << r.counterexample << "\n";
    }
    text << (ok ? "all suites passed\n" : "some suites FAILED\n");
    json doc{{"command", "verify"}, {"suite", suite}, {"len", len}, {"semantics", sems}, {"results", rows},
             {"pass", ok}};
    emit(c.json_out, doc, text.str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordjump: ordinal terms, transfinite jumps and descending sequences"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--semantics", common.semantics, "universal | diverge | table:<file>")->capture_default_str();
    app.add_option("--order", common.order, "empty | fin:k | nat | kbtree:<json> | below:<ordinal>")
        ->capture_default_str();
    app.add_flag("--json", common.json_out, "machine-readable output");

    TermOpts term_opts;
    std::string norm_input;
    auto* normalize = app.add_subcommand("normalize", "print the normal form of a term");
    normalize->add_option("term", norm_input)->required();
    normalize->add_option("--y", term_opts.y, "index order of phi terms")->capture_default_str();

    std::vector<std::string> cmp_args;
    auto* compare_cmd = app.add_subcommand("compare", "compare two terms (LT, EQ or GT)");
    compare_cmd->add_option("terms", cmp_args);
    compare_cmd->add_option("--y", term_opts.y, "index order of phi terms")->capture_default_str();

    std::string level = "0", sigma = "[]";
    auto* jump = app.add_subcommand("jump", "jump of a finite string");
    jump->add_option("--level", level, "0 | omega | w^a")->capture_default_str();
    jump->add_option("--sigma", sigma, "string such as [0,1,1]")->capture_default_str();

    TreeOpts tree_opts;
    bool tree_json = false;
    auto* jump_tree = app.add_subcommand("jump-tree", "list the jump tree of a tree");
    jump_tree->add_option("--level", tree_opts.level, "0 | omega | w^a")->capture_default_str();
    jump_tree->add_option("--tree", tree_opts.tree, "full:k | path:const:n | json:<json> | json:@file")
        ->capture_default_str();
    jump_tree->add_option("--depth", tree_opts.depth, "length bound")->capture_default_str();
    jump_tree->add_flag("--json", tree_json, "machine-readable output");

    DescendOpts dopts;
    auto* descend = app.add_subcommand("descend", "descending witness h(z|0), h(z|1), ...");
    descend->add_option("--alpha", dopts.alpha, "ordinal notation")->capture_default_str();
    descend->add_option("--z", dopts.z, "const:<n>")->capture_default_str();
    descend->add_option("--count", dopts.count, "number of terms")->capture_default_str();
    descend->add_option("--print", dopts.print, "terms | checks")->capture_default_str();

    DescendOpts eopts;
    eopts.count = 10;
    auto* extract = app.add_subcommand("extract", "recover jump prefixes from the level-0 witness");
    extract->add_option("--z", eopts.z, "const:<n>")->capture_default_str();
    extract->add_option("--count", eopts.count, "number of prefixes")->capture_default_str();
    extract->add_option("--oracle", eopts.oracle, "exact | fuel:<n>")->capture_default_str();

    std::string suite = "all";
    std::size_t len = 5;
    std::vector<std::string> verify_sems;
    auto* verify = app.add_subcommand("verify", "run the property suites");
    verify->add_option("--suite", suite, "all | " + [] {
                           std::string s;
                           for (const auto& n : suite_names()) s += (s.empty() ? "" : " | ") + n;
                           return s;
                       }())
        ->capture_default_str();
    verify->add_option("--len", len, "string length bound")->capture_default_str();
    verify->add_option("--semantics", verify_sems, "semantics selectors (repeatable); default: built-in fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*normalize) return cmd_normalize(common, term_opts, norm_input);
        if (*compare_cmd) return cmd_compare(common, term_opts, cmp_args);
        if (*jump) return cmd_jump(common, level, sigma);
        if (*jump_tree) {
            common.json_out = common.json_out || tree_json;
            return cmd_jump_tree(common, tree_opts);
        }
        if (*descend) return cmd_descend(common, dopts);
        if (*extract) return cmd_extract(common, eopts);
        if (*verify) return cmd_verify(common, suite, len, verify_sems);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
