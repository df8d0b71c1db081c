#pragma once

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bergman/describe.hpp"
#include "bergman/error.hpp"
#include "bergman/holo.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// A configuration that parses but cannot be run (empty family, unwritable
/// output directory, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Command { Compare, Theorem1, KernelCheck, OperatorProbe, Sharpness, LemmaChecks, QuadratureBench };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::Compare: return "compare";
        case Command::Theorem1: return "theorem1";
        case Command::KernelCheck: return "kernel-check";
        case Command::OperatorProbe: return "operator-probe";
        case Command::Sharpness: return "sharpness";
        case Command::LemmaChecks: return "lemma-checks";
        case Command::QuadratureBench: return "quadrature-bench";
    }
    return "?";
}

enum class GoldenMode { Off, Record, Verify };

inline const char* to_string(GoldenMode g) {
    switch (g) {
        case GoldenMode::Off: return "off";
        case GoldenMode::Record: return "record";
        case GoldenMode::Verify: return "verify";
    }
    return "?";
}

/// One point of an expanded parameter grid. The operator probe reads (a, b);
/// the other commands read (n, p, q, alpha).
struct GridPoint {
    std::size_t n = 1;
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct FamilyEntry {
    std::string text;
    HoloFunction f;
};

struct ExperimentConfig {
    std::string name;
    bool has_command = false;
    Command command = Command::Compare;
    QuadratureSpec spec;
    std::string output_dir = "bergman-out";
    GoldenMode golden = GoldenMode::Off;
    std::vector<GridPoint> grid;
    std::vector<FamilyEntry> family;
    /// The source lines that defined the grid and family, for the CSV header.
    std::vector<std::string> block_lines;

    /// The resolved configuration as key = value lines.
    std::vector<std::string> echo() const {
        std::vector<std::string> out;
        out.push_back("name = " + name);
        out.push_back("command = " + std::string(to_string(command)));
        out.push_back("seed = " + std::to_string(spec.seed));
        out.push_back("method = " + std::string(to_string(spec.method)));
        out.push_back("radial_order = " + std::to_string(spec.radial_order));
        out.push_back("angular_order = " + std::to_string(spec.angular_order));
        out.push_back("simplex_order = " + std::to_string(spec.simplex_order));
        out.push_back("mc_samples = " + std::to_string(spec.mc_samples));
        out.push_back("strata = " + std::to_string(spec.strata));
        out.push_back("golden = " + std::string(to_string(golden)));
        for (const auto& l : block_lines) out.push_back(l);
        return out;
    }
};

namespace config_detail {

/// Arithmetic over numbers and the variables p, n, alpha:
/// + - * / with the usual precedence, unary minus and parentheses.
class ExprParser {
public:
    ExprParser(std::string_view text, const std::map<std::string, double>& vars, std::size_t line,
               std::size_t column)
        : s_(text), vars_(vars), line_(line), col_(column) {}

    double parse() {
        const double v = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected character in expression");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_ + i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    double sum() {
        double v = product();
        for (;;) {
            skip();
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
                const char op = s_[i_++];
                const double r = product();
                v = op == '+' ? v + r : v - r;
            } else {
                return v;
            }
        }
    }

    double product() {
        double v = unary();
        for (;;) {
            skip();
            if (i_ < s_.size() && (s_[i_] == '*' || s_[i_] == '/')) {
                const char op = s_[i_++];
                const double r = unary();
                if (op == '/' && r == 0.0) fail("division by zero");
                v = op == '*' ? v * r : v / r;
            } else {
                return v;
            }
        }
    }

    double unary() {
        skip();
        if (i_ < s_.size() && s_[i_] == '-') {
            ++i_;
            return -unary();
        }
        if (i_ < s_.size() && s_[i_] == '+') {
            ++i_;
            return unary();
        }
        return atom();
    }

    double atom() {
        skip();
        if (i_ >= s_.size()) fail("expected a number or variable");
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            const double v = sum();
            skip();
            if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
            ++i_;
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            const std::string id(s_.substr(start, i_ - start));
            auto it = vars_.find(id);
            if (it == vars_.end()) {
                i_ = start;
                fail("unknown variable '" + id + "'");
            }
            return it->second;
        }
        const std::string rest(s_.substr(i_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("expected a number");
        i_ += static_cast<std::size_t>(end - rest.c_str());
        return v;
    }

    std::string_view s_;
    const std::map<std::string, double>& vars_;
    std::size_t line_;
    std::size_t col_;
    std::size_t i_ = 0;
};

/// A value with the 1-based column where it starts.
struct Located {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

inline std::vector<Located> split_list(const Located& v) {
    std::vector<Located> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= v.text.size(); ++i) {
        const char c = i < v.text.size() ? v.text[i] : ',';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == ',' && depth == 0) || i == v.text.size()) {
            std::size_t a = start, b = i;
            while (a < b && std::isspace(static_cast<unsigned char>(v.text[a]))) ++a;
            while (b > a && std::isspace(static_cast<unsigned char>(v.text[b - 1]))) --b;
            if (a == b) throw ParseError("empty list entry", v.line, v.column + a);
            out.push_back({v.text.substr(a, b - a), v.line, v.column + a});
            start = i + 1;
        }
    }
    return out;
}

inline double eval(const Located& v, const std::map<std::string, double>& vars) {
    return ExprParser(v.text, vars, v.line, v.column).parse();
}

inline std::uint64_t parse_unsigned(const Located& v) {
    const std::string& s = v.text;
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("expected a nonnegative integer", v.line, v.column);
    errno = 0;
    const auto x = std::strtoull(s.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ParseError("integer out of range", v.line, v.column);
    return x;
}

struct GridBlock {
    std::map<std::string, Located> keys;
};

inline std::vector<GridPoint> expand(const GridBlock& g, std::size_t block_line) {
    auto list = [&](const char* key, const char* fallback) {
        auto it = g.keys.find(key);
        if (it == g.keys.end()) return std::vector<Located>{{fallback, block_line, 1}};
        return split_list(it->second);
    };
    std::vector<GridPoint> out;
    const std::map<std::string, double> none;
    for (const Located& nv : list("n", "1")) {
        const double nd = eval(nv, none);
        if (!(nd >= 1.0 && nd <= static_cast<double>(kMaxDim) && nd == std::floor(nd)))
            throw ParseError("n must be an integer in [1, " + std::to_string(kMaxDim) + "]", nv.line, nv.column);
        std::map<std::string, double> vars{{"n", nd}};
        for (const Located& pv : list("p", "2")) {
            const double p = eval(pv, vars);
            if (!(p > 0.0)) throw ParseError("p must be positive", pv.line, pv.column);
            vars["p"] = p;
            for (const Located& av : list("alpha", "0")) {
                const double alpha = eval(av, vars);
                if (!(alpha > -1.0)) throw ParseError("alpha must exceed -1", av.line, av.column);
                vars["alpha"] = alpha;
                for (const Located& qv : list("q", "p")) {
                    const double q = eval(qv, vars);
                    if (!(q > 0.0)) throw ParseError("q must be positive", qv.line, qv.column);
                    for (const Located& a : list("a", "0"))
                        for (const Located& b : list("b", "0"))
                            out.push_back({static_cast<std::size_t>(nd), p, q, alpha, eval(a, vars), eval(b, vars)});
                }
            }
        }
    }
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace config_detail

inline Command command_from_string(const std::string& s) {
    for (Command c : {Command::Compare, Command::Theorem1, Command::KernelCheck, Command::OperatorProbe,
                      Command::Sharpness, Command::LemmaChecks, Command::QuadratureBench})
        if (s == to_string(c)) return c;
    throw ParameterError("unknown command '" + s + "'");
}

/// Parse configuration text. Top-level `key = value` lines set the run
/// options; `[grid]` blocks hold comma-separated lists (n, p, alpha, q, a, b),
/// where q, a and b may use p, n and alpha in arithmetic expressions; each
/// `[family]` block holds `f = <descriptor>` lines. `#` starts a comment.
inline ExperimentConfig parse_config(std::string_view text, std::string name = "config") {
    using config_detail::Located;
    ExperimentConfig cfg;
    cfg.name = std::move(name);
    enum class Section { Top, Grid, Family } section = Section::Top;
    config_detail::GridBlock grid;
    std::size_t grid_line = 0;
    bool any_grid = false;

    auto flush_grid = [&] {
        if (section != Section::Grid) return;
        auto pts = config_detail::expand(grid, grid_line);
        cfg.grid.insert(cfg.grid.end(), pts.begin(), pts.end());
        grid = {};
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = config_detail::trim(raw);
        if (line.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        const std::size_t indent = raw.find_first_not_of(" \t");

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no, indent + 1);
            const std::string sec = config_detail::trim(std::string_view(line).substr(1, line.size() - 2));
            flush_grid();
            if (sec == "grid") {
                section = Section::Grid;
                grid_line = line_no;
                any_grid = true;
            } else if (sec == "family") {
                section = Section::Family;
            } else {
                throw ParseError("unknown section '" + sec + "'", line_no, indent + 2);
            }
            cfg.block_lines.push_back(line);
            if (eol == text.size()) break;
            continue;
        }

        const std::size_t eq = raw.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, indent + 1);
        const std::string key = config_detail::trim(raw.substr(0, eq));
        std::size_t vstart = eq + 1;
        while (vstart < raw.size() && std::isspace(static_cast<unsigned char>(raw[vstart]))) ++vstart;
        const Located val{config_detail::trim(raw.substr(eq + 1)), line_no, vstart + 1};
        if (key.empty()) throw ParseError("missing key", line_no, indent + 1);
        if (val.text.empty()) throw ParseError("missing value for '" + key + "'", line_no, vstart + 1);

        if (section == Section::Grid) {
            static const char* allowed[] = {"n", "p", "q", "alpha", "a", "b"};
            if (std::find(std::begin(allowed), std::end(allowed), key) == std::end(allowed))
                throw ParseError("unknown grid key '" + key + "'", line_no, indent + 1);
            if (grid.keys.count(key)) throw ParseError("duplicate grid key '" + key + "'", line_no, indent + 1);
            grid.keys[key] = val;
            cfg.block_lines.push_back(key + " = " + val.text);
        } else if (section == Section::Family) {
            if (key != "f") throw ParseError("family entries are 'f = <descriptor>'", line_no, indent + 1);
            cfg.family.push_back({val.text, parse_function(val.text, line_no, val.column)});
            cfg.block_lines.push_back("f = " + val.text);
        } else if (key == "name") {
            cfg.name = val.text;
        } else if (key == "command") {
            try {
                cfg.command = command_from_string(val.text);
            } catch (const ParameterError& e) {
                throw ParseError(e.what(), line_no, val.column);
            }
            cfg.has_command = true;
        } else if (key == "seed") {
            cfg.spec.seed = config_detail::parse_unsigned(val);
        } else if (key == "method") {
            try {
                cfg.spec.method = method_from_string(val.text);
            } catch (const Error& e) {
                throw ParseError(e.what(), line_no, val.column);
            }
        } else if (key == "radial_order") {
            cfg.spec.radial_order = config_detail::parse_unsigned(val);
            if (cfg.spec.radial_order == 0) throw ParseError("radial_order must be positive", line_no, val.column);
        } else if (key == "angular_order") {
            cfg.spec.angular_order = config_detail::parse_unsigned(val);
        } else if (key == "simplex_order") {
            cfg.spec.simplex_order = config_detail::parse_unsigned(val);
        } else if (key == "mc_samples") {
            cfg.spec.mc_samples = config_detail::parse_unsigned(val);
            if (cfg.spec.mc_samples == 0) throw ParseError("mc_samples must be positive", line_no, val.column);
        } else if (key == "strata") {
            cfg.spec.strata = config_detail::parse_unsigned(val);
            if (cfg.spec.strata == 0) throw ParseError("strata must be positive", line_no, val.column);
        } else if (key == "output_dir") {
            cfg.output_dir = val.text;
        } else if (key == "golden") {
            if (val.text == "off") cfg.golden = GoldenMode::Off;
            else if (val.text == "record") cfg.golden = GoldenMode::Record;
            else if (val.text == "verify") cfg.golden = GoldenMode::Verify;
            else throw ParseError("golden must be off, record or verify", line_no, val.column);
        } else {
            throw ParseError("unknown key '" + key + "'", line_no, indent + 1);
        }
        if (eol == text.size()) break;
    }
    flush_grid();
    if (any_grid && cfg.grid.empty()) throw ParseError("grid is empty", grid_line, 1);
    return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file '" + path.string() + "'", 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.stem().string());
}

}  // namespace bergman
