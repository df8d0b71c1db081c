#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/error.hpp"

namespace bergman {

inline constexpr const char* kVersion = "1.0.0";

/// 17 significant digits in scientific notation.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    class Row {
    public:
        explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
        Row& operator<<(double v) {
            cells_.push_back(format_double(v));
            return *this;
        }
        Row& operator<<(const std::string& s) {
            cells_.push_back(s);
            return *this;
        }
        Row& operator<<(const char* s) { return *this << std::string(s); }
        Row& operator<<(bool b) { return *this << std::string(b ? "1" : "0"); }
        Row& operator<<(std::size_t k) { return *this << std::to_string(k); }
        Row& operator<<(int k) { return *this << std::to_string(k); }

    private:
        std::vector<std::string>& cells_;
    };

    Row row() {
        rows_.emplace_back();
        return Row(rows_.back());
    }

    std::size_t size() const noexcept { return rows_.size(); }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    /// Header block (`# ` lines), the column line, then the rows.
    std::string render(const std::vector<std::string>& header) const {
        std::ostringstream out;
        out << "# bergman " << kVersion << '\n';
        for (const auto& h : header) out << "# " << h << '\n';
        write_line(out, columns_);
        for (const auto& r : rows_) {
            if (r.size() != columns_.size()) throw Error("CSV row has the wrong number of cells");
            write_line(out, r);
        }
        return out.str();
    }

private:
    static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
        out << '\n';
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// How a recorded value is compared on verification.
///   exact  string equality (deterministic rules)
///   upper  observed <= recorded * slack
///   lower  observed >= recorded / slack
///   info   stored, never compared
enum class GoldenKind { Exact, Upper, Lower, Info };

inline const char* to_string(GoldenKind k) {
    switch (k) {
        case GoldenKind::Exact: return "exact";
        case GoldenKind::Upper: return "upper";
        case GoldenKind::Lower: return "lower";
        case GoldenKind::Info: return "info";
    }
    return "?";
}

inline constexpr double kEnvelopeSlack = 1.05;

struct GoldenEntry {
    GoldenKind kind = GoldenKind::Exact;
    std::string value;
};

/// Ordered key -> entry table stored as `key,kind,value` lines.
class GoldenTable {
public:
    void add(const std::string& key, GoldenKind kind, double v) { add(key, kind, format_double(v)); }
    void add(const std::string& key, GoldenKind kind, const std::string& v) {
        if (key.find_first_of(",\n") != std::string::npos) throw Error("golden key contains a separator: " + key);
        if (!entries_.count(key)) order_.push_back(key);
        entries_[key] = {kind, v};
    }

    bool empty() const noexcept { return order_.empty(); }
    const std::vector<std::string>& keys() const noexcept { return order_; }
    const GoldenEntry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::string render() const {
        std::ostringstream out;
        out << "# bergman golden " << kVersion << '\n';
        for (const auto& k : order_) {
            const GoldenEntry& e = entries_.at(k);
            out << k << ',' << to_string(e.kind) << ',' << e.value << '\n';
        }
        return out.str();
    }

    static GoldenTable parse(const std::string& text, const std::string& source) {
        GoldenTable t;
        std::istringstream in(text);
        std::string line;
        std::size_t no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (line.empty() || line[0] == '#') continue;
            const auto c1 = line.find(',');
            const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
            if (c2 == std::string::npos) throw ParseError("malformed golden line in " + source, no, 1);
            const std::string kind = line.substr(c1 + 1, c2 - c1 - 1);
            GoldenKind k;
            if (kind == "exact") k = GoldenKind::Exact;
            else if (kind == "upper") k = GoldenKind::Upper;
            else if (kind == "lower") k = GoldenKind::Lower;
            else if (kind == "info") k = GoldenKind::Info;
            else throw ParseError("unknown golden kind '" + kind + "' in " + source, no, c1 + 2);
            t.add(line.substr(0, c1), k, line.substr(c2 + 1));
        }
        return t;
    }

    static GoldenTable load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("no golden file at " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path.string());
    }

private:
    std::vector<std::string> order_;
    std::map<std::string, GoldenEntry> entries_;
};

/// Differences between an observed table and the recorded one. Recorded keys
/// that start with one of `scope` (all keys when empty) must be present.
inline std::vector<std::string> golden_mismatches(const GoldenTable& observed, const GoldenTable& recorded,
                                                  const std::vector<std::string>& scope = {}) {
    std::vector<std::string> out;
    for (const auto& key : observed.keys()) {
        const GoldenEntry& o = *observed.find(key);
        const GoldenEntry* g = recorded.find(key);
        if (!g) {
            out.push_back(key + ": not recorded");
            continue;
        }
        if (g->kind != o.kind) {
            out.push_back(key + ": kind changed from " + to_string(g->kind) + " to " + to_string(o.kind));
            continue;
        }
        const double ov = std::strtod(o.value.c_str(), nullptr);
        const double gv = std::strtod(g->value.c_str(), nullptr);
        auto scaled = [](double v, double f) { return v >= 0 ? v * f : v / f; };
        bool ok = true;
        switch (o.kind) {
            case GoldenKind::Exact: ok = o.value == g->value; break;
            case GoldenKind::Upper: ok = ov <= scaled(gv, kEnvelopeSlack); break;
            case GoldenKind::Lower: ok = ov >= scaled(gv, 1.0 / kEnvelopeSlack); break;
            case GoldenKind::Info: break;
        }
        if (!ok) out.push_back(key + ": " + o.value + " vs recorded " + g->value + " (" + to_string(o.kind) + ")");
    }
    for (const auto& key : recorded.keys()) {
        bool in_scope = scope.empty();
        for (const auto& s : scope) in_scope = in_scope || key.rfind(s, 0) == 0;
        if (in_scope && !observed.find(key)) out.push_back(key + ": missing from this run");
    }
    return out;
}

/// Write `text` to `path`, creating parent directories.
inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + path.string());
}

}  // namespace bergman
