#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bergman/error.hpp"
#include "bergman/holo.hpp"

namespace bergman {

namespace describe_detail {

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line, std::size_t column0)
        : text_(text), line_(line), column0_(column0) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool accept_word(std::string_view w) {
        skip_space();
        if (text_.substr(pos_, w.size()) != w) return false;
        const std::size_t end = pos_ + w.size();
        if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            return false;
        pos_ = end;
        return true;
    }
    void expect_key(std::string_view key) {
        if (!accept_word(key)) fail("expected '" + std::string(key) + "='");
        expect('=');
    }

    /// Unsigned or signed decimal real without surrounding spaces.
    bool try_real(double& out) {
        skip_space();
        const char* begin = text_.data() + pos_;
        std::size_t len = 0;
        const std::size_t avail = text_.size() - pos_;
        auto digit = [&](std::size_t i) { return i < avail && std::isdigit(static_cast<unsigned char>(begin[i])); };
        if (len < avail && (begin[len] == '+' || begin[len] == '-')) ++len;
        const std::size_t mantissa = len;
        while (digit(len)) ++len;
        if (len < avail && begin[len] == '.') {
            ++len;
            while (digit(len)) ++len;
        }
        if (len == mantissa || (len == mantissa + 1 && begin[mantissa] == '.')) return false;
        if (len < avail && (begin[len] == 'e' || begin[len] == 'E')) {
            std::size_t e = len + 1;
            if (e < avail && (begin[e] == '+' || begin[e] == '-')) ++e;
            if (digit(e)) {
                while (digit(e)) ++e;
                len = e;
            }
        }
        out = std::strtod(std::string(begin, len).c_str(), nullptr);
        pos_ += len;
        return true;
    }

    double real(const char* what) {
        double v;
        if (!try_real(v)) fail(std::string("expected ") + what);
        return v;
    }

    long integer(const char* what) {
        skip_space();
        std::size_t len = 0;
        while (pos_ + len < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + len]))) ++len;
        if (len == 0) fail(std::string("expected ") + what);
        const long v = std::strtol(std::string(text_.substr(pos_, len)).c_str(), nullptr, 10);
        pos_ += len;
        return v;
    }

    /// Complex literal: 1.5, -2i, i, 0.3+0.2i, -1-i.
    Complex complex() {
        skip_space();
        const std::size_t start = pos_;
        // Bare i, +i, -i.
        double sign = 1.0;
        if (pos_ + 1 < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-') && text_[pos_ + 1] == 'i') {
            sign = text_[pos_] == '-' ? -1.0 : 1.0;
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == 'i') {
            ++pos_;
            return {0.0, sign};
        }
        double first;
        if (!try_real(first)) {
            pos_ = start;
            fail("expected a complex number");
        }
        if (pos_ < text_.size() && text_[pos_] == 'i') {
            ++pos_;
            return {0.0, first};
        }
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
            const double s = text_[pos_] == '-' ? -1.0 : 1.0;
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == 'i') {
                pos_ += 2;
                return {first, s};
            }
            double second;
            if (!try_real(second)) fail("expected the imaginary part");
            if (pos_ >= text_.size() || text_[pos_] != 'i') fail("expected 'i' after the imaginary part");
            ++pos_;
            return {first, second};
        }
        return {first, 0.0};
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("function descriptor: " + what, line_, column0_ + pos_);
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t column0_;
    std::size_t pos_ = 0;
};

}  // namespace describe_detail

/// Parse a function descriptor:
///   poly n=2 {(2,0):1.0, (1,1):-0.5i}
///   kernel n=2 a=(0.5,0) s=3.5 scale=1
/// `line` and `column` locate the text inside a larger file for error
/// messages (column is 1-based).
inline HoloFunction parse_function(std::string_view text, std::size_t line = 1, std::size_t column = 1) {
    describe_detail::Cursor in(text, line, column);
    const bool poly = in.accept_word("poly");
    if (!poly && !in.accept_word("kernel")) in.fail("expected 'poly' or 'kernel'");
    in.expect_key("n");
    const long n = in.integer("a dimension");
    if (n < 1 || n > static_cast<long>(kMaxDim)) in.fail("dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
    const auto dim = static_cast<std::size_t>(n);

    if (poly) {
        std::vector<std::pair<MultiIndex, Complex>> terms;
        in.expect('{');
        if (!in.accept('}')) {
            do {
                in.expect('(');
                MultiIndex m;
                do {
                    m.push_back(static_cast<int>(in.integer("an exponent")));
                } while (in.accept(','));
                in.expect(')');
                if (m.size() != dim) in.fail("multi-index has " + std::to_string(m.size()) + " entries, expected " +
                                             std::to_string(dim));
                in.expect(':');
                terms.emplace_back(std::move(m), in.complex());
            } while (in.accept(','));
            in.expect('}');
        }
        if (!in.done()) in.fail("unexpected trailing text");
        if (terms.empty()) return HoloFunction::constant(dim, 0.0);
        return HoloFunction::polynomial(dim, std::move(terms));
    }

    in.expect_key("a");
    in.expect('(');
    CPoint a(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        if (k) in.expect(',');
        a[k] = in.complex();
    }
    in.expect(')');
    if (!(a.norm_sq() < 1.0)) in.fail("kernel centre must satisfy |a| < 1");
    in.expect_key("s");
    const double s = in.real("an exponent");
    if (!(s > 0.0)) in.fail("kernel exponent must be positive");
    Complex scale = 1.0;
    if (in.accept_word("scale")) {
        in.expect('=');
        scale = in.complex();
    }
    if (!in.done()) in.fail("unexpected trailing text");
    return HoloFunction::kernel_power(a, s, scale);
}

}  // namespace bergman
