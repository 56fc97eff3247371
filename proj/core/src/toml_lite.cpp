// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/toml_lite.hpp>

#include <cctype>
#include <charconv>
#include <fstream>

namespace splatpose::toml {

namespace {

bool
is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class LineParser {
  public:
    LineParser(const std::string &text, const std::string &source, int line)
        : s_(text), source_(source), line_(line) {}

    void
    skip_space() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) {
            ++pos_;
        }
    }

    bool
    at_end_or_comment() {
        skip_space();
        return pos_ >= s_.size() || s_[pos_] == '#' || s_[pos_] == '\r';
    }

    char
    peek() const {
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void
    expect(char c) {
        skip_space();
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string
    bare_key() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && is_bare_key_char(s_[pos_])) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a key");
        }
        return s_.substr(start, pos_ - start);
    }

    Value
    value() {
        skip_space();
        const char c = peek();
        if (c == '"') {
            return string_value();
        }
        if (c == '[') {
            return array_value();
        }
        if (s_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            return true;
        }
        if (s_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            return false;
        }
        return number_value();
    }

    [[noreturn]] void
    fail(const std::string &what) const {
        throw ParseError(source_, line_, what);
    }

  private:
    std::string
    string_value() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) {
                    break;
                }
                const char e = s_[pos_++];
                switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail(std::string("unsupported escape '\\") + e + "'");
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size()) {
            fail("unterminated string");
        }
        ++pos_;
        return out;
    }

    std::vector<double>
    array_value() {
        ++pos_;
        std::vector<double> out;
        skip_space();
        if (peek() == ']') {
            ++pos_;
            return out;
        }
        while (true) {
            const Value v = number_value();
            out.push_back(std::holds_alternative<double>(v)
                              ? std::get<double>(v)
                              : static_cast<double>(std::get<long long>(v)));
            skip_space();
            if (peek() == ',') {
                ++pos_;
                skip_space();
                if (peek() == ']') {
                    ++pos_;
                    return out;
                }
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                return out;
            }
            fail("expected ',' or ']' in array");
        }
    }

    Value
    number_value() {
        skip_space();
        const std::size_t start = pos_;
        std::string text;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '+' ||
                s_[pos_] == '-' || s_[pos_] == '.' || s_[pos_] == '_')) {
            if (s_[pos_] != '_') {
                text.push_back(s_[pos_]);
            }
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a value");
        }
        const bool is_float = text.find_first_of(".eEin") != std::string::npos;
        const char *b = text.data();
        const char *e = text.data() + text.size();
        if (*b == '+') {
            ++b;
        }
        if (!is_float) {
            long long v = 0;
            const auto [p, ec] = std::from_chars(b, e, v);
            if (ec == std::errc() && p == e) {
                return v;
            }
        } else {
            double v = 0.0;
            const auto [p, ec] = std::from_chars(b, e, v);
            if (ec == std::errc() && p == e) {
                return v;
            }
        }
        fail("malformed value '" + text + "'");
    }

    const std::string &s_;
    const std::string &source_;
    int line_;
    std::size_t pos_ = 0;
};

} // namespace

Document
parse(std::istream &in, const std::string &source) {
    Document doc;
    doc.source = source;
    std::string table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        LineParser p(line, source, line_no);
        if (p.at_end_or_comment()) {
            continue;
        }
        if (p.peek() == '[') {
            p.expect('[');
            table = p.bare_key();
            p.expect(']');
            if (!p.at_end_or_comment()) {
                p.fail("unexpected text after table header");
            }
            continue;
        }
        const std::string key = p.bare_key();
        p.expect('=');
        Value v = p.value();
        if (!p.at_end_or_comment()) {
            p.fail("unexpected text after value");
        }
        const std::string full = table.empty() ? key : table + "." + key;
        if (!doc.entries.emplace(full, Entry{std::move(v), line_no}).second) {
            p.fail("duplicate key '" + full + "'");
        }
    }
    return doc;
}

Document
parse_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open config file");
    }
    return parse(in, path.string());
}

} // namespace splatpose::toml
