// A small TOML reader covering what config files use: [tables], [dotted.tables], dotted
// keys, inline tables, arrays (multi-line allowed), strings, numbers and booleans.
// Dates and arrays of tables are not supported.
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <locale>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qbm/config.hpp"
#include "qbm/errors.hpp"

namespace qbm {

namespace {

class TomlParser {
public:
    explicit TomlParser(std::string_view text) : text_(text) {}

    nlohmann::json parse() {
        nlohmann::json root = nlohmann::json::object();
        std::vector<std::string> table;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                ++pos_;
                skip_spaces();
                table = parse_key_path(']');
                expect(']');
                open_table(root, table);
                expect_line_end();
                continue;
            }
            std::vector<std::string> key = parse_key_path('=');
            expect('=');
            nlohmann::json value = parse_value();
            std::vector<std::string> full = table;
            full.insert(full.end(), key.begin(), key.end());
            insert(root, full, std::move(value));
            expect_line_end();
        }
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_{0};
    std::size_t line_{1};

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "TOML parse error at line " << line_ << ": " << what;
        throw ConfigError(msg.str());
    }

    void advance() {
        if (peek() == '\n') ++line_;
        ++pos_;
    }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        if (peek() == '#') {
            while (!eof() && peek() != '\n') ++pos_;
        }
    }

    // Whitespace, newlines and comments.
    void skip_blank_lines() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_spaces();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
        skip_spaces();
    }

    void expect_line_end() {
        skip_spaces();
        skip_comment();
        if (peek() == '\r') ++pos_;
        if (!eof() && peek() != '\n') fail("unexpected trailing characters");
    }

    std::string parse_bare_or_quoted_key() {
        skip_spaces();
        if (peek() == '"' || peek() == '\'') {
            return parse_string();
        }
        std::string key;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key.push_back(c);
                ++pos_;
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected a key");
        return key;
    }

    std::vector<std::string> parse_key_path(char terminator) {
        std::vector<std::string> path{parse_bare_or_quoted_key()};
        skip_spaces();
        while (peek() == '.') {
            ++pos_;
            path.push_back(parse_bare_or_quoted_key());
            skip_spaces();
        }
        if (peek() != terminator) fail(std::string("expected '") + terminator + "' after key");
        return path;
    }

    std::string parse_string() {
        const char quote = peek();
        ++pos_;
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') fail("unterminated string");
            char c = peek();
            ++pos_;
            if (c == quote) break;
            if (c == '\\' && quote == '"') {
                if (eof()) fail("unterminated escape");
                const char e = peek();
                ++pos_;
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail("unsupported escape sequence");
                }
            }
            out.push_back(c);
        }
        return out;
    }

    nlohmann::json parse_number_or_bool() {
        std::string token;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
                c == '_') {
                if (c != '_') token.push_back(c);
                ++pos_;
            } else {
                break;
            }
        }
        if (token.empty()) fail("expected a value");
        if (token == "true") return true;
        if (token == "false") return false;
        if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
        if (token == "-inf") return -std::numeric_limits<double>::infinity();
        if (token == "nan" || token == "+nan" || token == "-nan") {
            return std::numeric_limits<double>::quiet_NaN();
        }
        const bool is_float = token.find_first_of(".eE") != std::string::npos;
        const char* first = token.data() + (token.front() == '+' ? 1 : 0);
        const char* last = token.data() + token.size();
        if (is_float) {
            double v = 0.0;
            std::istringstream in(std::string(first, last));
            in.imbue(std::locale::classic());
            in >> v;
            if (!in || in.peek() != std::char_traits<char>::eof()) fail("malformed number '" + token + "'");
            return v;
        }
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) fail("malformed number '" + token + "'");
        return v;
    }

    nlohmann::json parse_array() {
        ++pos_;  // '['
        nlohmann::json arr = nlohmann::json::array();
        while (true) {
            skip_blank_lines();
            if (peek() == ']') {
                ++pos_;
                return arr;
            }
            arr.push_back(parse_value());
            skip_blank_lines();
            if (peek() == ',') {
                ++pos_;
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
    }

    nlohmann::json parse_inline_table() {
        ++pos_;  // '{'
        nlohmann::json obj = nlohmann::json::object();
        skip_spaces();
        if (peek() == '}') {
            ++pos_;
            return obj;
        }
        while (true) {
            std::vector<std::string> key = parse_key_path('=');
            expect('=');
            insert(obj, key, parse_value());
            skip_spaces();
            if (peek() == ',') {
                ++pos_;
            } else if (peek() == '}') {
                ++pos_;
                return obj;
            } else {
                fail("expected ',' or '}' in inline table");
            }
        }
    }

    nlohmann::json parse_value() {
        skip_spaces();
        switch (peek()) {
            case '"':
            case '\'': return parse_string();
            case '[': return parse_array();
            case '{': return parse_inline_table();
            default: return parse_number_or_bool();
        }
    }

    void open_table(nlohmann::json& root, const std::vector<std::string>& path) {
        nlohmann::json* node = &root;
        for (const std::string& key : path) {
            nlohmann::json& child = (*node)[key];
            if (child.is_null()) child = nlohmann::json::object();
            if (!child.is_object()) fail("'" + key + "' is not a table");
            node = &child;
        }
    }

    void insert(nlohmann::json& root, const std::vector<std::string>& path, nlohmann::json value) {
        nlohmann::json* node = &root;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            nlohmann::json& child = (*node)[path[i]];
            if (child.is_null()) child = nlohmann::json::object();
            if (!child.is_object()) fail("'" + path[i] + "' is not a table");
            node = &child;
        }
        if (node->contains(path.back())) fail("duplicate key '" + path.back() + "'");
        (*node)[path.back()] = std::move(value);
    }
};

}  // namespace

nlohmann::json parse_toml_subset(std::string_view text) { return TomlParser(text).parse(); }

}  // namespace qbm
