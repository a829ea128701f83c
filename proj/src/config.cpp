#include "taco/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace taco {

const std::string& ConfigValue::as_string() const {
  if (!is_string()) fail(Err::kConfigError, "config: expected a string value");
  return std::get<std::string>(v_);
}

int64_t ConfigValue::as_int() const {
  if (!std::holds_alternative<int64_t>(v_)) fail(Err::kConfigError, "config: expected an integer");
  return std::get<int64_t>(v_);
}

double ConfigValue::as_double() const {
  if (std::holds_alternative<int64_t>(v_)) return double(std::get<int64_t>(v_));
  if (!std::holds_alternative<double>(v_)) fail(Err::kConfigError, "config: expected a number");
  return std::get<double>(v_);
}

bool ConfigValue::as_bool() const {
  if (!std::holds_alternative<bool>(v_)) fail(Err::kConfigError, "config: expected a boolean");
  return std::get<bool>(v_);
}

const ConfigValue::Array& ConfigValue::as_array() const {
  if (!is_array()) fail(Err::kConfigError, "config: expected an array");
  return std::get<Array>(v_);
}

const ConfigValue::Table& ConfigValue::as_table() const {
  if (!is_table()) fail(Err::kConfigError, "config: expected a table");
  return std::get<Table>(v_);
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ConfigTable parse() {
    ConfigTable table;
    skip_whitespace_and_comments();
    while (!at_end()) {
      std::string key = parse_key();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      table[key] = parse_value();
      skip_inline_space();
      if (!at_end() && peek() != '\n') error("expected end of line after value");
      skip_whitespace_and_comments();
    }
    return table;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }

  [[noreturn]] void error(const std::string& msg) const {
    size_t line = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') ++line;
    }
    fail(Err::kConfigError, "config line " + std::to_string(line) + ": " + msg);
  }

  void expect(char c) {
    if (at_end() || peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_whitespace_and_comments() {
    for (;;) {
      skip_inline_space();
      if (!at_end() && peek() == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }

  std::string parse_key() {
    std::string key;
    while (!at_end() && (std::isalnum(unsigned(peek())) || peek() == '_' || peek() == '-')) {
      key.push_back(get());
    }
    if (key.empty()) error("expected a key");
    return key;
  }

  std::string parse_string() {
    expect('"');
    std::string s;
    while (!at_end() && peek() != '"') {
      char c = get();
      if (c == '\\') {
        if (at_end()) error("dangling escape");
        char e = get();
        switch (e) {
          case 'n': s.push_back('\n'); break;
          case 't': s.push_back('\t'); break;
          case '"': s.push_back('"'); break;
          case '\\': s.push_back('\\'); break;
          default: error("unsupported escape sequence");
        }
      } else if (c == '\n') {
        error("unterminated string");
      } else {
        s.push_back(c);
      }
    }
    expect('"');
    return s;
  }

  ConfigValue parse_number_or_bool() {
    if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return ConfigValue(true);
    }
    if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return ConfigValue(false);
    }
    size_t start = pos_;
    while (!at_end() && (std::isdigit(unsigned(peek())) || peek() == '-' || peek() == '+' ||
                         peek() == '.' || peek() == 'e' || peek() == 'E')) {
      ++pos_;
    }
    const std::string_view token(text_.data() + start, pos_ - start);
    if (token.empty()) error("expected a value");
    if (token.find('.') == std::string_view::npos &&
        token.find('e') == std::string_view::npos &&
        token.find('E') == std::string_view::npos) {
      int64_t v = 0;
      auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || p != token.data() + token.size()) error("bad integer");
      return ConfigValue(v);
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || p != token.data() + token.size()) error("bad number");
    return ConfigValue(v);
  }

  ConfigValue parse_array() {
    expect('[');
    ConfigValue::Array items;
    for (;;) {
      skip_whitespace_and_comments();
      if (at_end()) error("unterminated array");
      if (peek() == ']') {
        ++pos_;
        break;
      }
      items.push_back(parse_value());
      skip_whitespace_and_comments();
      if (!at_end() && peek() == ',') {
        ++pos_;
        continue;
      }
      if (!at_end() && peek() == ']') {
        ++pos_;
        break;
      }
      error("expected ',' or ']' in array");
    }
    return ConfigValue(std::move(items));
  }

  ConfigValue parse_inline_table() {
    expect('{');
    ConfigTable table;
    skip_inline_space();
    if (!at_end() && peek() == '}') {
      ++pos_;
      return ConfigValue(std::move(table));
    }
    for (;;) {
      skip_whitespace_and_comments();
      std::string key = parse_key();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      table[key] = parse_value();
      skip_whitespace_and_comments();
      if (!at_end() && peek() == ',') {
        ++pos_;
        continue;
      }
      if (!at_end() && peek() == '}') {
        ++pos_;
        break;
      }
      error("expected ',' or '}' in inline table");
    }
    return ConfigValue(std::move(table));
  }

  ConfigValue parse_value() {
    if (at_end()) error("expected a value");
    switch (peek()) {
      case '"': return ConfigValue(parse_string());
      case '[': return parse_array();
      case '{': return parse_inline_table();
      default: return parse_number_or_bool();
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

ConfigTable parse_config(const std::string& text) { return Parser(text).parse(); }

ConfigTable load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace taco
