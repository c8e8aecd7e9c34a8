#include "qpcf/literal.hpp"

#include <cctype>

#include "qpcf/error.hpp"

namespace qpcf {

namespace {

class Parser {
 public:
  Parser(const Field& field, std::string_view text) : field_(field), text_(text) {}

  ExactElement parse() {
    ExactElement value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_primary() {
    const char c = peek();
    return c == '(' || std::isalpha(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  }

  ExactElement expr() {
    ExactElement value = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return value;
      ++pos_;
      ExactElement rhs = term();
      value = c == '+' ? value + rhs : value - rhs;
    }
  }

  ExactElement term() {
    ExactElement value = unary();
    for (;;) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        const std::size_t at = pos_;
        ExactElement rhs = unary();
        if (c == '*') {
          value = value * rhs;
        } else {
          if (rhs.is_zero()) throw ParseError("division by zero", at);
          value = value / rhs;
        }
      } else if (starts_primary()) {
        value = value * power();
      } else {
        return value;
      }
    }
  }

  ExactElement unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  ExactElement power() {
    ExactElement base = primary();
    if (peek() != '^') return base;
    ++pos_;
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    skip_space();
    const std::size_t at = pos_;
    const Integer k = integer();
    if (k > 4096) throw ParseError("exponent too large", at);
    ExactElement out = ExactElement::one(field_);
    for (long n = k.get_si(); n > 0; --n) out = out * base;
    if (negative) {
      if (out.is_zero()) throw ParseError("division by zero", at);
      out = out.inverse();
    }
    return out;
  }

  Integer integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  ExactElement primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      ExactElement value = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return value;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return ExactElement::scalar(field_, Rational(integer()));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "beta") return ExactElement::beta(field_);
      if (name == "gamma") return ExactElement::gamma(field_);
      if (name == "i") {
        if (!field_->is_gaussian()) throw ParseError("'i' needs the field Q_p(i) (--f 2 --gamma i)", start);
        return ExactElement::gamma(field_);
      }
      if (name == "w") {
        if (!field_->is_eisenstein()) throw ParseError("'w' needs the field Q_p(w) (--f 2 --gamma w)", start);
        return ExactElement::gamma(field_);
      }
      throw ParseError("unknown symbol '" + std::string(name) + "'", start);
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const Field& field_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExactElement parse_element(const Field& field, std::string_view text) {
  return Parser(field, text).parse();
}

std::vector<ExactElement> parse_element_list(const Field& field, std::string_view text) {
  std::vector<ExactElement> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k < text.size() && text[k] == '(') ++depth;
    if (k < text.size() && text[k] == ')') --depth;
    if (k == text.size() || (text[k] == ',' && depth == 0)) {
      try {
        out.push_back(parse_element(field, text.substr(start, k - start)));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), start + e.position());
      }
      start = k + 1;
    }
  }
  return out;
}

std::string caret_diagnostic(std::string_view input, std::size_t position, std::string_view message) {
  std::string out(input);
  out += '\n';
  out += std::string(std::min(position, input.size()), ' ');
  out += "^ ";
  out += message;
  return out;
}

}  // namespace qpcf
