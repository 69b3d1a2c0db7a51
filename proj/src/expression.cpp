#include "refinery/expression.hpp"

#include <cctype>
#include <cstdlib>

#include "refinery/errors.hpp"

namespace refinery {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    std::complex<double> run() {
        auto v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw SpecError("bad coefficient expression \"" + s_ + "\": " + why);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::complex<double> expr() {
        auto v = term();
        while (true) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    std::complex<double> term() {
        auto v = unary();
        while (true) {
            if (eat('*')) v *= unary();
            else if (eat('/')) {
                auto den = unary();
                if (den == 0.0) fail("division by zero");
                v /= den;
            } else return v;
        }
    }

    std::complex<double> unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return primary();
    }

    std::complex<double> primary() {
        skip();
        if (eat('(')) {
            auto v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (s_.compare(pos_, 4, "sqrt") == 0) {
            pos_ += 4;
            if (!eat('(')) fail("sqrt needs '('");
            auto v = expr();
            if (!eat(')')) fail("missing ')'");
            return std::sqrt(v);
        }
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return {0.0, 1.0};
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            return {v, 0.0};
        }
        fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end");
    }

    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

std::complex<double> parse_expression(const std::string& text) { return Parser(text).run(); }

}  // namespace refinery
