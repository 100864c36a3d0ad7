#include "powermix/grammar.hpp"

#include "powermix/errors.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <optional>

namespace powermix {

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    std::size_t pos() const { return i_; }

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    [[noreturn]] void fail(std::string expected, const std::string& what) const {
        throw ParseError(i_, std::move(expected), what);
    }

    void expect(char c) {
        skip_ws();
        if (i_ >= s_.size() || s_[i_] != c) {
            fail(std::string("'") + c + "'",
                 i_ >= s_.size() ? "unexpected end of spec" : "unexpected character '" + std::string(1, s_[i_]) + "'");
        }
        ++i_;
    }

    bool peek(char c) {
        skip_ws();
        return i_ < s_.size() && s_[i_] == c;
    }

    std::string ident(const char* what) {
        skip_ws();
        const std::size_t start = i_;
        while (i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
            ++i_;
        }
        if (start == i_) fail(what, i_ >= s_.size() ? "unexpected end of spec" : "missing name");
        return std::string(s_.substr(start, i_ - start));
    }

    double number() {
        skip_ws();
        const char* begin = s_.data() + i_;
        const char* end = s_.data() + s_.size();
        if (begin < end && *begin == '+') ++begin;
        double v = 0;
        const auto r = std::from_chars(begin, end, v);
        if (r.ec != std::errc{} || begin == end) fail("number", "malformed number");
        if (!std::isfinite(v)) fail("finite number", "non-finite number");
        i_ = static_cast<std::size_t>(r.ptr - s_.data());
        return v;
    }

    void finish() {
        skip_ws();
        if (i_ != s_.size()) fail("end of spec", "trailing text");
    }

    Distribution distribution() {
        skip_ws();
        const std::size_t start = i_;
        const std::string name = ident("distribution name");
        Kind kind;
        if (!kind_from_name(name, kind)) {
            i_ = start;
            fail("distribution name (uniform, arcsin, semicircle, power_semicircle, beta, power, "
                 "triangular, cauchy, normal, point_mass)",
                 "unknown distribution '" + name + "'");
        }
        expect('(');
        std::vector<double> p;
        if (!peek(')')) {
            p.push_back(number());
            while (peek(',')) {
                expect(',');
                p.push_back(number());
            }
        }
        if (static_cast<int>(p.size()) != kind_arity(kind)) {
            fail(std::to_string(kind_arity(kind)) + " parameters",
                 name + " takes " + std::to_string(kind_arity(kind)) + " parameters, got " +
                     std::to_string(p.size()));
        }
        expect(')');
        try {
            return Distribution::make(kind, p);
        } catch (const DomainError& e) {
            i_ = start;
            fail("valid parameters", e.what());
        }
    }

    MixtureSpec mixture(const std::string& family, std::size_t start) {
        expect('(');
        std::optional<double> n;
        std::optional<Distribution> w, x1, x2;
        bool first = true;
        while (!peek(')')) {
            if (!first) expect(',');
            first = false;
            const std::size_t key_pos = (skip_ws(), i_);
            const std::string key = ident("argument name (n, w, x1, x2)");
            expect('=');
            auto dup = [&](bool seen) {
                if (seen) {
                    i_ = key_pos;
                    fail("new argument name", "argument '" + key + "' given twice");
                }
            };
            if (key == "n") {
                dup(n.has_value());
                n = number();
            } else if (key == "w") {
                dup(w.has_value());
                w = distribution();
            } else if (key == "x1") {
                dup(x1.has_value());
                x1 = distribution();
            } else if (key == "x2") {
                dup(x2.has_value());
                x2 = distribution();
            } else {
                i_ = key_pos;
                fail("argument name (n, w, x1, x2)", "unknown argument '" + key + "'");
            }
        }
        if (!n && !w) fail("n= or w=", "mixture needs a power index n or a weight law w");
        if (n && w) fail("')'", "give either n or w, not both");
        if (!x1) fail("x1=", "missing component x1");
        if (!x2) fail("x2=", "missing component x2");
        expect(')');
        try {
            if (family == "directed") {
                if (w) {
                    i_ = start;
                    fail("n=", "directed mixtures take a power index n, not a weight law");
                }
                return MixtureSpec::directed(*n, *x1, *x2);
            }
            if (w) return MixtureSpec::tsp_weighted(*w, *x1, *x2);
            return MixtureSpec::tsp(*n, *x1, *x2);
        } catch (const DomainError& e) {
            i_ = start;
            fail("valid mixture arguments", e.what());
        }
    }

    AnySpec any() {
        skip_ws();
        const std::size_t start = i_;
        const std::string name = ident("spec name");
        if (name == "tsp" || name == "directed") {
            auto m = mixture(name, start);
            finish();
            return m;
        }
        i_ = start;
        auto d = distribution();
        finish();
        return d;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace

Distribution parse_distribution(std::string_view text) {
    Parser p(text);
    auto d = p.distribution();
    p.finish();
    return d;
}

MixtureSpec parse_mixture(std::string_view text) {
    Parser p(text);
    auto spec = p.any();
    if (auto* m = std::get_if<MixtureSpec>(&spec)) return *m;
    throw ParseError(0, "tsp(...) or directed(...)", "expected a mixture spec");
}

AnySpec parse_spec(std::string_view text) {
    Parser p(text);
    return p.any();
}

std::string print(const Distribution& d) { return d.to_string(); }
std::string print(const MixtureSpec& m) { return m.to_string(); }
std::string print(const AnySpec& s) {
    return std::visit([](const auto& v) { return v.to_string(); }, s);
}

}  // namespace powermix
