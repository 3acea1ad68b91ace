#include "qtsf/serialize.hpp"

#include <cctype>
#include <cstddef>

#include "qtsf/errors.hpp"

namespace qtsf {

namespace {

// Doubled exponent -> display form: 2 -> "1", -2 -> "-1", 1 -> "1/2", -3 -> "-3/2".
std::string exp_str(int e2) {
    if (e2 % 2 == 0) return std::to_string(e2 / 2);
    return std::to_string(e2) + "/2";
}

std::string mono_str(const QTMono& m) {
    std::string s;
    if (m.qe2 != 0) s += "q^{" + exp_str(m.qe2) + "}";
    if (m.te2 != 0) s += "t^{" + exp_str(m.te2) + "}";
    return s;
}

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    char peek() {
        ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!eat(c)) fail(what);
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError("parse error at offset " + std::to_string(i) + " in \"" + s +
                         "\": " + what);
    }
    bool at_digit() {
        ws();
        return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
    }
};

// A raw run of decimal digits (arbitrary length).
std::string digit_run(Cursor& c) {
    if (!c.at_digit()) c.fail("expected digits");
    std::string d;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i])))
        d += c.s[c.i++];
    return d;
}

long small_uint(Cursor& c) {
    std::string d = digit_run(c);
    if (d.size() > 7) c.fail("number too large");
    return std::stol(d);
}

// Exponent in braces: "3", "-3", "1/2", "-3/2".  Returns the doubled value.
int parse_exp2(Cursor& c) {
    bool neg = c.eat('-');
    long a = small_uint(c);
    long e2 = 2 * a;
    std::size_t save = c.i;
    if (c.eat('/')) {
        if (small_uint(c) != 2) c.fail("exponent denominator must be 2");
        e2 = a;
    } else {
        c.i = save;
    }
    return static_cast<int>(neg ? -e2 : e2);
}

QTPoly parse_poly(Cursor& c) {
    std::vector<QTPoly::Term> terms;
    bool first = true;
    for (;;) {
        bool neg = false;
        if (first) {
            if (c.eat('-'))
                neg = true;
            else
                c.eat('+');
        } else {
            char ch = c.peek();
            if (ch == '+') {
                c.eat('+');
            } else if (ch == '-') {
                c.eat('-');
                neg = true;
            } else {
                break;
            }
        }
        Rat coeff = 1;
        bool have_num = false;
        if (c.at_digit()) {
            std::string num = digit_run(c);
            std::size_t save = c.i;
            if (c.eat('/') && c.at_digit()) {
                num += "/" + digit_run(c);
            } else {
                c.i = save;
            }
            coeff = Rat(num);
            mpq_canonicalize(coeff.get_mpq_t());
            have_num = true;
        }
        int qe2 = 0, te2 = 0;
        bool have_mono = false;
        for (;;) {
            char ch = c.peek();
            if (ch != 'q' && ch != 't') break;
            ++c.i;
            int e2 = 2;
            if (c.eat('^')) {
                c.expect('{', "expected '{'");
                e2 = parse_exp2(c);
                c.expect('}', "expected '}'");
            }
            (ch == 'q' ? qe2 : te2) += e2;
            have_mono = true;
        }
        if (!have_num && !have_mono) c.fail("expected a term");
        terms.push_back({{qe2, te2}, neg ? Rat(-coeff) : coeff});
        first = false;
    }
    if (terms.empty()) c.fail("empty polynomial");
    return QTPoly::from_terms(std::move(terms));
}

std::vector<int> parse_int_list(Cursor& c) {
    c.expect('[', "expected '['");
    std::vector<int> v;
    if (!c.eat(']')) {
        for (;;) {
            v.push_back(static_cast<int>(small_uint(c)));
            if (c.eat(']')) break;
            c.expect(',', "expected ',' or ']'");
        }
    }
    return v;
}

}  // namespace

std::string to_string(const QTPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rat a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        std::string ms = mono_str(m);
        if (ms.empty()) {
            out += a.get_str();
        } else {
            if (a != 1) out += a.get_str();
            out += ms;
        }
        first = false;
    }
    return out;
}

std::string to_string(const QTRational& v) {
    if (v.den().is_one()) return to_string(v.num());
    return "(" + to_string(v.num()) + ") / (" + to_string(v.den()) + ")";
}

std::string to_string(const Partition& p) {
    std::string s = "[";
    const auto& parts = p.parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts[i]);
    }
    return s + "]";
}

std::string to_string(const SkewShape& s) {
    return to_string(s.outer) + "/" + to_string(s.inner);
}

QTRational parse_rational(const std::string& text) {
    Cursor c{text};
    QTPoly num, den = QTPoly::one();
    if (c.peek() == '(') {
        c.eat('(');
        num = parse_poly(c);
        c.expect(')', "expected ')'");
        if (c.eat('/')) {
            c.expect('(', "expected '('");
            den = parse_poly(c);
            c.expect(')', "expected ')'");
        }
    } else {
        num = parse_poly(c);
    }
    c.ws();
    if (c.i != c.s.size()) c.fail("unexpected trailing input");
    return QTRational(std::move(num), std::move(den));
}

Partition parse_partition(const std::string& text) {
    Cursor c{text};
    auto v = parse_int_list(c);
    c.ws();
    if (c.i != c.s.size()) c.fail("unexpected trailing input");
    return Partition(std::move(v));
}

SkewShape parse_skew(const std::string& text) {
    Cursor c{text};
    auto outer = parse_int_list(c);
    std::vector<int> inner;
    if (c.eat('/')) inner = parse_int_list(c);
    c.ws();
    if (c.i != c.s.size()) c.fail("unexpected trailing input");
    return SkewShape(Partition(std::move(inner)), Partition(std::move(outer)));
}

nlohmann::json to_json(const QTPoly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) arr.push_back({m.qe2, m.te2, c.get_str()});
    return arr;
}

nlohmann::json to_json(const QTRational& v) {
    return {{"num", to_json(v.num())}, {"den", to_json(v.den())}};
}

nlohmann::json to_json(const Ribbon& r) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : r.boxes()) arr.push_back({b.x, b.y});
    return arr;
}

nlohmann::json to_json(const std::vector<Ribbon>& tiling) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : tiling) arr.push_back(to_json(r));
    return arr;
}

nlohmann::json to_json(const RibbonTableau& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& layer : t.layers) arr.push_back(to_json(layer));
    return arr;
}

QTPoly poly_from_json(const nlohmann::json& j) {
    std::vector<QTPoly::Term> terms;
    for (const auto& t : j) {
        Rat c(t.at(2).get<std::string>());
        mpq_canonicalize(c.get_mpq_t());
        terms.push_back({{t.at(0).get<int>(), t.at(1).get<int>()}, std::move(c)});
    }
    return QTPoly::from_terms(std::move(terms));
}

QTRational rational_from_json(const nlohmann::json& j) {
    return {poly_from_json(j.at("num")), poly_from_json(j.at("den"))};
}

}  // namespace qtsf
