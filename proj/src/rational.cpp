#include "multikraw/rational.hpp"

#include <algorithm>
#include <cctype>

namespace multikraw {

namespace {

bool valid_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + i, s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto bad = [&] {
        return std::invalid_argument("parse_rational: cannot parse '" + text + "'");
    };
    if (auto slash = text.find('/'); slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!valid_integer(num) || !valid_integer(den)) throw bad();
        BigInt den_value(den);
        if (den_value == 0) {
            throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
        }
        Rational r(BigInt(num), den_value);
        r.canonicalize();
        return r;
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool neg = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole = whole.substr(1);
        if (whole.empty()) whole = "0";
        if (!valid_integer(whole) || frac.empty() || !valid_integer(frac)) throw bad();
        BigInt den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        BigInt num = BigInt(whole) * den + BigInt(frac);
        if (neg) num = -num;
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (!valid_integer(text)) throw bad();
    return Rational(BigInt(text));
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace multikraw
