#include "opalg/scalar.hpp"

#include <cctype>

namespace opalg {

std::string ratStr(const Rat& r) {
    return r.get_str();
}

static bool validRatToken(const std::string& t) {
    size_t p = 0;
    if (p < t.size() && (t[p] == '+' || t[p] == '-')) ++p;
    size_t digits = 0;
    while (p < t.size() && std::isdigit(static_cast<unsigned char>(t[p]))) { ++p; ++digits; }
    if (digits == 0) return false;
    if (p == t.size()) return true;
    if (t[p] != '/') return false;
    ++p;
    digits = 0;
    while (p < t.size() && std::isdigit(static_cast<unsigned char>(t[p]))) { ++p; ++digits; }
    return digits > 0 && p == t.size();
}

Rat parseRat(const std::string& text) {
    std::string t = text;
    if (!t.empty() && t[0] == '+') t = t.substr(1);
    if (!validRatToken(t)) throw InputError("bad rational literal: '" + text + "'");
    size_t slash = t.find('/');
    if (slash != std::string::npos) {
        std::string den = t.substr(slash + 1);
        bool allZero = den.find_first_not_of('0') == std::string::npos;
        if (allZero) throw InputError("zero denominator in rational literal: '" + text + "'");
    }
    Rat r(t);
    r.canonicalize();
    return r;
}

std::string Scalar::str() const {
    if (sgn(im) == 0) return ratStr(re);
    std::string imPart = ratStr(abs(im)) + "i";
    if (sgn(re) == 0) return (sgn(im) < 0 ? "-" : "") + imPart;
    return ratStr(re) + (sgn(im) < 0 ? "-" : "+") + imPart;
}

// Splits "a/b+c/di" at the sign that starts the imaginary part.
static size_t findSplit(const std::string& s) {
    for (size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && std::isdigit(static_cast<unsigned char>(s[i - 1])))
            return i;
    }
    return std::string::npos;
}

static Rat parseImagToken(const std::string& tok, const std::string& whole) {
    if (tok.empty() || tok.back() != 'i')
        throw InputError("bad scalar literal: '" + whole + "'");
    std::string body = tok.substr(0, tok.size() - 1);
    if (body.empty() || body == "+") return Rat(1);
    if (body == "-") return Rat(-1);
    return parseRat(body);
}

Scalar Scalar::parse(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw InputError("empty scalar literal");

    size_t split = findSplit(s);
    if (split != std::string::npos) {
        if (s.back() != 'i') throw InputError("bad scalar literal: '" + text + "'");
        return Scalar(parseRat(s.substr(0, split)), parseImagToken(s.substr(split), text));
    }
    if (s.back() == 'i') return Scalar(Rat(0), parseImagToken(s, text));
    return Scalar(parseRat(s));
}

} // namespace opalg
