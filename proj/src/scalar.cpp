#include "pnf/scalar.hpp"

#include <cctype>
#include <ostream>

namespace pnf {

std::string rational_str(const Rational& r) { return r.get_str(); }

Rational parse_rational(const std::string& raw) {
    std::string s = raw;
    if (!s.empty() && s[0] == '+') s = s.substr(1);
    if (s.empty()) fail(ErrorKind::parse, "empty rational literal");
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' && c != '+')
            fail(ErrorKind::parse, "bad character in rational literal '" + s + "'");
    }
    Rational r;
    if (r.set_str(s, 10) != 0)
        fail(ErrorKind::parse, "unparsable rational literal '" + s + "'");
    if (sgn(r.get_den()) == 0)
        fail(ErrorKind::parse, "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string Scalar::str() const {
    if (is_zero()) return "0";
    std::string out;
    if (sgn(re) != 0) out = rational_str(re);
    if (sgn(im) != 0) {
        std::string ims = rational_str(im);
        if (ims == "1") ims.clear();
        else if (ims == "-1") ims = "-";
        if (!out.empty() && sgn(im) > 0) out += "+";
        out += ims + "i";
    }
    return out;
}

Scalar Scalar::parse(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) fail(ErrorKind::parse, "empty scalar literal");

    if (s.back() != 'i') return Scalar(parse_rational(s));

    std::string body = s.substr(0, s.size() - 1);
    // Split off a real part if a sign separates two components.
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
        char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != '/' && body[k - 1] != '+' &&
            body[k - 1] != '-')
            split = k;  // keep the last one: imaginary coefficient follows it
    }
    std::string re_part, im_part;
    if (split == std::string::npos) {
        im_part = body;
    } else {
        re_part = body.substr(0, split);
        im_part = body.substr(split);
    }
    Rational im;
    if (im_part.empty() || im_part == "+") im = 1;
    else if (im_part == "-") im = -1;
    else im = parse_rational(im_part);
    Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
    return Scalar(std::move(re), std::move(im));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace pnf
