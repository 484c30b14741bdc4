#include "ellim/rational_vec.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ellim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::int64_t parse_int(const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

}  // namespace

Q parse_rational(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw std::invalid_argument("empty rational");
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const auto den = parse_int(trim(s.substr(slash + 1)));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        return Q(parse_int(trim(s.substr(0, slash))), den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        if (fp.size() > 15) throw std::invalid_argument("too many decimals in '" + s + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        const std::int64_t num = parse_int(ip) * den + (fp.empty() ? 0 : parse_int(fp));
        return Q(neg ? -num : num, den);
    }
    return Q(parse_int(s));
}

std::string to_string(const Q& x) {
    if (x.denominator() == 1) return std::to_string(x.numerator());
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

double to_double(const Q& x) {
    return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

RationalVec& RationalVec::operator+=(const RationalVec& o) {
    if (o.size() != size()) throw std::invalid_argument("RationalVec size mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

RationalVec& RationalVec::operator-=(const RationalVec& o) {
    if (o.size() != size()) throw std::invalid_argument("RationalVec size mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

RationalVec& RationalVec::operator*=(const Q& s) {
    for (auto& x : c_) x *= s;
    return *this;
}

Q RationalVec::dot(const RationalVec& o) const {
    if (o.size() != size()) throw std::invalid_argument("RationalVec size mismatch");
    Q r(0);
    for (std::size_t i = 0; i < c_.size(); ++i) r += c_[i] * o.c_[i];
    return r;
}

Q RationalVec::sum() const {
    Q r(0);
    for (const auto& x : c_) r += x;
    return r;
}

bool RationalVec::all_integer() const {
    for (const auto& x : c_)
        if (x.denominator() != 1) return false;
    return true;
}

bool RationalVec::all_half_integer() const {
    for (const auto& x : c_)
        if (x.denominator() != 2) return false;
    return true;
}

std::strong_ordering RationalVec::operator<=>(const RationalVec& o) const {
    const std::size_t n = std::min(size(), o.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (c_[i] < o.c_[i]) return std::strong_ordering::less;
        if (o.c_[i] < c_[i]) return std::strong_ordering::greater;
    }
    return size() <=> o.size();
}

std::string RationalVec::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ',';
        os << to_string(c_[i]);
    }
    os << ')';
    return os.str();
}

RationalVec operator+(RationalVec a, const RationalVec& b) { return a += b; }
RationalVec operator-(RationalVec a, const RationalVec& b) { return a -= b; }
RationalVec operator-(RationalVec a) { return a *= Q(-1); }
RationalVec operator*(const Q& s, RationalVec a) { return a *= s; }

RationalVec unit_vec(std::size_t n, std::size_t i) {
    RationalVec v(n);
    v[i] = 1;
    return v;
}

RationalVec rho_vec(std::size_t n) {
    RationalVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Q(1, 2);
    return v;
}

RationalVec parse_rational_vec(const std::string& s) {
    std::vector<Q> xs;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) xs.push_back(parse_rational(cur));
    if (xs.empty()) throw std::invalid_argument("empty vector");
    return RationalVec(std::move(xs));
}

}  // namespace ellim
