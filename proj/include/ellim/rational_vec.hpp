#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace ellim {

using Q = boost::rational<std::int64_t>;

/// Parse "3", "-1/4" or "0.25" (decimal literals are converted exactly).
Q parse_rational(const std::string& s);
std::string to_string(const Q& x);
double to_double(const Q& x);

/// Exact rational coordinate vector.
class RationalVec {
public:
    RationalVec() = default;
    explicit RationalVec(std::size_t n) : c_(n, Q(0)) {}
    RationalVec(std::initializer_list<Q> xs) : c_(xs) {}
    explicit RationalVec(std::vector<Q> xs) : c_(std::move(xs)) {}

    std::size_t size() const { return c_.size(); }
    const Q& operator[](std::size_t i) const { return c_[i]; }
    Q& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Q>& coords() const { return c_; }

    RationalVec& operator+=(const RationalVec& o);
    RationalVec& operator-=(const RationalVec& o);
    RationalVec& operator*=(const Q& s);

    Q dot(const RationalVec& o) const;
    Q sum() const;
    Q norm2() const { return dot(*this); }

    bool all_integer() const;
    bool all_half_integer() const;  // every coordinate in Z + 1/2

    bool operator==(const RationalVec& o) const { return c_ == o.c_; }
    std::strong_ordering operator<=>(const RationalVec& o) const;

    std::string str() const;

private:
    std::vector<Q> c_;
};

RationalVec operator+(RationalVec a, const RationalVec& b);
RationalVec operator-(RationalVec a, const RationalVec& b);
RationalVec operator-(RationalVec a);
RationalVec operator*(const Q& s, RationalVec a);

RationalVec unit_vec(std::size_t n, std::size_t i);
/// (1/2, ..., 1/2) in dimension n.
RationalVec rho_vec(std::size_t n);
/// Comma separated list of rationals.
RationalVec parse_rational_vec(const std::string& s);

}  // namespace ellim
