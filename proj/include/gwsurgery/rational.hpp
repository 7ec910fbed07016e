#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace gwsurgery {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a bounded decision procedure runs out of budget.
class UndecidedError : public Error {
public:
    explicit UndecidedError(const std::string& what) : Error(what) {}
};

// Serialized as "p/q" with q > 0 and gcd(p,q) = 1.
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer p(s.substr(0, slash));
        Integer q(s.substr(slash + 1));
        if (q == 0) throw Error("rational with zero denominator: " + s);
        return Rational(p, q);
    } catch (const std::runtime_error&) {
        throw Error("malformed rational: '" + s + "'");
    }
}

}  // namespace gwsurgery
