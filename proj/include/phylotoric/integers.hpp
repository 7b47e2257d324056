#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace phylotoric {

// Exact arbitrary-precision scalars. Everything lattice-related runs on these;
// machine ints appear only as indices and small counters.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

// Floor division (a/b rounded toward -inf); b != 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if (q * b != a && ((a < 0) != (b < 0))) --q;
    return q;
}

// g = gcd(a,b) >= 0 with s*a + t*b = g.  gcd(0,0) = 0.
inline Integer ext_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
    Integer old_r = a, r = b;
    Integer old_s = 1, cur_s = 0;
    Integer old_t = 0, cur_t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
        tmp = old_t - q * cur_t;
        old_t = cur_t;
        cur_t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

}  // namespace phylotoric
