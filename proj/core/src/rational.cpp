#include "timecard/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>

namespace timecard {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v, const char* op) {
    if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN))
        throw RangeError(std::string("rational overflow in ") + op);
    return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw RangeError("rational with zero denominator");
    Wide n = numerator;
    Wide d = denominator;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    Wide g = wide_gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n, "normalize");
    den_ = narrow(d, "normalize");
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-Wide(num_), "negate");
    r.den_ = den_;
    return r;
}

Rational Rational::operator+(const Rational& rhs) const {
    Wide n = Wide(num_) * rhs.den_ + Wide(rhs.num_) * den_;
    Wide d = Wide(den_) * rhs.den_;
    Wide g = wide_gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num_ = narrow(n, "add");
    r.den_ = narrow(d, "add");
    return r;
}

Rational Rational::operator-(const Rational& rhs) const {
    return *this + (-rhs);
}

Rational Rational::operator*(const Rational& rhs) const {
    Wide n = Wide(num_) * rhs.num_;
    Wide d = Wide(den_) * rhs.den_;
    Wide g = wide_gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num_ = narrow(n, "mul");
    r.den_ = narrow(d, "mul");
    return r;
}

bool Rational::operator<(const Rational& rhs) const {
    return Wide(num_) * rhs.den_ < Wide(rhs.num_) * den_;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    // Terminating decimal exists iff den == 2^a * 5^b.
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);

    int digits = twos > fives ? twos : fives;
    Wide scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Wide scaled = Wide(num_) * (scale / den_);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    Wide whole = scaled / scale;
    Wide frac = scaled % scale;
    std::string fp = std::to_string(static_cast<std::int64_t>(frac));
    fp.insert(fp.begin(), static_cast<std::size_t>(digits) - fp.size(), '0');
    while (fp.size() > 1 && fp.back() == '0') fp.pop_back();
    std::string out = neg ? "-" : "";
    out += std::to_string(static_cast<std::int64_t>(whole));
    out += '.';
    out += fp;
    return out;
}

bool Rational::parse(const std::string& text, Rational& out) {
    if (text.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '-' || text[i] == '+') {
        neg = text[i] == '-';
        ++i;
    }
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        return false;
    Wide whole = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        whole = whole * 10 + (text[i] - '0');
        if (whole > Wide(INT64_MAX)) return false;
        ++i;
    }
    Wide num = whole;
    Wide den = 1;
    if (i < text.size() && text[i] == '.') {
        ++i;
        if (i >= text.size()) return false;
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i]))) {
            num = num * 10 + (text[i] - '0');
            den *= 10;
            if (num > Wide(INT64_MAX) || den > Wide(INT64_MAX)) return false;
            ++i;
        }
    }
    if (i != text.size()) return false;
    if (neg) num = -num;
    out = Rational(static_cast<std::int64_t>(num),
                   static_cast<std::int64_t>(den));
    return true;
}

Money Money::round_from(const Rational& units) {
    // cents = units * 100, round half to even.
    Wide n = Wide(units.num()) * 100;
    Wide d = units.den();
    Wide q = n / d;
    Wide r = n % d;
    if (r < 0) {
        q -= 1;
        r += d;
    }
    // r/d is the fractional part in [0,1).
    Wide twice = 2 * r;
    if (twice > d || (twice == d && q % 2 != 0)) q += 1;
    if (q > Wide(INT64_MAX) || q < Wide(INT64_MIN))
        throw RangeError("money overflow");
    return Money(static_cast<std::int64_t>(q));
}

std::string Money::str() const {
    std::int64_t c = cents_;
    bool neg = c < 0;
    if (neg) c = -c;
    std::string out = neg ? "-" : "";
    out += std::to_string(c / 100);
    out += '.';
    std::int64_t frac = c % 100;
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

}  // namespace timecard
