#include "dope/bigfloat.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace dope {

namespace {

inline int high_bit(std::uint64_t x) {
    // position of the most significant set bit, 0..63; x != 0
    return 63 - __builtin_clzll(x);
}

// shift a 5-limb little-endian integer left by s in [0, 320)
void shl5(std::array<std::uint64_t, 5>& w, int s) {
    if (s == 0) return;
    int limb = s / 64, bits = s % 64;
    for (int i = 4; i >= 0; --i) {
        std::uint64_t v = 0;
        int src = i - limb;
        if (src >= 0) {
            v = w[src] << bits;
            if (bits && src - 1 >= 0) v |= w[src - 1] >> (64 - bits);
        }
        w[i] = v;
    }
}

void shr5(std::array<std::uint64_t, 5>& w, int s) {
    if (s == 0) return;
    if (s >= 320) { w.fill(0); return; }
    int limb = s / 64, bits = s % 64;
    for (int i = 0; i < 5; ++i) {
        std::uint64_t v = 0;
        int src = i + limb;
        if (src < 5) {
            v = w[src] >> bits;
            if (bits && src + 1 < 5) v |= w[src + 1] << (64 - bits);
        }
        w[i] = v;
    }
}

}  // namespace

void BigFloat::assign(double d) {
    if (d == 0.0 || std::isnan(d)) {
        sign_ = 0;
        exp_ = 0;
        m_.fill(0);
        return;
    }
    sign_ = d < 0 ? -1 : 1;
    int e;
    double f = std::frexp(std::fabs(d), &e);  // f in [0.5, 1)
    auto m53 = static_cast<std::uint64_t>(std::ldexp(f, 53));
    // m53 in [2^52, 2^53); place its top bit at bit 255
    m_.fill(0);
    m_[3] = m53 << 11;
    exp_ = static_cast<long long>(e) - 53 - 203;
}

BigFloat BigFloat::from_int(long long v) {
    BigFloat r;
    if (v == 0) return r;
    r.sign_ = v < 0 ? -1 : 1;
    std::uint64_t mag = v < 0 ? (~static_cast<std::uint64_t>(v) + 1) : static_cast<std::uint64_t>(v);
    int hb = high_bit(mag);
    r.m_.fill(0);
    if (hb == 63) {
        r.m_[3] = mag;
        r.exp_ = -192;
    } else {
        int s = 63 - hb;
        r.m_[3] = mag << s;
        r.exp_ = -192 - s;
    }
    return r;
}

BigFloat BigFloat::normalize5(int sign, long long exp, std::array<std::uint64_t, 5> w) {
    // find top set bit across the 5 limbs
    int top = -1;
    for (int i = 4; i >= 0; --i)
        if (w[i]) { top = i * 64 + high_bit(w[i]); break; }
    BigFloat r;
    if (top < 0) return r;  // zero
    // move top bit to position 255 within limbs 0..3 (wide bit 319 view: we
    // want the final significand in w[0..3] with bit 255 set)
    int shift = top - 255;
    if (shift > 0) { shr5(w, shift); exp += shift; }
    else if (shift < 0) { shl5(w, -shift); exp += shift; }
    r.sign_ = sign;
    r.exp_ = exp;
    r.m_ = {w[0], w[1], w[2], w[3]};
    return r;
}

int BigFloat::cmp_mag(const BigFloat& a, const BigFloat& b) {
    // both normalized and nonzero: magnitude order follows the exponent of the MSB
    long long ea = a.exp_, eb = b.exp_;
    if (ea != eb) return ea < eb ? -1 : 1;
    for (int i = 3; i >= 0; --i) {
        if (a.m_[i] != b.m_[i]) return a.m_[i] < b.m_[i] ? -1 : 1;
    }
    return 0;
}

int BigFloat::cmp(const BigFloat& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
    if (sign_ == 0) return 0;
    int c = cmp_mag(*this, o);
    return sign_ > 0 ? c : -c;
}

BigFloat BigFloat::operator-() const {
    BigFloat r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigFloat BigFloat::abs() const {
    BigFloat r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigFloat BigFloat::ldexp2(long long k) const {
    BigFloat r = *this;
    if (r.sign_) r.exp_ += k;
    return r;
}

BigFloat BigFloat::operator+(const BigFloat& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;

    // order by magnitude: a is the larger
    const BigFloat *pa = this, *pb = &o;
    if (cmp_mag(*this, o) < 0) std::swap(pa, pb);
    const BigFloat& a = *pa;
    const BigFloat& b = *pb;

    long long diff = a.exp_ - b.exp_;  // >= 0
    // widen both to 5 limbs with one low guard limb
    std::array<std::uint64_t, 5> wa = {0, a.m_[0], a.m_[1], a.m_[2], a.m_[3]};
    std::array<std::uint64_t, 5> wb = {0, b.m_[0], b.m_[1], b.m_[2], b.m_[3]};
    if (diff >= 320) wb.fill(0);
    else shr5(wb, static_cast<int>(diff));
    long long rexp = a.exp_ - 64;

    std::array<std::uint64_t, 5> w{};
    if (a.sign_ == b.sign_) {
        unsigned __int128 carry = 0;
        for (int i = 0; i < 5; ++i) {
            unsigned __int128 s = (unsigned __int128)wa[i] + wb[i] + carry;
            w[i] = static_cast<std::uint64_t>(s);
            carry = s >> 64;
        }
        if (carry) {
            // shift right once to fit; the dropped bit is guard territory
            shr5(w, 1);
            w[4] |= 1ull << 63;
            rexp += 1;
        }
        return normalize5(a.sign_, rexp, w);
    }
    // opposite signs: |a| >= |b|, result sign is a's
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 5; ++i) {
        unsigned __int128 d = (unsigned __int128)wa[i] - wb[i] - borrow;
        w[i] = static_cast<std::uint64_t>(d);
        borrow = (d >> 64) & 1;
    }
    return normalize5(a.sign_, rexp, w);
}

BigFloat BigFloat::operator-(const BigFloat& o) const { return *this + (-o); }

BigFloat BigFloat::operator*(const BigFloat& o) const {
    if (sign_ == 0 || o.sign_ == 0) return BigFloat();
    // 256x256 -> 512-bit product, keep top 320 bits for normalization
    std::uint64_t prod[8] = {0};
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 carry = 0;
        for (int j = 0; j < 4; ++j) {
            unsigned __int128 cur = (unsigned __int128)m_[i] * o.m_[j] + prod[i + j] + carry;
            prod[i + j] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        prod[i + 4] = static_cast<std::uint64_t>(carry);
    }
    // top bit of prod is at position 511 or 510
    std::array<std::uint64_t, 5> w = {prod[3], prod[4], prod[5], prod[6], prod[7]};
    // value = prod * 2^(ea+eb); w drops prod[0..2] (pure truncation below guard)
    long long rexp = exp_ + o.exp_ + 3 * 64;
    return normalize5(sign_ == o.sign_ ? 1 : -1, rexp, w);
}

BigFloat BigFloat::recip() const {
    // Newton iteration r <- r(2 - x r), seeded from a double estimate of the
    // mantissa; three iterations push the error beyond 2^-250.
    double md = std::ldexp(static_cast<double>(m_[3]), -64) + std::ldexp(static_cast<double>(m_[2]), -128);
    // |x| = md * 2^(exp+256), md in [0.5, 1)
    BigFloat r(1.0 / md);
    r = r.ldexp2(-(exp_ + 256));
    if (sign_ < 0) r.sign_ = -r.sign_;
    BigFloat two(2.0);
    BigFloat x = *this;
    for (int it = 0; it < 3; ++it) r = r * (two - x * r);
    return r;
}

BigFloat BigFloat::operator/(const BigFloat& o) const {
    if (o.sign_ == 0) {
        // propagate a loud NaN-ish zero; callers validate beforehand
        return BigFloat(std::numeric_limits<double>::quiet_NaN());
    }
    if (sign_ == 0) return BigFloat();
    return *this * o.recip();
}

BigFloat BigFloat::sqrt() const {
    if (sign_ == 0) return BigFloat();
    if (sign_ < 0) return BigFloat(std::numeric_limits<double>::quiet_NaN());
    // x = md * 2^E; choose even E' with f = md or 2*md
    double md = std::ldexp(static_cast<double>(m_[3]), -64) + std::ldexp(static_cast<double>(m_[2]), -128);
    long long E = exp_ + 256;
    double f = md;
    if (E & 1) { f = md * 2.0; E -= 1; }
    // y ~ 1/sqrt(x), Newton: y <- y(3 - x y^2)/2
    BigFloat y(1.0 / std::sqrt(f));
    y = y.ldexp2(-E / 2);
    BigFloat three(3.0), half(0.5);
    BigFloat x = *this;
    for (int it = 0; it < 4; ++it) y = y * (three - x * y * y) * half;
    return x * y;
}

double BigFloat::frexp2(long long* exp2_out) const {
    if (sign_ == 0) {
        *exp2_out = 0;
        return 0.0;
    }
    double md = std::ldexp(static_cast<double>(m_[3]), -64) + std::ldexp(static_cast<double>(m_[2]), -128);
    *exp2_out = exp_ + 256;
    return sign_ < 0 ? -md : md;
}

double BigFloat::to_double() const {
    if (sign_ == 0) return 0.0;
    long long e;
    double md = frexp2(&e);
    if (e > 1100) return sign_ < 0 ? -HUGE_VAL : HUGE_VAL;
    if (e < -1100) return sign_ < 0 ? -0.0 : 0.0;
    return std::ldexp(md, static_cast<int>(e));
}

double BigFloat::log_abs() const {
    if (sign_ == 0) return -HUGE_VAL;
    long long e;
    double md = std::fabs(frexp2(&e));
    return std::log(md) + static_cast<double>(e) * 0.6931471805599453094;
}

}  // namespace dope
