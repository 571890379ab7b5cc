#pragma once

#include <array>
#include <cstdint>

namespace dope {

// Software binary float with a 256-bit significand and a wide exponent.
// Used as the escalation precision for recurrence construction and for the
// exhaustive-enumeration reference path, where weights span thousands of
// orders of magnitude and double would under/overflow.
//
// value = sign * M * 2^exp with M a 256-bit integer (limbs little-endian)
// normalized so that bit 255 is set. Truncating arithmetic with a 64-bit
// guard limb in addition/subtraction; relative error per operation stays
// below 2^-250, far beyond what any consumer here needs.
class BigFloat {
  public:
    BigFloat() = default;
    BigFloat(double d) { assign(d); }
    static BigFloat from_int(long long v);

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }

    BigFloat operator-() const;
    BigFloat operator+(const BigFloat& o) const;
    BigFloat operator-(const BigFloat& o) const;
    BigFloat operator*(const BigFloat& o) const;
    BigFloat operator/(const BigFloat& o) const;
    BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
    BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
    BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
    BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

    // -1, 0, +1 comparing values.
    int cmp(const BigFloat& o) const;
    bool operator<(const BigFloat& o) const { return cmp(o) < 0; }
    bool operator>(const BigFloat& o) const { return cmp(o) > 0; }
    bool operator<=(const BigFloat& o) const { return cmp(o) <= 0; }
    bool operator>=(const BigFloat& o) const { return cmp(o) >= 0; }

    BigFloat abs() const;
    BigFloat sqrt() const;  // requires value >= 0
    // Multiply by 2^k (exact).
    BigFloat ldexp2(long long k) const;

    double to_double() const;
    // value == mantissa * 2^exp2 with |mantissa| in [0.5, 1); frexp analogue,
    // mantissa truncated to double precision.
    double frexp2(long long* exp2_out) const;
    // Natural log of |value|, assembled from mantissa and exponent so it never
    // over/underflows.
    double log_abs() const;

  private:
    void assign(double d);
    static BigFloat normalize5(int sign, long long exp, std::array<std::uint64_t, 5> wide);
    static int cmp_mag(const BigFloat& a, const BigFloat& b);
    BigFloat recip() const;

    int sign_ = 0;          // 0 encodes the value zero
    long long exp_ = 0;     // exponent of the least significant significand bit
    std::array<std::uint64_t, 4> m_{};
};

}  // namespace dope
