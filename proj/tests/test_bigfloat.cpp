#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "dope/bigfloat.hpp"
#include "dope/rng.hpp"

using dope::BigFloat;

namespace {
double rel_err(double got, double want) {
    if (want == 0.0) return std::fabs(got);
    return std::fabs(got - want) / std::fabs(want);
}
}  // namespace

TEST_SUITE("bigfloat") {

TEST_CASE("round trip and exact small integers") {
    for (double v : {0.0, 1.0, -1.0, 0.5, -3.75, 1e100, -1e-100, 12345678.9}) {
        CHECK(BigFloat(v).to_double() == v);
    }
    CHECK(BigFloat::from_int(0).is_zero());
    CHECK(BigFloat::from_int((1ll << 62) + 12345).to_double() ==
          static_cast<double>((1ll << 62) + 12345));
    CHECK(BigFloat::from_int(-7).to_double() == -7.0);
}

TEST_CASE("field ops agree with double on random values") {
    dope::CounterRng rng(42);
    for (int i = 0; i < 2000; ++i) {
        double a = (rng.next_u01() - 0.5) * 8.0;
        double b = (rng.next_u01() - 0.5) * 8.0;
        if (std::fabs(b) < 1e-3) b += 1.0;
        BigFloat A(a), B(b);
        CHECK(rel_err((A + B).to_double(), a + b) < 1e-15);
        CHECK(rel_err((A - B).to_double(), a - b) < 1e-15);
        CHECK(rel_err((A * B).to_double(), a * b) < 1e-15);
        CHECK(rel_err((A / B).to_double(), a / b) < 1e-15);
    }
}

TEST_CASE("precision well beyond double") {
    // (1 + 2^-100)^2 = 1 + 2^-99 + 2^-200
    BigFloat one(1.0);
    BigFloat tiny = BigFloat(1.0).ldexp2(-100);
    BigFloat sq = (one + tiny) * (one + tiny);
    BigFloat resid = sq - one - tiny.ldexp2(1);  // should equal 2^-200
    double got = resid.to_double();
    CHECK(rel_err(got, std::ldexp(1.0, -200)) < 1e-60);
}

TEST_CASE("division and sqrt fixed points") {
    dope::CounterRng rng(7);
    for (int i = 0; i < 300; ++i) {
        double a = rng.next_u01() * 1e3 + 1e-3;
        BigFloat A(a);
        BigFloat r = BigFloat(1.0) / A;
        // |A*r - 1| below 2^-240
        double resid = ((A * r) - BigFloat(1.0)).abs().to_double();
        CHECK(resid < std::ldexp(1.0, -240));
        BigFloat s = A.sqrt();
        double sresid = ((s * s - A) / A).abs().to_double();
        CHECK(sresid < std::ldexp(1.0, -240));
    }
}

TEST_CASE("huge exponent range (no under/overflow)") {
    BigFloat big = BigFloat(1.5).ldexp2(40000);
    BigFloat small = BigFloat(1.0) / big;
    CHECK(small.log_abs() == doctest::Approx(-40000 * std::log(2.0) - std::log(1.5)).epsilon(1e-12));
    CHECK((big * small).to_double() == doctest::Approx(1.0));
    // doubles round to inf / 0 as expected
    CHECK(std::isinf(big.to_double()));
    CHECK(small.to_double() == 0.0);
}

TEST_CASE("comparisons") {
    CHECK(BigFloat(1.0) < BigFloat(2.0));
    CHECK(BigFloat(-1.0) < BigFloat(0.5));
    CHECK(BigFloat(-3.0) < BigFloat(-2.0));
    CHECK(BigFloat(2.0).cmp(BigFloat(2.0)) == 0);
    BigFloat tiny = BigFloat(1.0).ldexp2(-200);
    CHECK(BigFloat(1.0) < BigFloat(1.0) + tiny);
}

TEST_CASE("alternating series sums accurately") {
    // sum_{j=0}^{200} (-1)^j / 2^j = (1 + 2^-201) * 2/3
    BigFloat s;
    for (int j = 0; j <= 200; ++j) {
        BigFloat t = BigFloat(j % 2 ? -1.0 : 1.0).ldexp2(-j);
        s += t;
    }
    BigFloat expect = (BigFloat(1.0) + BigFloat(1.0).ldexp2(-201)) * (BigFloat(2.0) / BigFloat(3.0));
    CHECK(((s - expect) / expect).abs().to_double() < std::ldexp(1.0, -240));
}

}  // TEST_SUITE

TEST_SUITE("rng") {

TEST_CASE("deterministic and stream-separated") {
    dope::CounterRng a(123, 0), b(123, 0), c(123, 1);
    for (int i = 0; i < 100; ++i) {
        auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
    CHECK(a.draws() == 100);
}

TEST_CASE("documented closed form of the n-th draw") {
    const std::uint64_t seed = 0xDEADBEEFull, stream = 9;
    dope::CounterRng r(seed, stream);
    r.next_u64();
    r.next_u64();
    std::uint64_t third = r.next_u64();
    std::uint64_t base = seed + stream * 0xD2B74407B1CE6E93ull;
    CHECK(third == dope::CounterRng::mix(base + 3 * 0x9E3779B97F4A7C15ull));
}

TEST_CASE("u01 in range with decent mean") {
    dope::CounterRng r(5);
    double s = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double u = r.next_u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
    }
    CHECK(std::fabs(s / 20000 - 0.5) < 0.01);
}

}  // TEST_SUITE
