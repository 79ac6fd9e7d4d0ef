// Copyright 2026 The fockstir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include "oracles.hpp"

#include "fockstir/config_io.hpp"
#include "fockstir/errors.hpp"
#include "fockstir/pulses.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace fockstir;

namespace {
constexpr PulseEnvelope kOff{0.0, 0.0, 1.0};
}

TEST_CASE("envelope value at the peak, in the tails and one width out") {
    const PulseEnvelope a{20.0, 0.0, 10.0};
    CHECK(envelope_value(a, 0.0) == 20.0);
    CHECK(envelope_value(a, 1e3) == 0.0);
    CHECK(envelope_value(a, -1e3) == 0.0);
    const PulseEnvelope b{4.0, 0.0, 20.0};
    CHECK(envelope_value(b, 20.0) == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(envelope_value(b, 20.0) == doctest::Approx(1.4715).epsilon(1e-4));
}

TEST_CASE("envelopes are symmetric about their center and non-negative") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(0.0, 50.0), c(-100.0, 100.0), w(0.1, 40.0), d(0.0, 200.0);
    for (int i = 0; i < 1000; ++i) {
        const PulseEnvelope e{amp(rng), c(rng), w(rng)};
        const double delta = d(rng);
        // center +/- delta rounds differently on each side, hence the relative tolerance.
        CHECK(e.value(e.center + delta) == doctest::Approx(e.value(e.center - delta)).epsilon(1e-8));
        CHECK(e.value(e.center + delta) >= 0.0);
        CHECK(e.value(e.center) == e.amplitude);
    }
}

TEST_CASE("log-derivative matches a finite difference of the envelope") {
    const PulseEnvelope e{3.0, 1.5, 7.0};
    for (double t : {-10.0, 0.0, 4.0, 12.0}) {
        const double fd = oracle::derivative([&](double x) { return e.value(x); }, t);
        CHECK(e.derivative(t) == doctest::Approx(fd).epsilon(1e-9));
    }
}

TEST_CASE("effective pulse area of a single Gaussian is A T sqrt(pi)") {
    const PulseSchedule s = make_schedule({20.0, 0.0, 10.0}, kOff, kOff);
    CHECK(effective_pulse_area(s) == doctest::Approx(20.0 * 10.0 * std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(effective_pulse_area(s) == doctest::Approx(354.49).epsilon(1e-4));
}

TEST_CASE("effective pulse area vanishes when every envelope is off") {
    const PulseSchedule s{kOff, kOff, kOff, 0, -10.0, 10.0};
    CHECK(effective_pulse_area(s) == 0.0);
}

TEST_CASE("effective pulse area of the reference schedule agrees with a Simpson oracle") {
    const PulseSchedule s = reference_schedule(20.0);
    auto omega = [&](double t) { return oracle::omega(s, t); };
    const double coarse = oracle::simpson(omega, s.t_start, s.t_end, 4000);
    const double fine = oracle::simpson(omega, s.t_start, s.t_end, 8000);
    REQUIRE(std::abs(coarse - fine) < 1e-8);
    const double area = effective_pulse_area(s);
    CHECK(area == doctest::Approx(fine).epsilon(1e-11));
    CHECK(area > 100.0);
}

TEST_CASE("effective pulse area is degree-1 homogeneous in the amplitudes") {
    PulseSchedule s = reference_schedule(15.0);
    const double base = effective_pulse_area(s);
    for (double k : {0.5, 3.0, 10.0}) {
        PulseSchedule scaled = s;
        scaled.w1.amplitude *= k;
        scaled.w2.amplitude *= k;
        scaled.beta.amplitude *= k;
        CHECK(effective_pulse_area(scaled) == doctest::Approx(k * base).epsilon(1e-10));
    }
}

TEST_CASE("ordering check accepts the reference schedule") {
    const OrderingReport r = schedule_ordering_check(reference_schedule(20.0));
    CHECK(r.passed());
    CHECK(r.theta_end == doctest::Approx(0.0));
    CHECK(r.phi_end == doctest::Approx(std::numbers::pi / 2));
    CHECK(r.conditions.size() == 3);
}

TEST_CASE("ordering check rejects W2 ahead of W1") {
    PulseSchedule s = reference_schedule(20.0);
    s = with_delay(s, -40.0);
    const OrderingReport r = schedule_ordering_check(s);
    CHECK_FALSE(r.passed());
    CHECK(r.phi_end < 1e-3);
    CHECK_FALSE(r.conditions[2].passed);
}

TEST_CASE("ordering check rejects a cavity coupling shaped like W1") {
    PulseSchedule s = reference_schedule(20.0);
    s.beta = s.w1;
    const OrderingReport r = schedule_ordering_check(s);
    CHECK(r.theta_start == doctest::Approx(std::numbers::pi / 4));
    CHECK(r.theta_end == doctest::Approx(std::numbers::pi / 4));
    CHECK_FALSE(r.conditions[1].passed);
}

TEST_CASE("ordering check is invariant under a global time shift") {
    for (double delay : {5.0, 20.0, -30.0}) {
        const PulseSchedule s = with_delay(reference_schedule(), delay);
        PulseSchedule shifted = s;
        for (PulseEnvelope* e : {&shifted.w1, &shifted.w2, &shifted.beta}) {
            e->center += 137.25;
        }
        shifted.t_start += 137.25;
        shifted.t_end += 137.25;
        const OrderingReport a = schedule_ordering_check(s);
        const OrderingReport b = schedule_ordering_check(shifted);
        CHECK(a.passed() == b.passed());
        CHECK(a.theta_end == doctest::Approx(b.theta_end).epsilon(1e-9));
        CHECK(a.phi_end == doctest::Approx(b.phi_end).epsilon(1e-9));
    }
}

TEST_CASE("default window pads the outermost centers by six widths") {
    const PulseSchedule s = reference_schedule(20.0);
    CHECK(s.t_start == -130.0);
    CHECK(s.t_end == 140.0);
    CHECK_NOTHROW(validate_schedule(s));
}

TEST_CASE("schedule validation names the violated invariant") {
    PulseSchedule s = reference_schedule(20.0);
    SUBCASE("empty window") {
        s.t_end = s.t_start;
        CHECK_THROWS_WITH_AS(validate_schedule(s), doctest::Contains("t_start must be < t_end"), ConfigError);
    }
    SUBCASE("negative amplitude") {
        s.w2.amplitude = -1.0;
        CHECK_THROWS_WITH_AS(validate_schedule(s), doctest::Contains("w2.amplitude"), ConfigError);
    }
    SUBCASE("zero width") {
        s.beta.width = 0.0;
        CHECK_THROWS_WITH_AS(validate_schedule(s), doctest::Contains("beta.width"), ConfigError);
    }
    SUBCASE("pulse still on at the edge") {
        s.t_end = 30.0;
        CHECK_THROWS_WITH_AS(validate_schedule(s), doctest::Contains("still on"), ConfigError);
    }
    SUBCASE("negative manifold") {
        s.n = -1;
        CHECK_THROWS_AS(validate_schedule(s), ConfigError);
    }
}

TEST_CASE("schedule JSON uses the field names of the type") {
    const PulseSchedule s = reference_schedule(20.0);
    const nlohmann::json j = s;
    CHECK(j.at("w1").at("amplitude") == 20.0);
    CHECK(j.at("beta").at("center") == -10.0);
    CHECK(j.at("t_end") == 140.0);
    const PulseSchedule back = schedule_from_json(j);
    CHECK(back.w2 == s.w2);
    CHECK(back.t_start == s.t_start);

    nlohmann::json no_window = j;
    no_window.erase("t_start");
    no_window.erase("t_end");
    CHECK(schedule_from_json(no_window).t_end == 140.0);

    nlohmann::json broken = j;
    broken["w1"].erase("width");
    CHECK_THROWS_AS(schedule_from_json(broken), ConfigError);
    CHECK_THROWS_AS(schedule_from_json(nlohmann::json::array()), ConfigError);
}
