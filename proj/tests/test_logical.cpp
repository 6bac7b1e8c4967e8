#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bellsim/logical.h"
#include "bellsim/rng.h"

using namespace bellsim;

namespace {
LogicalBellLabel label(BellFamily f, BellSign s, int n) { return {f, s, n}; }

int popcount_parity(std::uint32_t m) { return __builtin_popcount(m) & 1; }
}  // namespace

TEST_CASE("three-photon expansion lists the known four terms") {
    // Phi+ at N=3 decomposes into the even-minus-count pair products:
    // (+,+,+), (+,-,-), (-,+,-), (-,-,+), each with amplitude 1/2.
    auto d = expand_logical_bell(label(BellFamily::Phi, BellSign::Plus, 3));
    CHECK(d.amplitude == doctest::Approx(0.5).epsilon(1e-12));
    std::set<std::uint32_t> masks(d.terms.begin(), d.terms.end());
    CHECK(masks == std::set<std::uint32_t>{0b000, 0b011, 0b101, 0b110});
    for (auto m : d.terms) {
        auto pairs = d.pair_labels(m);
        REQUIRE(pairs.size() == 3);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            CHECK(pairs[i].family == BellFamily::Phi);
            CHECK((pairs[i].sign == BellSign::Minus) == bool((m >> i) & 1));
        }
    }
}

TEST_CASE("expansion term count, amplitude and parity for N up to 10") {
    for (int n = 1; n <= 10; ++n) {
        for (auto [fam, sign] : kAllBellStates) {
            auto d = expand_logical_bell(label(fam, sign, n));
            CHECK(d.terms.size() == std::size_t(1) << (n - 1));
            CHECK(d.amplitude ==
                  doctest::Approx(std::pow(2.0, -(n - 1) / 2.0)).epsilon(1e-12));
            // Normalization.
            CHECK(d.terms.size() * d.amplitude * d.amplitude ==
                  doctest::Approx(1.0).epsilon(1e-12));
            int want_parity = sign == BellSign::Minus ? 1 : 0;
            std::set<std::uint32_t> seen;
            for (auto m : d.terms) {
                CHECK(popcount_parity(m) == want_parity);
                CHECK(seen.insert(m).second);  // no duplicate terms
            }
        }
    }
}

TEST_CASE("classification rules") {
    using K = BsOutcomeKind;
    // All fail -> no outcome.
    CHECK(!classify({K::Fail, K::Fail, K::Fail}).has_value());
    // Any PhiMinus fixes the family to Phi; odd count gives the minus sign.
    auto r = classify({K::PhiMinus, K::Fail, K::Fail});
    REQUIRE(r.has_value());
    CHECK(r->family == BellFamily::Phi);
    CHECK(r->sign == BellSign::Minus);
    r = classify({K::PhiMinus, K::PhiMinus, K::Fail});
    REQUIRE(r.has_value());
    CHECK(r->family == BellFamily::Phi);
    CHECK(r->sign == BellSign::Plus);
    r = classify({K::PsiMinus, K::PsiMinus, K::PsiMinus});
    REQUIRE(r.has_value());
    CHECK(r->family == BellFamily::Psi);
    CHECK(r->sign == BellSign::Minus);
    // Mixed families cannot come from a logical Bell state.
    CHECK_THROWS_AS(classify({K::PhiMinus, K::PsiMinus, K::Fail}), InconsistentRun);
}

TEST_CASE("exact uniform success is 1 - 2^-N, and per-state success matches") {
    for (int n = 1; n <= 12; ++n) {
        double expect = 1.0 - std::pow(2.0, -n);
        CHECK(exact_success_probability_uniform(n) == expect);
        // Minus-sign states always expose a minus pair; plus-sign states
        // fail only on the all-plus term, weight 2^-(N-1). The average of
        // the four recovers the uniform value.
        double avg = 0.0;
        for (auto [fam, sign] : kAllBellStates) {
            double per = sign == BellSign::Minus ? 1.0 : 1.0 - std::ldexp(1.0, -(n - 1));
            CHECK(exact_success_probability(label(fam, sign, n)) ==
                  doctest::Approx(per).epsilon(1e-14));
            avg += 0.25 * exact_success_probability(label(fam, sign, n));
        }
        CHECK(avg == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(exact_success_probability_uniform(2) == 0.75);
    CHECK(exact_success_probability_uniform(8) == 0.99609375);
}

TEST_CASE("sampled measurement agrees with enumeration") {
    const std::uint64_t trials = 200000;
    auto est = monte_carlo_success(4, trials, 21);
    double expect = exact_success_probability_uniform(4);
    CHECK(std::abs(est.estimate - expect) < 4.0 * est.stderr_);

    // Identified outcomes always report the true label.
    auto rng = trial_rng(77, 0, 0);
    for (int t = 0; t < 2000; ++t) {
        auto in = label(BellFamily::Psi, BellSign::Minus, 3);
        auto r = measure_logical_bell(in, rng);
        if (r.outcome) CHECK(*r.outcome == in);
    }
}

TEST_CASE("photon-level measurement channel matches the label-level one") {
    // Full device simulation per pair, cross-validated on success rate and
    // label correctness for N <= 4.
    auto net = build_bs_network();
    auto table = derive_bs_table(net);
    auto rng = trial_rng(31, 0, 0);
    for (int n = 1; n <= 4; ++n) {
        const int trials = 2000;
        for (auto [fam, sign] : kAllBellStates) {
            auto in = label(fam, sign, n);
            int succ_photon = 0;
            for (int t = 0; t < trials; ++t) {
                auto r = measure_logical_bell_photonic(in, net, table, rng);
                if (r.outcome) {
                    succ_photon++;
                    CHECK(*r.outcome == in);
                }
            }
            if (sign == BellSign::Minus) {
                CHECK(succ_photon == trials);  // some pair always shows a minus
            } else if (n == 1) {
                CHECK(succ_photon == 0);  // bare plus pair is never identified
            } else {
                double expect = 1.0 - std::ldexp(1.0, -(n - 1));
                double se = std::sqrt(expect * (1 - expect) / trials);
                CHECK(std::abs((double)succ_photon / trials - expect) < 4.5 * se);
            }
        }
    }
}

TEST_CASE("monte carlo estimate is reproducible and worker independent") {
    auto a = monte_carlo_success(6, 50000, 123);
    auto b = monte_carlo_success(6, 50000, 123);
    CHECK(a.estimate == b.estimate);
    CHECK(a.successes == b.successes);
    auto c = monte_carlo_success(6, 50000, 124);
    CHECK(a.successes != c.successes);  // seed actually matters
}
