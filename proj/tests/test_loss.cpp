#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "bellsim/loss.h"
#include "bellsim/rng.h"

using namespace bellsim;

TEST_CASE("closed forms at frozen reference points") {
    // Independently computed: 1 - ((1 + eta(2-eta))/2)^N and 1 - ((1+eta)/2)^N.
    CHECK(bm_success_prob_lossy(4, 0.1) == doctest::Approx(0.8746662994).epsilon(1e-9));
    CHECK(gate_teleport_success_prob(4, 0.1) == doctest::Approx(0.90849375).epsilon(1e-12));
    CHECK(gate_teleport_success_prob(4, 0.05) ==
          doctest::Approx(0.924030859375).epsilon(1e-12));
    CHECK(bm_success_prob_lossy(1, 0.5) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("boundary identities are exact") {
    for (int n : {1, 2, 4, 8, 16}) {
        CHECK(bm_success_prob_lossy(n, 0.0) == 1.0 - std::pow(2.0, -n));
        CHECK(bm_success_prob_lossy(n, 1.0) == 0.0);
        CHECK(gate_teleport_success_prob(n, 0.0) == 1.0 - std::pow(2.0, -n));
        CHECK(gate_teleport_success_prob(n, 1.0) == 0.0);
    }
}

TEST_CASE("both-sided loss equals one-sided loss at the combined rate") {
    // Losing either photon of a pair is one event of rate 1-(1-eta)^2.
    for (int n : {1, 3, 8}) {
        for (double eta : {0.05, 0.2, 0.7}) {
            double lambda = 1.0 - (1.0 - eta) * (1.0 - eta);
            CHECK(bm_success_prob_lossy(n, eta) ==
                  doctest::Approx(gate_teleport_success_prob(n, lambda)).epsilon(1e-12));
        }
    }
}

TEST_CASE("loss mixture branch weights are binomial with an even sign split") {
    auto mix = loss_mixture(cplx(1, 0), cplx(0, 0), 2, 0.1);
    std::map<int, double> by_lost;       // photons lost -> total weight
    std::map<int, double> by_lost_zerr;  // photons lost -> weight with z flag
    double total = 0;
    for (const auto& [w, q] : mix.branches) {
        by_lost[q.n_photons - q.n_surviving] += w;
        if (q.z_error) by_lost_zerr[q.n_photons - q.n_surviving] += w;
        total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(by_lost[0] == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(by_lost[1] == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(by_lost[2] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(by_lost_zerr[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(by_lost_zerr[1] == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(by_lost_zerr[2] == doctest::Approx(0.005).epsilon(1e-12));
    // Amplitudes are never folded into the Pauli frame.
    for (const auto& [w, q] : mix.branches) {
        CHECK(q.a == cplx(1, 0));
        CHECK(q.b == cplx(0, 0));
    }
}

TEST_CASE("sampled loss matches the mixture weights") {
    const int trials = 100000;
    auto rng = trial_rng(5, 0, 0);
    int lost1 = 0, zflips = 0;
    for (int t = 0; t < trials; ++t) {
        auto q = apply_loss(cplx(1, 0), cplx(0, 0), 2, 0.1, rng);
        if (q.n_surviving == 1) lost1++;
        if (q.z_error) zflips++;
    }
    double se1 = std::sqrt(0.18 * 0.82 / trials);
    CHECK(std::abs(lost1 / double(trials) - 0.18) < 4 * se1);
    // P(z flag) = (0.18 + 0.01) / 2.
    double pz = 0.095;
    CHECK(std::abs(zflips / double(trials) - pz) < 4 * std::sqrt(pz * (1 - pz) / trials));
}

TEST_CASE("decay parameterization") {
    CHECK(LossChannel::from_decay(0.0, 5.0).eta == 0.0);
    CHECK(LossChannel::from_decay(2.0, 0.0).eta == 0.0);
    CHECK(LossChannel::from_decay(1.0, 1.0).eta ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("monte carlo agrees with both closed forms on the reference grid") {
    const std::uint64_t trials = 30000;
    for (int n : {1, 2, 4, 8, 16}) {
        for (double eta : {0.0, 0.05, 0.1, 0.3}) {
            auto bm = mc_bm_success_lossy(n, eta, trials, mix_seed(1, n, 0, 0));
            double pbm = bm_success_prob_lossy(n, eta);
            double se = std::sqrt(std::max(pbm * (1 - pbm), 1e-12) / trials);
            CHECK(std::abs(bm.estimate - pbm) < 4.5 * se + 1e-9);

            auto gt = mc_gate_success_lossy(n, eta, trials, mix_seed(2, n, 0, 0));
            double pgt = gate_teleport_success_prob(n, eta);
            se = std::sqrt(std::max(pgt * (1 - pgt), 1e-12) / trials);
            CHECK(std::abs(gt.estimate - pgt) < 4.5 * se + 1e-9);
        }
    }
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS(bm_success_prob_lossy(0, 0.1));
    CHECK_THROWS(bm_success_prob_lossy(4, -0.1));
    CHECK_THROWS(bm_success_prob_lossy(4, 1.1));
    CHECK_THROWS(loss_mixture(cplx(1, 0), cplx(0, 0), 0, 0.1));
    CHECK_THROWS(LossChannel::from_decay(-1.0, 1.0));
}
