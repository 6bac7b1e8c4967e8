#include "bellsim/loss.h"

#include "bellsim/rng.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace bellsim {

LossChannel LossChannel::from_decay(double gamma, double t) {
    if (gamma < 0 || t < 0) throw std::invalid_argument("from_decay: need gamma, t >= 0");
    return LossChannel{1.0 - std::exp(-gamma * t)};
}

namespace {

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("loss rate must be in [0,1]");
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

}  // namespace

LossMixture loss_mixture(cplx a, cplx b, int n_photons, double eta) {
    check_eta(eta);
    if (n_photons < 1) throw std::invalid_argument("loss_mixture: need N >= 1");
    LossMixture mix;
    for (int k = 0; k <= n_photons; ++k) {
        double w = binom(n_photons, k) * std::pow(1.0 - eta, n_photons - k) * std::pow(eta, k);
        if (w <= 0.0) continue;
        LossyLogicalQubit q;
        q.a = a;
        q.b = b;
        q.n_photons = n_photons;
        q.n_surviving = n_photons - k;
        if (k == 0) {
            q.z_error = false;
            mix.branches.emplace_back(w, q);
        } else {
            q.z_error = false;
            mix.branches.emplace_back(w / 2.0, q);
            q.z_error = true;
            mix.branches.emplace_back(w / 2.0, q);
        }
    }
    return mix;
}

LossyLogicalQubit apply_loss(cplx a, cplx b, int n_photons, double eta, std::mt19937_64& rng) {
    check_eta(eta);
    if (n_photons < 1) throw std::invalid_argument("apply_loss: need N >= 1");
    std::bernoulli_distribution lost(eta);
    int k = 0;
    for (int i = 0; i < n_photons; ++i)
        if (lost(rng)) ++k;
    LossyLogicalQubit q;
    q.a = a;
    q.b = b;
    q.n_photons = n_photons;
    q.n_surviving = n_photons - k;
    if (k > 0) {
        std::bernoulli_distribution coin(0.5);
        q.z_error = coin(rng);
    }
    return q;
}

double bm_success_prob_lossy(int n_photons, double eta) {
    check_eta(eta);
    if (n_photons < 1) throw std::invalid_argument("bm_success_prob_lossy: need N >= 1");
    return 1.0 - std::pow((1.0 + eta * (2.0 - eta)) / 2.0, n_photons);
}

double gate_teleport_success_prob(int n_photons, double eta) {
    check_eta(eta);
    if (n_photons < 1) throw std::invalid_argument("gate_teleport_success_prob: need N >= 1");
    return 1.0 - std::pow((1.0 + eta) / 2.0, n_photons);
}

namespace {

// Shared sampler: pair i is intact iff no involved photon is lost; an intact
// minus pair is identified; success iff >= 1 identification. one_sided drops
// the channel-side loss draw.
McEstimate mc_success(int n, double eta, bool one_sided, std::uint64_t trials,
                      std::uint64_t seed) {
    check_eta(eta);
    if (n < 1 || n > 32) throw std::invalid_argument("mc loss sampling: need 1 <= N <= 32");
    if (trials < 1) throw std::invalid_argument("mc loss sampling: need trials >= 1");
    struct Acc {
        std::uint64_t successes = 0;
        void merge(const Acc& o) { successes += o.successes; }
    };
    Acc total = run_trials<Acc>(trials, [&](std::uint64_t t, Acc& acc) {
        auto rng = trial_rng(seed, t, one_sided ? 0x10551 : 0x10550);
        std::bernoulli_distribution lost(eta);
        std::uniform_int_distribution<int> bit(0, 1);
        LogicalBellLabel in;
        in.family = bit(rng) ? BellFamily::Psi : BellFamily::Phi;
        in.sign = bit(rng) ? BellSign::Minus : BellSign::Plus;
        in.n_photons = n;
        LogicalBmResult ideal = measure_logical_bell(in, rng);
        bool any_minus = false;
        for (int i = 0; i < n; ++i) {
            bool broken = lost(rng);
            if (!one_sided && lost(rng)) broken = true;
            if (!broken && ideal.per_pair[static_cast<size_t>(i)] != BsOutcomeKind::Fail)
                any_minus = true;
        }
        if (any_minus) ++acc.successes;
    });
    McEstimate e;
    e.trials = trials;
    e.successes = total.successes;
    e.estimate = double(total.successes) / double(trials);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / double(trials));
    return e;
}

}  // namespace

McEstimate mc_bm_success_lossy(int n_photons, double eta, std::uint64_t trials,
                               std::uint64_t seed) {
    return mc_success(n_photons, eta, false, trials, seed);
}

McEstimate mc_gate_success_lossy(int n_photons, double eta, std::uint64_t trials,
                                 std::uint64_t seed) {
    return mc_success(n_photons, eta, true, trials, seed);
}

}  // namespace bellsim
