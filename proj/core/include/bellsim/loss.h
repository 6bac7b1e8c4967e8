#pragma once
#include "bellsim/logical.h"

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

// Photon loss on GHZ-encoded logical qubits. eta is the per-photon loss
// probability (eta = 1 - exp(-gamma t)); losing any photon collapses the
// qubit to the remaining GHZ form and flips its phase with probability 1/2.
namespace bellsim {

struct LossChannel {
    double eta = 0.0;
    static LossChannel from_decay(double gamma, double t);
};

struct LossyLogicalQubit {
    cplx a{1, 0}, b{0, 0};  // amplitudes on |0_L>, |1_L>
    int n_photons = 1;
    int n_surviving = 1;
    bool z_error = false;  // Pauli-frame flag, never folded into a, b
};

struct LossMixture {
    std::vector<std::pair<double, LossyLogicalQubit>> branches;
};

// Exact loss mixture: branch weight for k lost photons is
// C(N,k) (1-eta)^(N-k) eta^k, split equally over z_error for k >= 1.
// Zero-weight branches are dropped.
LossMixture loss_mixture(cplx a, cplx b, int n_photons, double eta);

// Samples one branch by applying i.i.d. per-photon loss.
LossyLogicalQubit apply_loss(cplx a, cplx b, int n_photons, double eta, std::mt19937_64& rng);

// Logical-BM success probability with loss eta on both measured qubits:
// 1 - ((1 + eta(2-eta)) / 2)^N.
double bm_success_prob_lossy(int n_photons, double eta);

// One-sided loss (gate teleportation, channel prepared losslessly):
// 1 - ((1 + eta) / 2)^N.
double gate_teleport_success_prob(int n_photons, double eta);

// Monte Carlo cross-check of bm_success_prob_lossy: per-photon loss on both
// qubits, a pair with any lost photon cannot be identified, success iff at
// least one intact pair shows a minus outcome.
McEstimate mc_bm_success_lossy(int n_photons, double eta, std::uint64_t trials,
                               std::uint64_t seed);

// Same for the one-sided-loss form.
McEstimate mc_gate_success_lossy(int n_photons, double eta, std::uint64_t trials,
                                 std::uint64_t seed);

}  // namespace bellsim
