#pragma once
#include "bellsim/photonic.h"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

// N-photon GHZ-encoded logical qubits (|0_L> = |+>^N, |1_L> = |->^N) and the
// logical Bell measurement built from N independent standard Bell
// measurements plus a parity rule.
namespace bellsim {

struct LogicalBellLabel {
    BellFamily family = BellFamily::Phi;
    BellSign sign = BellSign::Plus;
    int n_photons = 1;
    bool operator==(const LogicalBellLabel& o) const {
        return family == o.family && sign == o.sign && n_photons == o.n_photons;
    }
};

std::string logical_bell_name(const LogicalBellLabel& l);

// Expansion of a logical Bell state into N pairwise Bell states. Every term
// shares the logical family; bit i of minus_mask set means pair i is the
// minus-signed Bell state of that family. All 2^(N-1) terms carry the same
// amplitude and the minus-count parity matches the logical sign.
struct PairwiseDecomposition {
    BellFamily family = BellFamily::Phi;
    BellSign sign = BellSign::Plus;
    int n_photons = 1;
    double amplitude = 1.0;               // shared by every term
    std::vector<std::uint32_t> terms;     // minus masks, one per term

    std::vector<BellState> pair_labels(std::uint32_t minus_mask) const;
};

PairwiseDecomposition expand_logical_bell(const LogicalBellLabel& label);

struct InconsistentRun : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parity classification of N standard-Bell-measurement outcomes. Failure
// (all per-pair outcomes Fail) is returned as nullopt. Mixed PhiMinus and
// PsiMinus outcomes cannot arise from a logical Bell input and throw.
std::optional<LogicalBellLabel> classify(const std::vector<BsOutcomeKind>& per_pair);

struct LogicalBmResult {
    std::optional<LogicalBellLabel> outcome;  // nullopt = Failure
    std::vector<BsOutcomeKind> per_pair;
    int n_phiminus = 0;
    int n_psiminus = 0;
};

// Samples one logical Bell measurement at label granularity: draws a
// decomposition term, sends each pair through the standard-measurement
// channel (minus states identified, plus states fail), classifies.
LogicalBmResult measure_logical_bell(const LogicalBellLabel& label, std::mt19937_64& rng);

// Same measurement but each pair is simulated photon-by-photon through the
// actual device network; used to cross-validate the label-level channel.
LogicalBmResult measure_logical_bell_photonic(const LogicalBellLabel& label,
                                              const BsNetwork& net, const BsOutcomeTable& table,
                                              std::mt19937_64& rng);

// Success probability by enumeration over decomposition terms.
double exact_success_probability(const LogicalBellLabel& label);
// Uniform average over the four logical Bell states; equals 1 - 2^-N.
double exact_success_probability_uniform(int n_photons);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
};

// Monte Carlo estimate of the uniform-average logical success probability.
// Deterministic for a fixed seed, independent of worker count.
McEstimate monte_carlo_success(int n_photons, std::uint64_t trials, std::uint64_t seed);

}  // namespace bellsim
