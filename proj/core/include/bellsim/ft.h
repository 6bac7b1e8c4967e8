#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Pauli-frame Monte Carlo for the concatenated-code loss threshold: a
// teleportation-based correction round on a verified encoded Bell pair, the
// level-1 loss error model, and threshold search by bisection on the
// level-to-level contraction of logical error rates.
namespace bellsim {

struct ErrorRateVector {
    double memory_z = 0.0;   // Z per memory location
    double gate_fail = 0.0;  // heralded Hadamard/CZ teleportation failure
    double x_rate = 0.0;     // per successful gate, current level
    double z_rate = 0.0;
    bool depol_on_fail = true;  // failed gate leaves X and Z each with prob 1/2
};

ErrorRateVector level1_error_model(int n_photons, double eta);

enum class LocationType { Memory, Hadamard, CZ, PlusPrep, XMeasure };

enum class Stage { Prep, Verify1, HLayer, Verify2, Bm, Spare };

struct Location {
    LocationType type = LocationType::Memory;
    int q1 = -1;
    int q2 = -1;      // CZ only
    Stage stage = Stage::Prep;
    int pair = -1;    // Bm-stage gate/measurement rows: transversal pair index
    char side = 0;    // Bm-stage XMeasure: 'a' (data block) or 'b' (pair block)
    bool check = false;  // verification XMeasure: any nonzero outcome rejects
};

struct CircuitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TelecorrectionCircuit {
    int n_qubits = 0;
    std::array<int, 7> output_qubits{};  // block handed on after correction
    std::vector<Location> locations;

    int count(LocationType t) const;
    double fraction(LocationType t) const;
};

// Correction round on a verified encoded Bell pair: graph-state preparation,
// two rounds of stabilizer verification (flagged after the transversal H
// layer), and a transversal Bell measurement against the incoming block.
TelecorrectionCircuit default_telecorrection_circuit();

std::string save_circuit(const TelecorrectionCircuit& c);
TelecorrectionCircuit load_circuit(const std::string& text);  // throws CircuitError

struct RoundResult {
    ErrorRateVector rates;   // rates for the next level
    double reject_rate = 0.0;  // verification resamples per attempt
    uint64_t trials = 0;
};

// One concatenation step: all locations draw errors from rates_in; heralded
// failures before the Bell-measurement stage are resampled (fresh resources),
// failures inside it erase the pair's measurement. Returns the corrected
// logical rates. Inputs with Pauli rates beyond 0.05 are reported as saturated
// without simulating.
RoundResult simulate_round(const ErrorRateVector& rates_in,
                           const TelecorrectionCircuit& circuit, uint64_t trials,
                           uint64_t seed);

inline ErrorRateVector simulate_telecorrection(const ErrorRateVector& rates_in,
                                               const TelecorrectionCircuit& circuit,
                                               uint64_t trials, uint64_t seed) {
    return simulate_round(rates_in, circuit, trials, seed).rates;
}

// Exhaustive single-fault machinery. pauli bits: 1 = X, 2 = Z, 3 = Y; herald
// marks a Bm-stage gate as failed instead.
struct FaultSpec {
    size_t location = 0;
    uint8_t pauli1 = 0;
    uint8_t pauli2 = 0;
    bool herald = false;
};

struct FaultOutcome {
    bool rejected = false;  // verification caught it
    bool heralded = false;  // round flagged failure
    bool logical_x = false;
    bool logical_z = false;

    bool harmless() const { return rejected || heralded || (!logical_x && !logical_z); }
};

std::vector<FaultSpec> enumerate_single_faults(const TelecorrectionCircuit& c);
FaultOutcome inject_single_fault(const TelecorrectionCircuit& c, const FaultSpec& f,
                                 uint64_t seed);

struct NoContraction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LevelRates {
    double x_rate = 0.0;
    double z_rate = 0.0;
    double gate_fail = 0.0;
    double scalar() const;
};

// Rates at levels 1..levels (levels-1 round simulations).
std::vector<LevelRates> level_curve(int n_photons, double eta, int levels,
                                    const TelecorrectionCircuit& circuit,
                                    uint64_t trials, uint64_t seed);

// Componentwise contraction: no rate may grow significantly (3 sigma at the
// given trial count) at any step, with entries below the Monte Carlo floor
// (20 counts) always allowed.
bool is_contracting(const std::vector<LevelRates>& curve, uint64_t trials);

struct ThresholdResult {
    int n_photons = 0;
    double eta_threshold = 0.0;
    int levels_checked = 0;
    uint64_t trials_per_level = 0;
    std::vector<LevelRates> contraction_curve;  // at the last contracting eta
};

inline constexpr double kEtaBisectTol = 5e-5;

ThresholdResult find_threshold(int n_photons, int levels, uint64_t trials,
                               uint64_t seed);
ThresholdResult find_threshold(int n_photons, int levels, uint64_t trials,
                               uint64_t seed, const TelecorrectionCircuit& circuit);

}  // namespace bellsim
