#pragma once
#include <array>
#include <complex>
#include <random>
#include <vector>

#include "bellsim/photonic.h"

// Teleportation and gates on block-encoded qubits: deterministic Pauli X and
// Z(theta), teleportation over a 2N-photon channel, gate teleportation for
// Hadamard and CZ, and resource accounting.
namespace bellsim {

// Amplitudes over {|0L> = |+>^N, |1L> = |->^N}.
struct LogicalQubitState {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    int n_photons = 1;
};

LogicalQubitState make_logical(cplx a, cplx b, int n_photons);
double fidelity(const LogicalQubitState& u, const LogicalQubitState& v);  // |<u|v>|^2

// Polarization amplitudes, index bit i = photon i (0 = H, 1 = V). n <= 10.
std::vector<cplx> photon_level_expansion(const LogicalQubitState& q);

LogicalQubitState pauli_x(const LogicalQubitState& q);                 // (a,b) -> (b,a)
LogicalQubitState z_rotation(const LogicalQubitState& q, double theta);  // (a,b) -> (a,e^{i theta} b)

struct PauliCorrection {
    bool x = false;
    bool z = false;
};

// Outcome -> correction (verified by the restoration property in tests).
PauliCorrection correction_for(BellState outcome);
// X first, then Z.
LogicalQubitState apply_correction(const LogicalQubitState& q, PauliCorrection c);

enum class GateKind { TeleportIdentity, Hadamard, CZ };

// Logical-amplitude form of the entangled resource consumed by one gate.
// TeleportIdentity/Hadamard: 4 amplitudes over {00,01,10,11} with the output
// qubit second. CZ: 16 amplitudes over (in1,out1,in2,out2).
struct GateChannel {
    GateKind kind = GateKind::TeleportIdentity;
    int n_photons = 1;
    std::vector<cplx> amps;
};
GateChannel make_channel(GateKind kind, int n_photons);

struct TeleportResult {
    bool success = false;
    LogicalQubitState output;  // correction already applied; n_photons refreshed
    BellState observed{};
    PauliCorrection correction;
    bool residual_z = false;  // sign read wrong because lost pairs hid minus terms
};

// Teleports q through a fresh logical Bell channel. Loss rate eta applies to
// both photons of every measured pair (input photon and channel photon).
TeleportResult teleport(const LogicalQubitState& q, double eta, std::mt19937_64& rng);

struct HadamardResult {
    bool success = false;
    LogicalQubitState output;
    BellState observed{};
    PauliCorrection correction;
    bool residual_x = false;  // the silent Z commuted through H
};

// Gate teleportation with the |Z> resource, prepared lossless and used
// immediately; only the input qubit's photons see eta.
HadamardResult hadamard_via_teleport(const LogicalQubitState& q, double eta,
                                     std::mt19937_64& rng);

struct TwoQubitState {
    std::array<cplx, 4> amps{};  // {00,01,10,11} logical
    int n_photons = 1;
};

struct CzResult {
    bool success = false;
    TwoQubitState output;
    BellState observed1{};
    BellState observed2{};
    PauliCorrection correction1, correction2;
    bool residual_z1 = false;
    bool residual_z2 = false;
};

// Two teleportations into the |Z'> resource; succeeds only if both logical
// Bell measurements succeed.
CzResult cz_via_teleport(const LogicalQubitState& q1, const LogicalQubitState& q2,
                         double eta, std::mt19937_64& rng);

// Relative cost of a computation consuming n_h Hadamards, n_cz CZs and
// n_plus fresh |+> states.
inline constexpr long long kHadamardCost = 98;
inline constexpr long long kCzCost = 343;
inline constexpr long long kPlusCost = 164;
long long resource_cost(long long n_h, long long n_cz, long long n_plus);

// Location-type fractions of the reference correction circuit.
struct OperationFractions {
    double memory;
    double hadamard;
    double cz;
    double plus_prep;
    double x_measure;
};
inline constexpr OperationFractions kCircuitFractions{0.284, 0.098, 0.343, 0.164, 0.111};

}  // namespace bellsim
