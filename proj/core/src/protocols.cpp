#include "bellsim/protocols.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace bellsim {
namespace {

LogicalQubitState apply_pauli(const LogicalQubitState& q, bool x, bool z) {
    LogicalQubitState r = q;
    if (x) std::swap(r.a, r.b);
    if (z) r.b = -r.b;
    return r;
}

// Receiver-side Pauli left behind by a Bell-channel teleportation outcome.
// X is applied after Z here, matching sigma(PsiMinus) = X*Z.
LogicalQubitState apply_outcome_pauli(const LogicalQubitState& q, BellState m) {
    LogicalQubitState r = q;
    if (m.sign == BellSign::Minus) r.b = -r.b;
    if (m.family == BellFamily::Psi) std::swap(r.a, r.b);
    return r;
}

struct BmSample {
    bool success = false;
    BellState true_outcome{};
    BellState observed{};
};

// One logical Bell measurement against half of a maximally entangled logical
// resource: the outcome is uniform over the four labels regardless of the
// input amplitudes. Pair i is unreadable when any of its photons is lost.
BmSample sample_channel_bm(int n, double eta, bool both_sided, std::mt19937_64& rng) {
    if (n < 1 || n > 62) throw std::invalid_argument("sample_channel_bm: bad n");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("loss rate must be in [0,1]");
    BmSample s;
    std::uniform_int_distribution<uint64_t> bits;
    uint64_t r = bits(rng);
    s.true_outcome.family = (r & 1) ? BellFamily::Psi : BellFamily::Phi;
    bool minus = (r >> 1) & 1;

    uint64_t mask = 0;
    for (int i = 0; i + 1 < n; ++i)
        if ((r >> (2 + i)) & 1) mask |= uint64_t(1) << i;
    if ((std::popcount(mask) & 1) != int(minus)) mask |= uint64_t(1) << (n - 1);
    s.true_outcome.sign = minus ? BellSign::Minus : BellSign::Plus;

    double p_break = both_sided ? 1.0 - (1.0 - eta) * (1.0 - eta) : eta;
    std::bernoulli_distribution lost(p_break);
    uint64_t visible = 0;
    for (int i = 0; i < n; ++i) {
        bool broken = (p_break > 0.0) && lost(rng);
        if (!broken && ((mask >> i) & 1)) visible |= uint64_t(1) << i;
    }
    s.success = visible != 0;
    s.observed.family = s.true_outcome.family;
    s.observed.sign = (std::popcount(visible) & 1) ? BellSign::Minus : BellSign::Plus;
    return s;
}

void check_state(const LogicalQubitState& q) {
    if (q.n_photons < 1) throw std::invalid_argument("logical state needs n_photons >= 1");
    double n2 = std::norm(q.a) + std::norm(q.b);
    if (std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument("logical state not normalized");
}

}  // namespace

LogicalQubitState make_logical(cplx a, cplx b, int n_photons) {
    if (n_photons < 1) throw std::invalid_argument("make_logical: n_photons >= 1");
    double n2 = std::sqrt(std::norm(a) + std::norm(b));
    if (n2 == 0.0) throw std::invalid_argument("make_logical: zero state");
    return {a / n2, b / n2, n_photons};
}

double fidelity(const LogicalQubitState& u, const LogicalQubitState& v) {
    return std::norm(std::conj(u.a) * v.a + std::conj(u.b) * v.b);
}

std::vector<cplx> photon_level_expansion(const LogicalQubitState& q) {
    if (q.n_photons > 10)
        throw std::length_error("photon_level_expansion: n_photons > 10");
    size_t dim = size_t(1) << q.n_photons;
    double scale = std::pow(2.0, -0.5 * q.n_photons);
    std::vector<cplx> out(dim);
    for (size_t x = 0; x < dim; ++x) {
        double sgn = (std::popcount(x) & 1) ? -1.0 : 1.0;
        out[x] = scale * (q.a + sgn * q.b);
    }
    return out;
}

LogicalQubitState pauli_x(const LogicalQubitState& q) { return apply_pauli(q, true, false); }

LogicalQubitState z_rotation(const LogicalQubitState& q, double theta) {
    LogicalQubitState r = q;
    r.b *= std::polar(1.0, theta);
    return r;
}

PauliCorrection correction_for(BellState outcome) {
    PauliCorrection c;
    c.x = outcome.family == BellFamily::Psi;
    c.z = outcome.sign == BellSign::Minus;
    return c;
}

LogicalQubitState apply_correction(const LogicalQubitState& q, PauliCorrection c) {
    LogicalQubitState r = q;
    if (c.x) std::swap(r.a, r.b);
    if (c.z) r.b = -r.b;
    return r;
}

GateChannel make_channel(GateKind kind, int n_photons) {
    if (n_photons < 1) throw std::invalid_argument("make_channel: n_photons >= 1");
    GateChannel ch;
    ch.kind = kind;
    ch.n_photons = n_photons;
    const double h = 0.5;
    switch (kind) {
        case GateKind::TeleportIdentity:
            ch.amps = {cplx(M_SQRT1_2), 0.0, 0.0, cplx(M_SQRT1_2)};
            break;
        case GateKind::Hadamard:
            ch.amps = {h, h, h, -h};
            break;
        case GateKind::CZ:
            ch.amps.assign(16, 0.0);
            ch.amps[0b0000] = h;
            ch.amps[0b0011] = h;
            ch.amps[0b1100] = h;
            ch.amps[0b1111] = -h;
            break;
    }
    return ch;
}

TeleportResult teleport(const LogicalQubitState& q, double eta, std::mt19937_64& rng) {
    check_state(q);
    TeleportResult r;
    BmSample s = sample_channel_bm(q.n_photons, eta, true, rng);
    if (!s.success) return r;
    r.success = true;
    r.observed = s.observed;
    r.correction = correction_for(s.observed);
    r.residual_z = s.observed.sign != s.true_outcome.sign;
    r.output = apply_correction(apply_outcome_pauli(q, s.true_outcome), r.correction);
    r.output.n_photons = q.n_photons;
    return r;
}

HadamardResult hadamard_via_teleport(const LogicalQubitState& q, double eta,
                                     std::mt19937_64& rng) {
    check_state(q);
    HadamardResult r;
    BmSample s = sample_channel_bm(q.n_photons, eta, false, rng);
    if (!s.success) return r;
    r.success = true;
    r.observed = s.observed;
    r.correction = correction_for(s.observed);
    r.residual_x = s.observed.sign != s.true_outcome.sign;
    LogicalQubitState pre =
        apply_correction(apply_outcome_pauli(q, s.true_outcome), r.correction);
    r.output.a = (pre.a + pre.b) * M_SQRT1_2;
    r.output.b = (pre.a - pre.b) * M_SQRT1_2;
    r.output.n_photons = q.n_photons;
    return r;
}

CzResult cz_via_teleport(const LogicalQubitState& q1, const LogicalQubitState& q2,
                         double eta, std::mt19937_64& rng) {
    check_state(q1);
    check_state(q2);
    if (q1.n_photons != q2.n_photons)
        throw std::invalid_argument("cz_via_teleport: photon counts differ");
    CzResult r;
    BmSample s1 = sample_channel_bm(q1.n_photons, eta, false, rng);
    BmSample s2 = sample_channel_bm(q2.n_photons, eta, false, rng);
    if (!s1.success || !s2.success) return r;
    r.success = true;
    r.observed1 = s1.observed;
    r.observed2 = s2.observed;
    r.correction1 = correction_for(s1.observed);
    r.correction2 = correction_for(s2.observed);
    r.residual_z1 = s1.observed.sign != s1.true_outcome.sign;
    r.residual_z2 = s2.observed.sign != s2.true_outcome.sign;
    LogicalQubitState u =
        apply_correction(apply_outcome_pauli(q1, s1.true_outcome), r.correction1);
    LogicalQubitState v =
        apply_correction(apply_outcome_pauli(q2, s2.true_outcome), r.correction2);
    r.output.amps = {u.a * v.a, u.a * v.b, u.b * v.a, -u.b * v.b};
    r.output.n_photons = q1.n_photons;
    return r;
}

long long resource_cost(long long n_h, long long n_cz, long long n_plus) {
    if (n_h < 0 || n_cz < 0 || n_plus < 0)
        throw std::domain_error("resource_cost: counts must be nonnegative");
    return kHadamardCost * n_h + kCzCost * n_cz + kPlusCost * n_plus;
}

}  // namespace bellsim
