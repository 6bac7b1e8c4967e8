#include "bellsim/logical.h"

#include "bellsim/rng.h"

#include <bit>
#include <cmath>

namespace bellsim {

std::string logical_bell_name(const LogicalBellLabel& l) {
    return bell_name(BellState{l.family, l.sign}) + "(" + std::to_string(l.n_photons) + ")";
}

std::vector<BellState> PairwiseDecomposition::pair_labels(std::uint32_t minus_mask) const {
    std::vector<BellState> out(static_cast<size_t>(n_photons));
    for (int i = 0; i < n_photons; ++i)
        out[i] = BellState{family, (minus_mask >> i) & 1 ? BellSign::Minus : BellSign::Plus};
    return out;
}

PairwiseDecomposition expand_logical_bell(const LogicalBellLabel& label) {
    const int n = label.n_photons;
    if (n < 1) throw std::invalid_argument("expand_logical_bell: need N >= 1");
    if (n > 20) throw std::length_error("expand_logical_bell: term count 2^(N-1) too large for N > 20");

    PairwiseDecomposition d;
    d.family = label.family;
    d.sign = label.sign;
    d.n_photons = n;
    d.amplitude = std::pow(2.0, -(n - 1) / 2.0);
    d.terms.reserve(std::uint32_t(1) << (n - 1));
    const int want = label.sign == BellSign::Minus ? 1 : 0;
    for (std::uint32_t m = 0; m < (std::uint32_t(1) << n); ++m)
        if ((std::popcount(m) & 1) == want) d.terms.push_back(m);
    return d;
}

std::optional<LogicalBellLabel> classify(const std::vector<BsOutcomeKind>& per_pair) {
    if (per_pair.empty()) throw std::invalid_argument("classify: empty outcome list");
    int n_phi = 0, n_psi = 0;
    for (auto o : per_pair) {
        if (o == BsOutcomeKind::PhiMinus) ++n_phi;
        if (o == BsOutcomeKind::PsiMinus) ++n_psi;
    }
    if (n_phi > 0 && n_psi > 0)
        throw InconsistentRun("mixed Phi-/Psi- outcomes in one logical measurement");
    if (n_phi + n_psi == 0) return std::nullopt;
    LogicalBellLabel l;
    l.family = n_phi > 0 ? BellFamily::Phi : BellFamily::Psi;
    l.sign = ((n_phi + n_psi) & 1) == 0 ? BellSign::Plus : BellSign::Minus;
    l.n_photons = static_cast<int>(per_pair.size());
    return l;
}

namespace {

// Uniform draw over minus masks with fixed parity: N-1 free bits, last bit
// fixes the parity. Equivalent to sampling a decomposition term by weight.
std::uint32_t sample_minus_mask(int n, BellSign sign, std::mt19937_64& rng) {
    std::uint32_t m = 0;
    if (n > 1) {
        std::uniform_int_distribution<std::uint32_t> bits(0, (std::uint32_t(1) << (n - 1)) - 1);
        m = bits(rng);
    }
    int parity = std::popcount(m) & 1;
    int want = sign == BellSign::Minus ? 1 : 0;
    if (parity != want) m |= std::uint32_t(1) << (n - 1);
    return m;
}

BsOutcomeKind channel(BellState pair) {
    if (pair.sign == BellSign::Plus) return BsOutcomeKind::Fail;
    return pair.family == BellFamily::Phi ? BsOutcomeKind::PhiMinus : BsOutcomeKind::PsiMinus;
}

LogicalBmResult finish(std::vector<BsOutcomeKind> per_pair) {
    LogicalBmResult r;
    r.per_pair = std::move(per_pair);
    for (auto o : r.per_pair) {
        if (o == BsOutcomeKind::PhiMinus) ++r.n_phiminus;
        if (o == BsOutcomeKind::PsiMinus) ++r.n_psiminus;
    }
    r.outcome = classify(r.per_pair);
    return r;
}

}  // namespace

LogicalBmResult measure_logical_bell(const LogicalBellLabel& label, std::mt19937_64& rng) {
    const int n = label.n_photons;
    if (n < 1) throw std::invalid_argument("measure_logical_bell: need N >= 1");
    std::uint32_t mask = sample_minus_mask(n, label.sign, rng);
    std::vector<BsOutcomeKind> per_pair(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        per_pair[i] =
            channel(BellState{label.family, (mask >> i) & 1 ? BellSign::Minus : BellSign::Plus});
    return finish(std::move(per_pair));
}

LogicalBmResult measure_logical_bell_photonic(const LogicalBellLabel& label,
                                              const BsNetwork& net, const BsOutcomeTable& table,
                                              std::mt19937_64& rng) {
    const int n = label.n_photons;
    if (n < 1) throw std::invalid_argument("measure_logical_bell_photonic: need N >= 1");
    std::uint32_t mask = sample_minus_mask(n, label.sign, rng);
    std::vector<BsOutcomeKind> per_pair(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        BellState pair{label.family, (mask >> i) & 1 ? BellSign::Minus : BellSign::Plus};
        per_pair[i] = simulate_bs(bell_input(pair), net, table, rng).kind;
    }
    return finish(std::move(per_pair));
}

double exact_success_probability(const LogicalBellLabel& label) {
    PairwiseDecomposition d = expand_logical_bell(label);
    double fail = 0.0;
    const double w = d.amplitude * d.amplitude;
    for (std::uint32_t m : d.terms)
        if (m == 0) fail += w;
    return 1.0 - fail;
}

double exact_success_probability_uniform(int n_photons) {
    double s = 0.0;
    for (auto [f, sg] : kAllBellStates)
        s += exact_success_probability(LogicalBellLabel{f, sg, n_photons});
    return s / 4.0;
}

McEstimate monte_carlo_success(int n_photons, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("monte_carlo_success: need trials >= 1");
    struct Acc {
        std::uint64_t successes = 0;
        void merge(const Acc& o) { successes += o.successes; }
    };
    Acc total = run_trials<Acc>(trials, [&](std::uint64_t t, Acc& acc) {
        auto rng = trial_rng(seed, t);
        std::uniform_int_distribution<int> bit(0, 1);
        LogicalBellLabel in;
        in.family = bit(rng) ? BellFamily::Psi : BellFamily::Phi;
        in.sign = bit(rng) ? BellSign::Minus : BellSign::Plus;
        in.n_photons = n_photons;
        LogicalBmResult r = measure_logical_bell(in, rng);
        if (r.outcome && *r.outcome == in) ++acc.successes;
    });
    McEstimate e;
    e.trials = trials;
    e.successes = total.successes;
    e.estimate = double(total.successes) / double(trials);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / double(trials));
    return e;
}

}  // namespace bellsim
