#include "bellsim/photonic.h"

#include <cmath>
#include <numeric>

namespace bellsim {

double TwoPhotonState::norm2() const {
    double s = 0;
    for (const auto& [p, a] : amps_) s += std::norm(a);
    return s;
}

void TwoPhotonState::normalize() {
    double n = std::sqrt(norm2());
    if (n < 1e-300) throw std::runtime_error("TwoPhotonState: cannot normalize zero state");
    for (auto& [p, a] : amps_) a /= n;
}

void TwoPhotonState::prune(double eps) {
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < eps)
            it = amps_.erase(it);
        else
            ++it;
    }
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
    if (u.rows() != u.cols()) return false;
    Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() < tol;
}

TwoPhotonState evolve_unchecked(const TwoPhotonState& in, const Eigen::MatrixXcd& u) {
    const int m = in.mode_count();
    if (u.rows() != m || u.cols() != m)
        throw std::invalid_argument("evolve: matrix dimension does not match mode count");
    static const double kRt2 = std::sqrt(2.0);

    // c'_{pq} = sum_{m<=n} c_{mn} (U_pm U_qn + U_qm U_pn) / sqrt(2)^(d_pq + d_mn)
    TwoPhotonState out(m);
    std::vector<cplx> acc(static_cast<size_t>(m) * m, cplx(0, 0));
    for (const auto& [pair, c] : in.amplitudes()) {
        const int a = pair.m1, b = pair.m2;
        const double in_scale = pair.bunched() ? 1.0 / kRt2 : 1.0;
        for (int p = 0; p < m; ++p) {
            const cplx upa = u(p, a), upb = u(p, b);
            for (int q = p; q < m; ++q) {
                cplx t = upa * u(q, b) + u(q, a) * upb;
                acc[static_cast<size_t>(p) * m + q] += c * in_scale * t;
            }
        }
    }
    for (int p = 0; p < m; ++p)
        for (int q = p; q < m; ++q) {
            cplx v = acc[static_cast<size_t>(p) * m + q];
            if (p == q) v /= kRt2;
            if (std::abs(v) > 1e-15) out.set(ModePair(p, q), v);
        }
    return out;
}

TwoPhotonState evolve(const TwoPhotonState& in, const Eigen::MatrixXcd& u) {
    if (!is_unitary(u)) throw std::invalid_argument("evolve: matrix is not unitary");
    return evolve_unchecked(in, u);
}

std::string bell_name(BellState s) {
    std::string n = s.family == BellFamily::Phi ? "Phi" : "Psi";
    n += s.sign == BellSign::Plus ? "+" : "-";
    return n;
}

TwoPhotonState bell_input(BellState s, int mode_count) {
    // Diagonal-basis Bell pairs written out in H/V occupation:
    //   Phi+ = (HH + VV)/r2   Phi- = (HV + VH)/r2
    //   Psi+ = (HH - VV)/r2   Psi- = (VH - HV)/r2
    TwoPhotonState st(mode_count);
    const double r = 1.0 / std::sqrt(2.0);
    const int h0 = mode_index(0, Pol::H), v0 = mode_index(0, Pol::V);
    const int h1 = mode_index(1, Pol::H), v1 = mode_index(1, Pol::V);
    if (s.family == BellFamily::Phi && s.sign == BellSign::Plus) {
        st.set(ModePair(h0, h1), r);
        st.set(ModePair(v0, v1), r);
    } else if (s.family == BellFamily::Phi && s.sign == BellSign::Minus) {
        st.set(ModePair(h0, v1), r);
        st.set(ModePair(v0, h1), r);
    } else if (s.family == BellFamily::Psi && s.sign == BellSign::Plus) {
        st.set(ModePair(h0, h1), r);
        st.set(ModePair(v0, v1), -r);
    } else {
        st.set(ModePair(v0, h1), r);
        st.set(ModePair(h0, v1), -r);
    }
    return st;
}

namespace {

Eigen::Vector2cd jones(PolKet k) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (k) {
        case PolKet::H: return {1, 0};
        case PolKet::V: return {0, 1};
        case PolKet::Plus: return {r, r};
        default: return {r, -r};
    }
}

}  // namespace

TwoPhotonState product_input(PolKet photon1, PolKet photon2, int mode_count) {
    TwoPhotonState st(mode_count);
    Eigen::Vector2cd v1 = jones(photon1), v2 = jones(photon2);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            cplx amp = v1(p) * v2(q);
            if (std::abs(amp) > 0)
                st.add(ModePair(mode_index(0, static_cast<Pol>(p)),
                                mode_index(1, static_cast<Pol>(q))),
                       amp);
        }
    return st;
}

std::string target_name(TargetPair t) {
    auto s = identified_states(t);
    return bell_name(s[0]) + "," + bell_name(s[1]);
}

std::array<BellState, 2> identified_states(TargetPair t) {
    switch (t) {
        case TargetPair::PhiMinusPsiMinus:
            return {BellState{BellFamily::Phi, BellSign::Minus},
                    BellState{BellFamily::Psi, BellSign::Minus}};
        case TargetPair::PhiPlusPsiPlus:
            return {BellState{BellFamily::Phi, BellSign::Plus},
                    BellState{BellFamily::Psi, BellSign::Plus}};
        case TargetPair::PhiMinusPsiPlus:
            return {BellState{BellFamily::Phi, BellSign::Minus},
                    BellState{BellFamily::Psi, BellSign::Plus}};
        default:
            return {BellState{BellFamily::Phi, BellSign::Plus},
                    BellState{BellFamily::Psi, BellSign::Minus}};
    }
}

std::array<BellState, 2> confused_states(TargetPair t) {
    auto id = identified_states(t);
    std::array<BellState, 2> out{};
    int k = 0;
    for (auto [f, s] : kAllBellStates) {
        BellState b{f, s};
        if (!(b == id[0]) && !(b == id[1])) out[k++] = b;
    }
    return out;
}

namespace {

Eigen::Matrix2cd hwp(double theta) {
    Eigen::Matrix2cd m;
    m << std::cos(2 * theta), std::sin(2 * theta), std::sin(2 * theta), -std::cos(2 * theta);
    return m;
}

// Converts a Jones matrix expressed in the |+>/|-> frame to the H/V frame.
Eigen::Matrix2cd to_hv(const Eigen::Matrix2cd& diag_frame) {
    Eigen::Matrix2cd t;
    const double r = 1.0 / std::sqrt(2.0);
    t << r, r, r, -r;
    return t * diag_frame * t;
}

void embed_plate(Eigen::MatrixXcd& u, int spatial, const Eigen::Matrix2cd& j) {
    u.block<2, 2>(2 * spatial, 2 * spatial) = j;
}

// Polarizing BS between two spatial ports: transmits H, swaps V.
Eigen::MatrixXcd pbs(int modes, int a, int b) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(modes, modes);
    int av = mode_index(a, Pol::V), bv = mode_index(b, Pol::V);
    u(av, av) = 0;
    u(bv, bv) = 0;
    u(av, bv) = 1;
    u(bv, av) = 1;
    return u;
}

std::array<DetectorInfo, 4> standard_detectors() {
    return {DetectorInfo{0, 0, true, Pol::H}, DetectorInfo{1, 2, true, Pol::V},
            DetectorInfo{2, 1, false, Pol::H}, DetectorInfo{3, 3, false, Pol::V}};
}

BsNetwork assemble(const Eigen::Matrix2cd& plate0, const Eigen::Matrix2cd& plate1,
                   TargetPair target) {
    const int m = 8;
    Eigen::MatrixXcd win = Eigen::MatrixXcd::Identity(m, m);
    embed_plate(win, 0, plate0);
    embed_plate(win, 1, plate1);

    Eigen::MatrixXcd analyzers = Eigen::MatrixXcd::Identity(m, m);
    embed_plate(analyzers, 0, hwp(M_PI / 8));
    embed_plate(analyzers, 1, hwp(-M_PI / 8));

    BsNetwork net;
    net.unitary = pbs(m, 1, 3) * pbs(m, 0, 2) * analyzers * pbs(m, 0, 1) * win;
    net.target = target;
    net.detectors = standard_detectors();
    return net;
}

}  // namespace

int BsNetwork::detector_of_spatial(int spatial) const {
    for (const auto& d : detectors)
        if (d.spatial == spatial) return d.index;
    throw std::out_of_range("no detector on spatial port " + std::to_string(spatial));
}

BsNetwork build_bs_network(TargetPair target) {
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd z = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    Eigen::Matrix2cd s = (Eigen::Matrix2cd() << 1, 0, 0, cplx(0, 1)).finished();
    Eigen::Matrix2cd sdg = s.adjoint();

    // Per-port plates in the diagonal frame; the port-1 half-wave plate of the
    // base device is folded in afterwards.
    Eigen::Matrix2cd j0, j1;
    switch (target) {
        case TargetPair::PhiMinusPsiMinus:
            j0 = id;
            j1 = id;
            break;
        case TargetPair::PhiPlusPsiPlus:
            j0 = id;
            j1 = z;
            break;
        case TargetPair::PhiMinusPsiPlus:
            j0 = sdg;
            j1 = s;
            break;
        default:  // PhiPlusPsiMinus
            j0 = s;
            j1 = z * sdg;
            break;
    }
    return assemble(to_hv(j0), hwp(M_PI / 4) * to_hv(j1), target);
}

BsNetwork build_bs_network_with_plates(const Eigen::Matrix2cd& plate_port0,
                                       const Eigen::Matrix2cd& plate_port1) {
    return assemble(plate_port0, plate_port1, TargetPair::PhiMinusPsiMinus);
}

int ClickPattern::count() const {
    int c = 0;
    for (int i = 0; i < 4; ++i) c += (mask >> i) & 1;
    return c;
}

std::vector<int> ClickPattern::clicked() const {
    std::vector<int> v;
    for (int i = 0; i < 4; ++i)
        if (has(i)) v.push_back(i);
    return v;
}

std::map<ClickPattern, double> click_distribution(const TwoPhotonState& out_state,
                                                  const BsNetwork& net) {
    std::map<ClickPattern, double> dist;
    for (const auto& [pair, amp] : out_state.amplitudes()) {
        ClickPattern p;
        p.mask = static_cast<std::uint8_t>(
            (1u << net.detector_of_spatial(mode_spatial(pair.m1))) |
            (1u << net.detector_of_spatial(mode_spatial(pair.m2))));
        dist[p] += std::norm(amp);
    }
    return dist;
}

const PatternEntry& BsOutcomeTable::entry(ClickPattern p) const {
    auto it = patterns.find(p);
    if (it == patterns.end())
        throw std::out_of_range("click pattern not in outcome table");
    return it->second;
}

BsOutcomeTable derive_bs_table(const BsNetwork& net) {
    constexpr double kZero = 1e-12;
    BsOutcomeTable table;
    table.target = net.target;

    std::array<std::map<ClickPattern, double>, 4> dists;
    for (size_t i = 0; i < kAllBellStates.size(); ++i) {
        auto [f, s] = kAllBellStates[i];
        TwoPhotonState out = evolve(bell_input(BellState{f, s}), net.unitary);
        dists[i] = click_distribution(out, net);
        for (const auto& [pat, pr] : dists[i])
            if (pr > kZero) table.patterns[pat];  // touch to collect the union
    }

    auto confused = confused_states(net.target);
    auto index_of = [](BellState b) {
        for (size_t i = 0; i < kAllBellStates.size(); ++i)
            if (kAllBellStates[i].first == b.family && kAllBellStates[i].second == b.sign)
                return i;
        return size_t(0);
    };
    size_t c0 = index_of(confused[0]), c1 = index_of(confused[1]);

    for (auto& [pat, entry] : table.patterns) {
        int reachable = 0;
        size_t only = 0;
        for (size_t i = 0; i < 4; ++i) {
            auto it = dists[i].find(pat);
            double pr = it == dists[i].end() ? 0.0 : it->second;
            entry.prob_given[i] = pr;
            if (pr > kZero) {
                ++reachable;
                only = i;
            }
        }
        bool from_c0 = entry.prob_given[c0] > kZero;
        bool from_c1 = entry.prob_given[c1] > kZero;
        if (from_c0 != from_c1)
            throw InconsistentDevice(
                "click pattern distinguishes within the unidentified pair; device does not "
                "match its declared target " +
                target_name(net.target));
        if (reachable == 1) entry.label = BellState{kAllBellStates[only].first, kAllBellStates[only].second};
    }

    for (size_t i = 0; i < 4; ++i) {
        double s = 0;
        for (const auto& [pat, entry] : table.patterns)
            if (entry.label && index_of(*entry.label) == i) s += entry.prob_given[i];
        table.success_given[i] = s;
    }
    table.average_success =
        std::accumulate(table.success_given.begin(), table.success_given.end(), 0.0) / 4.0;
    return table;
}

std::string outcome_name(BsOutcomeKind k) {
    switch (k) {
        case BsOutcomeKind::PhiMinus: return "Phi-";
        case BsOutcomeKind::PsiMinus: return "Psi-";
        default: return "fail";
    }
}

BsOutcome simulate_bs(const TwoPhotonState& input, const BsNetwork& net,
                      const BsOutcomeTable& table, std::mt19937_64& rng) {
    if (table.target != TargetPair::PhiMinusPsiMinus)
        throw std::invalid_argument("simulate_bs expects the Phi-/Psi- device");
    if (std::abs(input.norm2() - 1.0) > 1e-9)
        throw std::invalid_argument("simulate_bs: input state is not normalized");

    TwoPhotonState out = evolve(input, net.unitary);
    auto dist = click_distribution(out, net);

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double x = u01(rng), acc = 0;
    ClickPattern chosen = dist.rbegin()->first;
    for (const auto& [pat, pr] : dist) {
        acc += pr;
        if (x < acc) {
            chosen = pat;
            break;
        }
    }

    BsOutcome res;
    res.pattern = chosen;
    auto it = table.patterns.find(chosen);
    if (it != table.patterns.end() && it->second.label) {
        bool minus = it->second.label->sign == BellSign::Minus;
        if (it->second.label->family == BellFamily::Phi && minus)
            res.kind = BsOutcomeKind::PhiMinus;
        else if (it->second.label->family == BellFamily::Psi && minus)
            res.kind = BsOutcomeKind::PsiMinus;
    }
    return res;
}

}  // namespace bellsim
