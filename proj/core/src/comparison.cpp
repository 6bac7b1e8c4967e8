#include "bellsim/comparison.h"

#include <cmath>
#include <stdexcept>

namespace bellsim {
namespace {

constexpr double kLatticeTol = 1e-9;

bool near_integer(double x, double* out = nullptr) {
    double r = std::round(x);
    if (std::abs(x - r) > kLatticeTol) return false;
    if (out) *out = r;
    return true;
}

bool is_physical(Scheme s, int m, double nbar) {
    double r = 0.0;
    switch (s) {
        case Scheme::Ours:
            // two N-photon blocks, nbar = 2N
            return near_integer(nbar, &r) && r >= 2 && std::fmod(r, 2.0) == 0.0;
        case Scheme::Grice:
            // doubling ancilla ladder, nbar = 2^k
            if (!near_integer(nbar, &r) || r < 2) return false;
            while (std::fmod(r, 2.0) == 0.0) r /= 2.0;
            return r == 1.0;
        case Scheme::EwertAncilla:
            // nbar = 2 + 4 Nm
            return near_integer(nbar, &r) && r >= 2 && std::fmod(r - 2.0, 4.0) == 0.0;
        case Scheme::EwertParity:
            return near_integer(nbar, &r) && r >= 2 * m &&
                   std::fmod(r, 2.0 * m) == 0.0;
        case Scheme::ZaidiSqueeze:
        case Scheme::CoherentState:
        case Scheme::Hybrid:
            return true;
    }
    return false;
}

}  // namespace

std::string scheme_name(Scheme s, int parity_m) {
    switch (s) {
        case Scheme::Ours: return "ours";
        case Scheme::Grice: return "grice";
        case Scheme::EwertAncilla: return "ewert_ancilla";
        case Scheme::EwertParity:
            return parity_m > 0 ? "ewert_parity_m" + std::to_string(parity_m)
                                : "ewert_parity";
        case Scheme::ZaidiSqueeze: return "zaidi";
        case Scheme::CoherentState: return "coherent";
        case Scheme::Hybrid: return "hybrid";
    }
    return "unknown";
}

double ps_ours(double nbar) {
    if (nbar <= 0.0) throw std::domain_error("ps_ours: nbar must be positive");
    return 1.0 - std::exp2(-nbar / 2.0);
}

double ps_grice(double nbar) {
    if (nbar < 2.0) throw std::domain_error("ps_grice: nbar must be >= 2");
    return 1.0 - 1.0 / nbar;
}

double ps_ewert_ancilla(double nbar) {
    if (nbar <= 0.0) throw std::domain_error("ps_ewert_ancilla: nbar must be positive");
    return 1.0 - std::exp2(-nbar / 4.0 - 0.5);
}

double ps_ewert_parity(double nbar, int m) {
    if (m < 1) throw std::domain_error("ps_ewert_parity: m must be >= 1");
    if (nbar <= 0.0) throw std::domain_error("ps_ewert_parity: nbar must be positive");
    return 1.0 - std::exp2(-nbar / (2.0 * m));
}

double ps_hybrid(double nbar) {
    if (nbar < 2.0) throw std::domain_error("ps_hybrid: nbar must be >= 2");
    return 1.0 - std::exp(-nbar + 2.0) / 2.0;
}

ZaidiPoint zaidi_point(double r) {
    if (r < 0.0) throw std::domain_error("zaidi_point: r must be nonnegative");
    ZaidiPoint p;
    double sh = std::sinh(r);
    p.nbar = 2.0 * std::cosh(2.0 * r) + 4.0 * sh * sh;
    if (std::abs(r - kZaidiOperatingR) < 1e-12) p.ps = kZaidiOperatingPs;
    return p;
}

namespace {

double coherent_nbar(double alpha) {
    double a2 = alpha * alpha;
    double e2 = std::exp(-2.0 * a2);
    double e4 = std::exp(-4.0 * a2);
    return a2 * ((1.0 - e2) / (1.0 + e4) + (1.0 + e2) / (1.0 - e4));
}

}  // namespace

SchemePoint coherent_scheme(double alpha) {
    if (alpha <= 0.0)
        throw std::domain_error("coherent_scheme: alpha must be positive");
    SchemePoint p;
    p.nbar = coherent_nbar(alpha);
    p.ps = 1.0 - 1.0 / (2.0 * std::cosh(2.0 * alpha * alpha));
    return p;
}

double coherent_alpha_for_nbar(double nbar) {
    // nbar(alpha) decreases to 1/2 as alpha -> 0 and grows without bound
    if (nbar <= 0.5)
        throw std::domain_error("coherent_alpha_for_nbar: nbar must exceed 1/2");
    double lo = 1e-8, hi = 1.0;
    while (coherent_nbar(hi) < nbar) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (coherent_nbar(mid) < nbar)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<SchemeCurvePoint> generate_figure2(const std::vector<double>& nbar_grid,
                                               const std::vector<int>& parity_ms) {
    std::vector<SchemeCurvePoint> out;
    auto push = [&](Scheme s, int m, double nbar, double ps) {
        out.push_back({s, m, nbar, ps, is_physical(s, m, nbar)});
    };
    for (double nbar : nbar_grid) {
        push(Scheme::Ours, 0, nbar, ps_ours(nbar));
        if (nbar >= 2.0) push(Scheme::Grice, 0, nbar, ps_grice(nbar));
        push(Scheme::EwertAncilla, 0, nbar, ps_ewert_ancilla(nbar));
        for (int m : parity_ms)
            push(Scheme::EwertParity, m, nbar, ps_ewert_parity(nbar, m));
        if (nbar >= 2.0) push(Scheme::Hybrid, 0, nbar, ps_hybrid(nbar));
        if (nbar > 0.5) {
            double alpha = coherent_alpha_for_nbar(nbar);
            push(Scheme::CoherentState, 0, nbar, coherent_scheme(alpha).ps);
        }
    }
    ZaidiPoint zp = zaidi_point(kZaidiOperatingR);
    push(Scheme::ZaidiSqueeze, 0, zp.nbar, *zp.ps);
    return out;
}

std::vector<double> uniform_grid(double start, double end, double step) {
    if (step <= 0.0) throw std::domain_error("uniform_grid: step must be positive");
    std::vector<double> g;
    for (double x = start; x <= end + step * 1e-9; x += step) g.push_back(x);
    return g;
}

}  // namespace bellsim
