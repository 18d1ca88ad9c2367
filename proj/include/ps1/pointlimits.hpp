#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "boundstates.hpp"
#include "model.hpp"
#include "spectra.hpp"

// Point interactions obtained by squeezing the barrier to the origin with
// x1 -> -0 first and x2 -> +0 second. Other approach paths are not modelled.
namespace ps1 {

enum class SqueezeFamily { Delta, TwoThirds, InvSquare };

inline const char* family_name(SqueezeFamily f) {
    switch (f) {
        case SqueezeFamily::Delta: return "delta";
        case SqueezeFamily::TwoThirds: return "l-2/3";
        case SqueezeFamily::InvSquare: return "l-2";
    }
    return "delta";
}

// Strength V(l) along one of the three squeezing rates.
struct SqueezeLaw {
    SqueezeFamily family = SqueezeFamily::Delta;
    double g = 1.0;

    double strength(double l, double m) const {
        if (!(l > 0.0)) fail(Errc::InvalidParameter, "squeezing needs l > 0");
        switch (family) {
            case SqueezeFamily::Delta: return g / l;
            case SqueezeFamily::TwoThirds: return g * std::cbrt(m / (l * l));
            case SqueezeFamily::InvSquare: return g / (l * l * m);
        }
        return g / l;
    }
};

// A pencil direction together with the rate at which it is squeezed. The
// pencil's V grid is ignored.
struct LimitSpec {
    PencilSpec pencil;
    SqueezeLaw law;
};

// v11 = V with v22 = v33 = 0: bound states exist at every finite l but none
// survive the squeeze.
inline bool is_type_three(const PencilSpec& pen) {
    return pen.vertex == Vertex::P1 && pen.alpha1 != 0.0 && pen.alpha2 == 0.0 && pen.alpha3 == 0.0;
}

// Off-diagonal shape of the limit matrix.
enum class LimitShape { Rotation, Lower, Upper };

struct LimitLevel {
    int n = 0;
    Parity parity = Parity::Plus;
    double E = 0.0;
    LimitShape shape = LimitShape::Rotation;
};

inline double chi_of(double E, double m) { return -std::sqrt((m * m - E * E) / 2.0) / E; }

namespace detail {

inline void require_g(double g) {
    if (g == 0.0 || !std::isfinite(g)) fail(Errc::InvalidParameter, "squeezed strength g must be finite and nonzero");
}

inline LimitLevel checked(LimitLevel lv, double m) {
    if (!(std::abs(lv.E) < m) || std::abs(lv.E) < tol::zero_energy * m)
        fail(Errc::OutOfValidityWindow, "limit energy falls outside 0 < |E| < m");
    return lv;
}

[[noreturn]] inline void unsupported(const SpectrumType& t, SqueezeFamily f) {
    fail(Errc::UnsupportedCombination,
         std::string("no point interaction for type ") + tag_name(t.tag) + " under the " + family_name(f) + " squeeze");
}

}  // namespace detail

// Closed-form limit energy of level n. Types P and D have two delta-limit
// levels: n = 0 is E+ and n = 1 is E-. In the l^-2 families n = 0 is the
// delta-limit ground state at the same g: the l^-2 squeeze itself pushes
// that level into the threshold, so it is realized by the 1/l squeeze.
// Returns nullopt when the squeeze leaves no bound state at all (type III).
inline std::optional<LimitLevel> limit_energy(const LimitSpec& spec, int n) {
    const PencilSpec& pen = spec.pencil;
    const double m = pen.m;
    if (n < 0) fail(Errc::InvalidParameter, "level index must be non-negative");
    detail::require_g(spec.law.g);
    if (is_type_three(pen)) return std::nullopt;

    const SpectrumType t = classify(pen);
    const SqueezeFamily fam = spec.law.family;
    const auto nv = detail::normalize_alpha2(t, spec.law.g);
    const double g = nv.V;  // a2-normalized strength
    const double npi2 = n * n * kPi * kPi;
    const bool ground = fam == SqueezeFamily::Delta || (fam == SqueezeFamily::InvSquare && n == 0);

    switch (t.tag) {
        case SpectrumTag::P:
        case SpectrumTag::D: {
            if (fam != SqueezeFamily::Delta) detail::unsupported(t, fam);
            if (n > 1) fail(Errc::OutOfValidityWindow, "the two-level delta limit has n = 0 (E+) and n = 1 (E-) only");
            const double beta = 2.0 * nv.a1 * nv.a3 / (nv.a1 + nv.a3);
            if ((t.tag == SpectrumTag::P) != (beta > 0.0))
                fail(Errc::TypeMismatch, "sign of beta flips under a2 normalization");
            double E = 0.0;
            if (beta > 0.0) {
                const double tn = std::tan(std::sqrt(beta) * g / 2.0);
                const double s = sgn(tn);
                E = n == 0 ? s * m / std::sqrt(1.0 + beta / (tn * tn)) : -s * m / std::sqrt(1.0 + beta * tn * tn);
            } else {
                const double th = std::tanh(std::sqrt(-beta) * g / 2.0);
                E = n == 0 ? sgn(g) * m / std::sqrt(1.0 - beta / (th * th)) : sgn(g) * m / std::sqrt(1.0 - beta * th * th);
            }
            return detail::checked({n, n == 0 ? Parity::Plus : Parity::Minus, E, LimitShape::Rotation}, m);
        }
        case SpectrumTag::H1: {
            if (fam != SqueezeFamily::TwoThirds) detail::unsupported(t, fam);
            if (n < 1) fail(Errc::OutOfValidityWindow, "the l^-2/3 levels start at n = 1");
            const double a = nv.a1;
            if (!(std::abs(g) < std::pow(n * kPi / std::abs(a), 2.0 / 3.0)))
                fail(Errc::OutOfValidityWindow, "|g| must stay below (n pi / alpha)^(2/3)");
            const double E = (a * a / npi2) * g * g * g * m;
            return detail::checked({n, detail::odd_plus(n), E, LimitShape::Lower}, m);
        }
        case SpectrumTag::H2: {
            if (ground) {
                if (n != 0) fail(Errc::OutOfValidityWindow, "the delta squeeze keeps only the ground state");
                return detail::checked({0, Parity::Plus, m * g / std::sqrt(4.0 + g * g), LimitShape::Upper}, m);
            }
            if (fam != SqueezeFamily::InvSquare) detail::unsupported(t, fam);
            const double E = npi2 * m / (2.0 * g) * (std::sqrt(1.0 + 4.0 * g * g / (npi2 * npi2)) - 1.0);
            return detail::checked({n, detail::even_plus(n), E, LimitShape::Upper}, m);
        }
        case SpectrumTag::W1: {
            // a2 = 0, so the strength is used as given.
            const double bg = *t.beta * spec.law.g;
            if (ground) {
                if (n != 0) fail(Errc::OutOfValidityWindow, "the delta squeeze keeps only the ground state");
                return detail::checked({0, Parity::Minus, -sgn(bg) * m / std::sqrt(1.0 + bg * bg / 4.0), LimitShape::Lower},
                                       m);
            }
            if (fam != SqueezeFamily::InvSquare) detail::unsupported(t, fam);
            if (!(std::abs(bg) > npi2)) fail(Errc::OutOfValidityWindow, "|beta g| must exceed (n pi)^2");
            return detail::checked({n, detail::odd_plus(n), -npi2 * m / bg, LimitShape::Lower}, m);
        }
        case SpectrumTag::W2: {
            const double a = nv.a1;
            if (ground) {
                if (n != 0) fail(Errc::OutOfValidityWindow, "the delta squeeze keeps only the ground state");
                return detail::checked({0, Parity::Plus, m * g / std::sqrt(4.0 + g * g), LimitShape::Upper}, m);
            }
            if (fam != SqueezeFamily::InvSquare) detail::unsupported(t, fam);
            if (!(g < -npi2 / (2.0 * a))) fail(Errc::OutOfValidityWindow, "g must lie below -(n pi)^2 / (2 alpha)");
            return detail::checked({n, detail::even_plus(n), -(1.0 + npi2 / (a * g)) * m, LimitShape::Upper}, m);
        }
        case SpectrumTag::Unclassified: break;
    }
    detail::unsupported(t, fam);
}

struct PointInteraction {
    ConnectionMatrix lambda;
    LimitLevel level;
    double chi = 0.0;
};

// Limit connection matrix for a level returned by limit_energy. Triangular
// matrices carry (-1)^n and an off-diagonal 2 chi (lower) or 2 / chi (upper);
// types P and D keep the rotation-like form with the squeezed phase.
inline PointInteraction limit_matrix(const LimitSpec& spec, const LimitLevel& lv) {
    const double m = spec.pencil.m;
    PointInteraction pi;
    pi.level = lv;
    pi.chi = chi_of(lv.E, m);
    const double sign = lv.n % 2 == 0 ? 1.0 : -1.0;
    switch (lv.shape) {
        case LimitShape::Rotation: {
            const SpectrumType t = classify(spec.pencil);
            if (t.tag != SpectrumTag::P && t.tag != SpectrumTag::D) detail::unsupported(t, spec.law.family);
            const auto nv = detail::normalize_alpha2(t, spec.law.g);
            const double beta = 2.0 * nv.a1 * nv.a3 / (nv.a1 + nv.a3);
            const SC sc = sc_kernel(beta, nv.V);
            pi.lambda = ConnectionMatrix{sc.c, -kSqrt2 * sc.s, beta / kSqrt2 * sc.s, sc.c, 0.0, 0.0};
            break;
        }
        case LimitShape::Lower:
            pi.lambda = ConnectionMatrix{sign, 0.0, sign * 2.0 * pi.chi, sign, 0.0, 0.0};
            break;
        case LimitShape::Upper:
            pi.lambda = ConnectionMatrix{sign, sign * 2.0 / pi.chi, 0.0, sign, 0.0, 0.0};
            break;
    }
    return pi;
}

inline PointInteraction point_interaction(const LimitSpec& spec, int n) {
    const auto lv = limit_energy(spec, n);
    if (!lv) fail(Errc::UnsupportedCombination, "the squeeze leaves no bound state");
    return limit_matrix(spec, *lv);
}

// Two-sided values (psi1 - psi3, psi2) at x = -0 and x = +0 with C1 = 1.
struct SqueezedBoundary {
    double u_left, v_left;
    double u_right, v_right;
};

inline SqueezedBoundary squeezed_boundary(const PointInteraction& pi, double m) {
    const EnergyPoint ep = EnergyPoint::at(pi.level.E, m);
    const double u = 2.0 * pi.level.E / ep.kappa;
    if (pi.level.parity == Parity::Plus) return {u, kSqrt2, -u, kSqrt2};
    return {u, kSqrt2, u, -kSqrt2};
}

// Largest deviation of Lambda times the left values from the right values.
inline double boundary_mismatch(const PointInteraction& pi, double m) {
    const auto b = squeezed_boundary(pi, m);
    const auto& L = pi.lambda;
    const double du = L.l11 * b.u_left + L.l12 * b.v_left - b.u_right;
    const double dv = L.l21 * b.u_left + L.l22 * b.v_left - b.v_right;
    return std::max(std::abs(du), std::abs(dv)) / std::max(1.0, std::abs(b.u_left));
}

inline bool connects_boundary_values(const PointInteraction& pi, double m, double tol = 1e-10) {
    return boundary_mismatch(pi, m) < tol;
}

// Squeezed eigenfunction with C1 = 1: (1/rho, sqrt 2, rho) e^{kappa x} for
// x < 0 and the parity image decaying for x > 0. x = 0 takes the right value.
inline std::vector<WaveFunctionSample> squeezed_eigenfunction(const PointInteraction& pi, double m,
                                                              const std::vector<double>& x_grid) {
    const EnergyPoint ep = EnergyPoint::at(pi.level.E, m);
    const double ri = 1.0 / ep.rho;
    const double s = pi.level.parity == Parity::Plus ? 1.0 : -1.0;
    std::vector<WaveFunctionSample> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        if (x < 0.0) {
            const double e = std::exp(ep.kappa * x);
            out.push_back({x, ri * e, kSqrt2 * e, ep.rho * e});
        } else {
            const double e = std::exp(-ep.kappa * x);
            out.push_back({x, -s * ri * e, s * kSqrt2 * e, -s * ep.rho * e});
        }
    }
    return out;
}

struct ConvergenceRow {
    double l = 0.0;
    double V = 0.0;
    double E = 0.0;
    double error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();  // log(err ratio) / log(l ratio)
};

struct ConvergenceStudy {
    LimitLevel limit;
    double capture_radius = 0.0;
    std::vector<ConvergenceRow> rows;
};

// Capture radius: 0.2 times the smallest distance from E_n to the other
// valid levels of the same family, or 0.2 m when it has no neighbour.
inline double capture_radius(const LimitSpec& spec, const LimitLevel& lv) {
    const double m = spec.pencil.m;
    double gap = m;
    for (int k = std::max(0, lv.n - 1); k <= lv.n + 1; ++k) {
        if (k == lv.n) continue;
        try {
            if (const auto other = limit_energy(spec, k)) gap = std::min(gap, std::abs(other->E - lv.E));
        } catch (const NumericalError&) {
        }
    }
    return 0.2 * gap;
}

// Solves the finite-l problem along the squeeze and follows the state of the
// same parity nearest to the limit energy. Level 0 of an l^-2 family is
// followed along the 1/l squeeze that produces it.
inline ConvergenceStudy convergence_study(const LimitSpec& spec_in, int n, const std::vector<double>& l_sequence,
                                          const ScanOptions& opt = {}) {
    LimitSpec spec = spec_in;
    if (spec.law.family == SqueezeFamily::InvSquare && n == 0) spec.law.family = SqueezeFamily::Delta;
    const auto lv = limit_energy(spec, n);
    if (!lv) fail(Errc::BranchLost, "the squeeze leaves no bound state to follow");
    for (std::size_t i = 1; i < l_sequence.size(); ++i)
        if (!(l_sequence[i] < l_sequence[i - 1])) fail(Errc::InvalidParameter, "l sequence must decrease");

    ConvergenceStudy st;
    st.limit = *lv;
    st.capture_radius = capture_radius(spec, *lv);
    const double m = spec.pencil.m;
    for (double l : l_sequence) {
        const double V = spec.law.strength(l, m);
        const auto states = find_bound_states(spec.pencil.at(V), Geometry::centered(l), opt);
        const BoundStateSolution* best = nullptr;
        for (const auto& s : states) {
            if (s.parity != lv->parity) continue;
            if (!best || std::abs(s.E - lv->E) < std::abs(best->E - lv->E)) best = &s;
        }
        if (!best || std::abs(best->E - lv->E) > st.capture_radius)
            fail(Errc::BranchLost, "no finite-l state within the capture radius at l = " + std::to_string(l));
        ConvergenceRow row{l, V, best->E, std::abs(best->E - lv->E)};
        if (!st.rows.empty()) {
            const auto& prev = st.rows.back();
            if (row.error > 0.0 && prev.error > 0.0) row.order = std::log(prev.error / row.error) / std::log(prev.l / l);
        }
        st.rows.push_back(row);
    }
    return st;
}

inline std::vector<double> halving_sequence(double l0, int k_first, int k_last) {
    std::vector<double> out;
    for (int k = k_first; k <= k_last; ++k) out.push_back(l0 * std::ldexp(1.0, -k));
    return out;
}

// One row of the squeezed-limit summary table.
struct TableEntry {
    const char* set;
    SpectrumTag tag;
    SqueezeFamily family;
    LimitShape shape;
    bool ground;  // n = 0 only; otherwise n >= 1
};

inline std::vector<TableEntry> table_entries() {
    return {
        {"A_H1", SpectrumTag::H1, SqueezeFamily::TwoThirds, LimitShape::Lower, false},
        {"A_W1", SpectrumTag::W1, SqueezeFamily::Delta, LimitShape::Lower, true},
        {"A_W1", SpectrumTag::W1, SqueezeFamily::InvSquare, LimitShape::Lower, false},
        {"A_H2", SpectrumTag::H2, SqueezeFamily::Delta, LimitShape::Upper, true},
        {"A_H2", SpectrumTag::H2, SqueezeFamily::InvSquare, LimitShape::Upper, false},
        {"A_W2", SpectrumTag::W2, SqueezeFamily::Delta, LimitShape::Upper, true},
        {"A_W2", SpectrumTag::W2, SqueezeFamily::InvSquare, LimitShape::Upper, false},
    };
}

// Representative pencil for each set: H1 (1, 1, -1) through P2, H2 (0, 1, 0),
// W1 (1, 0, 1) and W2 (2, 1, 0) through P1.
inline PencilSpec representative_pencil(SpectrumTag tag, double m = 1.0) {
    switch (tag) {
        case SpectrumTag::H1: return PencilSpec{Vertex::P2, 1.0, 1.0, -1.0, {}, m};
        case SpectrumTag::H2: return PencilSpec{Vertex::P1, 0.0, 1.0, 0.0, {}, m};
        case SpectrumTag::W1: return PencilSpec{Vertex::P1, 1.0, 0.0, 1.0, {}, m};
        case SpectrumTag::W2: return PencilSpec{Vertex::P1, 2.0, 1.0, 0.0, {}, m};
        case SpectrumTag::P: return PencilSpec{Vertex::P1, 1.0, 1.0, 1.0, {}, m};
        case SpectrumTag::D: return PencilSpec{Vertex::P2, -1.0, 1.0, -1.0, {}, m};
        case SpectrumTag::Unclassified: break;
    }
    fail(Errc::InvalidParameter, "no representative pencil for an unclassified type");
}

}  // namespace ps1
