#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "model.hpp"

namespace ps1 {

namespace detail {

struct Monic3 {
    double c2, c1, c0;  // x^3 + c2 x^2 + c1 x + c0

    double value(double x) const { return ((x + c2) * x + c1) * x + c0; }
    double d1(double x) const { return (3.0 * x + 2.0 * c2) * x + c1; }
    double d2(double x) const { return 6.0 * x + 2.0 * c2; }
};

inline double newton_polish(const Monic3& p, double x, int steps) {
    for (int i = 0; i < steps; ++i) {
        const double f = p.value(x);
        const double df = p.d1(x);
        if (df == 0.0) break;
        const double next = x - f / df;
        if (!(std::abs(p.value(next)) <= std::abs(f))) break;
        x = next;
    }
    return x;
}

}  // namespace detail

// Real roots of x^3 + c2 x^2 + c1 x + c0, ascending. Eigenvalues of the
// companion matrix seed two Newton steps per root; near-coincident pairs are
// re-centred on the nearby root of the derivative, where Newton stalls.
inline std::array<double, 3> cubic_real_roots(double c2, double c1, double c0) {
    const detail::Monic3 p{c2, c1, c0};
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 0) = -c2;
    comp(0, 1) = -c1;
    comp(0, 2) = -c0;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
    const auto ev = es.eigenvalues();

    std::array<double, 3> r{};
    const double scale = 1.0 + std::max({std::abs(ev(0)), std::abs(ev(1)), std::abs(ev(2))});
    for (int i = 0; i < 3; ++i) {
        if (std::abs(ev(i).imag()) > 1e-4 * scale)
            fail(Errc::DegenerateRoots, "dispersion cubic has a complex root pair");
        r[i] = detail::newton_polish(p, ev(i).real(), 2);
    }
    std::sort(r.begin(), r.end());

    // A triple root splits into a cube-root-of-epsilon star under rounding.
    const double mid = -c2 / 3.0;
    if (r[2] - r[0] < 1e-4 * scale && std::abs(p.d1(mid)) <= 1e-10 * scale * scale) return {mid, mid, mid};
    const double cluster = 1e-6 * scale;
    for (int i = 0; i < 2; ++i) {
        if (r[i + 1] - r[i] >= cluster) continue;
        double x = 0.5 * (r[i] + r[i + 1]);
        for (int it = 0; it < 4; ++it) {
            const double dd = p.d2(x);
            if (dd == 0.0) break;
            x -= p.d1(x) / dd;
        }
        const double d2 = p.d2(x);
        const double delta2 = d2 != 0.0 ? -2.0 * p.value(x) / d2 : 0.0;
        const double delta = delta2 > 0.0 ? std::sqrt(delta2) : 0.0;
        r[i] = detail::newton_polish(p, x - delta, 2);
        r[i + 1] = detail::newton_polish(p, x + delta, 2);
        if (r[i] > r[i + 1]) std::swap(r[i], r[i + 1]);
    }
    return r;
}

struct BandTriple {
    double k = 0.0;
    double e_minus = 0.0;
    double e_mid = 0.0;
    double e_plus = 0.0;
    bool mid_flat = false;
};

struct FlatBandClass {
    bool on_A = false;
    bool on_B = false;
    std::optional<double> flat_energy;
};

inline double flat_scale(const Potential& p) {
    return std::max({p.m, std::abs(p.v11), std::abs(p.v22), std::abs(p.v33)});
}

inline FlatBandClass classify_flat(const Potential& p) {
    const double t = tol::flat * flat_scale(p);
    FlatBandClass fc;
    fc.on_A = std::abs(p.v11 + p.v33 - 2.0 * p.v22) <= t;
    fc.on_B = std::abs(p.v33 - p.v11 - 2.0 * p.m) <= t;
    if (fc.on_A) fc.flat_energy = p.v22;
    else if (fc.on_B) fc.flat_energy = p.v11 + p.m;
    return fc;
}

// Panel classes (a)-(j) of the constant-potential band diagrams, ordered by
// where v2 sits relative to min(v1, v3), va and max(v1, v3).
enum class Panel { a, b, c, d, e, f, g, h, i, j };

inline char panel_letter(Panel p) { return static_cast<char>('a' + static_cast<int>(p)); }

inline Panel classify_panel(const Potential& p) {
    const double lo = std::min(p.v1(), p.v3());
    const double hi = std::max(p.v1(), p.v3());
    const double va = p.va();
    const double v2 = p.v2();
    const double t = tol::flat * flat_scale(p);
    auto eq = [t](double x, double y) { return std::abs(x - y) <= t; };
    if (eq(lo, hi)) {
        if (eq(v2, lo)) return Panel::j;
        return v2 < lo ? Panel::h : Panel::i;
    }
    if (eq(v2, lo)) return Panel::b;
    if (eq(v2, va)) return Panel::d;
    if (eq(v2, hi)) return Panel::f;
    if (v2 < lo) return Panel::a;
    if (v2 < va) return Panel::c;
    if (v2 < hi) return Panel::e;
    return Panel::g;
}

inline BandTriple dispersion_bands(const Potential& p, double k) {
    const double v1 = p.v1(), v2 = p.v2(), v3 = p.v3();
    const double k2 = k * k;
    const double s1 = v1 + v2 + v3;
    const double s2 = v1 * v2 + v1 * v3 + v2 * v3;
    const double s3 = v1 * v2 * v3;
    const FlatBandClass fc = classify_flat(p);
    std::array<double, 3> r{};
    if (k == 0.0) {
        r = {v1, v2, v3};
        std::sort(r.begin(), r.end());
    } else if (fc.flat_energy) {
        // The flat root factors out: (E - E_flat)((E - a)(E - b) - k^2) with
        // (a, b) = (v1, v3) on plane A and (v1, v2) on plane B.
        const double a = v1, b = fc.on_A ? v3 : v2;
        const double c = 0.5 * (a + b), h = std::hypot(0.5 * (a - b), k);
        r = {c - h, *fc.flat_energy, c + h};
        std::sort(r.begin(), r.end());
    } else {
        r = cubic_real_roots(-s1, s2 - k2, -s3 + p.va() * k2);
    }

    BandTriple bt{k, r[0], r[1], r[2], false};
    for (double e : r) {
        const double f = dispersion_F(p, e);
        const double res = std::abs(dispersion_residual(p, e, k2));
        const double sc = 1.0 + std::abs(f) + std::abs(dispersion_G(p, e) * k2);
        if (res > 1e-9 * sc * (1.0 + e * e)) fail(Errc::DegenerateRoots, "band root failed verification");
    }
    bt.mid_flat = fc.flat_energy.has_value();
    return bt;
}

struct BandSweep {
    Panel panel = Panel::a;
    FlatBandClass flat;
    std::vector<BandTriple> bands;
};

inline BandSweep band_sweep(const Potential& p, const std::vector<double>& k_grid) {
    if (k_grid.empty()) fail(Errc::InvalidParameter, "k grid is empty");
    BandSweep out;
    out.panel = classify_panel(p);
    out.flat = classify_flat(p);
    out.bands.reserve(k_grid.size());
    for (double k : k_grid) out.bands.push_back(dispersion_bands(p, k));
    return out;
}

enum class Branch { Minus, Zero, Plus };

// Which closed form supplies the sigma coefficients. Auto picks the most
// specific plane the potential lies on.
enum class PlaneFormula { Auto, Generic, A, B, AB };

// Plane-wave amplitudes: psi = col(-sigma1, 1, sigma3) exp(i k x). When the
// band sits at E = v1 = v3 the middle component vanishes and the spinor is
// col(1, 0, 1); sigma is then reported as infinite.
struct SigmaCoefficients {
    std::complex<double> sigma1;
    std::complex<double> sigma3;
    double energy = 0.0;
    double k = 0.0;
    Branch branch = Branch::Zero;
    bool psi2_vanishes = false;

    Eigen::Vector3cd spinor() const {
        if (psi2_vanishes) return Eigen::Vector3cd(1.0, 0.0, 1.0);
        return Eigen::Vector3cd(-sigma1, 1.0, sigma3);
    }
};

inline double band_energy(const BandTriple& bt, Branch b) {
    switch (b) {
        case Branch::Minus: return bt.e_minus;
        case Branch::Zero: return bt.e_mid;
        case Branch::Plus: return bt.e_plus;
    }
    return bt.e_mid;
}

inline SigmaCoefficients band_eigenfunction(const Potential& p, double k, Branch branch,
                                            PlaneFormula plane = PlaneFormula::Auto) {
    const FlatBandClass fc = classify_flat(p);
    const bool on_ab = fc.on_A && fc.on_B;
    if (plane == PlaneFormula::Auto) {
        plane = on_ab ? PlaneFormula::AB : fc.on_A ? PlaneFormula::A : fc.on_B ? PlaneFormula::B : PlaneFormula::Generic;
    }
    if ((plane == PlaneFormula::A && !fc.on_A) || (plane == PlaneFormula::B && !fc.on_B) ||
        (plane == PlaneFormula::AB && !on_ab))
        fail(Errc::PlaneMismatch, "potential does not lie on the requested flat-band plane");

    const BandTriple bt = dispersion_bands(p, k);
    SigmaCoefficients sc;
    sc.k = k;
    sc.branch = branch;
    sc.energy = band_energy(bt, branch);
    const std::complex<double> i(0.0, 1.0);
    const double v1 = p.v1(), v2 = p.v2(), v3 = p.v3();

    // The plane closed forms cover the dispersive branches; the flat branch
    // always goes through the defining relation below.
    if (plane != PlaneFormula::Generic && branch != Branch::Zero) {
        if (k == 0.0) fail(Errc::ZeroK, "plane sigma coefficients need k != 0");
        const double sign = branch == Branch::Plus ? 1.0 : -1.0;
        if (plane == PlaneFormula::AB) {
            sc.sigma1 = sc.sigma3 = sign * sgn(k) * i / kSqrt2;
        } else if (plane == PlaneFormula::A) {
            const double d = 0.5 * (v1 - v3);
            const double root = std::sqrt(k * k + d * d);
            sc.sigma1 = i / (kSqrt2 * k) * (d + sign * root);
            sc.sigma3 = i / (kSqrt2 * k) * (-d + sign * root);
        } else {
            const double d = 0.5 * (v1 - v2);
            const double root = std::sqrt(k * k + d * d);
            sc.sigma1 = sc.sigma3 = i / (kSqrt2 * k) * (d + sign * root);
        }
        return sc;
    }

    const double e = sc.energy;
    const double t = tol::flat * flat_scale(p);
    const bool at_v1 = std::abs(e - v1) <= t;
    const bool at_v3 = std::abs(e - v3) <= t;
    if ((at_v1 || at_v3) && k != 0.0) {
        sc.psi2_vanishes = true;
        sc.sigma1 = sc.sigma3 = std::complex<double>(INFINITY, 0.0);
        return sc;
    }
    sc.sigma1 = i * k / (kSqrt2 * (e - v1));
    sc.sigma3 = i * k / (kSqrt2 * (e - v3));
    return sc;
}

// |(H(k) - E) psi| / |psi| for the plane-wave spinor.
inline double band_residual(const Potential& p, const SigmaCoefficients& sc) {
    const Eigen::Vector3cd psi = sc.spinor();
    const Eigen::Matrix3cd h = hamiltonian(p, sc.k) - sc.energy * Eigen::Matrix3cd::Identity();
    return (h * psi).norm() / psi.norm();
}

}  // namespace ps1
