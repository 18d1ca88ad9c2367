#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "boundstates.hpp"
#include "model.hpp"

// Independent check of the bound-state solver: integrate the reduced (u, v)
// system with classical RK4 and match the decaying exterior rays. No
// trigonometric closed form is used.
namespace ps1::oracle {

struct ReducedState {
    double u = 0.0;  // psi1 - psi3
    double v = 0.0;  // psi2
};

using Mat2 = std::array<double, 4>;  // row-major

namespace detail {

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

// Only directions matter, so products are rescaled to unit max-norm.
inline Mat2 rescaled(Mat2 a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    if (s > 0.0)
        for (double& x : a) x /= s;
    return a;
}

struct Coefficients {
    double a12;  // u' = a12 v
    double a21;  // v' = a21 u
};

inline Coefficients coefficients(const Potential& pot, double E) {
    const double den = 2.0 * E - pot.v1() - pot.v3();
    if (std::abs(den) < 2.0 * tol::pole * std::max(pot.m, std::abs(pot.va())))
        fail(Errc::SPole, "reduced system is singular at 2E = v1 + v3");
    return {kSqrt2 * (E - pot.v2()), -kSqrt2 * (E - pot.v1()) * (E - pot.v3()) / den};
}

// One RK4 step of y' = A y with A = [[0, a12], [a21, 0]] is the matrix
// I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24.
inline Mat2 rk4_step(const Coefficients& c, double h) {
    const Mat2 A{0.0, h * c.a12, h * c.a21, 0.0};
    const Mat2 A2 = mul(A, A);
    const Mat2 A3 = mul(A2, A);
    const Mat2 A4 = mul(A3, A);
    Mat2 M{};
    for (int i = 0; i < 4; ++i) M[i] = A[i] + A2[i] / 2.0 + A3[i] / 6.0 + A4[i] / 24.0;
    M[0] += 1.0;
    M[3] += 1.0;
    return M;
}

inline Mat2 power(Mat2 base, long n) {
    Mat2 acc{1.0, 0.0, 0.0, 1.0};
    while (n > 0) {
        if (n & 1) acc = rescaled(mul(acc, base));
        n >>= 1;
        if (n) base = rescaled(mul(base, base));
    }
    return acc;
}

}  // namespace detail

// Step count: at least `min_steps`, and enough that each step advances the
// interior phase by no more than 1/200.
inline long default_steps(const Potential& pot, const Geometry& geom, double E, long min_steps = 2000) {
    const auto c = detail::coefficients(pot, E);
    const double k = std::sqrt(std::abs(c.a12 * c.a21));
    return std::max<long>(min_steps, static_cast<long>(std::ceil(200.0 * k * geom.l())));
}

// Integrates from x1 starting on the left decaying ray (2E/kappa, sqrt 2),
// rescaled to unit length.
inline ReducedState integrate(const Potential& pot, const Geometry& geom, double E, long steps = 0) {
    const EnergyPoint ep = EnergyPoint::at(E, pot.m);
    if (std::abs(E) < tol::zero_energy * pot.m) fail(Errc::ZeroEnergyPole, "shooting needs E != 0");
    const auto c = detail::coefficients(pot, E);
    if (steps <= 0) steps = default_steps(pot, geom, E);
    const Mat2 M = detail::power(detail::rk4_step(c, geom.l() / static_cast<double>(steps)), steps);
    double u0 = 2.0 * E / ep.kappa, v0 = kSqrt2;
    const double n0 = std::hypot(u0, v0);
    u0 /= n0;
    v0 /= n0;
    return ReducedState{M[0] * u0 + M[1] * v0, M[2] * u0 + M[3] * v0};
}

// Cross product of the integrated state at x2 with the right decaying ray
// (2E/kappa, -sqrt 2); zero exactly at a bound state.
inline double shoot(const Potential& pot, const Geometry& geom, double E, long steps = 0) {
    const ReducedState s = integrate(pot, geom, E, steps);
    const double kappa = std::sqrt((pot.m - E) * (pot.m + E));
    return s.u * (-kSqrt2) - s.v * (2.0 * E / kappa);
}

// The same mismatch divided by both vector lengths: bounded in [-1, 1].
inline double shoot_normalized(const Potential& pot, const Geometry& geom, double E, long steps = 0) {
    const ReducedState s = integrate(pot, geom, E, steps);
    const double kappa = std::sqrt((pot.m - E) * (pot.m + E));
    const double ru = 2.0 * E / kappa, rv = -kSqrt2;
    const double norm = std::hypot(s.u, s.v) * std::hypot(ru, rv);
    return norm > 0.0 ? (s.u * rv - s.v * ru) / norm : 0.0;
}

namespace detail {

// Zooms in on a local minimum of |f| without a sign change: sign changes
// uncovered on finer grids are refined as ordinary roots; a minimum that
// reaches touch_tol after the zoom counts as a double root.
template <class F>
void probe_minimum(const F& f, double a, double b, double tol, double touch_tol, std::vector<double>& out) {
    constexpr int kPoints = 33;
    for (int depth = 0; depth < 8; ++depth) {
        std::array<double, kPoints> x{}, fx{};
        for (int j = 0; j < kPoints; ++j) {
            x[j] = a + (b - a) * j / (kPoints - 1);
            fx[j] = f(x[j]);
        }
        bool split = false;
        for (int j = 0; j + 1 < kPoints; ++j) {
            if (fx[j] == 0.0) {
                out.push_back(x[j]);
                split = true;
            } else if (fx[j + 1] != 0.0 && (fx[j] < 0.0) != (fx[j + 1] < 0.0)) {
                out.push_back(ps1::detail::refine_root(f, x[j], x[j + 1], fx[j], fx[j + 1], tol));
                split = true;
            }
        }
        if (split) return;
        int jmin = 0;
        for (int j = 1; j < kPoints; ++j)
            if (std::abs(fx[j]) < std::abs(fx[jmin])) jmin = j;
        if (b - a < tol || depth == 7) {
            if (std::abs(fx[jmin]) < touch_tol) {
                out.push_back(x[jmin]);
                out.push_back(x[jmin]);
            }
            return;
        }
        a = x[std::max(jmin - 1, 0)];
        b = x[std::min(jmin + 1, kPoints - 1)];
    }
}

// Deep inside a tunnelling barrier (k^2 < 0) the mismatch carries rounding
// noise that grows like exp(|k| l), which can split one crossing into
// several. There, roots closer than `gap` are merged; the cluster counts once
// if f changes sign across it and twice otherwise. Real-k stretches are
// rotations without amplification and are left alone.
template <class F, class K2>
std::vector<double> merge_clusters(const F& f, const K2& k2_of, const std::vector<double>& roots, double gap) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < roots.size()) {
        std::size_t j = i;
        while (j + 1 < roots.size() && roots[j + 1] - roots[j] < gap && k2_of(roots[j]) < 0.0 &&
               k2_of(roots[j + 1]) < 0.0)
            ++j;
        if (j == i) {
            out.push_back(roots[i]);
        } else {
            const double lo = roots[i], hi = roots[j];
            double reach = 10.0 * gap;
            if (i > 0) reach = std::min(reach, 0.5 * (lo - roots[i - 1]));
            if (j + 1 < roots.size()) reach = std::min(reach, 0.5 * (roots[j + 1] - hi));
            const double fl = f(lo - reach), fh = f(hi + reach);
            const double mid = 0.5 * (lo + hi);
            out.push_back(mid);
            if ((fl < 0.0) == (fh < 0.0)) out.push_back(mid);
        }
        i = j + 1;
    }
    return out;
}

}  // namespace detail

struct OracleOptions {
    ScanOptions scan{};
    long min_steps = 2000;
    double touch_tol = 1e-8;     // largest |mismatch| accepted at a tangential zero
    double cluster_gap = 1e-8;   // imaginary-k roots closer than this (units of m) are one cluster
};

// Scan over the same domain as find_bound_states (windows at 0, va and the
// gap edges, same phase cap), with the oracle's own interior frequency.
// A mismatch that touches zero without changing sign marks an even-odd pair
// split below double precision (deep tunnelling); it is reported twice.
inline std::vector<double> oracle_bound_states(const Potential& pot, const Geometry& geom,
                                               const OracleOptions& opt = {}) {
    pot.validate();
    geom.validate();
    auto k2_of = [&](double E) -> double {
        const double den = 2.0 * E - pot.v1() - pot.v3();
        if (den == 0.0) return INFINITY;
        const auto c = detail::coefficients(pot, E);
        return -c.a12 * c.a21;
    };
    const auto runs = ps1::detail::scan_runs(pot.m, pot.va(), geom.l(), k2_of, opt.scan);
    auto f = [&](double E) {
        return shoot_normalized(pot, geom, E, default_steps(pot, geom, E, opt.min_steps));
    };
    const double tol = opt.scan.root_tol * pot.m;

    std::vector<double> out;
    for (const auto& run : runs) {
        std::vector<double> fv(run.size());
        for (std::size_t i = 0; i < run.size(); ++i) fv[i] = f(run[i]);
        for (std::size_t i = 0; i < run.size(); ++i) {
            if (fv[i] == 0.0) {
                out.push_back(run[i]);
                continue;
            }
            if (i + 1 < run.size() && fv[i + 1] != 0.0 && ((fv[i] < 0.0) != (fv[i + 1] < 0.0))) {
                out.push_back(ps1::detail::refine_root(f, run[i], run[i + 1], fv[i], fv[i + 1], tol));
                continue;
            }
            if (i == 0 || i + 1 >= run.size()) continue;
            const bool same_sign = (fv[i - 1] < 0.0) == (fv[i] < 0.0) && (fv[i + 1] < 0.0) == (fv[i] < 0.0);
            if (!same_sign || !(std::abs(fv[i]) < std::abs(fv[i - 1])) || !(std::abs(fv[i]) < std::abs(fv[i + 1])))
                continue;
            detail::probe_minimum(f, run[i - 1], run[i + 1], tol, opt.touch_tol, out);
        }
    }
    std::sort(out.begin(), out.end());
    return detail::merge_clusters(f, k2_of, out, opt.cluster_gap * pot.m);
}

}  // namespace ps1::oracle
