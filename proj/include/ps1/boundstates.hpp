#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "model.hpp"

namespace ps1 {

enum class Parity { Plus, Minus };

inline char parity_char(Parity p) { return p == Parity::Plus ? '+' : '-'; }

// Maps (psi1 - psi3, psi2) at x1 onto the same pair at x2.
struct ConnectionMatrix {
    double l11 = 1.0;
    double l12 = 0.0;
    double l21 = 0.0;
    double l22 = 1.0;
    double k2 = 0.0;
    double l = 0.0;

    double det() const { return l11 * l22 - l12 * l21; }
};

namespace detail {

// Interior coefficients of the reduced system u' = p v, v' = -q u, where
// u = psi1 - psi3 and v = psi2. Their product is k^2. Writing q through
// (E - v1)(E - v3) instead of k^2 / p keeps E = v2 regular.
struct Interior {
    double p;
    double q;
    double k2;
};

inline Interior interior(const Potential& pot, double E) {
    if (near_va(pot, E)) fail(Errc::PoleAtVa, "interior coefficients have a pole at E = va");
    const double p = kSqrt2 * (E - pot.v2());
    const double q = (E - pot.v1()) * (E - pot.v3()) / (kSqrt2 * (E - pot.va()));
    return Interior{p, q, p * q};
}

}  // namespace detail

inline ConnectionMatrix connection_matrix(const Potential& pot, const Geometry& geom, double E) {
    const auto in = detail::interior(pot, E);
    const SC sc = sc_kernel(in.k2, geom.l());
    return ConnectionMatrix{sc.c, in.p * sc.s, -in.q * sc.s, sc.c, in.k2, geom.l()};
}

inline double general_bound_condition(const ConnectionMatrix& lam, double E, double m) {
    if (std::abs(E) < tol::zero_energy * m) fail(Errc::ZeroEnergyPole, "bound condition needs E != 0");
    if (!(std::abs(E) < m)) fail(Errc::GapEdge, "bound condition needs |E| < m");
    const double kappa = std::sqrt((m - E) * (m + E));
    if (!(kappa > 0.0)) fail(Errc::GapEdge, "kappa vanishes");
    return lam.l11 + lam.l22 + kappa / (kSqrt2 * E) * lam.l12 + kSqrt2 * E / kappa * lam.l21;
}

// Even- and odd-parity residuals with half width h = l/2:
//   r_plus  = kappa (E - v2) s + E c
//   r_minus = kappa c - sqrt(2) E q s
// Both are finite across E = 0, E = v2 and the gap edges; only E = va stays
// singular. With scaled = true they are divided by cosh(|k| h) for imaginary k.
struct SplitResiduals {
    double r_plus;
    double r_minus;
};

inline SplitResiduals split_residuals(const Potential& pot, const Geometry& geom, double E, bool scaled = false) {
    if (!(std::abs(E) < pot.m)) fail(Errc::GapEdge, "split residuals need |E| < m");
    const auto in = detail::interior(pot, E);
    const double h = 0.5 * geom.l();
    const SC sc = scaled ? sc_kernel_scaled(in.k2, h) : sc_kernel(in.k2, h);
    const double kappa = std::sqrt((pot.m - E) * (pot.m + E));
    return SplitResiduals{kappa * (E - pot.v2()) * sc.s + E * sc.c, kappa * sc.c - kSqrt2 * E * in.q * sc.s};
}

// Sine of the angle between the interior solution launched from the midpoint
// and the decaying exterior ray at x2. Bounded, continuous off E = va, and
// zero exactly at bound states of the given parity.
inline double normalized_residual(const Potential& pot, const Geometry& geom, double E, Parity parity) {
    const auto in = detail::interior(pot, E);
    const double h = 0.5 * geom.l();
    const SC sc = sc_kernel_scaled(in.k2, h);
    const double kappa = std::sqrt((pot.m - E) * (pot.m + E));
    double u, v;
    if (parity == Parity::Plus) {
        u = in.p * sc.s;
        v = sc.c;
    } else {
        u = sc.c;
        v = -in.q * sc.s;
    }
    const double ru = -kSqrt2 * E, rv = kappa;
    const double norm = std::hypot(u, v) * std::hypot(ru, rv);
    if (!(norm > 0.0)) return 0.0;
    return (u * rv - v * ru) / norm;
}

struct ScanOptions {
    int grid_points = 4000;
    double window = 1e-7;        // exclusion half-width around 0, va and +-m, in units of m
    int shrink_decades = 3;      // extra decades swept inside each window
    double phase_cap = 200.0;    // largest admitted k l; bounds the series accumulating at va
    double root_tol = 1e-12;     // bracket width, in units of m
};

namespace detail {

// Scan points grouped into runs; roots are bracketed only inside a run.
// The k^2 callback lets independent solvers share the domain definition.
inline std::vector<std::vector<double>> scan_runs(double m, double va, double l,
                                                  const std::function<double(double)>& k2_of,
                                                  const ScanOptions& opt) {
    const double r_in = opt.window * std::pow(10.0, -opt.shrink_decades) * m;
    // The va window never shrinks below the PoleAtVa tolerance.
    const double r_va = std::max(r_in, 2.0 * tol::pole * std::max(m, std::abs(va)));
    std::vector<std::pair<double, double>> specials{{0.0, r_in}};
    if (std::abs(va) < m) specials.emplace_back(va, r_va);
    std::sort(specials.begin(), specials.end());

    std::vector<std::pair<double, double>> segs;
    double lo = -m + r_in;
    for (const auto& [s, r] : specials) {
        if (s - r > lo) segs.emplace_back(lo, s - r);
        lo = std::max(lo, s + r);
    }
    if (m - r_in > lo) segs.emplace_back(lo, m - r_in);

    const double step = 2.0 * m / std::max(opt.grid_points, 2);
    const double top_exp = -2.0;
    const double bot_exp = std::log10(r_in / m);
    const int per_decade = 8;

    auto phase = [&](double E) {
        const double k2 = k2_of(E);
        return std::isfinite(k2) ? std::sqrt(std::max(k2, 0.0)) * l : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> runs;
    for (const auto& [a, b] : segs) {
        std::vector<double> pts;
        for (double x = a; x < b; x += step) pts.push_back(x);
        pts.push_back(b);
        for (double e = top_exp; e >= bot_exp - 1e-9; e -= 1.0 / per_decade) {
            const double d = m * std::pow(10.0, e);
            if (a + d < b) pts.push_back(a + d);
            if (b - d > a) pts.push_back(b - d);
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

        // The cap only bounds the series accumulating at va, so it applies
        // to segments ending at va and never cuts below twice the phase
        // reached away from the pole.
        const bool at_va = std::abs(va) < m && (std::abs(a - va) <= r_va * 1.5 || std::abs(b - va) <= r_va * 1.5);
        double cap = std::numeric_limits<double>::infinity();
        if (at_va) {
            double far = 0.0;
            for (double x : pts)
                if (std::abs(x - va) >= 0.05 * m) far = std::max(far, phase(x));
            cap = std::max(opt.phase_cap, 2.0 * far);
        }

        // Split where the phase crosses the cap, locating each crossing by
        // bisection.
        std::vector<double> cur;
        auto flush = [&]() {
            if (cur.size() >= 2) runs.push_back(cur);
            cur.clear();
        };
        auto crossing = [&](double u, double w, bool u_ok) {
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (u + w);
                if ((phase(mid) <= cap) == u_ok) u = mid;
                else w = mid;
            }
            return u_ok ? u : w;
        };
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const bool ok = phase(pts[i]) <= cap;
            const bool prev_ok = i > 0 && phase(pts[i - 1]) <= cap;
            if (i > 0 && ok != prev_ok) {
                const double xc = crossing(pts[i - 1], pts[i], prev_ok);
                cur.push_back(xc);
                if (prev_ok) flush();
            }
            if (ok) cur.push_back(pts[i]);
        }
        flush();
    }

    // Refine so that half the interior phase advances by at most 0.3 rad
    // between neighbours.
    const double dphi = 0.3;
    for (auto& run : runs) {
        std::vector<double> out;
        out.reserve(run.size());
        std::function<void(double, double, int)> fill = [&](double x0, double x1, int depth) {
            const double d = std::abs(phase(x1) - phase(x0)) * 0.5;
            if (depth > 40 || !(d > dphi)) {
                out.push_back(x1);
                return;
            }
            const int n = std::min(64, static_cast<int>(std::ceil(d / dphi)) + 1);
            double prev = x0;
            for (int i = 1; i <= n; ++i) {
                const double x = i == n ? x1 : x0 + (x1 - x0) * i / n;
                fill(prev, x, depth + 1);
                prev = x;
            }
        };
        out.push_back(run.front());
        for (std::size_t i = 1; i < run.size(); ++i) fill(run[i - 1], run[i], 0);
        run.swap(out);
    }
    return runs;
}

// Bisection on a sign change, then up to two secant steps kept only when
// they lower |f| and stay inside the bracket.
template <class F>
double refine_root(const F& f, double a, double b, double fa, double fb, double tol) {
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    double x = std::abs(fa) < std::abs(fb) ? a : b;
    double fx = std::abs(fa) < std::abs(fb) ? fa : fb;
    for (int it = 0; it < 2; ++it) {
        if (fb == fa) break;
        const double s = b - fb * (b - a) / (fb - fa);
        if (!(s >= a && s <= b)) break;
        const double fs = f(s);
        if (!(std::abs(fs) < std::abs(fx))) break;
        x = s;
        fx = fs;
        if ((fs < 0.0) == (fa < 0.0)) {
            a = s;
            fa = fs;
        } else {
            b = s;
            fb = fs;
        }
    }
    return x;
}

template <class F>
std::vector<double> bracket_roots(const F& f, const std::vector<std::vector<double>>& runs, double tol) {
    std::vector<double> roots;
    for (const auto& run : runs) {
        std::vector<double> fv(run.size());
        for (std::size_t i = 0; i < run.size(); ++i) fv[i] = f(run[i]);
        for (std::size_t i = 0; i < run.size(); ++i) {
            if (fv[i] == 0.0) {
                roots.push_back(run[i]);
                continue;
            }
            if (i + 1 < run.size() && fv[i + 1] != 0.0 && ((fv[i] < 0.0) != (fv[i + 1] < 0.0)))
                roots.push_back(refine_root(f, run[i], run[i + 1], fv[i], fv[i + 1], tol));
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > tol) out.push_back(r);
    return out;
}

}  // namespace detail

struct BoundStateSolution {
    double E = 0.0;
    Parity parity = Parity::Plus;
    double kappa = 0.0;
    double rho = 0.0;
    double k2 = 0.0;
    double residual = 0.0;
};

inline BoundStateSolution make_solution(const Potential& pot, const Geometry& geom, double E, Parity parity) {
    const EnergyPoint ep = EnergyPoint::at(E, pot.m);
    BoundStateSolution s;
    s.E = E;
    s.parity = parity;
    s.kappa = ep.kappa;
    s.rho = ep.rho;
    s.k2 = detail::interior(pot, E).k2;
    s.residual = normalized_residual(pot, geom, E, parity);
    return s;
}

inline std::vector<BoundStateSolution> find_bound_states(const Potential& pot, const Geometry& geom,
                                                         const ScanOptions& opt = {}) {
    pot.validate();
    geom.validate();
    const auto runs = detail::scan_runs(
        pot.m, pot.va(), geom.l(), [&](double E) { return near_va(pot, E) ? INFINITY : k_squared(pot, E); }, opt);
    std::vector<BoundStateSolution> out;
    for (Parity par : {Parity::Plus, Parity::Minus}) {
        auto f = [&](double E) { return normalized_residual(pot, geom, E, par); };
        for (double E : detail::bracket_roots(f, runs, opt.root_tol * pot.m)) {
            out.push_back(make_solution(pot, geom, E, par));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.E < b.E; });
    return out;
}

struct WaveFunctionSample {
    double x = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;
    double psi3 = 0.0;
};

enum class EdgeSide { Inside, Outside };

namespace detail {

// Unnormalized eigenfunction with (u, v) = (0, 1) (plus) or (1, 0) (minus)
// at the midpoint. Exterior amplitudes follow from continuity of psi2.
struct EigenShape {
    Potential pot;
    Geometry geom;
    BoundStateSolution sol;
    Interior in;
    double d_left = 0.0;
    double d_right = 0.0;

    std::pair<double, double> uv(double x) const {
        const SC sc = sc_kernel(in.k2, x - geom.a());
        if (sol.parity == Parity::Plus) return {in.p * sc.s, sc.c};
        return {sc.c, -in.q * sc.s};
    }

    WaveFunctionSample interior_at(double x) const {
        const auto [u, v] = uv(x);
        const double g = 2.0 * (sol.E - pot.va());
        return WaveFunctionSample{x, u * (sol.E - pot.v3()) / g, v, -u * (sol.E - pot.v1()) / g};
    }

    WaveFunctionSample exterior_at(double x) const {
        const double ri = 1.0 / sol.rho;
        if (x <= geom.x1) {
            const double e = d_left * std::exp(sol.kappa * (x - geom.x1));
            return WaveFunctionSample{x, e * ri, e * kSqrt2, e * sol.rho};
        }
        const double e = d_right * std::exp(-sol.kappa * (x - geom.x2));
        return WaveFunctionSample{x, e * ri, -e * kSqrt2, e * sol.rho};
    }

    WaveFunctionSample at(double x, EdgeSide side) const {
        const bool inside = (x > geom.x1 && x < geom.x2) ||
                            ((x == geom.x1 || x == geom.x2) && side == EdgeSide::Inside);
        return inside ? interior_at(x) : exterior_at(x);
    }
};

inline EigenShape eigen_shape(const BoundStateSolution& sol, const Potential& pot, const Geometry& geom) {
    if (!(std::abs(sol.E) < pot.m) || !(sol.kappa > 0.0))
        fail(Errc::OutOfDomainSolution, "bound state energy must lie inside the gap");
    if (near_va(pot, sol.E)) fail(Errc::OutOfDomainSolution, "bound state sits on the va pole");
    EigenShape sh{pot, geom, sol, interior(pot, sol.E)};
    sh.d_left = sh.uv(geom.x1).second / kSqrt2;
    sh.d_right = -sh.uv(geom.x2).second / kSqrt2;
    return sh;
}

}  // namespace detail

enum class Normalization { MaxPsi2, L2, None };

struct WaveFunction {
    std::vector<WaveFunctionSample> samples;
    double scale = 1.0;  // factor applied to the midpoint-launched shape
};

inline WaveFunction eigenfunction(const BoundStateSolution& sol, const Potential& pot, const Geometry& geom,
                                  const std::vector<double>& x_grid, Normalization norm = Normalization::MaxPsi2,
                                  EdgeSide edge = EdgeSide::Inside) {
    const auto sh = detail::eigen_shape(sol, pot, geom);
    WaveFunction wf;
    wf.samples.reserve(x_grid.size());
    for (double x : x_grid) wf.samples.push_back(sh.at(x, edge));

    double denom = 1.0;
    if (norm == Normalization::MaxPsi2) {
        double mx = 0.0;
        for (const auto& s : wf.samples) mx = std::max(mx, std::abs(s.psi2));
        if (mx > 0.0) denom = mx;
    } else if (norm == Normalization::L2 && wf.samples.size() > 1) {
        double acc = 0.0;
        for (std::size_t i = 1; i < wf.samples.size(); ++i) {
            const auto& a = wf.samples[i - 1];
            const auto& b = wf.samples[i];
            const double fa = a.psi1 * a.psi1 + a.psi2 * a.psi2 + a.psi3 * a.psi3;
            const double fb = b.psi1 * b.psi1 + b.psi2 * b.psi2 + b.psi3 * b.psi3;
            acc += 0.5 * (fa + fb) * (b.x - a.x);
        }
        if (acc > 0.0) denom = std::sqrt(acc);
    }
    wf.scale = 1.0 / denom;
    for (auto& s : wf.samples) {
        s.psi1 *= wf.scale;
        s.psi2 *= wf.scale;
        s.psi3 *= wf.scale;
    }
    for (const auto& s : wf.samples)
        if (!std::isfinite(s.psi1) || !std::isfinite(s.psi2) || !std::isfinite(s.psi3))
            fail(Errc::OutOfDomainSolution, "eigenfunction overflowed");
    return wf;
}

inline WaveFunctionSample eigenfunction_at(const BoundStateSolution& sol, const Potential& pot, const Geometry& geom,
                                           double x, EdgeSide side, double scale = 1.0) {
    auto s = detail::eigen_shape(sol, pot, geom).at(x, side);
    s.psi1 *= scale;
    s.psi2 *= scale;
    s.psi3 *= scale;
    return s;
}

inline double mu_factor(const Potential& pot, double E) {
    const double g = 2.0 * E - pot.v1() - pot.v3();
    if (std::abs(g) < tol::pole * std::max(pot.m, std::abs(pot.va()))) fail(Errc::MuPole, "mu has a pole at E = va");
    return pot.m - E * (pot.v1() - pot.v3()) / g;
}

// Jumps of psi1 (equal to those of psi3) as left limit minus right limit at
// x1 and at x2, for the eigenfunction scaled by `scale`. Closed form: the
// exterior amplitude at x1 times mu / kappa; the odd state flips sign at x2.
inline std::pair<double, double> discontinuities(const BoundStateSolution& sol, const Potential& pot,
                                                 const Geometry& geom, double scale = 1.0) {
    const auto sh = detail::eigen_shape(sol, pot, geom);
    const double d = scale * sh.d_left * mu_factor(pot, sol.E) / sol.kappa;
    return {d, sol.parity == Parity::Plus ? d : -d};
}

// psi^dagger Sy psi = (i / sqrt 2)[psi2* (psi1 - psi3) - (psi1 - psi3)* psi2].
inline double current(std::complex<double> psi1, std::complex<double> psi2, std::complex<double> psi3) {
    const std::complex<double> u = psi1 - psi3;
    return -kSqrt2 * (std::conj(psi2) * u).imag();
}

inline double current(const WaveFunctionSample& s) { return current(s.psi1, s.psi2, s.psi3); }

}  // namespace ps1
