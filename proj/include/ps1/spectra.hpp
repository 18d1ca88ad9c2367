#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "boundstates.hpp"
#include "model.hpp"

namespace ps1 {

enum class Vertex { P1, P2 };

inline const char* vertex_name(Vertex v) { return v == Vertex::P1 ? "P1" : "P2"; }

// A line of strengths through a fixed vertex. P1 scales the bare strengths,
// P2 the renormalized ones.
struct PencilSpec {
    Vertex vertex = Vertex::P1;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
    std::vector<double> V_grid;
    double m = 1.0;

    Potential at(double V) const {
        if (vertex == Vertex::P1) return Potential{alpha1 * V, alpha2 * V, alpha3 * V, m};
        return Potential::from_renormalized(alpha1 * V, alpha2 * V, alpha3 * V, m);
    }
};

enum class SpectrumTag { P, D, H1, H2, W1, W2, Unclassified };

inline const char* tag_name(SpectrumTag t) {
    switch (t) {
        case SpectrumTag::P: return "P";
        case SpectrumTag::D: return "D";
        case SpectrumTag::H1: return "H1";
        case SpectrumTag::H2: return "H2";
        case SpectrumTag::W1: return "W1";
        case SpectrumTag::W2: return "W2";
        case SpectrumTag::Unclassified: return "unclassified";
    }
    return "unclassified";
}

struct SpectrumType {
    SpectrumTag tag = SpectrumTag::Unclassified;
    std::optional<double> beta;  // 2 a1 a3 / (a1 + a3) when a1 + a3 != 0
    Vertex vertex = Vertex::P1;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
    double m = 1.0;
};

inline SpectrumType classify(const PencilSpec& pen) {
    SpectrumType t;
    t.vertex = pen.vertex;
    t.alpha1 = pen.alpha1;
    t.alpha2 = pen.alpha2;
    t.alpha3 = pen.alpha3;
    t.m = pen.m;
    const double a1 = pen.alpha1, a2 = pen.alpha2, a3 = pen.alpha3;
    if (a1 + a3 != 0.0) t.beta = 2.0 * a1 * a3 / (a1 + a3);

    const bool all_nonzero = a1 != 0.0 && a2 != 0.0 && a3 != 0.0;
    if (all_nonzero && a1 + a3 != 0.0) {
        const double r = a1 * a3 / (a1 + a3);
        if (r > 0.0) t.tag = SpectrumTag::P;
        else if (r < 0.0) t.tag = SpectrumTag::D;
    } else if (a1 == -a3 && a1 != 0.0 && a2 != 0.0) {
        t.tag = SpectrumTag::H1;
    } else if (pen.vertex == Vertex::P1 && a1 == 0.0 && a3 == 0.0 && a2 != 0.0) {
        t.tag = SpectrumTag::H2;
    } else if (a1 != 0.0 && a3 != 0.0 && a1 + a3 != 0.0 && a2 == 0.0) {
        t.tag = SpectrumTag::W1;
    } else if (pen.vertex == Vertex::P1 && a1 > 0.0 && a2 != 0.0 && a3 == 0.0) {
        t.tag = SpectrumTag::W2;
    }
    return t;
}

struct AsymptoticLevel {
    int n = 0;
    Parity parity = Parity::Plus;
    double E = 0.0;
    bool in_window = true;  // whether V lies in the formula's stated range
};

namespace detail {

// The closed forms assume a2 = 1. A line with a2 != 0 is rewritten with
// V' = a2 V and a' = a / a2.
struct Normalized {
    double V;
    double a1;
    double a3;
};

inline Normalized normalize_alpha2(const SpectrumType& t, double V) {
    if (t.alpha2 == 0.0) return {V, t.alpha1, t.alpha3};
    return {t.alpha2 * V, t.alpha1 / t.alpha2, t.alpha3 / t.alpha2};
}

inline Parity odd_plus(int n) { return n % 2 == 1 ? Parity::Plus : Parity::Minus; }
inline Parity even_plus(int n) { return n % 2 == 0 ? Parity::Plus : Parity::Minus; }

}  // namespace detail

// Large-|V| closed forms for the level(s) of the given type. P and D return
// the (E+, E-) pair and ignore n; H and W return the single level n.
inline std::vector<AsymptoticLevel> asymptotic_energy(const SpectrumType& t, double V, const Geometry& geom,
                                                      int n = 0) {
    const double m = t.m, l = geom.l();
    if (n < 0) fail(Errc::InvalidParameter, "level index must be non-negative");
    const auto nv = detail::normalize_alpha2(t, V);
    const double Vp = nv.V;
    const double q = n * kPi / l;

    switch (t.tag) {
        case SpectrumTag::P: {
            const double beta = 2.0 * nv.a1 * nv.a3 / (nv.a1 + nv.a3);
            if (!(beta > 0.0)) fail(Errc::TypeMismatch, "periodic asymptotics need beta > 0 after a2 normalization");
            const double th = std::sqrt(beta) * Vp * l / 2.0;
            const double tn = std::tan(th);
            const double s = sgn(tn);
            return {{0, Parity::Plus, s * m / std::sqrt(1.0 + beta / (tn * tn)), true},
                    {0, Parity::Minus, -s * m / std::sqrt(1.0 + beta * tn * tn), true}};
        }
        case SpectrumTag::D: {
            const double beta = 2.0 * nv.a1 * nv.a3 / (nv.a1 + nv.a3);
            if (!(beta < 0.0)) fail(Errc::TypeMismatch, "double-level asymptotics need beta < 0 after a2 normalization");
            const double th = std::sqrt(-beta) * Vp * l / 2.0;
            const double th_t = std::tanh(th);
            const double s = sgn(Vp);
            return {{0, Parity::Plus, s * m / std::sqrt(1.0 - beta / (th_t * th_t)), true},
                    {0, Parity::Minus, s * m / std::sqrt(1.0 - beta * th_t * th_t), true}};
        }
        case SpectrumTag::H1: {
            if (n < 1) fail(Errc::InvalidParameter, "H1 levels start at n = 1");
            const double a = nv.a1;
            const double E = std::pow(a * l / (n * kPi), 2) * Vp * Vp * Vp;
            const bool win = std::abs(Vp) < std::pow(n * kPi / (std::abs(a) * l), 2.0 / 3.0) * std::cbrt(m);
            return {{n, detail::odd_plus(n), E, win}};
        }
        case SpectrumTag::H2: {
            if (n == 0) return {{0, Parity::Plus, sgn(Vp) * m / std::sqrt(1.0 + std::pow(2.0 / (Vp * l), 2)), true}};
            const double E = sgn(Vp) * std::sqrt(std::pow(q, 4) / (4.0 * Vp * Vp) + m * m) - q * q / (2.0 * Vp);
            return {{n, detail::even_plus(n), E, true}};
        }
        case SpectrumTag::W1: {
            const double beta = *t.beta;
            if (n == 0) {
                const double E = -sgn(beta * V) * m / std::sqrt(1.0 + std::pow(beta * V * l / 2.0, 2));
                return {{0, Parity::Minus, E, true}};
            }
            const double E = -q * q / (beta * V);
            return {{n, detail::odd_plus(n), E, q * q / (std::abs(beta) * m) < std::abs(V)}};
        }
        case SpectrumTag::W2: {
            const double a = nv.a1;
            if (n == 0) {
                const double E = Vp < 0.0 ? -m / std::sqrt(1.0 + 4.0 / (Vp * Vp * l * l))
                                          : m / std::sqrt(1.0 + 2.0 * a * m / Vp);
                return {{0, Parity::Plus, E, true}};
            }
            const double E = -(m + q * q / (a * Vp));
            return {{n, detail::even_plus(n), E, Vp < -q * q / (2.0 * a * m)}};
        }
        case SpectrumTag::Unclassified: break;
    }
    fail(Errc::TypeMismatch, "no asymptotic form for an unclassified pencil");
}

struct Cutoff {
    int n = 0;
    double V = 0.0;
    double threshold = 0.0;  // +m or -m
    Parity parity = Parity::Plus;
};

// Strengths where level n touches a threshold: there kappa = 0 and the
// parity equations reduce to k l = n pi with k evaluated at E = +-m.
inline std::vector<Cutoff> cutoff_values(const SpectrumType& t, const Geometry& geom, int n, double V_max = 1e4) {
    if (t.tag != SpectrumTag::H1 && t.tag != SpectrumTag::W1 && t.tag != SpectrumTag::W2)
        fail(Errc::TypeMismatch, "cutoffs are defined for H1, W1 and W2 pencils");
    if (n < 1) fail(Errc::InvalidParameter, "cutoff index starts at n = 1");
    const double m = t.m, l = geom.l();
    const PencilSpec pen{t.vertex, t.alpha1, t.alpha2, t.alpha3, {}, m};
    const double target = std::pow(n * kPi / l, 2);

    // Log-spaced V on both half-axes, from 1e-4 m up to V_max.
    std::vector<double> vs;
    const int per_side = 6000;
    const double lo = std::log(1e-4 * m), hi = std::log(V_max);
    for (int i = per_side - 1; i >= 0; --i) vs.push_back(-std::exp(lo + (hi - lo) * i / (per_side - 1)));
    for (int i = 0; i < per_side; ++i) vs.push_back(std::exp(lo + (hi - lo) * i / (per_side - 1)));

    std::vector<Cutoff> out;
    for (double E : {m, -m}) {
        auto g = [&](double V) {
            const Potential p = pen.at(V);
            if (near_va(p, E)) return std::numeric_limits<double>::quiet_NaN();
            return k_squared(p, E) - target;
        };
        double pv = g(vs[0]);
        for (std::size_t i = 1; i < vs.size(); ++i) {
            const double cv = g(vs[i]);
            if (std::isfinite(pv) && std::isfinite(cv) && (pv < 0.0) != (cv < 0.0)) {
                double a = vs[i - 1], b = vs[i], fa = pv;
                for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = g(mid);
                    if (!std::isfinite(fm)) break;
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                // A sign change through the k^2 pole is not a crossing.
                const double root = 0.5 * (a + b);
                const double res = g(root);
                if (std::isfinite(res) && std::abs(res) < 1e-6 * target) out.push_back({n, root, E, detail::odd_plus(n)});
            }
            pv = cv;
        }
    }
    std::sort(out.begin(), out.end(), [](const Cutoff& a, const Cutoff& b) { return a.V < b.V; });
    return out;
}

struct SweepState {
    double V = 0.0;
    BoundStateSolution sol;
    int branch = -1;
};

enum class EventKind { Appear, Disappear };

struct BranchEvent {
    EventKind kind = EventKind::Appear;
    int branch = -1;
    double V = 0.0;
    double E = 0.0;
    Parity parity = Parity::Plus;
    bool threshold = false;  // happens within 0.05 m of E = +-m
};

struct BranchedSpectrum {
    PencilSpec pencil;
    SpectrumType type;
    std::vector<std::vector<SweepState>> levels;  // one list per V-grid point, sorted by E
    std::vector<BranchEvent> events;
    int branch_count = 0;
};

struct SweepOptions {
    ScanOptions scan{};
    unsigned threads = 0;  // 0 picks hardware concurrency
    double min_jump = 0.02;  // smallest linking window, in units of m
};

namespace detail {

inline void link_branches(BranchedSpectrum& bs, double min_jump) {
    const double m = bs.pencil.m;
    const auto& grid = bs.pencil.V_grid;
    // Per-branch last two (V, E) samples, for the slope estimate.
    struct Track {
        double V0, E0, V1, E1;
        bool two;
    };
    std::vector<Track> tracks;

    auto open_branch = [&](SweepState& s) {
        s.branch = bs.branch_count++;
        tracks.push_back({s.V, s.sol.E, s.V, s.sol.E, false});
        bs.events.push_back({EventKind::Appear, s.branch, s.V, s.sol.E, s.sol.parity, std::abs(s.sol.E) > 0.95 * m});
    };

    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto& cur = bs.levels[i];
        if (i == 0) {
            for (auto& s : cur) open_branch(s);
            continue;
        }
        auto& prev = bs.levels[i - 1];
        const double dV = std::abs(grid[i] - grid[i - 1]);
        struct Cand {
            double d;
            std::size_t a, b;
        };
        std::vector<Cand> cands;
        for (std::size_t a = 0; a < prev.size(); ++a) {
            const Track& tr = tracks[prev[a].branch];
            const double slope = tr.two ? std::abs(tr.E1 - tr.E0) / std::max(std::abs(tr.V1 - tr.V0), 1e-300) : 1.0;
            const double window = std::max(5.0 * dV * slope, min_jump * m);
            for (std::size_t b = 0; b < cur.size(); ++b) {
                if (cur[b].sol.parity != prev[a].sol.parity) continue;
                const double d = std::abs(cur[b].sol.E - prev[a].sol.E);
                if (d <= window) cands.push_back({d, a, b});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            if (x.d != y.d) return x.d < y.d;
            if (x.a != y.a) return x.a < y.a;
            return x.b < y.b;
        });
        std::vector<bool> used_a(prev.size(), false), used_b(cur.size(), false);
        for (const auto& c : cands) {
            if (used_a[c.a] || used_b[c.b]) continue;
            used_a[c.a] = used_b[c.b] = true;
            cur[c.b].branch = prev[c.a].branch;
            Track& tr = tracks[cur[c.b].branch];
            tr.V0 = tr.V1;
            tr.E0 = tr.E1;
            tr.V1 = cur[c.b].V;
            tr.E1 = cur[c.b].sol.E;
            tr.two = true;
        }
        for (std::size_t a = 0; a < prev.size(); ++a)
            if (!used_a[a])
                bs.events.push_back({EventKind::Disappear, prev[a].branch, prev[a].V, prev[a].sol.E,
                                     prev[a].sol.parity, std::abs(prev[a].sol.E) > 0.95 * m});
        for (std::size_t b = 0; b < cur.size(); ++b)
            if (!used_b[b]) open_branch(cur[b]);
    }
}

}  // namespace detail

// Bound states at every V of the pencil grid, computed in parallel and merged
// in grid order, then linked into branches by a single-threaded pass.
inline BranchedSpectrum sweep(const PencilSpec& pen, const Geometry& geom, const SweepOptions& opt = {}) {
    if (!std::is_sorted(pen.V_grid.begin(), pen.V_grid.end()))
        fail(Errc::InvalidParameter, "V grid must be sorted");
    geom.validate();
    BranchedSpectrum bs;
    bs.pencil = pen;
    bs.type = classify(pen);
    bs.levels.resize(pen.V_grid.size());

    unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, std::max<std::size_t>(1, pen.V_grid.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(nt);
    auto work = [&](unsigned id) {
        try {
            for (std::size_t i = next++; i < pen.V_grid.size(); i = next++) {
                const double V = pen.V_grid[i];
                for (const auto& s : find_bound_states(pen.at(V), geom, opt.scan))
                    bs.levels[i].push_back(SweepState{V, s, -1});
            }
        } catch (...) {
            errors[id] = std::current_exception();
            next = pen.V_grid.size();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    detail::link_branches(bs, opt.min_jump);
    return bs;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

}  // namespace ps1
