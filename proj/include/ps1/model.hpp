#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ps1 {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Errc {
    InvalidParameter,
    PoleAtVa,
    ZeroEnergyPole,
    ZeroK,
    GapEdge,
    MuPole,
    SPole,
    PlaneMismatch,
    DegenerateRoots,
    TypeMismatch,
    OutOfValidityWindow,
    UnsupportedCombination,
    BranchLost,
    OutOfDomainSolution,
};

inline const char* to_string(Errc e) {
    switch (e) {
        case Errc::InvalidParameter: return "InvalidParameter";
        case Errc::PoleAtVa: return "PoleAtVa";
        case Errc::ZeroEnergyPole: return "ZeroEnergyPole";
        case Errc::ZeroK: return "ZeroK";
        case Errc::GapEdge: return "GapEdge";
        case Errc::MuPole: return "MuPole";
        case Errc::SPole: return "SPole";
        case Errc::PlaneMismatch: return "PlaneMismatch";
        case Errc::DegenerateRoots: return "DegenerateRoots";
        case Errc::TypeMismatch: return "TypeMismatch";
        case Errc::OutOfValidityWindow: return "OutOfValidityWindow";
        case Errc::UnsupportedCombination: return "UnsupportedCombination";
        case Errc::BranchLost: return "BranchLost";
        case Errc::OutOfDomainSolution: return "OutOfDomainSolution";
    }
    return "Unknown";
}

// Every library failure is a NumericalError; the CLI maps InvalidParameter to
// a usage error and everything else to a numerical-domain error.
class NumericalError : public std::runtime_error {
public:
    NumericalError(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw NumericalError(code, what); }

namespace tol {
inline constexpr double pole = 1e-12;       // relative distance to E = va
inline constexpr double flat = 1e-9;        // flat-band plane membership
inline constexpr double zero_energy = 1e-14;
}  // namespace tol

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kPi = 3.14159265358979323846;

inline int sgn(double x) { return (x > 0) - (x < 0); }

// Bare strengths (v11, v22, v33) and mass m. Renormalized strengths absorb the
// mass term: v1 = v11 + m, v2 = v22, v3 = v33 - m.
struct Potential {
    double v11 = 0.0;
    double v22 = 0.0;
    double v33 = 0.0;
    double m = 1.0;

    double v1() const { return v11 + m; }
    double v2() const { return v22; }
    double v3() const { return v33 - m; }
    double va() const { return 0.5 * (v1() + v3()); }

    static Potential from_renormalized(double v1, double v2, double v3, double m = 1.0) {
        return Potential{v1 - m, v2, v3 + m, m};
    }

    void validate() const {
        if (!(m > 0.0) || !std::isfinite(m)) fail(Errc::InvalidParameter, "mass must be positive");
        if (!std::isfinite(v11) || !std::isfinite(v22) || !std::isfinite(v33))
            fail(Errc::InvalidParameter, "strengths must be finite");
    }
};

struct Geometry {
    double x1 = -0.5;
    double x2 = 0.5;

    double l() const { return x2 - x1; }
    double a() const { return 0.5 * (x1 + x2); }

    static Geometry centered(double l) { return Geometry{-0.5 * l, 0.5 * l}; }

    void validate() const {
        if (!(x2 > x1) || !std::isfinite(x1) || !std::isfinite(x2))
            fail(Errc::InvalidParameter, "geometry requires x1 < x2");
    }
};

// Exterior decay data for an energy inside the gap.
struct EnergyPoint {
    double E = 0.0;
    double m = 1.0;
    double kappa = 1.0;
    double rho = 1.0;

    double rho_inv() const { return 1.0 / rho; }

    static EnergyPoint at(double E, double m) {
        if (!(std::abs(E) < m)) fail(Errc::GapEdge, "energy outside the open gap (-m, m)");
        EnergyPoint p;
        p.E = E;
        p.m = m;
        p.kappa = std::sqrt((m - E) * (m + E));
        p.rho = std::sqrt((m - E) / (m + E));
        if (!(p.kappa > 0.0)) fail(Errc::GapEdge, "kappa vanishes at the gap edge");
        return p;
    }
};

struct SpinMatrices {
    static Eigen::Matrix3cd Sy() {
        using C = std::complex<double>;
        const C i(0.0, 1.0);
        Eigen::Matrix3cd s;
        s << 0.0, -i, 0.0, i, 0.0, -i, 0.0, i, 0.0;
        return s / kSqrt2;
    }
    static Eigen::Matrix3cd Sz() { return Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal(); }
    static Eigen::Matrix3cd C() {
        Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();
        c(0, 2) = 1.0;
        c(1, 1) = 1.0;
        c(2, 0) = 1.0;
        return c;
    }
    static Eigen::Matrix3cd P() { return Eigen::Vector3cd(-1.0, 1.0, -1.0).asDiagonal(); }
};

// Momentum-space Hamiltonian k Sy + m Sz + diag(v11, v22, v33).
inline Eigen::Matrix3cd hamiltonian(const Potential& p, double k) {
    Eigen::Matrix3cd h = k * SpinMatrices::Sy() + p.m * SpinMatrices::Sz();
    h(0, 0) += p.v11;
    h(1, 1) += p.v22;
    h(2, 2) += p.v33;
    return h;
}

inline double dispersion_F(const Potential& p, double E) { return (E - p.v1()) * (E - p.v2()) * (E - p.v3()); }

inline double dispersion_G(const Potential& p, double E) { return E - p.va(); }

inline double dispersion_residual(const Potential& p, double E, double k2) {
    return dispersion_F(p, E) - dispersion_G(p, E) * k2;
}

inline bool near_va(const Potential& p, double E) {
    return std::abs(E - p.va()) < tol::pole * std::max(p.m, std::abs(p.va()));
}

// Squared interior wave number; negative values mean imaginary k.
inline double k_squared(const Potential& p, double E) {
    if (near_va(p, E)) fail(Errc::PoleAtVa, "k^2 has a pole at E = va");
    return dispersion_F(p, E) / dispersion_G(p, E);
}

// s(w, t) = sin(sqrt(w) t) / sqrt(w) and c(w, t) = cos(sqrt(w) t), continued
// to w < 0 through sinh/cosh. Both are entire in w.
struct SC {
    double s;
    double c;
};

inline SC sc_kernel(double w, double t) {
    const double z = w * t * t;
    if (std::abs(z) < 1e-4) {
        return SC{t * (1.0 - z / 6.0 + z * z / 120.0), 1.0 - z / 2.0 + z * z / 24.0};
    }
    if (w > 0.0) {
        const double k = std::sqrt(w);
        return SC{std::sin(k * t) / k, std::cos(k * t)};
    }
    const double kk = std::sqrt(-w);
    return SC{std::sinh(kk * t) / kk, std::cosh(kk * t)};
}

// Same pair divided by cosh(sqrt(-w) t) when w < 0, so large imaginary
// wave numbers never overflow. Only ratios and signs survive the scaling.
inline SC sc_kernel_scaled(double w, double t) {
    const double z = w * t * t;
    if (w >= 0.0 || std::abs(z) < 1e-4) return sc_kernel(w, t);
    const double kk = std::sqrt(-w);
    return SC{std::tanh(kk * t) / kk, 1.0};
}

inline double gamma(const Potential& p, double E, double k) {
    if (std::abs(E) < tol::zero_energy * p.m) fail(Errc::ZeroEnergyPole, "gamma has a pole at E = 0");
    if (k == 0.0) fail(Errc::ZeroK, "gamma needs k != 0");
    const EnergyPoint ep = EnergyPoint::at(E, p.m);
    return ep.kappa / k * (1.0 - p.v2() / E);
}

inline double eta(const Potential& p, double E, double k) {
    if (k == 0.0) fail(Errc::ZeroK, "eta needs k != 0");
    return kSqrt2 * (E - p.v2()) / k;
}

}  // namespace ps1
