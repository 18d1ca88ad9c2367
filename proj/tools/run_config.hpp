#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

// Everything a run depends on. The manifest written next to each output
// stores this object, and `ps1 replay` reads it back.
struct RunConfig {
    std::string command;
    std::string preset;
    std::string out;
    std::string format = "csv";
    double m = 1.0;

    // bands, flat, boundstates
    std::vector<double> v{0.0, 0.0, 0.0};
    double kmax = 5.0;
    int nk = 400;
    double l = 1.0;
    bool has_edges = false;
    double x1 = -0.5;
    double x2 = 0.5;
    std::string psi_out;
    int nx = 401;
    double xpad = 1.0;  // exterior margin in widths (boundstates) or half-range in 1/m (pointlimit)

    // sweep
    std::string vertex = "P1";
    std::vector<double> alpha;
    double vmin = -20.0;
    double vmax = 20.0;
    int nv = 801;
    unsigned threads = 0;

    // pointlimit
    std::string family = "delta";
    std::string set = "H2";
    double g = 2.0;
    std::string levels = "0";
    bool converge = false;
    double l0 = 1.0;
    int kmin = 2;
    int kmax_halving = 8;
    std::string conv_out;

    // verify
    std::uint64_t seed = 42;
    int cases = 20;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, command, preset, out, format, m, v, kmax, nk, l, has_edges,
                                                x1, x2, psi_out, nx, xpad, vertex, alpha, vmin, vmax, nv, threads,
                                                family, set, g, levels, converge, l0, kmin, kmax_halving, conv_out,
                                                seed, cases)
