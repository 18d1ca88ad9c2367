#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ps1/bands.hpp>
#include <ps1/boundstates.hpp>
#include <ps1/invariants.hpp>
#include <ps1/pointlimits.hpp>
#include <ps1/spectra.hpp>

#include "run_config.hpp"
#include "table.hpp"

using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kVerifyFailed = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Result of one command: the main table, optional side tables written to
// their own paths, and summary fields for the manifest.
struct Output {
    explicit Output(Table t) : main(std::move(t)) {}
    Table main;
    std::vector<std::pair<std::string, Table>> extra;
    json summary = json::object();
    int exit_code = kOk;
};

void write_table(const Table& t, const std::string& path, const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty() && path != "-") {
        file.open(path, std::ios::binary);
        if (!file) throw UsageError("cannot open " + path + " for writing");
        os = &file;
    }
    if (format == "json") *os << t.to_json().dump(2) << "\n";
    else t.write_csv(*os);
}

std::string parity_str(ps1::Parity p) { return std::string(1, ps1::parity_char(p)); }

// Sweep presets carry the captioned pencil and width; the V range is ours.
struct SweepPreset {
    ps1::Vertex vertex;
    double a1, a2, a3, l;
};

const std::map<std::string, SweepPreset>& sweep_presets() {
    static const std::map<std::string, SweepPreset> p{
        {"fig4", {ps1::Vertex::P1, 1.0, 1.0, 1.0, 0.5}},   {"fig5", {ps1::Vertex::P2, -1.0, 1.0, -1.0, 5.0}},
        {"fig6", {ps1::Vertex::P2, 1.0, 1.0, -1.0, 2.0}},  {"fig7", {ps1::Vertex::P1, 0.0, 1.0, 0.0, 2.0}},
        {"fig8", {ps1::Vertex::P1, 1.0, 0.0, 1.0, 2.5}},   {"fig9", {ps1::Vertex::P1, 2.0, 1.0, 0.0, 2.0}},
    };
    return p;
}

ps1::Vertex parse_vertex(const std::string& s) {
    if (s == "P1") return ps1::Vertex::P1;
    if (s == "P2") return ps1::Vertex::P2;
    throw UsageError("vertex must be P1 or P2");
}

ps1::SqueezeFamily parse_family(const std::string& s) {
    if (s == "delta") return ps1::SqueezeFamily::Delta;
    if (s == "l23") return ps1::SqueezeFamily::TwoThirds;
    if (s == "l2") return ps1::SqueezeFamily::InvSquare;
    throw UsageError("family must be delta, l23 or l2");
}

ps1::PencilSpec set_pencil(const RunConfig& c) {
    if (!c.alpha.empty()) {
        if (c.alpha.size() != 3) throw UsageError("--alpha takes three values");
        return ps1::PencilSpec{parse_vertex(c.vertex), c.alpha[0], c.alpha[1], c.alpha[2], {}, c.m};
    }
    static const std::map<std::string, ps1::SpectrumTag> tags{
        {"P", ps1::SpectrumTag::P},   {"D", ps1::SpectrumTag::D},   {"H1", ps1::SpectrumTag::H1},
        {"H2", ps1::SpectrumTag::H2}, {"W1", ps1::SpectrumTag::W1}, {"W2", ps1::SpectrumTag::W2}};
    if (c.set == "III") return ps1::PencilSpec{ps1::Vertex::P1, 1.0, 0.0, 0.0, {}, c.m};
    const auto it = tags.find(c.set);
    if (it == tags.end()) throw UsageError("unknown set " + c.set + " (P, D, H1, H2, W1, W2, III)");
    return ps1::representative_pencil(it->second, c.m);
}

// "0..3", "2" or "0,2,5".
std::vector<int> parse_levels(const std::string& s) {
    std::vector<int> out;
    try {
        if (const auto dots = s.find(".."); dots != std::string::npos) {
            const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
            if (b < a) throw UsageError("empty level range " + s);
            for (int n = a; n <= b; ++n) out.push_back(n);
            return out;
        }
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse level list " + s);
    }
    if (out.empty()) throw UsageError("empty level list");
    return out;
}

ps1::Potential potential(const RunConfig& c) {
    if (c.v.size() != 3) throw UsageError("--v takes three strengths v11,v22,v33");
    ps1::Potential p{c.v[0], c.v[1], c.v[2], c.m};
    p.validate();
    return p;
}

ps1::Geometry geometry(const RunConfig& c) {
    ps1::Geometry g = c.has_edges ? ps1::Geometry{c.x1, c.x2} : ps1::Geometry::centered(c.l);
    g.validate();
    return g;
}

void apply_preset(RunConfig& c) {
    if (c.preset.empty()) return;
    const std::string& p = c.preset;
    if (c.command == "bands" && p == "shifted") {
        const double V = c.v.empty() ? 2.0 : c.v[0];
        c.v = {V, V, V};
    } else if (c.command == "boundstates" && p == "fig3") {
        c.v = {3.0 * c.m, 3.0 * c.m, 3.0 * c.m};
        c.l = 0.5 / c.m;
        c.has_edges = false;
    } else if (c.command == "sweep" && sweep_presets().count(p)) {
        const auto& s = sweep_presets().at(p);
        c.vertex = ps1::vertex_name(s.vertex);
        c.alpha = {s.a1, s.a2, s.a3};
        c.l = s.l / c.m;
    } else if (c.command == "pointlimit" && p == "fig10") {
        c.set = "P";
        c.family = "delta";
        c.g = ps1::kPi / 2.0;
        c.levels = "0..1";
        c.alpha.clear();
    } else if (c.command == "pointlimit" && p == "fig11") {
        c.set = "H2";
        c.family = "l2";
        c.g = 2.0;
        c.levels = "0..3";
        c.alpha.clear();
    } else if (c.command == "pointlimit" && p == "table1") {
        // handled by run_table1
    } else {
        throw UsageError("unknown preset '" + p + "' for " + c.command);
    }
}

Output run_bands(const RunConfig& c) {
    const auto pot = potential(c);
    if (c.nk < 1) throw UsageError("--nk must be positive");
    const auto sw = ps1::band_sweep(pot, ps1::linear_grid(-c.kmax * c.m, c.kmax * c.m, c.nk));
    Output o(Table({"k/m", "E_minus/m", "E_mid/m", "E_plus/m"}));
    for (const auto& b : sw.bands) o.main.add({b.k / c.m, b.e_minus / c.m, b.e_mid / c.m, b.e_plus / c.m});
    o.summary["panel"] = std::string(1, ps1::panel_letter(sw.panel));
    o.summary["on_A"] = sw.flat.on_A;
    o.summary["on_B"] = sw.flat.on_B;
    if (sw.flat.flat_energy) o.summary["flat_energy/m"] = *sw.flat.flat_energy / c.m;
    return o;
}

Output run_flat(const RunConfig& c) {
    const auto pot = potential(c);
    const auto fc = ps1::classify_flat(pot);
    Output o(Table({"on_A", "on_B", "flat_energy/m"}));
    o.main.add({std::string(fc.on_A ? "true" : "false"), std::string(fc.on_B ? "true" : "false"),
                fc.flat_energy ? Table::Cell{*fc.flat_energy / c.m} : Table::Cell{std::string()}});
    o.summary["on_A"] = fc.on_A;
    o.summary["on_B"] = fc.on_B;
    return o;
}

Table wavefunction_table() { return Table({"state", "parity", "E_b/m", "x*m", "psi1", "psi2", "psi3"}); }

Output run_boundstates(const RunConfig& c) {
    const auto pot = potential(c);
    const auto geom = geometry(c);
    const auto states = ps1::find_bound_states(pot, geom);
    Output o(Table({"parity", "E_b/m", "kappa/m", "residual"}));
    for (const auto& s : states) o.main.add({parity_str(s.parity), s.E / c.m, s.kappa / c.m, s.residual});
    o.summary["count"] = states.size();
    if (!c.psi_out.empty()) {
        if (c.nx < 2) throw UsageError("--nx must be at least 2");
        const double pad = c.xpad * geom.l();
        const auto xs = ps1::linear_grid(geom.x1 - pad, geom.x2 + pad, static_cast<std::size_t>(c.nx));
        Table psi = wavefunction_table();
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto wf = ps1::eigenfunction(states[i], pot, geom, xs);
            for (const auto& s : wf.samples)
                psi.add({static_cast<long long>(i), parity_str(states[i].parity), states[i].E / c.m, s.x * c.m, s.psi1,
                         s.psi2, s.psi3});
        }
        o.extra.emplace_back(c.psi_out, std::move(psi));
    }
    return o;
}

Output run_sweep(const RunConfig& c) {
    if (c.alpha.size() != 3) throw UsageError("sweep needs --alpha a1,a2,a3 or a preset");
    if (c.nv < 1) throw UsageError("--nv must be positive");
    ps1::PencilSpec pen{parse_vertex(c.vertex), c.alpha[0], c.alpha[1], c.alpha[2],
                        ps1::linear_grid(c.vmin * c.m, c.vmax * c.m, static_cast<std::size_t>(c.nv)), c.m};
    const auto geom = geometry(c);
    ps1::SweepOptions opt;
    opt.threads = c.threads;
    const auto bs = ps1::sweep(pen, geom, opt);

    Output o(Table({"V/m", "parity", "E_b/m", "branch_id", "k2_sign"}));
    for (const auto& level : bs.levels)
        for (const auto& s : level)
            o.main.add({s.V / c.m, parity_str(s.sol.parity), s.sol.E / c.m, static_cast<long long>(s.branch),
                        static_cast<long long>(ps1::sgn(s.sol.k2))});

    o.summary["type"] = ps1::tag_name(bs.type.tag);
    if (bs.type.beta) o.summary["beta"] = *bs.type.beta;
    o.summary["branches"] = bs.branch_count;
    auto events = json::array();
    for (const auto& e : bs.events) {
        if (!e.threshold) continue;
        events.push_back({{"kind", e.kind == ps1::EventKind::Appear ? "appear" : "disappear"},
                          {"branch", e.branch},
                          {"V/m", e.V / c.m},
                          {"E_b/m", e.E / c.m},
                          {"parity", parity_str(e.parity)}});
    }
    o.summary["threshold_events"] = events;
    if (bs.type.tag == ps1::SpectrumTag::H1 || bs.type.tag == ps1::SpectrumTag::W1 ||
        bs.type.tag == ps1::SpectrumTag::W2) {
        auto cut = json::array();
        const double vlim = std::max(std::abs(c.vmin), std::abs(c.vmax)) * c.m;
        for (int n = 1; n <= 3; ++n)
            for (const auto& k : ps1::cutoff_values(bs.type, geom, n, vlim))
                cut.push_back({{"n", k.n}, {"V/m", k.V / c.m}, {"threshold/m", k.threshold / c.m}});
        o.summary["cutoffs"] = cut;
    }
    return o;
}

std::string matrix_shape(ps1::LimitShape s) {
    switch (s) {
        case ps1::LimitShape::Rotation: return "rotation";
        case ps1::LimitShape::Lower: return "lower";
        case ps1::LimitShape::Upper: return "upper";
    }
    return "rotation";
}

std::string energy_formula(ps1::SpectrumTag tag, ps1::SqueezeFamily fam, bool ground) {
    using ps1::SpectrumTag;
    if (tag == SpectrumTag::H1) return "E_n = (alpha / n pi)^2 g^3 m";
    if (ground && (tag == SpectrumTag::H2 || tag == SpectrumTag::W2)) return "E_0 = m g / sqrt(4 + g^2)";
    if (ground && tag == SpectrumTag::W1) return "E_0 = -sgn(beta g) m / sqrt(1 + beta^2 g^2 / 4)";
    if (tag == SpectrumTag::H2) return "E_n = (n^2 pi^2 m / 2g)(sqrt(1 + 4 g^2 / n^4 pi^4) - 1)";
    if (tag == SpectrumTag::W1) return "E_n = -n^2 pi^2 m / (beta g)";
    if (tag == SpectrumTag::W2) return "E_n = -(1 + n^2 pi^2 / (alpha g)) m";
    (void)fam;
    return "";
}

Output run_table1(const RunConfig& c) {
    struct Sample {
        double g;
        std::vector<int> levels;
    };
    // One representative strength per row, inside every stated window.
    const std::map<std::pair<ps1::SpectrumTag, ps1::SqueezeFamily>, Sample> samples{
        {{ps1::SpectrumTag::H1, ps1::SqueezeFamily::TwoThirds}, {1.0, {1, 2, 3}}},
        {{ps1::SpectrumTag::W1, ps1::SqueezeFamily::Delta}, {2.0, {0}}},
        {{ps1::SpectrumTag::W1, ps1::SqueezeFamily::InvSquare}, {40.0, {1, 2}}},
        {{ps1::SpectrumTag::H2, ps1::SqueezeFamily::Delta}, {2.0, {0}}},
        {{ps1::SpectrumTag::H2, ps1::SqueezeFamily::InvSquare}, {2.0, {1, 2, 3}}},
        {{ps1::SpectrumTag::W2, ps1::SqueezeFamily::Delta}, {-2.0, {0}}},
        {{ps1::SpectrumTag::W2, ps1::SqueezeFamily::InvSquare}, {-20.0, {1, 2}}},
    };
    Output o(Table({"set", "family", "g", "n", "parity", "E_n/m", "formula", "shape", "l11", "l12", "l21", "l22"}));
    auto rows = json::array();
    for (const auto& e : ps1::table_entries()) {
        const auto& smp = samples.at({e.tag, e.family});
        const ps1::LimitSpec spec{ps1::representative_pencil(e.tag, c.m), {e.family, smp.g}};
        for (int n : smp.levels) {
            const auto pi = ps1::point_interaction(spec, n);
            const auto& L = pi.lambda;
            const std::string formula = energy_formula(e.tag, e.family, e.ground);
            o.main.add({std::string(e.set), std::string(ps1::family_name(e.family)), smp.g, static_cast<long long>(n),
                        parity_str(pi.level.parity), pi.level.E / c.m, formula, matrix_shape(pi.level.shape), L.l11,
                        L.l12, L.l21, L.l22});
            rows.push_back({{"set", e.set},
                            {"family", ps1::family_name(e.family)},
                            {"limit", n == 0 ? "ground" : "excited"},
                            {"formula", formula},
                            {"g", smp.g},
                            {"n", n},
                            {"E_n/m", pi.level.E / c.m},
                            {"lambda", {L.l11, L.l12, L.l21, L.l22}}});
        }
    }
    o.summary["table"] = rows;
    return o;
}

Output run_pointlimit(const RunConfig& c) {
    if (c.preset == "table1") return run_table1(c);
    const ps1::LimitSpec spec{set_pencil(c), {parse_family(c.family), c.g}};
    Output o(Table({"set", "family", "g", "n", "parity", "E_n/m", "chi", "l11", "l12", "l21", "l22"}));
    std::vector<ps1::PointInteraction> found;
    for (int n : parse_levels(c.levels)) {
        const auto lv = ps1::limit_energy(spec, n);
        if (!lv) {
            o.summary["no_bound_state"] = true;
            continue;
        }
        const auto pi = ps1::limit_matrix(spec, *lv);
        const auto& L = pi.lambda;
        o.main.add({c.set, c.family, c.g, static_cast<long long>(n), parity_str(lv->parity), lv->E / c.m, pi.chi, L.l11,
                    L.l12, L.l21, L.l22});
        found.push_back(pi);
    }

    if (!c.psi_out.empty()) {
        if (c.nx < 2) throw UsageError("--nx must be at least 2");
        const auto xs = ps1::linear_grid(-c.xpad / c.m, c.xpad / c.m, static_cast<std::size_t>(c.nx));
        Table psi = wavefunction_table();
        for (const auto& pi : found)
            for (const auto& s : ps1::squeezed_eigenfunction(pi, c.m, xs))
                psi.add({static_cast<long long>(pi.level.n), parity_str(pi.level.parity), pi.level.E / c.m, s.x * c.m,
                         s.psi1, s.psi2, s.psi3});
        o.extra.emplace_back(c.psi_out, std::move(psi));
    }

    if (c.converge) {
        Table conv({"n", "l*m", "V/m", "E_b/m", "error/m", "order"});
        const auto ls = ps1::halving_sequence(c.l0 / c.m, c.kmin, c.kmax_halving);
        for (const auto& pi : found) {
            const auto st = ps1::convergence_study(spec, pi.level.n, ls);
            for (const auto& r : st.rows)
                conv.add({static_cast<long long>(pi.level.n), r.l * c.m, r.V / c.m, r.E / c.m, r.error / c.m,
                          std::isnan(r.order) ? Table::Cell{std::string()} : Table::Cell{r.order}});
        }
        if (c.conv_out.empty()) throw UsageError("--converge needs --conv-out");
        o.extra.emplace_back(c.conv_out, std::move(conv));
    }
    return o;
}

Output run_verify(const RunConfig& c) {
    namespace inv = ps1::invariants;
    std::vector<inv::CheckResult> results{inv::oracle_agreement(c.seed, c.cases)};
    for (auto& r : inv::property_suite(c.seed)) results.push_back(std::move(r));

    Output o(Table({"check", "passed", "worst", "bound", "detail"}));
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        o.main.add({r.name, std::string(r.passed ? "true" : "false"), r.worst, r.bound, r.detail});
        std::cerr << (r.passed ? "ok   " : "FAIL ") << r.name << " (worst " << Table::format(r.worst) << ", bound "
                  << Table::format(r.bound) << ")\n";
    }
    o.summary["all_passed"] = all;
    if (!all) o.exit_code = kVerifyFailed;
    return o;
}

int execute(RunConfig c) {
    const auto t0 = std::chrono::steady_clock::now();
    apply_preset(c);
    if (!(c.m > 0.0)) throw UsageError("--m must be positive");
    if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");

    Output o(Table({}));
    if (c.command == "bands") o = run_bands(c);
    else if (c.command == "flat") o = run_flat(c);
    else if (c.command == "boundstates") o = run_boundstates(c);
    else if (c.command == "sweep") o = run_sweep(c);
    else if (c.command == "pointlimit") o = run_pointlimit(c);
    else if (c.command == "verify") o = run_verify(c);
    else throw UsageError("unknown command " + c.command);

    write_table(o.main, c.out, c.format);
    for (const auto& [path, table] : o.extra) write_table(table, path, c.format);

    if (!c.out.empty() && c.out != "-") {
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest{{"tool", "ps1"},
                      {"library_version", ps1::kLibraryVersion},
                      {"config", c},
                      {"rows", o.main.size()},
                      {"summary", o.summary},
                      {"timings", {{"total_seconds", seconds}}}};
        std::ofstream mf(c.out + ".json");
        if (!mf) throw UsageError("cannot write manifest " + c.out + ".json");
        mf << manifest.dump(2) << "\n";
    }
    return o.exit_code;
}

void add_output_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--out,-o", c.out, "output path; stdout when omitted");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--m", c.m, "mass (energy unit)");
}

void add_geometry_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--l", c.l, "barrier width, centred at the origin");
    sub->add_option("--x1", c.x1, "left edge (with --x2)");
    sub->add_option("--x2", c.x2, "right edge (with --x1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states, bands and point limits of a pseudospin-1 rectangular barrier"};
    app.require_subcommand(1);
    RunConfig c;
    std::string manifest_path;
    double v11 = 0.0, v22 = 0.0, v33 = 0.0;

    auto* bands = app.add_subcommand("bands", "dispersion bands of a constant potential");
    bands->add_option("--v", c.v, "strengths v11,v22,v33")->delimiter(',')->expected(3);
    bands->add_option("--kmax", c.kmax, "half-range of k in units of m");
    bands->add_option("--nk", c.nk, "number of k points");
    bands->add_option("--preset", c.preset, "shifted: v11 = v22 = v33 = first --v value");
    add_output_options(bands, c);

    auto* flat = app.add_subcommand("flat", "flat-band plane membership");
    flat->add_option("--v11", v11);
    flat->add_option("--v22", v22);
    flat->add_option("--v33", v33);
    add_output_options(flat, c);

    auto* bound = app.add_subcommand("boundstates", "bound states of one barrier");
    bound->add_option("--v", c.v, "strengths v11,v22,v33")->delimiter(',')->expected(3);
    bound->add_option("--preset", c.preset, "fig3");
    bound->add_option("--psi-out", c.psi_out, "also write eigenfunction samples here");
    bound->add_option("--nx", c.nx, "eigenfunction sample count");
    bound->add_option("--xpad", c.xpad, "exterior margin in barrier widths");
    add_geometry_options(bound, c);
    add_output_options(bound, c);

    auto* sweep = app.add_subcommand("sweep", "bound-state energies along a pencil");
    sweep->add_option("--vertex", c.vertex, "P1 or P2");
    sweep->add_option("--alpha", c.alpha, "direction a1,a2,a3")->delimiter(',')->expected(3);
    sweep->add_option("--vmin", c.vmin);
    sweep->add_option("--vmax", c.vmax);
    sweep->add_option("--nv", c.nv, "number of V points");
    sweep->add_option("--threads", c.threads, "worker threads, 0 for all cores");
    sweep->add_option("--preset", c.preset, "fig4 ... fig9");
    add_geometry_options(sweep, c);
    add_output_options(sweep, c);

    auto* point = app.add_subcommand("pointlimit", "squeezed point interactions");
    point->add_option("--family", c.family, "delta, l23 or l2");
    point->add_option("--set", c.set, "P, D, H1, H2, W1, W2 or III");
    point->add_option("--vertex", c.vertex, "pencil vertex when --alpha is given");
    point->add_option("--alpha", c.alpha, "pencil direction instead of --set")->delimiter(',')->expected(3);
    point->add_option("--g", c.g, "dimensionless strength");
    point->add_option("--n", c.levels, "levels: 2, 0..3 or 0,2");
    point->add_option("--preset", c.preset, "fig10, fig11 or table1");
    point->add_option("--psi-out", c.psi_out, "also write squeezed eigenfunctions here");
    point->add_option("--nx", c.nx, "eigenfunction sample count");
    point->add_option("--xmax", c.xpad, "eigenfunction half-range in units of 1/m");
    point->add_flag("--converge", c.converge, "run a finite-width convergence study");
    point->add_option("--conv-out", c.conv_out, "convergence table path");
    point->add_option("--l0", c.l0, "convergence widths l0 / 2^k");
    point->add_option("--kmin", c.kmin);
    point->add_option("--kmax", c.kmax_halving);
    add_output_options(point, c);

    auto* verify = app.add_subcommand("verify", "oracle cross-check and invariant suite");
    verify->add_option("--seed", c.seed);
    verify->add_option("--cases", c.cases, "random configurations for the oracle check");
    add_output_options(verify, c);

    auto* replay = app.add_subcommand("replay", "rerun the configuration stored in a manifest");
    replay->add_option("manifest", manifest_path)->required();
    std::string replay_out;
    replay->add_option("--out,-o", replay_out, "override the recorded output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw UsageError("cannot read " + manifest_path);
            c = json::parse(in).at("config").get<RunConfig>();
            c.out = replay_out;
            return execute(c);
        }
        c.command = app.get_subcommands().front()->get_name();
        if (flat->parsed()) c.v = {v11, v22, v33};
        if (bound->parsed() || sweep->parsed())
            c.has_edges = bound->get_option("--x1")->count() + bound->get_option("--x2")->count() +
                              sweep->get_option("--x1")->count() + sweep->get_option("--x2")->count() >
                          0;
        return execute(c);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ps1::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ps1::Errc::InvalidParameter ? kUsage : kNumerical;
    } catch (const json::exception& e) {
        std::cerr << "usage error: bad manifest: " << e.what() << "\n";
        return kUsage;
    }
}
