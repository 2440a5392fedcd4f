// Command-line front end: discrepancy evaluation, generating functions,
// density inversion, instanton scans, and figure-data emission. All math
// lives in the library; this file only parses, dispatches, and formats.

#include <CLI11.hpp>
#include <json.hpp>

#include <quadisc/genfun.hpp>
#include <quadisc/laplace.hpp>
#include <quadisc/lego_instanton.hpp>
#include <quadisc/numeric.hpp>
#include <quadisc/point_set.hpp>
#include <quadisc/spectral.hpp>
#include <quadisc/wiener_instanton.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace quadisc;

// ---------------------------------------------------------------------------
// Output plumbing. CSV cells carry 12 significant digits, LF line endings,
// and a header row; JSON output mirrors the table as an array of objects.

std::string fmt12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<json>> rows;
};

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.cols.size(); ++i) {
        if (i) out += ',';
        out += t.cols[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i].is_string() ? row[i].get<std::string>() : fmt12(row[i].get<double>());
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& t) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.cols[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << content;
}

void emit_table(const Table& t, const std::string& path, const std::string& format) {
    write_output(path, format == "json" ? render_json(t) : render_csv(t));
}

// Side-channel JSON (scan summaries); stderr unless a path is given, so the
// main table can still go to stdout.
void emit_summary(const std::string& path, const json& j) {
    const std::string content = j.dump(2) + "\n";
    if (path.empty())
        std::cerr << content;
    else
        write_output(path, content);
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = std::min(s.find(',', pos), s.size());
        const std::string item = s.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad list entry '" + item + "'");
        }
        pos = comma + 1;
    }
    return out;
}

std::vector<double> linspace(double a, double b, std::size_t steps) {
    if (!(b > a)) throw std::invalid_argument("range: max must exceed min");
    if (steps < 1) throw std::invalid_argument("range: steps must be >= 1");
    std::vector<double> g(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(steps);
    return g;
}

// ---------------------------------------------------------------------------
// Option bags. One struct per subcommand keeps the dispatch bodies readable.

struct CommonOpts {
    std::string out;
    std::string format = "csv";
    std::string config;
    std::string summary_out;
    std::uint64_t seed = 0;
};

struct DiscrepancyOpts {
    std::string points;
    std::string kind = "l2star";
    std::size_t m = 0;
    std::string w;
};

struct GfOpts {
    std::string gf = "lego";
    std::string cls = "lego";
    std::size_t m = 5;
    std::size_t n = 5;
    std::string w;
    std::size_t dim = 1;
    std::size_t reps = 1000;
    double z_re = 0.1;
    double z_im = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    std::size_t steps = 0;
};

struct InvertOpts {
    std::string gf = "lego";
    std::size_t m = 5;
    double t = std::numeric_limits<double>::quiet_NaN();
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t steps = 0;
    double c = 0.0;
    double step = 0.05;
    double z_max = 0.0;
};

struct LegoInstOpts {
    double w_plus = 0.09;
    double v_max = 10.0;
    std::size_t steps = 400;
};

struct WienerInstOpts {
    double e_min = 0.1;
    double e_max = 12.0;
    std::size_t steps = 100;
    std::size_t series_terms = 50;
    std::string profile;
};

struct EigenOpts {
    std::string a;
    std::string b;
    int eps = 1;
};

struct FigOpts {
    int id = 0;
    double v = 2.0;
    double t_min = 0.1;
    double t_max = 6.0;
    std::size_t steps = 0;
    double w_plus = 0.09;
    double v_max = 10.0;
    double e = 5.7;
    std::size_t grid = 2048;
    double e_min = 0.1;
    double e_max = 12.0;
    std::size_t series_terms = 50;
};

LegoWeights weights_from(const std::string& w_list, std::size_t m, const char* what) {
    if (!w_list.empty()) return LegoWeights(parse_list(w_list, what));
    if (m < 1) throw std::invalid_argument(std::string(what) + ": need --w or --m");
    return LegoWeights::uniform(m);
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

void run_discrepancy(const CommonOpts& c, const DiscrepancyOpts& o) {
    std::ifstream in(o.points);
    if (!in) throw std::invalid_argument("cannot open points file: " + o.points);
    const PointSet ps = read_pointset_csv(in);

    double value = 0.0;
    if (o.kind == "l2star") {
        value = l2star_discrepancy(ps);
    } else if (o.kind == "lego") {
        const LegoWeights w = weights_from(o.w, o.m, "discrepancy");
        value = lego_discrepancy(bin_counts(ps, w), w);
    } else { // wiener
        if (o.m < 1) throw std::invalid_argument("discrepancy: wiener kind needs --m");
        value = discrete_wiener_discrepancy(ps, o.m);
    }

    Table t;
    t.cols = {"kind", "n", "dim", "value"};
    t.rows.push_back({json(o.kind), json(static_cast<double>(ps.size())),
                      json(static_cast<double>(ps.dim())), json(value)});
    emit_table(t, c.out, c.format);
}

void run_gf(const CommonOpts& c, const GfOpts& o) {
    const bool is_mc = o.gf == "mc";

    GFSpec spec = GFSpec::wiener_zeroth();
    if (o.gf == "lego") {
        spec = GFSpec::lego_zeroth(o.m);
    } else if (o.gf == "wiener") {
        spec = GFSpec::wiener_zeroth();
    } else if (o.gf == "lego-exact") {
        spec = GFSpec::lego_exact(o.n, weights_from(o.w, o.m, "gf"));
    } else if (is_mc) {
        const McClass cls = o.cls == "lego" ? McClass::lego(weights_from(o.w, o.m, "gf"))
                                            : McClass::wiener(o.dim);
        spec = GFSpec::mc_estimate(o.n, cls, o.reps, c.seed);
    } else {
        throw std::invalid_argument("gf: unknown kind '" + o.gf + "'");
    }

    std::vector<std::complex<double>> zs;
    if (o.steps > 0) {
        for (const double x : linspace(o.z_min, o.z_max, o.steps)) zs.emplace_back(x, o.z_im);
    } else {
        zs.emplace_back(o.z_re, o.z_im);
    }

    Table t;
    t.cols = {"z_re", "z_im", "G_re", "G_im"};
    if (is_mc) t.cols.push_back("stderr");
    for (const auto& z : zs) {
        std::vector<json> row{json(z.real()), json(z.imag())};
        if (is_mc) {
            const McEstimate est = mc_gf_estimate(z, o.n, *spec.mc_cls, o.reps, c.seed);
            row.push_back(json(est.mean.real()));
            row.push_back(json(est.mean.imag()));
            row.push_back(json(est.stderr_));
        } else {
            const std::complex<double> g = spec.evaluate(z);
            row.push_back(json(g.real()));
            row.push_back(json(g.imag()));
        }
        t.rows.push_back(std::move(row));
    }
    emit_table(t, c.out, c.format);
}

void run_invert(const CommonOpts& c, const InvertOpts& o) {
    GFSpec spec = GFSpec::wiener_zeroth();
    if (o.gf == "lego")
        spec = GFSpec::lego_zeroth(o.m);
    else if (o.gf != "wiener")
        throw std::invalid_argument("invert: --gf must be lego or wiener");

    std::vector<double> ts;
    if (!std::isnan(o.t))
        ts.push_back(o.t);
    else if (o.steps > 0)
        ts = linspace(o.t_min, o.t_max, o.steps);
    else
        throw std::invalid_argument("invert: need --t or --t-min/--t-max/--steps");

    const BromwichInverter inv(spec, {o.c, o.step, o.z_max});
    Table t;
    t.cols = {"t", "H", "imag_residual"};
    for (const double tv : ts) {
        const DensityPoint p = inv.density(tv);
        t.rows.push_back({json(p.t), json(p.h), json(p.imag_residual)});
    }
    emit_table(t, c.out, c.format);
}

void run_lego_instanton(const CommonOpts& c, const LegoInstOpts& o) {
    if (!(o.w_plus > 0.0 && o.w_plus < 0.5))
        throw std::invalid_argument("lego-instanton: --w-plus must be in (0, 1/2)");
    if (!(o.v_max > 1.0)) throw std::invalid_argument("lego-instanton: --v-max must be > 1");

    Table t;
    t.cols = {"v", "y_minus", "y_plus", "z", "dz_dv", "sigma", "dsigma_dv"};
    double min_z = std::numeric_limits<double>::infinity();
    bool wall_found = false;
    for (const double v : linspace(1.0, o.v_max, o.steps)) {
        const LegoBranchPoint bp = branch_point(v, o.w_plus);
        min_z = std::min(min_z, bp.z);
        wall_found = wall_found || (bp.dz_dv > 0.0 && bp.sigma < 0.0);
        t.rows.push_back({json(bp.v), json(bp.y_minus), json(bp.y_plus), json(bp.z),
                          json(bp.dz_dv), json(bp.sigma), json(bp.dsigma_dv)});
    }
    emit_table(t, c.out, c.format);

    emit_summary(c.summary_out, json{{"v_c", find_vc(o.w_plus)},
                                     {"wall_threshold", wall_threshold(o.w_plus)},
                                     {"min_z", min_z},
                                     {"wall_region_found", wall_found}});
}

json wiener_scan_row(double e, std::size_t terms) {
    const EnergyPoint ep = energy_point(e);
    const SeriesEval se = series_eval(e, terms);
    const double t_asymp =
        e > 1.0 ? asymptotics(e).t_approx : std::numeric_limits<double>::quiet_NaN();
    return json::array({e, ep.t, se.t, t_asymp, ep.t1, ep.s, se.s});
}

void run_wiener_instanton(const CommonOpts& c, const WienerInstOpts& o) {
    Table t;
    if (!o.profile.empty()) {
        const std::vector<double> spec = parse_list(o.profile, "wiener-instanton --profile");
        if (spec.size() != 3)
            throw std::invalid_argument("wiener-instanton: --profile needs E,k,grid");
        const auto k = static_cast<std::size_t>(spec[1]);
        const auto grid = static_cast<std::size_t>(spec[2]);
        if (static_cast<double>(k) != spec[1] || static_cast<double>(grid) != spec[2])
            throw std::invalid_argument("wiener-instanton: k and grid must be integers");
        const InstantonProfile p = instanton_profile(spec[0], k, grid);
        t.cols = {"x", "phi"};
        for (std::size_t j = 0; j < p.xs.size(); ++j)
            t.rows.push_back({json(p.xs[j]), json(p.phis[j])});
    } else {
        if (!(o.e_min > 0.0))
            throw std::invalid_argument("wiener-instanton: --e-min must be > 0");
        t.cols = {"E", "T_quad", "T_series", "T_asymp", "T1", "S_quad", "S_series"};
        for (const double e : linspace(o.e_min, o.e_max, o.steps)) {
            const json row = wiener_scan_row(e, o.series_terms);
            t.rows.push_back(std::vector<json>(row.begin(), row.end()));
        }
    }
    emit_table(t, c.out, c.format);
}

void run_eigen(const CommonOpts& c, const EigenOpts& o, bool format_given) {
    RankOneProblem p;
    p.a = parse_list(o.a, "eigen --a");
    p.b = parse_list(o.b, "eigen --b");
    p.eps = o.eps;
    const std::vector<double> ev = rank_one_eigenvalues(p);

    // Default output is a JSON list; CSV only on explicit request.
    if (!format_given || c.format == "json") {
        write_output(c.out, json{{"eigenvalues", ev}}.dump(2) + "\n");
        return;
    }
    Table t;
    t.cols = {"eigenvalue"};
    for (const double v : ev) t.rows.push_back({json(v)});
    emit_table(t, c.out, c.format);
}

void run_fig(const CommonOpts& c, const FigOpts& o) {
    Table t;
    switch (o.id) {
        case 1: {
            // f(y) = e^y / y with the two level-crossing markers y_-, y_+.
            if (!(o.t_min > 0.0)) throw std::invalid_argument("fig 1: --t-min must be > 0");
            const std::size_t steps = o.steps ? o.steps : 500;
            t.cols = {"t", "f", "marker"};
            for (const double x : linspace(o.t_min, o.t_max, steps))
                t.rows.push_back({json(x), json(std::exp(x) / x), json(0.0)});
            const auto [ym, yp] = y_branches(o.v);
            const double level = std::exp(o.v);
            t.rows.push_back({json(ym), json(level), json(1.0)});
            t.rows.push_back({json(yp), json(level), json(1.0)});
            break;
        }
        case 2: {
            if (!(o.w_plus > 0.0 && o.w_plus < 0.5))
                throw std::invalid_argument("fig 2: --w-plus must be in (0, 1/2)");
            const std::size_t steps = o.steps ? o.steps : 400;
            const double thr = wall_threshold(o.w_plus);
            t.cols = {"v", "z", "sigma", "wall_threshold"};
            for (const double v : linspace(1.0, o.v_max, steps)) {
                const LegoBranchPoint bp = branch_point(v, o.w_plus);
                t.rows.push_back({json(bp.v), json(bp.z), json(bp.sigma), json(thr)});
            }
            break;
        }
        case 3: {
            // Profiles at one energy for k = 1, 2, 3, re-anchored so that
            // phi(0) equals the lower turning point; the dropped shifts go to
            // the summary stream.
            t.cols = {"x", "phi_k1", "phi_k2", "phi_k3"};
            std::vector<InstantonProfile> profs;
            for (std::size_t k = 1; k <= 3; ++k)
                profs.push_back(instanton_profile(o.e, k, o.grid));
            for (std::size_t j = 0; j <= o.grid; ++j) {
                std::vector<json> row{json(profs[0].xs[j])};
                for (const auto& p : profs)
                    row.push_back(json(p.phis[j] - p.normalization_shift));
                t.rows.push_back(std::move(row));
            }
            json shifts = json::array(), zs = json::array();
            for (const auto& p : profs) {
                shifts.push_back(p.normalization_shift);
                zs.push_back(p.z);
            }
            emit_table(t, c.out, c.format);
            emit_summary(c.summary_out, json{{"e", o.e},
                                             {"grid", o.grid},
                                             {"normalization_shift", shifts},
                                             {"z", zs}});
            return;
        }
        case 4: {
            if (!(o.e_min > 0.0)) throw std::invalid_argument("fig 4: --e-min must be > 0");
            const std::size_t steps = o.steps ? o.steps : 100;
            t.cols = {"E", "T_quad", "T_series", "T_asymp"};
            for (const double e : linspace(o.e_min, o.e_max, steps)) {
                const json row = wiener_scan_row(e, o.series_terms);
                t.rows.push_back({row[0], row[1], row[2], row[3]});
            }
            break;
        }
        case 5: {
            if (!(o.e_min > 0.0)) throw std::invalid_argument("fig 5: --e-min must be > 0");
            const std::size_t steps = o.steps ? o.steps : 100;
            t.cols = {"E", "S_quad", "S_series", "S_asymp"};
            for (const double e : linspace(o.e_min, o.e_max, steps)) {
                const EnergyPoint ep = energy_point(e);
                const SeriesEval se = series_eval(e, o.series_terms);
                double s_asymp = std::numeric_limits<double>::quiet_NaN();
                if (e > 1.0) {
                    const Asymptotics as = asymptotics(e);
                    s_asymp = e + 2.0 * as.t1_bound / as.t_approx;
                }
                t.rows.push_back({json(e), json(ep.s), json(se.s), json(s_asymp)});
            }
            break;
        }
        default: throw std::invalid_argument("fig: --id must be 1..5");
    }
    emit_table(t, c.out, c.format);
}

// ---------------------------------------------------------------------------
// Config file: a flat JSON object whose keys are long option names of the
// invoked subcommand. The values are injected as tokens right after the
// subcommand, so explicit flags (parsed later, take-last) override them.

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: invalid JSON in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    return j;
}

std::vector<std::string> config_tokens(const json& cfg, const CLI::App* sub) {
    std::vector<std::string> tokens;
    for (const auto& [key, value] : cfg.items()) {
        const std::string name = "--" + key;
        if (const_cast<CLI::App*>(sub)->get_option_no_throw(name) == nullptr)
            throw std::invalid_argument("config: unknown option '" + key + "' for subcommand '" +
                                        sub->get_name() + "'");
        tokens.push_back(name);
        if (value.is_string())
            tokens.push_back(value.get<std::string>());
        else
            tokens.push_back(value.dump());
    }
    return tokens;
}

int run(int argc, char** argv) {
    CLI::App app{"quadratic discrepancy toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    auto add_common = [&](CLI::App* sub, bool with_summary) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--out", common.out, "output path (default: stdout)");
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", common.seed, "RNG seed");
        sub->add_option("--config", common.config, "JSON config file; flags override");
        if (with_summary)
            sub->add_option("--summary-out", common.summary_out,
                            "summary JSON path (default: stderr)");
        return sub;
    };

    DiscrepancyOpts disc;
    CLI::App* disc_cmd =
        add_common(app.add_subcommand("discrepancy", "discrepancy of a point-set CSV"), false);
    disc_cmd->add_option("--points", disc.points, "point-set CSV file")->required();
    disc_cmd->add_option("--kind", disc.kind, "l2star | lego | wiener")
        ->check(CLI::IsMember({"l2star", "lego", "wiener"}));
    disc_cmd->add_option("--m", disc.m, "bin count");
    disc_cmd->add_option("--w", disc.w, "comma-separated bin weights");

    GfOpts gf;
    CLI::App* gf_cmd =
        add_common(app.add_subcommand("gf", "evaluate a generating function"), false);
    gf_cmd->add_option("--gf", gf.gf, "lego | wiener | lego-exact | mc")
        ->check(CLI::IsMember({"lego", "wiener", "lego-exact", "mc"}));
    gf_cmd->add_option("--class", gf.cls, "mc sampling class")
        ->check(CLI::IsMember({"lego", "wiener"}));
    gf_cmd->add_option("--m", gf.m, "bin count");
    gf_cmd->add_option("--n", gf.n, "points per set");
    gf_cmd->add_option("--w", gf.w, "comma-separated bin weights");
    gf_cmd->add_option("--dim", gf.dim, "dimension for the wiener mc class");
    gf_cmd->add_option("--reps", gf.reps, "mc replications");
    gf_cmd->add_option("--z-re", gf.z_re, "evaluation point, real part");
    gf_cmd->add_option("--z-im", gf.z_im, "evaluation point, imaginary part");
    gf_cmd->add_option("--z-min", gf.z_min, "scan start (real axis)");
    gf_cmd->add_option("--z-max", gf.z_max, "scan end (real axis)");
    gf_cmd->add_option("--steps", gf.steps, "scan intervals (0 = single point)");

    GfOpts mc;
    mc.gf = "mc";
    CLI::App* mc_cmd =
        add_common(app.add_subcommand("mc", "Monte Carlo generating-function estimate"), false);
    mc_cmd->add_option("--class", mc.cls, "lego | wiener")
        ->check(CLI::IsMember({"lego", "wiener"}));
    mc_cmd->add_option("--m", mc.m, "bin count");
    mc_cmd->add_option("--n", mc.n, "points per set");
    mc_cmd->add_option("--w", mc.w, "comma-separated bin weights");
    mc_cmd->add_option("--dim", mc.dim, "dimension for the wiener class");
    mc_cmd->add_option("--reps", mc.reps, "mc replications");
    mc_cmd->add_option("--z-re", mc.z_re, "evaluation point, real part");
    mc_cmd->add_option("--z-im", mc.z_im, "evaluation point, imaginary part");
    mc_cmd->add_option("--z-min", mc.z_min, "scan start (real axis)");
    mc_cmd->add_option("--z-max", mc.z_max, "scan end (real axis)");
    mc_cmd->add_option("--steps", mc.steps, "scan intervals (0 = single point)");

    InvertOpts inv;
    CLI::App* inv_cmd =
        add_common(app.add_subcommand("invert", "invert a generating function to a density"),
                   false);
    inv_cmd->add_option("--gf", inv.gf, "lego | wiener")
        ->check(CLI::IsMember({"lego", "wiener"}));
    inv_cmd->add_option("--m", inv.m, "bin count (lego)");
    inv_cmd->add_option("--t", inv.t, "single evaluation point");
    inv_cmd->add_option("--t-min", inv.t_min, "grid start");
    inv_cmd->add_option("--t-max", inv.t_max, "grid end");
    inv_cmd->add_option("--steps", inv.steps, "grid intervals");
    inv_cmd->add_option("--c", inv.c, "contour abscissa");
    inv_cmd->add_option("--step", inv.step, "contour step");
    inv_cmd->add_option("--z-max", inv.z_max, "contour truncation (0 = per-GF default)");

    LegoInstOpts li;
    CLI::App* li_cmd = add_common(
        app.add_subcommand("lego-instanton", "branch-point family scan over v"), true);
    li_cmd->add_option("--w-plus", li.w_plus, "minority bin weight, in (0, 1/2)");
    li_cmd->add_option("--v-max", li.v_max, "scan end");
    li_cmd->add_option("--steps", li.steps, "scan intervals");

    WienerInstOpts wi;
    CLI::App* wi_cmd = add_common(
        app.add_subcommand("wiener-instanton", "energy scan or a single profile"), false);
    wi_cmd->add_option("--e-min", wi.e_min, "scan start");
    wi_cmd->add_option("--e-max", wi.e_max, "scan end");
    wi_cmd->add_option("--steps", wi.steps, "scan intervals");
    wi_cmd->add_option("--series-terms", wi.series_terms, "series terms retained");
    wi_cmd->add_option("--profile", wi.profile, "emit one profile: E,k,grid");

    EigenOpts eig;
    CLI::App* eig_cmd =
        add_common(app.add_subcommand("eigen", "rank-one update eigenvalues"), false);
    eig_cmd->add_option("--a", eig.a, "diagonal, comma-separated")->required();
    eig_cmd->add_option("--b", eig.b, "update vector, comma-separated")->required();
    eig_cmd->add_option("--eps", eig.eps, "+1 or -1")->check(CLI::IsMember({1, -1}));

    FigOpts fig;
    CLI::App* fig_cmd = add_common(app.add_subcommand("fig", "figure-data emitters"), true);
    fig_cmd->add_option("--id", fig.id, "figure id, 1..5")->required();
    fig_cmd->add_option("--v", fig.v, "fig 1: level parameter");
    fig_cmd->add_option("--t-min", fig.t_min, "fig 1: curve start");
    fig_cmd->add_option("--t-max", fig.t_max, "fig 1: curve end");
    fig_cmd->add_option("--steps", fig.steps, "scan intervals (0 = per-figure default)");
    fig_cmd->add_option("--w-plus", fig.w_plus, "fig 2: minority bin weight");
    fig_cmd->add_option("--v-max", fig.v_max, "fig 2: scan end");
    fig_cmd->add_option("--e", fig.e, "fig 3: profile energy");
    fig_cmd->add_option("--grid", fig.grid, "fig 3: profile lattice intervals");
    fig_cmd->add_option("--e-min", fig.e_min, "figs 4, 5: scan start");
    fig_cmd->add_option("--e-max", fig.e_max, "figs 4, 5: scan end");
    fig_cmd->add_option("--series-terms", fig.series_terms, "figs 4, 5: series terms");

    // Pre-scan for --config so its values can be injected before the real
    // parse; user-supplied flags come later in the token list and win.
    std::vector<std::string> tokens(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config" && i + 1 < tokens.size())
            config_path = tokens[i + 1];
        else if (tokens[i].rfind("--config=", 0) == 0)
            config_path = tokens[i].substr(9);
    }
    if (!config_path.empty() && !tokens.empty() && tokens[0][0] != '-') {
        const CLI::App* sub = app.get_subcommand_no_throw(tokens[0]);
        if (sub == nullptr)
            throw std::invalid_argument("unknown subcommand '" + tokens[0] + "'");
        const std::vector<std::string> injected = config_tokens(load_config(config_path), sub);
        tokens.insert(tokens.begin() + 1, injected.begin(), injected.end());
    }

    std::vector<const char*> cargv{argv[0]};
    for (const std::string& s : tokens) cargv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }

    if (disc_cmd->parsed()) run_discrepancy(common, disc);
    if (gf_cmd->parsed()) run_gf(common, gf);
    if (mc_cmd->parsed()) run_gf(common, mc);
    if (inv_cmd->parsed()) run_invert(common, inv);
    if (li_cmd->parsed()) run_lego_instanton(common, li);
    if (wi_cmd->parsed()) run_wiener_instanton(common, wi);
    if (eig_cmd->parsed()) run_eigen(common, eig, eig_cmd->count("--format") > 0);
    if (fig_cmd->parsed()) run_fig(common, fig);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const quadisc::convergence_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
