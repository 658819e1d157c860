// zndstab command-line front end.
#include "config.hpp"

#include "zndstab/errors.hpp"
#include "zndstab/hifreq.hpp"
#include "zndstab/io.hpp"
#include "zndstab/multid.hpp"
#include "zndstab/oscint.hpp"
#include "zndstab/riccati.hpp"
#include "zndstab/stability.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace znd;
using zcli::Config;
using io::json;

namespace {

struct Run {
    Config& cfg;
    fs::path out;
    io::RunManifest& m;
    bool verbose;
    int threads;

    void log(const std::string& s) const
    {
        if (verbose) std::cerr << "[zndstab] " << s << '\n';
    }
    void warn(const std::string& s) const
    {
        m.warnings.push_back(s);
        m.status = "warn";
        log("warning: " + s);
    }
    void output(const std::string& name) const { m.add_output(out, name); }
};

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<double> geomspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
    return v;
}

EvansControls evans_controls(Config& c)
{
    EvansControls e;
    e.rtol = c.positive("evans", "rtol", e.rtol);
    e.atol = c.positive("evans", "atol", e.atol);
    e.tail_correction = c.flag("evans", "tail_correction", e.tail_correction);
    return e;
}

GridControl grid_control(Config& c)
{
    GridControl g;
    g.points = c.integer("", "grid_points", g.points, 3);
    return g;
}

// Physical parameters with the optional unit half-reaction-length rescaling of k.
ChemParams scaled_params(Config& c)
{
    ChemParams p = c.chem_params();
    if (c.flag("", "unit_half_length", true)) p = with_half_reaction_length(p, 1.0);
    return p;
}

json params_json(const ChemParams& p)
{
    return {{"gamma", p.gamma},         {"e_plus", p.e_plus}, {"heat_release", p.heat_release},
            {"activation", p.activation}, {"rate", p.rate},     {"specific_heat", p.specific_heat}};
}

json point_json(const ProfilePoint& q)
{
    return {{"x", q.x}, {"tau", q.tau}, {"u", q.u}, {"e", q.e}, {"z", q.z}, {"p", q.p}, {"T", q.T}};
}

void run_profile(Run& r)
{
    const ChemParams p = r.cfg.chem_params();
    const double z_min = r.cfg.positive("", "z_min", 1e-8);
    const GridControl g = grid_control(r.cfg);
    r.cfg.check_unknown();
    const auto t0 = std::chrono::steady_clock::now();
    const ZNDProfile prof(p, z_min, g);
    const double half = prof.half_reaction_length();

    io::CsvWriter csv(r.out / "profile.csv", {"x", "tau", "u", "e", "z", "p", "T"});
    const ProfilePoint mid = profile_point(0.5, -half, p);
    bool mid_written = false;
    auto put = [&](const ProfilePoint& q) { csv.row(std::vector<double>{q.x, q.tau, q.u, q.e, q.z, q.p, q.T}); };
    for (const auto& q : prof.grid()) {
        // the half-reaction point is carried as its own row so x(z = 1/2) survives a round trip
        if (!mid_written && q.x >= mid.x) {
            if (q.z != 0.5) put(mid);
            mid_written = true;
        }
        put(q);
    }
    csv.close();
    r.output("profile.csv");

    const auto rh = prof.rankine_hugoniot_residual();
    double rh_max = 0.0;
    for (double v : rh) rh_max = std::max(rh_max, std::abs(v));
    json j;
    j["params"] = params_json(p);
    j["half_reaction_length"] = half;
    j["domain_length"] = prof.domain_length();
    j["z_min"] = z_min;
    j["q_cj"] = q_cj(p.gamma, p.e_plus);
    j["neumann_minus"] = point_json(prof.neumann_minus());
    j["quiescent_plus"] = point_json(prof.quiescent_plus());
    j["rankine_hugoniot_residual_max"] = rh_max;
    j["build_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_json(r.out / "profile.json", j);
    r.output("profile.json");
    r.m.counts["grid_points"] = prof.grid().size();
}

void evans_row(io::CsvWriter& csv, std::vector<double> lead, const EvansValue& v)
{
    const bool ok = std::abs(v.log_magnitude) <= 300.0;
    const cplx d = ok ? std::polar(std::exp(v.log_magnitude), v.phase) : cplx(NAN, NAN);
    lead.insert(lead.end(), {v.log_magnitude, v.phase, d.real(), d.imag()});
    csv.row(lead);
}

std::vector<cplx> lambda_points(Config& c, const std::string& block)
{
    std::vector<cplx> pts = c.complexes(block, "lambdas", {});
    const int n = c.integer(block, "circle_points", 0);
    if (n > 0) {
        const cplx center = c.complex(block, "circle_center", 0.0);
        const double radius = c.positive(block, "circle_radius", 1.0);
        for (int i = 0; i < n; ++i) pts.push_back(center + std::polar(radius, 2.0 * M_PI * i / n));
    }
    if (pts.empty()) throw DomainError(block + ": no evaluation points (lambdas or circle_points)");
    return pts;
}

void run_evans1d(Run& r)
{
    const ChemParams p = scaled_params(r.cfg);
    const double z_min = r.cfg.positive("", "z_min", 1e-8);
    const GridControl g = grid_control(r.cfg);
    const EvansControls e = evans_controls(r.cfg);
    const std::vector<cplx> pts = lambda_points(r.cfg, "evans1d");
    r.cfg.check_unknown();
    const ZNDProfile prof(p, z_min, g);
    const Evans1D ev(prof);
    const auto vals = evaluate_batch([&](cplx l) { return ev(l, e); }, pts, r.threads);
    io::CsvWriter csv(r.out / "evans1d.csv", {"re", "im", "log_abs", "phase", "d_re", "d_im"});
    for (std::size_t i = 0; i < pts.size(); ++i) evans_row(csv, {pts[i].real(), pts[i].imag()}, vals[i]);
    csv.close();
    r.output("evans1d.csv");
    r.m.counts["evaluations"] = pts.size();
    r.m.counts["rate_used"] = p.rate;
}

void run_roots(Run& r)
{
    const ChemParams p = scaled_params(r.cfg);
    const double z_min = r.cfg.positive("", "z_min", 1e-8);
    const GridControl g = grid_control(r.cfg);
    const EvansControls e = evans_controls(r.cfg);
    const auto box = r.cfg.numbers("roots", "box", {0.0, 10.0, -10.0, 10.0});
    if (box.size() != 4 || !(box[1] > box[0]) || !(box[3] > box[2]))
        throw DomainError("roots.box must be [x0, x1, y0, y1] with x1 > x0 and y1 > y0");
    const double xi = r.cfg.number("roots", "xi", 0.0);
    RootSearchControl rc;
    const double excl = r.cfg.positive("roots", "exclusion", 1e-2);
    rc.target_box = r.cfg.positive("roots", "target_box", rc.target_box);
    rc.newton_tol = r.cfg.positive("roots", "newton_tol", rc.newton_tol);
    rc.max_boxes = r.cfg.integer("roots", "max_boxes", rc.max_boxes, 1);
    rc.refine.max_step = r.cfg.positive("roots", "max_step", 0.5);
    rc.refine.threads = r.threads;
    r.cfg.check_unknown();

    RootReport rep;
    if (xi == 0.0) {
        const ZNDProfile prof(p, z_min, g);
        const CachedEvaluator f = make_evans1d_evaluator(prof, e);
        rep = locate_roots(f.as_function(), box[0], box[1], box[2], box[3], excl, rc);
    } else {
        const MultiDProfile prof(p, z_min, g);
        const EvansMultiD ev(prof);
        // no conjugate reuse off xi = 0
        const CachedEvaluator f([&](cplx l) { return ev(l, xi, e); }, false);
        rep = locate_roots(f.as_function(), box[0], box[1], box[2], box[3], excl, rc);
    }
    json roots = json::array();
    for (const auto& x : rep.roots)
        roots.push_back({{"re", x.lambda.real()}, {"im", x.lambda.imag()}, {"multiplicity", x.multiplicity},
                         {"log_abs_d", x.log_residual}});
    json un = json::array();
    for (const auto& u : rep.unresolved) un.push_back({cjson(u.first), cjson(u.second)});
    json j = {{"roots", roots},          {"region_count", rep.region_count}, {"unresolved", un},
              {"evaluations", rep.evaluations}, {"rate_used", p.rate},        {"xi", xi}};
    io::write_json(r.out / "roots.json", j);
    r.output("roots.json");
    r.m.counts["roots"] = rep.roots.size();
    r.m.counts["region_count"] = rep.region_count;
    r.m.counts["evaluations"] = rep.evaluations;
    if (!rep.unresolved.empty()) r.warn(std::to_string(rep.unresolved.size()) + " boxes unresolved (budget exhausted)");
}

VerdictControl verdict_control(Config& c, const std::string& block, int threads)
{
    VerdictControl v;
    v.radius = c.positive(block, "radius", v.radius);
    v.exclusion = c.positive(block, "exclusion", v.exclusion);
    v.confirm_doubling = c.flag(block, "confirm_doubling", v.confirm_doubling);
    v.refine.max_step = c.positive(block, "max_step", v.refine.max_step);
    v.refine.threads = threads;
    v.unit_half_length = c.flag("", "unit_half_length", true);
    v.z_min = c.positive("", "z_min", v.z_min);
    v.evans = evans_controls(c);
    return v;
}

json verdict_json(const VerdictReport& v)
{
    return {{"verdict", to_string(v.verdict)}, {"count", v.count},       {"count_doubled", v.count_doubled},
            {"radius", v.radius},              {"rate_used", v.rate_used}, {"evaluations", v.evaluations},
            {"max_phase_step", v.max_phase_step}};
}

void run_verdict(Run& r)
{
    const ChemParams p = r.cfg.chem_params();
    const VerdictControl vc = verdict_control(r.cfg, "verdict", r.threads);
    r.cfg.check_unknown();
    const VerdictReport v = verdict(p, vc);
    json j = verdict_json(v);
    j["params"] = params_json(p);
    io::write_json(r.out / "verdict.json", j);
    r.output("verdict.json");
    r.m.counts["unstable_roots"] = v.count;
    r.m.counts["evaluations"] = v.evaluations;
    r.m.counts["verdict"] = to_string(v.verdict);
    if (v.verdict == Verdict::inconclusive)
        r.warn("inconclusive verdict: count " + std::to_string(v.count) + " at radius " + io::format_double(v.radius) +
               ", " + std::to_string(v.count_doubled) + " after doubling");
}

void run_boundary(Run& r)
{
    const ChemParams base = r.cfg.chem_params();
    std::vector<double> q = r.cfg.numbers("boundary", "q_grid", {});
    const std::vector<double> fr = r.cfg.numbers("boundary", "q_fractions", {});
    if (q.empty() == fr.empty()) throw DomainError("boundary needs exactly one of q_grid and q_fractions");
    const double qc = q_cj(base.gamma, base.e_plus);
    for (double f : fr) q.push_back(f * qc);
    const auto br = r.cfg.numbers("boundary", "e_bracket", {0.5, 10.0});
    if (br.size() != 2) throw DomainError("boundary.e_bracket must be [lo, hi]");
    const double tol = r.cfg.positive("boundary", "tol", 1e-3);
    const int degree = r.cfg.integer("boundary", "fit_degree", 4, 0);
    const VerdictControl vc = verdict_control(r.cfg, "verdict", r.threads);
    r.cfg.check_unknown();

    const auto pts = trace_boundary(base, q, br[0], br[1], tol, vc);
    io::CsvWriter csv(r.out / "boundary.csv", {"q", "E_lo", "E_hi", "count_below", "count_above", "found", "log_q", "log_E"});
    int found = 0;
    for (const auto& b : pts) {
        csv.row(std::vector<double>{b.q, b.e_lo, b.e_hi, double(b.count_below), double(b.count_above), b.found ? 1.0 : 0.0,
                                    std::log(b.q), std::log(b.activation())});
        if (b.found) ++found;
        else r.warn("q = " + io::format_double(b.q) + ": " + b.note);
    }
    csv.close();
    r.output("boundary.csv");
    json j = {{"points_found", found}, {"points", pts.size()}, {"q_cj", qc}};
    if (found > degree) {
        const PolyFit f = fit_boundary_loglog(pts, degree);
        j["fit"] = {{"degree", degree},
                    {"coefficients", f.coeffs},
                    {"mean_relative_error", f.mean_relative_error},
                    {"max_relative_error", f.max_relative_error}};
    } else {
        r.warn("too few boundary points for the degree " + std::to_string(degree) + " fit");
    }
    io::write_json(r.out / "boundary.json", j);
    r.output("boundary.json");
    r.m.counts["boundary_points"] = found;
}

void run_evans2d(Run& r)
{
    const ChemParams p = scaled_params(r.cfg);
    const double z_min = r.cfg.positive("", "z_min", 1e-8);
    const GridControl g = grid_control(r.cfg);
    const EvansControls e = evans_controls(r.cfg);
    const std::vector<double> xis = r.cfg.numbers("evans2d", "xi", {0.0});
    const std::vector<cplx> pts = lambda_points(r.cfg, "evans2d");
    r.cfg.check_unknown();
    const MultiDProfile prof(p, z_min, g);
    const EvansMultiD ev(prof);
    std::vector<std::pair<double, cplx>> jobs;
    for (double xi : xis)
        for (cplx l : pts) jobs.emplace_back(xi, l);
    std::vector<cplx> idx(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) idx[i] = cplx(double(i), 0.0);
    const auto vals = evaluate_batch(
        [&](cplx k) {
            const auto& jb = jobs[std::size_t(k.real())];
            return ev(jb.second, jb.first, e);
        },
        idx, r.threads);
    io::CsvWriter csv(r.out / "evans2d.csv", {"xi", "re", "im", "log_abs", "phase", "d_re", "d_im"});
    for (std::size_t i = 0; i < jobs.size(); ++i)
        evans_row(csv, {jobs[i].first, jobs[i].second.real(), jobs[i].second.imag()}, vals[i]);
    csv.close();
    r.output("evans2d.csv");
    r.m.counts["evaluations"] = jobs.size();
}

void run_hifreq(Run& r)
{
    const ChemParams p = scaled_params(r.cfg);
    const double z_min = r.cfg.positive("", "z_min", 1e-8);
    const GridControl g = grid_control(r.cfg);
    const EvansControls e = evans_controls(r.cfg);
    const cplx zeta = r.cfg.complex("hifreq", "zeta", {1.0, 0.5});
    const auto hs = r.cfg.numbers("hifreq", "h_grid", {0.1, 0.05, 0.025, 0.0125});
    const auto sym_zetas = r.cfg.complexes("hifreq", "symbol_zetas", {{1.0, 0.5}, {0.0, 0.5}});
    const int nx = r.cfg.integer("hifreq", "symbol_x_points", 11, 1);
    const auto turn = r.cfg.complexes("hifreq", "turning_zetas", {{0.0, 0.5}, {0.0, 1.0}});
    r.cfg.check_unknown();
    const MultiDProfile prof(p, z_min, g);

    io::CsvWriter sym(r.out / "symbol.csv", {"x", "zeta_re", "zeta_im", "mu1_re", "mu1_im", "mu2_re", "mu2_im", "mu3_re",
                                             "mu3_im", "mu4_re", "mu4_im", "mu5_re", "mu5_im", "glancing"});
    const double M = prof.domain_length();
    for (cplx z : sym_zetas)
        for (int i = 0; i < nx; ++i) {
            const double x = nx == 1 ? 0.0 : M * i / (nx - 1);
            const SymbolPoint sp = symbol_eigs(x, z, prof);
            std::vector<double> row{x, z.real(), z.imag()};
            for (cplx mu : sp.mu) row.insert(row.end(), {mu.real(), mu.imag()});
            row.push_back(sp.glancing ? 1.0 : 0.0);
            sym.row(row);
        }
    sym.close();
    r.output("symbol.csv");

    io::CsvWriter gl(r.out / "glancing.csv", {"x", "gap", "height"});
    for (const auto& pt : glancing_locus(prof)) gl.row(std::vector<double>{pt.x, pt.gap, pt.height});
    gl.close();
    r.output("glancing.csv");

    const SonicGap gap = sonic_gap(prof);
    json tj = json::array();
    for (cplx z : turn) {
        json list = json::array();
        for (const auto& t : turning_points(z, gap, 401))
            list.push_back({{"x_star", t.x_star},
                            {"zeta_star", cjson(t.zeta_star)},
                            {"nondegeneracy", t.nondegeneracy},
                            {"nondegenerate", t.nondegenerate}});
        tj.push_back({{"zeta", cjson(z)}, {"turning_points", list}});
    }
    io::write_json(r.out / "turning.json", tj);
    r.output("turning.json");

    const HfReport hf = hf_ratio(zeta, hs, prof, e);
    io::CsvWriter hc(r.out / "hf_ratio.csv", {"h", "ratio_re", "ratio_im", "deviation"});
    for (const auto& row : hf.rows) hc.row(std::vector<double>{row.h, row.ratio.real(), row.ratio.imag(), row.deviation});
    hc.close();
    r.output("hf_ratio.csv");
    const NeumannLopatinski dn = neumann_lopatinski(zeta, prof);
    json j = {{"type", to_string(classify_type(prof))},
              {"zeta", cjson(zeta)},
              {"neumann_lopatinski", cjson(dn.value)},
              {"order", hf.order},
              {"monotone", hf.monotone},
              {"rate_used", p.rate}};
    io::write_json(r.out / "hifreq.json", j);
    r.output("hifreq.json");
    r.m.counts["hf_rows"] = hf.rows.size();
    if (!hf.monotone) r.warn("hf_ratio deviation is not monotone along h_grid");
}

Symbol symbol_from(Config& c, const std::string& key)
{
    const std::string name = c.text("oscint", key, "one");
    if (name == "one") return Symbol::constant(1.0);
    if (name == "gevrey") return Symbol::gevrey(c.number("oscint", key + "_s", 2.0));
    throw DomainError("oscint." + key + " must be 'one' or 'gevrey'");
}

void run_oscint(Run& r)
{
    const auto xs = r.cfg.numbers("oscint", "decay_x", {0.5, 2.0});
    const auto hd = r.cfg.numbers("oscint", "decay_h", geomspace(3e-3, 0.1, 12));
    const auto ss = r.cfg.numbers("oscint", "gevrey_s", {1.5, 2.0, 3.0});
    const double gx = r.cfg.positive("oscint", "gevrey_x", 2.0);
    const auto Ls = r.cfg.numbers("oscint", "verdict_L", {0.5, 2.0});
    const int k0 = r.cfg.integer("oscint", "verdict_h_from", 4, 0);
    const int k1 = r.cfg.integer("oscint", "verdict_h_to", 10, 0);
    const int nx = r.cfg.integer("oscint", "verdict_nx", 200, 1);
    const Symbol theta = symbol_from(r.cfg, "symbol");
    r.cfg.check_unknown();
    if (k1 <= k0) throw DomainError("oscint.verdict_h_to must exceed verdict_h_from");

    int warnings = 0;
    if (!xs.empty()) {
        const auto rep = analytic_decay_check(Symbol::constant(1.0), xs, hd);
        io::CsvWriter t(r.out / "osc_table.csv", {"x", "h", "log_abs", "arg", "log_error", "precision_warning"});
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < hd.size(); ++j) {
                const OscResult& o = rep.table[i][j];
                t.row(std::vector<double>{xs[i], hd[j], o.log_abs, o.arg, o.log_error, o.precision_warning ? 1.0 : 0.0});
                if (o.precision_warning) ++warnings;
            }
        t.close();
        r.output("osc_table.csv");
        json fits = json::array();
        for (const auto& f : rep.fits)
            fits.push_back({{"x", f.x}, {"rate", f.rate}, {"power", f.power}, {"rms", f.rms}, {"underflow", f.underflow}});
        io::write_json(r.out / "decay.json", {{"fits", fits}, {"regime_split", rep.regime_split}});
        r.output("decay.json");
    }
    if (!ss.empty()) {
        json gj = json::array();
        io::CsvWriter t(r.out / "gevrey.csv", {"s", "h", "log_abs"});
        for (double s : ss) {
            const GevreyFit f = gevrey_decay_check(s, gx);
            for (std::size_t j = 0; j < f.h_grid.size(); ++j) t.row(std::vector<double>{s, f.h_grid[j], f.log_abs[j]});
            gj.push_back({{"s", s},           {"x", gx},         {"beta", f.beta},   {"beta_times_s", f.beta * s},
                          {"c", f.c},         {"power", f.power}, {"rms", f.rms},     {"condition", f.condition}});
        }
        t.close();
        r.output("gevrey.csv");
        io::write_json(r.out / "gevrey.json", gj);
        r.output("gevrey.json");
    }
    if (!Ls.empty()) {
        json vj = json::array();
        for (double L : Ls) {
            const ConjugatorReport c = conjugator_verdict(theta, L, dyadic_h_grid(k0, k1), nx);
            vj.push_back({{"L", L},
                          {"verdict", to_string(c.verdict)},
                          {"h_grid", c.h_grid},
                          {"log_sup", c.log_sup},
                          {"x_at_sup", c.x_at_sup},
                          {"evidence_rate", c.evidence_rate},
                          {"margin", c.margin},
                          {"note", c.note}});
            if (c.verdict == ConjugatorVerdict::inconclusive) r.warn("conjugator verdict inconclusive at L = " + io::format_double(L));
        }
        io::write_json(r.out / "conjugator.json", vj);
        r.output("conjugator.json");
    }
    if (warnings) r.warn(std::to_string(warnings) + " oscillatory integrals below the requested precision");
}

void run_riccati(Run& r)
{
    const auto hs = r.cfg.numbers("riccati", "h_grid", dyadic_h_grid(3, 10));
    const int it = r.cfg.integer("riccati", "iterations", 3, 0);
    const int nodes = r.cfg.integer("riccati", "nodes", 48, 4);
    r.cfg.check_unknown();
    for (double h : hs)
        if (!(h > 0.0)) throw DomainError("riccati.h_grid entries must be positive");
    const RiccatiOrderReport rep = riccati_order_study(synthetic_blocks(), hs, it, nodes);
    io::CsvWriter t(r.out / "riccati.csv", {"iteration", "h", "residual"});
    for (int k = 0; k <= it; ++k)
        for (std::size_t i = 0; i < hs.size(); ++i) t.row(std::vector<double>{double(k), hs[i], rep.residual[k][i]});
    t.close();
    r.output("riccati.csv");
    io::write_json(r.out / "riccati.json", {{"order", rep.order}, {"gain", rep.gain}, {"system", "synthetic 2+2"}});
    r.output("riccati.json");
    r.m.counts["iterations"] = it;
}

// 0 when unset, -1 when set to something other than a positive integer
int env_threads()
{
    const char* s = std::getenv("ZNDSTAB_THREADS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    const long n = std::strtol(s, &end, 10);
    return (*end == '\0' && n > 0 && n < 4096) ? int(n) : -1;
}

int fail(const std::string& sub, const fs::path& out, io::RunManifest* m, const std::string& kind,
         const std::string& msg, int code)
{
    json err = {{"status", "error"}, {"subcommand", sub}, {"exit_code", code}, {"error", {{"kind", kind}, {"message", msg}}}};
    std::cout << err.dump() << std::endl;
    if (m && !out.empty()) {
        try {
            fs::create_directories(out);
            io::write_json(out / "error.json", err);
            m->status = "error";
            m->add_output(out, "error.json");
            io::write_manifest(out, *m);
        } catch (...) {
            // the JSON on stdout is the record
        }
    }
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ZND detonation stability toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir = "zndstab_out";
    int threads = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (default: ZNDSTAB_THREADS or all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--verbose", verbose, "progress on stderr");
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"profile", "steady ZND profile export"},
        {"evans1d", "batch 1D Evans-Lopatinski values"},
        {"roots", "locate unstable roots in a box"},
        {"verdict", "stability verdict with radius doubling"},
        {"boundary", "neutral stability curve in (q, E)"},
        {"evans2d", "batch multi-d Evans-Lopatinski values"},
        {"hifreq", "symbol, glancing, turning-point and high-frequency ratio tables"},
        {"oscint", "stationary-phase tables and conjugator verdicts"},
        {"riccati", "block Riccati iteration order study"}};
    for (const auto& s : subs) app.add_subcommand(s.first, s.second);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("", "", nullptr, "validation", e.what(), 1);
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    if (threads < 0) return fail(sub, "", nullptr, "validation", "--threads must be positive", 1);
    if (threads == 0) threads = env_threads();
    if (threads < 0) return fail(sub, "", nullptr, "validation", "ZNDSTAB_THREADS must be a positive integer", 1);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    const int used_threads = threads > 0 ? threads : omp_get_max_threads();
#else
    const int used_threads = 1;
#endif
    const fs::path out(out_dir);
    io::RunManifest m;
    m.subcommand = sub;
    m.threads = used_threads;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Config cfg = config_path.empty() ? Config() : Config::load(config_path);
        fs::create_directories(out);
        fs::remove(out / "error.json");  // left over from an earlier failed run
        Run r{cfg, out, m, verbose, threads};
        r.log("running " + sub);
        if (sub == "profile") run_profile(r);
        else if (sub == "evans1d") run_evans1d(r);
        else if (sub == "roots") run_roots(r);
        else if (sub == "verdict") run_verdict(r);
        else if (sub == "boundary") run_boundary(r);
        else if (sub == "evans2d") run_evans2d(r);
        else if (sub == "hifreq") run_hifreq(r);
        else if (sub == "oscint") run_oscint(r);
        else run_riccati(r);
        m.config = cfg.resolved();
        m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        io::write_manifest(out, m);
        r.log("done in " + io::format_double(m.wall_time) + " s, status " + m.status);
    } catch (const DomainError& e) {
        return fail(sub, out, &m, "validation", e.what(), 1);
    } catch (const fs::filesystem_error& e) {
        return fail(sub, out, &m, "validation", e.what(), 1);
    } catch (const NumericalError& e) {
        return fail(sub, out, &m, "numerical", e.what(), 2);
    } catch (const std::exception& e) {
        return fail(sub, out, &m, "numerical", e.what(), 2);
    }
    return 0;
}
