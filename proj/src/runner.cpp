#include "hyperlab/runner.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/estimates.hpp"
#include "hyperlab/norms.hpp"
#include "hyperlab/parallel.hpp"
#include "hyperlab/profiles.hpp"
#include "hyperlab/propagators.hpp"
#include "hyperlab/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace hyperlab {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& v, std::size_t line) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ParseError(line, "expected a number, got '" + v + "'");
    return x;
}

std::uint64_t parse_unsigned(const std::string& v, std::size_t line) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ParseError(line, "expected a nonnegative integer, got '" + v + "'");
    return x;
}

std::string family_name(DatumSpec::Family f) {
    switch (f) {
        case DatumSpec::Family::Gaussian: return "gaussian";
        case DatumSpec::Family::SpectralBand: return "band";
        case DatumSpec::Family::Transplant: return "transplant";
    }
    return "gaussian";
}

using Setter = std::function<void(RunConfig&, const std::string&, std::size_t)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"geometry",
         [](RunConfig& c, const std::string& v, std::size_t line) {
             try {
                 c.sim.geometry = parse_geometry(v);
             } catch (const InvalidArgument& e) {
                 throw ParseError(line, e.what());
             }
         }},
        {"r_max", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.r_max = parse_real(v, l); }},
        {"n", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.n = parse_unsigned(v, l); }},
        {"dt", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.dt = parse_real(v, l); }},
        {"t_end", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.t_end = parse_real(v, l); }},
        {"nonlinearity",
         [](RunConfig& c, const std::string& v, std::size_t line) {
             if (v == "defocusing") c.sim.nonlinearity = Nonlinearity::Defocusing;
             else if (v == "off") c.sim.nonlinearity = Nonlinearity::Off;
             else throw ParseError(line, "nonlinearity must be 'defocusing' or 'off'");
         }},
        {"record_stride",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.record_stride = parse_unsigned(v, l); }},
        {"boundary_tol", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.boundary_tol = parse_real(v, l); }},
        {"datum",
         [](RunConfig& c, const std::string& v, std::size_t line) {
             if (v == "gaussian") c.sim.datum.family = DatumSpec::Family::Gaussian;
             else if (v == "band") c.sim.datum.family = DatumSpec::Family::SpectralBand;
             else if (v == "transplant") c.sim.datum.family = DatumSpec::Family::Transplant;
             else throw ParseError(line, "datum must be 'gaussian', 'band' or 'transplant'");
         }},
        {"a", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.datum.a = parse_real(v, l); }},
        {"N", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.datum.N = parse_real(v, l); }},
        {"width", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.datum.width = parse_real(v, l); }},
        {"amplitude", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.datum.amplitude = parse_real(v, l); }},
        {"mass", [](RunConfig& c, const std::string& v, std::size_t l) { c.sim.datum.mass = parse_real(v, l); }},
        {"seed", [](RunConfig& c, const std::string& v, std::size_t l) { c.seed = parse_unsigned(v, l); }},
    };
    return table;
}

void validate_datum(const DatumSpec& d) {
    if (!(d.a > 0.0)) throw InvalidArgument("datum width a must be positive");
    if (!(d.N > 0.0)) throw InvalidArgument("datum scale N must be positive");
    if (d.mass && !(*d.mass > 0.0)) throw InvalidArgument("datum mass must be positive");
    if (!std::isfinite(std::abs(d.amplitude))) throw InvalidArgument("datum amplitude must be finite");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (ec != std::errc() || ptr != item.data() + item.size())
            throw InvalidArgument("bad number '" + item + "' in list");
        out.push_back(x);
    }
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
}

double parse_exponent(const std::string& text) {
    if (text == "inf" || text == "infinity") return kInf;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw InvalidArgument("bad exponent '" + text + "'");
    return x;
}

// CSV goes to a file, or to the output stream for "-".
class CsvSink {
public:
    CsvSink(const std::string& path, std::ostream& fallback) {
        if (path == "-") {
            os_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw InvalidArgument("cannot open '" + path + "' for writing");
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) *os_ << ',';
            *os_ << format_number(v);
            first = false;
        }
        *os_ << '\n';
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

nlohmann::json manifest_json(const RunManifest& m) {
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : m.config) cfg[k] = v;
    return {{"command", m.command}, {"config", cfg},          {"seed", m.seed},
            {"version", m.version}, {"duration_s", m.duration_s}, {"warnings", m.warnings}};
}

struct Context {
    RunManifest manifest;
    nlohmann::json results = nlohmann::json::object();
};

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    const auto& d = sim.datum;
    return {
        {"geometry", to_string(sim.geometry)},
        {"r_max", format_number(sim.r_max)},
        {"n", std::to_string(sim.n)},
        {"dt", format_number(sim.dt)},
        {"t_end", format_number(sim.t_end)},
        {"nonlinearity", sim.nonlinearity == Nonlinearity::Defocusing ? "defocusing" : "off"},
        {"record_stride", std::to_string(sim.record_stride)},
        {"boundary_tol", format_number(sim.boundary_tol)},
        {"datum", family_name(d.family)},
        {"a", format_number(d.a)},
        {"N", format_number(d.N)},
        {"width", format_number(d.width)},
        {"amplitude", format_number(d.amplitude.real())},
        {"mass", d.mass ? format_number(*d.mass) : "none"},
        {"seed", std::to_string(seed)},
    };
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::stringstream ss(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(std::string_view(raw).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ParseError(line, "missing key");
        if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");
        const auto it = setters().find(key);
        if (it == setters().end()) throw UnknownKey(key);
        if (const auto prev = seen.find(key); prev != seen.end())
            cfg.warnings.push_back("duplicate key '" + key + "' on line " + std::to_string(line) + " overrides line " +
                                   std::to_string(prev->second));
        seen[key] = line;
        it->second(cfg, value, line);
    }
    cfg.sim.validate();
    validate_datum(cfg.sim.datum);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj) {
    os << "t,mass,energy,z_density\n";
    for (std::size_t k = 0; k < traj.step_times.size(); ++k)
        os << format_number(traj.step_times[k]) << ',' << format_number(traj.mass_series[k]) << ','
           << format_number(traj.energy_series[k]) << ',' << format_number(traj.z_density[k]) << '\n';
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial NLS laboratory on hyperbolic and Euclidean 3-space"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Context ctx;
    std::function<void()> action;
    std::string out_path = "-";
    std::string config_path;

    auto add_config = [&](CLI::App* sub) { sub->add_option("--config", config_path, "run configuration file")->required(); };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "CSV output path ('-' for stdout)"); };
    auto record_config = [&](const RunConfig& cfg) {
        ctx.manifest.config = cfg.resolved();
        ctx.manifest.seed = cfg.seed;
        ctx.manifest.warnings = cfg.warnings;
    };
    auto note = [&](const std::string& key, auto value) { ctx.manifest.config.emplace_back(key, value); };

    // simulate ---------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "evolve a configured datum");
    add_config(sim);
    add_out(sim);
    sim->callback([&] {
        action = [&] {
            const auto cfg = load_config(config_path);
            record_config(cfg);
            const auto traj = evolve(cfg.sim);
            CsvSink csv(out_path, out);
            write_trajectory_csv(*csv, traj);
            ctx.results["steps"] = traj.step_times.size() - 1;
            ctx.results["final_mass"] = traj.mass_series.back();
            ctx.results["final_energy"] = traj.energy_series.back();
            ctx.results["z_norm"] = z_norm(traj);
        };
    });

    // dispersive -------------------------------------------------------------
    std::string geometry_name = "euclidean3";
    double p = 1.2, band_N = 0.8, band_w = 0.9, t_min = 1.0, t_max = 20.0, r_max = 80.0, tol = 1e-4;
    std::size_t samples = 12, n = 8192;
    auto* disp = app.add_subcommand("dispersive", "fit the L^p -> L^p' decay of the free flow");
    disp->add_option("--geometry", geometry_name);
    disp->add_option("--p", p);
    disp->add_option("--N", band_N, "band centre of the datum");
    disp->add_option("--width", band_w, "relative band half-width");
    disp->add_option("--t-min", t_min);
    disp->add_option("--t-max", t_max);
    disp->add_option("--samples", samples);
    disp->add_option("--r-max", r_max);
    disp->add_option("--n", n);
    disp->add_option("--boundary-tol", tol);
    add_out(disp);
    disp->callback([&] {
        action = [&] {
            if (samples < 2 || !(t_max > t_min)) throw InvalidArgument("need t_max > t_min and at least two samples");
            std::vector<double> times(samples);
            for (std::size_t k = 0; k < samples; ++k)
                times[k] = t_min * std::pow(t_max / t_min, static_cast<double>(k) / static_cast<double>(samples - 1));
            const auto geometry = parse_geometry(geometry_name);
            note("geometry", to_string(geometry));
            note("p", format_number(p));
            note("N", format_number(band_N));
            note("width", format_number(band_w));
            note("t_min", format_number(t_min));
            note("t_max", format_number(t_max));
            note("samples", std::to_string(samples));
            note("r_max", format_number(r_max));
            note("n", std::to_string(n));
            note("boundary_tol", format_number(tol));
            const auto res = dispersive_fit(DatumSpec::band(band_N, band_w), geometry, p, times, {r_max, n, tol});
            CsvSink csv(out_path, out);
            *csv << "t,norm,ratio\n";
            for (std::size_t k = 0; k < times.size(); ++k)
                csv.row({res.times[k], res.norms[k], res.norms[k] / res.datum_norm});
            ctx.results["exponent"] = res.fit.exponent;
            ctx.results["predicted_exponent"] = res.predicted_exponent;
            ctx.results["constant"] = res.fit.constant;
            ctx.results["residual"] = res.fit.residual;
            ctx.results["max_tail"] = res.max_tail;
        };
    });

    // bilinear ---------------------------------------------------------------
    double q = 2.0, width = 0.25, time_res = 0.25;
    std::string N_text = "4", L_text = "16,32,64,128";
    std::string bil_geometry = "hyperbolic3";
    double bil_rmax = 40.0;
    std::size_t bil_n = 4096;
    auto* bil = app.add_subcommand("bilinear", "bilinear Strichartz sweep over separated bands");
    bil->add_option("--q", q);
    bil->add_option("--N", N_text, "comma-separated low frequencies");
    bil->add_option("--L", L_text, "comma-separated high frequencies");
    bil->add_option("--geometry", bil_geometry);
    bil->add_option("--width", width);
    bil->add_option("--r-max", bil_rmax);
    bil->add_option("--n", bil_n);
    bil->add_option("--time-resolution", time_res);
    add_out(bil);
    bil->callback([&] {
        action = [&] {
            BilinearOptions o;
            o.geometry = parse_geometry(bil_geometry);
            o.r_max = bil_rmax;
            o.n = bil_n;
            o.band_width = width;
            o.time_resolution = time_res;
            note("q", format_number(q));
            note("N", N_text);
            note("L", L_text);
            note("geometry", to_string(o.geometry));
            note("width", format_number(width));
            note("r_max", format_number(bil_rmax));
            note("n", std::to_string(bil_n));
            note("time_resolution", format_number(time_res));
            const auto rows = bilinear_sweep(q, parse_list(N_text), parse_list(L_text), o);
            CsvSink csv(out_path, out);
            *csv << "N,L,q,measured,predicted_C,ratio\n";
            double lo = kInf, hi = 0.0;
            for (const auto& r : rows) {
                csv.row({r.N, r.L, r.q, r.measured, r.predicted_C, r.ratio});
                lo = std::min(lo, r.ratio);
                hi = std::max(hi, r.ratio);
            }
            ctx.results["ratio_min"] = lo;
            ctx.results["ratio_max"] = hi;
        };
    });

    // improved ---------------------------------------------------------------
    double imp_a = 1.0, imp_res = 0.125, horizon = 0.0;
    std::string q_text = "1.4,1.5,1.6", imp_geometry = "hyperbolic3";
    double imp_rmax = 40.0;
    std::size_t imp_n = 4096;
    auto* imp = app.add_subcommand("improved", "improved Strichartz ratio for a Gaussian datum");
    imp->add_option("--a", imp_a, "Gaussian width");
    imp->add_option("--q", q_text, "comma-separated exponents in (4/3, 5/3)");
    imp->add_option("--geometry", imp_geometry);
    imp->add_option("--r-max", imp_rmax);
    imp->add_option("--n", imp_n);
    imp->add_option("--time-resolution", imp_res);
    imp->add_option("--horizon", horizon, "half-width of the time window (0 = wall-safe)");
    add_out(imp);
    imp->callback([&] {
        action = [&] {
            const auto grid = make_grid(parse_geometry(imp_geometry), imp_rmax, imp_n);
            const auto f = make_datum(DatumSpec::gaussian(imp_a), grid);
            note("a", format_number(imp_a));
            note("q", q_text);
            note("geometry", to_string(grid->geometry()));
            note("r_max", format_number(imp_rmax));
            note("n", std::to_string(imp_n));
            note("time_resolution", format_number(imp_res));
            note("horizon", format_number(horizon));
            const auto qs = parse_list(q_text);
            std::vector<ImprovedResult> res;
            for (double qq : qs) res.push_back(improved_strichartz_check(f, qq, {1e-10, imp_res, horizon}));
            CsvSink csv(out_path, out);
            *csv << "q,lhs,sup_term,rhs,ratio,argmax_N\n";
            for (std::size_t k = 0; k < qs.size(); ++k)
                csv.row({qs[k], res[k].lhs, res[k].sup_term, res[k].rhs, res[k].ratio, res[k].argmax_N});
            ctx.results["horizon"] = res.front().horizon;
        };
    });

    // morawetz ---------------------------------------------------------------
    std::uint64_t seed = 20240611;
    std::size_t count = 10, mor_n = 4096, stride = 20;
    double mor_T = 5.0, mor_dt = 5e-3, mor_rmax = 40.0;
    auto* mor = app.add_subcommand("morawetz", "Morawetz ratios over a seeded random suite");
    mor->add_option("--seed", seed);
    mor->add_option("--count", count);
    mor->add_option("--t-end", mor_T);
    mor->add_option("--dt", mor_dt);
    mor->add_option("--r-max", mor_rmax);
    mor->add_option("--n", mor_n);
    mor->add_option("--stride", stride);
    add_out(mor);
    mor->callback([&] {
        action = [&] {
            ctx.manifest.seed = seed;
            note("count", std::to_string(count));
            note("t_end", format_number(mor_T));
            note("dt", format_number(mor_dt));
            note("r_max", format_number(mor_rmax));
            note("n", std::to_string(mor_n));
            note("stride", std::to_string(stride));
            const auto suite = morawetz_suite(seed, count);
            std::vector<double> ratios(suite.size());
            parallel_for(suite.size(), [&](std::size_t i) {
                SimConfig c;
                c.r_max = mor_rmax;
                c.n = mor_n;
                c.dt = mor_dt;
                c.t_end = mor_T;
                c.record_stride = stride;
                c.datum = suite[i];
                ratios[i] = morawetz_ratio(evolve(c));
            });
            CsvSink csv(out_path, out);
            *csv << "index,a,mass,ratio\n";
            for (std::size_t i = 0; i < suite.size(); ++i)
                csv.row({static_cast<double>(i), suite[i].a, *suite[i].mass, ratios[i]});
            ctx.results["max_ratio"] = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
        };
    });

    // lts --------------------------------------------------------------------
    std::string lts_N = "8,16,32,64";
    double lts_T = 0.0, lts_r = 6.0;
    auto* lts = app.add_subcommand("lts", "long-time Strichartz ratios over N");
    add_config(lts);
    lts->add_option("--N", lts_N);
    lts->add_option("--T", lts_T, "horizon (default: t_end)");
    lts->add_option("--r", lts_r, "spatial exponent");
    add_out(lts);
    lts->callback([&] {
        action = [&] {
            const auto cfg = load_config(config_path);
            record_config(cfg);
            const double T = lts_T > 0.0 ? lts_T : cfg.sim.t_end;
            note("lts_N", lts_N);
            note("lts_T", format_number(T));
            note("lts_r", format_number(lts_r));
            const auto Ns = parse_list(lts_N);
            const auto traj = evolve(cfg.sim);
            CsvSink csv(out_path, out);
            *csv << "N,T,r,ratio\n";
            for (double N : Ns) csv.row({N, T, lts_r, lts_ratio(traj, N, T, lts_r)});
        };
    });

    // smoothing --------------------------------------------------------------
    double sm_N = 2.0, sm_w = 0.5, sm_eps = 0.5, sm_window = 0.0, sm_rmax = 80.0, sm_res = 0.125;
    std::size_t sm_n = 8192;
    std::string sm_geometry = "hyperbolic3";
    auto* sm = app.add_subcommand("smoothing", "local smoothing ratio for band data");
    sm->add_option("--N", sm_N);
    sm->add_option("--width", sm_w);
    sm->add_option("--epsilon", sm_eps);
    sm->add_option("--window", sm_window, "time window (0 = wall-safe)");
    sm->add_option("--geometry", sm_geometry);
    sm->add_option("--r-max", sm_rmax);
    sm->add_option("--n", sm_n);
    sm->add_option("--time-resolution", sm_res);
    add_out(sm);
    sm->callback([&] {
        action = [&] {
            const auto grid = make_grid(parse_geometry(sm_geometry), sm_rmax, sm_n);
            const auto f = make_datum(DatumSpec::band(sm_N, sm_w), grid);
            const double window = sm_window > 0.0 ? sm_window : wall_safe_window(*grid, effective_frequency(f));
            note("N", format_number(sm_N));
            note("width", format_number(sm_w));
            note("epsilon", format_number(sm_eps));
            note("window", format_number(window));
            note("geometry", to_string(grid->geometry()));
            note("r_max", format_number(sm_rmax));
            note("n", std::to_string(sm_n));
            const double ratio = local_smoothing_ratio(f, sm_eps, window, sm_res);
            CsvSink csv(out_path, out);
            *csv << "epsilon,window,ratio\n";
            csv.row({sm_eps, window, ratio});
        };
    });

    // scatter ----------------------------------------------------------------
    auto* sc = app.add_subcommand("scatter", "pull-back Cauchy differences of a nonlinear run");
    add_config(sc);
    add_out(sc);
    sc->callback([&] {
        action = [&] {
            const auto cfg = load_config(config_path);
            record_config(cfg);
            const auto traj = evolve(cfg.sim);
            const auto diag = scattering_diagnostic(traj);
            CsvSink csv(out_path, out);
            *csv << "t,cauchy\n";
            for (std::size_t k = 0; k < diag.cauchy.size(); ++k) csv.row({traj.times[k + 1], diag.cauchy[k]});
            ctx.results["final_cauchy"] = diag.cauchy.empty() ? 0.0 : diag.cauchy.back();
            ctx.results["u_plus_mass"] = mass(diag.u_plus);
        };
    });

    // profiles ---------------------------------------------------------------
    std::string scales = "4,64";
    double pr_a = 1.0, pr_rmax = 20.0, delta = 1e-3;
    std::size_t pr_n = 4096, max_atoms = 4;
    auto* pr = app.add_subcommand("profiles", "greedy profile decomposition of planted bubbles");
    pr->add_option("--scales", scales, "comma-separated transplant scales of the planted bubbles");
    pr->add_option("--a", pr_a, "Gaussian profile width");
    pr->add_option("--r-max", pr_rmax);
    pr->add_option("--n", pr_n);
    pr->add_option("--max-atoms", max_atoms);
    pr->add_option("--delta", delta);
    add_out(pr);
    pr->callback([&] {
        action = [&] {
            note("scales", scales);
            note("a", format_number(pr_a));
            note("r_max", format_number(pr_rmax));
            note("n", std::to_string(pr_n));
            note("max_atoms", std::to_string(max_atoms));
            note("delta", format_number(delta));
            const auto grid = make_grid(Geometry::hyperbolic(), pr_rmax, pr_n);
            const auto phi = unit_gaussian_profile(pr_a);
            RadialField f(grid);
            for (double N : parse_list(scales)) f += transplant(phi, N, grid);
            const auto dec = greedy_decompose(f, max_atoms, delta);
            CsvSink csv(out_path, out);
            *csv << "N,t_offset,mass_captured,defect\n";
            for (const auto& atom : dec.atoms) csv.row({atom.N, atom.t_offset, atom.mass_captured, dec.pythagorean_defect});
            ctx.results["atoms"] = dec.atoms.size();
            ctx.results["input_mass"] = dec.input_mass;
            ctx.results["residual_mass"] = mass(dec.residual);
        };
    });

    // lp-check ---------------------------------------------------------------
    std::string lp_geometry = "hyperbolic3";
    double lp_rmax = 40.0, lp_N = 4.0, lp_N0 = 1.0, lp_N1 = 64.0, lp_a = 1.0;
    std::size_t lp_n = 4096;
    int lp_points = 32;
    auto* lp = app.add_subcommand("lp-check", "Littlewood-Paley partition and reproducing identities");
    lp->add_option("--geometry", lp_geometry);
    lp->add_option("--r-max", lp_rmax);
    lp->add_option("--n", lp_n);
    lp->add_option("--N", lp_N);
    lp->add_option("--N0", lp_N0);
    lp->add_option("--N1", lp_N1);
    lp->add_option("--a", lp_a, "Gaussian width of the test datum");
    lp->add_option("--points", lp_points, "quadrature nodes per octave");
    add_out(lp);
    lp->callback([&] {
        action = [&] {
            const auto grid = make_grid(parse_geometry(lp_geometry), lp_rmax, lp_n);
            const auto f = make_datum(DatumSpec::gaussian(lp_a), grid);
            note("geometry", to_string(grid->geometry()));
            note("r_max", format_number(lp_rmax));
            note("n", std::to_string(lp_n));
            note("N", format_number(lp_N));
            note("N0", format_number(lp_N0));
            note("N1", format_number(lp_N1));
            note("a", format_number(lp_a));
            note("points", std::to_string(lp_points));
            const double norm = l2_norm(f);
            const double partition =
                l2_norm(lp_project(f, LPBand::low(lp_N)) + lp_project(f, LPBand::high(lp_N)) - f) / norm;
            const auto target = lp_project(f, LPBand::low(lp_N1)) - lp_project(f, LPBand::low(lp_N0));
            const double reproducing = l2_norm(lp_reproduce(f, lp_N0, lp_N1, lp_points) - target) / norm;
            CsvSink csv(out_path, out);
            *csv << "check,relative_error\n";
            *csv << "partition," << format_number(partition) << '\n';
            *csv << "reproducing," << format_number(reproducing) << '\n';
            ctx.results["partition"] = partition;
            ctx.results["reproducing"] = reproducing;
        };
    });

    // admissible -------------------------------------------------------------
    std::string q_adm, r_adm;
    auto* adm = app.add_subcommand("admissible", "Strichartz admissibility in both geometries");
    adm->add_option("--q", q_adm)->required();
    adm->add_option("--r", r_adm)->required();
    adm->callback([&] {
        action = [&] {
            const double qq = parse_exponent(q_adm);
            const double rr = parse_exponent(r_adm);
            const bool e = is_admissible(qq, rr, Geometry::euclidean());
            const bool h = is_admissible(qq, rr, Geometry::hyperbolic());
            out << "euclidean3=" << (e ? "true" : "false") << " hyperbolic3=" << (h ? "true" : "false") << '\n';
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    ctx.manifest.command = app.get_subcommands().front()->get_name();
    const auto start = std::chrono::steady_clock::now();
    try {
        action();
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    ctx.manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (ctx.manifest.command != "admissible") {
        const nlohmann::json summary = {{"manifest", manifest_json(ctx.manifest)}, {"results", ctx.results}};
        // The CSV owns stdout when --out is '-', so the summary goes to stderr then.
        (out_path == "-" ? err : out) << summary.dump() << '\n';
    }
    for (const auto& w : ctx.manifest.warnings) err << "warning: " << w << '\n';
    return 0;
}

}  // namespace hyperlab
