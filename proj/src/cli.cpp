#include "qgol/cli.hpp"

#include "qgol/blob.hpp"
#include "qgol/engine.hpp"
#include "qgol/error.hpp"
#include "qgol/io.hpp"
#include "qgol/lattice.hpp"
#include "qgol/oracle_check.hpp"
#include "qgol/parallel.hpp"
#include "qgol/propagator.hpp"
#include "qgol/rng.hpp"
#include "qgol/spectral_stats.hpp"
#include "qgol/study.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace qgol {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kConfigHelp = R"(Configuration files hold `key = value` lines; `#` starts a comment.
Lists are comma-separated (0,0.1,0.5) or `lo:hi:n` for n evenly spaced values.

run          L (required), tau = 0, sigma = 0, T = 4096, seed = 0,
             rule_reading = evolved|prior, initial = random|<file.pbm>,
             frames = false, frame_stride = 1
sweep        L (required), tau_grid, sigma_grid (values in [0,1]),
             ensemble = 100, seed = 0, rule_reading
spectrum     L (required), tau = 0, sigma = 0, T = 4096, seed = 0,
             ensemble = 1, f_lo = 1, f_hi = 2000, rule_reading
blobs        input = <file.pbm>[,<file.pbm>...]  or the run keys
enumerate5   side = 5, boundary = periodic|fixed, catalog = true,
             transient_convention = raw|at_least_one,
             tau_grid, sigma_grid (optional, enables comparison surfaces),
             sample_size = 100000, max_steps = 20000, seed = 0, rule_reading
verify-oracle  times = 0.1,0.5,1.0, ics = 20, seed = 0, tolerance = 1e-10

--seed and --rule-reading override the corresponding config keys.)";

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    std::string out = ".";
    std::string rule_reading;
};

class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    template <class Writer>
    void write(const std::string& name, Writer&& writer, bool binary = false)
    {
        const fs::path p = path(name);
        fs::create_directories(p.parent_path());
        std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
        if (!os)
            throw ConfigError("cannot write " + p.string());
        writer(os);
        os.close();
        if (!os)
            throw ConfigError("failed writing " + p.string());
        files_.push_back(name);
    }

    ordered_json inventory() const
    {
        ordered_json arr = ordered_json::array();
        for (const auto& name : files_)
            arr.push_back({{"file", name}, {"sha256", sha256_file(path(name))}});
        return arr;
    }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

Config load_config(const Common& c)
{
    Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
    if (c.seed)
        cfg.set("seed", std::to_string(*c.seed));
    if (!c.rule_reading.empty())
        cfg.set("rule_reading", c.rule_reading);
    return cfg;
}

std::uint64_t seed_of(const Config& cfg)
{
    const long long s = cfg.integer("seed", 0);
    return static_cast<std::uint64_t>(s);
}

int side_of(const Config& cfg)
{
    const long long l = cfg.integer("L");
    if (l < 2 || l > 4096)
        throw ConfigError("L must be in 2..4096, got " + std::to_string(l));
    return static_cast<int>(l);
}

RunConfig run_config(const Config& cfg)
{
    RunConfig rc;
    rc.spec = LatticeSpec(side_of(cfg));
    rc.tau = cfg.real("tau", 0.0);
    rc.rule.sigma = cfg.real("sigma", 0.0);
    const long long t = cfg.integer("T", 4096);
    if (t < 1)
        throw ConfigError("T must be >= 1");
    rc.generations = static_cast<int>(t);
    rc.seed = seed_of(cfg);
    rc.reading = parse_rule_reading(cfg.text("rule_reading", "evolved"));
    if (!(rc.tau >= 0.0))
        throw ConfigError("tau must be >= 0");
    if (!(rc.rule.sigma >= 0.0))
        throw ConfigError("sigma must be >= 0");
    return rc;
}

TransferMatrix transfer_for(const LatticeSpec& spec, const NeighborhoodTable& table, double tau)
{
    if (tau == 0.0)
        return TransferMatrix::identity(spec.cell_count());
    return HoppingSpectrum(build_single_particle(table)).transfer(tau);
}

BinaryState read_pbm_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    return read_pbm(in);
}

ordered_json config_echo(const RunConfig& rc)
{
    return {{"L", rc.spec.side()},
            {"tau", rc.tau},
            {"sigma", rc.rule.sigma},
            {"T", rc.generations},
            {"seed", rc.seed},
            {"rule_reading", to_string(rc.reading)}};
}

ordered_json manifest_base(const std::string& command, const Config& cfg)
{
    ordered_json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["workers"] = worker_count();
    ordered_json keys = ordered_json::object();
    for (const auto& [k, v] : cfg.values())
        keys[k] = v;
    m["config_keys"] = keys;
    return m;
}

void finish_manifest(ordered_json& m, Outputs& out, std::chrono::steady_clock::time_point start)
{
    m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m["outputs"] = out.inventory();
    const fs::path p = out.path("manifest.json");
    std::ofstream os(p);
    os << m.dump(2) << '\n';
    if (!os)
        throw ConfigError("cannot write " + p.string());
}

ordered_json cycle_json(const CycleReport& c)
{
    return {{"detected", c.detected}, {"transient", c.transient}, {"period", c.period}};
}

GenerationTrace simulate(const RunConfig& rc, const std::string& initial_spec, const NeighborhoodTable& table,
                         bool keep_densities)
{
    BinaryState initial = initial_spec == "random" ? random_state(rc.spec, rc.seed) : read_pbm_file(initial_spec);
    if (!(initial.spec() == rc.spec))
        throw ConfigError("initial state is " + std::to_string(initial.spec().side()) + "x" +
                          std::to_string(initial.spec().side()) + " but L = " + std::to_string(rc.spec.side()));
    const auto m = transfer_for(rc.spec, table, rc.tau);
    return run(rc, m, initial, RunOptions{keep_densities, Exec::parallel});
}

const std::set<std::string> kRunKeys = {"L",       "tau",    "sigma",        "T", "seed", "rule_reading",
                                        "initial", "frames", "frame_stride"};

int cmd_run(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = load_config(common);
    cfg.require_known(kRunKeys);
    const RunConfig rc = run_config(cfg);
    const auto table = build_neighborhoods(rc.spec);
    const std::string initial = cfg.text("initial", "random");
    const auto trace = simulate(rc, initial, table, false);
    const auto cycle = detect_cycle(trace.states);

    Outputs out(common.out);
    out.write("trace.csv", [&](std::ostream& os) {
        os << "generation,state,alive\n";
        for (std::size_t k = 0; k < trace.generations(); ++k)
            os << k << ',' << to_hex(trace.states[k]) << ',' << trace.states[k].alive_count() << '\n';
    });
    if (cfg.flag("frames", false)) {
        const long long stride = cfg.integer("frame_stride", 1);
        if (stride < 1)
            throw ConfigError("frame_stride must be >= 1");
        for (std::size_t k = 0; k < trace.generations(); k += static_cast<std::size_t>(stride)) {
            char name[32];
            std::snprintf(name, sizeof name, "frames/gen_%06zu.pbm", k);
            out.write(name, [&](std::ostream& os) { write_pbm(os, trace.states[k]); });
        }
    }
    auto m = manifest_base("run", cfg);
    m["config"] = config_echo(rc);
    m["initial"] = initial;
    m["cycle"] = cycle_json(cycle);
    m["trace_encoding"] = "hex, most significant digit first, bit i = cell i in row-major order";
    finish_manifest(m, out, start);
    std::cout << "run: " << trace.generations() << " generations, cycle "
              << (cycle.detected ? "period " + std::to_string(cycle.period) + " after " +
                                       std::to_string(cycle.transient)
                                 : std::string("not detected"))
              << '\n';
    return exit_ok;
}

void check_unit_grid(const std::vector<double>& g, const std::string& name)
{
    for (double x : g)
        if (!(x >= 0.0 && x <= 1.0))
            throw ConfigError(name + " values must lie in [0,1], got " + format_real(x));
}

std::vector<std::uint64_t> ensemble_seeds(std::uint64_t seed, long long n)
{
    if (n < 1)
        throw ConfigError("ensemble must be >= 1");
    std::vector<std::uint64_t> seeds;
    for (long long i = 0; i < n; ++i)
        seeds.push_back(stream_seed(seed, static_cast<std::uint64_t>(i)));
    return seeds;
}

int cmd_sweep(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = load_config(common);
    cfg.require_known({"L", "tau_grid", "sigma_grid", "ensemble", "seed", "rule_reading"});
    const LatticeSpec spec(side_of(cfg));
    const auto taus = cfg.reals("tau_grid");
    const auto sigmas = cfg.reals("sigma_grid");
    check_unit_grid(taus, "tau_grid");
    check_unit_grid(sigmas, "sigma_grid");
    const auto reading = parse_rule_reading(cfg.text("rule_reading", "evolved"));
    const auto seeds = ensemble_seeds(seed_of(cfg), cfg.integer("ensemble", 100));
    std::cerr << "sweep: " << taus.size() << " x " << sigmas.size() << " grid, " << seeds.size() << " initial states, "
              << worker_count() << " workers\n";
    const auto surface = delta_surface(spec, taus, sigmas, seeds, reading, Exec::parallel);
    std::cerr << "sweep: done\n";
    const auto curve = sigma_min_curve(surface);

    Outputs out(common.out);
    out.write("delta_surface.csv", [&](std::ostream& os) { write_surface_csv(os, surface); });
    out.write("sigma_min.csv", [&](std::ostream& os) {
        os << "tau,sigma_min\n";
        for (const auto& [t, s] : curve)
            os << format_real(t) << ',' << format_real(s) << '\n';
    });
    auto m = manifest_base("sweep", cfg);
    m["L"] = spec.side();
    m["ensemble"] = seeds.size();
    m["seed"] = seed_of(cfg);
    m["rule_reading"] = to_string(reading);
    m["delta_generation"] = kDeltaGeneration;
    m["delta_generation_note"] = "0-based generation index; 2 = after two rule applications";
    m["initial_state_seeds"] = "stream_seed(seed, i), i = 0..ensemble-1";
    finish_manifest(m, out, start);
    return exit_ok;
}

int cmd_spectrum(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = load_config(common);
    cfg.require_known({"L", "tau", "sigma", "T", "seed", "rule_reading", "ensemble", "f_lo", "f_hi"});
    RunConfig rc = run_config(cfg);
    const auto seeds = ensemble_seeds(rc.seed, cfg.integer("ensemble", 1));
    const long long f_lo = cfg.integer("f_lo", 1);
    const long long f_hi = cfg.integer("f_hi", 2000);
    if (f_lo < 1 || f_hi <= f_lo)
        throw ConfigError("need 1 <= f_lo < f_hi");
    const auto table = build_neighborhoods(rc.spec);
    const auto m = transfer_for(rc.spec, table, rc.tau);

    Spectrum mean;
    mean.generations = static_cast<std::size_t>(rc.generations);
    mean.power.assign(mean.generations, 0.0);
    std::vector<PowerLawFit> fits;
    std::vector<CycleReport> cycles;
    std::vector<std::size_t> dominant;
    std::vector<std::vector<double>> densities;
    for (auto s : seeds) {
        const auto trace = run(rc, m, random_state(rc.spec, s), RunOptions{false, Exec::parallel});
        const auto spectrum = power_spectrum(trace, Exec::parallel);
        for (std::size_t f = 0; f < mean.power.size(); ++f)
            mean.power[f] += spectrum.power[f] / static_cast<double>(seeds.size());
        fits.push_back(fit_power_law(spectrum, static_cast<std::size_t>(f_lo), static_cast<std::size_t>(f_hi)));
        dominant.push_back(dominant_frequency(spectrum));
        cycles.push_back(detect_cycle(trace.states));
        densities.push_back(density_series(trace));
    }

    Outputs out(common.out);
    out.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, mean); });
    out.write("fits.csv", [&](std::ostream& os) {
        os << "member,seed,C,alpha,f_lo,f_hi,points,skipped_zero_bins,residual,dominant_f,period,transient\n";
        for (std::size_t i = 0; i < fits.size(); ++i) {
            const auto& f = fits[i];
            os << i << ',' << seeds[i] << ',' << format_real(f.c) << ',' << format_real(f.alpha) << ',' << f.f_lo
               << ',' << f.f_hi << ',' << f.points << ',' << f.skipped_zero_bins << ',' << format_real(f.residual)
               << ',' << dominant[i] << ',';
            os << (cycles[i].detected ? std::to_string(cycles[i].period) : "NA") << ','
               << (cycles[i].detected ? std::to_string(cycles[i].transient) : "NA") << '\n';
        }
    });
    out.write("density.csv", [&](std::ostream& os) {
        os << "generation";
        for (std::size_t i = 0; i < densities.size(); ++i)
            os << ",D" << i;
        os << '\n';
        for (std::size_t k = 0; k < mean.generations; ++k) {
            os << k;
            for (const auto& d : densities)
                os << ',' << format_real(d[k]);
            os << '\n';
        }
    });
    double alpha_mean = 0.0;
    for (const auto& f : fits)
        alpha_mean += f.alpha / static_cast<double>(fits.size());
    auto man = manifest_base("spectrum", cfg);
    man["config"] = config_echo(rc);
    man["ensemble"] = seeds.size();
    man["alpha_mean"] = alpha_mean;
    man["spectrum_normalization"] =
        "S(f) = sum_a |(1/T) sum_t s_a(t) exp(-2 pi i t f / T)|^2, f = 0..T-1; spectrum.csv is the ensemble mean";
    finish_manifest(man, out, start);
    std::cout << "spectrum: mean alpha " << format_real(alpha_mean) << " over " << fits.size() << " run(s)\n";
    return exit_ok;
}

int cmd_blobs(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = load_config(common);
    std::set<std::string> known = kRunKeys;
    known.insert("input");
    cfg.require_known(known);

    GenerationTrace trace;
    ordered_json source;
    if (cfg.has("input")) {
        std::stringstream ss(cfg.text("input"));
        std::string item;
        std::vector<std::string> files;
        while (std::getline(ss, item, ','))
            files.push_back(item);
        for (const auto& f : files) {
            trace.states.push_back(read_pbm_file(f));
            if (!(trace.states.back().spec() == trace.states.front().spec()))
                throw ConfigError("input frames have different sizes");
        }
        source = {{"input", files}};
    } else {
        const RunConfig rc = run_config(cfg);
        const auto table = build_neighborhoods(rc.spec);
        trace = simulate(rc, cfg.text("initial", "random"), table, false);
        source = {{"config", config_echo(rc)}};
    }
    if (trace.states.empty())
        throw UsageError("no frames to analyse");
    const int side = trace.states.front().spec().side();
    const auto stats = trace_stats(trace, Exec::parallel);
    const auto hist = accumulate_centroids(stats, side);

    Outputs out(common.out);
    out.write("frame_stats.csv", [&](std::ostream& os) { write_frame_stats_csv(os, stats); });
    out.write("normalized.csv", [&](std::ostream& os) {
        os << "generation,alive_fraction,blob_fraction\n";
        for (std::size_t k = 0; k < stats.size(); ++k)
            os << k << ',' << format_real(static_cast<double>(stats[k].alive_count) / (side * side)) << ','
               << format_real(static_cast<double>(stats[k].blob_count) / static_cast<double>(max_blob_count(side)))
               << '\n';
    });
    out.write("centroids.csv", [&](std::ostream& os) { write_histogram_csv(os, hist); });
    out.write("centroids.pgm", [&](std::ostream& os) { write_histogram_pgm(os, hist); });
    auto m = manifest_base("blobs", cfg);
    m["source"] = source;
    m["frames"] = stats.size();
    m["empty_frames"] = hist.empty_frames();
    m["centroid_rounding"] = "half-up: floor(x + 0.5) in both coordinates";
    m["blob_normalizer"] = max_blob_count(side);
    finish_manifest(m, out, start);
    std::cout << "blobs: " << stats.size() << " frame(s)\n";
    return exit_ok;
}

int cmd_enumerate5(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const Config cfg = load_config(common);
    cfg.require_known({"side", "boundary", "catalog", "transient_convention", "tau_grid", "sigma_grid", "sample_size",
                       "max_steps", "seed", "rule_reading"});
    const long long side = cfg.integer("side", 5);
    if (side < 2 || side > kMaxEnumerationSide)
        throw ConfigError("side must be in 2.." + std::to_string(kMaxEnumerationSide));
    const std::string conv_name = cfg.text("transient_convention", "raw");
    TransientConvention conv;
    if (conv_name == "raw")
        conv = TransientConvention::raw;
    else if (conv_name == "at_least_one")
        conv = TransientConvention::at_least_one;
    else
        throw UsageError("transient_convention must be raw or at_least_one");

    const Boundary boundary = parse_boundary(cfg.text("boundary", "periodic"));
    std::cerr << "enumerate5: classifying 2^" << side * side << " initial conditions (" << to_string(boundary)
              << " boundary)\n";
    const auto catalog = enumerate_classical(static_cast<int>(side), boundary, Exec::serial);
    const auto counts = period_counts(catalog);
    const auto transients = transient_statistics(catalog, conv);

    Outputs out(common.out);
    out.write("table1.csv", [&](std::ostream& os) { write_period_counts_csv(os, counts); });
    out.write("transients.csv", [&](std::ostream& os) { write_transient_csv(os, transients); });
    out.write("transient_histogram.csv", [&](std::ostream& os) {
        os << "period,transient,count\n";
        for (const auto& s : transients)
            for (std::size_t t = 0; t < s.histogram.size(); ++t)
                if (s.histogram[t])
                    os << s.period << ',' << t << ',' << s.histogram[t] << '\n';
    });
    if (cfg.flag("catalog", true))
        out.write("catalog.bin", [&](std::ostream& os) { write_catalog_binary(os, catalog); }, true);

    auto m = manifest_base("enumerate5", cfg);
    m["side"] = side;
    m["boundary"] = to_string(boundary);
    m["attractors"] = catalog.registry.size();
    m["transient_convention"] = conv_name;
    m["catalog_layout"] = "8 bytes per IC, little-endian: uint32 IC, uint16 period, uint16 transient (raw)";

    if (cfg.has("tau_grid") || cfg.has("sigma_grid")) {
        SurfaceOptions opt;
        opt.sample_size = static_cast<std::size_t>(cfg.integer("sample_size", 100000));
        opt.max_steps = static_cast<std::size_t>(cfg.integer("max_steps", 20000));
        opt.seed = seed_of(cfg);
        opt.reading = parse_rule_reading(cfg.text("rule_reading", "evolved"));
        const auto taus = cfg.reals("tau_grid");
        const auto sigmas = cfg.reals("sigma_grid");
        std::cerr << "enumerate5: comparison surfaces on " << taus.size() << " x " << sigmas.size() << " grid\n";
        const auto surface = comparison_surfaces(catalog, taus, sigmas, opt);
        out.write("surfaces.csv", [&](std::ostream& os) { write_comparison_csv(os, surface); });
        m["surfaces"] = {{"sample_size", opt.sample_size},
                         {"quota_per_period", surface.quota},
                         {"seed", opt.seed},
                         {"max_steps", opt.max_steps},
                         {"rule_reading", to_string(opt.reading)}};
    }
    finish_manifest(m, out, start);
    for (const auto& c : counts)
        std::cout << "period " << c.period << ": " << c.cycles << " cycles, " << c.symmetry_classes
                  << " up to symmetry, basin " << c.basin_states << '\n';
    return exit_ok;
}

int cmd_verify_oracle(const Common& common)
{
    const Config cfg = load_config(common);
    cfg.require_known({"times", "ics", "seed", "tolerance"});
    const auto times = cfg.has("times") ? cfg.reals("times") : std::vector<double>{0.1, 0.5, 1.0};
    const long long ics = cfg.integer("ics", 20);
    const double tol = cfg.real("tolerance", 1e-10);
    if (ics < 1)
        throw ConfigError("ics must be >= 1");
    double worst = 0.0;
    for (const auto& [r, c] : oracle_shapes()) {
        const auto res = compare_with_fock(r, c, times, static_cast<std::size_t>(ics), seed_of(cfg));
        std::cout << r * c << " modes (" << r << "x" << c << "): max residual " << std::scientific
                  << std::setprecision(3) << res.max_residual << " over " << res.comparisons << " densities\n";
        worst = std::max(worst, res.max_residual);
    }
    std::cout << "max residual " << std::scientific << std::setprecision(3) << worst << " (tolerance " << tol
              << ")\n";
    return worst < tol ? exit_ok : exit_check_failed;
}

} // namespace

int run_cli(const std::vector<std::string>& args)
{
    CLI::App app{"Hamiltonian-punctuated Game of Life simulator and analysis tools"};
    app.footer(kConfigHelp);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", common.seed, "seed (overrides the config)");
        sub->add_option("--workers", common.workers, "worker threads (default: all available)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--out", common.out, "output directory")->capture_default_str();
        sub->add_option("--rule-reading", common.rule_reading, "own-branch reading of the rule")
            ->check(CLI::IsMember({"evolved", "prior"}));
    };
    std::vector<std::pair<CLI::App*, int (*)(const Common&)>> commands = {
        {app.add_subcommand("run", "one simulation run: trace CSV, optional PBM frames"), cmd_run},
        {app.add_subcommand("sweep", "Delta(tau, sigma) surface and sigma_min(tau)"), cmd_sweep},
        {app.add_subcommand("spectrum", "power spectrum and power-law fit"), cmd_spectrum},
        {app.add_subcommand("blobs", "blob statistics and centroid histogram"), cmd_blobs},
        {app.add_subcommand("enumerate5", "exhaustive small-board classification"), cmd_enumerate5},
        {app.add_subcommand("verify-oracle", "transfer matrix vs full Fock-space evolution"), cmd_verify_oracle},
    };
    for (auto& [sub, fn] : commands)
        add_common(sub);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
        rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        set_worker_count(common.workers);
        for (auto& [sub, fn] : commands)
            if (sub->parsed())
                return fn(common);
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const FitError& e) {
        std::cerr << "fit failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_usage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace qgol
