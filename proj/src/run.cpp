// run.cpp -- config parsing, presets, trajectory output, sweeps.
#include "cpbnr/run.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <utility>

#include "cpbnr/errors.hpp"

namespace cpbnr {
namespace {

// ---- formatting helpers ----------------------------------------------------

std::string fmt_g(double x, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string profile_text(const TimeProfile& p, int digits = 15) {
    switch (p.kind) {
    case TimeProfile::Kind::zero:
        return "0";
    case TimeProfile::Kind::constant:
        return "constant(" + fmt_g(p.value, digits) + ")";
    case TimeProfile::Kind::sinusoid:
        return "sinusoid(" + fmt_g(p.value, digits) + ", " + fmt_g(p.mod_freq, digits) + ")";
    }
    throw Error("profile_text: unreachable");
}

// ---- parsing helpers ---------------------------------------------------------

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

struct LineContext {
    const std::string& name;
    int line;
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(name + ":" + std::to_string(line) + ": " + what);
    }
};

double parse_number(std::string_view v, const LineContext& ctx) {
    double out = 0.0;
    const auto* begin = v.data();
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        ctx.fail("expected a number, got '" + std::string(v) + "'");
    return out;
}

std::int64_t parse_integer(std::string_view v, const LineContext& ctx) {
    std::int64_t out = 0;
    const auto* begin = v.data();
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        ctx.fail("expected an integer, got '" + std::string(v) + "'");
    return out;
}

TimeProfile parse_profile(std::string_view v, const LineContext& ctx) {
    constexpr std::string_view kw = "sinusoid";
    if (v.substr(0, kw.size()) == kw) {
        std::string_view rest = trim(v.substr(kw.size()));
        if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
            ctx.fail("expected sinusoid(amplitude, modFreq)");
        rest = rest.substr(1, rest.size() - 2);
        const auto comma = rest.find(',');
        if (comma == std::string_view::npos)
            ctx.fail("expected sinusoid(amplitude, modFreq)");
        const double a = parse_number(trim(rest.substr(0, comma)), ctx);
        const double b = parse_number(trim(rest.substr(comma + 1)), ctx);
        try {
            return TimeProfile::sinusoid(a, b);
        } catch (const ValidationError& e) {
            ctx.fail(e.what());
        }
    }
    const double value = parse_number(v, ctx);
    return value == 0.0 ? TimeProfile::zero() : TimeProfile::constant(value);
}

bool parse_bool(std::string_view v, const LineContext& ctx) {
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    ctx.fail("expected true or false, got '" + std::string(v) + "'");
}

OutputFormat parse_format(std::string_view v, const LineContext& ctx) {
    if (v == "csv")
        return OutputFormat::csv;
    if (v == "jsonl")
        return OutputFormat::jsonl;
    ctx.fail("expected csv or jsonl, got '" + std::string(v) + "'");
}

} // namespace

// ---- RunConfig ---------------------------------------------------------------

void RunConfig::validate() const {
    params.validate();
    initial.validate();
    check_plan(params, plan);
    if (output_path.empty())
        throw ValidationError("RunConfig: output path must not be empty");
    resolved_n_max();
}

std::size_t RunConfig::resolved_n_max() const {
    return n_max != 0 ? n_max : truncation_for(initial);
}

// ---- config I/O ---------------------------------------------------------------

RunConfig parse_config(std::istream& in, const std::string& name) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{name, line_no};
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            ctx.fail("expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            ctx.fail("expected 'key = value'");
        if (!seen.insert(key).second)
            ctx.fail("duplicate key '" + key + "'");

        if (key == "params.omega0") {
            cfg.params.omega0 = parse_number(value, ctx);
        } else if (key == "params.omegaC") {
            cfg.params.omega_c = parse_number(value, ctx);
        } else if (key == "params.gamma") {
            cfg.params.gamma = parse_profile(value, ctx);
        } else if (key == "params.delta") {
            cfg.params.delta = parse_profile(value, ctx);
        } else if (key == "params.detuning") {
            cfg.params.detuning = parse_profile(value, ctx);
        } else if (key == "initial.meanN") {
            cfg.initial.mean_n = parse_number(value, ctx);
        } else if (key == "initial.phase") {
            cfg.initial.phase = parse_number(value, ctx);
        } else if (key == "initial.nMax") {
            const std::int64_t n = parse_integer(value, ctx);
            if (n < 0)
                ctx.fail("initial.nMax must be >= 0 (0 means automatic)");
            cfg.n_max = static_cast<std::size_t>(n);
        } else if (key == "plan.tEnd") {
            cfg.plan.t_end = parse_number(value, ctx);
        } else if (key == "plan.stepSize") {
            cfg.plan.step = parse_number(value, ctx);
        } else if (key == "plan.recordEvery") {
            cfg.plan.record_every = parse_integer(value, ctx);
        } else if (key == "normalizeEntropy") {
            cfg.normalize_entropy = parse_bool(value, ctx);
        } else if (key == "output.path") {
            cfg.output_path = std::string(value);
        } else if (key == "output.format") {
            cfg.format = parse_format(value, ctx);
        } else {
            ctx.fail("unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

std::string canonical_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "params.omega0 = " << fmt_g(cfg.params.omega0, 17) << '\n'
        << "params.omegaC = " << fmt_g(cfg.params.omega_c, 17) << '\n'
        << "params.gamma = " << profile_text(cfg.params.gamma, 17) << '\n'
        << "params.delta = " << profile_text(cfg.params.delta, 17) << '\n'
        << "params.detuning = " << profile_text(cfg.params.detuning, 17) << '\n'
        << "initial.meanN = " << fmt_g(cfg.initial.mean_n, 17) << '\n'
        << "initial.phase = " << fmt_g(cfg.initial.phase, 17) << '\n'
        << "initial.nMax = " << cfg.n_max << '\n'
        << "plan.tEnd = " << fmt_g(cfg.plan.t_end, 17) << '\n'
        << "plan.stepSize = " << fmt_g(cfg.plan.step, 17) << '\n'
        << "plan.recordEvery = " << cfg.plan.record_every << '\n'
        << "normalizeEntropy = " << (cfg.normalize_entropy ? "true" : "false") << '\n';
    return out.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string text = canonical_config_text(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---- presets -------------------------------------------------------------------

namespace {

Preset make_preset(std::string name, TimeProfile gamma, TimeProfile delta, TimeProfile detuning) {
    RunConfig cfg;
    cfg.initial.mean_n = 9.0; // every bundled regime drives the same coherent state
    cfg.params.gamma = gamma;
    cfg.params.delta = delta;
    cfg.params.detuning = detuning;
    cfg.output_path = name + (cfg.format == OutputFormat::csv ? ".csv" : ".jsonl");
    std::string summary = "gamma=" + profile_text(gamma) + " delta=" + profile_text(delta) +
                          " f=" + profile_text(detuning) + " meanN=" + fmt_g(cfg.initial.mean_n) +
                          " tEnd=" + fmt_g(cfg.plan.t_end);
    return Preset{std::move(name), std::move(summary), std::move(cfg)};
}

} // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = [] {
        const auto zero = TimeProfile::zero();
        const auto g = TimeProfile::constant(0.001);
        std::vector<Preset> t;
        t.push_back(make_preset("fig2a", zero, zero, zero));
        t.push_back(make_preset("fig2b", g, zero, zero));
        t.push_back(make_preset("fig3a", g, TimeProfile::constant(0.001), zero));
        t.push_back(make_preset("fig3b", g, TimeProfile::constant(0.01), zero));
        t.push_back(make_preset("fig4a", g, zero, TimeProfile::constant(10.0)));
        t.push_back(make_preset("fig4b", g, TimeProfile::constant(0.001), TimeProfile::constant(20.0)));
        t.push_back(make_preset("fig5a", g, zero, zero));
        t.push_back(make_preset("fig5b", g, TimeProfile::constant(0.001), zero));
        t.push_back(make_preset("fig5c", g, TimeProfile::constant(0.005), zero));
        t.push_back(make_preset("fig6a", g, TimeProfile::constant(0.001), TimeProfile::constant(20.0)));
        t.push_back(make_preset("fig7a", g, TimeProfile::constant(0.001), TimeProfile::sinusoid(20.0, 1.0)));
        t.push_back(make_preset("fig7b", g, TimeProfile::constant(0.001), TimeProfile::sinusoid(20.0, 20.0)));
        t.push_back(make_preset("fig7c", g, TimeProfile::constant(0.001), TimeProfile::sinusoid(10.0, 1.0)));
        return t;
    }();
    return table;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name)
            return &p;
    return nullptr;
}

std::string format_presets_listing() {
    std::ostringstream out;
    for (const auto& p : presets())
        out << std::left << std::setw(7) << p.name << p.summary << '\n';
    return out.str();
}

RunConfig resolve_run_input(const std::string& arg) {
    if (const Preset* p = find_preset(arg))
        return p->config;
    return load_config(arg);
}

// ---- execution -------------------------------------------------------------------

void write_rows(std::ostream& out, const std::vector<ObservableRow>& rows, OutputFormat format) {
    if (format == OutputFormat::csv) {
        out << "t,entropy,inversion,norm2,meanN\n";
        for (const auto& r : rows)
            out << fmt_g(r.t) << ',' << fmt_g(r.entropy) << ',' << fmt_g(r.inversion) << ','
                << fmt_g(r.norm2) << ',' << fmt_g(r.mean_n) << '\n';
    } else {
        for (const auto& r : rows)
            out << "{\"t\":" << fmt_g(r.t) << ",\"entropy\":" << fmt_g(r.entropy)
                << ",\"inversion\":" << fmt_g(r.inversion) << ",\"norm2\":" << fmt_g(r.norm2)
                << ",\"meanN\":" << fmt_g(r.mean_n) << "}\n";
    }
}

Trajectory run_scenario(const RunConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.resolved_n_max();
    const LadderState initial = initial_state(cfg.initial, n);
    RecordOptions opts;
    opts.normalize_entropy = cfg.normalize_entropy;
    Trajectory traj = integrate(cfg.params, initial, cfg.plan, opts);

    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open output file '" + cfg.output_path + "'");
    write_rows(out, traj.rows, cfg.format);
    out.flush();
    if (!out)
        throw Error("failed while writing '" + cfg.output_path + "'");
    return traj;
}

RunConfig apply_axis(const RunConfig& base, const std::string& axis, double value) {
    RunConfig cfg = base;
    const auto constant_or_zero = [](double v) {
        return v == 0.0 ? TimeProfile::zero() : TimeProfile::constant(v);
    };
    if (axis == "gamma") {
        cfg.params.gamma = constant_or_zero(value);
    } else if (axis == "delta") {
        cfg.params.delta = constant_or_zero(value);
    } else if (axis == "eta") {
        if (base.params.detuning.kind != TimeProfile::Kind::sinusoid)
            throw ValidationError("sweep axis 'eta' needs a sinusoid detuning in the base config");
        cfg.params.detuning = TimeProfile::sinusoid(value, base.params.detuning.mod_freq);
    } else if (axis == "omegaPrime") {
        if (base.params.detuning.kind != TimeProfile::Kind::sinusoid)
            throw ValidationError(
                "sweep axis 'omegaPrime' needs a sinusoid detuning in the base config");
        cfg.params.detuning = TimeProfile::sinusoid(base.params.detuning.value, value);
    } else if (axis == "Delta") {
        cfg.params.detuning = constant_or_zero(value);
    } else if (axis == "meanN") {
        cfg.initial.mean_n = value;
    } else {
        throw ValidationError("unknown sweep axis '" + axis +
                              "' (expected gamma, delta, eta, omegaPrime, Delta, or meanN)");
    }
    return cfg;
}

std::vector<SweepPointResult> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty())
        throw ValidationError("sweep: values list must not be empty");
    apply_axis(spec.base, spec.axis, spec.values.front()); // reject bad axes up front

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec)
        throw ValidationError("cannot create sweep directory '" + spec.out_dir +
                              "': " + ec.message());

    const char* ext = spec.base.format == OutputFormat::csv ? ".csv" : ".jsonl";
    std::vector<SweepPointResult> results(spec.values.size());
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        results[i].value = spec.values[i];
        results[i].file = spec.axis + "=" + fmt_g(spec.values[i]) + ext;
    }

    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= spec.values.size())
                return;
            auto& r = results[i];
            try {
                RunConfig cfg = apply_axis(spec.base, spec.axis, spec.values[i]);
                cfg.output_path = (fs::path(spec.out_dir) / r.file).string();
                run_scenario(cfg);
                r.ok = true;
            } catch (const std::exception& e) {
                r.ok = false;
                r.error = e.what();
            }
        }
    };

    unsigned jobs = spec.jobs != 0 ? spec.jobs : std::thread::hardware_concurrency();
    if (jobs == 0)
        jobs = 1;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, spec.values.size()));
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();

    nlohmann::json manifest;
    manifest["axis"] = spec.axis;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(spec.base)));
    manifest["configHash"] = hash_buf;
    manifest["points"] = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json point;
        point["value"] = r.value;
        point["file"] = r.file;
        point["status"] = r.ok ? "ok" : "error";
        if (!r.ok)
            point["error"] = r.error;
        manifest["points"].push_back(point);
    }
    std::ofstream mf(fs::path(spec.out_dir) / "manifest.json", std::ios::binary);
    if (!mf)
        throw ValidationError("cannot open sweep manifest for writing");
    mf << manifest.dump(2) << '\n';
    return results;
}

} // namespace cpbnr
