// qtanner: command-line front end for construction, checks and simulation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtanner/complex.hpp"
#include "qtanner/decoder.hpp"
#include "qtanner/distance.hpp"
#include "qtanner/harness.hpp"
#include "qtanner/noise.hpp"
#include "qtanner/qcode.hpp"
#include "qtanner/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qtanner;

namespace {

/// JSON config files. Objects named after a subcommand become that
/// subcommand's section; any other nested object joins its keys with '.'
/// (so {"bp": {"alpha": 0.5}} sets --bp.alpha).
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::set<std::string> sections) : sections_(std::move(sections)) {}

    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const std::string name = opt->get_lnames().front();
            if (opt->count() > 0)
                j[name] = opt->as<std::vector<std::string>>();
            else if (default_also && !opt->get_default_str().empty())
                j[name] = opt->get_default_str();
        }
        return j.dump(2) + '\n';
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, "", items);
        return items;
    }

private:
    void flatten(const json& j, std::vector<std::string> parents, const std::string& prefix,
                 std::vector<CLI::ConfigItem>& out) const {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                if (prefix.empty() && sections_.count(key)) {
                    auto p = parents;
                    p.push_back(key);
                    flatten(value, p, "", out);
                } else {
                    flatten(value, parents, prefix + key + ".", out);
                }
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = prefix + key;
            if (value.is_array())
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(value));
            out.push_back(std::move(item));
        }
    }

    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    std::set<std::string> sections_;
};

struct CodeSource {
    std::string fixture;
    std::string bundle;

    void add(CLI::App* sub) {
        auto* f = sub->add_option("--fixture", fixture, "Fixture name (d4-36, d6-54, d8-72, d8-200, d10-250)");
        auto* b = sub->add_option("--bundle", bundle, "Code bundle directory");
        f->excludes(b);
    }

    std::string id() const { return fixture.empty() ? fs::path(bundle).filename().string() : fixture; }

    CssCode load() const {
        if (!fixture.empty()) return load_fixture(fixture);
        if (!bundle.empty()) return load_bundle(bundle);
        throw CLI::ValidationError("code", "give --fixture or --bundle");
    }

    /// Rounds / distance default: the fixture's built distance.
    std::size_t default_distance(std::size_t given) const {
        if (given) return given;
        if (!fixture.empty()) return fixture_info(fixture).built_d;
        throw CLI::ValidationError("rounds", "--rounds (or --d) is required for bundles");
    }
};

struct DecoderFlags {
    double alpha = 0.625;
    std::size_t max_iters = 0;
    std::size_t osd_order = 9;
    std::string strategy = "combination-sweep";

    void add(CLI::App* sub) {
        sub->add_option("--bp.alpha", alpha, "Min-sum scaling factor")->capture_default_str();
        sub->add_option("--bp.max_iters", max_iters, "BP iteration cap (0: number of columns)")
            ->capture_default_str();
        sub->add_option("--osd.order", osd_order, "OSD combination-sweep order")->capture_default_str();
        sub->add_option("--osd.strategy", strategy, "combination-sweep | order-0")->capture_default_str();
    }

    DecoderConfig config() const {
        DecoderConfig c;
        c.alpha = alpha;
        c.max_iters = max_iters;
        c.osd_order = osd_order;
        c.osd_strategy = parse_osd_strategy(strategy);
        c.validate();
        return c;
    }
};

struct NoiseFlags {
    std::string model = "phenom";
    std::size_t rounds = 0;
    std::string weighting = "depolarizing";
    double idle_factor = 0.1;

    void add(CLI::App* sub) {
        sub->add_option("--model", model, "capacity | phenom | circuit")->capture_default_str();
        sub->add_option("--rounds", rounds, "Syndrome rounds N (default: fixture distance)");
        sub->add_option("--weighting", weighting, "Circuit fault weighting: depolarizing | per-component")
            ->capture_default_str();
        sub->add_option("--idle-factor", idle_factor, "Idle fault rate relative to p")->capture_default_str();
    }

    NoiseModel model_for(const CodeSource& src) const {
        NoiseModel nm;
        nm.kind = parse_noise_kind(model);
        nm.rounds = nm.kind == NoiseKind::CodeCapacity ? 1 : src.default_distance(rounds);
        nm.weighting = parse_fault_weighting(weighting);
        nm.idle_factor = idle_factor;
        return nm;
    }
};

struct RunFlags {
    std::size_t shots = 1'000'000;
    std::size_t failures = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 0;

    void add(CLI::App* sub) {
        sub->add_option("--shots", shots, "Shot cap per memory component")->capture_default_str();
        sub->add_option("--failures", failures, "Stop a component after this many failures")->capture_default_str();
        sub->add_option("--seed", seed, "Master seed")->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
    }

    RunOptions options() const {
        RunOptions o;
        o.max_shots = shots;
        o.target_failures = failures;
        o.seed = seed;
        o.threads = threads;
        return o;
    }
};

fs::path default_out_dir() {
    if (const char* env = std::getenv("QTANNER_OUT_DIR"); env && *env) return env;
    return "qtanner-out";
}

void write_json(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

LeftRightCayleyComplex complex_of(const Provenance& p) {
    DihedralGroup g(p.dihedral_n);
    auto a = parse_generator_set(g, p.a);
    auto b = parse_generator_set(g, p.b);
    return LeftRightCayleyComplex(g, a, b);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Tanner codes on dihedral left-right Cayley complexes"};
    app.require_subcommand(1);
    std::string out_dir = default_out_dir().string();
    app.add_option("--out-dir", out_dir, "Output directory (env QTANNER_OUT_DIR)")->capture_default_str();

    const std::set<std::string> sections{"construct", "fixture", "check",     "distance", "spectra",
                                         "simulate",  "threshold", "overhead", "sweep",    "circuit"};
    app.config_formatter(std::make_shared<JsonConfig>(sections));
    app.set_config("--config", "", "JSON config file mirroring the flags");

    // construct
    auto* construct = app.add_subcommand("construct", "Random code from a dihedral group and classical pair");
    std::uint32_t group_n = 4;
    std::size_t delta = 3;
    std::uint64_t construct_seed = 1;
    std::size_t info_a = 0, info_b = 0;
    std::string construct_out;
    construct->add_option("--group", group_n, "Dihedral n (group order 2n)")->capture_default_str();
    construct->add_option("--delta", delta, "Generator set size")->capture_default_str();
    construct->add_option("--seed", construct_seed, "Sampling seed")->capture_default_str();
    construct->add_option("--info-a", info_a, "dim C_A (0: random)");
    construct->add_option("--info-b", info_b, "dim C_B (0: random)");
    construct->add_option("--out", construct_out, "Bundle directory (default: <out-dir>/codes/<label>)");

    // fixture
    auto* fixture = app.add_subcommand("fixture", "Write a fixture code bundle");
    std::string fixture_name;
    std::string fixture_out;
    bool fixture_list = false;
    fixture->add_option("--name", fixture_name, "Fixture name");
    fixture->add_option("--out", fixture_out, "Bundle directory (default: <out-dir>/codes/<name>)");
    fixture->add_flag("--list", fixture_list, "List fixtures");

    // check
    auto* check = app.add_subcommand("check", "Invariant report for a code");
    CodeSource check_src;
    check_src.add(check);

    // distance
    auto* distance = app.add_subcommand("distance", "Randomized distance upper bound");
    CodeSource dist_src;
    dist_src.add(distance);
    std::uint64_t trials = 0, dist_seed = 1;
    std::size_t dist_threads = 0;
    distance->add_option("--trials", trials, "Trials per component (0: size-based default)");
    distance->add_option("--seed", dist_seed, "Seed")->capture_default_str();
    distance->add_option("--threads", dist_threads, "Worker threads (0: all cores)");

    // spectra
    auto* spectra = app.add_subcommand("spectra", "Spectral report of the underlying complex");
    CodeSource spec_src;
    spec_src.add(spectra);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Memory experiment, appended to a CSV");
    CodeSource sim_src;
    NoiseFlags sim_noise;
    DecoderFlags sim_dec;
    RunFlags sim_run;
    std::vector<double> sim_p;
    std::string csv_path;
    sim_src.add(simulate);
    sim_noise.add(simulate);
    sim_dec.add(simulate);
    sim_run.add(simulate);
    simulate->add_option("--p", sim_p, "Physical error rate(s)")->required();
    simulate->add_option("--csv", csv_path, "CSV path (default: <out-dir>/results.csv)");

    // threshold
    auto* threshold = app.add_subcommand("threshold", "Pseudo-threshold search");
    CodeSource thr_src;
    NoiseFlags thr_noise;
    DecoderFlags thr_dec;
    RunFlags thr_run;
    ThresholdOptions thr_opt;
    thr_src.add(threshold);
    thr_noise.add(threshold);
    thr_dec.add(threshold);
    thr_run.add(threshold);
    threshold->add_option("--p-low", thr_opt.p_low, "Bracket low end")->capture_default_str();
    threshold->add_option("--p-high", thr_opt.p_high, "Bracket high end")->capture_default_str();
    threshold->add_option("--width", thr_opt.relative_width, "Relative bracket width to stop at")
        ->capture_default_str();
    threshold->add_option("--scan", thr_opt.scan_points, "Log-grid points over the bracket")->capture_default_str();

    // overhead
    auto* over = app.add_subcommand("overhead", "Space-time overhead");
    CodeSource over_src;
    over_src.add(over);
    std::size_t over_d = 0;
    over->add_option("--d", over_d, "Distance / rounds (default: fixture distance)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Max distance per (delta, d_A, d_B)");
    SweepOptions sweep_opt;
    std::vector<std::string> sweep_targets;
    sweep->add_option("--groups", sweep_opt.groups, "Dihedral n values")->capture_default_str();
    sweep->add_option("--deltas", sweep_opt.deltas, "Delta values")->capture_default_str();
    sweep->add_option("--targets", sweep_targets, "Classical distance pairs as dA,dB");
    sweep->add_option("--instances", sweep_opt.instances, "Instances per group and cell")->capture_default_str();
    sweep->add_option("--trials", sweep_opt.distance_trials, "Distance trials per code")->capture_default_str();
    sweep->add_option("--seed", sweep_opt.seed, "Seed")->capture_default_str();

    // circuit
    auto* circuit = app.add_subcommand("circuit", "Export the extraction circuit and its check matrix");
    CodeSource circ_src;
    NoiseFlags circ_noise;
    double circ_p = 1e-3;
    std::string circ_basis = "Z";
    circ_src.add(circuit);
    circ_noise.add(circuit);
    circuit->add_option("--p", circ_p, "Physical error rate for the priors")->capture_default_str();
    circuit->add_option("--basis", circ_basis, "Memory basis Z | X")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path out = out_dir;
        json result;

        if (construct->parsed()) {
            std::mt19937_64 rng(construct_seed);
            auto opt = [](std::size_t v) { return v ? std::optional<std::size_t>(v) : std::nullopt; };
            Provenance p = sample_provenance(group_n, delta, rng, opt(info_a), opt(info_b));
            p.seed = construct_seed;
            p.label = "D" + std::to_string(group_n) + "-delta" + std::to_string(delta) + "-seed" +
                      std::to_string(construct_seed);
            const CssCode code = build_from_provenance(p);
            const fs::path dir = construct_out.empty() ? out / "codes" / p.label : fs::path(construct_out);
            save_bundle(dir, code);
            result = {{"bundle", dir.string()}, {"parameters", parameters_to_json(parameters(code))},
                      {"provenance", provenance_to_json(p)}};
        } else if (fixture->parsed()) {
            if (fixture_list || fixture_name.empty()) {
                result = json::array();
                for (const auto& f : fixtures())
                    result.push_back({{"name", f.name},
                                      {"reference", {{"n", f.n}, {"k", f.k}, {"d", f.d}}},
                                      {"built_d", f.built_d}});
            } else {
                const CssCode code = load_fixture(fixture_name);
                const auto& info = fixture_info(fixture_name);
                const fs::path dir = fixture_out.empty() ? out / "codes" / fixture_name : fs::path(fixture_out);
                save_bundle(dir, code, {{"reference", {{"n", info.n}, {"k", info.k}, {"d", info.d}}},
                                        {"built_d", info.built_d}});
                result = {{"bundle", dir.string()}, {"parameters", parameters_to_json(parameters(code))}};
            }
        } else if (check->parsed()) {
            const CssCode code = check_src.load();
            result = {{"code", check_src.id()}, {"parameters", parameters_to_json(parameters(code))}};
            if (code.provenance()) result["structure"] = to_json(structural_report(code));
            const bool lx_ok = code.hz().multiply_transpose(code.logical_x()).is_zero();
            const bool lz_ok = code.hx().multiply_transpose(code.logical_z()).is_zero();
            const auto pairing = code.logical_x().multiply_transpose(code.logical_z());
            result["logicals"] = {{"logical_x_commutes", lx_ok},
                                  {"logical_z_commutes", lz_ok},
                                  {"pairing_rank", gf2::rank(pairing)}};
        } else if (distance->parsed()) {
            const CssCode code = dist_src.load();
            DistanceOptions o;
            o.trials = trials;
            o.seed = dist_seed;
            o.threads = dist_threads;
            result = to_json(estimate_distance(code, o));
            result["code"] = dist_src.id();
        } else if (spectra->parsed()) {
            const CssCode code = spec_src.load();
            if (!code.provenance()) throw std::runtime_error("bundle has no provenance; spectra need the complex");
            const auto cx = complex_of(*code.provenance());
            const auto rep = spectral_report(cx);
            result = complex_summary(cx, &rep);
        } else if (simulate->parsed()) {
            const CssCode code = sim_src.load();
            NoiseModel nm = sim_noise.model_for(sim_src);
            const DecoderConfig dc = sim_dec.config();
            const fs::path csv = csv_path.empty() ? out / "results.csv" : fs::path(csv_path);
            result = json::array();
            for (double p : sim_p) {
                nm.p = p;
                const ExperimentResult r = run_memory(code, sim_src.id(), nm, dc, sim_run.options());
                append_csv(csv, r);
                result.push_back(to_json(r));
                std::cerr << csv_row(r) << '\n';
            }
        } else if (threshold->parsed()) {
            const CssCode code = thr_src.load();
            const NoiseModel nm = thr_noise.model_for(thr_src);
            thr_opt.run = thr_run.options();
            try {
                const ThresholdResult r = pseudo_threshold(code, thr_src.id(), nm, thr_dec.config(), thr_opt);
                for (const auto& run : r.runs) append_csv(out / "threshold.csv", run);
                result = to_json(r);
                result["code"] = thr_src.id();
                result["model"] = to_string(nm.kind);
                result["rounds"] = nm.rounds;
            } catch (const ThresholdError& e) {
                json curve = json::array();
                for (const auto& pt : e.curve())
                    curve.push_back({{"p", pt.p}, {"p_L", pt.p_l}, {"ci", pt.ci}, {"target", pt.target}});
                std::cout << json{{"error", e.what()}, {"curve", curve}}.dump(2) << '\n';
                return 2;
            }
        } else if (over->parsed()) {
            const CssCode code = over_src.load();
            result = to_json(overhead(code, over_src.default_distance(over_d)));
            result["code"] = over_src.id();
            if (!over_src.fixture.empty()) {
                // Reference inputs n, k, d with this build's weights, for comparison
                // against the published per-logical overheads.
                const auto& info = fixture_info(over_src.fixture);
                const Overhead o = overhead(code, info.d);
                result["reference_d"] = {{"d", info.d},
                                         {"O_ST", o.o_st},
                                         {"per_reference_k", static_cast<double>(o.o_st) / static_cast<double>(info.k)}};
            }
        } else if (sweep->parsed()) {
            if (!sweep_targets.empty()) {
                sweep_opt.targets.clear();
                for (const auto& t : sweep_targets) {
                    const auto comma = t.find(',');
                    if (comma == std::string::npos) throw CLI::ValidationError("--targets", "expected dA,dB: " + t);
                    sweep_opt.targets.emplace_back(std::stoul(t.substr(0, comma)), std::stoul(t.substr(comma + 1)));
                }
            }
            result = json::array();
            for (const auto& cell : distance_sweep(sweep_opt)) result.push_back(to_json(cell));
            write_json(out / "sweep.json", result);
        } else if (circuit->parsed()) {
            const CssCode code = circ_src.load();
            NoiseModel nm = circ_noise.model_for(circ_src);
            nm.kind = NoiseKind::Circuit;
            nm.p = circ_p;
            const MemoryBasis basis = circ_basis == "X" ? MemoryBasis::X : MemoryBasis::Z;
            if (circ_basis != "X" && circ_basis != "Z") throw CLI::ValidationError("--basis", "use Z or X");
            const Circuit c = build_circuit(code, nm.rounds);
            const fs::path dir = out / "circuits" / (circ_src.id() + "-" + circ_basis);
            fs::create_directories(dir);
            std::ofstream(dir / "circuit.txt") << c.to_text();
            const CircuitDem dem = circuit_to_checkmatrix(c, code, basis, nm);
            save_checkmatrix(dir / "dem", dem.stcm);
            result = {{"dir", dir.string()},
                      {"depth", c.depth()},
                      {"ancillas", c.n_anc()},
                      {"faults", dem.faults.size()},
                      {"mechanisms", dem.stcm.num_mechanisms()},
                      {"detectors", dem.stcm.num_detectors()},
                      {"mismatches", verify_checkmatrix(c, code, basis, dem)}};
        }
        std::cout << result.dump(2) << '\n';
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
