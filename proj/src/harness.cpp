#include "qtanner/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "qtanner/distance.hpp"
#include "qtanner/groups.hpp"
#include "qtanner/rng.hpp"

namespace qtanner {

double combined_rate(double l_x, double l_z, std::size_t rounds) {
    if (rounds == 0) throw std::invalid_argument("rounds must be at least 1");
    return (l_x + l_z - l_x * l_z) / static_cast<double>(rounds);
}

double ci_half_width(std::size_t shots, std::size_t failures) {
    if (shots == 0) return 0.0;
    if (failures > shots) throw std::invalid_argument("failures exceed shots");
    const double eta = static_cast<double>(shots);
    const double eta_f = static_cast<double>(failures);
    const double eta_s = eta - eta_f;
    return 1.645 / std::sqrt(eta) * std::sqrt(eta_s * eta_f / (eta * eta));
}

double k_copy_rate(double p, std::size_t k) { return -std::expm1(static_cast<double>(k) * std::log1p(-p)); }

// ---------------------------------------------------------------- memory runs

namespace {

struct BlockCounts {
    std::size_t shots = 0, failures = 0, converged = 0, osd = 0;
};

std::size_t worker_count(std::size_t requested) {
    if (requested) return requested;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace

ComponentStats run_component(const SpaceTimeCheckMatrix& problem, const DecoderConfig& decoder,
                             const RunOptions& options) {
    if (options.max_shots == 0) throw std::invalid_argument("shots must be at least 1");
    if (options.block == 0) throw std::invalid_argument("block size must be at least 1");
    decoder.validate();
    auto graph = std::make_shared<const DecodingGraph>(problem.detectors, problem.priors);
    std::vector<BitVector> logical_rows;
    for (std::size_t o = 0; o < problem.num_observables(); ++o) logical_rows.push_back(problem.logical_action.row(o));

    const std::size_t n_blocks = (options.max_shots + options.block - 1) / options.block;
    std::vector<std::optional<BlockCounts>> done(n_blocks);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::size_t prefix = 0;
    BlockCounts total;

    auto worker = [&] {
        BpOsdDecoder dec(graph, decoder);
        while (!stop.load()) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) break;
            const std::size_t first = b * options.block;
            const std::size_t last = std::min(options.max_shots, first + options.block);
            BlockCounts c;
            for (std::size_t i = first; i < last; ++i) {
                std::mt19937_64 rng(derive_seed(options.seed, i));
                const SampledShot shot = sample_shot(problem, rng);
                ++c.shots;
                if (!shot.detectors.any() && !shot.logicals.any()) {
                    ++c.converged;
                    continue;
                }
                const DecodeResult r = dec.decode(shot.detectors);
                c.converged += r.bp_converged;
                c.osd += r.used_osd;
                for (std::size_t o = 0; o < logical_rows.size(); ++o)
                    if (logical_rows[o].dot(r.error) != shot.logicals.get(o)) {
                        ++c.failures;
                        break;
                    }
            }
            std::lock_guard lock(mu);
            done[b] = c;
            while (prefix < n_blocks && done[prefix] && !stop.load()) {
                const auto& d = *done[prefix];
                total.shots += d.shots;
                total.failures += d.failures;
                total.converged += d.converged;
                total.osd += d.osd;
                ++prefix;
                if (total.failures >= options.target_failures) stop = true;
            }
        }
    };

    const std::size_t n_threads = std::min(worker_count(options.threads), n_blocks);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    ComponentStats s;
    s.shots = total.shots;
    s.failures = total.failures;
    s.bp_converged = total.converged;
    s.osd_calls = total.osd;
    s.mechanisms = problem.num_mechanisms();
    s.detectors = problem.num_detectors();
    return s;
}

ExperimentResult run_memory(const CssCode& code, const std::string& code_id, const NoiseModel& noise,
                            const DecoderConfig& decoder, const RunOptions& options) {
    noise.validate();
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult r;
    r.code = code_id;
    r.noise = noise;
    r.decoder = decoder;
    r.k = code.k();
    r.seed = options.seed;
    RunOptions ox = options, oz = options;
    ox.seed = derive_seed(options.seed, 0);
    oz.seed = derive_seed(options.seed, 1);
    r.x = run_component(build_problem(code, MemoryBasis::X, noise), decoder, ox);
    r.z = run_component(build_problem(code, MemoryBasis::Z, noise), decoder, oz);
    r.l_x = static_cast<double>(r.x.failures) / static_cast<double>(r.x.shots);
    r.l_z = static_cast<double>(r.z.failures) / static_cast<double>(r.z.shots);
    r.p_l = combined_rate(r.l_x, r.l_z, noise.rounds);
    r.ci = ci_half_width(r.x.shots + r.z.shots, r.x.failures + r.z.failures);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

nlohmann::json stats_json(const ComponentStats& s) {
    return {{"shots", s.shots},         {"failures", s.failures},   {"bp_converged", s.bp_converged},
            {"osd_calls", s.osd_calls}, {"mechanisms", s.mechanisms}, {"detectors", s.detectors}};
}

std::string fmt(double v) {
    std::ostringstream o;
    o << std::setprecision(10) << v;
    return o.str();
}

}  // namespace

nlohmann::json to_json(const ExperimentResult& r) {
    return {{"code", r.code},
            {"model", to_string(r.noise.kind)},
            {"p", r.noise.p},
            {"rounds", r.noise.rounds},
            {"weighting", to_string(r.noise.weighting)},
            {"decoder", to_json(r.decoder)},
            {"k", r.k},
            {"x", stats_json(r.x)},
            {"z", stats_json(r.z)},
            {"L_X", r.l_x},
            {"L_Z", r.l_z},
            {"p_L", r.p_l},
            {"ci", r.ci},
            {"seconds", r.seconds},
            {"seed", r.seed}};
}

std::string csv_row(const ExperimentResult& r) {
    std::ostringstream o;
    o << r.code << ',' << to_string(r.noise.kind) << ',' << fmt(r.noise.p) << ',' << r.noise.rounds << ','
      << r.x.shots << ',' << r.z.shots << ',' << r.x.failures << ',' << r.z.failures << ',' << fmt(r.l_x) << ','
      << fmt(r.l_z) << ',' << fmt(r.p_l) << ',' << fmt(r.ci) << ',' << r.seed;
    return o.str();
}

void append_csv(const std::filesystem::path& path, const ExperimentResult& r) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (fresh) out << kCsvHeader << '\n';
    out << csv_row(r) << '\n';
}

// ---------------------------------------------------------------- thresholds

double break_even_target(const CssCode& code, NoiseKind kind, double p, std::size_t depth) {
    const double kp = static_cast<double>(code.k()) * p;
    return kind == NoiseKind::Circuit ? static_cast<double>(depth) * kp / 10.0 : kp;
}

ThresholdResult pseudo_threshold(const CssCode& code, const std::string& code_id, const NoiseModel& noise,
                                 const DecoderConfig& decoder, const ThresholdOptions& options) {
    if (!(options.p_low > 0 && options.p_low < options.p_high && options.p_high < 0.5))
        throw std::invalid_argument("threshold bracket must satisfy 0 < p_low < p_high < 0.5");
    if (!(options.relative_width > 0)) throw std::invalid_argument("relative width must be positive");
    ThresholdResult res;
    res.depth = noise.kind == NoiseKind::Circuit ? build_circuit(code, 1).depth() : 0;

    auto eval = [&](double p) {
        NoiseModel nm = noise;
        nm.p = p;
        ExperimentResult r = run_memory(code, code_id, nm, decoder, options.run);
        ThresholdPoint pt{p, r.p_l, r.ci, break_even_target(code, noise.kind, p, res.depth)};
        res.curve.push_back(pt);
        res.runs.push_back(std::move(r));
        return pt.p_l > pt.target;
    };

    if (options.scan_points < 2) throw std::invalid_argument("scan needs at least 2 points");
    double lo = options.p_low, hi = options.p_high;
    bool above_lo = eval(lo);
    bool found = false;
    const double ratio = std::pow(options.p_high / options.p_low, 1.0 / static_cast<double>(options.scan_points - 1));
    for (std::size_t i = 1; i < options.scan_points && !found; ++i) {
        const double p = i + 1 == options.scan_points ? options.p_high : options.p_low * std::pow(ratio, i);
        const bool above = eval(p);
        if (above != above_lo) {
            hi = p;
            found = true;
        } else {
            lo = p;
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "no sign change of p_L - target in [" << options.p_low << ", " << options.p_high << "]:";
        for (const auto& pt : res.curve) msg << " p=" << pt.p << " p_L=" << pt.p_l << " target=" << pt.target << ';';
        throw ThresholdError(msg.str(), res.curve);
    }
    for (std::size_t step = 0; step < options.max_steps && hi / lo > 1 + options.relative_width; ++step) {
        const double mid = std::sqrt(lo * hi);
        (eval(mid) == above_lo ? lo : hi) = mid;
    }
    res.p_low = lo;
    res.p_high = hi;
    res.p_star = std::sqrt(lo * hi);
    return res;
}

nlohmann::json to_json(const ThresholdResult& r) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& pt : r.curve) curve.push_back({{"p", pt.p}, {"p_L", pt.p_l}, {"ci", pt.ci}, {"target", pt.target}});
    return {{"p_star", r.p_star}, {"p_low", r.p_low}, {"p_high", r.p_high}, {"depth", r.depth}, {"curve", curve}};
}

// ---------------------------------------------------------------- overhead

namespace {

std::size_t max_row_or_column_weight(const BinaryMatrix& h) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < h.rows(); ++r) w = std::max(w, h.row_weight(r));
    const BinaryMatrix t = h.transpose();
    for (std::size_t c = 0; c < t.rows(); ++c) w = std::max(w, t.row_weight(c));
    return w;
}

}  // namespace

Overhead overhead(const CssCode& code, std::size_t d) {
    Overhead o;
    o.n = code.n();
    o.k = code.k();
    o.d = d;
    o.n_anc = code.hx().rows() + code.hz().rows();
    o.d_x = max_row_or_column_weight(code.hx());
    o.d_z = max_row_or_column_weight(code.hz());
    o.space = o.n + o.n_anc;
    o.time = (o.d_x + o.d_z) * d;
    o.o_st = o.space * o.time;
    o.per_logical = o.k ? static_cast<double>(o.o_st) / static_cast<double>(o.k) : 0.0;
    o.circuit_depth = build_circuit(code, 1).depth();
    return o;
}

nlohmann::json to_json(const Overhead& o) {
    return {{"n", o.n},         {"k", o.k},         {"d", o.d},       {"n_anc", o.n_anc},
            {"d_x", o.d_x},     {"d_z", o.d_z},     {"space", o.space}, {"time", o.time},
            {"O_ST", o.o_st},   {"per_logical", o.per_logical}, {"circuit_depth", o.circuit_depth}};
}

// ---------------------------------------------------------------- distance sweep

namespace {

std::optional<ClassicalCode> sample_classical(std::size_t length, std::size_t distance, std::size_t attempts,
                                              std::mt19937_64& rng) {
    for (std::size_t a = 0; a < attempts; ++a) {
        const std::size_t info = 1 + static_cast<std::size_t>(uniform_below(rng, length - 1));
        ClassicalCode c = random_systematic(info, length, rng);
        if (c.distance() == distance) return c;
    }
    return std::nullopt;
}

}  // namespace

std::vector<SweepCell> distance_sweep(const SweepOptions& options) {
    std::vector<SweepCell> cells;
    for (std::size_t delta : options.deltas) {
        if (delta < 2) throw std::invalid_argument("delta must be at least 2");
        for (auto [d_a, d_b] : options.targets) {
            SweepCell cell;
            cell.delta = delta;
            cell.d_a = d_a;
            cell.d_b = d_b;
            const std::uint64_t cell_seed =
                derive_seed(derive_seed(derive_seed(options.seed, delta), d_a), d_b);
            for (std::uint32_t gn : options.groups) {
                const DihedralGroup group(gn);
                try {
                    check_delta_feasible(group, delta);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                for (std::size_t i = 0; i < options.instances; ++i) {
                    const std::uint64_t inst_seed = derive_seed(derive_seed(cell_seed, gn), i);
                    std::mt19937_64 rng(inst_seed);
                    std::pair<GeneratorSet, GeneratorSet> sets;
                    try {
                        sets = sample_tnc_pair(group, delta, rng);
                    } catch (const std::exception&) {
                        continue;
                    }
                    auto ca = sample_classical(delta, d_a, options.classical_attempts, rng);
                    auto cb = sample_classical(delta, d_b, options.classical_attempts, rng);
                    if (!ca || !cb) continue;
                    Provenance prov;
                    prov.dihedral_n = gn;
                    prov.a = format_generator_set(group, sets.first);
                    prov.b = format_generator_set(group, sets.second);
                    prov.parity_a = ca->parity();
                    prov.parity_b = cb->parity();
                    prov.seed = inst_seed;
                    prov.label = "sweep";
                    const CssCode code = build_from_provenance(prov);
                    ++cell.attempted;
                    if (code.k() == 0) continue;
                    ++cell.valid;
                    DistanceOptions dopt;
                    dopt.trials = options.distance_trials;
                    dopt.seed = inst_seed;
                    dopt.threads = 1;
                    const std::size_t d = estimate_distance(code, dopt).d_upper;
                    if (!cell.max_distance || d > *cell.max_distance) {
                        cell.max_distance = d;
                        cell.best = nlohmann::json{{"n", code.n()},
                                                   {"k", code.k()},
                                                   {"d_upper", d},
                                                   {"provenance", provenance_to_json(prov)}};
                    }
                }
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

nlohmann::json to_json(const SweepCell& c) {
    nlohmann::json j{{"delta", c.delta},        {"d_A", c.d_a},   {"d_B", c.d_b},
                     {"attempted", c.attempted}, {"valid", c.valid}};
    j["max_distance"] = c.max_distance ? nlohmann::json(*c.max_distance) : nlohmann::json(nullptr);
    if (c.best) j["best"] = *c.best;
    return j;
}

}  // namespace qtanner
