#include "qtanner/distance.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qtanner/rng.hpp"

namespace qtanner {

namespace {

struct Candidate {
    std::size_t weight = SIZE_MAX;
    std::uint64_t trial = 0;
    BitVector word;

    bool better_than(const Candidate& o) const {
        return weight < o.weight || (weight == o.weight && trial < o.trial);
    }
};

/// One trial: permuted RREF of `kernel`, scanning rows for the lightest
/// nontrivial codeword under `pairing` (k x n, rows of the opposite logicals).
Candidate run_trial(const BinaryMatrix& kernel, const BinaryMatrix& pairing, std::uint64_t seed,
                    std::uint64_t trial) {
    std::mt19937_64 rng(derive_seed(seed, trial));
    const std::size_t n = kernel.cols();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle(perm, rng);
    const BinaryMatrix reduced = gf2::rref(kernel.select_columns(perm)).reduced;
    const BinaryMatrix pair_perm = pairing.select_columns(perm);
    Candidate best;
    best.trial = trial;
    for (std::size_t r = 0; r < reduced.rows(); ++r) {
        const std::size_t w = reduced.row_weight(r);
        if (w == 0 || w >= best.weight) continue;
        const BitVector row = reduced.row(r);
        if (!pair_perm.multiply(row).any()) continue;
        best.weight = w;
        BitVector orig(n);
        for (auto c : row.support()) orig.set(perm[c]);
        best.word = std::move(orig);
    }
    return best;
}

ComponentDistance search(const BinaryMatrix& kernel, const BinaryMatrix& pairing, const DistanceOptions& opt,
                         std::uint64_t seed, std::uint64_t trials) {
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    Candidate global;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            Candidate local;
            for (std::uint64_t i = t; i < trials; i += threads) {
                Candidate c = run_trial(kernel, pairing, seed, i);
                if (c.better_than(local)) local = std::move(c);
            }
            std::lock_guard lock(mu);
            if (local.better_than(global)) global = std::move(local);
        });
    for (auto& th : pool) th.join();
    if (global.weight == SIZE_MAX) throw std::logic_error("no nontrivial logical found in any trial");
    return {global.weight, global.word, global.trial};
}

}  // namespace

std::uint64_t default_distance_trials(std::size_t n) { return n <= 100 ? 100000 : 1000000; }

bool is_x_logical(const CssCode& code, const BitVector& v) {
    return !code.hz().multiply(v).any() && code.logical_z().multiply(v).any();
}

bool is_z_logical(const CssCode& code, const BitVector& v) {
    return !code.hx().multiply(v).any() && code.logical_x().multiply(v).any();
}

DistanceEstimate estimate_distance(const CssCode& code, const DistanceOptions& options) {
    if (code.k() == 0) throw std::invalid_argument("no logical operators (k = 0)");
    const std::uint64_t trials = options.trials ? options.trials : default_distance_trials(code.n());
    DistanceEstimate out;
    out.trials = trials;
    out.seed = options.seed;
    out.x = search(gf2::kernel_basis(code.hz()), code.logical_z(), options, derive_seed(options.seed, 0), trials);
    out.z = search(gf2::kernel_basis(code.hx()), code.logical_x(), options, derive_seed(options.seed, 1), trials);
    if (!is_x_logical(code, out.x.witness) || !is_z_logical(code, out.z.witness))
        throw std::logic_error("distance witness failed re-verification");
    out.d_upper = std::min(out.x.d_upper, out.z.d_upper);
    return out;
}

std::optional<SmallLogical> find_logical_up_to_weight(const CssCode& code, std::size_t max_weight) {
    const std::size_t n = code.n();
    for (char type : {'X', 'Z'}) {
        const BinaryMatrix& checks = type == 'X' ? code.hz() : code.hx();
        const BinaryMatrix& pair = type == 'X' ? code.logical_z() : code.logical_x();
        // Column views of the check and pairing matrices.
        std::vector<BitVector> syn(n), act(n);
        for (std::size_t q = 0; q < n; ++q) {
            syn[q] = checks.column(q);
            act[q] = pair.column(q);
        }
        std::vector<std::size_t> idx;
        BitVector s(checks.rows()), a(pair.rows());
        std::optional<SmallLogical> found;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (found) return;
            if (!idx.empty() && !s.any() && a.any()) {
                found = SmallLogical{type, BitVector::from_support(n, idx)};
                return;
            }
            if (idx.size() == max_weight) return;
            for (std::size_t q = start; q < n && !found; ++q) {
                idx.push_back(q);
                s ^= syn[q];
                a ^= act[q];
                rec(q + 1);
                s ^= syn[q];
                a ^= act[q];
                idx.pop_back();
            }
        };
        rec(0);
        if (found) return found;
    }
    return std::nullopt;
}

nlohmann::json to_json(const DistanceEstimate& d) {
    auto comp = [](const ComponentDistance& c) {
        return nlohmann::json{{"d_upper", c.d_upper}, {"witness", c.witness.support()}, {"found_at_trial", c.found_at_trial}};
    };
    return {{"d_upper", d.d_upper}, {"trials", d.trials}, {"seed", d.seed}, {"x", comp(d.x)}, {"z", comp(d.z)}};
}

}  // namespace qtanner
