#include "qtanner/qcode.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "qtanner/groups.hpp"
#include "qtanner/matrix_io.hpp"
#include "qtanner/rng.hpp"

namespace qtanner {

namespace {

/// Incremental echelon basis used to test independence row by row.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

    /// Reduces v against the basis; adds it and returns true when independent.
    bool insert(BitVector v) {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (v.get(pivots_[i])) v ^= rows_[i];
        auto supp = v.support();
        if (supp.empty()) return false;
        const std::size_t p = supp.front();
        for (auto& r : rows_)
            if (r.get(p)) r ^= v;
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }

    std::size_t cols() const { return cols_; }

private:
    std::size_t cols_;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

WeightStats compute_weights(const BinaryMatrix& hx, const BinaryMatrix& hz) {
    WeightStats w;
    for (std::size_t r = 0; r < hx.rows(); ++r) ++w.hx_row_weights[hx.row_weight(r)];
    for (std::size_t r = 0; r < hz.rows(); ++r) ++w.hz_row_weights[hz.row_weight(r)];
    for (const auto* m : {&w.hx_row_weights, &w.hz_row_weights})
        if (!m->empty()) w.max_row_weight = std::max(w.max_row_weight, m->rbegin()->first);
    std::vector<std::size_t> cx(hx.cols(), 0), cz(hz.cols(), 0);
    for (std::size_t r = 0; r < hx.rows(); ++r)
        for (auto c : hx.row_support(r)) ++cx[c];
    for (std::size_t r = 0; r < hz.rows(); ++r)
        for (auto c : hz.row_support(r)) ++cz[c];
    for (std::size_t c = 0; c < cx.size(); ++c) {
        w.max_hx_column_weight = std::max(w.max_hx_column_weight, cx[c]);
        w.max_hz_column_weight = std::max(w.max_hz_column_weight, cz[c]);
        w.max_qubit_degree = std::max(w.max_qubit_degree, cx[c] + cz[c]);
    }
    return w;
}

void check_commutes(const BinaryMatrix& hx, const BinaryMatrix& hz) {
    if (hx.cols() != hz.cols()) throw std::invalid_argument("H_X and H_Z have different column counts");
    if (!hx.multiply_transpose(hz).is_zero()) throw std::invalid_argument("H_X H_Z^T != 0");
}

}  // namespace

BinaryMatrix logical_basis(const BinaryMatrix& kernel_of, const BinaryMatrix& modulo) {
    EchelonBasis basis(kernel_of.cols());
    for (std::size_t r = 0; r < modulo.rows(); ++r) basis.insert(modulo.row(r));
    const BinaryMatrix ker = gf2::kernel_basis(kernel_of);
    BinaryMatrix out(0, kernel_of.cols());
    for (std::size_t r = 0; r < ker.rows(); ++r) {
        BitVector v = ker.row(r);
        if (basis.insert(v)) out.append_row(v);
    }
    return out;
}

CssCode::CssCode(BinaryMatrix hx, BinaryMatrix hz, std::optional<Provenance> provenance)
    : hx_(std::move(hx)), hz_(std::move(hz)), provenance_(std::move(provenance)) {
    check_commutes(hx_, hz_);
    rank_hx_ = gf2::rank(hx_);
    rank_hz_ = gf2::rank(hz_);
    k_ = n() - rank_hx_ - rank_hz_;
    logical_x_ = logical_basis(hz_, hx_);
    const BinaryMatrix lz = logical_basis(hx_, hz_);
    if (logical_x_.rows() != k_ || lz.rows() != k_) throw std::logic_error("logical basis size differs from k");
    // Re-pair Z logicals: Lz' = (P^-1)^T Lz gives Lx Lz'^T = I.
    if (k_ > 0) {
        const BinaryMatrix pairing = logical_x_.multiply_transpose(lz);
        logical_z_ = gf2::inverse(pairing).transpose().multiply(lz);
    } else {
        logical_z_ = lz;
    }
    weights_ = compute_weights(hx_, hz_);
}

CssCode::CssCode(BinaryMatrix hx, BinaryMatrix hz, BinaryMatrix logical_x, BinaryMatrix logical_z,
                 std::optional<Provenance> provenance)
    : hx_(std::move(hx)),
      hz_(std::move(hz)),
      logical_x_(std::move(logical_x)),
      logical_z_(std::move(logical_z)),
      provenance_(std::move(provenance)) {
    check_commutes(hx_, hz_);
    rank_hx_ = gf2::rank(hx_);
    rank_hz_ = gf2::rank(hz_);
    k_ = n() - rank_hx_ - rank_hz_;
    if (logical_x_.rows() != k_ || logical_z_.rows() != k_) throw std::invalid_argument("logical basis needs k rows");
    if (logical_x_.cols() != n() || logical_z_.cols() != n())
        throw std::invalid_argument("logical basis has the wrong length");
    if (!hz_.multiply_transpose(logical_x_).is_zero()) throw std::invalid_argument("logical X anticommutes with H_Z");
    if (!hx_.multiply_transpose(logical_z_).is_zero()) throw std::invalid_argument("logical Z anticommutes with H_X");
    if (gf2::rank(logical_x_.multiply_transpose(logical_z_)) != k_)
        throw std::invalid_argument("logical pairing is singular");
    weights_ = compute_weights(hx_, hz_);
}

CssCode build_tanner_code(const LeftRightCayleyComplex& complex, const CodePair& pair,
                          std::optional<Provenance> provenance) {
    if (pair.delta_a() != complex.delta_a() || pair.delta_b() != complex.delta_b())
        throw std::invalid_argument("code pair lengths do not match generator set sizes");
    const std::size_t nv = complex.vertices_per_side();
    const std::size_t nq = complex.face_count();
    const std::size_t db = complex.delta_b();

    auto assemble = [&](int side, const BinaryMatrix& basis) {
        BinaryMatrix h(nv * basis.rows(), nq);
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t r = 0; r < basis.rows(); ++r)
                for (auto col : basis.row_support(r))
                    h.flip(v * basis.rows() + r, complex.local_face(side, v, col / db, col % db));
        return h;
    };
    BinaryMatrix hz = assemble(0, pair.c0);
    BinaryMatrix hx = assemble(1, pair.c1);
    if (!hx.multiply_transpose(hz).is_zero())
        throw std::logic_error("assembled checks do not commute; local-view orientation mismatch");
    return {std::move(hx), std::move(hz), std::move(provenance)};
}

CssCode build_from_provenance(const Provenance& p) {
    DihedralGroup group(p.dihedral_n);
    GeneratorSet a = parse_generator_set(group, p.a);
    GeneratorSet b = parse_generator_set(group, p.b);
    LeftRightCayleyComplex complex(group, std::move(a), std::move(b));
    CodePair pair = build_pair(ClassicalCode::from_parity(p.parity_a), ClassicalCode::from_parity(p.parity_b));
    return build_tanner_code(complex, pair, p);
}

CodeParameters parameters(const CssCode& code) {
    CodeParameters out;
    out.n = code.n();
    out.k = code.k();
    out.rate = code.n() ? static_cast<double>(code.k()) / static_cast<double>(code.n()) : 0.0;
    out.hx_rows = code.hx().rows();
    out.hz_rows = code.hz().rows();
    out.weights = code.weights();
    if (const auto& p = code.provenance()) {
        const std::size_t delta = p->parity_a.cols();
        if (delta == p->parity_b.cols() && delta > 0) {
            out.delta = delta;
            const double rho = static_cast<double>(delta - gf2::rank(p->parity_a)) / static_cast<double>(delta);
            out.rho = rho;
            out.generator_count_bound = 4.0 * rho * (1.0 - rho) * static_cast<double>(code.n());
        }
    }
    return out;
}

StructuralReport structural_report(const CssCode& code) {
    const auto& p = code.provenance();
    if (!p) throw std::invalid_argument("structural report needs a provenance record");
    StructuralReport r;
    const std::size_t da = p->parity_a.cols(), db = p->parity_b.cols();
    const std::size_t ka = da - gf2::rank(p->parity_a), kb = db - gf2::rank(p->parity_b);
    const std::size_t order = 2 * static_cast<std::size_t>(p->dihedral_n);
    r.commutes = code.hx().multiply_transpose(code.hz()).is_zero();
    r.n = code.n();
    r.n_expected = da * db * order / 2;
    r.max_row_weight = code.weights().max_row_weight;
    r.row_weight_bound = da * db;
    r.max_qubit_degree = code.weights().max_qubit_degree;
    r.qubit_degree_bound = 2 * (ka * kb + (da - ka) * (db - kb));
    r.k = code.k();
    r.k_from_ranks = code.n() - gf2::rank(code.hx()) - gf2::rank(code.hz());
    return r;
}

nlohmann::json to_json(const StructuralReport& r) {
    return {{"commutes", r.commutes},
            {"n", r.n},
            {"n_expected", r.n_expected},
            {"max_row_weight", r.max_row_weight},
            {"row_weight_bound", r.row_weight_bound},
            {"max_qubit_degree", r.max_qubit_degree},
            {"qubit_degree_bound", r.qubit_degree_bound},
            {"k", r.k},
            {"k_from_ranks", r.k_from_ranks},
            {"ok", r.ok()}};
}

Provenance sample_provenance(std::uint32_t dihedral_n, std::size_t delta, std::mt19937_64& rng,
                             std::optional<std::size_t> info_a, std::optional<std::size_t> info_b) {
    const DihedralGroup group(dihedral_n);
    check_delta_feasible(group, delta);
    for (auto info : {info_a, info_b})
        if (info && (*info == 0 || *info >= delta))
            throw std::invalid_argument("classical dimension must lie in [1, delta - 1]");
    const auto [a, b] = sample_tnc_pair(group, delta, rng);
    auto dim = [&](std::optional<std::size_t> fixed) {
        return fixed ? *fixed : 1 + static_cast<std::size_t>(uniform_below(rng, delta - 1));
    };
    const std::size_t ka = dim(info_a);
    const ClassicalCode ca = random_systematic(ka, delta, rng);
    const std::size_t kb = dim(info_b);
    const ClassicalCode cb = random_systematic(kb, delta, rng);
    Provenance p;
    p.dihedral_n = dihedral_n;
    p.a = format_generator_set(group, a);
    p.b = format_generator_set(group, b);
    p.parity_a = ca.parity();
    p.parity_b = cb.parity();
    return p;
}

// ----------------------------------------------------------------- fixtures

namespace {

Provenance make_fixture(std::uint32_t n, std::vector<std::string> a, std::vector<std::string> b,
                        BinaryMatrix ha, BinaryMatrix hb, std::string label) {
    Provenance p;
    p.dihedral_n = n;
    p.a = std::move(a);
    p.b = std::move(b);
    p.parity_a = std::move(ha);
    p.parity_b = std::move(hb);
    p.label = std::move(label);
    return p;
}

// Generator sets are the published ones. Their column orders are unspecified and
// are fixed here (see README, "Fixtures").
std::vector<FixtureInfo> make_fixtures() {
    const BinaryMatrix ha3{{1, 0, 0}, {1, 1, 1}};
    const BinaryMatrix hb3{{1, 1, 1}};
    std::vector<FixtureInfo> out;
    out.push_back({"d4-36", 36, 8, 3, 3,
                   make_fixture(4, {"r", "r^3", "s"}, {"r^2", "sr", "sr^3"}, ha3, hb3, "d4-36")});
    out.push_back({"d6-54", 54, 11, 4, 1,
                   make_fixture(6, {"r^3", "r", "r^5"}, {"sr^2", "sr^4", "sr^5"}, ha3, hb3, "d6-54")});
    out.push_back({"d8-72", 72, 14, 4, 1,
                   make_fixture(8, {"sr^3", "sr", "sr^7"}, {"s", "sr^4", "r^4"}, ha3, hb3, "d8-72")});
    out.push_back({"d8-200", 200, 10, 10, 3,
                   make_fixture(8, {"r", "r^3", "r^5", "r^7", "sr^6"}, {"r^2", "r^6", "sr", "sr^3", "sr^7"},
                                BinaryMatrix{{1, 0, 1, 0, 1}, {1, 1, 0, 0, 0}, {1, 0, 0, 0, 1}},
                                BinaryMatrix{{1, 1, 1, 1, 1}, {0, 1, 0, 0, 1}}, "d8-200")});
    out.push_back({"d10-250", 250, 10, 15, 4,
                   make_fixture(10, {"r", "r^3", "r^7", "r^9", "sr"}, {"r^2", "r^4", "r^6", "r^8", "sr^6"},
                                BinaryMatrix{{1, 1, 1, 0, 1}, {1, 1, 0, 0, 0}, {1, 0, 0, 0, 1}},
                                BinaryMatrix{{1, 1, 1, 0, 0}, {1, 1, 0, 0, 1}}, "d10-250")});
    return out;
}

}  // namespace

const std::vector<FixtureInfo>& fixtures() {
    static const std::vector<FixtureInfo> table = make_fixtures();
    return table;
}

const FixtureInfo& fixture_info(const std::string& name) {
    for (const auto& f : fixtures())
        if (f.name == name) return f;
    std::string known;
    for (const auto& f : fixtures()) known += (known.empty() ? "" : ", ") + f.name;
    throw std::invalid_argument("unknown fixture '" + name + "' (known: " + known + ")");
}

CssCode load_fixture(const std::string& name) { return build_from_provenance(fixture_info(name).provenance); }

// --------------------------------------------------------------------- JSON

nlohmann::json provenance_to_json(const Provenance& p) {
    nlohmann::json j{{"group", "D" + std::to_string(p.dihedral_n)},
                     {"dihedral_n", p.dihedral_n},
                     {"A", p.a},
                     {"B", p.b},
                     {"parity_a", io::to_row_lists(p.parity_a)},
                     {"parity_b", io::to_row_lists(p.parity_b)},
                     {"local_view", "phi_v(a,b) = {v, av, vb, avb} on both sides"},
                     {"label", p.label}};
    j["seed"] = p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr);
    return j;
}

Provenance provenance_from_json(const nlohmann::json& j) {
    Provenance p;
    p.dihedral_n = j.at("dihedral_n").get<std::uint32_t>();
    p.a = j.at("A").get<std::vector<std::string>>();
    p.b = j.at("B").get<std::vector<std::string>>();
    p.parity_a = io::from_row_lists(j.at("parity_a"), p.a.size());
    p.parity_b = io::from_row_lists(j.at("parity_b"), p.b.size());
    if (j.contains("seed") && !j.at("seed").is_null()) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("label")) p.label = j.at("label").get<std::string>();
    return p;
}

nlohmann::json parameters_to_json(const CodeParameters& p) {
    auto hist = [](const std::map<std::size_t, std::size_t>& m) {
        nlohmann::json j = nlohmann::json::object();
        for (auto [w, c] : m) j[std::to_string(w)] = c;
        return j;
    };
    nlohmann::json j{{"n", p.n},
                     {"k", p.k},
                     {"rate", p.rate},
                     {"hx_rows", p.hx_rows},
                     {"hz_rows", p.hz_rows},
                     {"hx_row_weights", hist(p.weights.hx_row_weights)},
                     {"hz_row_weights", hist(p.weights.hz_row_weights)},
                     {"max_row_weight", p.weights.max_row_weight},
                     {"max_hx_column_weight", p.weights.max_hx_column_weight},
                     {"max_hz_column_weight", p.weights.max_hz_column_weight},
                     {"max_qubit_degree", p.weights.max_qubit_degree}};
    j["delta"] = p.delta ? nlohmann::json(*p.delta) : nlohmann::json(nullptr);
    j["rho"] = p.rho ? nlohmann::json(*p.rho) : nlohmann::json(nullptr);
    j["generator_count_bound"] =
        p.generator_count_bound ? nlohmann::json(*p.generator_count_bound) : nlohmann::json(nullptr);
    return j;
}

void save_bundle(const std::filesystem::path& dir, const CssCode& code, const nlohmann::json& extra) {
    std::filesystem::create_directories(dir);
    io::save_alist(dir / "hx.alist", code.hx());
    io::save_alist(dir / "hz.alist", code.hz());
    io::save_alist(dir / "lx.alist", code.logical_x());
    io::save_alist(dir / "lz.alist", code.logical_z());
    nlohmann::json meta{{"parameters", parameters_to_json(parameters(code))}};
    meta["provenance"] = code.provenance() ? provenance_to_json(*code.provenance()) : nlohmann::json(nullptr);
    if (!extra.is_null()) meta["extra"] = extra;
    std::ofstream out(dir / "meta.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "meta.json").string());
    out << meta.dump(2) << '\n';
}

CssCode load_bundle(const std::filesystem::path& dir) {
    std::ifstream in(dir / "meta.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "meta.json").string());
    const nlohmann::json meta = nlohmann::json::parse(in);
    std::optional<Provenance> prov;
    if (meta.contains("provenance") && !meta.at("provenance").is_null())
        prov = provenance_from_json(meta.at("provenance"));
    return {io::load_alist(dir / "hx.alist"), io::load_alist(dir / "hz.alist"), io::load_alist(dir / "lx.alist"),
            io::load_alist(dir / "lz.alist"), std::move(prov)};
}

}  // namespace qtanner
