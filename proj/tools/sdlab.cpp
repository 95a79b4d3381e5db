#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "sparsedom/dyadic.hpp"
#include "sparsedom/generators.hpp"
#include "sparsedom/io.hpp"
#include "sparsedom/kernels.hpp"
#include "sparsedom/sparsifier.hpp"
#include "sparsedom/verify.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RunConfig {
    std::string preset = "dini-hilbert";
    int dim = 1;
    int m = 8;  // grid exponent
    std::string kernel = "dini";
    double q = kInf;
    double p1 = 1.0, p2 = 2.0, t = 2.0, r = 2.0;
    double lambda = 0.0;  // 0 = library default
    int trials = 20;
    std::uint64_t seed = 1;
    std::string f1 = "random", f2 = "random";
    double fill = 0.1;
    std::string out = "out";
    bool trace = false;

    std::string describe() const {
        std::ostringstream os;
        os << "preset=" << preset << " dim=" << dim << " m=" << m << " kernel=" << kernel
           << " q=" << q << " p1=" << p1 << " p2=" << p2 << " t=" << t << " r=" << r
           << " lambda=" << lambda << " trials=" << trials << " seed=" << seed << " f1=" << f1
           << " f2=" << f2 << " fill=" << fill;
        return os.str();
    }
    std::size_t hash() const { return std::hash<std::string>{}(describe()); }
};

void apply_preset(RunConfig& c) {
    if (c.preset == "dini-hilbert") {
        c.dim = 1;
        c.m = std::max(c.m, 4);
        c.kernel = "dini";
        c.q = kInf;
    } else if (c.preset == "rough-l2") {
        c.dim = 1;
        c.kernel = "rough";
        c.q = 2.0;
    } else if (c.preset == "br-critical") {
        c.dim = 2;
        c.m = std::min(c.m, 7);
        c.kernel = "br";
        c.q = kInf;
    } else {
        throw CLI::ValidationError("unknown preset " + c.preset);
    }
}

void load_config(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open config " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto num = [&] { return val == "inf" ? kInf : std::stod(val); };
        if (key == "preset") c.preset = val;
        else if (key == "dim") c.dim = std::stoi(val);
        else if (key == "m") c.m = std::stoi(val);
        else if (key == "kernel") c.kernel = val;
        else if (key == "q") c.q = num();
        else if (key == "p1") c.p1 = num();
        else if (key == "p2") c.p2 = num();
        else if (key == "t") c.t = num();
        else if (key == "r") c.r = num();
        else if (key == "lambda") c.lambda = num();
        else if (key == "trials") c.trials = std::stoi(val);
        else if (key == "seed") c.seed = std::stoull(val);
        else if (key == "f1") c.f1 = val;
        else if (key == "f2") c.f2 = val;
        else if (key == "fill") c.fill = num();
        else if (key == "out") c.out = val;
        else throw CLI::ValidationError("unknown config key " + key);
    }
}

// exit 2 on any violated domain constraint
void validate(const RunConfig& c) {
    auto fail = [](const std::string& msg) {
        std::cerr << "config error: " << msg << "\n";
        std::exit(2);
    };
    if (c.dim != 1 && c.dim != 2) fail("dim must be 1 or 2");
    if (c.m < 3 || c.m > 14) fail("grid exponent m out of range [3,14]");
    if (c.dim == 2 && c.m > 7) fail("d=2 grids are capped at m=7");
    if (c.p1 < 1.0 || c.p2 < 1.0) fail("averaging exponents must be >= 1");
    if (c.kernel == "rough" && !std::isinf(c.q)) {
        const double qp = c.q / (c.q - 1.0);
        if (c.p2 < qp) {
            std::ostringstream os;
            os << "rough kernel with q=" << c.q << " requires p2 >= q' = " << qp;
            fail(os.str());
        }
    }
    if (!(c.t > 1.0)) fail("weight exponent t must exceed 1");
    if (c.kernel != "dini" && c.kernel != "rough" && c.kernel != "br")
        fail("kernel must be dini, rough or br");
}

KernelFamily build_kernel(const RunConfig& c) {
    const int s_max = c.m - 1;
    if (c.kernel == "dini")
        return dini_family(c.dim, [](double x, double) { return 1.0 / x; }, s_max);
    if (c.kernel == "rough") {
        if (c.dim == 1) return rough_family(SphericalFunction(1, {1.0, -1.0}), s_max);
        std::vector<double> vals(64);
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = i < 32 ? 1.0 : -1.0;
        return rough_family(SphericalFunction(2, vals), s_max);
    }
    return br_family(c.dim, s_max);
}

GridFunction build_input(const RunConfig& c, const std::string& kind, std::uint64_t salt) {
    if (kind == "spike") return gen_spike(c.dim, c.m);
    if (kind == "bump") return gen_bump(c.dim, c.m);
    if (kind == "random") return gen_random(c.dim, c.m, c.seed + salt, c.fill);
    if (kind == "zero") return GridFunction(c.dim, c.m, 0.0);
    std::cerr << "config error: unknown generator " << kind << "\n";
    std::exit(2);
}

// the level-one stopping collection the sparsifier certified, rebuilt from the
// recorded exceptional mask
StoppingCollection level_one_collection(const SparsifyResult& sp, const RunConfig& c) {
    StoppingCollection Q;
    Q.top = sp.collection.tree[0];
    Q.shadow = Mask(c.dim, c.m);
    if (sp.certificate.levels.empty()) return Q;
    const auto ws = whitney_maximal(sp.certificate.levels[0].exceptional);
    std::vector<Cube> members;
    const Box triple = dilate(Q.top, 3.0);
    for (const Cube& L : ws)
        if (triple.contains_box(L.box())) members.push_back(L);
    const auto val = validate_stopping(Q.top, members, c.m, &ws);
    if (val.ok) Q = *val.collection;
    return Q;
}

int cmd_sparsify(const RunConfig& c) {
    const GridFunction f1 = build_input(c, c.f1, 101);
    const GridFunction f2 = build_input(c, c.f2, 202);
    const SparsifyResult sp = sparsify(f1, f2, c.p1, c.p2, c.lambda);
    if (!sp.ok) {
        std::cerr << "sparsifier aborted: " << sp.error << "\n";
        return 3;
    }
    const SparsityReport audit = verify_sparsity(sp.collection);
    std::filesystem::create_directories(c.out);
    nlohmann::json jc = collection_json(sp.collection);
    jc["config_hash"] = c.hash();
    jc["audit_ok"] = audit.ok;
    write_json(jc, c.out + "/collection.json");
    nlohmann::json cert = certificate_json(sp.certificate);
    cert["config_hash"] = c.hash();
    write_json(cert, c.out + "/certificate.json");
    if (c.trace)
        for (std::size_t i = 0; i < sp.certificate.levels.size(); ++i)
            write_mask_pbm(sp.certificate.levels[i].exceptional,
                           c.out + "/exceptional_" + std::to_string(i) + ".pbm");
    std::cout << "cubes=" << sp.collection.tree.size() << " eta=" << sp.collection.eta
              << " lambda=" << sp.certificate.lambda << " levels=" << sp.certificate.levels.size()
              << " audit=" << (audit.ok ? "pass" : "fail") << "\n";
    if (!audit.ok) {
        std::cerr << "sparsity audit failed\n";
        return 2;
    }
    return 0;
}

int suite_domination(const RunConfig& c, const KernelFamily& K) {
    const GridFunction f1 = build_input(c, c.f1, 101);
    const GridFunction f2 = build_input(c, c.f2, 202);
    const DominationReport rep = domination_report(K, f1, f2, c.p1, c.p2);
    nlohmann::json j = domination_json(rep);
    j["config_hash"] = c.hash();
    write_json(j, c.out + "/domination.json");
    if (!rep.ok) return 1;
    for (const auto& e : rep.entries)  // self-audit: ratios recompute
        if (rep.psf_value > 0.0 &&
            std::abs(e.ratio * rep.psf_value - e.form_abs) > 1e-12 * (1.0 + e.form_abs))
            return 1;
    std::cout << "domination max_ratio=" << rep.max_ratio << " psf=" << rep.psf_value << "\n";
    return 0;
}

int suite_lemmas(const RunConfig& c, const KernelFamily& K) {
    const GridFunction f1 = build_input(c, c.f1, 101);
    const GridFunction f2 = build_input(c, c.f2, 202);
    const SparsifyResult sp = sparsify(f1, f2, c.p1, c.p2, c.lambda);
    if (!sp.ok) return 1;
    const StoppingCollection Q = level_one_collection(sp, c);
    const double q = std::isinf(c.q) ? kInf : c.q;
    const LemmaReport rep = lemma_checks(K, Q, c.trials, static_cast<unsigned>(c.seed), q, c.r);
    nlohmann::json j;
    j["uniform"] = rep.uniform_constant;
    j["trivial"] = rep.trivial_constant;
    j["cancellation"] = rep.cancellation_constant;
    j["flagged"] = rep.flagged;
    j["trials"] = rep.trials;
    j["config_hash"] = c.hash();
    write_json(j, c.out + "/lemmas.json");
    std::cout << "lemmas uniform=" << rep.uniform_constant << " trivial=" << rep.trivial_constant
              << " cancellation=" << rep.cancellation_constant << " flagged=" << rep.flagged
              << "\n";
    return rep.flagged == 0 ? 0 : 1;
}

int suite_weights(const RunConfig& c, const KernelFamily& K) {
    const GridFunction f = gen_spike(c.dim, c.m);
    std::vector<std::vector<double>> rows;
    for (int k = -9; k <= 9; ++k) {
        const double a = 0.1 * k;
        GridFunction wg(c.dim, c.m, 0.0);
        const double c0 = static_cast<double>(wg.n) / 2.0;
        const Index rows_n = c.dim == 2 ? wg.n : 1;
        for (Index y = 0; y < rows_n; ++y)
            for (Index x = 0; x < wg.n; ++x) {
                const double dx = static_cast<double>(x) + 0.5 - c0;
                const double dy = c.dim == 2 ? static_cast<double>(y) + 0.5 - c0 : 0.0;
                wg.at(x, y) = std::pow(1.0 + std::hypot(dx, dy), a);
            }
        const Weight w(std::move(wg));
        const double ap = ap_constant(w, c.t);
        const double ratio = weighted_norm_ratio(K, w, c.t, f, 0, K.s_max);
        const double bound = corollary_bound(c.t, kInf, ap);
        rows.push_back({a, ap, ratio, bound});
    }
    write_csv(c.out + "/weights.csv", {"a", "ap", "ratio", "bound"}, rows);
    std::cout << "weights rows=" << rows.size() << "\n";
    return 0;
}

int suite_weak11(const RunConfig& c, const KernelFamily& K) {
    const GridFunction f = gen_spike(c.dim, c.m);
    const double d = weak11_diagnostic(K, f, 0, K.s_max);
    nlohmann::json j;
    j["diagnostic"] = d;
    j["config_hash"] = c.hash();
    write_json(j, c.out + "/weak11.json");
    std::cout << "weak11 diagnostic=" << d << "\n";
    return std::isfinite(d) ? 0 : 1;
}

int suite_decay(const RunConfig& c, const KernelFamily& K) {
    const GridFunction f1 = build_input(c, c.f1, 101);
    const GridFunction f2 = build_input(c, c.f2, 202);
    const SparsifyResult sp = sparsify(f1, f2, c.p1, c.p2, c.lambda);
    if (!sp.ok) return 1;
    const StoppingCollection Q = level_one_collection(sp, c);

    std::mt19937_64 rng(c.seed + 7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BadFunction b;
    for (const Cube& L : Q.members) {
        GridFunction piece(c.dim, c.m, 0.0);
        double mean = 0.0;
        Index cells = 0;
        const Box lb = L.box();
        const Index rows_n = c.dim == 2 ? piece.n : 1;
        for (Index y = 0; y < rows_n; ++y)
            for (Index x = 0; x < piece.n; ++x)
                if (lb.contains_cell(x, y)) {
                    mean += piece.at(x, y) = u(rng);
                    ++cells;
                }
        if (cells == 0) continue;
        mean /= static_cast<double>(cells);
        for (Index y = 0; y < rows_n; ++y)
            for (Index x = 0; x < piece.n; ++x)
                if (lb.contains_cell(x, y)) piece.at(x, y) -= mean;
        b.pieces.push_back({L, piece});
    }
    GridFunction h(c.dim, c.m, 0.0);
    const Index rows_n = c.dim == 2 ? h.n : 1;
    for (Index y = 0; y < rows_n; ++y)
        for (Index x = 0; x < h.n; ++x)
            if (Q.top.box().contains_cell(x, y)) h.at(x, y) = u(rng);
    const DecayReport gap = decay_gap_profile(K, b, h, Q, 0, K.s_max);
    std::vector<std::vector<double>> rows;
    for (auto [j, v] : gap.profile) rows.push_back({static_cast<double>(j), v});
    write_csv(c.out + "/decay_gap.csv", {"j", "value"}, rows);

    nlohmann::json j;
    j["slope"] = gap.slope;
    j["total"] = gap.total;
    j["whole"] = gap.whole;
    j["config_hash"] = c.hash();

    if (c.kernel == "rough") {
        std::vector<double> vals(1 << 9, 0.0);
        std::size_t pos = 0;
        for (int k2 = 1; k2 <= 5; ++k2)
            for (int i = 0; i < (static_cast<int>(vals.size()) >> (k2 + 2)); ++i, ++pos)
                vals[pos] = (k2 % 2 ? 1.0 : -1.0) * std::ldexp(1.0, k2);
        SphericalFunction om(2, vals);
        om.remove_mean();
        const DecayReport split = decay_split_profile(om, std::isinf(c.q) ? 2.0 : c.q, 0.25, 40);
        j["split_sum"] = split.split_sum;
        j["orlicz"] = split.orlicz;
    }
    write_json(j, c.out + "/decay.json");
    std::cout << "decay slope=" << gap.slope << "\n";
    // hard invariant: the gap profile must sum back to the form value
    return std::abs(gap.total - gap.whole) <= 1e-10 * (1.0 + std::abs(gap.whole)) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse domination laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, suite = "all";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--preset", cfg.preset, "dini-hilbert | rough-l2 | br-critical");
        sub->add_option("--seed", cfg.seed, "run seed");
        sub->add_option("--lambda", cfg.lambda, "exceptional-set threshold (0 = default)");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--m", cfg.m, "grid exponent");
        sub->add_option("--trials", cfg.trials, "trial count");
        sub->add_flag("--trace", cfg.trace, "dump per-level exceptional masks");
    };

    CLI::App* sp = app.add_subcommand("sparsify", "build and certify a sparse collection");
    add_common(sp);
    CLI::App* vf = app.add_subcommand("verify", "run verification suites");
    add_common(vf);
    vf->add_option("--suite", suite, "domination | lemmas | weights | weak11 | decay | all");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_preset(cfg);
        if (!config_path.empty()) load_config(cfg, config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    validate(cfg);
    std::filesystem::create_directories(cfg.out);

    if (sp->parsed()) return cmd_sparsify(cfg);

    const KernelFamily K = build_kernel(cfg);
    int rc = 0;
    auto run = [&](const std::string& name, int code) {
        if (suite == name || suite == "all") rc = std::max(rc, code);
    };
    if (suite != "domination" && suite != "lemmas" && suite != "weights" && suite != "weak11" &&
        suite != "decay" && suite != "all") {
        std::cerr << "config error: unknown suite " << suite << "\n";
        return 2;
    }
    if (suite == "domination" || suite == "all") run("domination", suite_domination(cfg, K));
    if (suite == "lemmas" || suite == "all") run("lemmas", suite_lemmas(cfg, K));
    if (suite == "weights" || suite == "all") run("weights", suite_weights(cfg, K));
    if (suite == "weak11" || suite == "all") run("weak11", suite_weak11(cfg, K));
    if (suite == "decay" || suite == "all") run("decay", suite_decay(cfg, K));
    return rc;
}
