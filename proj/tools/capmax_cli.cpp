// Command-line front end: content evaluation, Choquet integrals and norms,
// maximal operators, weight-class estimates, decompositions, factorization,
// inequality checks and dataset generation. All reports are JSON (or CSV
// with --csv); files use the formats documented in FORMATS.md.

#include "capmax/factorize.hpp"
#include "capmax/io.hpp"
#include "capmax/verify.hpp"
#include "capmax/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

using namespace capmax;

namespace {

struct GridArgs {
    int n = 1;
    int depth = 4;
    double root_side = 1.0;

    GridSpec spec() const { return GridSpec(n, depth, {0.0, 0.0, 0.0}, root_side); }
};

void add_grid_flags(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--n", g.n, "grid dimension (generated inputs)");
    cmd->add_option("--depth", g.depth, "grid depth (generated inputs)");
    cmd->add_option("--root-side", g.root_side, "root cube side length");
}

CubeFamilyPolicy parse_family(const std::string& name) {
    if (name == "dyadic") return {FamilyKind::dyadic_only};
    if (name == "shifted") return {FamilyKind::shifted_dyadic};
    if (name == "all") return {FamilyKind::all_grid_cubes};
    throw CLI::ValidationError("--family", "expected dyadic | shifted | all");
}

// Inline generators avoid temp files for the standard inputs:
//   power:<alpha>  ce1:<m>  ce1f:<m>  ce3:<K>  ce3f:<K>  random:<seed>[:<levels>]
// anything else is read as a file path.
GridFunction load_function(const std::string& arg, const GridArgs& grid) {
    const auto colon = arg.find(':');
    if (colon != std::string::npos) {
        const std::string kind = arg.substr(0, colon);
        const std::string rest = arg.substr(colon + 1);
        const GridSpec spec = grid.spec();
        if (kind == "power") return power_weight(spec, std::stod(rest));
        if (kind == "ce1") return counterexample1_pair(spec, std::uint32_t(std::stoul(rest))).w;
        if (kind == "ce1f") return counterexample1_pair(spec, std::uint32_t(std::stoul(rest))).f;
        if (kind == "ce3") return counterexample3_pair(spec, std::stoi(rest)).w;
        if (kind == "ce3f") return counterexample3_pair(spec, std::stoi(rest)).f;
        if (kind == "random") {
            const auto colon2 = rest.find(':');
            const std::uint64_t seed = std::stoull(rest.substr(0, colon2));
            const int levels = colon2 == std::string::npos ? 4 : std::stoi(rest.substr(colon2 + 1));
            return random_weight(spec, seed, levels);
        }
        if (!std::filesystem::exists(arg))
            throw CLI::ValidationError("input", "unknown generator '" + kind + "'");
    }
    return read_grid_function(arg, grid.spec());
}

std::string default_out_dir() {
    const char* env = std::getenv("CAPMAX_OUTDIR");
    return env ? std::string(env) : std::string(".");
}

void emit(const json& j, bool csv, const std::optional<CheckReport>& rep = std::nullopt) {
    if (csv && rep) {
        std::cout << report_csv(*rep);
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

json base_report(const std::string& command, const json& config) {
    json j;
    j["command"] = command;
    j["version"] = version();
    j["config"] = config;
    return j;
}

int exit_code_of(const CheckReport& rep) { return rep.pass.value_or(true) ? 0 : 1; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Choquet integration against dyadic Hausdorff content: maximal operators, "
                 "weight classes, coverings and factorization on dyadic grids"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", CAPMAX_VERSION_STRING);

    bool csv = false;
    app.add_flag("--csv", csv, "emit flat CSV tables instead of JSON");

    GridArgs grid;
    std::string f_arg, w_arg, set_arg, out_arg;
    double delta = 0.5, p = 2.0, lambda = 1.0, beta = 1.0, cap = 8.0;
    std::string family_name = "dyadic";

    try {
        // ---- content ----
        auto* c_content = app.add_subcommand("content", "dyadic Hausdorff content of a cell set");
        std::string content_grid;
        bool trace = false;
        c_content->add_option("--grid", content_grid, "grid JSON (optional, for CSV sets)");
        c_content->add_option("--set", set_arg, "cell set file")->required();
        c_content->add_option("--delta", delta, "content dimension")->required();
        c_content->add_flag("--trace", trace, "also print one optimal cover");

        // ---- integrate ----
        auto* c_int = app.add_subcommand("integrate", "Choquet integral and norms");
        double norm_p = 0.0, weak_p = 0.0;
        bool inf_norm = false;
        c_int->add_option("--f", f_arg, "function file or generator")->required();
        c_int->add_option("--w", w_arg, "weight file or generator");
        c_int->add_option("--set", set_arg, "restrict to this cell set");
        c_int->add_option("--delta", delta)->required();
        c_int->add_option("--p", norm_p, "L^p norm instead of the plain integral");
        c_int->add_option("--weak", weak_p, "weak L^p quasi-norm");
        c_int->add_flag("--inf", inf_norm, "L^inf norm");
        add_grid_flags(c_int, grid);

        // ---- maximal ----
        auto* c_max = app.add_subcommand("maximal", "capacitary maximal function");
        bool lebesgue = false;
        c_max->add_option("--f", f_arg)->required();
        c_max->add_option("--w", w_arg, "weighted-capacity averages with this weight");
        c_max->add_option("--delta", delta)->required();
        c_max->add_option("--family", family_name, "dyadic | shifted | all");
        c_max->add_flag("--lebesgue", lebesgue, "volume averages (classical operator)");
        c_max->add_option("--out", out_arg, "write the output grid function here");
        add_grid_flags(c_max, grid);

        // ---- apconst ----
        auto* c_ap = app.add_subcommand("apconst", "Muckenhoupt-type constant estimate");
        c_ap->add_option("--w", w_arg)->required();
        c_ap->add_option("--p", p)->required();
        c_ap->add_option("--delta", delta)->required();
        c_ap->add_option("--family", family_name);
        add_grid_flags(c_ap, grid);

        // ---- rhi ----
        auto* c_rhi = app.add_subcommand("rhi", "reverse Hoelder exponent search");
        std::vector<double> gammas;
        int sweep_levels = 0;
        c_rhi->add_option("--w", w_arg)->required();
        c_rhi->add_option("--p", p, "accepted for symmetry with apconst");
        c_rhi->add_option("--delta", delta)->required();
        c_rhi->add_option("--family", family_name);
        c_rhi->add_option("--gammas", gammas, "gamma grid (default 2^-1..2^-10)");
        c_rhi->add_option("--cap", cap, "largest admissible K");
        c_rhi->add_option("--sweep", sweep_levels, "extra refinement levels in the sweep");
        add_grid_flags(c_rhi, grid);

        // ---- selfimprove ----
        auto* c_si = app.add_subcommand("selfimprove", "openness: find q < p keeping the weight");
        c_si->add_option("--w", w_arg)->required();
        c_si->add_option("--p", p)->required();
        c_si->add_option("--delta", delta)->required();
        c_si->add_option("--family", family_name);
        add_grid_flags(c_si, grid);

        // ---- embed ----
        auto* c_embed = app.add_subcommand("embed", "estimate at the larger content dimension");
        c_embed->add_option("--w", w_arg)->required();
        c_embed->add_option("--p", p)->required();
        c_embed->add_option("--delta", delta)->required();
        c_embed->add_option("--beta", beta)->required();
        c_embed->add_option("--family", family_name);
        add_grid_flags(c_embed, grid);

        // ---- czdecomp ----
        auto* c_cz = app.add_subcommand("czdecomp", "stopping-time decomposition");
        c_cz->add_option("--w", w_arg)->required();
        c_cz->add_option("--lambda", lambda)->required();
        c_cz->add_option("--delta", delta)->required();
        add_grid_flags(c_cz, grid);

        // ---- sparsecover ----
        auto* c_sc = app.add_subcommand("sparsecover", "sparse covering of a cell set");
        c_sc->add_option("--set", set_arg)->required();
        c_sc->add_option("--delta", delta)->required();

        // ---- jones ----
        auto* c_jones = app.add_subcommand("jones", "factorization into A_1-type factors");
        c_jones->require_subcommand(1);
        auto* c_jf = c_jones->add_subcommand("factorize", "w = w0 w1^{1-p}");
        std::string g_arg, out_prefix;
        double A_value = 0.0;
        c_jf->add_option("--w", w_arg)->required();
        c_jf->add_option("--p", p)->required();
        c_jf->add_option("--delta", delta)->required();
        c_jf->add_option("--A", A_value, "series scale (default: probed)");
        c_jf->add_option("--g", g_arg, "seed function (default: constant one)");
        c_jf->add_option("--out-prefix", out_prefix, "write <prefix>{w0,w1,phi}.json");
        c_jf->add_option("--family", family_name);
        add_grid_flags(c_jf, grid);
        auto* c_js = c_jones->add_subcommand("synthesize", "product of two A_1-type weights");
        std::string w0_arg, w1_arg;
        c_js->add_option("--w0", w0_arg)->required();
        c_js->add_option("--w1", w1_arg)->required();
        c_js->add_option("--p", p)->required();
        c_js->add_option("--delta", delta)->required();
        c_js->add_option("--family", family_name);
        add_grid_flags(c_js, grid);

        // ---- verify ----
        auto* c_verify = app.add_subcommand("verify", "inequality checks");
        std::string check_id;
        double q_exp = 1.0, alpha = 0.0;
        std::vector<int> levels{4, 6, 8};
        std::uint64_t seed = 1;
        c_verify->add_option("check", check_id,
                             "fubini | strong | weak | weakspace | classical | pointwise | powertrend")
            ->required();
        c_verify->add_option("--f", f_arg, "function (default random:1)");
        c_verify->add_option("--w", w_arg, "weight (default power:0)");
        c_verify->add_option("--p", p);
        c_verify->add_option("--q", q_exp);
        c_verify->add_option("--delta", delta)->required();
        c_verify->add_option("--alpha", alpha, "power-weight exponent (powertrend)");
        c_verify->add_option("--levels", levels, "resolution sweep (powertrend)");
        c_verify->add_option("--family", family_name);
        c_verify->add_option("--seed", seed);
        add_grid_flags(c_verify, grid);

        // ---- counterexample ----
        auto* c_ce = app.add_subcommand("counterexample", "paired constructions 1 | 2 | 3");
        int which = 1, K = 4, ce_n = 2, ce_L = 6;
        std::vector<std::uint32_t> ms{4};
        c_ce->add_option("which", which, "1, 2 or 3")->required();
        c_ce->add_option("--m", ms, "subdivision counts (1 and 2)");
        c_ce->add_option("--n", ce_n, "dimension (1 and 3)");
        c_ce->add_option("--delta", delta)->required();
        c_ce->add_option("--beta", beta, "second content dimension (2)");
        c_ce->add_option("--K", K, "number of slabs (3)");
        c_ce->add_option("--L", ce_L, "grid depth (3)");

        // ---- generate ----
        auto* c_gen = app.add_subcommand("generate", "write standard input files");
        std::string kind, out_path;
        c_gen->add_option("kind", kind,
                          "power:<a> | ce1:<m> | ce1f:<m> | ce3:<K> | ce3f:<K> | random:<seed>[:<levels>]")
            ->required();
        c_gen->add_option("--out", out_path, "output path (default derived from the kind)");
        bool gen_csv = false;
        c_gen->add_flag("--as-csv", gen_csv, "write CSV instead of JSON");
        add_grid_flags(c_gen, grid);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2; // usage errors exit 2, --help/--version exit 0
        }

        const CubeFamilyPolicy family = parse_family(family_name);

        if (*c_content) {
            CellSet E = read_cell_set(set_arg);
            if (!content_grid.empty()) {
                const GridSpec gs = grid_spec_from_json(json::parse(read_text(content_grid)));
                if (!gs.same_grid(E.spec())) throw std::invalid_argument("content: mismatched grids");
            }
            json out = base_report("content", {{"set", set_arg}, {"delta", delta}});
            out["value"] = dyadic_content(E, delta);
            if (trace) {
                out["cover"] = json::array();
                for (const DyadicCube& qc : optimal_cover(E, delta))
                    out["cover"].push_back(to_json(E.spec(), qc));
            }
            emit(out, csv);
            return 0;
        }

        if (*c_int) {
            GridFunction f = load_function(f_arg, grid);
            std::optional<GridFunction> w;
            if (!w_arg.empty()) w = load_function(w_arg, grid);
            std::optional<CellSet> E;
            if (!set_arg.empty()) E = read_cell_set(set_arg);
            json out = base_report("integrate", {{"f", f_arg},
                                                 {"w", w_arg},
                                                 {"delta", delta},
                                                 {"p", norm_p},
                                                 {"weak", weak_p},
                                                 {"inf", inf_norm}});
            if (inf_norm) {
                out["value"] = lp_norm(f, kInfinityP, delta, w, E);
            } else if (weak_p > 0.0) {
                out["value"] = weak_lp_norm(f, weak_p, delta, w, E);
            } else if (norm_p > 0.0) {
                out["value"] = lp_norm(f, norm_p, delta, w, E);
            } else {
                const Capacity C = w ? Capacity::weighted(ContentParams(f.spec().n, delta), *w)
                                     : Capacity::content(f.spec().n, delta);
                out["value"] = choquet_integral(f, E ? *E : CellSet::full_set(f.spec()), C);
            }
            emit(out, csv);
            return 0;
        }

        if (*c_max) {
            GridFunction f = load_function(f_arg, grid);
            GridFunction m = [&] {
                if (lebesgue) return lebesgue_maximal(f, family);
                if (!w_arg.empty()) {
                    GridFunction w = load_function(w_arg, grid);
                    return maximal(
                        f, MaximalConfig{Capacity::weighted(ContentParams(f.spec().n, delta), w),
                                         family});
                }
                return maximal(f, delta, family);
            }();
            if (!out_arg.empty()) {
                write_grid_function(out_arg, m);
                json out = base_report("maximal", {{"f", f_arg}, {"delta", delta}});
                out["written"] = out_arg;
                emit(out, csv);
            } else {
                emit(to_json(m), csv);
            }
            return 0;
        }

        auto ap_to_json = [&](const ApEstimate& est) {
            json j;
            j["p"] = est.p;
            j["delta"] = est.delta;
            j["value"] = est.value;
            j["family"] = family_name;
            j["argmax"] = {{"lo", std::vector<std::uint32_t>(est.argmax.lo.begin(),
                                                             est.argmax.lo.end())},
                           {"size", est.argmax.size}};
            return j;
        };

        if (*c_ap) {
            GridFunction w = load_function(w_arg, grid);
            const ApEstimate est =
                p > 1.0 ? ap_constant(w, p, delta, family) : a1_constant(w, delta, family);
            json out = base_report("apconst", {{"w", w_arg}, {"p", p}, {"delta", delta}});
            out["estimate"] = ap_to_json(est);
            emit(out, csv);
            return 0;
        }

        if (*c_rhi) {
            GridFunction w = load_function(w_arg, grid);
            std::vector<GridFunction> sweep{w};
            for (int k = 1; k <= sweep_levels; ++k) sweep.push_back(w.refined(k));
            const auto est =
                reverse_holder(std::span<const GridFunction>(sweep.data(), sweep.size()), delta,
                               family, gammas.empty() ? default_gamma_grid() : gammas, cap);
            json out = base_report("rhi", {{"w", w_arg}, {"delta", delta}, {"cap", cap}});
            out["found"] = est.found;
            out["gamma"] = est.gamma;
            out["K"] = est.K;
            out["scan"] = json::array();
            for (auto [g, K] : est.scan) out["scan"].push_back({{"gamma", g}, {"K", K}});
            emit(out, csv);
            return est.found ? 0 : 1;
        }

        if (*c_si) {
            GridFunction w = load_function(w_arg, grid);
            const auto res = self_improve(w, p, delta, family);
            json out = base_report("selfimprove", {{"w", w_arg}, {"p", p}, {"delta", delta}});
            out["q"] = res.q;
            out["gamma"] = res.rhi.gamma;
            out["estimate_q"] = ap_to_json(res.estimate);
            emit(out, csv);
            return 0;
        }

        if (*c_embed) {
            GridFunction w = load_function(w_arg, grid);
            const auto res = delta_embedding(w, p, delta, beta, family);
            json out =
                base_report("embed", {{"w", w_arg}, {"p", p}, {"delta", delta}, {"beta", beta}});
            out["p_prime"] = res.p_prime;
            out["estimate_beta"] = ap_to_json(res.at_beta);
            out["ratio_vs_delta"] = res.ratio_vs_delta;
            emit(out, csv);
            return 0;
        }

        if (*c_cz) {
            GridFunction w = load_function(w_arg, grid);
            const auto dec = cz_decompose(w, DyadicCube{}, lambda, delta);
            json out =
                base_report("czdecomp", {{"w", w_arg}, {"lambda", lambda}, {"delta", delta}});
            out["decomposition"] = to_json(w.spec(), dec);
            double worst = 0.0;
            for (std::uint64_t i : dec.residual.indices()) worst = std::max(worst, w[i]);
            out["max_residual_value"] = worst;
            emit(out, csv);
            return 0;
        }

        if (*c_sc) {
            CellSet E = read_cell_set(set_arg);
            const auto dec = sparse_cover(E, delta);
            const double he = dyadic_content(E, delta);
            double total = 0.0;
            for (const auto& d : dec.diagnostics) total += d.content;
            json out = base_report("sparsecover", {{"set", set_arg}, {"delta", delta}});
            out["decomposition"] = to_json(E.spec(), dec);
            out["set_content"] = he;
            out["cover_content_sum"] = total;
            out["sum_bound_2x"] = total <= 2.0 * he * (1 + 1e-12);
            emit(out, csv);
            return out["sum_bound_2x"].get<bool>() ? 0 : 1;
        }

        if (*c_jf) {
            GridFunction w = load_function(w_arg, grid);
            std::optional<GridFunction> g;
            if (!g_arg.empty()) g = load_function(g_arg, grid);
            std::optional<double> A;
            if (A_value > 0.0) A = A_value;
            const auto res = jones_factorize(w, p, delta, g, A, 64, 1e-9, family);
            json out = base_report("jones-factorize",
                                   {{"w", w_arg}, {"p", p}, {"delta", delta}, {"A", A_value}});
            out["A"] = res.A;
            out["terms"] = res.terms;
            out["tail_norm"] = res.tail_norm;
            out["a1_w0"] = ap_to_json(res.a1_w0);
            out["a1_w1"] = ap_to_json(res.a1_w1);
            double worst = 0.0;
            for (std::uint64_t i = 0; i < w.size(); ++i)
                worst = std::max(
                    worst, std::abs(res.w0[i] * std::pow(res.w1[i], 1.0 - p) - w[i]) / w[i]);
            out["reconstruction_error"] = worst;
            if (!out_prefix.empty()) {
                const std::string dir = default_out_dir();
                write_grid_function(dir + "/" + out_prefix + "w0.json", res.w0);
                write_grid_function(dir + "/" + out_prefix + "w1.json", res.w1);
                write_grid_function(dir + "/" + out_prefix + "phi.json", res.phi);
                out["written"] = dir + "/" + out_prefix + "{w0,w1,phi}.json";
            }
            emit(out, csv);
            return worst <= 1e-10 ? 0 : 1;
        }

        if (*c_js) {
            GridFunction w0 = load_function(w0_arg, grid);
            GridFunction w1 = load_function(w1_arg, grid);
            const auto res = jones_synthesize(w0, w1, p, delta, family);
            json out = base_report("jones-synthesize",
                                   {{"w0", w0_arg}, {"w1", w1_arg}, {"p", p}, {"delta", delta}});
            out["estimate"] = ap_to_json(res.estimate);
            out["bound"] = res.bound;
            out["holds"] = res.holds;
            emit(out, csv);
            return res.holds ? 0 : 1;
        }

        if (*c_verify) {
            GridFunction w = load_function(w_arg.empty() ? "power:0" : w_arg, grid);
            GridFunction f = load_function(f_arg.empty() ? "random:1" : f_arg, grid);
            CheckReport rep;
            if (check_id == "fubini")
                rep = check_fubini_substitute(f, w, p, delta, family);
            else if (check_id == "strong")
                rep = check_strong_type(f, w, p, delta, family);
            else if (check_id == "weak")
                rep = check_weak_type(f, w, p, delta, family);
            else if (check_id == "weakspace")
                rep = check_weak_space_boundedness(f, w, p, delta, family);
            else if (check_id == "classical")
                rep = check_classical_corollary(f, w, p, q_exp, delta, family);
            else if (check_id == "pointwise")
                rep = check_pointwise_fubini_condition(w, delta, family, 50, seed);
            else if (check_id == "powertrend")
                rep = power_weight_trend(alpha, p, delta, levels, family);
            else
                throw CLI::ValidationError("check", "unknown check '" + check_id + "'");
            json out = base_report("verify", {{"check", check_id},
                                              {"f", f_arg},
                                              {"w", w_arg},
                                              {"p", p},
                                              {"delta", delta},
                                              {"seed", seed}});
            out["report"] = to_json(rep);
            emit(out, csv, rep);
            return exit_code_of(rep);
        }

        if (*c_ce) {
            CheckReport rep;
            if (which == 1)
                rep = counterexample_1(ms, ce_n, delta);
            else if (which == 2)
                rep = counterexample_2(ms, delta, beta);
            else if (which == 3)
                rep = counterexample_3(K, ce_n, delta, ce_L);
            else
                throw CLI::ValidationError("which", "expected 1, 2 or 3");
            json out = base_report("counterexample", {{"which", which}, {"delta", delta}});
            out["report"] = to_json(rep);
            emit(out, csv, rep);
            return exit_code_of(rep);
        }

        if (*c_gen) {
            GridFunction f = load_function(kind, grid);
            std::string path = out_path;
            if (path.empty()) {
                std::string name = kind;
                for (char& ch : name)
                    if (ch == ':') ch = '_';
                path = default_out_dir() + "/" + name + (gen_csv ? ".csv" : ".json");
            }
            if (gen_csv)
                write_text(path, grid_function_to_csv(f));
            else
                write_grid_function(path, f);
            json out = base_report("generate", {{"kind", kind}});
            out["written"] = path;
            emit(out, csv);
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
