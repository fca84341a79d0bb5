// Command-line front end: every number it prints comes from one library
// call, and identical invocations produce byte-identical output.
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sepmod/sepmod.hpp>

namespace {

using sepmod::AngleKind;
using sepmod::AngleSearchParams;
using sepmod::Complex;
using sepmod::ComplexMatrix;
using sepmod::Subspace;
using sepmod::Tolerance;
using sepmod::io::format_double;
using sepmod::io::json;

struct RunConfig {
    double tol_rank = 1e-10;
    double tol_eq = 1e-9;
    unsigned seed = 0;
    std::string format = "json";

    [[nodiscard]] Tolerance tolerance() const {
        Tolerance tol;
        tol.rank_rel = tol_rank;
        tol.eq_abs = tol_eq;
        tol.validate();
        return tol;
    }
};

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

/// text rendering: one "key = value" line per scalar, depth-first
void emit_text(const json& j, const std::string& prefix = "") {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            emit_text(value, prefix.empty() ? key : prefix + "." + key);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) emit_text(j[i], prefix + "[" + std::to_string(i) + "]");
    } else if (j.is_number_float()) {
        std::cout << prefix << " = " << format_double(j.get<double>()) << "\n";
    } else {
        std::cout << prefix << " = " << j.dump() << "\n";
    }
}

/// csv rendering of a flat report: scalar leaves become columns
void flatten_for_csv(const json& j, const std::string& prefix, std::vector<std::string>& header,
                     std::vector<std::string>& row) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten_for_csv(value, prefix.empty() ? key : prefix + "." + key, header, row);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            flatten_for_csv(j[i], prefix + "[" + std::to_string(i) + "]", header, row);
    } else {
        header.push_back(prefix);
        row.push_back(j.is_number_float() ? format_double(j.get<double>()) : j.dump());
    }
}

void emit_csv(const json& j) {
    std::vector<std::string> header;
    std::vector<std::string> row;
    flatten_for_csv(j, "", header, row);
    for (size_t i = 0; i < header.size(); ++i) std::cout << (i ? "," : "") << header[i];
    std::cout << "\n";
    for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
    std::cout << "\n";
}

void emit(const RunConfig& cfg, const json& j) {
    if (cfg.format == "json")
        emit_json(j);
    else if (cfg.format == "csv")
        emit_csv(j);
    else
        emit_text(j);
}

/// Loads a subspace pair: one combined file {"h":..., "k":...} or two
/// generator-matrix files.
std::pair<Subspace, Subspace> load_pair(const std::vector<std::string>& paths,
                                        const Tolerance& tol) {
    ComplexMatrix hg;
    ComplexMatrix kg;
    if (paths.size() == 1) {
        const sepmod::io::PairInput in = sepmod::io::load_pair_file(paths[0]);
        hg = in.h_generators;
        kg = in.k_generators;
    } else {
        hg = sepmod::io::matrix_from_json(sepmod::io::load_json_file(paths[0]), paths[0]);
        kg = sepmod::io::matrix_from_json(sepmod::io::load_json_file(paths[1]), paths[1]);
        if (hg.rows() != kg.rows())
            throw sepmod::ParseError("subspace files disagree on the ambient dimension");
    }
    return {sepmod::orthonormalize(hg, tol), sepmod::orthonormalize(kg, tol)};
}

json idempotent_to_json(const sepmod::Idempotent& pi) {
    return {{"matrix", sepmod::io::matrix_to_json(pi.matrix())},
            {"range", sepmod::io::matrix_to_json(pi.range().frame())},
            {"nullspace", sepmod::io::matrix_to_json(pi.nullspace().frame())},
            {"norm", pi.norm()}};
}

struct ModuleScene {
    sepmod::io::ModuleInput input;
    std::map<std::string, sepmod::Submodule> submodules;
    std::vector<sepmod::State> states; ///< file states, or the standard family
};

ModuleScene load_scene(const std::string& path, const Tolerance& tol) {
    ModuleScene scene{sepmod::io::load_module_file(path, tol), {}, {}};
    for (const auto& [name, gens] : scene.input.submodule_generators)
        scene.submodules.emplace(
            name, sepmod::submodule_closure(scene.input.algebra, scene.input.m, gens, tol));
    scene.states = scene.input.states.empty() ? sepmod::standard_state_family(scene.input.algebra, tol)
                                              : scene.input.states;
    return scene;
}

const sepmod::Submodule& pick(const ModuleScene& scene, const std::string& name) {
    const auto it = scene.submodules.find(name);
    if (it == scene.submodules.end())
        throw sepmod::PreconditionError("module file defines no submodule named '" + name + "'");
    return it->second;
}

int run(int argc, char** argv) {
    CLI::App app{"separated pairs of subspaces and Hilbert C*-module submodules: "
                 "angles, oblique idempotents, localization, conditioning studies"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--tol-rank", cfg.tol_rank, "relative rank cutoff for spectral truncation")
        ->capture_default_str();
    app.add_option("--tol-eq", cfg.tol_eq, "absolute tolerance for equality checks")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for quasi-random state grids")->capture_default_str();
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();

    // ---- angles ----
    std::vector<std::string> angles_paths;
    CLI::App* angles = app.add_subcommand("angles", "cosines and separation verdict for a pair");
    angles->add_option("files", angles_paths, "pair file, or two generator-matrix files")
        ->required()
        ->expected(1, 2);

    // ---- separated ----
    std::vector<std::string> sep_paths;
    CLI::App* separated =
        app.add_subcommand("separated", "separation verdict with both lower-bound constants");
    separated->add_option("files", sep_paths, "pair file, or two generator-matrix files")
        ->required()
        ->expected(1, 2);

    // ---- idempotents ----
    std::vector<std::string> idem_paths;
    CLI::App* idem = app.add_subcommand(
        "idempotents", "canonical annihilating idempotent pair for a separated pair");
    idem->add_option("files", idem_paths, "pair file, or two generator-matrix files")
        ->required()
        ->expected(1, 2);

    // ---- pinv ----
    std::vector<std::string> pinv_paths;
    double lambda_re = 2.0;
    double lambda_im = 0.0;
    CLI::App* pinv = app.add_subcommand(
        "pinv", "Moore-Penrose inverse of Pi1 + lambda Pi2 via the closed formula");
    pinv->add_option("files", pinv_paths, "pair file, or two generator-matrix files")
        ->required()
        ->expected(1, 2);
    pinv->add_option("--lambda-re", lambda_re, "real part of lambda")->capture_default_str();
    pinv->add_option("--lambda-im", lambda_im, "imaginary part of lambda")->capture_default_str();

    // ---- localize ----
    std::string localize_path;
    CLI::App* localize = app.add_subcommand(
        "localize", "per-state localization report for a module description file");
    localize->add_option("file", localize_path, "module description file")->required();

    // ---- concordant ----
    std::string conc_path;
    std::string conc_h = "h";
    std::string conc_k = "k";
    CLI::App* concordant =
        app.add_subcommand("concordant", "concordance verdict for a submodule pair");
    concordant->add_option("file", conc_path, "module description file")->required();
    concordant->add_option("--h-name", conc_h, "name of the first submodule")->capture_default_str();
    concordant->add_option("--k-name", conc_k, "name of the second submodule")->capture_default_str();

    // ---- alpha ----
    std::string alpha_path;
    std::string alpha_h = "h";
    std::string alpha_k = "k";
    std::string alpha_kind = "friedrichs";
    Eigen::Index alpha_grid = 48;
    int alpha_refine = 400;
    int alpha_starts = 3;
    std::string landscape_csv;
    CLI::App* alpha =
        app.add_subcommand("alpha", "state-sup of the localized angle cosine for a submodule pair");
    alpha->add_option("file", alpha_path, "module description file")->required();
    alpha->add_option("--h-name", alpha_h, "name of the first submodule")->capture_default_str();
    alpha->add_option("--k-name", alpha_k, "name of the second submodule")->capture_default_str();
    alpha->add_option("--kind", alpha_kind, "which cosine to maximize")
        ->check(CLI::IsMember({"dixmier", "friedrichs"}))
        ->capture_default_str();
    alpha->add_option("--grid", alpha_grid, "pure-state grid samples per block")
        ->capture_default_str();
    alpha->add_option("--refine-iters", alpha_refine, "simplex refinement iteration cap")
        ->capture_default_str();
    alpha->add_option("--starts", alpha_starts, "refined candidates")->capture_default_str();
    alpha->add_option("--landscape-csv", landscape_csv, "write the state-grid landscape here");

    // ---- example ----
    std::string example_name;
    std::vector<Eigen::Index> example_ns{10, 20, 40, 80};
    std::string example_out;
    CLI::App* example =
        app.add_subcommand("example", "conditioning study across grid sizes");
    example->add_option("study", example_name, "which study to run")
        ->required()
        ->check(CLI::IsMember({"shift", "ct", "cx"}));
    example->add_option("--n-list", example_ns, "grid sizes, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    example->add_option("--out", example_out, "write the CSV table here");

    // let global flags (--format, --seed, ...) appear after the subcommand too
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const Tolerance tol = cfg.tolerance();

    if (angles->parsed()) {
        const auto [h, k] = load_pair(angles_paths, tol);
        emit(cfg, sepmod::io::pair_report_to_json(sepmod::is_separated(h, k, tol)));
    } else if (separated->parsed()) {
        const auto [h, k] = load_pair(sep_paths, tol);
        emit(cfg, sepmod::io::pair_report_to_json(sepmod::full_pair_report(h, k, tol)));
    } else if (idem->parsed()) {
        const auto [h, k] = load_pair(idem_paths, tol);
        const sepmod::CanonicalPair pair = sepmod::canonical_pair(h, k, tol);
        const auto sum_check = sepmod::check_sum_is_projection(pair.pi1, pair.pi2, tol);
        emit(cfg, json{{"pi1", idempotent_to_json(pair.pi1)},
                       {"pi2", idempotent_to_json(pair.pi2)},
                       {"p_tilde", sepmod::io::matrix_to_json(pair.p_tilde)},
                       {"basis_condition", pair.basis_condition},
                       {"alpha1", 1.0 / pair.pi1.norm()},
                       {"alpha2", 1.0 / pair.pi2.norm()},
                       {"sum_is_projection", sum_check.sum_is_projection}});
    } else if (pinv->parsed()) {
        const auto [h, k] = load_pair(pinv_paths, tol);
        const sepmod::CanonicalPair pair = sepmod::canonical_pair(h, k, tol);
        const Complex lambda(lambda_re, lambda_im);
        const ComplexMatrix formula = sepmod::mp_linear_combination(pair.pi1, pair.pi2, lambda, tol);
        const ComplexMatrix direct =
            sepmod::moore_penrose(pair.pi1.matrix() + lambda * pair.pi2.matrix(), tol);
        json sweep = json::array();
        for (const auto& row : sepmod::range_stability_sweep(
                 pair.pi1, pair.pi2,
                 {Complex(1, 0), Complex(2, 0), Complex(0.5, 0), Complex(0, 1), Complex(1, 1)},
                 tol)) {
            json jr{{"lambda", {row.lambda.real(), row.lambda.imag()}}, {"rank", row.rank}};
            if (row.min_positive) jr["min_positive"] = *row.min_positive;
            sweep.push_back(std::move(jr));
        }
        emit(cfg, json{{"lambda", {lambda.real(), lambda.imag()}},
                       {"pinv", sepmod::io::matrix_to_json(formula)},
                       {"max_abs_diff_vs_direct", sepmod::operator_norm(formula - direct)},
                       {"range_stability", std::move(sweep)}});
    } else if (localize->parsed()) {
        const ModuleScene scene = load_scene(localize_path, tol);
        json reports = json::array();
        for (const sepmod::State& f : scene.states) {
            const sepmod::LocalizedSpace loc =
                sepmod::localize(scene.input.algebra, scene.input.m, f, tol);
            json subs = json::object();
            for (const auto& [name, sub] : scene.submodules) {
                const Subspace local = sepmod::localize_submodule(loc, sub, tol);
                const auto complement =
                    sepmod::check_complement_localization(sub, {f}, tol).rows.front();
                subs[name] = {{"localized_dim", local.dim()},
                              {"complement_residual", complement.residual},
                              {"complement_matches", complement.equal}};
            }
            reports.push_back({{"dim", loc.dim},
                               {"null_dim", loc.null_dim},
                               {"submodules", std::move(subs)}});
        }
        emit(cfg, json{{"flat_dim", scene.input.m * scene.input.algebra.total_dim()},
                       {"states", reports.size()},
                       {"reports", std::move(reports)}});
    } else if (concordant->parsed()) {
        const ModuleScene scene = load_scene(conc_path, tol);
        const sepmod::Submodule& h = pick(scene, conc_h);
        const sepmod::Submodule& k = pick(scene, conc_k);
        const bool verdict = sepmod::is_concordant(h, k, tol);
        const auto via = sepmod::check_concordance_via_states(h, k, scene.states, tol);
        json rows = json::array();
        for (const auto& row : via.rows)
            rows.push_back({{"residual", row.residual}, {"equal", row.equal}});
        emit(cfg, json{{"concordant", verdict},
                       {"localized_intersections_match", via.all_equal},
                       {"per_state", std::move(rows)}});
    } else if (alpha->parsed()) {
        const ModuleScene scene = load_scene(alpha_path, tol);
        const sepmod::Submodule& h = pick(scene, alpha_h);
        const sepmod::Submodule& k = pick(scene, alpha_k);
        AngleSearchParams params;
        params.grid_per_block = alpha_grid;
        params.max_refine_iters = alpha_refine;
        params.starts = alpha_starts;
        params.seed = cfg.seed;
        params.record_landscape = !landscape_csv.empty();
        const AngleKind kind =
            alpha_kind == "dixmier" ? AngleKind::dixmier : AngleKind::friedrichs;
        const sepmod::AngleEstimate estimate = sepmod::local_angle(h, k, kind, params, tol);
        if (!landscape_csv.empty())
            sepmod::io::write_text_file(landscape_csv, sepmod::io::landscape_to_csv(estimate));
        json j = sepmod::io::angle_estimate_to_json(estimate);
        j["kind"] = alpha_kind;
        j["flat_dixmier"] = sepmod::module_dixmier_cosine(h, k);
        j["flat_friedrichs"] = sepmod::module_friedrichs_cosine(h, k, tol);
        emit(cfg, j);
    } else if (example->parsed()) {
        sepmod::SweepReport report;
        if (example_name == "shift") {
            report = sepmod::shift_example(example_ns, tol);
        } else if (example_name == "ct") {
            report = sepmod::ct_idempotent_example(example_ns, tol);
        } else {
            AngleSearchParams params;
            params.seed = cfg.seed;
            report = sepmod::cx_concordance_example(example_ns, params, tol);
        }
        if (!example_out.empty())
            sepmod::io::write_text_file(example_out, sepmod::io::sweep_report_to_csv(report));
        if (cfg.format == "csv")
            std::cout << sepmod::io::sweep_report_to_csv(report);
        else if (cfg.format == "text")
            emit_text(sepmod::io::sweep_report_to_json(report));
        else
            emit_json(sepmod::io::sweep_report_to_json(report));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sepmod::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const sepmod::InternalInconsistencyError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 4;
    } catch (const sepmod::PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
