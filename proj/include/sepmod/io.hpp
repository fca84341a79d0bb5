#ifndef SEPMOD_IO_HPP
#define SEPMOD_IO_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <sepmod/local_angle.hpp>
#include <sepmod/localization.hpp>
#include <sepmod/studies.hpp>
#include <sepmod/submodule.hpp>

namespace sepmod::io {

using nlohmann::json;

/// Fixed-width round-trip formatting so repeated runs emit identical bytes.
inline std::string format_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// matrices
// ---------------------------------------------------------------------------

/// {"rows": r, "cols": c, "entries": [[re, im], ...]} with entries row-major.
inline json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            entries.push_back({m(r, c).real(), m(r, c).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw ParseError(what + ": expected an object with rows, cols, entries");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw ParseError(what + ": rows and cols must be integers");
    const auto rows = j["rows"].get<Eigen::Index>();
    const auto cols = j["cols"].get<Eigen::Index>();
    if (rows < 0 || cols < 0) throw ParseError(what + ": negative dimensions");
    const json& entries = j["entries"];
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw ParseError(what + ": entries must be an array of rows*cols pairs");
    ComplexMatrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c, ++idx) {
            const json& e = entries[static_cast<size_t>(idx)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError(what + ": entry " + std::to_string(idx) +
                                 " must be a [re, im] number pair");
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    if (!all_finite(m)) throw ParseError(what + ": non-finite entry");
    return m;
}

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("short write to " + path);
}

// ---------------------------------------------------------------------------
// input descriptions
// ---------------------------------------------------------------------------

/// A plain subspace pair: {"h": matrix, "k": matrix}, columns generating.
struct PairInput {
    ComplexMatrix h_generators;
    ComplexMatrix k_generators;
};

inline PairInput pair_input_from_json(const json& j) {
    if (!j.is_object() || !j.contains("h") || !j.contains("k"))
        throw ParseError("pair file: expected an object with h and k generator matrices");
    PairInput in{matrix_from_json(j["h"], "pair file: h"), matrix_from_json(j["k"], "pair file: k")};
    if (in.h_generators.rows() != in.k_generators.rows())
        throw ParseError("pair file: h and k must share the ambient dimension");
    return in;
}

inline PairInput load_pair_file(const std::string& path) {
    return pair_input_from_json(load_json_file(path));
}

/// A module scene:
/// {
///   "algebra": {"blocks": [n1, ...]},
///   "m": coordinates,
///   "submodules": {"name": [generator, ...]},
///   "states": [{"densities": [matrix per block]}, ...]   (optional)
/// }
/// where a generator is an array of m coordinates, each an array of
/// per-block matrices.  A flat generator matrix (columns generating, as a
/// single matrix object) is accepted as a shorthand.
struct ModuleInput {
    FiniteCStarAlgebra algebra;
    Eigen::Index m = 1;
    std::map<std::string, std::vector<ModuleVector>> submodule_generators;
    std::vector<State> states;
};

inline ModuleVector module_vector_from_json(const FiniteCStarAlgebra& algebra, Eigen::Index m,
                                            const json& j, const std::string& what) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != m)
        throw ParseError(what + ": expected an array of " + std::to_string(m) + " coordinates");
    std::vector<AlgebraElement> coords;
    for (Eigen::Index c = 0; c < m; ++c) {
        const json& jc = j[static_cast<size_t>(c)];
        if (!jc.is_array() || static_cast<Eigen::Index>(jc.size()) != algebra.num_blocks())
            throw ParseError(what + ": coordinate " + std::to_string(c) + " must list " +
                             std::to_string(algebra.num_blocks()) + " block matrices");
        std::vector<ComplexMatrix> blocks;
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) {
            ComplexMatrix b = matrix_from_json(jc[static_cast<size_t>(i)],
                                               what + ": coordinate " + std::to_string(c) +
                                                   " block " + std::to_string(i));
            if (b.rows() != algebra.block_dim(i) || b.cols() != algebra.block_dim(i))
                throw ParseError(what + ": coordinate " + std::to_string(c) + " block " +
                                 std::to_string(i) + " has the wrong shape");
            blocks.push_back(std::move(b));
        }
        coords.emplace_back(algebra, std::move(blocks));
    }
    return ModuleVector(algebra, std::move(coords));
}

inline json module_vector_to_json(const ModuleVector& x) {
    json coords = json::array();
    for (Eigen::Index c = 0; c < x.m(); ++c) {
        json blocks = json::array();
        for (Eigen::Index i = 0; i < x.algebra().num_blocks(); ++i)
            blocks.push_back(matrix_to_json(x.coord(c).block(i)));
        coords.push_back(std::move(blocks));
    }
    return coords;
}

inline State state_from_json(const FiniteCStarAlgebra& algebra, const json& j,
                             const Tolerance& tol) {
    if (!j.is_object() || !j.contains("densities") || !j["densities"].is_array())
        throw ParseError("state: expected an object with a densities array");
    std::vector<ComplexMatrix> densities;
    for (size_t i = 0; i < j["densities"].size(); ++i)
        densities.push_back(matrix_from_json(j["densities"][i], "state density " + std::to_string(i)));
    return State(algebra, std::move(densities), tol);
}

inline json state_to_json(const State& f) {
    json densities = json::array();
    for (Eigen::Index i = 0; i < f.algebra().num_blocks(); ++i)
        densities.push_back(matrix_to_json(f.density(i)));
    return {{"densities", std::move(densities)}};
}

inline ModuleInput module_input_from_json(const json& j, const Tolerance& tol) {
    if (!j.is_object() || !j.contains("algebra") || !j["algebra"].is_object() ||
        !j["algebra"].contains("blocks"))
        throw ParseError("module file: expected algebra.blocks");
    const json& blocks = j["algebra"]["blocks"];
    if (!blocks.is_array() || blocks.empty())
        throw ParseError("module file: algebra.blocks must be a nonempty array");
    std::vector<Eigen::Index> dims;
    for (const json& b : blocks) {
        if (!b.is_number_integer() || b.get<Eigen::Index>() <= 0)
            throw ParseError("module file: block dimensions must be positive integers");
        dims.push_back(b.get<Eigen::Index>());
    }
    Eigen::Index m = 1;
    if (j.contains("m")) {
        if (!j["m"].is_number_integer() || j["m"].get<Eigen::Index>() <= 0)
            throw ParseError("module file: m must be a positive integer");
        m = j["m"].get<Eigen::Index>();
    }
    ModuleInput in{FiniteCStarAlgebra(std::move(dims)), m, {}, {}};
    const Eigen::Index flat_dim = in.m * in.algebra.total_dim();
    if (j.contains("submodules")) {
        if (!j["submodules"].is_object())
            throw ParseError("module file: submodules must be an object of generator lists");
        for (const auto& [name, gens] : j["submodules"].items()) {
            const std::string what = "module file: submodule " + name;
            std::vector<ModuleVector> vs;
            if (gens.is_object()) { // flat generator-matrix shorthand
                const ComplexMatrix g = matrix_from_json(gens, what);
                if (g.rows() != flat_dim)
                    throw ParseError(what + ": generators need " + std::to_string(flat_dim) +
                                     " rows");
                for (Eigen::Index c = 0; c < g.cols(); ++c)
                    vs.push_back(ModuleVector::from_flat(in.algebra, in.m, g.col(c)));
            } else if (gens.is_array()) {
                for (size_t gi = 0; gi < gens.size(); ++gi)
                    vs.push_back(module_vector_from_json(
                        in.algebra, in.m, gens[gi], what + " generator " + std::to_string(gi)));
            } else {
                throw ParseError(what + ": expected a generator list or matrix");
            }
            in.submodule_generators.emplace(name, std::move(vs));
        }
    }
    if (j.contains("states")) {
        if (!j["states"].is_array()) throw ParseError("module file: states must be an array");
        for (const json& s : j["states"]) in.states.push_back(state_from_json(in.algebra, s, tol));
    }
    return in;
}

inline ModuleInput load_module_file(const std::string& path, const Tolerance& tol) {
    return module_input_from_json(load_json_file(path), tol);
}

/// Builds the submodule generated by the columns of a flat generator matrix
/// (right multiples included, so the result is always invariant).
inline Submodule submodule_from_generators(const FiniteCStarAlgebra& algebra, Eigen::Index m,
                                           const ComplexMatrix& generators, const Tolerance& tol) {
    if (generators.rows() != m * algebra.total_dim())
        throw PreconditionError("submodule generators have the wrong ambient dimension");
    require_finite(generators, "submodule generators");
    std::vector<ModuleVector> vs;
    vs.reserve(static_cast<size_t>(generators.cols()));
    for (Eigen::Index c = 0; c < generators.cols(); ++c)
        vs.push_back(ModuleVector::from_flat(algebra, m, generators.col(c)));
    return submodule_closure(algebra, m, vs, tol);
}

// ---------------------------------------------------------------------------
// report serialization
// ---------------------------------------------------------------------------

inline json pair_report_to_json(const PairReport& r) {
    json j{{"c0", r.c0},
           {"c", r.c},
           {"dim_intersection", r.dim_intersection},
           {"separated", r.separated}};
    if (r.alpha1) j["alpha1"] = *r.alpha1;
    if (r.alpha2) j["alpha2"] = *r.alpha2;
    return j;
}

inline json sum_equivalences_to_json(const SumEquivalences& e) {
    json samples = json::array();
    for (const auto& s : e.samples)
        samples.push_back({{"lambda1", {s.lambda1.real(), s.lambda1.imag()}},
                           {"lambda2", {s.lambda2.real(), s.lambda2.imag()}},
                           {"rank", s.rank},
                           {"matches", s.matches}});
    return {{"common_range", matrix_to_json(e.common_range.frame())},
            {"sum_matches", e.sum_matches},
            {"complement_matches", e.complement_matches},
            {"all_hold", e.all_hold},
            {"samples", std::move(samples)}};
}

inline json angle_estimate_to_json(const AngleEstimate& e) {
    json j{{"value", e.value},
           {"evaluations", e.evaluations},
           {"refine_iterations", e.refine_iterations},
           {"converged", e.converged},
           {"mixed_exceeded_pure", e.mixed_exceeded_pure}};
    if (e.argmax) j["argmax"] = state_to_json(*e.argmax);
    return j;
}

inline std::string landscape_to_csv(const AngleEstimate& e) {
    std::ostringstream out;
    out << "block,index,value\n";
    for (const auto& row : e.landscape)
        out << row.block << "," << row.index << "," << format_double(row.value) << "\n";
    return out.str();
}

inline json study_row_to_json(const StudyRow& r) {
    return {{"n", r.n},
            {"c0", r.c0},
            {"sigma_min", r.sigma_min},
            {"verdicts", r.verdicts},
            {"metrics", r.metrics}};
}

inline json sweep_report_to_json(const SweepReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(study_row_to_json(row));
    return {{"study", r.study},
            {"rows", std::move(rows)},
            {"deviations", r.deviations},
            {"all_verdicts_hold", r.all_verdicts_hold()}};
}

/// One line per grid size: n, the headline cosine, the decay witness, then
/// every verdict (0/1) and every extra metric, in name order.
inline std::string sweep_report_to_csv(const SweepReport& r) {
    std::ostringstream out;
    out << "n,c0,sigma_min";
    if (!r.rows.empty()) {
        for (const auto& [key, value] : r.rows.front().verdicts) out << "," << key;
        for (const auto& [key, value] : r.rows.front().metrics) out << "," << key;
    }
    out << "\n";
    for (const auto& row : r.rows) {
        out << row.n << "," << format_double(row.c0) << "," << format_double(row.sigma_min);
        for (const auto& [key, value] : row.verdicts) out << "," << (value ? 1 : 0);
        for (const auto& [key, value] : row.metrics) out << "," << format_double(value);
        out << "\n";
    }
    return out.str();
}

} // namespace sepmod::io

#endif // SEPMOD_IO_HPP
