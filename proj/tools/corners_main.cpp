// corners: face lattices, dual complexes, exponential-map and localization
// certificates, and symbol-tuple checks, with JSON reports on stdout.
//
// Exit codes: 0 check passed, 1 check failed, 2 input error, 3 numerical
// failure.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "corners/io.hpp"

using namespace corners;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalFailure = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Options {
    std::string complex_path;
    std::string polytope_path;
    std::string atlas_path;
    std::string diagram_atlas_path;
    std::string family_path;
    std::string tuple_path;
    std::string symbol_path;
    std::string check;
    bool check_poset = false;
    double tol = 1e-9;
    int grid = 64;
    unsigned seed = 0;
    std::string radii = "1.0,9";
    double annulus = 8.0;
    int node = 0;
    int face = -1;
    double eps = 0.25;
    int sweep = 0;
};

json config_echo(const Options& opt) {
    json j;
    j["tol"] = opt.tol;
    j["grid"] = opt.grid;
    j["seed"] = opt.seed;
    j["radii"] = opt.radii;
    j["annulus"] = opt.annulus;
    return j;
}

CornerComplex load_complex(const Options& opt) {
    if (!opt.polytope_path.empty()) return polytope_from_json(slurp(opt.polytope_path));
    if (opt.complex_path.empty()) throw std::invalid_argument("no complex or polytope input");
    return complex_from_json(slurp(opt.complex_path));
}

std::vector<double> parse_radii(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("radii must be r0,k");
    const double r0 = std::stod(text.substr(0, comma));
    const int k = std::stoi(text.substr(comma + 1));
    std::vector<double> radii;
    for (int i = 0; i < k; ++i) radii.push_back(r0 * std::pow(2.0, -i));
    return radii;
}

int run_validate(const Options& opt) {
    const CornerComplex complex = load_complex(opt);
    const auto violations = validate(complex);
    json j;
    j["format"] = 1;
    j["command"] = "validate";
    j["config"] = config_echo(opt);
    j["face_count"] = complex.face_count();
    j["depth"] = depth(complex);
    j["violations"] = json::array();
    for (const auto& v : violations)
        j["violations"].push_back({{"invariant", v.invariant}, {"detail", v.detail}});
    j["valid"] = violations.empty();
    std::cout << j.dump(2) << "\n";
    return kExitPass; // validation reports are data
}

int run_dual(const Options& opt) {
    const CornerComplex complex = load_complex(opt);
    const DualComplex dual = dualize(complex);
    json j = json::parse(dual_to_json(dual, complex));
    j["command"] = "dual";
    j["config"] = config_echo(opt);

    int exit_code = kExitPass;
    if (opt.check_poset) {
        json cert = json::array();
        bool ok = true;
        json counterexample;
        for (int a = 0; a < dual.stratum_count() && ok; ++a)
            for (int b = 0; b < dual.stratum_count() && ok; ++b) {
                const bool dual_adj = dual.adjacency.count({a, b}) > 0;
                const bool src_adj = complex.adjacent(dual.strata[b].source_face,
                                                      dual.strata[a].source_face);
                if (dual_adj != src_adj) {
                    ok = false;
                    counterexample = {{"stratum_a", a}, {"stratum_b", b}};
                }
            }
        for (int a = 0; a < dual.stratum_count(); ++a)
            cert.push_back({{"stratum", a}, {"source_face", dual.strata[a].source_face}});
        j["anti_isomorphism"] = {{"holds", ok}, {"bijection", cert}};
        if (!ok) {
            j["anti_isomorphism"]["counterexample"] = counterexample;
            exit_code = kExitCheckFailed;
        }
    }
    std::cout << j.dump(2) << "\n";
    return exit_code;
}

int run_expmap(const Options& opt) {
    if (opt.atlas_path.empty()) throw std::invalid_argument("expmap needs --atlas");
    const AtlasFile atlas = atlas_from_json(slurp(opt.atlas_path));
    GlueOptions gopt;
    gopt.eps = opt.eps;
    const ExpMapGrid grid = glue_exp_maps(atlas.charts, atlas.partition, atlas.face, gopt);

    json j;
    j["format"] = 1;
    j["command"] = "expmap";
    j["config"] = config_echo(opt);
    j["face"] = atlas.face;
    j["eps"] = grid.eps;
    j["zero_section_exact"] = grid.zero_section_exact;
    j["min_abs_jacobian"] = grid.min_abs_jacobian;
    j["injective_near_face"] = grid.injective_near_face;
    j["min_image_separation"] = grid.min_image_separation;
    j["near_face_rho"] = grid.near_face_rho;

    int exit_code = grid.zero_section_exact && grid.injective_near_face ? kExitPass
                                                                        : kExitCheckFailed;
    if (!opt.diagram_atlas_path.empty()) {
        const AtlasFile deeper = atlas_from_json(slurp(opt.diagram_atlas_path));
        const ExpMap f_j(atlas.charts, atlas.partition, atlas.face, opt.eps);
        const ExpMap f_l(deeper.charts, deeper.partition, deeper.face, deeper.eps);
        std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
        for (int i = 0; i < 10; ++i)
            for (int k = 0; k < 10; ++k) {
                Eigen::VectorXd u = Eigen::VectorXd::Constant(
                    std::max(1, f_j.base_dim()), 0.02 + 0.45 * i / 10.0);
                u.conservativeResize(f_j.base_dim());
                Eigen::VectorXd rho = Eigen::VectorXd::Constant(
                    f_j.fiber_dim(), 0.01 + (opt.eps - 0.01) * k / 10.0);
                samples.push_back({u, rho});
            }
        const DiagramResidual res = check_compatibility_diagram(f_j, f_l, samples, opt.tol);
        j["diagram"] = {{"max_residual", res.max_residual}, {"pass", res.pass}};
        if (!res.pass) exit_code = kExitCheckFailed;
    }
    std::cout << j.dump(2) << "\n";
    return exit_code;
}

int run_localize(const Options& opt) {
    if (opt.family_path.empty()) throw std::invalid_argument("localize needs --family");
    const FamilyFile file = family_from_json(slurp(opt.family_path));
    json j;
    j["format"] = 1;
    j["command"] = "localize";
    j["check"] = opt.check;
    j["config"] = config_echo(opt);
    int exit_code = kExitPass;

    if (opt.check == "norm") {
        std::vector<int> all(file.space.size());
        for (int i = 0; i < file.space.size(); ++i) all[i] = i;
        j["restricted_norm_full"] = restricted_norm(file.family, file.space, all);
    } else if (opt.check == "ideal") {
        if (opt.node < 0 || opt.node >= file.space.size())
            throw std::invalid_argument("node out of range");
        const auto profile = ideal_membership_profile(file.family, file.space, opt.node,
                                                      parse_radii(opt.radii), opt.tol);
        j["profile"] = {{"radii", profile.radii},
                        {"values", profile.values},
                        {"in_ideal", profile.in_ideal}};
        if (!profile.in_ideal) exit_code = kExitCheckFailed;
    } else if (opt.check == "continuity") {
        if (file.centers.empty())
            throw std::invalid_argument("continuity check needs centers and reps");
        LocalRepFamily F;
        F.centers = file.centers;
        F.reps = file.reps;
        const double scale = file.hood_radius_scale;
        F.hood_radius = [scale](double e) { return scale * e; };
        const auto report = family_continuity(F, file.space, file.eps);
        j["continuity"] = {{"pass", report.pass},
                           {"worst_value", report.worst_value},
                           {"worst_pair", {report.worst_a, report.worst_b}},
                           {"eps", file.eps}};
        if (!report.pass) exit_code = kExitCheckFailed;
    } else if (opt.check == "fredholm") {
        if (file.centers.empty())
            throw std::invalid_argument("fredholm check needs centers and reps");
        LocalRepFamily F;
        F.centers = file.centers;
        F.reps = file.reps;
        const double scale = file.hood_radius_scale;
        F.hood_radius = [scale](double e) { return scale * e; };
        const auto report = fredholm_check(file.family, F, file.space, opt.tol);
        j["fredholm"] = {{"verdict", report.fredholm},
                         {"min_singular", report.min_singular},
                         {"witness_center", report.witness_center},
                         {"witness_param", report.witness_param},
                         {"inverse_residual", report.inverse_residual},
                         {"rank_budget", report.rank_budget}};
        if (!report.fredholm) exit_code = kExitCheckFailed;
    } else {
        throw std::invalid_argument("unknown localize check: " + opt.check);
    }
    std::cout << j.dump(2) << "\n";
    return exit_code;
}

int run_symbols_check(const Options& opt) {
    if (opt.tuple_path.empty()) throw std::invalid_argument("symbols check needs --tuple");
    const SymbolTuple tuple = tuple_from_json(slurp(opt.tuple_path));
    if (!opt.complex_path.empty()) {
        const CornerComplex complex = complex_from_json(slurp(opt.complex_path));
        if (complex.face_count() != tuple.complex.face_count())
            throw std::invalid_argument("tuple does not match the given complex");
    }
    const CompatReport c1 = check_comp1(tuple, opt.tol);
    const CompatReport c2 = check_comp2(tuple, opt.tol);
    json j;
    j["format"] = 1;
    j["command"] = "symbols-check";
    j["config"] = config_echo(opt);
    j["comp1"] = {{"pass", c1.pass},
                  {"worst", c1.worst},
                  {"worst_face", c1.worst_face},
                  {"worst_node", c1.worst_node},
                  {"where", c1.where}};
    j["comp2"] = {{"pass", c2.pass},
                  {"worst", c2.worst},
                  {"worst_face", c2.worst_face},
                  {"worst_node", c2.worst_node},
                  {"where", c2.where}};
    std::cout << j.dump(2) << "\n";
    return c1.pass && c2.pass ? kExitPass : kExitCheckFailed;
}

int run_symbols_elliptic(const Options& opt) {
    if (opt.tuple_path.empty()) throw std::invalid_argument("symbols elliptic needs --tuple");
    const SymbolTuple tuple = tuple_from_json(slurp(opt.tuple_path));
    EllipticityOptions eopt;
    eopt.tol = opt.tol;
    eopt.annulus_radius = opt.annulus;
    eopt.model_points = opt.grid;
    const EllipticityReport report = is_elliptic(tuple, eopt);
    json j;
    j["format"] = 1;
    j["command"] = "symbols-elliptic";
    j["config"] = config_echo(opt);
    j["elliptic"] = report.elliptic;
    j["min_interior_singular"] = report.min_interior_singular;
    j["min_family_singular"] = report.min_family_singular;
    j["witness"] = report.witness;
    std::cout << j.dump(2) << "\n";
    return report.elliptic ? kExitPass : kExitCheckFailed;
}

int run_operators(const Options& opt) {
    json j;
    j["format"] = 1;
    j["command"] = "operators";
    j["config"] = config_echo(opt);
    double worst_rt = 0.0, worst_norm = 0.0;

    if (!opt.symbol_path.empty()) {
        const MultiplierSymbol s = multiplier_from_json(slurp(opt.symbol_path));
        const TranslationInvariantOp op = quantize(s);
        const MultiplierSymbol back = extract_symbol(op);
        for (size_t k = 0; k < s.values.size(); ++k)
            worst_rt = std::max(worst_rt,
                                (back.values[k] - s.values[k]).cwiseAbs().maxCoeff());
        worst_norm = std::abs(spectral_norm(op.matrix) - s.max_norm());
    }
    if (opt.sweep > 0) {
        std::mt19937 rng(opt.seed);
        std::normal_distribution<double> gauss;
        if (opt.grid > 1024) throw std::invalid_argument("grid too large (N <= 1024)");
        LatticeModel model{1, std::min(opt.grid, 64), 2, 1.0};
        for (int trial = 0; trial < opt.sweep; ++trial) {
            MultiplierSymbol s;
            s.model = model;
            for (int k = 0; k < model.lattice_size(); ++k) {
                Eigen::MatrixXcd m(2, 2);
                for (int i = 0; i < 2; ++i)
                    for (int c = 0; c < 2; ++c)
                        m(i, c) = std::complex<double>(gauss(rng), gauss(rng));
                s.values.push_back(std::move(m));
            }
            const TranslationInvariantOp op = quantize(s);
            const MultiplierSymbol back = extract_symbol(op);
            for (int k = 0; k < model.lattice_size(); ++k)
                worst_rt = std::max(worst_rt,
                                    (back.values[k] - s.values[k]).cwiseAbs().maxCoeff());
            worst_norm =
                std::max(worst_norm, std::abs(spectral_norm(op.matrix) - s.max_norm()));
        }
        j["sweep_trials"] = opt.sweep;
    }
    j["roundtrip_error"] = worst_rt;
    j["norm_identity_error"] = worst_norm;
    const bool pass = worst_rt < 1e-12 && worst_norm < 1e-12;
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    return pass ? kExitPass : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corner-manifold calculus: lattices, duals, model operators, symbols"};
    app.require_subcommand(1);
    Options opt;

    app.add_option("--tol", opt.tol, "check tolerance");
    app.add_option("--grid", opt.grid, "grid points per axis (N <= 1024)");
    app.add_option("--seed", opt.seed, "seed for randomized sweeps");
    app.add_option("--radii", opt.radii, "dyadic radii as r0,k");
    app.add_option("--annulus", opt.annulus, "far parameter annulus radius");

    auto* validate_cmd = app.add_subcommand("validate", "check complex invariants");
    validate_cmd->add_option("complex", opt.complex_path, "complex JSON file");
    validate_cmd->add_option("--polytope", opt.polytope_path, "polytope JSON file");

    auto* dual_cmd = app.add_subcommand("dual", "emit the dual stratified complex");
    dual_cmd->add_option("complex", opt.complex_path, "complex JSON file");
    dual_cmd->add_option("--polytope", opt.polytope_path, "polytope JSON file");
    dual_cmd->add_flag("--check-poset", opt.check_poset,
                       "emit the anti-isomorphism certificate");

    auto* expmap_cmd = app.add_subcommand("expmap", "glue and certify exponential maps");
    expmap_cmd->add_option("--atlas", opt.atlas_path, "chart atlas JSON")->required();
    expmap_cmd->add_option("--face", opt.face, "face id (informational)");
    expmap_cmd->add_option("--eps", opt.eps, "fiber domain size");
    expmap_cmd->add_option("--check-diagram", opt.diagram_atlas_path,
                           "atlas of the adjacent deeper face");

    auto* localize_cmd = app.add_subcommand("localize", "localization checks");
    localize_cmd->add_option("--family", opt.family_path, "family JSON")->required();
    localize_cmd->add_option("--check", opt.check, "norm|ideal|continuity|fredholm")
        ->required();
    localize_cmd->add_option("--node", opt.node, "node for the ideal profile");

    auto* symbols_cmd = app.add_subcommand("symbols", "symbol tuple checks");
    auto* symbols_check = symbols_cmd->add_subcommand("check", "compatibility conditions");
    symbols_check->add_option("--tuple", opt.tuple_path, "tuple JSON")->required();
    symbols_check->add_option("--complex", opt.complex_path, "complex JSON");
    auto* symbols_elliptic = symbols_cmd->add_subcommand("elliptic", "recursive ellipticity");
    symbols_elliptic->add_option("--tuple", opt.tuple_path, "tuple JSON")->required();

    auto* operators_cmd = app.add_subcommand("operators", "multiplier round trips");
    operators_cmd->add_option("--symbol", opt.symbol_path, "multiplier symbol JSON");
    operators_cmd->add_option("--sweep", opt.sweep, "random sweep trial count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (opt.grid < 1 || opt.grid > 1024)
            throw std::invalid_argument("grid must lie in [1, 1024]");
        if (opt.tol <= 0.0) throw std::invalid_argument("tol must be positive");
        if (*validate_cmd) return run_validate(opt);
        if (*dual_cmd) return run_dual(opt);
        if (*expmap_cmd) return run_expmap(opt);
        if (*localize_cmd) return run_localize(opt);
        if (*symbols_cmd) {
            if (*symbols_check) return run_symbols_check(opt);
            if (*symbols_elliptic) return run_symbols_elliptic(opt);
            throw std::invalid_argument("symbols needs a check or elliptic subcommand");
        }
        if (*operators_cmd) return run_operators(opt);
        throw std::invalid_argument("no subcommand");
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
}
