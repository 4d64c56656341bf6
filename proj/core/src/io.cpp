#include "corners/io.hpp"

#include <stdexcept>

#include <json.hpp>

namespace corners {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
    }
}

void require_format(const json& j, const char* what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": not a JSON object");
    if (j.value("format", 0) != 1)
        throw std::invalid_argument(std::string(what) + ": missing or unsupported format field");
}

json permutation_to_json(const Permutation& p) { return json(p.images()); }

Permutation permutation_from_json(const json& j) {
    return Permutation(j.get<std::vector<int>>());
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(i, c).real(), m(i, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    const int rows = static_cast<int>(j.size());
    if (rows == 0) return Eigen::MatrixXcd(0, 0);
    const int cols = static_cast<int>(j.at(0).size());
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) {
            const auto& cell = j.at(i).at(c);
            m(i, c) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j.at(i).get<double>();
    return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

} // namespace

std::string complex_to_json(const CornerComplex& complex) {
    json j;
    j["format"] = 1;
    j["ambient_dim"] = complex.ambient_dim;
    j["faces"] = json::array();
    for (const auto& f : complex.faces) {
        json face;
        face["id"] = f.id;
        face["codim"] = f.codim;
        face["label"] = f.label;
        face["group_generators"] = json::array();
        for (const auto& g : f.structure_group.generators())
            face["group_generators"].push_back(permutation_to_json(g));
        j["faces"].push_back(std::move(face));
    }
    j["adjacency"] = json::array();
    for (const auto& [a, b] : complex.adjacency) j["adjacency"].push_back(json::array({a, b}));
    j["coverings"] = json::array();
    for (const auto& c : complex.coverings) {
        json cov;
        cov["parent"] = c.parent;
        cov["local_face"] = c.local_face;
        cov["target"] = c.target;
        cov["sheets"] = c.sheets;
        cov["monodromy"] = json::array();
        for (const auto& m : c.monodromy) cov["monodromy"].push_back(permutation_to_json(m));
        if (!c.parent_slots.empty()) cov["parent_slots"] = c.parent_slots;
        j["coverings"].push_back(std::move(cov));
    }
    return j.dump(2);
}

CornerComplex complex_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "complex file");
    CornerComplex complex;
    complex.ambient_dim = j.at("ambient_dim").get<int>();
    for (const auto& jf : j.at("faces")) {
        CornerFace face;
        face.id = jf.at("id").get<int>();
        face.codim = jf.at("codim").get<int>();
        face.dim = complex.ambient_dim - face.codim;
        face.label = jf.value("label", std::string());
        std::vector<Permutation> gens;
        for (const auto& g : jf.value("group_generators", json::array()))
            gens.push_back(permutation_from_json(g));
        face.structure_group = PermutationGroup::generated_by(gens, face.codim);
        complex.faces.push_back(std::move(face));
    }
    for (const auto& pair : j.value("adjacency", json::array()))
        complex.adjacency.insert({pair.at(0).get<int>(), pair.at(1).get<int>()});
    for (const auto& jc : j.value("coverings", json::array())) {
        CoveringData cov;
        cov.parent = jc.at("parent").get<int>();
        cov.local_face = jc.at("local_face").get<int>();
        cov.target = jc.at("target").get<int>();
        cov.sheets = jc.value("sheets", 1);
        for (const auto& m : jc.value("monodromy", json::array()))
            cov.monodromy.push_back(permutation_from_json(m));
        cov.parent_slots = jc.value("parent_slots", std::vector<int>());
        complex.coverings.push_back(std::move(cov));
    }
    return complex;
}

CornerComplex polytope_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "polytope file");
    const int dim = j.at("dim").get<int>();
    int vertices = 0;
    if (j.at("vertices").is_number())
        vertices = j.at("vertices").get<int>();
    else
        vertices = static_cast<int>(j.at("vertices").size());
    const auto& facets = j.at("facets");
    std::vector<std::vector<bool>> incidence(vertices,
                                             std::vector<bool>(facets.size(), false));
    for (size_t f = 0; f < facets.size(); ++f)
        for (const auto& v : facets.at(f)) {
            const int vi = v.get<int>();
            if (vi < 0 || vi >= vertices)
                throw std::invalid_argument("facet " + std::to_string(f) +
                                            " references missing vertex " + std::to_string(vi));
            incidence[vi][f] = true;
        }
    return from_polytope(incidence, dim);
}

std::string dual_to_json(const DualComplex& dual, const CornerComplex& source) {
    json j;
    j["format"] = 1;
    j["interior"] = dual.has_interior;
    j["strata"] = json::array();
    for (const auto& s : dual.strata) {
        json stratum;
        stratum["source_face"] = s.source_face;
        stratum["dim"] = s.dim;
        stratum["quotient_order"] = s.quotient_group.order();
        stratum["orbit_count_at_barycenter"] = s.orbit_count_at_barycenter;
        stratum["source_label"] = source.faces.at(s.source_face).label;
        j["strata"].push_back(std::move(stratum));
    }
    j["adjacency"] = json::array();
    for (const auto& [a, b] : dual.adjacency) j["adjacency"].push_back(json::array({a, b}));
    return j.dump(2);
}

std::string multiplier_to_json(const MultiplierSymbol& symbol) {
    json j;
    j["format"] = 1;
    j["d"] = symbol.model.d;
    j["N"] = symbol.model.N;
    j["base_dim"] = symbol.model.base_dim;
    j["spacing"] = symbol.model.spacing;
    j["values"] = json::array();
    for (const auto& v : symbol.values) j["values"].push_back(matrix_to_json(v));
    return j.dump();
}

MultiplierSymbol multiplier_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "symbol file");
    MultiplierSymbol symbol;
    symbol.model.d = j.at("d").get<int>();
    symbol.model.N = j.at("N").get<int>();
    symbol.model.base_dim = j.at("base_dim").get<int>();
    symbol.model.spacing = j.value("spacing", 1.0);
    symbol.model.check();
    for (const auto& v : j.at("values")) symbol.values.push_back(matrix_from_json(v));
    if (static_cast<int>(symbol.values.size()) != symbol.model.lattice_size())
        throw std::invalid_argument("symbol file needs one value per frequency node");
    return symbol;
}

std::string operator_to_json(const TranslationInvariantOp& op) {
    const LatticeModel& model = op.model;
    json j;
    j["format"] = 1;
    j["d"] = model.d;
    j["N"] = model.N;
    j["base_dim"] = model.base_dim;
    j["spacing"] = model.spacing;
    j["generators"] = json::array();
    const int b = model.base_dim;
    for (int node = 0; node < model.lattice_size(); ++node)
        j["generators"].push_back(matrix_to_json(op.matrix.block(0, node * b, b, b)));
    return j.dump();
}

TranslationInvariantOp operator_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "operator file");
    TranslationInvariantOp op;
    op.model.d = j.at("d").get<int>();
    op.model.N = j.at("N").get<int>();
    op.model.base_dim = j.at("base_dim").get<int>();
    op.model.spacing = j.value("spacing", 1.0);
    op.model.check();
    const int L = op.model.lattice_size();
    const int b = op.model.base_dim;
    if (static_cast<int>(j.at("generators").size()) != L)
        throw std::invalid_argument("operator file needs one generator block per node");
    std::vector<Eigen::MatrixXcd> gen;
    for (const auto& g : j.at("generators")) gen.push_back(matrix_from_json(g));

    // Rebuild the block-circulant matrix: row i, column k holds the generator
    // of the lattice difference k - i.
    op.matrix.resize(L * b, L * b);
    for (int i = 0; i < L; ++i) {
        const auto idx_i = op.model.unflatten(i);
        for (int k = 0; k < L; ++k) {
            auto diff = op.model.unflatten(k);
            for (int a = 0; a < op.model.d; ++a) diff[a] -= idx_i[a];
            op.matrix.block(i * b, k * b, b, b) = gen[op.model.flatten(diff)];
        }
    }
    return op;
}

AtlasFile atlas_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "atlas file");
    AtlasFile atlas;
    atlas.face = j.at("face").get<int>();
    atlas.eps = j.value("eps", 0.25);
    for (const auto& jc : j.at("charts")) {
        Chart chart;
        chart.face = atlas.face;
        chart.normal_dim = jc.at("model").at(0).get<int>();
        chart.tangent_dim = jc.at("model").at(1).get<int>();
        chart.domain_bound = 1.5;
        if (jc.contains("transition_maps")) {
            PolynomialMap map;
            map.input_dim = chart.dim();
            map.output_dim = chart.dim();
            for (const auto& comp : jc.at("transition_maps")) {
                std::vector<PolynomialMap::Term> terms;
                for (const auto& jt : comp) {
                    PolynomialMap::Term term;
                    term.coeff = jt.at("coeff").get<double>();
                    term.exponents = jt.at("exponents").get<std::vector<int>>();
                    terms.push_back(std::move(term));
                }
                map.components.push_back(std::move(terms));
            }
            if (static_cast<int>(map.components.size()) != map.output_dim)
                throw std::invalid_argument("transition map needs one table per coordinate");
            chart.map = std::move(map);
        } else {
            chart.map = PolynomialMap::identity(chart.dim());
        }
        BumpFunction bump;
        bump.center = vector_from_json(jc.at("bump").at("center"));
        bump.radius = jc.at("bump").at("radius").get<double>();
        atlas.partition.bumps.push_back(bump);
        atlas.charts.push_back(std::move(chart));
    }
    atlas.partition.normalized = true;
    return atlas;
}

namespace {

ParamFamily family_part_from_json(const json& j, int nodes) {
    ParamFamily family;
    for (const auto& q : j.at("Q")) family.Q.push_back(vector_from_json(q));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "multiplication") {
        const Eigen::VectorXd f = vector_from_json(j.at("f"));
        if (f.size() != nodes)
            throw std::invalid_argument("multiplication data needs one value per node");
        for (size_t k = 0; k < family.Q.size(); ++k)
            family.A.push_back(f.cast<std::complex<double>>().asDiagonal());
    } else if (kind == "matrices") {
        for (const auto& m : j.at("matrices")) family.A.push_back(matrix_from_json(m));
    } else {
        throw std::invalid_argument("unknown family kind: " + kind);
    }
    return family;
}

} // namespace

FamilyFile family_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "family file");
    FamilyFile file;
    const auto& js = j.at("space");
    for (const auto& n : js.at("nodes")) file.space.nodes.push_back(vector_from_json(n));
    file.space.weights = vector_from_json(js.at("weights"));
    file.space.hood_radius0 = js.value("hood_radius0", 1.0);
    file.space.check();

    file.family = family_part_from_json(j, file.space.size());
    file.family.check(file.space.size());

    file.hood_radius_scale = j.value("hood_radius_scale", 1.0);
    file.eps = j.value("eps", 0.1);
    if (j.contains("centers")) {
        file.centers = j.at("centers").get<std::vector<int>>();
        for (const auto& r : j.at("reps")) {
            ParamFamily rep = family_part_from_json(r, file.space.size());
            rep.check(file.space.size());
            file.reps.push_back(std::move(rep));
        }
        if (file.reps.size() != file.centers.size())
            throw std::invalid_argument("one rep per center required");
    }
    return file;
}

namespace {

json tuple_to_json_rec(const SymbolTuple& tuple) {
    json j;
    j["complex"] = json::parse(complex_to_json(tuple.complex));
    j["params"] = tuple.params;
    json sigma;
    sigma["sphere"] = {{"dim", tuple.sigma0.grid().ambient_dim()},
                       {"points_per_angle", tuple.sigma0.grid().points_per_angle()}};
    sigma["samples"] = json::array();
    for (int b = 0; b < tuple.sigma0.base_count(); ++b)
        sigma["samples"].push_back({{"face", tuple.sigma0.sample(b).attached_face}});
    sigma["values"] = json::array();
    for (int b = 0; b < tuple.sigma0.base_count(); ++b) {
        json row = json::array();
        for (int k = 0; k < tuple.sigma0.grid().size(); ++k)
            row.push_back(matrix_to_json(tuple.sigma0.value(b, k)));
        sigma["values"].push_back(std::move(row));
    }
    j["sigma0"] = std::move(sigma);
    j["faces"] = json::object();
    for (const auto& [face, fs] : tuple.face_symbols) {
        json jf;
        jf["face"] = fs.face;
        jf["param_dim"] = fs.param_dim;
        jf["local_targets"] = fs.local_targets;
        jf["local_sheets"] = fs.local_sheets;
        jf["tuple"] = tuple_to_json_rec(*fs.tuple);
        j["faces"][std::to_string(face)] = std::move(jf);
    }
    return j;
}

SymbolTuple tuple_from_json_rec(const json& j) {
    SymbolTuple tuple;
    tuple.complex = complex_from_json(j.at("complex").dump());
    tuple.params = j.at("params").get<int>();

    const auto& sigma = j.at("sigma0");
    SphereGrid grid(sigma.at("sphere").at("dim").get<int>(),
                    sigma.at("sphere").at("points_per_angle").get<int>());
    std::vector<BaseSample> samples;
    for (const auto& s : sigma.at("samples"))
        samples.push_back({s.at("face").get<int>(), Eigen::VectorXd()});
    InteriorSymbol sigma0(grid, samples);
    std::vector<std::vector<Eigen::MatrixXcd>> values;
    for (const auto& row : sigma.at("values")) {
        std::vector<Eigen::MatrixXcd> r;
        for (const auto& v : row) r.push_back(matrix_from_json(v));
        values.push_back(std::move(r));
    }
    sigma0.set_values(std::move(values));
    tuple.sigma0 = std::move(sigma0);

    for (const auto& [key, jf] : j.at("faces").items()) {
        FaceSymbol fs;
        fs.face = jf.at("face").get<int>();
        fs.param_dim = jf.at("param_dim").get<int>();
        fs.local_targets = jf.at("local_targets").get<std::vector<int>>();
        fs.local_sheets = jf.at("local_sheets").get<std::vector<int>>();
        fs.tuple = std::make_shared<SymbolTuple>(tuple_from_json_rec(jf.at("tuple")));
        tuple.face_symbols.emplace(fs.face, std::move(fs));
    }
    return tuple;
}

} // namespace

std::string tuple_to_json(const SymbolTuple& tuple) {
    json j = tuple_to_json_rec(tuple);
    j["format"] = 1;
    return j.dump();
}

SymbolTuple tuple_from_json(const std::string& text) {
    const json j = parse(text);
    require_format(j, "tuple file");
    return tuple_from_json_rec(j);
}

} // namespace corners
