// gkls_json.cpp — Generator document parsing and emission

#include "qds/gkls_json.hpp"

#include <string>

namespace qds::gkls {

using nlohmann::json;

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            entries.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return entries;
}

ComplexMatrix matrix_from_json(const nlohmann::json& doc, Eigen::Index rows,
                               Eigen::Index cols, const char* what) {
    if (!doc.is_array() || doc.size() != static_cast<std::size_t>(rows * cols)) {
        throw DimensionError(std::string(what) + ": expected " +
                             std::to_string(rows * cols) + " [re,im] pairs");
    }
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c, ++idx) {
            const auto& pair = doc[idx];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number()) {
                throw ValidationError(std::string(what) + ": entries must be [re,im] pairs");
            }
            m(r, c) = Complex(pair[0].get<double>(), pair[1].get<double>());
        }
    }
    return m;
}

nlohmann::json generator_to_json(const GklsGenerator& gen) {
    if (!gen.has_lindblad()) {
        throw ValidationError(
            "generator carries only a superoperator representation and cannot be serialized");
    }
    const auto& lf = gen.lindblad();
    json doc;
    doc["dim"] = gen.dim();
    doc["hamiltonian"] = matrix_to_json(lf.hamiltonian().matrix());
    json jumps = json::array();
    for (const auto& l : lf.jump_ops()) {
        jumps.push_back(matrix_to_json(l));
    }
    doc["jump_ops"] = jumps;
    if (gen.kossakowski()) {
        doc["kossakowski"] = {{"matrix", matrix_to_json(gen.kossakowski()->kossakowski().matrix())}};
    }
    return doc;
}

GklsGenerator generator_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("generator document must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "dim" && key != "hamiltonian" && key != "jump_ops" && key != "kossakowski") {
            throw ValidationError("generator document has unknown key '" + key + "'");
        }
    }
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
        throw ValidationError("generator document missing integer field 'dim'");
    }
    const auto dim = doc["dim"].get<Eigen::Index>();
    if (dim < 1) {
        throw ValidationError("'dim' must be a positive integer");
    }
    if (!doc.contains("hamiltonian")) {
        throw ValidationError("generator document missing field 'hamiltonian'");
    }
    const HermitianMatrix h(matrix_from_json(doc["hamiltonian"], dim, dim, "hamiltonian"));

    std::vector<ComplexMatrix> jumps;
    if (doc.contains("jump_ops")) {
        if (!doc["jump_ops"].is_array()) {
            throw ValidationError("'jump_ops' must be an array of matrices");
        }
        for (const auto& entry : doc["jump_ops"]) {
            jumps.push_back(matrix_from_json(entry, dim, dim, "jump_ops entry"));
        }
    }

    if (doc.contains("kossakowski")) {
        const auto& kdoc = doc["kossakowski"];
        if (!kdoc.is_object() || !kdoc.contains("matrix")) {
            throw ValidationError("'kossakowski' must be an object with a 'matrix' field");
        }
        const Eigen::Index m = dim * dim - 1;
        const HermitianMatrix k(matrix_from_json(kdoc["matrix"], m, m, "kossakowski.matrix"));
        GklsGenerator gen = make_kossakowski(k, h, gell_mann_basis(dim));
        if (!jumps.empty()) {
            const GklsGenerator stored = make_lindblad(jumps, h);
            const double gap = (stored.superop(Picture::Heisenberg).matrix -
                                gen.superop(Picture::Heisenberg).matrix)
                                   .norm();
            if (gap > 1e-9) {
                throw ValidationError("stored jump_ops disagree with the Kossakowski block");
            }
        }
        return gen;
    }
    return make_lindblad(std::move(jumps), h);
}

} // namespace qds::gkls
