// gkls_json.hpp — JSON (de)serialization for GKLS generators.
//
// Document layout:
//   {"dim": N,
//    "hamiltonian": [[re,im], ...],          // N*N pairs, row-major
//    "jump_ops": [[[re,im], ...], ...],      // each N*N pairs, row-major
//    "kossakowski": {"matrix": [[re,im], ...]}}  // optional, (N^2-1)^2 pairs
//
// A generator with a Kossakowski block is reconstructed over the canonical
// Gell-Mann basis; non-empty jump_ops alongside it are cross-checked for
// superoperator agreement.

#pragma once

#include "json.hpp"

#include "qds/gkls.hpp"

namespace qds::gkls {

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& doc, Eigen::Index rows,
                               Eigen::Index cols, const char* what);

nlohmann::json generator_to_json(const GklsGenerator& gen);
GklsGenerator generator_from_json(const nlohmann::json& doc);

} // namespace qds::gkls
