#pragma once

#include <string>

#include "json.hpp"
#include "nahm/lattice.hpp"

namespace nahm {

/// {"N": int, "p2": [doubled masses...], "k": [charges...]} with the N-1
/// given masses/charges; the derived p_N, k_N are recomputed on load.
nlohmann::json type_to_json(const MonopoleType& t);
MonopoleType type_from_json(const nlohmann::json& j);

/// Versioned "nahm-solution/1" document.  Doubled site indices become string
/// keys under a "doubled_index": true marker; matrices are row-major arrays
/// of [re, im] pairs.  Round-trips are lossless (shortest-round-trip decimal
/// printing, at least 17 significant digits).
nlohmann::json solution_to_json(const NahmSolution& s);
NahmSolution solution_from_json(const nlohmann::json& j);

NahmSolution read_solution(const std::string& path);
void write_solution(const std::string& path, const NahmSolution& s);

MonopoleType read_type(const std::string& path);
void write_type(const std::string& path, const MonopoleType& t);

} // namespace nahm
