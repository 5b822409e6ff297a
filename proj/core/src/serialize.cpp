#include "nahm/serialize.hpp"

#include <fstream>
#include <sstream>

namespace nahm {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c)
            data.push_back({m(r, c).real(), m(r, c).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw SchemaMismatch("matrix record at " + where + " lacks rows/cols/data");
    const long rows = j.at("rows").get<long>();
    const long cols = j.at("cols").get<long>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        static_cast<long>(data.size()) != rows * cols)
        throw ShapeMismatch("matrix at " + where + " has inconsistent dimensions");
    Matrix m(rows, cols);
    long idx = 0;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c, ++idx) {
            const json& e = data[static_cast<std::size_t>(idx)];
            if (!e.is_array() || e.size() != 2)
                throw ParseError("entry at " + where + " is not an [re, im] pair");
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    return m;
}

long site_key(const std::string& key, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(key, &pos);
        if (pos != key.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw ParseError("non-integer site key \"" + key + "\" in " + where);
    }
}

} // namespace

json type_to_json(const MonopoleType& t) {
    json p2 = json::array(), k = json::array();
    for (int j = 1; j <= t.n() - 1; ++j) {
        p2.push_back(t.mass2(j));
        k.push_back(t.charge(j));
    }
    return json{{"N", t.n()}, {"p2", std::move(p2)}, {"k", std::move(k)}};
}

MonopoleType type_from_json(const json& j) {
    if (!j.is_object() || !j.contains("N") || !j.contains("p2") || !j.contains("k"))
        throw SchemaMismatch("type record needs fields N, p2, k");
    const int n = j.at("N").get<int>();
    const auto p2 = j.at("p2").get<std::vector<long>>();
    const auto k = j.at("k").get<std::vector<long>>();
    if (static_cast<int>(p2.size()) != n - 1 || static_cast<int>(k.size()) != n - 1)
        throw SchemaMismatch("type record: p2 and k must each hold N-1 entries");
    return MonopoleType(p2, k);
}

json solution_to_json(const NahmSolution& s) {
    json beta = json::object(), gamma = json::object(), a = json::object(), b = json::object();
    for (const auto& [site, m] : s.beta) beta[std::to_string(site)] = matrix_to_json(m);
    for (const auto& [site, m] : s.gamma) gamma[std::to_string(site)] = matrix_to_json(m);
    for (const auto& [i, m] : s.avec) a[std::to_string(i)] = matrix_to_json(m);
    for (const auto& [i, m] : s.bvec) b[std::to_string(i)] = matrix_to_json(m);
    return json{{"schema", "nahm-solution/1"}, {"doubled_index", true},
                {"type", type_to_json(s.type)},
                {"beta", std::move(beta)}, {"gamma", std::move(gamma)},
                {"a", std::move(a)}, {"b", std::move(b)}};
}

NahmSolution solution_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", "") != std::string("nahm-solution/1"))
        throw SchemaMismatch("expected schema nahm-solution/1");
    if (!j.value("doubled_index", false))
        throw SchemaMismatch("doubled_index marker missing or false");
    for (const char* f : {"type", "beta", "gamma", "a", "b"})
        if (!j.contains(f)) throw SchemaMismatch(std::string("missing field ") + f);

    NahmSolution s{type_from_json(j.at("type")), {}, {}, {}, {}};
    for (const auto& [key, val] : j.at("beta").items())
        s.beta[site_key(key, "beta")] = matrix_from_json(val, "beta[" + key + "]");
    for (const auto& [key, val] : j.at("gamma").items())
        s.gamma[site_key(key, "gamma")] = matrix_from_json(val, "gamma[" + key + "]");
    for (const auto& [key, val] : j.at("a").items())
        s.avec[static_cast<int>(site_key(key, "a"))] = matrix_from_json(val, "a[" + key + "]");
    for (const auto& [key, val] : j.at("b").items())
        s.bvec[static_cast<int>(site_key(key, "b"))] = matrix_from_json(val, "b[" + key + "]");
    validate_shapes(s);
    return s;
}

NahmSolution read_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return solution_from_json(j);
}

void write_solution(const std::string& path, const NahmSolution& s) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << solution_to_json(s).dump(2) << "\n";
    if (!out) throw IoError("write to " + path + " failed");
}

MonopoleType read_type(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return type_from_json(j);
}

void write_type(const std::string& path, const MonopoleType& t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << type_to_json(t).dump(2) << "\n";
    if (!out) throw IoError("write to " + path + " failed");
}

} // namespace nahm
