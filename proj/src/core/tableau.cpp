#include "wsrk/tableau.hpp"

#include <cmath>
#include "json.hpp"

#include "wsrk/error.hpp"

namespace wsrk {

using nlohmann::json;

Vector ones(std::size_t n) { return Vector(n, 1.0); }

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

Vector matvec(const Matrix& m, std::span<const double> v) {
    Vector out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m.row(i), v);
    return out;
}

Vector hadamard(std::span<const double> a, std::span<const double> b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Vector power(std::span<const double> v, int exponent) {
    Vector out(v.size(), 1.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (int k = 0; k < exponent; ++k) out[i] *= v[i];
    return out;
}

Tableau Tableau::zero(std::size_t s, std::string name) {
    Tableau t;
    t.name = std::move(name);
    t.stages = s;
    for (Vector* v : {&t.alpha, &t.beta1, &t.beta2, &t.beta3, &t.beta4}) v->assign(s, 0.0);
    for (Matrix* m : {&t.A0, &t.A1, &t.A2, &t.B0, &t.B1, &t.B2}) *m = Matrix(s);
    t.refresh_nodes();
    return t;
}

void Tableau::refresh_nodes() {
    const Vector e = ones(stages);
    c0 = matvec(A0, e);
    c1 = matvec(A1, e);
    c2 = matvec(A2, e);
}

const Matrix& Tableau::a_matrix(int q) const { return q == 0 ? A0 : q == 1 ? A1 : A2; }
const Matrix& Tableau::b_matrix(int q) const { return q == 0 ? B0 : q == 1 ? B1 : B2; }
Matrix& Tableau::a_matrix(int q) { return q == 0 ? A0 : q == 1 ? A1 : A2; }
Matrix& Tableau::b_matrix(int q) { return q == 0 ? B0 : q == 1 ? B1 : B2; }

namespace {

const char* const kVectorKeys[] = {"alpha", "beta1", "beta2", "beta3", "beta4"};
const char* const kMatrixKeys[] = {"A0", "A1", "A2", "B0", "B1", "B2"};

std::vector<const Vector*> weight_vectors(const Tableau& t) {
    return {&t.alpha, &t.beta1, &t.beta2, &t.beta3, &t.beta4};
}

std::vector<const Matrix*> matrices(const Tableau& t) {
    return {&t.A0, &t.A1, &t.A2, &t.B0, &t.B1, &t.B2};
}

}  // namespace

std::vector<Violation> validate(const Tableau& t) {
    std::vector<Violation> out;
    const std::size_t s = t.stages;

    const auto vectors = weight_vectors(t);
    for (std::size_t v = 0; v < vectors.size(); ++v) {
        if (vectors[v]->size() != s) {
            out.push_back({ViolationKind::Shape, kVectorKeys[v], 0, 0,
                           std::string(kVectorKeys[v]) + " has length " +
                               std::to_string(vectors[v]->size()) + ", expected " +
                               std::to_string(s)});
            continue;
        }
        for (std::size_t i = 0; i < s; ++i)
            if (!std::isfinite((*vectors[v])[i]))
                out.push_back({ViolationKind::NonFinite, kVectorKeys[v], i + 1, 0,
                               std::string(kVectorKeys[v]) + " entry is not finite"});
    }

    const auto mats = matrices(t);
    bool shapes_ok = true;
    for (std::size_t q = 0; q < mats.size(); ++q) {
        const Matrix& m = *mats[q];
        if (m.size() != s) {
            shapes_ok = false;
            out.push_back({ViolationKind::Shape, kMatrixKeys[q], 0, 0,
                           std::string(kMatrixKeys[q]) + " is not " + std::to_string(s) + "x" +
                               std::to_string(s)});
            continue;
        }
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                const double x = m(i, j);
                if (!std::isfinite(x)) {
                    out.push_back({ViolationKind::NonFinite, kMatrixKeys[q], i + 1, j + 1,
                                   std::string(kMatrixKeys[q]) + " entry is not finite"});
                } else if (j >= i && x != 0.0) {
                    out.push_back({ViolationKind::Explicitness, kMatrixKeys[q], i + 1, j + 1,
                                   std::string(kMatrixKeys[q]) + "(" + std::to_string(i + 1) +
                                       "," + std::to_string(j + 1) +
                                       ") must be zero for an explicit scheme"});
                }
            }
        }
    }

    if (shapes_ok) {
        const Vector e = ones(s);
        const Vector* nodes[] = {&t.c0, &t.c1, &t.c2};
        for (int q = 0; q < 3; ++q) {
            const std::string label = "c" + std::to_string(q);
            if (nodes[q]->size() != s) {
                out.push_back({ViolationKind::Shape, label, 0, 0, label + " has wrong length"});
                continue;
            }
            const Vector expected = matvec(t.a_matrix(q), e);
            for (std::size_t i = 0; i < s; ++i) {
                const double diff = (*nodes[q])[i] - expected[i];
                if (!(std::fabs(diff) <= kNodeTolerance))
                    out.push_back({ViolationKind::NodeMismatch, label, i + 1, 0,
                                   label + " differs from A" + std::to_string(q) + " e"});
            }
        }
    }
    return out;
}

std::string serialize(const Tableau& t) {
    const auto problems = validate(t);
    if (!problems.empty())
        throw InvalidArgument("cannot serialize invalid tableau: " + problems.front().message);

    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    if (!t.name.empty()) doc["name"] = t.name;
    doc["s"] = t.stages;
    const auto vectors = weight_vectors(t);
    for (std::size_t v = 0; v < vectors.size(); ++v) doc[kVectorKeys[v]] = *vectors[v];
    const auto mats = matrices(t);
    for (std::size_t q = 0; q < mats.size(); ++q) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < t.stages; ++i) {
            const auto r = mats[q]->row(i);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        doc[kMatrixKeys[q]] = std::move(rows);
    }
    return doc.dump(2) + "\n";
}

namespace {

double read_number(const json& value, const std::string& where) {
    if (!value.is_number()) throw ParseError(where + ": expected a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw ParseError(where + ": number is not finite");
    return x;
}

Vector read_vector(const json& doc, const std::string& key, std::size_t s) {
    if (!doc.contains(key)) throw ParseError("missing key \"" + key + "\"");
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw ParseError("\"" + key + "\" must be an array");
    if (arr.size() != s)
        throw ParseError("\"" + key + "\" has length " + std::to_string(arr.size()) +
                         ", expected " + std::to_string(s));
    Vector out(s);
    for (std::size_t i = 0; i < s; ++i)
        out[i] = read_number(arr[i], key + "[" + std::to_string(i) + "]");
    return out;
}

Matrix read_matrix(const json& doc, const std::string& key, std::size_t s) {
    if (!doc.contains(key)) throw ParseError("missing key \"" + key + "\"");
    const json& rows = doc.at(key);
    if (!rows.is_array() || rows.size() != s)
        throw ParseError("\"" + key + "\" must be an array of " + std::to_string(s) + " rows");
    Matrix m(s);
    for (std::size_t i = 0; i < s; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != s)
            throw ParseError("\"" + key + "\" row " + std::to_string(i + 1) + " must have " +
                             std::to_string(s) + " entries");
        for (std::size_t j = 0; j < s; ++j)
            m(i, j) = read_number(row[j], key + "[" + std::to_string(i) + "][" +
                                              std::to_string(j) + "]");
    }
    return m;
}

}  // namespace

Tableau deserialize(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("tableau document must be a JSON object");
    if (!doc.contains("s") || !doc["s"].is_number_integer() || doc["s"].get<long long>() < 1)
        throw ParseError("\"s\" must be a positive integer");
    const auto s = static_cast<std::size_t>(doc["s"].get<long long>());
    if (s > 16) throw ParseError("stage count above 16 is not supported");

    Tableau t = Tableau::zero(s);
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ParseError("\"name\" must be a string");
        t.name = doc["name"].get<std::string>();
    }
    t.alpha = read_vector(doc, "alpha", s);
    t.beta1 = read_vector(doc, "beta1", s);
    t.beta2 = read_vector(doc, "beta2", s);
    t.beta3 = read_vector(doc, "beta3", s);
    t.beta4 = read_vector(doc, "beta4", s);
    t.A0 = read_matrix(doc, "A0", s);
    t.A1 = read_matrix(doc, "A1", s);
    t.A2 = read_matrix(doc, "A2", s);
    t.B0 = read_matrix(doc, "B0", s);
    t.B1 = read_matrix(doc, "B1", s);
    t.B2 = read_matrix(doc, "B2", s);
    t.refresh_nodes();

    const Vector* nodes[] = {&t.c0, &t.c1, &t.c2};
    for (int q = 0; q < 3; ++q) {
        const std::string key = "c" + std::to_string(q);
        if (!doc.contains(key)) continue;
        const Vector stored = read_vector(doc, key, s);
        for (std::size_t i = 0; i < s; ++i)
            if (std::fabs(stored[i] - (*nodes[q])[i]) > kNodeTolerance)
                throw ParseError("\"" + key + "\" is inconsistent with A" + std::to_string(q) +
                                 " e");
    }

    const auto problems = validate(t);
    if (!problems.empty()) throw ParseError(problems.front().message);
    return t;
}

}  // namespace wsrk
