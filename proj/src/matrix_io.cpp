#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "krein/linalg.hpp"

namespace krein {
namespace {

void put_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void put_rows(std::string& out, const Matrix& m, bool imag) {
    out += "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            put_double(out, imag ? m(i, j).imag() : m(i, j).real());
        }
        out += "]";
    }
    out += "]";
}

}  // namespace

std::string matrix_to_json(const Matrix& m) {
    std::string out = "{\"n\": " + std::to_string(m.rows());
    if (!m.square()) out += ", \"m\": " + std::to_string(m.cols());
    out += ", \"re\": ";
    put_rows(out, m, false);
    out += ", \"im\": ";
    put_rows(out, m, true);
    out += "}\n";
    return out;
}

Matrix matrix_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("matrix JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("re"))
        throw std::invalid_argument("matrix JSON: expected keys \"n\" and \"re\"");
    const auto rows = doc.at("n").get<std::size_t>();
    const auto cols = doc.contains("m") ? doc.at("m").get<std::size_t>() : rows;
    const auto& re = doc.at("re");
    const nlohmann::json* im = doc.contains("im") ? &doc.at("im") : nullptr;
    auto check_shape = [&](const nlohmann::json& part, const char* name) {
        if (!part.is_array() || part.size() != rows)
            throw std::invalid_argument(std::string("matrix JSON: \"") + name + "\" must have n rows");
        for (const auto& r : part)
            if (!r.is_array() || r.size() != cols)
                throw std::invalid_argument(std::string("matrix JSON: \"") + name + "\" row length mismatch");
    };
    check_shape(re, "re");
    if (im) check_shape(*im, "im");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = cplx(re[i][j].get<double>(), im ? (*im)[i][j].get<double>() : 0.0);
    return m;
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << matrix_to_json(m);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_json(buf.str());
}

}  // namespace krein
