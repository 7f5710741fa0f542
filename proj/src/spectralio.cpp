#include "phqm/spectralio.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace phqm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

json parse_text(const std::string& text, const std::filesystem::path& path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path.string() + "': " + e.what(), static_cast<long>(e.byte));
    }
}

template <class T>
T field(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

ordered_json basis_to_json(const BasisSpec& b) {
    ordered_json j;
    j["dimension"] = b.dimension;
    j["mass"] = b.mass;
    j["omega"] = b.omega;
    j["hbar"] = b.hbar;
    return j;
}

BasisSpec basis_from_json(const json& j) {
    BasisSpec b;
    b.dimension = field<int>(j, "dimension");
    b.mass = field<double>(j, "mass");
    b.omega = field<double>(j, "omega");
    b.hbar = field<double>(j, "hbar");
    b.validate();
    return b;
}

ordered_json window_to_json(const SourceWindow& w) {
    ordered_json j;
    j["J"] = w.J;
    j["t1"] = w.t1;
    j["t2"] = w.t2;
    j["mode"] = to_string(w.mode);
    j["hbar"] = w.hbar;
    return j;
}

SourceWindow window_from_json(const json& j) {
    SourceWindow w;
    w.J = field<double>(j, "J");
    w.t1 = field<double>(j, "t1");
    w.t2 = field<double>(j, "t2");
    w.mode = time_mode_from_string(field<std::string>(j, "mode"));
    w.hbar = field<double>(j, "hbar");
    w.validate();
    return w;
}

void check_header(const json& doc, const char* format, int version) {
    if (!doc.is_object()) throw ParseError("document is not a JSON object");
    const auto f = field<std::string>(doc, "format");
    if (f != format) throw ParseError("unexpected format '" + f + "' (expected '" + format + "')");
    const int v = field<int>(doc, "version");
    if (v != version) {
        throw ParseError("unsupported " + std::string(format) + " version " + std::to_string(v) + " (expected " +
                         std::to_string(version) + ")");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fingerprint_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::uint64_t fingerprint_from_hex(const std::string& s) {
    if (s.size() != 16 || s.find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw ParseError("fingerprint '" + s + "' is not 16 lowercase hex digits");
    }
    return std::stoull(s, nullptr, 16);
}

ordered_json matrix_to_json(const OperatorMatrix& a) {
    ordered_json doc;
    doc["format"] = "phqm-matrix";
    doc["version"] = kMatrixFormatVersion;
    doc["rows"] = a.dim();
    doc["cols"] = a.dim();
    doc["basis"] = basis_to_json(a.basis());
    ordered_json data = ordered_json::array();
    for (Index r = 0; r < a.dim(); ++r) {
        for (Index c = 0; c < a.dim(); ++c) data.push_back({a(r, c).real(), a(r, c).imag()});
    }
    doc["data"] = std::move(data);
    return doc;
}

OperatorMatrix matrix_from_json(const json& doc) {
    check_header(doc, "phqm-matrix", kMatrixFormatVersion);
    const long rows = field<long>(doc, "rows");
    const long cols = field<long>(doc, "cols");
    if (rows <= 0 || cols <= 0) throw ParseError("rows and cols must be positive");
    if (rows != cols) throw ParseError("matrix must be square, got " + std::to_string(rows) + "x" + std::to_string(cols));
    if (!doc.contains("basis")) throw ParseError("missing field 'basis'");
    const BasisSpec basis = basis_from_json(doc.at("basis"));
    if (basis.dimension != rows) {
        throw ParseError("basis dimension " + std::to_string(basis.dimension) + " does not match rows " +
                         std::to_string(rows));
    }
    if (!doc.contains("data") || !doc.at("data").is_array()) throw ParseError("missing array field 'data'");
    const json& data = doc.at("data");
    const long expected = rows * cols;
    const long found = static_cast<long>(data.size());
    if (found != expected) {
        std::ostringstream msg;
        msg << "entry count mismatch: rows*cols = " << expected << " but data holds " << found
            << " entries; first " << (found < expected ? "missing" : "extra") << " entry at offset "
            << std::min(found, expected);
        throw ParseError(msg.str(), std::min(found, expected));
    }
    CMatrix m(rows, cols);
    for (long k = 0; k < expected; ++k) {
        const json& e = data[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw ParseError("malformed entry at offset " + std::to_string(k) + " (expected [re, im])", k);
        }
        m(k / cols, k % cols) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return OperatorMatrix(std::move(m), basis);
}

void save_matrix(const OperatorMatrix& a, const std::filesystem::path& path) {
    save_json(matrix_to_json(a), path);
}

OperatorMatrix load_matrix(const std::filesystem::path& path) {
    try {
        return matrix_from_json(parse_text(read_file(path), path));
    } catch (const ParseError& e) {
        throw ParseError("'" + path.string() + "': " + e.what(), e.offset());
    }
}

ordered_json result_to_json(const GenFunResult& r) {
    ordered_json doc;
    doc["format"] = "phqm-result";
    doc["version"] = kResultFormatVersion;
    doc["tool_version"] = kToolVersion;
    doc["method"] = to_string(r.method);
    doc["value"] = {r.value.real(), r.value.imag()};
    doc["window"] = window_to_json(r.window);
    doc["fingerprint"] = fingerprint_hex(r.fingerprint);
    doc["expm_path"] = r.expm_path;
    return doc;
}

GenFunResult result_from_json(const json& doc) {
    check_header(doc, "phqm-result", kResultFormatVersion);
    GenFunResult r;
    r.method = method_from_string(field<std::string>(doc, "method"));
    const auto value = field<std::vector<double>>(doc, "value");
    if (value.size() != 2) throw ParseError("field 'value' must be [re, im]");
    r.value = cplx(value[0], value[1]);
    if (!doc.contains("window")) throw ParseError("missing field 'window'");
    r.window = window_from_json(doc.at("window"));
    r.fingerprint = fingerprint_from_hex(field<std::string>(doc, "fingerprint"));
    r.expm_path = field<std::string>(doc, "expm_path");
    return r;
}

void save_result(const GenFunResult& r, const std::filesystem::path& path) { save_json(result_to_json(r), path); }

GenFunResult load_result(const std::filesystem::path& path) {
    try {
        return result_from_json(parse_text(read_file(path), path));
    } catch (const ParseError& e) {
        throw ParseError("'" + path.string() + "': " + e.what(), e.offset());
    }
}

void save_json(const ordered_json& doc, const std::filesystem::path& path) { write_file(path, doc.dump(2) + "\n"); }

json load_json(const std::filesystem::path& path) { return parse_text(read_file(path), path); }

}  // namespace phqm
