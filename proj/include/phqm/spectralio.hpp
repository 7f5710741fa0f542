// JSON persistence for operator matrices and result records.
#ifndef PHQM_SPECTRALIO_HPP
#define PHQM_SPECTRALIO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "phqm/genfun.hpp"
#include "phqm/types.hpp"

namespace phqm {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kMatrixFormatVersion = 1;
inline constexpr int kResultFormatVersion = 1;

/// Malformed or incompatible file contents. `offset` is the entry index the
/// problem was found at, or -1 when it is not tied to one entry.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long offset = -1) : Error(what), offset_(offset) {}
    long offset() const noexcept { return offset_; }

private:
    long offset_;
};

nlohmann::ordered_json matrix_to_json(const OperatorMatrix& a);
OperatorMatrix matrix_from_json(const nlohmann::json& doc);

void save_matrix(const OperatorMatrix& a, const std::filesystem::path& path);
OperatorMatrix load_matrix(const std::filesystem::path& path);

nlohmann::ordered_json result_to_json(const GenFunResult& r);
GenFunResult result_from_json(const nlohmann::json& doc);

void save_result(const GenFunResult& r, const std::filesystem::path& path);
GenFunResult load_result(const std::filesystem::path& path);

/// Writes any report document with a trailing newline; keys keep insertion order.
void save_json(const nlohmann::ordered_json& doc, const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

std::string fingerprint_hex(std::uint64_t h);
std::uint64_t fingerprint_from_hex(const std::string& s);

/// %.17g
std::string format_double(double v);

}  // namespace phqm

#endif  // PHQM_SPECTRALIO_HPP
