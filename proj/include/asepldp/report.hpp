#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace asepldp::report {

// Minimal ordered JSON emitter. Reports are flat enough that a full JSON
// library is not needed for writing; floats are always serialized with 17
// significant digits so reruns are byte-identical.
class Json {
  public:
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;

    Json() : v_(nullptr) {}
    Json(double d) : v_(d) {}
    Json(int i) : v_(static_cast<int64_t>(i)) {}
    Json(int64_t i) : v_(i) {}
    Json(uint64_t u) : v_(u) {}
    Json(bool b) : v_(b) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}
    Json(Array a) : v_(std::move(a)) {}
    Json(Object o) : v_(std::move(o)) {}

    std::string dump(int indent = 2) const;

  private:
    std::variant<std::nullptr_t, bool, int64_t, uint64_t, double, std::string, Array,
                 Object>
        v_;
    void emit(std::string& out, int indent, int depth) const;
};

std::string format_double17(double v);

// key = value configuration text; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

// FNV-1a over the canonical "key=value\n" serialization, keys sorted.
uint64_t config_hash(const std::map<std::string, std::string>& kv);

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    uint64_t seed = 0;
    std::string tool_version;
    uint64_t cfg_hash = 0;
    std::vector<std::string> outputs;

    std::string to_json() const;
};

inline constexpr const char* kToolVersion = "asep-ldp 0.1.0";
inline constexpr int kSchemaVersion = 1;

// RFC-4180-style CSV: header row, '.' decimal separator, UTF-8, one record
// per line.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    std::string str() const;

  private:
    size_t width_;
    std::string body_;
};

}  // namespace asepldp::report
