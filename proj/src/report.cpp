#include "asepldp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace asepldp::report {

std::string format_double17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
void emit_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}
}  // namespace

void Json::emit(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad1(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (v_.index()) {
        case 0: out += "null"; break;
        case 1: out += std::get<bool>(v_) ? "true" : "false"; break;
        case 2: out += std::to_string(std::get<int64_t>(v_)); break;
        case 3: out += std::to_string(std::get<uint64_t>(v_)); break;
        case 4: out += format_double17(std::get<double>(v_)); break;
        case 5: emit_string(out, std::get<std::string>(v_)); break;
        case 6: {
            const auto& a = std::get<Array>(v_);
            if (a.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (size_t i = 0; i < a.size(); ++i) {
                out += pad1;
                a[i].emit(out, indent, depth + 1);
                if (i + 1 < a.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            break;
        }
        case 7: {
            const auto& o = std::get<Object>(v_);
            if (o.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (size_t i = 0; i < o.size(); ++i) {
                out += pad1;
                emit_string(out, o[i].first);
                out += ": ";
                o[i].second.emit(out, indent, depth + 1);
                if (i + 1 < o.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    emit(out, indent, 0);
    out += '\n';
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

uint64_t config_hash(const std::map<std::string, std::string>& kv) {
    uint64_t h = 1469598103934665603ULL;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [k, v] : kv) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

std::string RunManifest::to_json() const {
    Json::Object params;
    for (const auto& [k, v] : parameters) params.emplace_back(k, Json(v));
    Json::Array outs;
    for (const auto& o : outputs) outs.emplace_back(Json(o));
    Json j(Json::Object{
        {"schema_version", Json(kSchemaVersion)},
        {"command", Json(command)},
        {"parameters", Json(std::move(params))},
        {"seed", Json(seed)},
        {"versions", Json(Json::Object{{"tool", Json(tool_version)},
                                       {"config_hash", Json(cfg_hash)}})},
        {"outputs", Json(std::move(outs))},
    });
    return j.dump();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::invalid_argument("CsvWriter: row width");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
        if (!quote) {
            body_ += cells[i];
        } else {
            body_ += '"';
            for (char c : cells[i]) {
                if (c == '"') body_ += '"';
                body_ += c;
            }
            body_ += '"';
        }
    }
    body_ += '\n';
}

std::string CsvWriter::str() const { return body_; }

}  // namespace asepldp::report
