#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/features/feature_vector.hpp"

namespace dermfuzz {

struct ManifestEntry {
    std::filesystem::path image_path;
    Label label = Label::benign;
};

/// CSV with header `path,label`. A leading `# source: <text>` line sets the tag;
/// relative paths are resolved against the manifest's directory.
struct Manifest {
    std::vector<ManifestEntry> entries;
    std::string source;
};

inline Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    Manifest m;
    const auto base = path.parent_path();
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string key = "# source:";
            if (line.rfind(key, 0) == 0) {
                m.source = line.substr(key.size());
                while (!m.source.empty() && m.source.front() == ' ') m.source.erase(0, 1);
            }
            continue;
        }
        if (!header_seen) {
            if (line != "path,label") throw FormatError(path.string() + ": manifest header must be 'path,label'");
            header_seen = true;
            continue;
        }
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw FormatError(path.string() + ": line " + std::to_string(line_no) + " lacks a label");
        ManifestEntry e;
        e.image_path = line.substr(0, comma);
        if (e.image_path.is_relative()) e.image_path = base / e.image_path;
        try {
            e.label = label_from_code(std::stol(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw FormatError(path.string() + ": line " + std::to_string(line_no) + " has an invalid label");
        }
        if (!seen.insert(e.image_path.lexically_normal().string()).second)
            throw FormatError(path.string() + ": duplicate path on line " + std::to_string(line_no));
        m.entries.push_back(std::move(e));
    }
    if (!header_seen) throw FormatError(path.string() + ": empty manifest");
    return m;
}

inline void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    if (!m.source.empty()) out << "# source: " << m.source << '\n';
    out << "path,label\n";
    const auto base = path.parent_path();
    for (const auto& e : m.entries) {
        auto p = e.image_path;
        p = std::filesystem::relative(p, base.empty() ? std::filesystem::path(".") : base);
        out << p.generic_string() << ',' << label_code(e.label) << '\n';
    }
}

}  // namespace dermfuzz
