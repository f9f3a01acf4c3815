/* Copyright 2026 The ptladder Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ptladder/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace ptladder::cli {

namespace {

using json = nlohmann::ordered_json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

struct CsvCell {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return csv_field(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
};

struct JsonCell {
    json operator()(double v) const {
        if (!std::isfinite(v)) return nullptr;
        // Same 15-digit rounding as the CSV output so both formats agree.
        return std::strtod(format_number(v).c_str(), nullptr);
    }
    json operator()(std::int64_t v) const { return v; }
    json operator()(const std::string& v) const { return v; }
    json operator()(bool v) const { return v; }
};

std::string extension(OutputFormat format) { return format == OutputFormat::Csv ? ".csv" : ".json"; }

std::filesystem::path with_suffix(const std::filesystem::path& stem, const std::string& suffix) {
    return std::filesystem::path(stem.string() + suffix);
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw OutputError("cannot create directory '" + path.parent_path().string() +
                              "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw OutputError("write to '" + path.string() + "' failed");
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(table.columns[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += std::visit(CsvCell{}, row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& table) {
    json doc;
    doc["columns"] = table.columns;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (const Cell& cell : row) r.push_back(std::visit(JsonCell{}, cell));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump() + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::filesystem::path output_stem(const ExperimentConfig& config) {
    std::filesystem::path p(config.output_path);
    const std::string ext = p.extension().string();
    if (ext == ".csv" || ext == ".json") p.replace_extension();
    return p;
}

std::string render_manifest(const ExperimentConfig& config, const ExperimentResult& result,
                            const RunInfo& info, const std::vector<WrittenFile>& files) {
    json doc;
    doc["tool"] = "ptladder";
    doc["version"] = info.version;
    doc["experiment"] = to_string(config.experiment);
    doc["preset"] = config.preset.empty() ? json(nullptr) : json(config.preset);
    doc["config"] = emit_config(config);
    doc["started_at"] = info.started_at;
    doc["duration_seconds"] = info.duration_seconds;
    doc["failed_cells"] = result.failed_cells;
    json outputs = json::array();
    for (const WrittenFile& f : files) {
        outputs.push_back({{"path", f.path.filename().string()},
                           {"rows", f.rows},
                           {"checksum", "fnv1a64:" + hex64(f.checksum)}});
    }
    doc["outputs"] = std::move(outputs);
    doc["summary"] = result.summary;
    return doc.dump(2);
}

std::vector<WrittenFile> write_outputs(const ExperimentConfig& config,
                                       const ExperimentResult& result, const RunInfo& info) {
    const std::filesystem::path stem = output_stem(config);
    std::vector<WrittenFile> files;
    for (const NamedTable& named : result.tables) {
        const std::string bytes = config.format == OutputFormat::Csv ? render_csv(named.table)
                                                                     : render_json(named.table);
        WrittenFile f;
        f.path = with_suffix(stem, named.suffix + extension(config.format));
        f.rows = named.table.rows.size();
        f.checksum = fnv1a64(bytes);
        write_file(f.path, bytes);
        files.push_back(std::move(f));
    }
    write_file(with_suffix(stem, ".manifest.json"),
               render_manifest(config, result, info, files) + "\n");
    return files;
}

}  // namespace ptladder::cli
