#pragma once

#include "fedeval/error.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedeval {

// Canonical serialization used for every artifact: one JSON object per line,
// keys in lexicographic order (nlohmann's default object ordering), shortest
// round-trip float formatting, '\n' line ends. Digest-stable across runs.
std::string canonical_dump(const nlohmann::json& value);

// Parses a whole JSONL file. Errors cite the 1-based line number.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

template <class T>
std::vector<T> read_jsonl_as(const std::filesystem::path& path) {
    std::vector<T> out;
    std::size_t line_no = 0;
    for (auto& line : read_jsonl(path)) {
        ++line_no;
        try {
            out.push_back(line.get<T>());
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": " +
                          e.what());
        }
    }
    return out;
}

// Writes into "<path>.tmp" and renames on commit, so readers never observe a
// truncated artifact: the target either does not exist or is complete.
class AtomicFileWriter {
public:
    explicit AtomicFileWriter(std::filesystem::path path);
    ~AtomicFileWriter();

    AtomicFileWriter(const AtomicFileWriter&) = delete;
    AtomicFileWriter& operator=(const AtomicFileWriter&) = delete;

    void write_line(std::string_view line);
    void write(std::string_view bytes);
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_path_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_text_atomic(const std::filesystem::path& path, std::string_view text);

template <class T>
void write_jsonl(const std::filesystem::path& path, std::span<const T> records) {
    AtomicFileWriter writer(path);
    for (const auto& record : records)
        writer.write_line(canonical_dump(nlohmann::json(record)));
    writer.commit();
}

// hex16 FNV-1a over the file bytes; the digest recorded in manifests and
// compared by the determinism checks.
std::string file_digest_hex(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

} // namespace fedeval
