#include "fedeval/jsonl.hpp"

#include "fedeval/rng.hpp"

#include <sstream>

namespace fedeval {

std::string canonical_dump(const nlohmann::json& value) {
    return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<nlohmann::json> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": " +
                          e.what());
        }
    }
    if (in.bad()) throw IoError("read error on '" + path.string() + "'");
    return out;
}

AtomicFileWriter::AtomicFileWriter(std::filesystem::path path)
    : path_(std::move(path)), tmp_path_(path_.string() + ".tmp") {
    if (!path_.parent_path().empty())
        std::filesystem::create_directories(path_.parent_path());
    out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open '" + tmp_path_.string() + "' for writing");
}

AtomicFileWriter::~AtomicFileWriter() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_path_, ec);
    }
}

void AtomicFileWriter::write_line(std::string_view line) {
    out_ << line << '\n';
    if (!out_) throw IoError("write error on '" + tmp_path_.string() + "'");
}

void AtomicFileWriter::write(std::string_view bytes) {
    out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out_) throw IoError("write error on '" + tmp_path_.string() + "'");
}

void AtomicFileWriter::commit() {
    out_.flush();
    if (!out_) throw IoError("flush error on '" + tmp_path_.string() + "'");
    out_.close();
    std::error_code ec;
    std::filesystem::rename(tmp_path_, path_, ec);
    if (ec)
        throw IoError("cannot rename '" + tmp_path_.string() + "' to '" +
                      path_.string() + "': " + ec.message());
    committed_ = true;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    AtomicFileWriter writer(path);
    writer.write(text);
    writer.commit();
}

std::string file_digest_hex(const std::filesystem::path& path) {
    return to_hex(fnv1a64(read_file(path)));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace fedeval
