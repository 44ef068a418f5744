#include "core/embedding.hpp"

#include <sstream>

#include "core/ingest.hpp"
#include "core/status.hpp"
#include "core/text_io.hpp"

namespace kcgml {

std::string EmbeddingMatrix::to_csv() const {
    std::string out = "node_id";
    for (std::size_t d = 0; d < dims(); ++d) out += ",dim_" + std::to_string(d);
    out += '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
        out += ids[r];
        for (double v : values.row(r)) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

EmbeddingMatrix EmbeddingMatrix::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(Status::Truncated, "empty embedding csv");
    std::size_t dims = 0;
    {
        std::size_t pos = line.find(',');
        if (line.substr(0, pos) != "node_id")
            throw Error(Status::InputError, "embedding csv must start with node_id header");
        while (pos != std::string::npos) {
            ++dims;
            pos = line.find(',', pos + 1);
        }
    }
    EmbeddingMatrix out;
    std::vector<double> data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = line.find(',');
        if (pos == std::string::npos) throw Error(Status::InputError, "bad embedding csv row");
        out.ids.push_back(line.substr(0, pos));
        std::size_t count = 0;
        while (pos != std::string::npos) {
            const std::size_t next = line.find(',', pos + 1);
            const std::size_t len =
                (next == std::string::npos ? line.size() : next) - pos - 1;
            const auto v = parse_double(std::string_view(line).substr(pos + 1, len));
            if (!v) throw Error(Status::InputError, "bad embedding value in csv");
            data.push_back(*v);
            ++count;
            pos = next;
        }
        if (count != dims) throw Error(Status::InputError, "ragged embedding csv row");
    }
    out.values.rows = out.ids.size();
    out.values.cols = dims;
    out.values.data = std::move(data);
    return out;
}

void EmbeddingMatrix::save_csv(const std::string& path) const { write_text_file(path, to_csv()); }

EmbeddingMatrix EmbeddingMatrix::load_csv(const std::string& path) {
    return from_csv(read_text_file(path));
}

} // namespace kcgml
