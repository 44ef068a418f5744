#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace kcgml {

// |V| x d embedding with a frozen node ordering (row i = NodeId i) plus the
// lineage needed to compare runs: generator name and RNG seed.
struct EmbeddingMatrix {
    std::string generator; // "node2vec" | "graphsage"
    std::uint64_t seed = 0;
    std::vector<std::string> ids; // raw node ids in row order
    Matrix values;

    std::size_t rows() const { return values.rows; }
    std::size_t dims() const { return values.cols; }

    // header `node_id,dim_0,...,dim_{d-1}`, one row per node, ascending id
    std::string to_csv() const;
    static EmbeddingMatrix from_csv(const std::string& text);

    void save_csv(const std::string& path) const;
    static EmbeddingMatrix load_csv(const std::string& path);

    bool operator==(const EmbeddingMatrix&) const = default;
};

} // namespace kcgml
