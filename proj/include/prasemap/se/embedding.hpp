#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/kg/knowledge_graph.hpp"

namespace prase {

// Row-major matrix of entity vectors for one KG.
class VectorTable {
public:
    VectorTable() = default;
    VectorTable(std::size_t rows, std::size_t dimension) : dimension_(dimension), data_(rows * dimension, 0.0) {}

    std::size_t rows() const noexcept { return dimension_ == 0 ? 0 : data_.size() / dimension_; }
    std::size_t dimension() const noexcept { return dimension_; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * dimension_, dimension_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dimension_, dimension_}; }

    bool operator==(const VectorTable&) const = default;

private:
    std::size_t dimension_ = 0;
    std::vector<double> data_;
};

struct EmbeddingSet {
    std::size_t dimension = 0;
    VectorTable vectors_left;
    VectorTable vectors_right;
    std::vector<std::pair<int, double>> loss_trace;  // (epoch, mean loss)

    std::span<const double> vector(Side side, EntityId e) const {
        return side == Side::Left ? vectors_left.row(e) : vectors_right.row(e);
    }
};

inline double dot(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline double norm(std::span<const double> u) { return std::sqrt(dot(u, u)); }

inline double euclidean_distance(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Cosine similarity clamped below at 0, so the result can serve directly as a
// probability-like similarity.
inline double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error("cosine_similarity: dimension mismatch");
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw ZeroVector();
    const double c = dot(u, v) / (nu * nv);
    return std::clamp(c, 0.0, 1.0);
}

}  // namespace prase
