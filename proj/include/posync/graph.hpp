#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "posync/linalg.hpp"
#include "posync/matrix.hpp"

namespace posync {

struct Edge {
    std::size_t i, j; // i < j
    double w;         // > 0
};

/// Weighted undirected graph. No self-loops, at most one edge per pair,
/// strictly positive weights; validate() enforces the invariants.
struct Graph {
    std::size_t n = 0;
    std::vector<Edge> edges;

    void validate() const;
};

struct SpectralSummary {
    Vector eigenvalues; // ascending
    double lambda2;
    double lambdaN;
    bool is_connected;
};

Matrix laplacian(const Graph& g);

SpectralSummary spectral_summary(const Graph& g, double tol = 1e-7);

/// membership in G_[beta,gamma]: connected and all nonzero Laplacian
/// eigenvalues within [beta - tol, gamma + tol]
bool in_family(const Graph& g, double beta, double gamma, double tol = 1e-9);

/// max over edges of the weighted endpoint degree sum; an upper bound on
/// the largest Laplacian eigenvalue
double anderson_morley_bound(const Graph& g);

bool bfs_connected(const Graph& g);
std::vector<double> weighted_degrees(const Graph& g);

Graph gen_complete(std::size_t n);
Graph gen_path(std::size_t n);
Graph gen_cycle(std::size_t n);

/// Configuration-model pairing with rejection of self-loops, multi-edges and
/// disconnected outcomes. Deterministic per seed.
Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

Graph gen_erdos_renyi(std::size_t n, double p_edge, std::uint64_t seed);

// edge-list text format: header "n <node_count>", then one "i j w" line per
// edge, 0-based, weights printed with 17 significant digits
void save_edge_list(const Graph& g, std::ostream& os);
Graph load_edge_list(std::istream& is);
void save_edge_list_file(const Graph& g, const std::string& path);
Graph load_edge_list_file(const std::string& path);

} // namespace posync
