#include "posync/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace posync {

void Graph::validate() const {
    if (n == 0) throw std::invalid_argument("Graph: empty node set");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : edges) {
        if (e.i >= e.j) throw std::invalid_argument("Graph: edge must have i < j");
        if (e.j >= n) throw std::invalid_argument("Graph: node index out of range");
        if (e.w <= 0.0) throw std::invalid_argument("Graph: weight must be positive");
        if (!seen.insert({e.i, e.j}).second) {
            throw std::invalid_argument("Graph: duplicate edge");
        }
    }
}

Matrix laplacian(const Graph& g) {
    Matrix l(g.n, g.n);
    for (const Edge& e : g.edges) {
        l(e.i, e.j) -= e.w;
        l(e.j, e.i) -= e.w;
        l(e.i, e.i) += e.w;
        l(e.j, e.j) += e.w;
    }
    return l;
}

std::vector<double> weighted_degrees(const Graph& g) {
    std::vector<double> deg(g.n, 0.0);
    for (const Edge& e : g.edges) {
        deg[e.i] += e.w;
        deg[e.j] += e.w;
    }
    return deg;
}

SpectralSummary spectral_summary(const Graph& g, double tol) {
    const EigenDecomposition eig = sym_eigen(laplacian(g));
    SpectralSummary s;
    s.eigenvalues = eig.eigenvalues;
    s.lambda2 = g.n > 1 ? eig.eigenvalues[1] : 0.0;
    s.lambdaN = eig.eigenvalues.back();
    s.is_connected = g.n == 1 || s.lambda2 > tol;
    return s;
}

bool in_family(const Graph& g, double beta, double gamma, double tol) {
    if (beta > gamma) throw std::invalid_argument("in_family: beta > gamma");
    const SpectralSummary s = spectral_summary(g);
    if (!s.is_connected) return false;
    for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) {
        const double lam = s.eigenvalues[k];
        if (lam < beta - tol || lam > gamma + tol) return false;
    }
    return true;
}

double anderson_morley_bound(const Graph& g) {
    if (g.edges.empty()) throw std::invalid_argument("anderson_morley_bound: edgeless graph");
    const std::vector<double> deg = weighted_degrees(g);
    double best = 0.0;
    for (const Edge& e : g.edges) best = std::max(best, deg[e.i] + deg[e.j]);
    return best;
}

bool bfs_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<std::vector<std::size_t>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<char> seen(g.n, 0);
    std::vector<std::size_t> queue{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
        const std::size_t v = queue.back();
        queue.pop_back();
        for (std::size_t u : adj[v]) {
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                queue.push_back(u);
            }
        }
    }
    return count == g.n;
}

Graph gen_complete(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_complete: need n >= 2");
    Graph g{n, {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.edges.push_back({i, j, 1.0});
    return g;
}

Graph gen_path(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_path: need n >= 2");
    Graph g{n, {}};
    for (std::size_t i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, 1.0});
    return g;
}

Graph gen_cycle(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_cycle: need n >= 2");
    Graph g = gen_path(n);
    if (n > 2) g.edges.push_back({0, n - 1, 1.0});
    return g;
}

Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d >= n) throw std::invalid_argument("gen_random_regular: need d < n");
    if ((n * d) % 2 != 0) {
        throw std::invalid_argument("gen_random_regular: n*d must be even");
    }
    std::mt19937_64 rng(seed);
    const int max_attempts = 1000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // stub pairing with local retries; restart only when a legal pair
        // becomes hard to find (avoids whole-graph rejection, which is
        // hopeless for larger d)
        std::vector<std::size_t> stubs(n * d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) stubs[i * d + k] = i;
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        bool ok = true;
        while (!stubs.empty() && ok) {
            ok = false;
            for (int tries = 0; tries < 500; ++tries) {
                std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
                const std::size_t ia = pick(rng);
                const std::size_t ib = pick(rng);
                if (ia == ib) continue;
                std::size_t a = stubs[ia], b = stubs[ib];
                if (a == b) continue;
                if (a > b) std::swap(a, b);
                if (!pairs.insert({a, b}).second) continue;
                // remove the two stubs, higher index first
                const std::size_t hi = std::max(ia, ib), lo = std::min(ia, ib);
                stubs[hi] = stubs.back();
                stubs.pop_back();
                stubs[lo] = stubs.back();
                stubs.pop_back();
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        Graph g{n, {}};
        for (const auto& [a, b] : pairs) g.edges.push_back({a, b, 1.0});
        if (bfs_connected(g)) return g;
    }
    throw std::runtime_error("gen_random_regular: no simple connected graph after 1000 attempts");
}

Graph gen_erdos_renyi(std::size_t n, double p_edge, std::uint64_t seed) {
    if (p_edge <= 0.0 || p_edge > 1.0) {
        throw std::invalid_argument("gen_erdos_renyi: need 0 < p_edge <= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Graph g{n, {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (u(rng) < p_edge) g.edges.push_back({i, j, 1.0});
    return g;
}

void save_edge_list(const Graph& g, std::ostream& os) {
    os << "n " << g.n << "\n";
    char buf[64];
    for (const Edge& e : g.edges) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.w);
        os << e.i << " " << e.j << " " << buf << "\n";
    }
}

Graph load_edge_list(std::istream& is) {
    std::string tag;
    Graph g;
    if (!(is >> tag >> g.n) || tag != "n") {
        throw std::runtime_error("load_edge_list: bad header, expected \"n <count>\"");
    }
    std::size_t i, j;
    double w;
    while (is >> i >> j >> w) g.edges.push_back({i, j, w});
    g.validate();
    return g;
}

void save_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    save_edge_list(g, os);
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return load_edge_list(is);
}

} // namespace posync
