#pragma once

// Independent reference computations. Nothing here calls into the code under
// test beyond its data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "image_io.hpp"
#include "spectrum.hpp"

namespace oracle {

// Deterministic generator shared with the Python scripts that froze the
// reference values (64-bit LCG, Knuth MMIX constants, top 53 bits).
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed) {}
  double uniform() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }
};

// F(j,k) = sum_m sum_n exp(-2 pi i j m / N) exp(-2 pi i k n / N) A(m,n), evaluated directly.
inline fresh::ComplexMatrix naive_dft2(const fresh::RealMatrix& a) {
  const int n = static_cast<int>(a.rows());
  fresh::ComplexMatrix f(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
          const double angle = -2.0 * std::numbers::pi * (static_cast<double>(j) * m + static_cast<double>(k) * q) / n;
          acc += std::polar(a(m, q), angle);
        }
      f(j, k) = acc;
    }
  return f;
}

// Diagonal grouping over every (i, j) pair, using the naive DFT.
inline std::vector<double> brute_spectrum(const fresh::Image& image) {
  const int n = image.height;
  std::vector<double> s(n - 1, 0.0);
  for (int c = 0; c < image.channels; ++c) {
    fresh::RealMatrix a(n, n);
    for (int r = 0; r < n; ++r)
      for (int x = 0; x < n; ++x) a(r, x) = image.at(c, r, x);
    const auto f = naive_dft2(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int d = i + j;
        if (d >= 1 && d <= n - 1) s[d - 1] += std::abs(f(i, j));
      }
  }
  return s;
}

// Minimum-cost transport between p and q (support 1..n, cost |x - y|) solved
// as a min-cost flow on the complete bipartite graph with successive shortest
// paths. Makes no use of the one-dimensional structure.
inline double min_cost_transport(const std::vector<double>& p, const std::vector<double>& q) {
  const int n = static_cast<int>(p.size());
  const int m = static_cast<int>(q.size());
  const int source = n + m;
  const int sink = source + 1;
  const int nodes = sink + 1;
  struct Edge {
    int to;
    int rev;
    double cap;
    double cost;
  };
  std::vector<std::vector<Edge>> g(nodes);
  auto add = [&](int u, int v, double cap, double cost) {
    g[u].push_back({v, static_cast<int>(g[v].size()), cap, cost});
    g[v].push_back({u, static_cast<int>(g[u].size()) - 1, 0.0, -cost});
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) add(source, i, p[i], 0.0);
  for (int j = 0; j < m; ++j) add(n + j, sink, q[j], 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) add(i, n + j, inf, std::abs(i - j));

  constexpr double eps = 1e-15;
  double total = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<double> dist(nodes, inf);
    std::vector<int> prev_node(nodes, -1);
    std::vector<int> prev_edge(nodes, -1);
    dist[source] = 0.0;
    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (int u = 0; u < nodes; ++u) {
        if (dist[u] == inf) continue;
        for (int e = 0; e < static_cast<int>(g[u].size()); ++e) {
          const Edge& edge = g[u][e];
          if (edge.cap > eps && dist[u] + edge.cost < dist[edge.to] - 1e-12) {
            dist[edge.to] = dist[u] + edge.cost;
            prev_node[edge.to] = u;
            prev_edge[edge.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == inf) break;
    double push = inf;
    for (int v = sink; v != source; v = prev_node[v]) push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
    for (int v = sink; v != source; v = prev_node[v]) {
      Edge& edge = g[prev_node[v]][prev_edge[v]];
      edge.cap -= push;
      g[v][edge.rev].cap += push;
    }
    total += push * dist[sink];
  }
  return total;
}

// Luma for RGB, identity for gray.
inline std::vector<double> luma(const fresh::Image& im) {
  std::vector<double> out(im.pixel_count());
  for (int r = 0; r < im.height; ++r)
    for (int x = 0; x < im.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(r) * im.width + x;
      out[i] = im.channels == 1
                   ? im.at(0, r, x)
                   : 0.299 * im.at(0, r, x) + 0.587 * im.at(1, r, x) + 0.114 * im.at(2, r, x);
    }
  return out;
}

// SSIM with the full 11 x 11 Gaussian window evaluated at every valid position.
inline double brute_ssim(const fresh::Image& a, const fresh::Image& b) {
  const auto x = luma(a);
  const auto y = luma(b);
  const int h = a.height;
  const int w = a.width;
  double weights[11][11];
  double total = 0.0;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      weights[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * 1.5 * 1.5));
      total += weights[i][j];
    }
  const double c1 = 1e-4;
  const double c2 = 9e-4;
  double sum = 0.0;
  int count = 0;
  for (int r = 0; r + 11 <= h; ++r)
    for (int c = 0; c + 11 <= w; ++c) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
          const double g = weights[i][j] / total;
          const double xv = x[static_cast<std::size_t>(r + i) * w + c + j];
          const double yv = y[static_cast<std::size_t>(r + i) * w + c + j];
          mx += g * xv;
          my += g * yv;
          sxx += g * xv * xv;
          syy += g * yv * yv;
          sxy += g * xv * yv;
        }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      sum += (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  return sum / count;
}

// Corner-aligned bilinear sample of channel c at output pixel (r, x) of a side x side grid.
inline double bilinear(const fresh::Image& im, int c, int side, int r, int x) {
  const double sy = side == 1 ? 0.0 : r * (im.height - 1.0) / (side - 1.0);
  const double sx = side == 1 ? 0.0 : x * (im.width - 1.0) / (side - 1.0);
  const int y0 = static_cast<int>(std::floor(sy));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y1 = std::min(y0 + 1, im.height - 1);
  const int x1 = std::min(x0 + 1, im.width - 1);
  const double fy = sy - y0;
  const double fx = sx - x0;
  return (1 - fy) * ((1 - fx) * im.at(c, y0, x0) + fx * im.at(c, y0, x1)) +
         fy * ((1 - fx) * im.at(c, y1, x0) + fx * im.at(c, y1, x1));
}

}  // namespace oracle
