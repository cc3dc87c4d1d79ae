#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ncer {

// Bad or inconsistent input (shape mismatch, unparsable file, invalid config).
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: rank deficiency, iteration caps, degenerate scalings.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A vertex with zero degree in the similarity graph.
class isolated_vertex_error : public numerical_error {
 public:
  explicit isolated_vertex_error(std::vector<int> vertices)
      : numerical_error("isolated vertices (zero degree) at indices: " +
                        join(vertices)),
        vertices_(std::move(vertices)) {}

  const std::vector<int>& vertices() const { return vertices_; }

 private:
  static std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(v[i]);
    }
    return s;
  }
  std::vector<int> vertices_;
};

class rank_deficient_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// The spectral embedding does not have full row rank r.
class rank_deficient_embedding_error : public rank_deficient_error {
 public:
  using rank_deficient_error::rank_deficient_error;
};

class iteration_cap_error : public numerical_error {
 public:
  iteration_cap_error(const std::string& what, double best_gap)
      : numerical_error(what + " (best relative gap attained: " +
                        std::to_string(best_gap) + ")"),
        best_gap_(best_gap) {}

  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

// A column with w^T b = 0 cannot be scaled onto the hyperplane.
class hyperplane_degenerate_error : public numerical_error {
 public:
  explicit hyperplane_degenerate_error(std::vector<int> columns)
      : numerical_error("hyperplane scaling degenerate at columns: " +
                        std::to_string(columns.size()) + " offending"),
        columns_(std::move(columns)) {}

  const std::vector<int>& columns() const { return columns_; }

 private:
  std::vector<int> columns_;
};

}  // namespace ncer
