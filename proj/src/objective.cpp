#include "mubsearch/objective.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mub {

namespace {

void require_same_square(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (!a.square() || !b.square() || a.rows() != b.rows()) {
    throw std::invalid_argument(std::string(what) + ": bases must be square and of equal size");
  }
}

// Overlap entry (l, m) = sum_k conj(a_kl) b_km, without materializing a^H.
inline Complex overlap_entry(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t l,
                             std::size_t m) {
  Complex acc = 0.0;
  for (std::size_t k = 0; k < a.rows(); ++k) acc += std::conj(a(k, l)) * b(k, m);
  return acc;
}

double pair_residual_unchecked(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t d = a.rows();
  const double target = 1.0 / static_cast<double>(d);
  double sum = 0.0;
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t m = 0; m < d; ++m) {
      const double dev = std::norm(overlap_entry(a, b, l, m)) - target;
      sum += dev * dev;
    }
  }
  return sum;
}

// pair_residual(I, b): the overlap matrix is b itself.
double identity_pair_residual(const ComplexMatrix& b) {
  const double target = 1.0 / static_cast<double>(b.rows());
  double sum = 0.0;
  for (const auto& z : b.entries()) {
    const double dev = std::norm(z) - target;
    sum += dev * dev;
  }
  return sum;
}

bool pair_unbiased(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  const std::size_t d = a.rows();
  const double target = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t m = 0; m < d; ++m)
      if (!(std::abs(std::abs(overlap_entry(a, b, l, m)) - target) < tol)) return false;
  return true;
}

}  // namespace

void BasisSet::validate() const {
  if (d < 2) throw std::invalid_argument("basis set: d must be at least 2");
  if (m < 1) throw std::invalid_argument("basis set: m must be at least 1");
  if (bases.size() != m) {
    throw std::invalid_argument("basis set: expected " + std::to_string(m) + " bases, found " +
                                std::to_string(bases.size()));
  }
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].rows() != d || bases[i].cols() != d) {
      throw std::invalid_argument("basis set: basis " + std::to_string(i + 1) + " is " +
                                  std::to_string(bases[i].rows()) + "x" +
                                  std::to_string(bases[i].cols()) + ", expected d=" +
                                  std::to_string(d));
    }
  }
  if (gauge_fixed && max_abs_difference(bases.front(), ComplexMatrix::identity(d)) > 1e-12) {
    throw std::invalid_argument("basis set: gauge_fixed requires the first basis to be the identity");
  }
}

ComplexMatrix overlap_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_square(a, b, "overlap_matrix");
  const std::size_t d = a.rows();
  ComplexMatrix out(d, d);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t m = 0; m < d; ++m) out(l, m) = overlap_entry(a, b, l, m);
  return out;
}

double pair_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_square(a, b, "pair_residual");
  return pair_residual_unchecked(a, b);
}

double objective_of_bases(std::span<const ComplexMatrix> bases) {
  double total = 0.0;
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i + 1; j < bases.size(); ++j) total += pair_residual(bases[i], bases[j]);
  return total;
}

double objective(std::span<const AngleVector> x, std::size_t d, std::size_t m, bool gauge_fixed) {
  ObjectiveEvaluator eval(d, m, gauge_fixed);
  if (x.size() != eval.free_bases()) {
    throw std::invalid_argument("objective: expected " + std::to_string(eval.free_bases()) +
                                " angle vectors, got " + std::to_string(x.size()));
  }
  std::vector<double> flat;
  flat.reserve(eval.dimension());
  for (const auto& v : x) {
    if (v.size() != angle_count(d)) {
      throw std::invalid_argument("objective: angle vector length " + std::to_string(v.size()) +
                                  ", expected " + std::to_string(angle_count(d)));
    }
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return eval(flat);
}

ObjectiveEvaluator::ObjectiveEvaluator(std::size_t d, std::size_t m, bool gauge_fixed)
    : d_(d), m_(m), gauge_fixed_(gauge_fixed) {
  if (d < 2) throw std::invalid_argument("objective: d must be at least 2");
  if (m < 2) throw std::invalid_argument("objective: m must be at least 2");
  bases_.assign(m, ComplexMatrix(d, d));
  if (gauge_fixed_) bases_[0] = ComplexMatrix::identity(d);
  cached_x_.assign(dimension(), 0.0);
  basis_valid_.assign(free_bases(), false);
  basis_dirty_.assign(m, true);
  pair_cache_.assign(m * m, 0.0);
}

double ObjectiveEvaluator::operator()(std::span<const double> x) {
  if (x.size() != dimension()) {
    throw std::invalid_argument("objective: coordinate vector has " + std::to_string(x.size()) +
                                " entries, expected " + std::to_string(dimension()));
  }
  const std::size_t stride = angle_count(d_);
  const std::size_t first = gauge_fixed_ ? 1 : 0;
  for (std::size_t b = 0; b < free_bases(); ++b) {
    const auto angles = x.subspan(b * stride, stride);
    double* cached = cached_x_.data() + b * stride;
    // Bitwise comparison: a cached matrix is reused only for identical angles.
    const bool same = basis_valid_[b] && std::equal(angles.begin(), angles.end(), cached,
                                                    [](double u, double v) {
                                                      return std::bit_cast<std::uint64_t>(u) ==
                                                             std::bit_cast<std::uint64_t>(v);
                                                    });
    basis_dirty_[first + b] = !same;
    if (!same) {
      compose_unitary_into(angles, d_, bases_[first + b]);
      std::copy(angles.begin(), angles.end(), cached);
      basis_valid_[b] = true;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = i + 1; j < m_; ++j) {
      double& slot = pair_cache_[i * m_ + j];
      if (basis_dirty_[i] || basis_dirty_[j]) {
        slot = (gauge_fixed_ && i == 0) ? identity_pair_residual(bases_[j])
                                         : pair_residual_unchecked(bases_[i], bases_[j]);
      }
      total += slot;
    }
  }
  if (gauge_fixed_) basis_dirty_[0] = false;
  return total;
}

std::vector<AngleVector> ObjectiveEvaluator::split(std::span<const double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("split: wrong coordinate count");
  const std::size_t stride = angle_count(d_);
  std::vector<AngleVector> out;
  for (std::size_t b = 0; b < free_bases(); ++b) {
    auto part = x.subspan(b * stride, stride);
    out.emplace_back(part.begin(), part.end());
  }
  return out;
}

BasisSet ObjectiveEvaluator::assemble(std::span<const double> x) const {
  BasisSet set{d_, m_, gauge_fixed_, {}};
  if (gauge_fixed_) set.bases.push_back(ComplexMatrix::identity(d_));
  for (const auto& v : split(x)) set.bases.push_back(compose_unitary(HurwitzAngles::from_vector(d_, v)));
  return set;
}

ResidualReport residual_report(const BasisSet& set) {
  set.validate();
  ResidualReport rep;
  const double target = 1.0 / static_cast<double>(set.d);
  bool first = true;
  for (std::size_t i = 0; i < set.m; ++i) {
    for (std::size_t j = i + 1; j < set.m; ++j) {
      const ComplexMatrix& a = set.bases[i];
      const ComplexMatrix& b = set.bases[j];
      double sum = 0.0;
      for (std::size_t l = 0; l < set.d; ++l) {
        for (std::size_t c = 0; c < set.d; ++c) {
          const double dev = std::norm(overlap_entry(a, b, l, c)) - target;
          sum += dev * dev;
          if (first || std::abs(dev) > rep.worst_entry.value) {
            rep.worst_entry = {i + 1, j + 1, l, c, std::abs(dev)};
            first = false;
          }
        }
      }
      rep.per_pair.push_back({i + 1, j + 1, sum});
      rep.total += sum;
    }
  }
  rep.pair_count = rep.per_pair.size();
  return rep;
}

Verification verify_mub(const BasisSet& set, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("verify_mub: tolerance must be positive");
  Verification v;
  v.report = residual_report(set);
  for (const auto& b : set.bases) v.worst_unitarity_defect = std::max(v.worst_unitarity_defect, unitarity_defect(b));
  const double target = 1.0 / std::sqrt(static_cast<double>(set.d));
  for (std::size_t i = 0; i < set.m; ++i)
    for (std::size_t j = i + 1; j < set.m; ++j)
      for (std::size_t l = 0; l < set.d; ++l)
        for (std::size_t c = 0; c < set.d; ++c) {
          const double dev = std::abs(std::abs(overlap_entry(set.bases[i], set.bases[j], l, c)) - target);
          v.worst_modulus_deviation = std::max(v.worst_modulus_deviation, dev);
        }
  v.orthonormal = v.worst_unitarity_defect < tol;
  v.unbiased = v.worst_modulus_deviation < tol;
  v.passed = v.orthonormal && v.unbiased;
  return v;
}

bool is_hadamard_like(const ComplexMatrix& h, double tol) {
  if (!h.square()) throw std::invalid_argument("is_hadamard_like: matrix is not square");
  const double target = 1.0 / std::sqrt(static_cast<double>(h.rows()));
  for (const auto& z : h.entries())
    if (!(std::abs(std::abs(z) - target) < tol)) return false;
  return true;
}

std::vector<std::size_t> max_mu_subset(const BasisSet& set, double tol) {
  set.validate();
  const std::size_t m = set.m;
  std::vector<std::vector<bool>> ok(m, std::vector<bool>(m, true));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      ok[i][j] = ok[j][i] = pair_unbiased(set.bases[i], set.bases[j], tol);

  // Walk sizes from m down; combinations of each size come out in lexicographic order.
  for (std::size_t size = m; size >= 1; --size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t t = 0; t < size; ++t) pick[t] = t;
    while (true) {
      bool clique = true;
      for (std::size_t a = 0; a < size && clique; ++a)
        for (std::size_t b = a + 1; b < size && clique; ++b) clique = ok[pick[a]][pick[b]];
      if (clique) {
        for (auto& p : pick) ++p;
        return pick;
      }
      std::size_t t = size;
      while (t > 0 && pick[t - 1] == m - size + t - 1) --t;
      if (t == 0) break;
      ++pick[t - 1];
      for (std::size_t u = t; u < size; ++u) pick[u] = pick[u - 1] + 1;
    }
  }
  return {};
}

}  // namespace mub
