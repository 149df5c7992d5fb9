#include "cfmimo/similarity.hpp"

#include <cmath>
#include <stdexcept>

namespace cfmimo {

namespace {

// tr(A B) for Hermitian A, B equals the real Frobenius inner product.
double hermitian_trace_product(const Eigen::MatrixXcd& a,
                               const Eigen::MatrixXcd& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

}  // namespace

std::complex<double> instantaneous_similarity(
    const Eigen::Ref<const Eigen::VectorXcd>& h_k,
    const Eigen::Ref<const Eigen::VectorXcd>& h_v) {
  const double nk = h_k.norm();
  const double nv = h_v.norm();
  if (nk == 0.0 || nv == 0.0) {
    throw std::domain_error(
        "instantaneous_similarity: zero-norm channel vector");
  }
  return h_k.dot(h_v) / (nk * nv);
}

double expected_similarity_ue(const CovarianceSet& cov, int k, int v) {
  double num = 0.0;
  double trace_k = 0.0;
  double trace_v = 0.0;
  for (int l = 0; l < cov.ap_count(); ++l) {
    num += hermitian_trace_product(cov.covariance(k, l), cov.covariance(v, l));
    trace_k += cov.covariance(k, l).trace().real();
    trace_v += cov.covariance(v, l).trace().real();
  }
  if (trace_k <= 0.0 || trace_v <= 0.0) {
    throw std::domain_error("expected_similarity_ue: zero total trace");
  }
  return num / (trace_k * trace_v);
}

double expected_similarity_ap(const CovarianceSet& cov, int l, int j) {
  double num = 0.0;
  double trace_l = 0.0;
  double trace_j = 0.0;
  for (int k = 0; k < cov.ue_count(); ++k) {
    num += hermitian_trace_product(cov.covariance(k, l), cov.covariance(k, j));
    trace_l += cov.covariance(k, l).trace().real();
    trace_j += cov.covariance(k, j).trace().real();
  }
  if (trace_l <= 0.0 || trace_j <= 0.0) {
    throw std::domain_error("expected_similarity_ap: zero total trace");
  }
  return num / (trace_l * trace_j);
}

namespace {

// Re/Im of all vec(R_.l) blocks stacked into one real column per UE (or
// per AP when transposed): pairwise trace products then collapse into a
// single Gram matrix, sum_l tr(R_al R_bl) = stacked_a . stacked_b.
Eigen::MatrixXd stacked_blocks(const CovarianceSet& cov, bool column_per_ue) {
  const int entries = cov.antennas() * cov.antennas();
  const int cols = column_per_ue ? cov.ue_count() : cov.ap_count();
  const int blocks = column_per_ue ? cov.ap_count() : cov.ue_count();
  Eigen::MatrixXd f(2 * entries * blocks, cols);
  for (int c = 0; c < cols; ++c) {
    for (int b = 0; b < blocks; ++b) {
      const Eigen::MatrixXcd& r =
          column_per_ue ? cov.covariance(c, b) : cov.covariance(b, c);
      const auto flat = r.reshaped();
      f.col(c).segment(2 * entries * b, entries) = flat.real();
      f.col(c).segment(2 * entries * b + entries, entries) = flat.imag();
    }
  }
  return f;
}

Eigen::MatrixXd normalized_similarity(const Eigen::MatrixXd& stacked,
                                      const Eigen::VectorXd& total_trace,
                                      const char* where) {
  if (total_trace.minCoeff() <= 0.0) {
    throw std::domain_error(std::string(where) + ": zero total trace");
  }
  Eigen::MatrixXd s(stacked.cols(), stacked.cols());
  s.noalias() = stacked.transpose() * stacked;
  const Eigen::ArrayXd inv_trace = total_trace.array().inverse();
  s.array().colwise() *= inv_trace;
  s.array().rowwise() *= inv_trace.transpose();
  s = s.cwiseMax(0.0).cwiseSqrt();
  s.diagonal().setZero();
  return s;
}

}  // namespace

UESimilarityMatrix ue_similarity_matrix(const CovarianceSet& cov) {
  UESimilarityMatrix sim;
  sim.metric = SimilarityMetric::kStatistical;
  Eigen::VectorXd total_trace = Eigen::VectorXd::Zero(cov.ue_count());
  for (int k = 0; k < cov.ue_count(); ++k) {
    for (int l = 0; l < cov.ap_count(); ++l) {
      total_trace[k] += cov.covariance(k, l).trace().real();
    }
  }
  sim.s = normalized_similarity(stacked_blocks(cov, /*column_per_ue=*/true),
                                total_trace, "ue_similarity_matrix");
  return sim;
}

UESimilarityMatrix ue_similarity_matrix(const ChannelRealization& real) {
  const int ue_count = real.ue_count();
  UESimilarityMatrix sim;
  sim.metric = SimilarityMetric::kInstantaneous;
  sim.s = Eigen::MatrixXd::Zero(ue_count, ue_count);
  std::vector<Eigen::VectorXcd> stacked(ue_count);
  for (int k = 0; k < ue_count; ++k) stacked[k] = real.stacked_ue(k);
  for (int k = 0; k < ue_count; ++k) {
    for (int v = k + 1; v < ue_count; ++v) {
      const double value =
          std::abs(instantaneous_similarity(stacked[k], stacked[v]));
      sim.s(k, v) = value;
      sim.s(v, k) = value;
    }
  }
  return sim;
}

APSimilarityMatrix ap_similarity_matrix(const CovarianceSet& cov) {
  APSimilarityMatrix sim;
  Eigen::VectorXd total_trace = Eigen::VectorXd::Zero(cov.ap_count());
  for (int l = 0; l < cov.ap_count(); ++l) {
    for (int k = 0; k < cov.ue_count(); ++k) {
      total_trace[l] += cov.covariance(k, l).trace().real();
    }
  }
  sim.e = normalized_similarity(stacked_blocks(cov, /*column_per_ue=*/false),
                                total_trace, "ap_similarity_matrix");
  return sim;
}

}  // namespace cfmimo
