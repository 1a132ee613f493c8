#include "specshare/ppo/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specshare::ppo {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(num_params_);
    num_params_ += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
}

MatrixXd Mlp::forward(const double* params, const MatrixXd& x, Cache* cache) const {
  if (x.rows() != input_size()) {
    throw std::invalid_argument("Mlp: input has " + std::to_string(x.rows()) +
                                " rows, expected " + std::to_string(input_size()));
  }
  const int layers = static_cast<int>(offsets_.size());
  if (cache != nullptr) {
    cache->acts.resize(layers);
    cache->acts[0] = x;
  }
  MatrixXd h = x;
  for (int l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    Map<const MatrixXd> w(params + offsets_[l], out, in);
    Map<const VectorXd> b(params + offsets_[l] + out * in, out);
    MatrixXd z = w * h;
    z.colwise() += b;
    if (l + 1 < layers) {
      h = z.array().tanh().matrix();
      if (cache != nullptr) cache->acts[l + 1] = h;
    } else {
      h = std::move(z);
    }
  }
  return h;
}

void Mlp::backward(const double* params, const Cache& cache, const MatrixXd& dout,
                   double* grad) const {
  const int layers = static_cast<int>(offsets_.size());
  MatrixXd dz = dout;
  for (int l = layers - 1; l >= 0; --l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const MatrixXd& a = cache.acts[l];
    Map<MatrixXd> gw(grad + offsets_[l], out, in);
    Map<VectorXd> gb(grad + offsets_[l] + out * in, out);
    gw.noalias() += dz * a.transpose();
    gb += dz.rowwise().sum();
    if (l > 0) {
      Map<const MatrixXd> w(params + offsets_[l], out, in);
      MatrixXd da = w.transpose() * dz;
      dz = (da.array() * (1.0 - a.array().square())).matrix();
    }
  }
}

void Mlp::init(double* params, std::mt19937_64& rng, double out_gain) const {
  const int layers = static_cast<int>(offsets_.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double gain = l + 1 < layers ? 1.0 : out_gain;
    const double scale = gain / std::sqrt(static_cast<double>(in));
    double* w = params + offsets_[l];
    for (int i = 0; i < out * in; ++i) w[i] = scale * normal(rng);
    for (int i = 0; i < out; ++i) w[out * in + i] = 0.0;
  }
}

}  // namespace specshare::ppo
