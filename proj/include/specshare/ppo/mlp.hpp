#ifndef SPECSHARE_PPO_MLP_HPP_
#define SPECSHARE_PPO_MLP_HPP_

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace specshare::ppo {

// Fully connected tanh network with a linear output layer. Parameters live in
// an external flat vector so several networks can share one optimizer; per
// layer the layout is W (out x in, column-major) followed by b (out).
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_params() const { return num_params_; }
  const std::vector<int>& sizes() const { return sizes_; }

  // Layer inputs kept for the backward pass; acts[0] is the batch itself.
  struct Cache {
    std::vector<Eigen::MatrixXd> acts;
  };

  // x holds one sample per column. `params` points at num_params() values.
  Eigen::MatrixXd forward(const double* params, const Eigen::MatrixXd& x,
                          Cache* cache = nullptr) const;
  // Adds dLoss/dparams into `grad` given dLoss/doutput.
  void backward(const double* params, const Cache& cache, const Eigen::MatrixXd& dout,
                double* grad) const;

  // Gaussian weights with std gain/sqrt(fan_in) (the last layer uses
  // out_gain instead of gain), zero biases.
  void init(double* params, std::mt19937_64& rng, double out_gain) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int num_params_ = 0;
};

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_MLP_HPP_
