#pragma once

#include <Eigen/Dense>

#include "foss/nn.hpp"
#include "foss/plan.hpp"

namespace foss {

// Pooled state encoder: linear per-node embedding, mean pooling weighted by
// reachability-mask row sums, step fraction appended, one tanh hidden layer.
struct EncoderParams {
  Linear embed;   // embed_dim x feature_width
  Linear hidden;  // state_dim x (embed_dim + 1)

  int embed_dim() const { return static_cast<int>(embed.W.rows()); }
  int state_dim() const { return static_cast<int>(hidden.W.rows()); }

  static EncoderParams make(int feature_width, int embed_dim, int state_dim,
                            Rng& rng) {
    EncoderParams p;
    p.embed.resize(embed_dim, feature_width);
    p.hidden.resize(state_dim, embed_dim + 1);
    p.embed.init(rng, 1.0 / std::sqrt(static_cast<double>(feature_width)));
    p.hidden.init(rng, 1.0 / std::sqrt(static_cast<double>(embed_dim + 1)));
    return p;
  }

  void zero_grad() {
    embed.zero_grad();
    hidden.zero_grad();
  }
};

struct EncoderCache {
  Eigen::VectorXd weighted_input;  // sum_i w_i x_i (feature space)
  Eigen::VectorXd hidden_in;       // [pooled; step]
  Eigen::VectorXd statevec;
};

inline Eigen::VectorXd encode_state(const StateFeatures& sf, const EncoderParams& p,
                                    EncoderCache* cache = nullptr) {
  const int nodes = static_cast<int>(sf.nodes.rows());
  Eigen::VectorXd weights(nodes);
  for (int i = 0; i < nodes; ++i)
    weights(i) = static_cast<double>(sf.mask.row(i).sum());
  weights /= weights.sum();

  // pooled embedding equals embed(weighted mean input) since embed is linear
  Eigen::VectorXd wx = sf.nodes.transpose() * weights;
  Eigen::VectorXd pooled = p.embed.forward(wx);

  Eigen::VectorXd hin(pooled.size() + 1);
  hin << pooled, sf.step_fraction;
  Eigen::VectorXd sv = p.hidden.forward(hin).array().tanh().matrix();
  if (cache) {
    cache->weighted_input = wx;
    cache->hidden_in = hin;
    cache->statevec = sv;
  }
  return sv;
}

inline void encode_backward(const Eigen::VectorXd& dstatevec, EncoderParams& p,
                            const EncoderCache& cache) {
  const Eigen::VectorXd dpre =
      (dstatevec.array() * (1.0 - cache.statevec.array().square())).matrix();
  const Eigen::VectorXd dhin = p.hidden.backward(cache.hidden_in, dpre);
  const Eigen::VectorXd dpooled = dhin.head(dhin.size() - 1);
  p.embed.backward(cache.weighted_input, dpooled);
}

}  // namespace foss
