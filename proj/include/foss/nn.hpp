#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "foss/rng.hpp"

namespace foss {

// Minimal dense layer with manually accumulated gradients.
struct Linear {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
  Eigen::MatrixXd gW;
  Eigen::VectorXd gb;

  Linear() = default;
  Linear(int out_dim, int in_dim) { resize(out_dim, in_dim); }

  void resize(int out_dim, int in_dim) {
    W = Eigen::MatrixXd::Zero(out_dim, in_dim);
    b = Eigen::VectorXd::Zero(out_dim);
    gW = Eigen::MatrixXd::Zero(out_dim, in_dim);
    gb = Eigen::VectorXd::Zero(out_dim);
  }

  void init(Rng& rng, double scale) {
    for (int i = 0; i < W.rows(); ++i)
      for (int j = 0; j < W.cols(); ++j) W(i, j) = scale * rng.next_normal();
    b.setZero();
  }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const { return W * x + b; }

  // accumulates parameter gradients, returns gradient w.r.t. the input
  Eigen::VectorXd backward(const Eigen::VectorXd& x, const Eigen::VectorXd& dy) {
    gW.noalias() += dy * x.transpose();
    gb += dy;
    return W.transpose() * dy;
  }

  void zero_grad() {
    gW.setZero();
    gb.setZero();
  }
};

inline Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double mx = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - mx).exp();
  return e / e.sum();
}

// Adam over a flat list of layers plus free parameter vectors.
class Adam {
 public:
  Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void register_layer(Linear* layer) { layers_.push_back(layer); }
  void register_vector(Eigen::VectorXd* param, Eigen::VectorXd* grad) {
    vectors_.push_back({param, grad});
  }

  void step() {
    if (mW_.empty()) allocate();
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    std::size_t k = 0;
    for (auto* l : layers_) {
      update(l->W, l->gW, mW_[k], vW_[k], bc1, bc2);
      update_vec(l->b, l->gb, mb_[k], vb_[k], bc1, bc2);
      ++k;
    }
    for (std::size_t i = 0; i < vectors_.size(); ++i)
      update_vec(*vectors_[i].first, *vectors_[i].second, mv_[i], vv_[i], bc1, bc2);
  }

  void zero_grad() {
    for (auto* l : layers_) l->zero_grad();
    for (auto& [p, g] : vectors_) g->setZero();
  }

 private:
  void allocate() {
    for (auto* l : layers_) {
      mW_.push_back(Eigen::MatrixXd::Zero(l->W.rows(), l->W.cols()));
      vW_.push_back(Eigen::MatrixXd::Zero(l->W.rows(), l->W.cols()));
      mb_.push_back(Eigen::VectorXd::Zero(l->b.size()));
      vb_.push_back(Eigen::VectorXd::Zero(l->b.size()));
    }
    for (auto& [p, g] : vectors_) {
      mv_.push_back(Eigen::VectorXd::Zero(p->size()));
      vv_.push_back(Eigen::VectorXd::Zero(p->size()));
    }
  }

  void update(Eigen::MatrixXd& w, const Eigen::MatrixXd& g, Eigen::MatrixXd& m,
              Eigen::MatrixXd& v, double bc1, double bc2) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v.array().matrix() + (1.0 - beta2_) * g.array().square().matrix();
    w.array() -= lr_ * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_);
  }
  void update_vec(Eigen::VectorXd& w, const Eigen::VectorXd& g, Eigen::VectorXd& m,
                  Eigen::VectorXd& v, double bc1, double bc2) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v.array().matrix() + (1.0 - beta2_) * g.array().square().matrix();
    w.array() -= lr_ * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_);
  }

  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Linear*> layers_;
  std::vector<std::pair<Eigen::VectorXd*, Eigen::VectorXd*>> vectors_;
  std::vector<Eigen::MatrixXd> mW_, vW_;
  std::vector<Eigen::VectorXd> mb_, vb_, mv_, vv_;
};

// JSON (de)serialization helpers for parameters
inline nlohmann::json linear_to_json(const Linear& l) {
  nlohmann::json j;
  j["rows"] = l.W.rows();
  j["cols"] = l.W.cols();
  std::vector<double> w(l.W.data(), l.W.data() + l.W.size());
  std::vector<double> b(l.b.data(), l.b.data() + l.b.size());
  j["W"] = w;
  j["b"] = b;
  return j;
}

inline Linear linear_from_json(const nlohmann::json& j) {
  Linear l(j.at("rows").get<int>(), j.at("cols").get<int>());
  const auto w = j.at("W").get<std::vector<double>>();
  const auto b = j.at("b").get<std::vector<double>>();
  if (static_cast<long>(w.size()) != l.W.size() ||
      static_cast<long>(b.size()) != l.b.size())
    throw std::runtime_error("linear_from_json: size mismatch");
  std::copy(w.begin(), w.end(), l.W.data());
  std::copy(b.begin(), b.end(), l.b.data());
  return l;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

}  // namespace foss
