#include "moeope/models/mlp.hpp"

#include "moeope/core/error.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <string>

namespace moeope {

namespace {

std::vector<std::size_t> layer_sizes(const MlpArchitecture& arch) {
  std::vector<std::size_t> sizes{arch.n_inputs};
  sizes.insert(sizes.end(), arch.hidden.begin(), arch.hidden.end());
  sizes.push_back(arch.n_outputs);
  return sizes;
}

struct LayerView {
  Eigen::Map<const Eigen::MatrixXd> w;
  Eigen::Map<const Eigen::VectorXd> b;
};

std::vector<LayerView> layers(const MlpArchitecture& arch, const Eigen::VectorXd& params) {
  const auto sizes = layer_sizes(arch);
  std::vector<LayerView> out;
  std::size_t off = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(sizes[l - 1]);
    const auto o = static_cast<Eigen::Index>(sizes[l]);
    out.push_back(LayerView{Eigen::Map<const Eigen::MatrixXd>(params.data() + off, o, in),
                            Eigen::Map<const Eigen::VectorXd>(params.data() + off + o * in, o)});
    off += static_cast<std::size_t>(o * in + o);
  }
  return out;
}

void activate(Eigen::MatrixXd& z, Activation act) {
  if (act == Activation::tanh) z = z.array().tanh().matrix();
}

}  // namespace

std::size_t MlpArchitecture::n_params() const {
  const auto sizes = layer_sizes(*this);
  std::size_t n = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) n += sizes[l] * sizes[l - 1] + sizes[l];
  return n;
}

MlpNetwork::MlpNetwork(MlpArchitecture arch, Eigen::VectorXd params)
    : arch_(std::move(arch)), params_(std::move(params)) {
  if (arch_.n_inputs == 0 || arch_.n_outputs == 0) throw Error("network needs inputs and outputs");
  for (std::size_t h : arch_.hidden)
    if (h == 0) throw Error("hidden layers must have at least one unit");
  if (static_cast<std::size_t>(params_.size()) != arch_.n_params())
    throw DimensionMismatch("network expects " + std::to_string(arch_.n_params()) +
                            " parameters, got " + std::to_string(params_.size()));
}

MlpNetwork MlpNetwork::random(const MlpArchitecture& arch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd params = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(arch.n_params()));
  const auto sizes = layer_sizes(arch);
  std::size_t off = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(sizes[l - 1] + sizes[l]));
    std::uniform_real_distribution<double> u(-limit, limit);
    const std::size_t nw = sizes[l] * sizes[l - 1];
    for (std::size_t k = 0; k < nw; ++k) params[static_cast<Eigen::Index>(off + k)] = u(rng);
    off += nw + sizes[l];
  }
  return MlpNetwork(arch, std::move(params));
}

Eigen::MatrixXd MlpNetwork::forward(const Eigen::MatrixXd& inputs) const {
  if (static_cast<std::size_t>(inputs.rows()) != arch_.n_inputs)
    throw DimensionMismatch("network input has " + std::to_string(inputs.rows()) + " rows");
  const auto ls = layers(arch_, params_);
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < ls.size(); ++l) {
    Eigen::MatrixXd z = (ls[l].w * a).colwise() + ls[l].b;
    if (l + 1 < ls.size()) activate(z, arch_.activation);
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd MlpNetwork::forward(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input)).col(0);
}

double mlp_loss(const MlpNetwork& net, const MlpBatch& batch) {
  if (batch.inputs.cols() == 0) throw Error("empty batch");
  const Eigen::MatrixXd diff = net.forward(batch.inputs) - batch.targets;
  return diff.squaredNorm() / static_cast<double>(batch.inputs.cols());
}

Eigen::VectorXd mlp_gradient(const MlpNetwork& net, const MlpBatch& batch) {
  const auto n = batch.inputs.cols();
  if (n == 0) throw Error("empty batch");
  const auto& arch = net.architecture();
  const auto ls = layers(arch, net.params());

  std::vector<Eigen::MatrixXd> acts{batch.inputs};
  for (std::size_t l = 0; l < ls.size(); ++l) {
    Eigen::MatrixXd z = (ls[l].w * acts.back()).colwise() + ls[l].b;
    if (l + 1 < ls.size()) activate(z, arch.activation);
    acts.push_back(std::move(z));
  }

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.params().size());
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto& layer : ls) {
    offsets.push_back(off);
    off += static_cast<std::size_t>(layer.w.size() + layer.b.size());
  }

  Eigen::MatrixXd g = (acts.back() - batch.targets) * (2.0 / static_cast<double>(n));
  for (std::size_t l = ls.size(); l-- > 0;) {
    const auto& w = ls[l].w;
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + offsets[l], w.rows(), w.cols());
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + offsets[l] + w.size(), w.rows());
    gw = g * acts[l].transpose();
    gb = g.rowwise().sum();
    if (l == 0) break;
    g = w.transpose() * g;
    if (arch.activation == Activation::tanh)
      g = (g.array() * (1.0 - acts[l].array().square())).matrix();
  }
  return grad;
}

MlpModel::MlpModel(std::size_t dim, std::size_t n_actions, MlpNetwork net, Scaling scaling,
                   std::vector<bool> fitted, std::uint64_t seed)
    : dim_(dim),
      n_actions_(n_actions),
      net_(std::move(net)),
      scaling_(std::move(scaling)),
      fitted_(std::move(fitted)),
      seed_(seed) {
  if (net_.architecture().n_inputs != dim_ + n_actions_ ||
      net_.architecture().n_outputs != dim_ + 1)
    throw DimensionMismatch("network shape does not match dimension and action count");
  const auto d = static_cast<Eigen::Index>(dim_);
  if (scaling_.in_mean.size() != d || scaling_.in_scale.size() != d ||
      scaling_.out_mean.size() != d + 1 || scaling_.out_scale.size() != d + 1)
    throw DimensionMismatch("scaling vectors do not match dimension");
  if (fitted_.size() != n_actions_) throw Error("fitted flags must cover every action");
}

bool MlpModel::supports(ActionId a) const { return a.value < n_actions_ && fitted_[a.value]; }

Prediction MlpModel::predict(const StateVec& x, ActionId a) const {
  if (!supports(a))
    throw NoSupport("parametric model was not fitted for action " + std::to_string(a.value));
  const auto d = static_cast<Eigen::Index>(dim_);
  if (x.size() != d) throw DimensionMismatch("mlp model expects dimension " + std::to_string(dim_));
  Eigen::VectorXd in = Eigen::VectorXd::Zero(d + static_cast<Eigen::Index>(n_actions_));
  in.head(d) = (x - scaling_.in_mean).cwiseQuotient(scaling_.in_scale);
  in[d + a.value] = 1.0;
  const Eigen::VectorXd out =
      net_.forward(in).cwiseProduct(scaling_.out_scale) + scaling_.out_mean;
  return Prediction{x + out.head(d), out[d]};
}

std::string MlpModel::serialize() const {
  const auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  const auto& arch = net_.architecture();
  nlohmann::ordered_json j;
  j["learner"] = "mlp";
  j["dim"] = dim_;
  j["n_actions"] = n_actions_;
  j["seed"] = seed_;
  j["hidden"] = arch.hidden;
  j["activation"] = arch.activation == Activation::tanh ? "tanh" : "identity";
  j["fitted"] = fitted_;
  j["in_mean"] = vec(scaling_.in_mean);
  j["in_scale"] = vec(scaling_.in_scale);
  j["out_mean"] = vec(scaling_.out_mean);
  j["out_scale"] = vec(scaling_.out_scale);
  j["params"] = vec(net_.params());
  return j.dump();
}

}  // namespace moeope
