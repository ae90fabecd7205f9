#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hrlplan::nn {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ArchitectureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How the input sequence is summarized before the fully connected stack.
enum class Encoder {
  Lstm,   // recurrent cell over the sequence, final hidden state
  Dense,  // tanh layer over the flattened sequence
};

struct Architecture {
  int input_dim = 0;   // per sequence step
  int seq_len = 3;
  Encoder encoder = Encoder::Lstm;
  int encoder_units = 32;
  std::vector<int> hidden{64};  // ReLU layers
  int output_dim = 0;           // linear head

  int flat_input() const { return input_dim * seq_len; }

  void validate() const {
    if (input_dim <= 0 || seq_len <= 0 || encoder_units <= 0 || output_dim <= 0)
      throw ArchitectureError("architecture has a zero-size layer");
    for (int h : hidden)
      if (h <= 0) throw ArchitectureError("architecture has a zero-size hidden layer");
  }

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Weights of one Q-network as an ordered list of named blocks.
///
/// Layout: LSTM encoder {lstm.W (4H x I), lstm.U (4H x H), lstm.b (4H x 1)}
/// with gates stacked in the order input, forget, cell, output; or dense
/// encoder {enc.W (H x T*I), enc.b}. Then {fcK.W, fcK.b} per hidden layer and
/// {out.W, out.b}.
template <typename Scalar>
struct NetworkParams {
  Architecture arch;
  std::vector<Matrix<Scalar>> blocks;
  std::vector<std::string> names;
  std::uint64_t version = 0;  // bumped by every in-place update

  std::size_t block_count() const { return blocks.size(); }

  Eigen::Index size() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.size();
    return n;
  }

  bool all_finite() const {
    for (const auto& b : blocks)
      if (!b.allFinite()) return false;
    return true;
  }

  NetworkParams zeros_like() const {
    NetworkParams z;
    z.arch = arch;
    z.names = names;
    z.blocks.reserve(blocks.size());
    for (const auto& b : blocks) z.blocks.push_back(Matrix<Scalar>::Zero(b.rows(), b.cols()));
    return z;
  }

  bool same_shape(const NetworkParams& other) const {
    if (blocks.size() != other.blocks.size()) return false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].rows() != other.blocks[i].rows() || blocks[i].cols() != other.blocks[i].cols())
        return false;
    }
    return true;
  }

  /// Flat coefficient access across blocks (gradient checks, serialization).
  Scalar& coeff(Eigen::Index k) {
    for (auto& b : blocks) {
      if (k < b.size()) return b.data()[k];
      k -= b.size();
    }
    throw std::out_of_range("parameter index out of range");
  }
  Scalar coeff(Eigen::Index k) const { return const_cast<NetworkParams*>(this)->coeff(k); }
};

/// Rows of the LSTM blocks belonging to each gate.
enum class Gate : int { Input = 0, Forget = 1, Cell = 2, Output = 3 };

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return (S(1) / (S(1) + (-x.array()).exp())).matrix();
}

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return x.array().max(S(0)).matrix();
}

/// Fan-in scaled uniform weights, zero biases, +1 on the LSTM forget gate.
template <typename Scalar>
NetworkParams<Scalar> init_params(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  std::mt19937_64 rng(seed);
  NetworkParams<Scalar> p;
  p.arch = arch;
  auto weights = [&](int rows, int cols, int fan_in) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix<Scalar> m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = static_cast<Scalar>(u(rng));
    return m;
  };
  auto add = [&](std::string name, Matrix<Scalar> m) {
    p.names.push_back(std::move(name));
    p.blocks.push_back(std::move(m));
  };

  const int h = arch.encoder_units;
  if (arch.encoder == Encoder::Lstm) {
    add("lstm.W", weights(4 * h, arch.input_dim, arch.input_dim));
    add("lstm.U", weights(4 * h, h, h));
    Matrix<Scalar> b = Matrix<Scalar>::Zero(4 * h, 1);
    b.middleRows(h, h).setConstant(Scalar(1));
    add("lstm.b", std::move(b));
  } else {
    add("enc.W", weights(h, arch.flat_input(), arch.flat_input()));
    add("enc.b", Matrix<Scalar>::Zero(h, 1));
  }
  int prev = h;
  for (std::size_t k = 0; k < arch.hidden.size(); ++k) {
    add("fc" + std::to_string(k) + ".W", weights(arch.hidden[k], prev, prev));
    add("fc" + std::to_string(k) + ".b", Matrix<Scalar>::Zero(arch.hidden[k], 1));
    prev = arch.hidden[k];
  }
  add("out.W", weights(arch.output_dim, prev, prev));
  add("out.b", Matrix<Scalar>::Zero(arch.output_dim, 1));
  return p;
}

/// Deep copy; the copy evolves independently of the source.
template <typename Scalar>
NetworkParams<Scalar> copy_params(const NetworkParams<Scalar>& source) {
  return source;
}

/// Activations cached by forward() for the backward pass. Columns are samples.
template <typename Scalar>
struct ForwardTrace {
  const NetworkParams<Scalar>* params = nullptr;
  std::uint64_t version = 0;

  Matrix<Scalar> input;                     // T*I x B
  std::vector<Matrix<Scalar>> gates;        // LSTM: per step, 4H x B post-activation
  std::vector<Matrix<Scalar>> cells;        // LSTM: c_0..c_T
  std::vector<Matrix<Scalar>> cell_tanh;    // LSTM: tanh(c_1)..tanh(c_T)
  std::vector<Matrix<Scalar>> hiddens;      // LSTM: h_0..h_T
  Matrix<Scalar> encoded;                   // H x B, encoder output
  std::vector<Matrix<Scalar>> activations;  // post-ReLU output of each hidden layer
  Matrix<Scalar> output;                    // output_dim x B

  Eigen::Index batch() const { return input.cols(); }
};

/// Batched forward pass. `input` is (seq_len * input_dim) x batch with step t
/// in rows [t * input_dim, (t + 1) * input_dim).
template <typename Scalar>
ForwardTrace<Scalar> forward(const NetworkParams<Scalar>& p, const Matrix<Scalar>& input) {
  const Architecture& a = p.arch;
  if (input.rows() != a.flat_input())
    throw ShapeError("forward: input has " + std::to_string(input.rows()) + " rows, expected " +
                     std::to_string(a.flat_input()));
  ForwardTrace<Scalar> tr;
  tr.params = &p;
  tr.version = p.version;
  tr.input = input;
  const Eigen::Index batch = input.cols();
  const int h = a.encoder_units;
  std::size_t blk = 0;

  if (a.encoder == Encoder::Lstm) {
    const auto& W = p.blocks[0];
    const auto& U = p.blocks[1];
    const auto& b = p.blocks[2];
    blk = 3;
    tr.cells.push_back(Matrix<Scalar>::Zero(h, batch));
    tr.hiddens.push_back(Matrix<Scalar>::Zero(h, batch));
    for (int t = 0; t < a.seq_len; ++t) {
      Matrix<Scalar> z = W * input.middleRows(t * a.input_dim, a.input_dim) + U * tr.hiddens.back();
      z.colwise() += b.col(0);
      Matrix<Scalar> g(4 * h, batch);
      g.topRows(2 * h) = sigmoid(z.topRows(2 * h));
      g.middleRows(2 * h, h) = z.middleRows(2 * h, h).array().tanh().matrix();
      g.bottomRows(h) = sigmoid(z.bottomRows(h));
      Matrix<Scalar> c = g.middleRows(h, h).cwiseProduct(tr.cells.back()) +
                         g.topRows(h).cwiseProduct(g.middleRows(2 * h, h));
      Matrix<Scalar> tc = c.array().tanh().matrix();
      tr.hiddens.push_back(g.bottomRows(h).cwiseProduct(tc));
      tr.gates.push_back(std::move(g));
      tr.cells.push_back(std::move(c));
      tr.cell_tanh.push_back(std::move(tc));
    }
    tr.encoded = tr.hiddens.back();
  } else {
    Matrix<Scalar> z = p.blocks[0] * input;
    z.colwise() += p.blocks[1].col(0);
    tr.encoded = z.array().tanh().matrix();
    blk = 2;
  }

  const Matrix<Scalar>* prev = &tr.encoded;
  for (std::size_t k = 0; k < a.hidden.size(); ++k, blk += 2) {
    Matrix<Scalar> z = p.blocks[blk] * *prev;
    z.colwise() += p.blocks[blk + 1].col(0);
    tr.activations.push_back(relu(z));
    prev = &tr.activations.back();
  }
  tr.output = p.blocks[blk] * *prev;
  tr.output.colwise() += p.blocks[blk + 1].col(0);
  return tr;
}

/// Single-sample convenience: returns the output column.
template <typename Scalar>
Vector<Scalar> predict(const NetworkParams<Scalar>& p, const Vector<Scalar>& input) {
  return forward(p, Matrix<Scalar>(input)).output.col(0);
}

/// Backpropagation (through time for the LSTM) of `d_output`
/// (output_dim x batch) to every parameter block.
template <typename Scalar>
NetworkParams<Scalar> backward(const NetworkParams<Scalar>& p, const ForwardTrace<Scalar>& tr,
                               const Matrix<Scalar>& d_output) {
  if (tr.params != &p || tr.version != p.version)
    throw std::logic_error("backward: trace was not produced by these parameters");
  if (d_output.rows() != p.arch.output_dim || d_output.cols() != tr.batch())
    throw ShapeError("backward: output gradient shape mismatch");
  const Architecture& a = p.arch;
  NetworkParams<Scalar> g = p.zeros_like();
  const std::size_t enc_blocks = a.encoder == Encoder::Lstm ? 3 : 2;
  const std::size_t out_blk = enc_blocks + 2 * a.hidden.size();

  const Matrix<Scalar>& last = a.hidden.empty() ? tr.encoded : tr.activations.back();
  g.blocks[out_blk] = d_output * last.transpose();
  g.blocks[out_blk + 1] = d_output.rowwise().sum();
  Matrix<Scalar> delta = p.blocks[out_blk].transpose() * d_output;

  for (std::size_t k = a.hidden.size(); k-- > 0;) {
    const std::size_t blk = enc_blocks + 2 * k;
    const Matrix<Scalar>& act = tr.activations[k];
    Matrix<Scalar> dz = (act.array() > Scalar(0)).select(delta, Scalar(0));
    const Matrix<Scalar>& below = k == 0 ? tr.encoded : tr.activations[k - 1];
    g.blocks[blk] = dz * below.transpose();
    g.blocks[blk + 1] = dz.rowwise().sum();
    delta = p.blocks[blk].transpose() * dz;
  }

  if (a.encoder == Encoder::Dense) {
    Matrix<Scalar> dz = delta.cwiseProduct(
        (Scalar(1) - tr.encoded.array().square()).matrix());
    g.blocks[0] = dz * tr.input.transpose();
    g.blocks[1] = dz.rowwise().sum();
    return g;
  }

  const int h = a.encoder_units;
  const auto& U = p.blocks[1];
  Matrix<Scalar> dh = delta;
  Matrix<Scalar> dc = Matrix<Scalar>::Zero(h, tr.batch());
  for (int t = a.seq_len; t-- > 0;) {
    const auto& gt = tr.gates[t];
    const auto i = gt.topRows(h).array();
    const auto f = gt.middleRows(h, h).array();
    const auto c_hat = gt.middleRows(2 * h, h).array();
    const auto o = gt.bottomRows(h).array();
    const auto tc = tr.cell_tanh[t].array();

    dc.array() += dh.array() * o * (Scalar(1) - tc.square());
    Matrix<Scalar> dz(4 * h, tr.batch());
    dz.topRows(h) = (dc.array() * c_hat * i * (Scalar(1) - i)).matrix();
    dz.middleRows(h, h) = (dc.array() * tr.cells[t].array() * f * (Scalar(1) - f)).matrix();
    dz.middleRows(2 * h, h) = (dc.array() * i * (Scalar(1) - c_hat.square())).matrix();
    dz.bottomRows(h) = (dh.array() * tc * o * (Scalar(1) - o)).matrix();

    g.blocks[0].noalias() += dz * tr.input.middleRows(t * a.input_dim, a.input_dim).transpose();
    g.blocks[1].noalias() += dz * tr.hiddens[t].transpose();
    g.blocks[2] += dz.rowwise().sum();
    dh = U.transpose() * dz;
    dc = (dc.array() * f).matrix();
  }
  return g;
}

/// SGD with classical momentum: v <- mu * v + g, p <- p - lr * v. An
/// optional global-norm clip rescales g before it enters the velocity.
template <typename Scalar>
class SgdMomentum {
 public:
  SgdMomentum() = default;
  SgdMomentum(Scalar learning_rate, Scalar momentum, Scalar clip_norm = Scalar(0))
      : lr_(learning_rate), mu_(momentum), clip_(clip_norm) {}

  void step(NetworkParams<Scalar>& p, const NetworkParams<Scalar>& grad) {
    if (!p.same_shape(grad)) throw ShapeError("sgd_step: gradient shape mismatch");
    if (velocity_.empty()) {
      for (const auto& b : p.blocks) velocity_.push_back(Matrix<Scalar>::Zero(b.rows(), b.cols()));
    } else if (velocity_.size() != p.blocks.size()) {
      throw ShapeError("sgd_step: optimizer bound to a different network");
    }
    Scalar scale(1);
    if (clip_ > Scalar(0)) {
      Scalar sq(0);
      for (const auto& b : grad.blocks) sq += b.squaredNorm();
      const Scalar norm = std::sqrt(sq);
      if (norm > clip_) scale = clip_ / norm;
    }
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      velocity_[k] = mu_ * velocity_[k] + scale * grad.blocks[k];
      p.blocks[k] -= lr_ * velocity_[k];
    }
    ++p.version;
  }

  const std::vector<Matrix<Scalar>>& velocity() const { return velocity_; }
  Scalar learning_rate() const { return lr_; }

 private:
  Scalar lr_ = Scalar(1e-3);
  Scalar mu_ = Scalar(0.9);
  Scalar clip_ = Scalar(0);
  std::vector<Matrix<Scalar>> velocity_;
};

}  // namespace hrlplan::nn
