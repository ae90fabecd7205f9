#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hrlplan/nn/network.hpp"
#include "hrlplan/nn/serialize.hpp"
#include "oracles.hpp"

using namespace hrlplan::nn;

namespace {

Architecture arch(Encoder enc, int input, int units, std::vector<int> hidden, int out) {
  Architecture a;
  a.encoder = enc;
  a.input_dim = input;
  a.encoder_units = units;
  a.hidden = std::move(hidden);
  a.output_dim = out;
  return a;
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  return x;
}

Eigen::MatrixXd random_input(const Architecture& a, int batch, std::uint64_t seed,
                             double scale = 1.0) {
  return random_matrix(a.flat_input(), batch, seed, scale);
}

}  // namespace

TEST_CASE("forward pass") {
  const Architecture a = arch(Encoder::Lstm, 14, 8, {16}, 3);

  SUBCASE("zero network gives zero output") {
    auto p = init_params<double>(a, 1);
    for (auto& b : p.blocks) b.setZero();
    CHECK(forward(p, random_input(a, 5, 2)).output.isZero(0.0));
  }
  SUBCASE("repeatable") {
    const auto p = init_params<double>(a, 1);
    const auto x = random_input(a, 4, 3);
    CHECK(forward(p, x).output == forward(p, x).output);
  }
  SUBCASE("matches the scalar reference") {
    for (Encoder enc : {Encoder::Lstm, Encoder::Dense}) {
      const Architecture b = arch(enc, 17, 12, {10, 6}, 4);
      const auto p = init_params<double>(b, 9);
      const auto x = random_input(b, 6, 4);
      const auto out = forward(p, x).output;
      for (int c = 0; c < x.cols(); ++c) {
        std::vector<double> col(x.col(c).data(), x.col(c).data() + x.rows());
        const auto ref = oracle::reference_forward(p, col);
        for (int r = 0; r < b.output_dim; ++r) CHECK(out(r, c) == doctest::Approx(ref[r]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("single unit with hand-set gates") {
    Architecture one = arch(Encoder::Lstm, 1, 1, {}, 1);
    auto p = init_params<double>(one, 0);
    p.blocks[0] << 0.5, -0.3, 0.8, 0.2;  // input weights: i, f, g, o
    p.blocks[1] << 0.1, 0.4, -0.6, 0.3;  // recurrent weights
    p.blocks[2] << 0.0, 1.0, 0.1, -0.2;  // biases
    p.blocks[3] << 1.0;
    p.blocks[4] << 0.0;
    const double x = 0.7;
    auto s = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    double h = 0, c = 0;
    for (int t = 0; t < 3; ++t) {
      const double i = s(0.5 * x + 0.1 * h + 0.0);
      const double f = s(-0.3 * x + 0.4 * h + 1.0);
      const double g = std::tanh(0.8 * x - 0.6 * h + 0.1);
      const double o = s(0.2 * x + 0.3 * h - 0.2);
      c = f * c + i * g;
      h = o * std::tanh(c);
    }
    Eigen::VectorXd in = Eigen::VectorXd::Constant(3, x);
    CHECK(std::abs(predict(p, in)(0) - h) < 1e-12);
  }
  SUBCASE("wrong input size") {
    const auto p = init_params<double>(a, 1);
    CHECK_THROWS_AS(forward(p, Eigen::MatrixXd(Eigen::MatrixXd::Zero(41, 1))), ShapeError);
  }
}

TEST_CASE("backward pass") {
  SUBCASE("finite-difference check across the architecture grid") {
    int probes = 0;
    double worst = 0.0;
    std::uint64_t seed = 100;
    for (int input : {14, 17})
      for (int units : {8, 32})
        for (auto hidden : {std::vector<int>{16}, std::vector<int>{24, 12}})
          for (Encoder enc : {Encoder::Lstm, Encoder::Dense}) {
            const auto r = oracle::gradient_check(arch(enc, input, units, hidden, 5), ++seed, 40);
            probes += r.probes;
            worst = std::max(worst, r.max_relative_error);
          }
    CHECK(probes >= 100);
    CHECK(worst < 1e-4);
  }
  SUBCASE("linear in the output gradient") {
    const Architecture a = arch(Encoder::Lstm, 14, 8, {16}, 3);
    const auto p = init_params<double>(a, 5);
    const auto x = random_input(a, 4, 6);
    const auto tr = forward(p, x);
    const Eigen::MatrixXd w = random_matrix(3, 4, 7);
    const auto zero = backward(p, tr, Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 4)));
    for (const auto& b : zero.blocks) CHECK(b.isZero(0.0));
    const auto g1 = backward(p, tr, w);
    const auto g2 = backward(p, tr, Eigen::MatrixXd(2.0 * w));
    for (std::size_t k = 0; k < g1.blocks.size(); ++k)
      CHECK((g2.blocks[k] - 2.0 * g1.blocks[k]).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("stale trace is rejected") {
    const Architecture a = arch(Encoder::Lstm, 14, 8, {16}, 3);
    auto p = init_params<double>(a, 5);
    const auto tr = forward(p, random_input(a, 2, 1));
    SgdMomentum<double> opt(0.1, 0.0);
    opt.step(p, p.zeros_like());
    CHECK_THROWS_AS(backward(p, tr, Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 2))), std::logic_error);
    const auto other = copy_params(p);
    const auto tr2 = forward(other, random_input(a, 2, 1));
    CHECK_THROWS_AS(backward(p, tr2, Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 2))), std::logic_error);
    const auto tr3 = forward(p, random_input(a, 2, 1));
    CHECK_THROWS_AS(backward(p, tr3, Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2))), ShapeError);
  }
}

TEST_CASE("sgd with momentum") {
  Architecture one = arch(Encoder::Dense, 1, 1, {}, 1);

  SUBCASE("quadratic recurrence without momentum") {
    auto p = init_params<double>(one, 0);
    for (auto& b : p.blocks) b.setZero();
    p.coeff(0) = 1.0;
    SgdMomentum<double> opt(0.1, 0.0);
    double expected = 1.0;
    for (int i = 0; i < 30; ++i) {
      auto g = p.zeros_like();
      g.coeff(0) = 2.0 * p.coeff(0);
      opt.step(p, g);
      expected *= 0.8;
      CHECK(p.coeff(0) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("momentum recurrence") {
    auto p = init_params<double>(one, 0);
    for (auto& b : p.blocks) b.setZero();
    p.coeff(0) = 1.0;
    SgdMomentum<double> opt(0.05, 0.9);
    double x = 1.0, v = 0.0;
    for (int i = 0; i < 50; ++i) {
      auto g = p.zeros_like();
      g.coeff(0) = 2.0 * p.coeff(0);
      opt.step(p, g);
      v = 0.9 * v + 2.0 * x;
      x -= 0.05 * v;
      CHECK(p.coeff(0) == doctest::Approx(x).epsilon(1e-12));
    }
  }
  SUBCASE("zero learning rate and zero gradient") {
    const Architecture a = arch(Encoder::Lstm, 14, 8, {16}, 3);
    auto p = init_params<double>(a, 2);
    const auto before = copy_params(p);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    auto g = p.zeros_like();
    for (auto& b : g.blocks)
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = n(rng);
    SgdMomentum<double> frozen(0.0, 0.9);
    frozen.step(p, g);
    for (std::size_t k = 0; k < p.blocks.size(); ++k) CHECK(p.blocks[k] == before.blocks[k]);

    SgdMomentum<double> opt(0.01, 0.5);
    opt.step(p, g);
    const auto v0 = opt.velocity();
    const auto moved = copy_params(p);
    opt.step(p, p.zeros_like());
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      CHECK((opt.velocity()[k] - 0.5 * v0[k]).cwiseAbs().maxCoeff() == 0.0);
      CHECK((p.blocks[k] - (moved.blocks[k] - 0.01 * opt.velocity()[k])).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }
  SUBCASE("one small step decreases a quadratic loss") {
    const Architecture a = arch(Encoder::Lstm, 14, 8, {16}, 3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto p = init_params<double>(a, seed);
      const auto x = random_input(a, 8, seed + 50);
      const Eigen::MatrixXd y = random_matrix(3, 8, seed + 60);
      auto loss = [&](const NetworkParams<double>& q) {
        return 0.5 * (forward(q, x).output - y).squaredNorm();
      };
      const auto tr = forward(p, x);
      const auto g = backward(p, tr, Eigen::MatrixXd(tr.output - y));
      const double before = loss(p);
      SgdMomentum<double> opt(1e-3, 0.9);
      opt.step(p, g);
      CHECK(loss(p) < before);
    }
  }
  SUBCASE("shape mismatch") {
    auto p = init_params<double>(arch(Encoder::Lstm, 14, 8, {16}, 3), 1);
    const auto q = init_params<double>(arch(Encoder::Lstm, 14, 8, {12}, 3), 1);
    SgdMomentum<double> opt(0.1, 0.9);
    CHECK_THROWS_AS(opt.step(p, q), ShapeError);
  }
  SUBCASE("gradient clipping rescales to the norm bound") {
    auto p = init_params<double>(one, 0);
    for (auto& b : p.blocks) b.setZero();
    auto g = p.zeros_like();
    g.coeff(0) = 30.0;
    g.coeff(1) = 40.0;
    SgdMomentum<double> opt(1.0, 0.0, 5.0);
    opt.step(p, g);
    CHECK(p.coeff(0) == doctest::Approx(-3.0));
    CHECK(p.coeff(1) == doctest::Approx(-4.0));
  }
}

TEST_CASE("copy and init") {
  const Architecture a = arch(Encoder::Lstm, 16, 32, {64}, 3);

  SUBCASE("copies are independent snapshots") {
    auto src = init_params<double>(a, 3);
    const auto first = copy_params(src);
    const auto x = random_input(a, 100, 8);
    CHECK(forward(src, x).output == forward(first, x).output);
    SgdMomentum<double> opt(0.1, 0.0);
    auto g = src.zeros_like();
    for (auto& b : g.blocks) b.setConstant(1.0);
    opt.step(src, g);
    const auto second = copy_params(src);
    opt.step(src, g);
    CHECK(forward(first, x).output == forward(init_params<double>(a, 3), x).output);
    CHECK(forward(second, x).output != forward(first, x).output);
    CHECK(forward(second, x).output != forward(src, x).output);
  }
  SUBCASE("seeded and fan-in scaled") {
    const auto p = init_params<double>(a, 11);
    const auto q = init_params<double>(a, 11);
    for (std::size_t k = 0; k < p.blocks.size(); ++k) CHECK(p.blocks[k] == q.blocks[k]);
    CHECK(init_params<double>(a, 12).blocks[0] != p.blocks[0]);

    const auto& U = p.blocks[1];  // fan-in 32, 4096 samples
    const double scale = 1.0 / std::sqrt(32.0);
    const double mean = U.mean();
    const double var = (U.array() - mean).square().sum() / (U.size() - 1);
    const double expected = scale * scale / 3.0;
    // Sample variance of a uniform law: sd of the estimate ~ sqrt(0.8/n) * var.
    CHECK(std::abs(var - expected) < 4.0 * std::sqrt(0.8 / U.size()) * expected);
    CHECK(U.cwiseAbs().maxCoeff() <= scale);
  }
  SUBCASE("biases are zero except the forget gate") {
    const auto p = init_params<double>(a, 1);
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      if (p.blocks[k].cols() != 1) continue;
      if (p.names[k] == "lstm.b") {
        CHECK(p.blocks[k].middleRows(32, 32).isConstant(1.0));
        CHECK(p.blocks[k].topRows(32).isZero(0.0));
        CHECK(p.blocks[k].bottomRows(64).isZero(0.0));
      } else {
        CHECK(p.blocks[k].isZero(0.0));
      }
    }
  }
  SUBCASE("zero-size layers are rejected") {
    CHECK_THROWS_AS(init_params<double>(arch(Encoder::Lstm, 0, 8, {4}, 3), 1), ArchitectureError);
    CHECK_THROWS_AS(init_params<double>(arch(Encoder::Lstm, 14, 8, {0}, 3), 1), ArchitectureError);
    CHECK_THROWS_AS(init_params<double>(arch(Encoder::Dense, 14, 8, {4}, 0), 1), ArchitectureError);
  }
}

TEST_CASE("no NaN on extreme finite inputs") {
  for (Encoder enc : {Encoder::Lstm, Encoder::Dense}) {
    const Architecture a = arch(enc, 14, 16, {32}, 3);
    const auto p = init_params<double>(a, 4);
    Eigen::MatrixXd x = random_input(a, 16, 5, 1e3);
    x.col(0).setConstant(1e6);
    x.col(1).setConstant(-1e6);
    const auto tr = forward(p, x);
    CHECK(tr.output.allFinite());
    const auto g = backward(p, tr, Eigen::MatrixXd(Eigen::MatrixXd::Ones(3, 16)));
    CHECK(g.all_finite());
  }
}

TEST_CASE("serialization round trip") {
  for (Encoder enc : {Encoder::Lstm, Encoder::Dense}) {
    const Architecture a = arch(enc, 15, 8, {16, 8}, 4);
    auto p = init_params<double>(a, 21);
    p.coeff(3) = 1.0 / 3.0;
    p.coeff(4) = -1e-300;
    std::stringstream ss;
    save_network(ss, "options", p);
    std::string label;
    const auto q = load_network(ss, label);
    CHECK(label == "options");
    CHECK(q.arch == a);
    REQUIRE(q.size() == p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) REQUIRE(q.coeff(k) == p.coeff(k));
  }
  SUBCASE("malformed input") {
    std::stringstream bad("network x\nencoder gru\n");
    std::string label;
    CHECK_THROWS_AS(load_network(bad, label), FormatError);
    const Architecture a = arch(Encoder::Dense, 2, 2, {}, 1);
    std::stringstream ss;
    save_network(ss, "n", init_params<double>(a, 1));
    std::string text = ss.str();
    text.replace(text.find("enc.W 2 6"), 9, "enc.W 2 5");
    std::stringstream edited(text);
    CHECK_THROWS_AS(load_network(edited, label), FormatError);
  }
}
