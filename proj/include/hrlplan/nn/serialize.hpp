#pragma once

// Text checkpoint format, one network per section:
//
//   network <label>
//   encoder lstm|dense
//   input_dim <n>
//   seq_len <n>
//   encoder_units <n>
//   hidden <count> <w1> ... <wk>
//   output_dim <n>
//   block <name> <rows> <cols>
//   <rows*cols values, column-major, shortest round-trip decimal>
//   ...
//   end
//
// Values are written with std::to_chars so a save/load cycle is bit-exact.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hrlplan/nn/network.hpp"

namespace hrlplan::nn {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

inline double parse_double(const std::string& s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError("not a number: '" + s + "'");
  return x;
}

inline void save_network(std::ostream& os, const std::string& label,
                         const NetworkParams<double>& p) {
  const Architecture& a = p.arch;
  os << "network " << label << '\n'
     << "encoder " << (a.encoder == Encoder::Lstm ? "lstm" : "dense") << '\n'
     << "input_dim " << a.input_dim << '\n'
     << "seq_len " << a.seq_len << '\n'
     << "encoder_units " << a.encoder_units << '\n'
     << "hidden " << a.hidden.size();
  for (int h : a.hidden) os << ' ' << h;
  os << '\n' << "output_dim " << a.output_dim << '\n';
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& b = p.blocks[k];
    os << "block " << p.names[k] << ' ' << b.rows() << ' ' << b.cols() << '\n';
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      os << format_double(b.data()[i]) << (i + 1 == b.size() ? '\n' : ' ');
    }
  }
  os << "end\n";
}

/// Reads one network section; `label` receives its label.
inline NetworkParams<double> load_network(std::istream& is, std::string& label) {
  auto expect = [&](const char* key) {
    std::string word;
    if (!(is >> word) || word != key)
      throw FormatError(std::string("checkpoint: expected '") + key + "', got '" + word + "'");
  };
  auto read_int = [&](const char* key) {
    expect(key);
    int v = 0;
    if (!(is >> v)) throw FormatError(std::string("checkpoint: bad value for ") + key);
    return v;
  };

  expect("network");
  is >> label;
  Architecture a;
  expect("encoder");
  std::string enc;
  is >> enc;
  if (enc == "lstm") {
    a.encoder = Encoder::Lstm;
  } else if (enc == "dense") {
    a.encoder = Encoder::Dense;
  } else {
    throw FormatError("checkpoint: unknown encoder '" + enc + "'");
  }
  a.input_dim = read_int("input_dim");
  a.seq_len = read_int("seq_len");
  a.encoder_units = read_int("encoder_units");
  const int hidden_count = read_int("hidden");
  a.hidden.resize(hidden_count);
  for (int& h : a.hidden) is >> h;
  a.output_dim = read_int("output_dim");

  // Re-derive the layout, then overwrite every block with the stored values.
  NetworkParams<double> p = init_params<double>(a, 0);
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    expect("block");
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    is >> name >> rows >> cols;
    if (name != p.names[k] || rows != p.blocks[k].rows() || cols != p.blocks[k].cols())
      throw FormatError("checkpoint: block '" + name + "' does not match the architecture");
    for (Eigen::Index i = 0; i < p.blocks[k].size(); ++i) {
      std::string tok;
      if (!(is >> tok)) throw FormatError("checkpoint: truncated block '" + name + "'");
      p.blocks[k].data()[i] = parse_double(tok);
    }
  }
  expect("end");
  return p;
}

}  // namespace hrlplan::nn
