#include "mergelab/serialize.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace mergelab {

namespace {

using nlohmann::json;

json complex_list(const Vector& v) {
  json out = json::array();
  for (long long i = 0; i < v.size(); ++i) {
    out.push_back({v[i].real(), v[i].imag()});
  }
  return out;
}

json complex_list(const Matrix& m) {
  json out = json::array();
  for (long long r = 0; r < m.rows(); ++r) {
    for (long long c = 0; c < m.cols(); ++c) {
      out.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return out;
}

Complex read_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw parse_error("complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw parse_error("malformed JSON");
  return j;
}

json layout_json(const SystemLayout& layout) {
  json factors = json::array();
  for (const auto& f : layout.factors()) {
    factors.push_back({{"label", f.label}, {"dim", f.dim}});
  }
  return factors;
}

SystemLayout layout_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw parse_error("missing factor list");
  std::vector<Factor> factors;
  for (const auto& f : j) {
    if (!f.contains("label") || !f.contains("dim") || !f["dim"].is_number_integer()) {
      throw parse_error("factors need a label and an integer dim");
    }
    factors.push_back({f["label"].get<std::string>(), f["dim"].get<long long>()});
  }
  try {
    return SystemLayout(std::move(factors));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

}  // namespace

std::string state_to_json(const PureState& psi) {
  json j{{"factors", layout_json(psi.layout())},
         {"kind", "pure"},
         {"data", complex_list(psi.amplitudes())}};
  return j.dump();
}

std::string state_to_json(const DensityOperator& rho) {
  json j{{"factors", layout_json(rho.layout())},
         {"kind", "mixed"},
         {"data", complex_list(rho.matrix())}};
  return j.dump();
}

LoadedState state_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("factors") || !j.contains("kind") || !j.contains("data")) {
    throw parse_error("state file needs factors, kind, and data");
  }
  SystemLayout layout = layout_from_json(j["factors"]);
  const auto& data = j["data"];
  if (!data.is_array()) throw parse_error("data must be an array");
  const std::string kind = j["kind"].get<std::string>();
  const long long d = layout.total_dim();
  try {
    if (kind == "pure") {
      if ((long long)data.size() != d) {
        throw parse_error("pure state needs " + std::to_string(d) + " amplitudes");
      }
      Vector amp(d);
      for (long long i = 0; i < d; ++i) amp[i] = read_complex(data[std::size_t(i)]);
      return PureState(std::move(layout), std::move(amp));
    }
    if (kind == "mixed") {
      if ((long long)data.size() != d * d) {
        throw parse_error("mixed state needs " + std::to_string(d * d) + " entries");
      }
      Matrix mat(d, d);
      for (long long r = 0; r < d; ++r) {
        for (long long c = 0; c < d; ++c) {
          mat(r, c) = read_complex(data[std::size_t(r * d + c)]);
        }
      }
      return DensityOperator(std::move(layout), std::move(mat));
    }
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  throw parse_error("kind must be \"pure\" or \"mixed\"");
}

std::string channel_to_json(const KrausChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(complex_list(k));
  json j{{"kraus", kraus}, {"in_dim", ch.in_dim()}, {"out_dim", ch.out_dim()}};
  return j.dump();
}

KrausChannel channel_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("kraus") || !j.contains("in_dim") || !j.contains("out_dim")) {
    throw parse_error("channel file needs kraus, in_dim, out_dim");
  }
  const long long din = j["in_dim"].get<long long>();
  const long long dout = j["out_dim"].get<long long>();
  if (din < 1 || dout < 1) throw parse_error("channel dimensions must be positive");
  std::vector<Matrix> kraus;
  for (const auto& kj : j["kraus"]) {
    if ((long long)kj.size() != din * dout) {
      throw parse_error("each Kraus matrix needs out_dim*in_dim entries");
    }
    Matrix k(dout, din);
    for (long long r = 0; r < dout; ++r) {
      for (long long c = 0; c < din; ++c) {
        k(r, c) = read_complex(kj[std::size_t(r * din + c)]);
      }
    }
    kraus.push_back(std::move(k));
  }
  try {
    return KrausChannel::from_dims(std::move(kraus), din, dout);
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

std::string distribution_to_csv(const JointDistribution& p) {
  std::ostringstream out;
  out << "x,y,p\n";
  out.precision(17);
  for (int x = 0; x < p.x_size(); ++x) {
    for (int y = 0; y < p.y_size(); ++y) {
      if (p(x, y) != 0.0) out << x << "," << y << "," << p(x, y) << "\n";
    }
  }
  return out.str();
}

JointDistribution distribution_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,p") {
    throw parse_error("distribution CSV must start with the header x,y,p");
  }
  struct Entry { int x, y; double p; };
  std::vector<Entry> entries;
  int max_x = -1, max_y = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Entry e;
    char c1 = 0, c2 = 0;
    if (!(row >> e.x >> c1 >> e.y >> c2 >> e.p) || c1 != ',' || c2 != ',') {
      throw parse_error("bad distribution row: " + line);
    }
    if (e.x < 0 || e.y < 0) throw parse_error("negative symbol index");
    max_x = std::max(max_x, e.x);
    max_y = std::max(max_y, e.y);
    entries.push_back(e);
  }
  if (entries.empty()) throw parse_error("empty distribution");
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(max_x + 1, max_y + 1);
  for (const auto& e : entries) table(e.x, e.y) += e.p;
  try {
    return JointDistribution(std::move(table));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

std::string swcode_to_json(const SWCode& code) {
  json j{{"n", code.n},
         {"N", code.num_bins},
         {"x_alphabet", code.x_alphabet},
         {"y_alphabet", code.y_alphabet},
         {"f", code.f},
         {"error_prob", code.error_prob}};
  return j.dump();
}

SWCode swcode_from_json(const std::string& text, const JointDistribution& p,
                        long long enumeration_budget) {
  const json j = parse(text);
  for (const char* key : {"n", "N", "x_alphabet", "y_alphabet", "f", "error_prob"}) {
    if (!j.contains(key)) throw parse_error(std::string("code file needs ") + key);
  }
  if (j["x_alphabet"].get<int>() != p.x_size() ||
      j["y_alphabet"].get<int>() != p.y_size()) {
    throw parse_error("code alphabets do not match the distribution");
  }
  SWCode out;
  try {
    out = code_from_binning(j["n"].get<int>(), j["N"].get<long long>(),
                            j["f"].get<std::vector<std::int32_t>>(), p,
                            enumeration_budget);
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  const double stored = j["error_prob"].get<double>();
  if (std::abs(out.error_prob - stored) > 1e-12) {
    throw parse_error("stored error probability " + std::to_string(stored) +
                      " does not match the rebuilt decoder (" +
                      std::to_string(out.error_prob) + ")");
  }
  return out;
}

std::string family_to_json(const SeparableFamily& family) {
  json p = json::array();
  for (int i = 0; i < family.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < family.cols(); ++j) row.push_back(family.weight(i, j));
    p.push_back(row);
  }
  json states = json::array();
  for (int i = 0; i < family.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < family.cols(); ++j) {
      row.push_back(complex_list(family.state(i, j)));
    }
    states.push_back(row);
  }
  json j{{"p", p}, {"states", states}};
  return j.dump();
}

SeparableFamily family_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("p") || !j.contains("states")) {
    throw parse_error("family file needs p and states");
  }
  const auto& pj = j["p"];
  if (!pj.is_array() || pj.empty() || !pj[0].is_array() || pj[0].empty()) {
    throw parse_error("p must be a non-empty matrix");
  }
  Eigen::MatrixXd p(pj.size(), pj[0].size());
  for (std::size_t r = 0; r < pj.size(); ++r) {
    if (pj[r].size() != pj[0].size()) throw parse_error("ragged weight matrix");
    for (std::size_t c = 0; c < pj[r].size(); ++c) {
      p(long(r), long(c)) = pj[r][c].get<double>();
    }
  }
  const auto& sj = j["states"];
  if (!sj.is_array() || sj.size() != pj.size()) {
    throw parse_error("states must match the weight matrix shape");
  }
  std::vector<std::vector<Vector>> states(sj.size());
  for (std::size_t r = 0; r < sj.size(); ++r) {
    if (sj[r].size() != pj[0].size()) throw parse_error("ragged state matrix");
    for (std::size_t c = 0; c < sj[r].size(); ++c) {
      const auto& vj = sj[r][c];
      Vector v(vj.size());
      for (std::size_t k = 0; k < vj.size(); ++k) v[long(k)] = read_complex(vj[k]);
      states[r].push_back(std::move(v));
    }
  }
  try {
    return SeparableFamily(std::move(p), std::move(states));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

std::string report_to_json(const MergeOutcome& outcome,
                           const std::string& protocol) {
  json transcript = json::array();
  for (const auto& step : outcome.transcript) {
    transcript.push_back(
        {{"step", step.step}, {"party", step.party}, {"message", step.message}});
  }
  json j{{"protocol", protocol},
         {"n", outcome.ledger.n},
         {"sw_error", outcome.sw_error},
         {"target_distance", outcome.target_distance},
         {"ledger",
          {{"ebits_consumed", outcome.ledger.ebits_consumed},
           {"ebits_gained", outcome.ledger.ebits_gained},
           {"cobits_consumed", outcome.ledger.cobits_consumed},
           {"cobits_gained", outcome.ledger.cobits_gained},
           {"entanglement_rate", outcome.ledger.entanglement_rate()},
           {"coherence_rate", outcome.ledger.coherence_rate()}}},
         {"transcript", transcript}};
  if (!std::isnan(outcome.analytic_coherence_rate)) {
    j["analytic_coherence_rate"] = outcome.analytic_coherence_rate;
  }
  return j.dump();
}

}  // namespace mergelab
