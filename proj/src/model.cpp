#include "pointproc/model.hpp"

#include <fstream>
#include <json.hpp>

namespace pointproc {

using nlohmann::json;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sempp: return "sempp";
    case ModelKind::dsmpp: return "dsmpp";
    case ModelKind::nsmmpp: return "nsmmpp";
  }
  return "?";
}

ModelKind kind_from_string(const std::string& name) {
  if (name == "sempp") return ModelKind::sempp;
  if (name == "dsmpp") return ModelKind::dsmpp;
  if (name == "nsmmpp") return ModelKind::nsmmpp;
  throw ValidationError("unknown model kind '" + name +
                        "' (expected sempp, dsmpp, or nsmmpp)");
}

ModelKind kind_of(const AnyModel& m) {
  return static_cast<ModelKind>(m.index());
}

int num_types(const AnyModel& m) {
  return std::visit([](const auto& p) {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, CtlstmParams>) {
      return p.num_types;
    } else {
      return p.num_types();
    }
  }, m);
}

std::int64_t param_dim(const AnyModel& m) {
  return std::visit([](const auto& p) { return get_params(p).size(); }, m);
}

Eigen::VectorXd get_params(const AnyModel& m) {
  return std::visit([](const auto& p) { return get_params(p); }, m);
}

void set_params(AnyModel& m, const Eigen::VectorXd& v) {
  std::visit([&v](auto& p) { set_params(p, v); }, m);
}

void validate_params(const AnyModel& m) {
  std::visit([](const auto& p) { validate_params(p); }, m);
}

std::vector<char> positivity_mask(const AnyModel& m) {
  const auto dim = static_cast<std::size_t>(param_dim(m));
  const int K = num_types(m);
  std::vector<char> mask(dim, 0);
  switch (kind_of(m)) {
    case ModelKind::sempp:
      // mu, alpha, delta all live on [0, inf)
      std::fill(mask.begin(), mask.end(), 1);
      break;
    case ModelKind::dsmpp:
      // delta block and the trailing scales
      std::fill(mask.begin() + K + K * K, mask.end(), 1);
      break;
    case ModelKind::nsmmpp:
      // trailing s block and decay_scale
      std::fill(mask.end() - K - 1, mask.end(), 1);
      break;
  }
  return mask;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::MatrixXd matrix_from_json(const json& j, int rows, int cols,
                                 const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ValidationError(std::string(name) + ": expected " +
                          std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ValidationError(std::string(name) + ": expected " +
                            std::to_string(cols) + " columns");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ValidationError(std::string(name) + ": expected " +
                          std::to_string(n) + " entries");
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = j[i].get<double>();
  return v;
}

json gate_to_json(const GateBlock& g) {
  return json{{"W", matrix_to_json(g.W)},
              {"U", matrix_to_json(g.U)},
              {"d", vector_to_json(g.d)}};
}

GateBlock gate_from_json(const json& j, int D, const char* name) {
  GateBlock g;
  g.W = matrix_from_json(j.at("W"), D, D, name);
  g.U = matrix_from_json(j.at("U"), D, D, name);
  g.d = vector_from_json(j.at("d"), D, name);
  return g;
}

}  // namespace

void save_model(const std::string& path, const AnyModel& m) {
  json j;
  j["kind"] = to_string(kind_of(m));
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SemppParams>) {
          j["K"] = p.num_types();
          j["mu"] = vector_to_json(p.mu);
          j["alpha"] = matrix_to_json(p.alpha);
          j["delta"] = matrix_to_json(p.delta);
        } else if constexpr (std::is_same_v<T, DsmppParams>) {
          j["K"] = p.num_types();
          j["mu"] = vector_to_json(p.mu);
          j["alpha"] = matrix_to_json(p.alpha);
          j["delta"] = matrix_to_json(p.delta);
          j["s"] = vector_to_json(p.s);
        } else {
          j["K"] = p.num_types;
          j["D"] = p.hidden;
          j["embed"] = matrix_to_json(p.embed);
          j["gates"] = json{{"i", gate_to_json(p.gi)},
                            {"f", gate_to_json(p.gf)},
                            {"z", gate_to_json(p.gz)},
                            {"o", gate_to_json(p.go)},
                            {"ibar", gate_to_json(p.gibar)},
                            {"fbar", gate_to_json(p.gfbar)},
                            {"decay", gate_to_json(p.gd)}};
          j["w"] = matrix_to_json(p.w);
          j["s"] = vector_to_json(p.s);
          j["decay_scale"] = p.decay_scale;
        }
      },
      m);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ValidationError("write to " + path + " failed");
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw ValidationError(path + ": " + err.what());
  }
  AnyModel m;
  try {
    const ModelKind kind = kind_from_string(j.at("kind").get<std::string>());
    const int K = j.at("K").get<int>();
    if (kind == ModelKind::sempp) {
      SemppParams p;
      p.mu = vector_from_json(j.at("mu"), K, "mu");
      p.alpha = matrix_from_json(j.at("alpha"), K, K, "alpha");
      p.delta = matrix_from_json(j.at("delta"), K, K, "delta");
      m = std::move(p);
    } else if (kind == ModelKind::dsmpp) {
      DsmppParams p;
      p.mu = vector_from_json(j.at("mu"), K, "mu");
      p.alpha = matrix_from_json(j.at("alpha"), K, K, "alpha");
      p.delta = matrix_from_json(j.at("delta"), K, K, "delta");
      p.s = vector_from_json(j.at("s"), K, "s");
      m = std::move(p);
    } else {
      CtlstmParams p;
      p.num_types = K;
      p.hidden = j.at("D").get<int>();
      const int D = p.hidden;
      p.embed = matrix_from_json(j.at("embed"), K + 1, D, "embed");
      const json& gates = j.at("gates");
      p.gi = gate_from_json(gates.at("i"), D, "gate i");
      p.gf = gate_from_json(gates.at("f"), D, "gate f");
      p.gz = gate_from_json(gates.at("z"), D, "gate z");
      p.go = gate_from_json(gates.at("o"), D, "gate o");
      p.gibar = gate_from_json(gates.at("ibar"), D, "gate ibar");
      p.gfbar = gate_from_json(gates.at("fbar"), D, "gate fbar");
      p.gd = gate_from_json(gates.at("decay"), D, "gate decay");
      p.w = matrix_from_json(j.at("w"), K, D, "w");
      p.s = vector_from_json(j.at("s"), K, "s");
      p.decay_scale = j.at("decay_scale").get<double>();
      m = std::move(p);
    }
  } catch (const json::exception& err) {
    throw ValidationError(path + ": " + err.what());
  }
  validate_params(m);
  return m;
}

}  // namespace pointproc
