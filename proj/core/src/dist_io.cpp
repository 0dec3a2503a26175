#include "hgut/dist_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hgut/errors.hpp"
#include "hgut/rng.hpp"

namespace hgut::io {

using nlohmann::json;

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return (it == params.end()) ? fallback : it->second;
}

json shape_to_json(const GridShape& shape) { return json(shape.dims()); }

GridShape shape_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("distribution file: bad \"shape\"");
  return GridShape(j.get<std::vector<int>>());
}

}  // namespace

Distribution make_generated(const GridShape& shape, const std::string& name,
                            const std::map<std::string, double>& params, std::uint64_t seed) {
  Rng rng(seed);
  if (name == "uniform") {
    return Distribution::uniform(shape);
  }
  if (name == "biased_coord") {
    const int num_biased =
        static_cast<int>(param_or(params, "num_biased", 1.0));
    const double mass0 = param_or(params, "mass0", 0.75);
    if (num_biased < 0 || num_biased > shape.n()) {
      throw ArgumentError("biased_coord: num_biased out of range");
    }
    if (!(mass0 > 0.0 && mass0 < 1.0)) throw ArgumentError("biased_coord: mass0 in (0,1)");
    std::vector<std::vector<double>> marginals;
    for (int i = 0; i < shape.n(); ++i) {
      const int m = shape.side(i);
      std::vector<double> q(static_cast<std::size_t>(m), 1.0 / m);
      if (i < num_biased) {
        q.assign(static_cast<std::size_t>(m), (1.0 - mass0) / (m - 1));
        q[0] = mass0;
      }
      marginals.push_back(std::move(q));
    }
    return Distribution::product(shape, std::move(marginals));
  }
  if (name == "dirichlet") {
    const double alpha = param_or(params, "alpha", 1.0);
    auto table = rng.dirichlet(alpha, static_cast<std::size_t>(shape.total_size()));
    return Distribution::dense(shape, std::move(table));
  }
  if (name == "perturbed_uniform") {
    const double delta = param_or(params, "delta", 0.1);
    if (!(delta >= 0.0 && delta < 1.0)) throw ArgumentError("perturbed_uniform: delta in [0,1)");
    std::vector<double> table(static_cast<std::size_t>(shape.total_size()));
    double sum = 0.0;
    for (auto& v : table) {
      v = 1.0 + delta * rng.sign();
      sum += v;
    }
    for (auto& v : table) v /= sum;
    return Distribution::dense(shape, std::move(table));
  }
  if (name == "heavy_atom") {
    const double mass = param_or(params, "mass", 0.5);
    const auto atom = static_cast<std::int64_t>(param_or(params, "atom", 0.0));
    if (!(mass >= 0.0 && mass <= 1.0)) throw ArgumentError("heavy_atom: mass in [0,1]");
    if (atom < 0 || atom >= shape.total_size()) throw ArgumentError("heavy_atom: atom out of range");
    const double base = (1.0 - mass) / static_cast<double>(shape.total_size());
    std::vector<double> table(static_cast<std::size_t>(shape.total_size()), base);
    table[static_cast<std::size_t>(atom)] += mass;
    return Distribution::dense(shape, std::move(table));
  }
  throw ArgumentError("unknown generator \"" + name + "\"");
}

std::string distribution_to_json(const Distribution& p, std::optional<double> d_tv) {
  json j;
  j["shape"] = shape_to_json(p.shape());
  if (p.is_dense()) {
    j["kind"] = "dense";
    j["data"] = p.dense_table();
  } else {
    j["kind"] = "product";
    json data = json::array();
    for (int i = 0; i < p.shape().n(); ++i) data.push_back(p.marginal_weights(i));
    j["data"] = data;
  }
  if (d_tv.has_value()) j["d_tv"] = *d_tv;
  return j.dump(2);
}

Distribution parse_distribution_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("distribution file: invalid JSON: ") + e.what());
  }
  if (!j.contains("shape") || !j.contains("kind")) {
    throw ArgumentError("distribution file: missing \"shape\" or \"kind\"");
  }
  const GridShape shape = shape_from_json(j["shape"]);
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "dense") {
    return Distribution::dense(shape, j.at("data").get<std::vector<double>>());
  }
  if (kind == "product") {
    return Distribution::product(shape, j.at("data").get<std::vector<std::vector<double>>>());
  }
  if (kind == "generator") {
    const json& g = j.at("generator");
    const std::string name = g.at("name").get<std::string>();
    const std::uint64_t seed = g.value("seed", std::uint64_t{0});
    std::map<std::string, double> params;
    if (g.contains("params")) {
      for (auto it = g["params"].begin(); it != g["params"].end(); ++it) {
        params[it.key()] = it.value().get<double>();
      }
    }
    return make_generated(shape, name, params, seed);
  }
  throw ArgumentError("distribution file: unknown kind \"" + kind + "\"");
}

std::optional<double> parse_dtv_annotation(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("d_tv")) return std::nullopt;
  return j["d_tv"].get<double>();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << text;
}

Distribution load_distribution_file(const std::string& path) {
  return parse_distribution_json(read_text_file(path));
}

void save_distribution_file(const std::string& path, const Distribution& p,
                            std::optional<double> d_tv) {
  write_text_file(path, distribution_to_json(p, d_tv) + "\n");
}

}  // namespace hgut::io
