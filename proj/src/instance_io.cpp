#include "bpdn/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bpdn {

namespace {

using nlohmann::json;

json vector_json(const VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

VectorXd read_vector(const json& j, const char* key, Index expected) {
  const auto values = j.at(key).get<std::vector<double>>();
  if (static_cast<Index>(values.size()) != expected)
    throw InstanceParseError(std::string(key) + ": expected " + std::to_string(expected) +
                             " entries, got " + std::to_string(values.size()));
  return Eigen::Map<const VectorXd>(values.data(), expected);
}

json ensemble_json(const EnsembleSpec& e) {
  return {{"kind", std::string(to_string(e.kind))}, {"n", e.n}, {"k", e.k}, {"K", e.K},
          {"seed", e.seed}};
}

json solution_json(const SolutionSpec& s) {
  return {{"sparsity", s.sparsity}, {"law", std::string(to_string(s.law))},
          {"theta", s.theta}, {"seed", s.seed}};
}

}  // namespace

json instance_to_json(const Instance& inst) {
  const Index k = inst.k(), n = inst.n();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(k * n));
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < n; ++c) flat.push_back(inst.A(r, c));

  const EquivalentParameters eq = equivalent_parameters(inst);
  json j;
  j["format_version"] = kInstanceFormatVersion;
  j["n"] = n;
  j["k"] = k;
  j["lambda"] = inst.lambda;
  j["matrix"] = std::move(flat);
  j["b"] = vector_json(inst.b);
  j["x_star"] = vector_json(inst.x_star);
  j["y"] = vector_json(inst.certificate.y);
  j["w"] = vector_json(inst.certificate.w);
  j["sigma_equiv"] = eq.sigma;
  j["tau_equiv"] = eq.tau;
  j["optimality_residual"] = inst.optimality_residual;
  j["coherence"] = coherence(inst.A);
  j["certificate"] = {{"method", std::string(to_string(inst.certificate.method))},
                      {"iterations", inst.certificate.iterations},
                      {"range_residual", inst.certificate.range_residual},
                      {"sign_residual", inst.certificate.sign_residual}};
  j["ensemble"] = inst.meta.ensemble ? ensemble_json(*inst.meta.ensemble) : json(nullptr);
  j["solution"] = inst.meta.solution ? solution_json(*inst.meta.solution) : json(nullptr);
  j["seed"] = inst.meta.ensemble ? json(inst.meta.ensemble->seed) : json(nullptr);
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  double stored = 0.0;
  try {
    if (!j.is_object()) throw InstanceParseError("instance file must hold a JSON object");
    const int version = j.at("format_version").get<int>();
    if (version != kInstanceFormatVersion)
      throw InstanceParseError("unsupported format_version " + std::to_string(version));
    const Index n = j.at("n").get<Index>();
    const Index k = j.at("k").get<Index>();
    if (n < 1 || k < 1) throw InstanceParseError("n and k must be >= 1");
    inst.lambda = j.at("lambda").get<double>();
    if (!(inst.lambda > 0) || !std::isfinite(inst.lambda))
      throw InstanceParseError("lambda must be positive and finite");

    const auto flat = j.at("matrix").get<std::vector<double>>();
    if (static_cast<Index>(flat.size()) != n * k)
      throw InstanceParseError("matrix: expected " + std::to_string(n * k) + " entries, got " +
                               std::to_string(flat.size()));
    inst.A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                            Eigen::RowMajor>>(flat.data(), k, n);
    inst.b = read_vector(j, "b", k);
    inst.x_star = read_vector(j, "x_star", n);
    inst.certificate.y = read_vector(j, "y", k);
    inst.certificate.w = read_vector(j, "w", n);
    stored = j.at("optimality_residual").get<double>();

    if (j.contains("certificate") && j["certificate"].is_object()) {
      const json& c = j["certificate"];
      inst.certificate.method = parse_cert_method(c.at("method").get<std::string>());
      inst.certificate.iterations = c.value("iterations", 0L);
      inst.certificate.range_residual = c.value("range_residual", 0.0);
      inst.certificate.sign_residual = c.value("sign_residual", 0.0);
    }
    if (j.contains("ensemble") && j["ensemble"].is_object()) {
      const json& e = j["ensemble"];
      inst.meta.ensemble = EnsembleSpec{parse_ensemble_kind(e.at("kind").get<std::string>()),
                                        e.at("n").get<Index>(), e.at("k").get<Index>(),
                                        e.value("K", Index{1}),
                                        e.value("seed", std::uint64_t{0})};
    }
    if (j.contains("solution") && j["solution"].is_object()) {
      const json& s = j["solution"];
      inst.meta.solution = SolutionSpec{s.at("sparsity").get<Index>(),
                                        parse_magnitude_law(s.at("law").get<std::string>()),
                                        s.value("theta", 1.0), s.value("seed", std::uint64_t{0})};
    }
  } catch (const json::exception& e) {
    throw InstanceParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InstanceParseError(e.what());
  }

  for (const VectorXd* v : {&inst.b, &inst.x_star})
    if (!v->allFinite()) throw InstanceParseError("non-finite vector entry");
  if (!inst.A.allFinite()) throw InstanceParseError("non-finite matrix entry");

  inst.optimality_residual = verify_optimality(inst);
  // A few ulps of lambda absorb platform differences when the stored value is 0.
  const double allowed =
      std::max(10.0 * stored, 16 * std::numeric_limits<double>::epsilon() * inst.lambda);
  if (!(inst.optimality_residual <= allowed)) {
    std::ostringstream msg;
    msg << "optimality residual " << inst.optimality_residual << " exceeds 10x the stored value "
        << stored;
    throw TamperError(inst.optimality_residual, stored, msg.str());
  }
  return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << instance_to_json(inst).dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceParseError("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InstanceParseError(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace bpdn
