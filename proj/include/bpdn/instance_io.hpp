// Portable JSON container for generated instances.
//
// Numbers are written in shortest round-trip form, so load(save(inst))
// reproduces every stored double exactly. The matrix is stored row-major as a
// flat array of k*n numbers.

#ifndef BPDN_INSTANCE_IO_HPP
#define BPDN_INSTANCE_IO_HPP

#include "bpdn/certgen.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace bpdn {

inline constexpr int kInstanceFormatVersion = 1;

/// Malformed or structurally inconsistent instance file.
class InstanceParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The recomputed optimality residual is far above the stored one.
class TamperError : public std::runtime_error {
 public:
  TamperError(double recomputed, double stored, const std::string& what)
      : std::runtime_error(what), recomputed_(recomputed), stored_(stored) {}
  double recomputed() const { return recomputed_; }
  double stored() const { return stored_; }

 private:
  double recomputed_;
  double stored_;
};

nlohmann::json instance_to_json(const Instance& inst);

/// Rebuilds an instance and recomputes its optimality residual. Throws
/// InstanceParseError on bad structure and TamperError when the recomputed
/// residual exceeds ten times the stored one.
Instance instance_from_json(const nlohmann::json& j);

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

}  // namespace bpdn

#endif  // BPDN_INSTANCE_IO_HPP
