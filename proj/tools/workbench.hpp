#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sturm/forge.hpp"
#include "sturm/pencil.hpp"

namespace sturm::workbench {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInputError = 2, kNumericalFailure = 3 };

/// Raised for malformed files and arguments (exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

struct ModelFile {
    SturmianPencil pencil;
    std::optional<std::uint64_t> seed;
};

nlohmann::json complex_array(const ComplexMatrix& m);
ComplexMatrix parse_complex_array(const nlohmann::json& j, Eigen::Index n, const char* field);

nlohmann::json model_to_json(const SturmianPencil& pencil, std::optional<std::uint64_t> seed);
ModelFile model_from_json(const nlohmann::json& j);
ModelFile read_model(const std::filesystem::path& path);

/// Sidecar holding the ground truth of a dressed model.
struct TruthFile {
    ComplexMatrix theta_true;
    ComplexMatrix omega_true;
    RealVector spectrum_true;
};

std::filesystem::path truth_path(const std::filesystem::path& model_path);
nlohmann::json truth_to_json(const DressedModel& model);
std::optional<TruthFile> read_truth(const std::filesystem::path& model_path, Eigen::Index n);

/// Serialized exactly as written to disk: two-space indent, trailing newline.
std::string dump(const nlohmann::json& j);

std::string sha256_hex(const std::string& bytes);

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sturm::workbench
