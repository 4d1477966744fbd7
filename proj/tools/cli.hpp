#pragma once

#include "dpg/spaces.hpp"
#include "dpg/system.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dpg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitDegree = 2;
inline constexpr int kExitUnknownKey = 3;
inline constexpr int kExitMissingMesh = 4;
inline constexpr int kExitInvalidValue = 5;

/// Configuration problem with the exit code it maps to.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int exit_code, const std::string& msg) : std::runtime_error(msg), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

enum class Command { Solve, Converge, Cond, Fortin };

struct RunConfig {
    Command command = Command::Converge;
    spaces::ProblemKind problem = spaces::ProblemKind::Poisson;
    int p = 1;
    int r = 3;
    bool split = false;
    int n = 2;
    std::optional<std::filesystem::path> mesh;
    int levels = 4;
    system::SolverKind solver = system::SolverKind::Cholesky;
    double tol = 1e-12;
    std::filesystem::path out = ".";
    std::uint64_t seed = 1;
    bool export_matrix = false;
};

using KeyValues = std::map<std::string, std::string>;

/// Line-oriented "key = value" text; '#' starts a comment.
KeyValues read_config_text(const std::string& text);
KeyValues read_config_file(const std::filesystem::path& path);

/// Merges `overrides` over `file`, fills defaults (r = p + 2) and validates.
RunConfig parse_config(const KeyValues& file, const KeyValues& overrides = {});

/// Executes the command and writes artifacts under config.out. Returns the
/// exit status; failures print one "ERROR <code>: reason" line to `err`.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

/// Full command-line entry point (flag parsing included).
int main_entry(int argc, char** argv);

}  // namespace dpg::cli
