#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobtri/config.hpp"

namespace sobtri::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitIo = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& commands();

/// Runs one command, writing CSVs, optional SVGs and manifest.txt into the
/// configured output directory. Summary lines go to `out`, errors to `err`.
/// Returns the process exit status.
int run(const std::string& command, const RunConfig& config, bool svg, std::ostream& out,
        std::ostream& err);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace sobtri::cli
