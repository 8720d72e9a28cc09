#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace groundseg::cli {

/// Entry point shared by the `groundseg` executable and the tests. Data goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `*.bin` files directly inside `dir`, in lexicographic filename order.
std::vector<std::filesystem::path> list_scans(const std::filesystem::path& dir);

/// Six-digit zero-padded frame stem, e.g. 000042.
std::string frame_stem(std::size_t index);

}  // namespace groundseg::cli
