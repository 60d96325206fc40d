#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifdef _WIN32
#error "tests drive the CLI through a POSIX shell"
#else
#include <sys/wait.h>
#include <unistd.h>
#endif

namespace testutil {

inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("stneuron-" + tag + "-" + std::to_string(::getpid()) +
                      "-" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI binary with `args` using `dir` as the working directory.
inline RunResult run_cli(const std::string& cli_path, const std::string& args,
                         const std::filesystem::path& dir) {
    const auto out_file = dir / ".stdout";
    const auto err_file = dir / ".stderr";
    const std::string cmd = "cd '" + dir.string() + "' && '" + cli_path +
                            "' " + args + " > '" + out_file.string() +
                            "' 2> '" + err_file.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

}  // namespace testutil
