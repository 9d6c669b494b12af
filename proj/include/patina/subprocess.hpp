#pragma once

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <vector>

#include "patina/error.hpp"

namespace patina {

struct CommandResult {
  int exit_code = -1;
  std::string out;  // captured stdout
};

/// Run argv[0] with the given arguments (no shell), capturing stdout.
/// exec failure in the child surfaces as exit code 127.
inline CommandResult run_command(const std::vector<std::string>& argv) {
  if (argv.empty()) {
    throw Error(ErrorCode::ExternalCommandFailed, "empty command line");
  }
  int fds[2];
  if (pipe(fds) != 0) {
    throw Error(ErrorCode::ExternalCommandFailed,
                std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw Error(ErrorCode::ExternalCommandFailed,
                std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(fds[1]);
  CommandResult result;
  char buf[4096];
  for (;;) {
    const ssize_t n = read(fds[0], buf, sizeof(buf));
    if (n > 0) {
      result.out.append(buf, static_cast<size_t>(n));
    } else if (n == 0) {
      break;
    } else if (errno != EINTR) {
      break;
    }
  }
  close(fds[0]);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

/// Replace every occurrence of `token` in each argv element.
inline std::vector<std::string> substitute_argv(std::vector<std::string> argv,
                                                const std::string& token,
                                                const std::string& value) {
  for (auto& arg : argv) {
    size_t pos = 0;
    while ((pos = arg.find(token, pos)) != std::string::npos) {
      arg.replace(pos, token.size(), value);
      pos += value.size();
    }
  }
  return argv;
}

}  // namespace patina
