#include "lct/pipeline/subprocess.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "lct/litmus/error.hpp"

extern char** environ;

namespace lct::pipeline {

std::string expand_env(const std::string& s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '$' && i + 1 < s.size() && s[i + 1] == '{') {
      size_t end = s.find('}', i + 2);
      if (end == std::string::npos)
        throw Error(ErrorKind::BadConfig, "unterminated ${...} in: " + s);
      std::string var = s.substr(i + 2, end - i - 2);
      const char* v = std::getenv(var.c_str());
      if (v == nullptr || *v == '\0')
        throw Error(ErrorKind::ToolNotFound, "environment variable " + var + " is not set");
      out += v;
      i = end + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

ProcResult run_process(const std::vector<std::string>& argv, std::chrono::seconds timeout) {
  if (argv.empty()) throw Error(ErrorKind::BadConfig, "empty command");
  std::vector<std::string> expanded;
  expanded.reserve(argv.size());
  for (const auto& a : argv) expanded.push_back(expand_env(a));

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw Error(ErrorKind::ToolNotFound, "pipe: " + std::string(strerror(errno)));

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&fa, err_pipe[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&fa, out_pipe[0]);
  posix_spawn_file_actions_addclose(&fa, err_pipe[0]);

  std::vector<char*> cargv;
  for (auto& a : expanded) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  pid_t pid = -1;
  int rc = posix_spawnp(&pid, cargv[0], &fa, nullptr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  close(out_pipe[1]);
  close(err_pipe[1]);
  if (rc != 0) {
    close(out_pipe[0]);
    close(err_pipe[0]);
    throw Error(ErrorKind::ToolNotFound,
                expanded[0] + ": " + std::string(strerror(rc)));
  }

  ProcResult res;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&res.out, &res.err};
  bool open[2] = {true, true};
  char buf[4096];
  while (open[0] || open[1]) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      kill(pid, SIGKILL);
      res.timed_out = true;
      break;
    }
    int n = poll(fds, 2, static_cast<int>(left.count()));
    if (n < 0 && errno != EINTR) break;
    if (n <= 0) continue;
    for (int i = 0; i < 2; ++i) {
      if (!open[i] || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
      ssize_t got = read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        sinks[i]->append(buf, static_cast<size_t>(got));
      } else {
        open[i] = false;
        fds[i].fd = -1;
      }
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
    // Shells and some spawn paths report a missing binary as exit 127.
    if (res.exit_code == 127 && res.out.empty())
      throw Error(ErrorKind::ToolNotFound, expanded[0] + ": not found (exit 127)");
  } else if (WIFSIGNALED(status)) {
    res.exit_code = 128 + WTERMSIG(status);
  }
  return res;
}

}  // namespace lct::pipeline
