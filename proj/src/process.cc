// Copyright 2026 The testaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "testaug/process.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>

#include "testaug/error.h"

extern char** environ;

namespace testaug {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kExecFailedStatus = 127;

std::vector<std::string> BuildEnvironment(
    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::map<std::string, std::string> merged;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    merged[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  for (const auto& [k, v] : extra) merged[k] = v;
  std::vector<std::string> out;
  out.reserve(merged.size());
  for (const auto& [k, v] : merged) out.push_back(k + "=" + v);
  return out;
}

void Drain(int fd, std::string& sink, bool& open) {
  char buf[8192];
  const ssize_t n = ::read(fd, buf, sizeof(buf));
  if (n > 0) {
    sink.append(buf, static_cast<std::size_t>(n));
  } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
    open = false;
  }
}

}  // namespace

std::optional<std::filesystem::path> FindExecutable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name.find('/') != std::string::npos) {
    if (::access(name.c_str(), X_OK) == 0) return std::filesystem::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  std::stringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    std::filesystem::path candidate = std::filesystem::path(dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0 &&
        !std::filesystem::is_directory(candidate)) {
      return candidate;
    }
  }
  return std::nullopt;
}

std::vector<std::string> SplitCommand(const std::string& command) {
  std::vector<std::string> out;
  std::istringstream in(command);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

ProcessResult RunProcess(const ProcessSpec& spec) {
  if (spec.argv.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty command");
  }
  const auto exe = FindExecutable(spec.argv[0]);
  if (!exe) {
    throw Error(ErrorCode::kToolchainMissing,
                "'" + spec.argv[0] + "' not found on PATH");
  }

  std::vector<std::string> env_storage = BuildEnvironment(spec.env);
  std::vector<char*> envp;
  for (auto& e : env_storage) envp.push_back(e.data());
  envp.push_back(nullptr);
  std::vector<std::string> argv_storage = spec.argv;
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);
  const std::string exe_path = exe->string();
  const std::string cwd = spec.cwd.string();

  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kIoError, std::string("pipe: ") + strerror(errno));
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    throw Error(ErrorCode::kIoError, std::string("fork: ") + strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ::_exit(kExecFailedStatus);
    ::execve(exe_path.c_str(), argv.data(), envp.data());
    ::_exit(kExecFailedStatus);
  }
  ::setpgid(pid, pid);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ProcessResult result;
  bool out_open = true;
  bool err_open = true;
  bool exited = false;
  int status = 0;
  const auto start = Clock::now();
  bool term_sent = false;
  Clock::time_point term_time;
  while (out_open || err_open || !exited) {
    if (spec.timeout) {
      const auto now = Clock::now();
      if (!term_sent && now - start >= *spec.timeout) {
        result.timed_out = true;
        term_sent = true;
        term_time = now;
        ::kill(-pid, SIGTERM);
      } else if (term_sent && now - term_time >= spec.kill_grace) {
        ::kill(-pid, SIGKILL);
      }
    }
    if (!exited) {
      const pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) {
        exited = true;
        // Orphaned grandchildren must not keep the pipes open forever.
        ::kill(-pid, SIGKILL);
      }
    }
    if (!out_open && !err_open) {
      if (!exited) ::usleep(20000);
      continue;
    }
    pollfd fds[2] = {{out_open ? out_pipe[0] : -1, POLLIN, 0},
                     {err_open ? err_pipe[0] : -1, POLLIN, 0}};
    const int n = ::poll(fds, 2, exited ? 50 : 100);
    if (n < 0 && errno != EINTR) break;
    if (n <= 0) {
      if (exited && n == 0) {
        // Child gone and nothing left buffered.
        out_open = err_open = false;
      }
      continue;
    }
    if (out_open && (fds[0].revents & (POLLIN | POLLHUP | POLLERR))) {
      Drain(out_pipe[0], result.out, out_open);
    }
    if (err_open && (fds[1].revents & (POLLIN | POLLHUP | POLLERR))) {
      Drain(err_pipe[0], result.err, err_open);
    }
  }
  ::close(out_pipe[0]);
  ::close(err_pipe[0]);
  if (!exited) {
    ::kill(-pid, SIGKILL);
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signaled = true;
    result.term_signal = WTERMSIG(status);
  }
  return result;
}

}  // namespace testaug
