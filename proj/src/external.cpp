#include "commsat/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <sstream>

#include <fmt/format.h>

#include "commsat/error.hpp"
#include "commsat/io.hpp"

namespace commsat {

const char* to_string(ExternalStatus status) noexcept {
  switch (status) {
    case ExternalStatus::Sat: return "SAT";
    case ExternalStatus::Unsat: return "UNSAT";
    case ExternalStatus::Timeout: return "TIMEOUT";
    case ExternalStatus::Crash: return "CRASH";
  }
  return "UNKNOWN";
}

ExternalResult interpret_solver_output(const Formula& f, const std::string& output, int exit_code) {
  ExternalResult result;
  result.exit_code = exit_code;
  result.output = output;
  auto crash = [&](const char* reason) {
    result.status = ExternalStatus::Crash;
    result.crash_reason = reason;
    return result;
  };
  if (exit_code != 0 && exit_code != 10 && exit_code != 20) return crash("nonzero-exit");

  std::optional<std::string> verdict;
  std::vector<std::int64_t> model_lits;
  std::istringstream in(output);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("s ", 0) == 0) {
      std::string v = line.substr(2);
      while (!v.empty() && (v.back() == '\r' || v.back() == ' ')) v.pop_back();
      verdict = v;
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream toks(line.substr(1));
      for (std::int64_t code; toks >> code;)
        if (code != 0) model_lits.push_back(code);
    }
  }
  if (!verdict) return crash("no-result-line");
  if (*verdict == "UNSATISFIABLE") {
    result.status = ExternalStatus::Unsat;
    return result;
  }
  if (*verdict != "SATISFIABLE") return crash("unknown-result");

  result.status = ExternalStatus::Sat;
  if (model_lits.empty()) return result;
  // Variables the solver leaves out are taken as FALSE.
  Assignment model(f.n, false);
  for (std::int64_t code : model_lits) {
    const std::uint64_t v = code < 0 ? std::uint64_t(-code) : std::uint64_t(code);
    if (v == 0 || v > f.n) return crash("model-mismatch");
    model.set(static_cast<Var>(v), code > 0);
  }
  if (!evaluate(f, model)) return crash("model-mismatch");
  result.model = std::move(model);
  return result;
}

ExternalResult run_external_solver(const std::filesystem::path& binary, const std::filesystem::path& cnf,
                                   double timeout_seconds, const std::vector<std::string>& extra_args) {
  if (::access(binary.c_str(), X_OK) != 0)
    fail(ErrorKind::InvalidParameters, fmt::format("solver '{}' is not an executable file", binary.string()));
  const Formula formula = read_dimacs(read_file(cnf)).formula;

  int fds[2];
  if (::pipe(fds) != 0) fail(ErrorKind::Io, fmt::format("pipe: {}", std::strerror(errno)));

  std::vector<std::string> args{binary.string()};
  args.insert(args.end(), extra_args.begin(), extra_args.end());
  args.push_back(cnf.string());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) fail(ErrorKind::Io, fmt::format("fork: {}", std::strerror(errno)));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    if (const int devnull = ::open("/dev/null", O_WRONLY); devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fds[1]);

  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  std::string output;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    const double left = timeout_seconds - elapsed();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left * 1000.0) + 1);
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    const ssize_t got = ::read(fds[0], buf, sizeof buf);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    output.append(buf, std::size_t(got));
  }
  ::close(fds[0]);

  if (timed_out) ::kill(-pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  ExternalResult result;
  if (timed_out) {
    result.status = ExternalStatus::Timeout;
    result.elapsed_seconds = timeout_seconds;
    result.output = std::move(output);
    return result;
  }
  const double took = elapsed();
  if (WIFSIGNALED(status)) {
    result.status = ExternalStatus::Crash;
    result.crash_reason = "signal";
    result.exit_code = 128 + WTERMSIG(status);
    result.output = std::move(output);
  } else if (WEXITSTATUS(status) == 127 && output.empty()) {
    result.status = ExternalStatus::Crash;
    result.crash_reason = "exec-failed";
    result.exit_code = 127;
  } else {
    result = interpret_solver_output(formula, output, WEXITSTATUS(status));
  }
  result.elapsed_seconds = took;
  return result;
}

}  // namespace commsat
