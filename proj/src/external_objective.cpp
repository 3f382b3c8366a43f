#include "camobo/external_objective.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "camobo/errors.hpp"

namespace camobo {

using nlohmann::json;

namespace protocol {

std::string hello(std::size_t n_dims) { return json{{"type", "hello"}, {"n_dims", n_dims}}.dump(); }

std::string eval(const Eigen::VectorXd& raw_x) {
  return json{{"type", "eval"}, {"x", std::vector<double>(raw_x.data(), raw_x.data() + raw_x.size())}}.dump();
}

std::string shutdown() { return json{{"type", "shutdown"}}.dump(); }

namespace {

json parse_line(const std::string& line) {
  json msg = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (msg.is_discarded() || !msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    throw EvaluationFailure("protocol: malformed message: " + line);
  if (msg["type"] == "error")
    throw EvaluationFailure("protocol: evaluator reported error: " +
                            (msg.contains("message") ? msg["message"].dump() : std::string("(no message)")));
  return msg;
}

}  // namespace

std::size_t parse_ready(const std::string& line) {
  const json msg = parse_line(line);
  if (msg["type"] != "ready" || !msg.contains("n_objectives") || !msg["n_objectives"].is_number_unsigned() ||
      msg["n_objectives"].get<std::size_t>() == 0)
    throw EvaluationFailure("protocol: expected ready message with positive n_objectives, got: " + line);
  return msg["n_objectives"].get<std::size_t>();
}

Eigen::VectorXd parse_result(const std::string& line, std::size_t n_objectives) {
  const json msg = parse_line(line);
  if (msg["type"] != "result" || !msg.contains("y") || !msg["y"].is_array())
    throw EvaluationFailure("protocol: expected result message, got: " + line);
  const json& y = msg["y"];
  if (y.size() != n_objectives)
    throw EvaluationFailure("protocol: result has " + std::to_string(y.size()) + " objectives, declared " +
                            std::to_string(n_objectives));
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_objectives));
  for (std::size_t i = 0; i < n_objectives; ++i) {
    if (!y[i].is_number()) throw EvaluationFailure("protocol: non-numeric objective in: " + line);
    out(static_cast<Eigen::Index>(i)) = y[i].get<double>();
    if (!std::isfinite(out(static_cast<Eigen::Index>(i))))
      throw EvaluationFailure("protocol: non-finite objective in: " + line);
  }
  return out;
}

}  // namespace protocol

ExternalProcess::ExternalProcess(const std::vector<std::string>& command) {
  if (command.empty()) throw EvaluationFailure("external objective: empty command");
  // A child dying mid-write must surface as EPIPE, not kill the parent.
  std::signal(SIGPIPE, SIG_IGN);

  char tmpl[] = "/tmp/camobo_child_stderr_XXXXXX";
  const int err_fd = mkstemp(tmpl);
  if (err_fd < 0) throw EvaluationFailure("external objective: cannot create stderr capture file");
  stderr_path_ = tmpl;

  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(err_fd);
    throw EvaluationFailure(std::string("external objective: pipe failed: ") + std::strerror(errno));
  }

  std::vector<char*> argv;
  for (const std::string& a : command) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) throw EvaluationFailure(std::string("external objective: fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_fd, STDERR_FILENO);
    execvp(argv[0], argv.data());
    constexpr char kMsg[] = "exec failed\n";
    [[maybe_unused]] const auto ignored = ::write(STDERR_FILENO, kMsg, sizeof kMsg - 1);
    _exit(127);
  }
  ::close(err_fd);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

ExternalProcess::~ExternalProcess() {
  if (running()) {
    try {
      shutdown(Seconds(1.0));
    } catch (...) {
      kill_child();
    }
  }
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (!stderr_path_.empty()) std::remove(stderr_path_.c_str());
}

std::string ExternalProcess::diagnostics() const {
  std::ifstream in(stderr_path_);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  constexpr std::size_t kTail = 2000;
  if (text.size() > kTail) text = text.substr(text.size() - kTail);
  return text;
}

void ExternalProcess::kill_child() {
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
}

void ExternalProcess::send(const std::string& line) {
  if (!running() || to_child_ < 0) throw EvaluationFailure("external objective: child is not running");
  const std::string data = line + "\n";
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EvaluationFailure(std::string("external objective: write failed: ") + std::strerror(errno) +
                              "; child stderr: " + diagnostics());
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string ExternalProcess::receive(Seconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::nanoseconds>(timeout);
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      kill_child();
      throw EvaluationFailure("external objective: timed out after " + std::to_string(timeout.count()) +
                              " s; child stderr: " + diagnostics());
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1000)));
    if (ready < 0 && errno != EINTR) throw EvaluationFailure("external objective: poll failed");
    if (ready <= 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      kill_child();
      throw EvaluationFailure("external objective: child closed its output; child stderr: " + diagnostics());
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::size_t ExternalProcess::handshake(std::size_t n_dims, Seconds timeout) {
  send(protocol::hello(n_dims));
  n_dims_ = n_dims;
  n_objectives_ = protocol::parse_ready(receive(timeout));
  return n_objectives_;
}

Eigen::VectorXd ExternalProcess::evaluate(const Eigen::VectorXd& raw_x, Seconds timeout) {
  if (n_objectives_ == 0) throw EvaluationFailure("external objective: evaluate before handshake");
  if (static_cast<std::size_t>(raw_x.size()) != n_dims_)
    throw std::invalid_argument("external objective: x has wrong dimension");
  send(protocol::eval(raw_x));
  const std::string line = receive(timeout);
  try {
    return protocol::parse_result(line, n_objectives_);
  } catch (const EvaluationFailure& e) {
    throw EvaluationFailure(std::string(e.what()) + "; child stderr: " + diagnostics());
  }
}

int ExternalProcess::shutdown(Seconds timeout) {
  if (!running()) return -1;
  try {
    send(protocol::shutdown());
  } catch (const EvaluationFailure&) {
    // Child already gone; fall through to reaping.
  }
  ::close(to_child_);
  to_child_ = -1;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::nanoseconds>(timeout);
  int status = 0;
  while (std::chrono::steady_clock::now() < deadline) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      pid_ = -1;
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill_child();
  return -1;
}

}  // namespace camobo
