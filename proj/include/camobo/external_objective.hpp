#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace camobo {

/// Line-delimited JSON messages exchanged with an evaluator child.
///
///   parent -> child  {"type":"hello","n_dims":N}
///   child  -> parent {"type":"ready","n_objectives":M}
///   parent -> child  {"type":"eval","x":[...]}        (raw units)
///   child  -> parent {"type":"result","y":[...]}      or {"type":"error","message":...}
///   parent -> child  {"type":"shutdown"}
namespace protocol {

std::string hello(std::size_t n_dims);
std::string eval(const Eigen::VectorXd& raw_x);
std::string shutdown();

/// Parses a ready line; throws EvaluationFailure if malformed.
std::size_t parse_ready(const std::string& line);
/// Parses a result line of exactly `n_objectives` finite numbers; an error
/// message, malformed JSON or a wrong length throws EvaluationFailure.
Eigen::VectorXd parse_result(const std::string& line, std::size_t n_objectives);

}  // namespace protocol

/// A child process with its stdin/stdout connected to pipes. Stderr goes
/// to a temporary file so it can be quoted in diagnostics.
class ExternalProcess {
 public:
  using Seconds = std::chrono::duration<double>;

  /// Spawns `command` (argv form, PATH lookup). Throws EvaluationFailure if
  /// the process cannot be started.
  explicit ExternalProcess(const std::vector<std::string>& command);
  ~ExternalProcess();

  ExternalProcess(const ExternalProcess&) = delete;
  ExternalProcess& operator=(const ExternalProcess&) = delete;

  /// Sends hello and waits for ready; returns the declared objective count.
  std::size_t handshake(std::size_t n_dims, Seconds timeout);

  /// One request/response round trip. Throws EvaluationFailure on timeout,
  /// child exit, malformed reply or wrong-length y.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& raw_x, Seconds timeout);

  /// Sends shutdown, waits up to `timeout` for exit, returns the exit
  /// status (or -1 if the child had to be killed).
  int shutdown(Seconds timeout = Seconds(5.0));

  bool running() const { return pid_ > 0; }
  /// Tail of what the child wrote to stderr so far.
  std::string diagnostics() const;

 private:
  void send(const std::string& line);
  std::string receive(Seconds timeout);
  void kill_child();

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string stderr_path_;
  std::string buffer_;
  std::size_t n_dims_ = 0;
  std::size_t n_objectives_ = 0;
};

}  // namespace camobo
