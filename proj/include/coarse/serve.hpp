#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "coarse/engine.hpp"

namespace coarse {

/// Newline-delimited JSON over a connected stream socket.
class LineChannel {
 public:
  explicit LineChannel(int fd, int timeoutMs = 300'000);
  ~LineChannel();
  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;

  void send(const Json& message);
  /// Next line; throws ProtocolError(Cop) on timeout or disconnect.
  std::string read_line();

 private:
  int fd_;
  std::string buffer_;
};

/// Cop agent driven by a client over the session protocol.
class RemoteCop : public CopAgent {
 public:
  RemoteCop(LineChannel& channel, std::string robberSpec, int maxIllegal = 3);

  std::string id() const override { return "remote"; }
  std::int64_t count() const override { return n_; }
  void attach(MatchContext& ctx) override;
  std::int64_t choose_sigma() override;
  std::int64_t choose_rho(const WeakRhoQuery& q) override;
  std::int64_t choose_rho(const StrongRhoQuery& q) override;
  std::vector<Vertex> place() override;
  std::vector<MovePath> move(const View& view) override;

  const std::string& client_name() const { return name_; }
  /// Sends the position after the robber's latest reply.
  void send_state(std::int64_t stage, const std::vector<Vertex>& cops, const Vertex& robber,
                  const MovePath* robberMove);

 private:
  Json config(const char* awaiting) const;
  /// Reads messages until `accept` returns a value; every rejection is
  /// answered with "illegal" and the third consecutive one forfeits.
  template <class T>
  T expect(const std::function<std::optional<T>(const Json&, std::string&)>& accept);
  std::int64_t read_param(const char* key);

  LineChannel& channel_;
  std::string robberSpec_;
  int maxIllegal_;
  std::int64_t n_ = 1;
  std::string name_;
};

struct ServeConfig {
  std::string space;
  GameVariant variant = GameVariant::Weak;
  std::string robberSpec;
  Json agentOptions = Json::object();
  std::int64_t horizon = 100;
  std::uint64_t seed = 0;
  AssertionMode mode = AssertionMode::Record;
  int timeoutMs = 300'000;
  /// Trace path for the first connection; later ones append ".<k>".
  std::string tracePath;
};

/// Plays one game on an accepted connection and returns its trace.
Trace serve_connection(int fd, const ServeConfig& config);

/// Listens on `port` (0 picks a free one, reported through `onListen`) and
/// serves each connection on its own thread. Returns after `maxConnections`
/// games when positive; otherwise runs until the process ends.
void serve(std::uint16_t port, const ServeConfig& config, int maxConnections = 0,
           const std::function<void(std::uint16_t)>& onListen = {});

/// Client helper used by tests: connects to 127.0.0.1:port.
int connect_local(std::uint16_t port);

}  // namespace coarse
