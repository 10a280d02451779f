#include "coarse/serve.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <thread>
#include <vector>

#include "coarse/errors.hpp"
#include "coarse/registry.hpp"

namespace coarse {

namespace {

constexpr std::size_t kReachBallLimit = 20'000;
constexpr std::size_t kMaxLine = 1 << 20;

Json vertices_json(const Space& space, const std::vector<Vertex>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(space.to_json(v));
  return out;
}

}  // namespace

LineChannel::LineChannel(int fd, int timeoutMs) : fd_(fd) {
  timeval tv{timeoutMs / 1000, (timeoutMs % 1000) * 1000};
  setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

LineChannel::~LineChannel() { ::close(fd_); }

void LineChannel::send(const Json& message) {
  const auto line = message.dump() + "\n";
  std::size_t sent = 0;
  while (sent < line.size()) {
    const auto n = ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw ProtocolError(Side::Cop, "client disconnected");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string LineChannel::read_line() {
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      auto line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return line;
    }
    if (buffer_.size() > kMaxLine) throw ProtocolError(Side::Cop, "client line too long");
    char chunk[4096];
    const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) throw ProtocolError(Side::Cop, "client timed out");
    if (n <= 0) throw ProtocolError(Side::Cop, "client disconnected");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

RemoteCop::RemoteCop(LineChannel& channel, std::string robberSpec, int maxIllegal)
    : channel_(channel), robberSpec_(std::move(robberSpec)), maxIllegal_(maxIllegal) {}

template <class T>
T RemoteCop::expect(const std::function<std::optional<T>(const Json&, std::string&)>& accept) {
  int illegal = 0;
  for (;;) {
    const auto line = channel_.read_line();
    std::string reason;
    std::optional<T> value;
    try {
      const auto msg = Json::parse(line);
      if (!msg.is_object()) reason = "message must be a JSON object";
      else value = accept(msg, reason);
    } catch (const Json::exception& e) {
      reason = std::string("malformed message: ") + e.what();
    } catch (const MalformedInput& e) {
      reason = e.what();
    }
    if (value) return std::move(*value);
    channel_.send(Json{{"type", "illegal"}, {"reason", reason}});
    if (++illegal >= maxIllegal_)
      throw ProtocolError(Side::Cop, std::to_string(illegal) + " consecutive illegal messages; last: " + reason);
  }
}

void RemoteCop::attach(MatchContext& ctx) {
  CopAgent::attach(ctx);
  std::function<std::optional<std::pair<std::string, std::int64_t>>(const Json&, std::string&)> hello =
      [](const Json& m, std::string& why) -> std::optional<std::pair<std::string, std::int64_t>> {
    if (m.value("type", "") != "hello") {
      why = "expected hello";
      return std::nullopt;
    }
    const std::int64_t n = m.contains("cops") ? m.at("cops").get<std::int64_t>() : 1;
    if (n < 1) {
      why = "cops must be positive";
      return std::nullopt;
    }
    return std::pair{m.value("name", std::string("client")), n};
  };
  auto [name, n] = expect(hello);
  name_ = name;
  n_ = n;
}

Json RemoteCop::config(const char* awaiting) const {
  const auto& p = ctx().params;
  Json params = Json::object();
  params["n"] = p.n > 0 ? p.n : n_;
  if (p.sigma > 0) params["sigma"] = p.sigma;
  if (p.psi > 0) params["psi"] = p.psi;
  if (p.rho > 0) params["rho"] = p.rho;
  if (p.bigR > 0) params["R"] = p.bigR.fits_slong_p() ? Json(p.bigR.get_si()) : Json(p.bigR.get_str());
  params["horizon"] = p.horizon;
  return Json{{"type", "config"},
              {"space", space().spec()},
              {"variant", variant_name(ctx().variant)},
              {"robber", robberSpec_},
              {"base", space().to_json(p.v)},
              {"params", params},
              {"awaiting", awaiting}};
}

std::int64_t RemoteCop::read_param(const char* key) {
  std::function<std::optional<std::int64_t>(const Json&, std::string&)> accept =
      [key](const Json& m, std::string& why) -> std::optional<std::int64_t> {
    if (m.value("type", "") != "param" || !m.contains(key)) {
      why = std::string("expected param with ") + key;
      return std::nullopt;
    }
    const auto& v = m.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      why = std::string(key) + " must be a positive integer";
      return std::nullopt;
    }
    return v.get<std::int64_t>();
  };
  return expect(accept);
}

std::int64_t RemoteCop::choose_sigma() {
  channel_.send(config("sigma"));
  return read_param("sigma");
}

std::int64_t RemoteCop::choose_rho(const WeakRhoQuery&) {
  channel_.send(config("rho"));
  return read_param("rho");
}

std::int64_t RemoteCop::choose_rho(const StrongRhoQuery&) {
  channel_.send(config("rho"));
  return read_param("rho");
}

std::vector<Vertex> RemoteCop::place() {
  channel_.send(config("place"));
  std::function<std::optional<std::vector<Vertex>>(const Json&, std::string&)> accept =
      [this](const Json& m, std::string& why) -> std::optional<std::vector<Vertex>> {
    if (m.value("type", "") != "place" || !m.contains("cops") || !m.at("cops").is_array()) {
      why = "expected place with a cops array";
      return std::nullopt;
    }
    std::vector<Vertex> cops;
    for (const auto& c : m.at("cops")) cops.push_back(space().from_json(c));
    if (static_cast<std::int64_t>(cops.size()) != n_) {
      why = "placed " + std::to_string(cops.size()) + " cops, expected " + std::to_string(n_);
      return std::nullopt;
    }
    return cops;
  };
  return expect(accept);
}

std::vector<MovePath> RemoteCop::move(const View& view) {
  const auto sigma = ctx().params.sigma;
  std::function<std::optional<std::vector<MovePath>>(const Json&, std::string&)> accept =
      [&](const Json& m, std::string& why) -> std::optional<std::vector<MovePath>> {
    if (m.value("type", "") != "move" || !m.contains("paths") || !m.at("paths").is_array()) {
      why = "expected move with a paths array";
      return std::nullopt;
    }
    std::vector<MovePath> paths;
    for (const auto& p : m.at("paths")) {
      if (!p.is_array()) {
        why = "each path must be an array of vertices";
        return std::nullopt;
      }
      MovePath path;
      for (const auto& v : p) path.push_back(space().from_json(v));
      paths.push_back(std::move(path));
    }
    if (paths.size() != view.cops.size()) {
      why = "expected " + std::to_string(view.cops.size()) + " paths, got " + std::to_string(paths.size());
      return std::nullopt;
    }
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (auto bad = path_violation(space(), paths[i], view.cops[i], sigma, "sigma")) {
        why = (paths.size() > 1 ? "cop " + std::to_string(i) + ": " : std::string()) + *bad;
        return std::nullopt;
      }
    return paths;
  };
  return expect(accept);
}

void RemoteCop::send_state(std::int64_t stage, const std::vector<Vertex>& cops, const Vertex& robber,
                           const MovePath* robberMove) {
  Json balls = Json::array();
  for (const auto& c : cops) {
    try {
      balls.push_back(vertices_json(space(), space().ball(c, ctx().params.rho, kReachBallLimit)));
    } catch (const ResourceLimit&) {
      balls.push_back(Json::array());
    }
  }
  Json msg{{"type", "state"},
           {"stage", stage},
           {"cops", vertices_json(space(), cops)},
           {"robber", space().to_json(robber)},
           {"reachBalls", balls}};
  if (robberMove) msg["robberMove"] = vertices_json(space(), *robberMove);
  channel_.send(msg);
}

Trace serve_connection(int fd, const ServeConfig& config) {
  LineChannel channel(fd, config.timeoutMs);
  const auto space = Space::parse(config.space);
  auto robber = make_robber(config.robberSpec, config.agentOptions);
  RemoteCop cop(channel, config.robberSpec);

  RunOptions opts;
  opts.variant = config.variant;
  opts.horizon = config.horizon;
  opts.seed = config.seed;
  opts.mode = config.mode;
  opts.copSpec = "remote";
  opts.robberSpec = config.robberSpec;
  opts.agentOptions = config.agentOptions;
  std::size_t sentStages = 0;
  bool sentPlacement = false;
  opts.observer = [&](const Trace& trace, const GameState& state) {
    if (!trace.header.placed) return;
    if (!sentPlacement) {
      sentPlacement = true;
      cop.send_state(0, state.cops, state.robber, nullptr);
      return;
    }
    while (sentStages < trace.stages.size()) {
      const auto& rec = trace.stages[sentStages++];
      cop.send_state(rec.stage, state.cops, state.robber, &rec.robberMove);
    }
  };

  auto trace = run_match(space, cop, *robber, opts);
  try {
    channel.send(Json{{"type", "outcome"}, {"outcome", outcome_to_json(space, trace.outcome)}});
  } catch (const ProtocolError&) {
    // The client is gone; the trace still records the game.
  }
  if (!config.tracePath.empty()) {
    std::ofstream out(config.tracePath);
    write_trace(out, space, trace);
  }
  return trace;
}

int connect_local(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw ResourceLimit("socket: " + std::string(std::strerror(errno)));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw ResourceLimit("connect: " + std::string(std::strerror(errno)));
  }
  return fd;
}

void serve(std::uint16_t port, const ServeConfig& config, int maxConnections,
           const std::function<void(std::uint16_t)>& onListen) {
  Space::parse(config.space);
  make_robber(config.robberSpec, config.agentOptions);

  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw ResourceLimit("socket: " + std::string(std::strerror(errno)));
  const int one = 1;
  setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listener, 16) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listener);
    throw ResourceLimit("cannot listen on port " + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (onListen) onListen(ntohs(addr.sin_port));

  std::vector<std::thread> workers;
  for (int served = 0; maxConnections <= 0 || served < maxConnections; ++served) {
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) {
        --served;
        continue;
      }
      break;
    }
    ServeConfig cfg = config;
    if (!cfg.tracePath.empty() && served > 0) cfg.tracePath += "." + std::to_string(served + 1);
    workers.emplace_back([fd, cfg] {
      try {
        serve_connection(fd, cfg);
      } catch (const std::exception&) {
        // Connection-level failures end only that game.
      }
    });
  }
  ::close(listener);
  for (auto& w : workers) w.join();
}

}  // namespace coarse
