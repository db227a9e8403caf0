#pragma once

// HTTP+JSON front end for dialogue sessions.
//
//   POST /sessions                {query, strategy?, n?}
//   GET  /sessions/{id}
//   POST /sessions/{id}/answer    {option_id}
//   POST /sessions/{id}/stop
//   GET  /health
//
// Every session response carries the full transcript. Errors are
// {code, message} with a matching HTTP status.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "dialogue.hpp"
#include "recommend.hpp"
#include "retrieval.hpp"

namespace apiclarify {

struct ServiceConfig {
  std::chrono::seconds session_ttl{30 * 60};
  std::size_t default_n = 10;
  DialogueOptions dialogue;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::BlankQuery:
    case ErrorCode::UnknownOption:
    case ErrorCode::InvalidArgument:
    case ErrorCode::FormatError: return 400;
    case ErrorCode::NoCandidates:
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::SessionFinished: return 409;
    default: return 500;
  }
}

/// 128 random bits as 32 hex digits.
inline std::string new_session_id() {
  static std::mutex m;
  static std::random_device device;
  std::lock_guard lock(m);
  std::ostringstream out;
  for (int i = 0; i < 4; ++i) out << std::hex << std::setw(8) << std::setfill('0') << static_cast<std::uint32_t>(device());
  return out.str();
}

inline nlohmann::json question_json(const ClarificationQuestion& q) {
  nlohmann::json options = nlohmann::json::array();
  for (const auto& o : q.options) options.push_back({{"id", o.id}, {"label", o.label}, {"api_count", o.api_count}});
  return {{"text", q.text}, {"aspect", q.aspect}, {"options", options}};
}

inline nlohmann::json transcript_json(const DialogueSession& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : s.transcript)
    out.push_back({{"question", t.question.text},
                   {"aspect", t.question.aspect},
                   {"option_id", t.option_id},
                   {"option_label", t.option_label}});
  return out;
}

class DialogueService {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  DialogueService(const KnowledgeGraph& graph, ServiceConfig config = {}, Clock clock = {})
      : graph_(&graph),
        index_(graph),
        config_(config),
        clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })) {}

  ServiceResponse create(const std::string& body) {
    return guarded([&] {
      auto j = parse_body(body);
      if (!j.contains("query") || !j["query"].is_string())
        throw Error(ErrorCode::BlankQuery, "body needs a string 'query'");
      DialogueOptions options = config_.dialogue;
      options.n = config_.default_n;
      if (j.contains("strategy") && !j["strategy"].is_null()) {
        auto s = parse_strategy(j["strategy"].get<std::string>());
        if (!s) throw Error(ErrorCode::InvalidArgument, "unknown strategy");
        options.strategy = *s;
      }
      if (j.contains("n") && !j["n"].is_null()) {
        if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
          throw Error(ErrorCode::InvalidArgument, "n must be a positive integer");
        options.n = j["n"].get<std::size_t>();
      }
      auto entry = std::make_shared<Entry>();
      entry->session = start_session(j["query"].get<std::string>(), *graph_, index_, options);
      entry->session.id = new_session_id();
      entry->created_at = utc_now();
      entry->last_used = clock_();
      {
        std::lock_guard lock(store_mutex_);
        purge_expired_locked();
        sessions_[entry->session.id] = entry;
      }
      std::lock_guard lock(entry->mutex);
      return ServiceResponse{201, payload(*entry)};
    });
  }

  ServiceResponse get(const std::string& id) {
    return guarded([&] {
      auto entry = find(id);
      std::lock_guard lock(entry->mutex);
      return ServiceResponse{200, payload(*entry)};
    });
  }

  ServiceResponse answer(const std::string& id, const std::string& body) {
    return guarded([&] {
      auto j = parse_body(body);
      if (!j.contains("option_id") || !j["option_id"].is_string())
        throw Error(ErrorCode::UnknownOption, "body needs a string 'option_id'");
      auto entry = find(id);
      std::lock_guard lock(entry->mutex);
      apply_selection(entry->session, j["option_id"].get<std::string>());
      return ServiceResponse{200, payload(*entry)};
    });
  }

  ServiceResponse stop_session(const std::string& id) {
    return guarded([&] {
      auto entry = find(id);
      std::lock_guard lock(entry->mutex);
      stop(entry->session);
      return ServiceResponse{200, payload(*entry)};
    });
  }

  std::size_t session_count() {
    std::lock_guard lock(store_mutex_);
    purge_expired_locked();
    return sessions_.size();
  }

  /// Registers the routes on an httplib server.
  void mount(httplib::Server& server) {
    auto reply = [](httplib::Response& res, const ServiceResponse& r) {
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json; charset=utf-8");
    };
    server.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
      reply(res, {200, {{"status", "ok"}, {"apis", graph_->api_count()}}});
    });
    server.Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, create(req.body));
    });
    server.Get(R"(/sessions/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, get(req.matches[1]));
    });
    server.Post(R"(/sessions/([^/]+)/answer)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, answer(req.matches[1], req.body));
    });
    server.Post(R"(/sessions/([^/]+)/stop)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, stop_session(req.matches[1]));
    });
  }

 private:
  struct Entry {
    std::mutex mutex;
    DialogueSession session;
    std::string created_at;
    std::chrono::steady_clock::time_point last_used;
  };

  template <typename F>
  ServiceResponse guarded(F&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      return {http_status(e.code()), {{"code", std::string(to_string(e.code()))}, {"message", e.detail()}}};
    } catch (const std::exception& e) {
      return {500, {{"code", "Internal"}, {"message", e.what()}}};
    }
  }

  static nlohmann::json parse_body(const std::string& body) {
    if (body.empty()) return nlohmann::json::object();
    try {
      auto j = nlohmann::json::parse(body);
      if (!j.is_object()) throw Error(ErrorCode::FormatError, "body must be a JSON object");
      return j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FormatError, e.what());
    }
  }

  static std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
  }

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard lock(store_mutex_);
    purge_expired_locked();
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, id);
    it->second->last_used = clock_();
    return it->second;
  }

  void purge_expired_locked() {
    auto now = clock_();
    std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_used > config_.session_ttl; });
  }

  nlohmann::json payload(const Entry& entry) const {
    const auto& s = entry.session;
    nlohmann::json out = {{"session",
                           {{"id", s.id},
                            {"state", std::string(to_string(s.state))},
                            {"strategy", std::string(to_string(s.options.strategy))},
                            {"created_at", entry.created_at},
                            {"query", s.query},
                            {"transcript", transcript_json(s)}}}};
    if (s.state == SessionState::AwaitingAnswer)
      out["question"] = question_json(next_question(s));
    else
      out["recommendation"] = to_json(recommend(s, *graph_), *graph_);
    return out;
  }

  const KnowledgeGraph* graph_;
  LexicalIndex index_;
  ServiceConfig config_;
  Clock clock_;
  std::mutex store_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// Bind address "host:port" (default 127.0.0.1:8080).
inline std::pair<std::string, int> parse_bind_address(const std::string& bind) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos) return {bind.empty() ? "127.0.0.1" : bind, 8080};
  try {
    return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "bad bind address " + bind);
  }
}

}  // namespace apiclarify
