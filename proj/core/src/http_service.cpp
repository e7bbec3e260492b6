#include "goldalign/http_service.hpp"

#include <httplib.h>

#include <charconv>
#include <nlohmann/json.hpp>

namespace goldalign {

using nlohmann::json;

namespace {

json tokens_json(const std::vector<Token>& tokens) {
  json out = json::array();
  for (const auto& t : tokens) {
    out.push_back({{"position", t.position},
                   {"surface", t.surface},
                   {"kind", t.kind == TokenKind::word ? "word" : "punctuation"}});
  }
  return out;
}

json annotation_json(const Annotation& ann) {
  json groups = json::array();
  for (const auto& g : ann.groups) groups.push_back({{"e", g.e_positions}, {"f", g.f_positions}});
  json nts = json::array();
  for (const auto& nt : ann.nt_marks) {
    nts.push_back({{"side", std::string(1, side_letter(nt.side))}, {"position", nt.position}});
  }
  return {{"groups", groups}, {"not_translated", nts}};
}

json coverage_json(const Coverage& cov) { return {{"e", cov.missing_e}, {"f", cov.missing_f}}; }

json view_json(const PairView& v) {
  return {{"set", v.set_id},
          {"ordinal", v.ordinal},
          {"total", v.total},
          {"verse_id", v.pair->verse_id},
          {"e", tokens_json(v.pair->side_e)},
          {"f", tokens_json(v.pair->side_f)},
          {"annotation", annotation_json(v.annotation)},
          {"finalized", v.finalized},
          {"version", v.version},
          {"complete", v.coverage.complete()},
          {"unaccounted", coverage_json(v.coverage)}};
}

class BadRequest : public Error {
 public:
  using Error::Error;
};

PositionSet positions(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw BadRequest(std::string("expected an array field '") + field + "'");
  }
  PositionSet out;
  for (const auto& p : j[field]) {
    if (!p.is_number_unsigned()) throw BadRequest("positions must be unsigned integers");
    out.push_back(p.get<Position>());
  }
  return out;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("request body is not a JSON object");
  return j;
}

std::string annotator_of(const httplib::Request& req) {
  if (!req.has_param("annotator")) throw BadRequest("missing 'annotator' query parameter");
  return req.get_param_value("annotator");
}

std::optional<std::uint64_t> version_of(const httplib::Request& req) {
  if (!req.has_param("version")) return std::nullopt;
  const std::string v = req.get_param_value("version");
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw BadRequest("bad version '" + v + "'");
  }
  return out;
}

std::size_t ordinal_of(const httplib::Request& req) {
  const std::string s = req.matches[2];
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw BadRequest("bad ordinal");
  return out;
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void error_reply(httplib::Response& res, int status, const char* kind, const std::string& message,
                 json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  reply(res, status, extra);
}

/// Runs a handler and maps domain errors onto HTTP statuses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 200, fn(req));
    } catch (const AdvanceRejected& e) {
      error_reply(res, 422, "incomplete", e.what(), {{"unaccounted", coverage_json(e.coverage())}});
    } catch (const StaleVersion& e) {
      error_reply(res, 409, "stale_version", e.what(), {{"current_version", e.current()}});
    } catch (const NotFound& e) {
      error_reply(res, 404, "not_found", e.what());
    } catch (const BadRequest& e) {
      error_reply(res, 400, "bad_request", e.what());
    } catch (const ArgumentError& e) {
      error_reply(res, 400, "invalid", e.what());
    } catch (const FormatError& e) {
      error_reply(res, 400, "invalid", e.what());
    } catch (const Error& e) {
      error_reply(res, 500, "internal", e.what());
    } catch (const json::exception& e) {
      error_reply(res, 400, "bad_request", e.what());
    }
  };
}

}  // namespace

struct HttpService::Impl {
  explicit Impl(AnnotationService& s) : service(s) {}
  AnnotationService& service;
  httplib::Server server;
};

HttpService::HttpService(AnnotationService& service)
    : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;
  const std::string pair_re = R"(/api/sets/([^/]+)/pairs/(\d+))";

  srv.Get("/api/sets", guarded([&svc](const httplib::Request&) {
            json sets = json::array();
            for (const auto& s : svc.list_sets()) sets.push_back({{"id", s.id}, {"pairs", s.pairs}});
            return json{{"sets", sets}};
          }));

  srv.Get(pair_re, guarded([&svc](const httplib::Request& req) {
            return view_json(svc.fetch(req.matches[1], ordinal_of(req), annotator_of(req)));
          }));

  srv.Put(pair_re, guarded([&svc](const httplib::Request& req) {
            const auto version = version_of(req);
            if (!version) throw BadRequest("PUT requires a 'version' query parameter");
            const json body = parse_body(req);
            std::vector<LinkGroup> groups;
            for (const auto& g : body.value("groups", json::array())) {
              groups.push_back({positions(g, "e"), positions(g, "f")});
            }
            std::vector<NotTranslated> nts;
            for (const auto& nt : body.value("not_translated", json::array())) {
              nts.push_back({parse_side(nt.at("side").get<std::string>()),
                             nt.at("position").get<Position>()});
            }
            return view_json(svc.save(req.matches[1], ordinal_of(req), annotator_of(req), *version,
                                      std::move(groups), std::move(nts)));
          }));

  srv.Post(pair_re + "/link", guarded([&svc](const httplib::Request& req) {
             const json body = parse_body(req);
             return view_json(svc.link(req.matches[1], ordinal_of(req), annotator_of(req),
                                       version_of(req), positions(body, "e"), positions(body, "f")));
           }));

  srv.Post(pair_re + "/nt", guarded([&svc](const httplib::Request& req) {
             const json body = parse_body(req);
             return view_json(svc.not_translated(
                 req.matches[1], ordinal_of(req), annotator_of(req), version_of(req),
                 parse_side(body.at("side").get<std::string>()), body.at("position").get<Position>()));
           }));

  srv.Post(pair_re + "/reset", guarded([&svc](const httplib::Request& req) {
             return view_json(
                 svc.reset(req.matches[1], ordinal_of(req), annotator_of(req), version_of(req)));
           }));

  srv.Post(pair_re + "/advance", guarded([&svc](const httplib::Request& req) {
             return view_json(svc.advance(req.matches[1], ordinal_of(req), annotator_of(req)));
           }));

  srv.Post(pair_re + "/prev", guarded([&svc](const httplib::Request& req) {
             return view_json(svc.previous(req.matches[1], ordinal_of(req), annotator_of(req)));
           }));

  srv.Post(pair_re + "/reload", guarded([&svc](const httplib::Request& req) {
             return view_json(svc.reload(req.matches[1], ordinal_of(req), annotator_of(req)));
           }));

  srv.Get(R"(/api/sets/([^/]+)/progress)", guarded([&svc](const httplib::Request& req) {
            const Progress p = svc.progress(req.matches[1], annotator_of(req));
            return json{{"set", p.set_id},           {"annotator", p.annotator},
                        {"total", p.total},          {"finalized", p.finalized},
                        {"current", p.current},      {"elapsed_seconds", p.elapsed_seconds}};
          }));
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

}  // namespace goldalign
