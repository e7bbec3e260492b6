#pragma once

#include <memory>
#include <string>

#include "goldalign/service.hpp"

namespace goldalign {

/// HTTP + JSON front end of an AnnotationService.
///
///   GET  /api/sets
///   GET  /api/sets/{s}/pairs/{n}?annotator=A
///   PUT  /api/sets/{s}/pairs/{n}?annotator=A&version=V      body: annotation
///   POST /api/sets/{s}/pairs/{n}/link?annotator=A[&version=V]  body: {"e":[..],"f":[..]}
///   POST /api/sets/{s}/pairs/{n}/nt?annotator=A[&version=V]    body: {"side":"E","position":p}
///   POST /api/sets/{s}/pairs/{n}/reset?annotator=A[&version=V]
///   POST /api/sets/{s}/pairs/{n}/advance?annotator=A
///   POST /api/sets/{s}/pairs/{n}/prev?annotator=A
///   POST /api/sets/{s}/pairs/{n}/reload?annotator=A
///   GET  /api/sets/{s}/progress?annotator=A
///
/// Annotation bodies look like
///   {"groups":[{"e":[1,2],"f":[1]}],"not_translated":[{"side":"F","position":2}]}
/// with 1-based positions. Errors are {"error": kind, "message": text} with
/// status 400 (bad request), 404 (unknown set or pair), 409 (stale version)
/// or 422 (advance refused; the body lists "unaccounted" positions).
class HttpService {
 public:
  explicit HttpService(AnnotationService& service);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds to host:port; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace goldalign
