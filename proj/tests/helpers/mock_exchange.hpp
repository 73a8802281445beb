#pragma once

#include <atomic>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "pumpwatch/util/rng.hpp"

namespace pumpwatch::testing {

struct MockRow {
  std::int64_t id = 0;
  std::int64_t ts_ms = 0;
  std::string price;
  std::string qty;
  bool buyer_is_maker = false;
};

/// Deterministic fixture rows with raw decimal strings like the live
/// endpoint sends.
inline std::vector<MockRow> make_mock_rows(std::uint64_t seed, std::size_t n,
                                           std::int64_t first_id, std::int64_t start_ms,
                                           std::int64_t spacing_ms = 137) {
  SplitMix64 rng(seed);
  std::vector<MockRow> rows;
  rows.reserve(n);
  std::int64_t ts = start_ms;
  for (std::size_t i = 0; i < n; ++i) {
    MockRow r;
    r.id = first_id + static_cast<std::int64_t>(i);
    ts += static_cast<std::int64_t>(rng.below(spacing_ms));
    r.ts_ms = ts;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8f", 0.0001 * (1.0 + 0.3 * rng.next_double()));
    r.price = buf;
    std::snprintf(buf, sizeof(buf), "%.2f", 1.0 + 400.0 * rng.next_double());
    r.qty = buf;
    r.buyer_is_maker = rng.next_double() < 0.5;
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Loopback stand-in for the aggregated-trades endpoint: same query shape
/// (symbol / startTime / fromId / limit), JSON rows with the live field
/// names, plus failure injection for the retry and gap paths.
class MockExchange {
 public:
  struct Options {
    int fail_first = 0;                 // respond 500 to the first N requests
    std::set<std::int64_t> drop_ids;    // omit these rows (forces a gap)
  };

  explicit MockExchange(std::map<std::string, std::vector<MockRow>> rows)
      : MockExchange(std::move(rows), Options()) {}

  MockExchange(std::map<std::string, std::vector<MockRow>> rows, Options options)
      : rows_(std::move(rows)), options_(options) {
    server_.Get("/api/v3/aggTrades", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockExchange() {
    server_.stop();
    thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int request_count() const { return requests_.load(); }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    const int n = ++requests_;
    if (n <= options_.fail_first) {
      res.status = 500;
      res.set_content("{\"code\":-1000,\"msg\":\"injected failure\"}", "application/json");
      return;
    }
    const auto it = rows_.find(req.get_param_value("symbol"));
    if (it == rows_.end()) {
      res.status = 400;
      res.set_content("{\"code\":-1121,\"msg\":\"Invalid symbol.\"}", "application/json");
      return;
    }
    const auto& rows = it->second;
    const int limit = req.has_param("limit") ? std::stoi(req.get_param_value("limit")) : 500;

    std::size_t begin = rows.size();
    if (req.has_param("fromId")) {
      const std::int64_t from = std::stoll(req.get_param_value("fromId"));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].id >= from) {
          begin = i;
          break;
        }
      }
    } else if (req.has_param("startTime")) {
      const std::int64_t start = std::stoll(req.get_param_value("startTime"));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].ts_ms >= start) {
          begin = i;
          break;
        }
      }
    } else {
      begin = 0;
    }

    nlohmann::json page = nlohmann::json::array();
    for (std::size_t i = begin; i < rows.size() && page.size() < static_cast<std::size_t>(limit);
         ++i) {
      if (options_.drop_ids.contains(rows[i].id)) continue;
      page.push_back({{"a", rows[i].id},
                      {"p", rows[i].price},
                      {"q", rows[i].qty},
                      {"f", rows[i].id},
                      {"l", rows[i].id},
                      {"T", rows[i].ts_ms},
                      {"m", rows[i].buyer_is_maker},
                      {"M", true}});
    }
    res.set_content(page.dump(), "application/json");
  }

  std::map<std::string, std::vector<MockRow>> rows_;
  Options options_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
};

}  // namespace pumpwatch::testing
