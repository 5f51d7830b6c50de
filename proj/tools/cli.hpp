#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace wb {

// Exit codes: 0 success, 1 a check failed, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// Serve-mode endpoint: one request object in, one response object out.
class ServeEndpoint {
 public:
  explicit ServeEndpoint(std::size_t node_budget = 5'000'000);
  ~ServeEndpoint();
  nlohmann::json handle(const nlohmann::json& request);
  // Parses one NDJSON line; malformed lines get an error response with a null id.
  std::string handle_line(const std::string& line);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wb
