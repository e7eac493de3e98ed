#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace anoneq {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// Line-oriented key=value output, written in insertion order so that a run
// with identical inputs produces byte-identical text.
class RunReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value);
  void add(const std::string& key, double value);
  void add(const std::string& key, bool value);
  void add(const std::string& key, int value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, std::uint64_t value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::ostream& operator<<(std::ostream& out, const RunReport& report);

}  // namespace anoneq
