#include "anoneq/report.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace anoneq {

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, end);
}

void RunReport::add(const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos || key.find('\n') != std::string::npos)
    throw std::invalid_argument("RunReport: bad key '" + key + "'");
  if (value.find('\n') != std::string::npos)
    throw std::invalid_argument("RunReport: value for '" + key + "' contains a newline");
  entries_.emplace_back(key, value);
}

void RunReport::add(const std::string& key, const char* value) { add(key, std::string(value)); }
void RunReport::add(const std::string& key, double value) { add(key, format_double(value)); }
void RunReport::add(const std::string& key, bool value) {
  add(key, std::string(value ? "true" : "false"));
}
void RunReport::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void RunReport::add(const std::string& key, long long value) { add(key, std::to_string(value)); }
void RunReport::add(const std::string& key, std::uint64_t value) {
  add(key, std::to_string(value));
}

void RunReport::write(std::ostream& out) const {
  for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
}

std::ostream& operator<<(std::ostream& out, const RunReport& report) {
  report.write(out);
  return out;
}

}  // namespace anoneq
