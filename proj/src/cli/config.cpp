#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kgsol/cli.hpp"
#include "kgsol/domain.hpp"

namespace kgsol::cli {
namespace {

constexpr int kDefaultRangeCount = 100;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parseNumber(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) {
    throw DomainError("cannot read a finite number from '" + text + "' in " + context);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::vector<double> parseRange(const std::string& text) {
  if (text.find(':') == std::string::npos) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(parseNumber(p, "'" + text + "'"));
    if (out.empty()) throw DomainError("empty value list");
    return out;
  }
  auto parts = split(text, ':');
  // start:stop[:log] falls back to the default point count
  if (parts.size() == 2 || (parts.size() == 3 && trim(parts[2]) == "log")) {
    parts.insert(parts.begin() + 2, std::to_string(kDefaultRangeCount));
  }
  if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && trim(parts[3]) != "log")) {
    throw DomainError("range '" + text + "' is not start:stop:count[:log]");
  }
  const double start = parseNumber(parts[0], "range start");
  const double stop = parseNumber(parts[1], "range stop");
  const double countD = parseNumber(parts[2], "range count");
  if (countD < 1.0 || countD != std::floor(countD) || countD > 1e8) {
    throw DomainError("range count in '" + text + "' must be a positive integer");
  }
  const auto count = static_cast<std::size_t>(countD);
  const bool log = parts.size() == 4;
  if (log && !(start > 0.0 && stop > 0.0)) {
    throw DomainError("log range '" + text + "' needs positive endpoints");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double a = log ? std::log(start) : start;
  const double b = log ? std::log(stop) : stop;
  const double step = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = a + static_cast<double>(i) * step;
    out[i] = log ? std::exp(u) : u;
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

std::string formatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> expandConfigFile(const std::vector<std::string>& args,
                                          const std::vector<std::string>& commands) {
  std::vector<std::string> rest;
  std::vector<std::string> fileTokens;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw DomainError("--config needs a file path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file '" + path + "'");
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw DomainError(path + ":" + std::to_string(lineNo) + ": expected key = value");
      }
      std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      while (!key.empty() && key[0] == '-') key.erase(0, 1);
      if (key.empty()) throw DomainError(path + ":" + std::to_string(lineNo) + ": empty key");
      if (value == "true") {
        fileTokens.push_back("--" + key);
      } else if (value != "false") {
        fileTokens.push_back("--" + key);
        fileTokens.push_back(value);
      }
    }
  }
  auto at = std::find_if(rest.begin(), rest.end(), [&](const std::string& a) {
    return std::find(commands.begin(), commands.end(), a) != commands.end();
  });
  if (at == rest.end()) {
    at = rest.empty() ? rest.end() : rest.begin() + 1;
  } else {
    ++at;
  }
  rest.insert(at, fileTokens.begin(), fileTokens.end());
  return rest;
}

}  // namespace kgsol::cli
