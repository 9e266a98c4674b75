#include "hgcs/params.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hgcs/errors.hpp"

namespace hgcs {
namespace {

void check_positive(const std::vector<double>& values, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || !(v > 0.0)) {
      std::ostringstream msg;
      msg << "parameter " << name << '[' << i << "] = " << v << " must be finite and > 0";
      throw ParameterError(msg.str());
    }
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  const std::string body = trim(text);
  if (body.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    const std::string item = trim(body.substr(start, comma - start));
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || errno != 0 || end == item.c_str() || *end != '\0') {
      throw ParameterError("malformed parameter entry '" + item + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

}  // namespace

ParamSet::ParamSet(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {
  check_positive(a_, "a");
  check_positive(b_, "b");
}

ParamSet ParamSet::shifted(double k) const {
  auto a = a_;
  auto b = b_;
  for (auto& v : a) v += k;
  for (auto& v : b) v += k;
  return ParamSet(std::move(a), std::move(b));
}

double ParamSet::ratio_product() const {
  double r = 1.0;
  for (double v : a_) r *= v;
  for (double v : b_) r /= v;
  return r;
}

double ParamSet::step_ratio(double n) const {
  double r = 1.0;
  for (double v : b_) r *= v + n;
  for (double v : a_) r /= v + n;
  return r;
}

std::string ParamSet::to_string() const { return join(a_) + '/' + join(b_); }

ParamSet ParamSet::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos && text.find('/', slash + 1) != std::string::npos) {
    throw ParameterError("parameter string '" + text + "' has more than one '/'");
  }
  if (slash == std::string::npos) return ParamSet(parse_list(text), {});
  return ParamSet(parse_list(text.substr(0, slash)), parse_list(text.substr(slash + 1)));
}

ParamSet validate_params(std::vector<double> a, std::vector<double> b) {
  return ParamSet(std::move(a), std::move(b));
}

}  // namespace hgcs
