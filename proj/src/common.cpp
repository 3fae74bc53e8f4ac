#include "psox/common.hpp"

#include <charconv>
#include <cstdlib>

namespace psox {

double mean_of(const std::vector<double>& v) {
  require(!v.empty(), "mean of empty vector");
  NeumaierSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
  double m = mean_of(v);
  NeumaierSum s;
  for (double x : v) s.add((x - m) * (x - m));
  return std::sqrt(s.value() / static_cast<double>(v.size()));
}

double sample_sd(const std::vector<double>& v) {
  require(v.size() >= 2, "sample sd needs at least 2 values");
  double m = mean_of(v);
  NeumaierSum s;
  for (double x : v) s.add((x - m) * (x - m));
  return std::sqrt(s.value() / static_cast<double>(v.size() - 1));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size() && a.size() >= 2, "pearson needs two equal-length vectors, n>=2");
  double ma = mean_of(a), mb = mean_of(b);
  NeumaierSum sab, saa, sbb;
  for (size_t i = 0; i < a.size(); ++i) {
    sab.add((a[i] - ma) * (b[i] - mb));
    saa.add((a[i] - ma) * (a[i] - ma));
    sbb.add((b[i] - mb) * (b[i] - mb));
  }
  double den = std::sqrt(saa.value()) * std::sqrt(sbb.value());
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab.value() / den;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt_double_sig(double v, int digits) {
  char buf[80];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt_int(long long v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

double parse_double(const std::string& s) {
  // strtod (not from_chars) so "nan"/"inf" spellings round-trip too.
  require(!s.empty(), "empty numeric field");
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  require(end == c + s.size(), "bad numeric field: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(), "bad integer field: '" + s + "'");
  return v;
}

}  // namespace psox
