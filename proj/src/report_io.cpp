#include "sigdet/report_io.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <algorithm>
#include <stdexcept>
#include <sstream>

namespace sigdet {

namespace {

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& s, int line) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ConfigError, "power.csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return value;
}

}  // namespace

std::string format_power_csv(const PowerReport& report) {
  std::string out = std::string(kPowerCsvHeader) + "\n";
  for (const auto& r : report.rows) {
    out += r.scenario + "," + r.statistic + "," + shortest(r.effect) + "," + std::to_string(r.replications) + "," +
           std::to_string(r.rejections) + "," + shortest(r.power) + "," + shortest(r.mc_se) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

PowerReport parse_power_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ConfigError, "power.csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPowerCsvHeader) throw Error(ErrorCode::ConfigError, "power.csv: unexpected header '" + line + "'");
  PowerReport report;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw Error(ErrorCode::ConfigError, "power.csv line " + std::to_string(lineno) + ": expected 8 fields");
    }
    PowerRow r;
    r.scenario = f[0];
    r.statistic = f[1];
    r.effect = parse_number<double>(f[2], lineno);
    r.replications = parse_number<int>(f[3], lineno);
    r.rejections = parse_number<int>(f[4], lineno);
    r.power = parse_number<double>(f[5], lineno);
    r.mc_se = parse_number<double>(f[6], lineno);
    r.seed = parse_number<std::uint64_t>(f[7], lineno);
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string render_power_svg(const std::vector<PowerRow>& rows, const std::string& title) {
  // Layout in user units.
  constexpr double kLeft = 150, kRight = 30, kTop = 50, kRowH = 22, kPlotW = 420, kBottom = 70;
  std::vector<std::string> stats;
  std::vector<double> effects;
  for (const auto& r : rows) {
    if (std::find(stats.begin(), stats.end(), r.statistic) == stats.end()) stats.push_back(r.statistic);
    if (std::find(effects.begin(), effects.end(), r.effect) == effects.end()) effects.push_back(r.effect);
  }
  std::sort(effects.begin(), effects.end());
  const double plot_h = kRowH * static_cast<double>(std::max<std::size_t>(stats.size(), 1));
  const double width = kLeft + kPlotW + kRight;
  const double height = kTop + plot_h + kBottom;
  auto x_of = [&](double power) { return kLeft + power * kPlotW; };
  auto y_of = [&](std::size_t i) { return kTop + kRowH * (static_cast<double>(i) + 0.5); };

  static const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd", "#ff7f0e", "#8c564b"};
  auto marker = [&](std::size_t k, double cx, double cy) {
    const std::string fill = colors[k % 6];
    switch (k % 3) {
      case 0:
        return "<circle cx=\"" + fixed(cx, 2) + "\" cy=\"" + fixed(cy, 2) + "\" r=\"5\" fill=\"" + fill + "\"/>";
      case 1:
        return "<polygon points=\"" + fixed(cx, 2) + "," + fixed(cy - 6, 2) + " " + fixed(cx - 5.5, 2) + "," +
               fixed(cy + 4, 2) + " " + fixed(cx + 5.5, 2) + "," + fixed(cy + 4, 2) + "\" fill=\"" + fill + "\"/>";
      default:
        return "<rect x=\"" + fixed(cx - 4.5, 2) + "\" y=\"" + fixed(cy - 4.5, 2) +
               "\" width=\"9\" height=\"9\" fill=\"" + fill + "\"/>";
    }
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << " " << fixed(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(width / 2, 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double x = x_of(t / 4.0);
    svg << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << fixed(kTop, 2) << "\" x2=\"" << fixed(x, 2) << "\" y2=\""
        << fixed(kTop + plot_h, 2) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fixed(x, 2) << "\" y=\"" << fixed(kTop + plot_h + 16, 2)
        << "\" text-anchor=\"middle\">" << fixed(t / 4.0, 2) << "</text>\n";
  }
  svg << "<line x1=\"" << fixed(x_of(0.05), 2) << "\" y1=\"" << fixed(kTop, 2) << "\" x2=\"" << fixed(x_of(0.05), 2)
      << "\" y2=\"" << fixed(kTop + plot_h, 2) << "\" stroke=\"#999999\" stroke-dasharray=\"4,3\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + kPlotW / 2, 2) << "\" y=\"" << fixed(kTop + plot_h + 34, 2)
      << "\" text-anchor=\"middle\">power</text>\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    svg << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(y_of(i), 2) << "\" x2=\""
        << fixed(kLeft + kPlotW, 2) << "\" y2=\"" << fixed(y_of(i), 2) << "\" stroke=\"#f0f0f0\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 8, 2) << "\" y=\"" << fixed(y_of(i) + 4, 2) << "\" text-anchor=\"end\">"
        << xml_escape(stats[i]) << "</text>\n";
  }
  for (const auto& r : rows) {
    const auto i = static_cast<std::size_t>(std::find(stats.begin(), stats.end(), r.statistic) - stats.begin());
    const auto k = static_cast<std::size_t>(std::find(effects.begin(), effects.end(), r.effect) - effects.begin());
    svg << marker(k, x_of(r.power), y_of(i)) << "\n";
  }
  double lx = kLeft;
  const double ly = kTop + plot_h + 56;
  for (std::size_t k = 0; k < effects.size(); ++k) {
    svg << marker(k, lx + 6, ly - 4) << "\n";
    svg << "<text x=\"" << fixed(lx + 16, 2) << "\" y=\"" << fixed(ly, 2) << "\">effect " << shortest(effects[k])
        << "</text>\n";
    lx += 100;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string format_manifest(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["source"] = m.source;
  j["seed"] = m.seed;
  j["output_dir"] = m.output_dir;
  j["threads"] = m.threads;
  j["config_sha256"] = sha256_hex(m.config_yaml);
  j["config"] = m.config_yaml;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : m.files) j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}});
  return j.dump(2) + "\n";
}

}  // namespace sigdet
