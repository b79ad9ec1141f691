#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cubespec/error.hpp"
#include "cubespec/experiment.hpp"

namespace cubespec {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 190;  // room for the legend
constexpr double kTop = 30;
constexpr double kBottom = 50;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

// Fixed-point rendering keeps the file byte-stable across platforms.
std::string Fixed(double x, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void PlotRatio(std::span<const TrialRecord> records,
               std::span<const std::string> labels, std::ostream& out) {
  if (records.empty()) Fail(ErrorCode::kInvalidArgument, "no records to plot");
  if (!labels.empty() && labels.size() != records.size()) {
    Fail(ErrorCode::kInvalidArgument, "one series label per record required");
  }

  // Series in order of first appearance.
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  std::vector<std::size_t> series_of(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string name =
        labels.empty() ? "p=" + FormatReal(records[i].p) : labels[i];
    auto [it, inserted] = index.emplace(name, names.size());
    if (inserted) names.push_back(name);
    series_of[i] = it->second;
  }

  double x_lo = records.front().n;
  double x_hi = x_lo;
  double y_lo = 1.0;
  double y_hi = 1.0;
  for (const TrialRecord& r : records) {
    x_lo = std::min<double>(x_lo, r.n);
    x_hi = std::max<double>(x_hi, r.n);
    if (r.ratio) {
      y_lo = std::min(y_lo, *r.ratio);
      y_hi = std::max(y_hi, *r.ratio);
    }
  }
  x_lo -= 1.0;
  x_hi += 1.0;
  const double pad = std::max(0.05, 0.1 * (y_hi - y_lo));
  y_lo -= pad;
  y_hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) {
    return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(kWidth, 0)
      << "\" height=\"" << Fixed(kHeight, 0) << "\" viewBox=\"0 0 "
      << Fixed(kWidth, 0) << ' ' << Fixed(kHeight, 0) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << Fixed(kWidth, 0) << "\" height=\""
      << Fixed(kHeight, 0) << "\" fill=\"white\"/>\n";

  // Axes.
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(kTop + plot_h)
      << "\" x2=\"" << Fixed(kLeft + plot_w) << "\" y2=\"" << Fixed(kTop + plot_h)
      << "\"/>\n"
      << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(kTop) << "\" x2=\""
      << Fixed(kLeft) << "\" y2=\"" << Fixed(kTop + plot_h) << "\"/>\n"
      << "</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  std::vector<int> ns;
  for (const TrialRecord& r : records) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) {
    out << "<text x=\"" << Fixed(sx(n)) << "\" y=\"" << Fixed(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << n << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double y = y_lo + (y_hi - y_lo) * t / 4.0;
    out << "<text x=\"" << Fixed(kLeft - 6) << "\" y=\"" << Fixed(sy(y) + 4)
        << "\" text-anchor=\"end\">" << Fixed(y, 3) << "</text>\n";
  }
  out << "<text x=\"" << Fixed(kLeft + plot_w / 2) << "\" y=\""
      << Fixed(kHeight - 12) << "\" text-anchor=\"middle\">n</text>\n"
      << "<text x=\"16\" y=\"" << Fixed(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << Fixed(kTop + plot_h / 2)
      << ")\">lambda1 / max(sqrt(Delta), np)</text>\n"
      << "</g>\n";

  out << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(sy(1.0))
      << "\" x2=\"" << Fixed(kLeft + plot_w) << "\" y2=\"" << Fixed(sy(1.0))
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t s = 0; s < names.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    out << "<g fill=\"" << color << "\" fill-opacity=\"0.7\">\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (series_of[i] != s || !records[i].ratio) continue;
      out << "<circle cx=\"" << Fixed(sx(records[i].n)) << "\" cy=\""
          << Fixed(sy(*records[i].ratio)) << "\" r=\"3\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t s = 0; s < names.size(); ++s) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(s);
    const double x = kLeft + plot_w + 16;
    out << "<circle cx=\"" << Fixed(x) << "\" cy=\"" << Fixed(y) << "\" r=\"4\" fill=\""
        << kPalette[s % std::size(kPalette)] << "\"/>\n"
        << "<text x=\"" << Fixed(x + 10) << "\" y=\"" << Fixed(y + 4) << "\">"
        << Escape(names[s]) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

void PlotRatioFile(std::span<const TrialRecord> records,
                   std::span<const std::string> labels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  PlotRatio(records, labels, out);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace cubespec
