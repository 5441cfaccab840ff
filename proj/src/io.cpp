#include "polarfk/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "polarfk/errors.hpp"

namespace polarfk {

namespace {

std::string fixed(double v, int digits = 2) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), r.ptr);
}

std::string general(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
  return std::string(buf.data(), r.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out) {
  out << "param,lambda,converged,outer_iters,residual\n";
  for (const auto& p : points)
    out << format_double(p.param) << ',' << format_double(p.lambda) << ','
        << (p.converged ? "true" : "false") << ',' << p.outer_iters << ','
        << format_double(p.residual) << '\n';
}

void write_svg(const SweepResult& sweep, std::ostream& out) {
  const auto& pts = sweep.points;
  if (pts.size() < 2) throw ValidationError("a sweep plot needs at least two points");
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 20, B = 50;
  double x0 = pts.front().param, x1 = x0, y0 = pts.front().lambda, y1 = y0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.param);
    x1 = std::max(x1, p.param);
    y0 = std::min(y0, p.lambda);
    y1 = std::max(y1, p.lambda);
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    const double pad = std::max(1e-12, 1e-3 * std::abs(y0));
    y0 -= pad;
    y1 += pad;
  }
  const auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  const auto text = [&](double x, double y, const std::string& s, const char* anchor,
                        const char* extra = "") {
    out << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" font-family=\"sans-serif\" "
        << "font-size=\"12\" text-anchor=\"" << anchor << "\"" << extra << ">" << escape(s)
        << "</text>\n";
  };
  text(sx(x0), H - B + 16, general(x0), "middle");
  text(sx(x1), H - B + 16, general(x1), "middle");
  text(L - 6, sy(y0) + 4, general(y0), "end");
  text(L - 6, sy(y1) + 4, general(y1), "end");
  text(0.5 * (L + W - R), H - 10, sweep.param_name, "middle");
  const double ly = 0.5 * (T + H - B);
  text(18, ly, "\xCE\xBB", "middle", (" transform=\"rotate(-90 18 " + fixed(ly) + ")\"").c_str());

  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k)
    out << (k ? " " : "") << fixed(sx(pts[k].param)) << ',' << fixed(sy(pts[k].lambda));
  out << "\"/>\n";
  for (const auto& p : pts)
    out << "<circle cx=\"" << fixed(sx(p.param)) << "\" cy=\"" << fixed(sy(p.lambda))
        << "\" r=\"3.5\" stroke=\"steelblue\" fill=\"" << (p.converged ? "steelblue" : "none")
        << "\"/>\n";
  out << "</svg>\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

void emit_plot(const SweepResult& sweep, const std::string& path) {
  std::ostringstream ss;
  write_svg(sweep, ss);
  write_file(path, ss.str());
}

}  // namespace polarfk
