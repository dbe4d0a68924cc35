#include "gelfand/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/identities.hpp"

namespace gelfand {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string branch_csv(const Branch& b, const std::vector<std::optional<double>>& mu1) {
  std::ostringstream os;
  os << "s,lambda,u0,w0,delta_u_at_1,pohozaev_residual,mu1\r\n";
  const auto& p = b.problem;
  const bool power = p.order == 4 && p.nonlinearity == Nonlinearity::QPower;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& pt = b.points[i];
    os << format_double(pt.s) << ',' << format_double(pt.lambda) << ',' << format_double(pt.params.at(0)) << ',';
    if (pt.params.size() > 1) os << format_double(pt.params[1]);
    os << ',' << format_double(pt.delta_u_at_1) << ',';
    if (power) os << format_double(std::fabs(pohozaev_boundary_value(p.n, pt.lambda, p.bc.u1, *p.bc.du1, pt.delta_u_at_1)));
    os << ',';
    if (i < mu1.size() && mu1[i]) os << format_double(*mu1[i]);
    os << "\r\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::IoError, "malformed number in branch table: '" + s + "'");
  }
}

}  // namespace

Branch read_branch_csv(const std::string& text, const ProblemSpec& tmpl) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::IoError, "empty branch table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorCode::IoError, "branch table lacks column " + name);
    return std::size_t(it - header.begin());
  };
  const std::size_t cs = col("s"), cl = col("lambda"), cu = col("u0"), cw = col("w0"), cd = col("delta_u_at_1");
  Branch b;
  b.problem = tmpl;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) fail(ErrorCode::IoError, "ragged row in branch table");
    BranchPoint pt;
    pt.s = parse_double(f[cs]);
    pt.lambda = parse_double(f[cl]);
    pt.params.push_back(parse_double(f[cu]));
    if (tmpl.num_center_values() == 2) pt.params.push_back(parse_double(f[cw]));
    pt.amplitude = pt.params[0];
    pt.delta_u_at_1 = parse_double(f[cd]);
    b.points.push_back(std::move(pt));
  }
  const std::vector<double>* ref = nullptr;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    auto& pt = b.points[i];
    std::vector<double> chord;
    if (!ref && i + 1 < b.points.size()) {
      const auto& nx = b.points[i + 1];
      for (std::size_t j = 0; j < pt.params.size(); ++j) chord.push_back(nx.params[j] - pt.params[j]);
      chord.push_back(nx.lambda - pt.lambda);
    }
    pt.tangent = branch_tangent(tmpl, pt.lambda, pt.params, ref ? ref : (chord.empty() ? nullptr : &chord));
    ref = &pt.tangent;
    if (i > 0 && !b.fold_index && b.points[i - 1].tangent.back() >= 0.0 && pt.tangent.back() < 0.0)
      b.fold_index = pt.lambda >= b.points[i - 1].lambda ? i : i - 1;
  }
  if (b.fold_index) {
    b.lambda_star = b.points[*b.fold_index].lambda;
  } else {
    for (const auto& pt : b.points) b.lambda_star = std::max(b.lambda_star, pt.lambda);
  }
  return b;
}

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string branch_svg(const Branch& b, std::optional<double> lambda_star, const std::string& title) {
  const double W = 640, H = 420, L = 60, R = 20, T = 40, B = 50;
  double lmax = 0.0, umin = INFINITY, umax = -INFINITY;
  for (const auto& p : b.points) {
    lmax = std::max(lmax, p.lambda);
    umin = std::min(umin, p.amplitude);
    umax = std::max(umax, p.amplitude);
  }
  if (b.points.empty()) umin = 0, umax = 1;
  if (lmax <= 0) lmax = 1;
  if (umax <= umin) umax = umin + 1;
  const double lx = lmax * 1.05, ux0 = umin, ux1 = umax + 0.02 * (umax - umin);
  auto X = [&](double l) { return L + (W - L - R) * l / lx; };
  auto Y = [&](double u) { return H - B - (H - T - B) * (u - ux0) / (ux1 - ux0); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!title.empty()) os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const double sx = nice_step(lx);
  for (double v = 0.0; v <= lx + 1e-12; v += sx) {
    os << "<line x1=\"" << fmt("%.2f", X(v)) << "\" y1=\"" << H - B << "\" x2=\"" << fmt("%.2f", X(v)) << "\" y2=\""
       << H - B + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fmt("%.2f", X(v)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt("%g", v)
       << "</text>\n";
  }
  const double sy = nice_step(ux1 - ux0);
  for (double v = std::ceil(ux0 / sy) * sy; v <= ux1 + 1e-12; v += sy) {
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << fmt("%.2f", Y(v)) << "\" x2=\"" << L << "\" y2=\"" << fmt("%.2f", Y(v))
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << L - 8 << "\" y=\"" << fmt("%.2f", Y(v) + 4) << "\" text-anchor=\"end\">" << fmt("%g", v)
       << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">lambda</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\">u(0)</text>\n</g>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    if (i) os << ' ';
    os << fmt("%.2f", X(b.points[i].lambda)) << ',' << fmt("%.2f", Y(b.points[i].amplitude));
  }
  os << "\"/>\n";
  if (b.fold_index) {
    const auto& f = b.points[*b.fold_index];
    const double lf = lambda_star.value_or(f.lambda);
    os << "<circle cx=\"" << fmt("%.2f", X(lf)) << "\" cy=\"" << fmt("%.2f", Y(f.amplitude))
       << "\" r=\"4\" fill=\"#c0392b\"/>\n";
    os << "<text x=\"" << fmt("%.2f", X(lf) - 6) << "\" y=\"" << fmt("%.2f", Y(f.amplitude) - 8)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">fold " << fmt("%.6f", lf) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

nlohmann::json constants_json(const ReferenceConstants& c) {
  nlohmann::json j;
  j["n"] = c.n;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  j["q_rhs"] = opt(c.q_rhs);
  j["q0"] = opt(c.q0);
  j["a1"] = opt(c.a1);
  j["a2"] = opt(c.a2);
  j["lambda_star_2nd"] = c.lambda_star_2nd;
  j["lambda_conj_4th"] = opt(c.lambda_conj_4th);
  if (c.barrier_coeffs) j["barrier_coeffs"] = {c.barrier_coeffs->first, c.barrier_coeffs->second};
  else j["barrier_coeffs"] = nullptr;
  return j;
}

nlohmann::json problem_json(const ProblemSpec& p) {
  nlohmann::json j;
  j["order"] = p.order;
  j["n"] = p.n;
  j["nonlinearity"] = to_string(p.nonlinearity);
  j["lambda"] = p.lambda;
  j["bc_u1"] = p.bc.u1;
  j["bc_du1"] = p.bc.du1 ? nlohmann::json(*p.bc.du1) : nlohmann::json(nullptr);
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(dir, ec);
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace gelfand
