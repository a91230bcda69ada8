#include <cmphase/report.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cmphase {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};
  return colors[i % 7];
}

} // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "svg") return ReportFormat::svg;
  throw std::invalid_argument("unknown report format '" + name + "'");
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = "k,epsilon,total_energy,potential_term,gradient_term,curvature_term,transitions,oscillations,converged\n";
  for (const auto& r : records) {
    out += num(r.k) + ',' + num(r.epsilon) + ',' + num(r.total_energy) + ',' + num(r.potential_term) + ',' +
           num(r.gradient_term) + ',' + num(r.curvature_term) + ',' + std::to_string(r.transitions) + ',' +
           std::to_string(r.oscillations) + ',' + (r.converged ? "true" : "false") + '\n';
  }
  return out;
}

std::string records_to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"k", r.k},
                   {"epsilon", r.epsilon},
                   {"total_energy", r.total_energy},
                   {"potential_term", r.potential_term},
                   {"gradient_term", r.gradient_term},
                   {"curvature_term", r.curvature_term},
                   {"transitions", r.transitions},
                   {"oscillations", r.oscillations},
                   {"converged", r.converged}});
  return arr.dump(2);
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  auto real = [](const nlohmann::json& v) { return v.is_null() ? std::nan("") : v.get<double>(); };
  std::vector<SweepRecord> out;
  for (const auto& j : arr)
    out.push_back({real(j.at("k")), real(j.at("epsilon")), real(j.at("total_energy")), real(j.at("potential_term")),
                   real(j.at("gradient_term")), real(j.at("curvature_term")), j.at("transitions").get<int>(),
                   j.at("oscillations").get<int>(), j.at("converged").get<bool>()});
  return out;
}

std::string records_to_svg(const std::vector<SweepRecord>& records) {
  std::map<double, std::vector<const SweepRecord*>> by_k;
  std::vector<double> ks, eps;
  double emin = INFINITY, emax = -INFINITY;
  int omax = 0;
  for (const auto& r : records) {
    by_k[r.k].push_back(&r);
    ks.push_back(r.k);
    eps.push_back(r.epsilon);
    if (std::isfinite(r.total_energy)) {
      emin = std::min(emin, r.total_energy);
      emax = std::max(emax, r.total_energy);
    }
    omax = std::max(omax, r.oscillations);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  if (!(emin < emax)) {
    emin = std::isfinite(emin) ? emin - 1.0 : -1.0;
    emax = emin + 2.0;
  }
  const double lx0 = std::log10(eps.front()), lx1 = eps.size() > 1 ? std::log10(eps.back()) : lx0 + 1.0;

  // Left panel: (60, 40) to (380, 320); right panel: (460, 40) to (780, 320).
  auto px = [&](double e) { return 60.0 + 320.0 * (std::log10(e) - lx0) / (lx1 - lx0); };
  auto py = [&](double v) { return 320.0 - 280.0 * (v - emin) / (emax - emin); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"380\" font-family=\"sans-serif\" "
       "font-size=\"11\">\n"
    << "<rect width=\"840\" height=\"380\" fill=\"white\"/>\n"
    << "<text x=\"220\" y=\"24\" text-anchor=\"middle\">total energy vs epsilon</text>\n"
    << "<line x1=\"60\" y1=\"320\" x2=\"380\" y2=\"320\" stroke=\"black\"/>\n"
    << "<line x1=\"60\" y1=\"40\" x2=\"60\" y2=\"320\" stroke=\"black\"/>\n"
    << "<text x=\"220\" y=\"350\" text-anchor=\"middle\">epsilon (log)</text>\n"
    << "<text x=\"56\" y=\"44\" text-anchor=\"end\">" << fixed(emax, 3) << "</text>\n"
    << "<text x=\"56\" y=\"320\" text-anchor=\"end\">" << fixed(emin, 3) << "</text>\n";
  for (double e : eps)
    s << "<text x=\"" << fixed(px(e)) << "\" y=\"334\" text-anchor=\"middle\">" << num(e) << "</text>\n";
  std::size_t ci = 0;
  for (const auto& [k, rows] : by_k) {
    std::vector<const SweepRecord*> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->epsilon < b->epsilon; });
    std::string pts;
    for (const auto* r : sorted) {
      if (!std::isfinite(r->total_energy)) continue;
      pts += fixed(px(r->epsilon)) + ',' + fixed(py(r->total_energy)) + ' ';
      s << "<circle cx=\"" << fixed(px(r->epsilon)) << "\" cy=\"" << fixed(py(r->total_energy))
        << "\" r=\"3\" fill=\"" << palette(ci) << "\"/>\n";
    }
    if (!pts.empty())
      s << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << palette(ci) << "\"/>\n";
    s << "<text x=\"300\" y=\"" << 52 + 14 * ci << "\" fill=\"" << palette(ci) << "\">k = " << num(k) << "</text>\n";
    ++ci;
  }

  s << "<text x=\"620\" y=\"24\" text-anchor=\"middle\">oscillations over (k, epsilon)</text>\n";
  const double cw = 320.0 / static_cast<double>(eps.size()), ch = 280.0 / static_cast<double>(ks.size());
  for (const auto& r : records) {
    const auto ie = std::lower_bound(eps.begin(), eps.end(), r.epsilon) - eps.begin();
    const auto ik = std::lower_bound(ks.begin(), ks.end(), r.k) - ks.begin();
    const double t = omax > 0 ? static_cast<double>(r.oscillations) / omax : 0.0;
    const int shade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    const double x = 460.0 + cw * static_cast<double>(ie), y = 40.0 + ch * static_cast<double>(ik);
    s << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(cw) << "\" height=\""
      << fixed(ch) << "\" fill=\"rgb(255," << shade << ',' << shade << ")\" stroke=\"gray\"/>\n"
      << "<text x=\"" << fixed(x + cw / 2) << "\" y=\"" << fixed(y + ch / 2) << "\" text-anchor=\"middle\">"
      << r.oscillations << "</text>\n";
  }
  for (std::size_t i = 0; i < ks.size(); ++i)
    s << "<text x=\"456\" y=\"" << fixed(40.0 + ch * (i + 0.5)) << "\" text-anchor=\"end\">k=" << num(ks[i])
      << "</text>\n";
  for (std::size_t i = 0; i < eps.size(); ++i)
    s << "<text x=\"" << fixed(460.0 + cw * (i + 0.5)) << "\" y=\"334\" text-anchor=\"middle\">" << num(eps[i])
      << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void emit_report(const std::vector<SweepRecord>& records, ReportFormat format, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  std::string body;
  switch (format) {
  case ReportFormat::csv: body = records_to_csv(records); break;
  case ReportFormat::json: body = records_to_json(records); break;
  case ReportFormat::svg: body = records_to_svg(records); break;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot write '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("emit_report: write failed for '" + path + "'");
}

} // namespace cmphase
