#include "specoarse/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "specoarse/error.hpp"

namespace specoarse {
namespace {

const char* target_name(ShiftTarget t) {
  switch (t) {
    case ShiftTarget::Smallest: return "smallest";
    case ShiftTarget::Largest: return "largest";
    case ShiftTarget::Nearest: return "nearest";
  }
  return "smallest";
}

ShiftTarget target_from_name(const std::string& s) {
  if (s == "smallest") return ShiftTarget::Smallest;
  if (s == "largest") return ShiftTarget::Largest;
  if (s == "nearest") return ShiftTarget::Nearest;
  throw Error(ErrorCode::ParseError, "unknown shift target '" + s + "'");
}

const Provenance& best_record(const std::vector<Provenance>& records) {
  return *std::min_element(records.begin(), records.end(), [](const Provenance& x, const Provenance& y) {
    if (x.residual != y.residual) return x.residual < y.residual;
    if (x.sample != y.sample) return x.sample < y.sample;
    return x.shift < y.shift;
  });
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

/// Maps [lo, hi] onto [left, right] pixels.
struct Axis {
  double lo, hi, left, right;
  double operator()(double v) const {
    if (hi <= lo) return 0.5 * (left + right);
    return left + (v - lo) / (hi - lo) * (right - left);
  }
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json to_json(const SampleConfig& cfg) {
  Json j;
  j["samples"] = cfg.samples;
  j["per_sample"] = cfg.per_sample;
  j["n_aggregates"] = cfg.n_aggregates;
  j["partitioner"] = to_string(cfg.partitioner);
  j["normalized"] = cfg.normalized;
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol;
  j["max_iters"] = cfg.max_iters;
  j["target"] = target_name(cfg.target);
  j["target_point"] = cfg.target_point;
  return j;
}

SampleConfig sample_config_from_json(const Json& j) {
  SampleConfig cfg;
  try {
    cfg.samples = j.at("samples").get<std::size_t>();
    cfg.per_sample = j.at("per_sample").get<std::size_t>();
    cfg.n_aggregates = j.at("n_aggregates").get<std::size_t>();
    cfg.partitioner = parse_partitioner(j.at("partitioner").get<std::string>());
    cfg.normalized = j.at("normalized").get<bool>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.tol = j.at("tol").get<double>();
    cfg.max_iters = j.at("max_iters").get<std::size_t>();
    cfg.target = target_from_name(j.value("target", std::string("smallest")));
    cfg.target_point = j.value("target_point", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sample config: ") + e.what());
  }
  return cfg;
}

Json to_json(const SpectrumEstimate& est) {
  Json j;
  j["kind"] = est.kind == SpectrumKind::Eigen ? "eigen" : "singular";
  j["values"] = est.values;
  j["rejected"] = est.rejected;
  Json entries = Json::array();
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    Json e;
    e["value"] = est.values[i];
    Json prov = Json::array();
    for (const auto& p : est.provenance[i]) {
      prov.push_back({{"sample", p.sample}, {"shift", p.shift}, {"residual", p.residual}, {"iterations", p.iterations}});
    }
    e["provenance"] = std::move(prov);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  Json samples = Json::array();
  for (const auto& tr : est.samples) {
    Json s;
    s["sample"] = tr.sample;
    s["seed"] = tr.seed;
    s["n_aggregates"] = tr.n_aggregates;
    if (est.kind == SpectrumKind::Singular) s["n_col_aggregates"] = tr.n_col_aggregates;
    s["coarse_values"] = tr.coarse_values;
    Json refs = Json::array();
    for (const auto& r : tr.refinements) {
      refs.push_back({{"shift", r.shift},
                      {"value", r.value},
                      {"residual", r.residual},
                      {"iterations", r.iterations},
                      {"converged", r.converged}});
    }
    s["refinements"] = std::move(refs);
    samples.push_back(std::move(s));
  }
  j["samples"] = std::move(samples);
  return j;
}

void write_csv(std::ostream& out, const SpectrumEstimate& est) {
  out << "value,residual,iterations,sample,shift\n";
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    const Provenance& p = best_record(est.provenance[i]);
    out << format_double(est.values[i]) << ',' << format_double(p.residual) << ',' << p.iterations << ','
        << p.sample << ',' << format_double(p.shift) << '\n';
  }
}

Json to_json(const InterlaceReport& rep) {
  Json j;
  j["kind"] = rep.kind == SpectrumKind::Eigen ? "eigen" : "singular";
  j["tolerance"] = rep.tolerance;
  j["violations"] = rep.violations;
  j["min_slack"] = rep.lower_slack.empty() && rep.upper_slack.empty() ? 0.0 : rep.min_slack();
  j["coarse"] = rep.coarse;
  j["lower_slack"] = rep.lower_slack;
  j["upper_slack"] = rep.upper_slack;
  std::vector<bool> vacuous = rep.lower_vacuous;
  j["lower_vacuous"] = vacuous;
  return j;
}

std::string gershgorin_svg(std::span<const GershgorinDisc> discs, std::span<const double> eigenvalues,
                           const std::string& title) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double rmax = 0.0;
  for (const auto& d : discs) {
    lo = std::min(lo, d.center - d.radius);
    hi = std::max(hi, d.center + d.radius);
    rmax = std::max(rmax, d.radius);
  }
  for (double e : eigenvalues) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (!std::isfinite(lo)) lo = -1.0, hi = 1.0;
  const double pad = 0.05 * std::max(hi - lo, 1e-12) + 1e-12;
  lo -= pad;
  hi += pad;
  const double half = std::max(rmax, 1e-12) + pad;

  const double width = 800.0;
  const double plot_w = width - 80.0;
  const double scale = plot_w / (hi - lo);
  const double plot_h = std::clamp(2.0 * half * scale, 80.0, 600.0);
  const double height = plot_h + 80.0;
  const Axis x{lo, hi, 40.0, 40.0 + plot_w};
  const double y0 = 50.0 + plot_h / 2.0;
  const double yscale = plot_h / (2.0 * half);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"40\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title) << "</text>\n"
      << "<line x1=\"40\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(40.0 + plot_w) << "\" y2=\"" << fixed(y0)
      << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  if (lo < 0.0 && hi > 0.0) {
    svg << "<line x1=\"" << fixed(x(0.0)) << "\" y1=\"50\" x2=\"" << fixed(x(0.0)) << "\" y2=\""
        << fixed(50.0 + plot_h) << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  }
  svg << "<g fill=\"#3366cc\" fill-opacity=\"0.08\" stroke=\"#3366cc\" stroke-width=\"0.8\">\n";
  for (const auto& d : discs) {
    svg << "<ellipse cx=\"" << fixed(x(d.center)) << "\" cy=\"" << fixed(y0) << "\" rx=\""
        << fixed(d.radius * scale, 3) << "\" ry=\"" << fixed(d.radius * yscale, 3) << "\"/>\n";
  }
  svg << "</g>\n<g fill=\"#cc2222\">\n";
  for (double e : eigenvalues) svg << "<circle cx=\"" << fixed(x(e)) << "\" cy=\"" << fixed(y0) << "\" r=\"2\"/>\n";
  svg << "</g>\n"
      << "<text x=\"40\" y=\"" << fixed(height - 12) << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << escape_xml(format_double(lo)) << "</text>\n"
      << "<text x=\"" << fixed(width - 40) << "\" y=\"" << fixed(height - 12)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(format_double(hi))
      << "</text>\n</svg>\n";
  return svg.str();
}

std::string spectrum_svg(const SpectrumEstimate& est, std::span<const double> fine_spectrum, const std::string& title) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto extend = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (double v : fine_spectrum) extend(v);
  for (double v : est.values) extend(v);
  for (const auto& tr : est.samples)
    for (double v : tr.coarse_values) extend(v);
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  const double pad = 0.03 * std::max(hi - lo, 1e-12) + 1e-12;

  const double width = 900.0;
  const double row_h = 40.0;
  const std::size_t rows = est.samples.size() + 1;
  const double height = 70.0 + row_h * static_cast<double>(rows) + 30.0;
  const Axis x{lo - pad, hi + pad, 110.0, width - 20.0};
  const double fine_y = 60.0 + row_h * static_cast<double>(rows - 1) + row_h / 2.0;
  auto sample_y = [&](std::size_t s) { return fine_y - row_h * static_cast<double>(s + 1); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\">\n"
      << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"5\" "
         "markerHeight=\"5\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#2a9d2a\"/></marker></defs>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"10\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title) << "</text>\n";

  auto row = [&](double y, const std::string& label, std::span<const double> values, const char* colour) {
    svg << "<text x=\"10\" y=\"" << fixed(y + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape_xml(label) << "</text>\n"
        << "<line x1=\"" << fixed(x.left) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(x.right) << "\" y2=\""
        << fixed(y) << "\" stroke=\"#ccc\"/>\n<g stroke=\"" << colour << "\" stroke-width=\"1.2\">\n";
    for (double v : values) {
      svg << "<line x1=\"" << fixed(x(v)) << "\" y1=\"" << fixed(y - 8) << "\" x2=\"" << fixed(x(v)) << "\" y2=\""
          << fixed(y + 8) << "\"/>\n";
    }
    svg << "</g>\n";
  };

  row(fine_y, fine_spectrum.empty() ? "estimate" : "fine", fine_spectrum.empty() ? std::span<const double>(est.values) : fine_spectrum,
      "#222");
  for (std::size_t s = 0; s < est.samples.size(); ++s) {
    const auto& tr = est.samples[s];
    row(sample_y(s), "sample " + std::to_string(tr.sample), tr.coarse_values, "#3366cc");
  }
  svg << "<g stroke=\"#2a9d2a\" stroke-width=\"0.8\" fill=\"none\" marker-end=\"url(#arrow)\">\n";
  for (std::size_t s = 0; s < est.samples.size(); ++s) {
    for (const auto& r : est.samples[s].refinements) {
      if (!r.converged) continue;
      svg << "<line x1=\"" << fixed(x(r.shift)) << "\" y1=\"" << fixed(sample_y(s) + 8) << "\" x2=\""
          << fixed(x(r.value)) << "\" y2=\"" << fixed(fine_y - 9) << "\"/>\n";
    }
  }
  svg << "</g>\n<g fill=\"#cc2222\">\n";
  for (double v : est.values) svg << "<circle cx=\"" << fixed(x(v)) << "\" cy=\"" << fixed(fine_y) << "\" r=\"2.5\"/>\n";
  svg << "</g>\n"
      << "<text x=\"" << fixed(x.left) << "\" y=\"" << fixed(height - 10) << "\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << escape_xml(format_double(lo)) << "</text>\n"
      << "<text x=\"" << fixed(x.right) << "\" y=\"" << fixed(height - 10)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(format_double(hi))
      << "</text>\n</svg>\n";
  return svg.str();
}

}  // namespace specoarse
