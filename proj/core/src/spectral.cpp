#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "bhd/spectral.hpp"

namespace bhd {

std::string_view to_string(TraceUnits u) {
  switch (u) {
    case TraceUnits::V2_per_Hz: return "V2_per_Hz";
    case TraceUnits::A2_per_Hz: return "A2_per_Hz";
    case TraceUnits::shot_relative: return "shot_relative";
    case TraceUnits::shot_relative_db: return "shot_relative_db";
  }
  return "?";
}

TraceUnits parse_trace_units(std::string_view s) {
  for (auto u : {TraceUnits::V2_per_Hz, TraceUnits::A2_per_Hz, TraceUnits::shot_relative,
                 TraceUnits::shot_relative_db}) {
    if (to_string(u) == s) return u;
  }
  throw DomainError("unknown trace units '" + std::string(s) + "'");
}

void SpectrumTrace::push_back(double f, double v, double rbw, std::size_t avg) {
  frequency_hz.push_back(f);
  value.push_back(v);
  rbw_hz.push_back(rbw);
  averages.push_back(avg);
}

void SpectrumTrace::validate() const {
  const std::size_t n = frequency_hz.size();
  if (value.size() != n || rbw_hz.size() != n || averages.size() != n) {
    throw DomainError("SpectrumTrace: column lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(frequency_hz[i] > frequency_hz[i - 1])) {
      throw DomainError("SpectrumTrace: frequencies must be strictly increasing");
    }
    if (!(rbw_hz[i] > 0.0)) throw DomainError("SpectrumTrace: rbw must be > 0");
    if (!std::isfinite(value[i])) throw DomainError("SpectrumTrace: non-finite value");
  }
}

double SpectrumTrace::band_mean(double lo_hz, double hi_hz) const {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (frequency_hz[i] >= lo_hz && frequency_hz[i] <= hi_hz) {
      acc += value[i];
      ++n;
    }
  }
  if (n == 0) throw DomainError("band_mean: no bins in band");
  return acc / static_cast<double>(n);
}

double SpectrumTrace::band_power(double lo_hz, double hi_hz) const {
  if (units == TraceUnits::shot_relative_db) throw DomainError("band_power: trace is in dB");
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (frequency_hz[i] >= lo_hz && frequency_hz[i] <= hi_hz) acc += value[i] * rbw_hz[i];
  }
  return acc;
}

SpanPlan SpanPlan::parse(std::string_view text) {
  SpanPlan plan;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
               item.end());
    if (item.empty()) continue;
    SpanSpec s;
    double lines = 0.0;
    double avg = 0.0;
    char c1 = 0;
    char c2 = 0;
    std::istringstream is(item);
    if (!(is >> s.span_hz >> c1 >> lines >> c2 >> avg) || c1 != ':' || c2 != ':' || !is.eof()) {
      throw DomainError("span plan entry '" + item + "' is not span:lines:averages");
    }
    if (lines != std::floor(lines) || avg != std::floor(avg) || lines < 0 || avg < 0) {
      throw DomainError("span plan entry '" + item + "': lines and averages must be integers");
    }
    s.lines = static_cast<std::size_t>(lines);
    s.averages = static_cast<std::size_t>(avg);
    plan.spans.push_back(s);
  }
  plan.validate();
  return plan;
}

void SpanPlan::validate() const {
  if (spans.empty()) throw DomainError("span plan is empty");
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (!(spans[i].span_hz > 0.0)) throw DomainError("span plan: span must be > 0");
    if (spans[i].lines < 2) throw DomainError("span plan: lines must be >= 2");
    if (spans[i].averages < 1) throw DomainError("span plan: averages must be >= 1");
    if (i > 0 && !(spans[i].span_hz > spans[i - 1].span_hz)) {
      throw DomainError("span plan: spans must be strictly increasing");
    }
  }
}

std::string SpanPlan::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (i) os << ", ";
    os << spans[i].span_hz << ':' << spans[i].lines << ':' << spans[i].averages;
  }
  return os.str();
}

SpectrumTrace stitch_spans(const std::vector<SpectrumTrace>& traces) {
  if (traces.empty()) throw DomainError("stitch_spans: no traces");
  for (std::size_t i = 1; i < traces.size(); ++i) {
    if (traces[i].units != traces[0].units) throw BinMismatchError("stitch_spans: traces have different units");
    if (traces[i].max_frequency() < traces[i - 1].max_frequency()) {
      throw DomainError("stitch_spans: traces must be sorted by span");
    }
  }

  SpectrumTrace out;
  out.units = traces[0].units;
  double edge = -1.0;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const auto& tr = traces[t];
    tr.validate();
    const std::size_t first = tr.raw ? 2 : 0;
    if (tr.size() <= first) throw DomainError("stitch_spans: trace has no usable bins");
    if (t > 0) {
      const double start = tr.frequency_hz[first];
      // The first kept bin may sit one RBW above the previous edge.
      if (start > edge + tr.rbw_hz[first] * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "stitch_spans: no coverage between " << edge << " Hz and " << start << " Hz";
        throw StitchGapError(os.str(), edge, start);
      }
      if (tr.max_frequency() > edge) out.seams_hz.push_back(edge);
    }
    for (std::size_t i = first; i < tr.size(); ++i) {
      if (tr.frequency_hz[i] > edge) out.push_back(tr.frequency_hz[i], tr.value[i], tr.rbw_hz[i], tr.averages[i]);
    }
    // Already-stitched input keeps its own seams.
    for (double s : tr.seams_hz) {
      if (s > edge) out.seams_hz.push_back(s);
    }
    edge = std::max(edge, tr.max_frequency());
  }
  std::sort(out.seams_hz.begin(), out.seams_hz.end());
  out.seams_hz.erase(std::unique(out.seams_hz.begin(), out.seams_hz.end()), out.seams_hz.end());
  return out;
}

namespace {

void require_same_bins(const SpectrumTrace& a, const SpectrumTrace& b) {
  if (a.size() != b.size()) {
    throw BinMismatchError("traces have " + std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                           " bins");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double fa = a.frequency_hz[i];
    const double fb = b.frequency_hz[i];
    if (std::abs(fa - fb) > 1e-9 * std::max({1.0, std::abs(fa), std::abs(fb)})) {
      throw BinMismatchError("bin " + std::to_string(i) + " differs: " + std::to_string(fa) + " Hz vs " +
                             std::to_string(fb) + " Hz");
    }
  }
}

double mean_value(const SpectrumTrace& t) {
  double acc = 0.0;
  for (double v : t.value) acc += v;
  return acc / static_cast<double>(t.size());
}

}  // namespace

SpectrumTrace normalize_to_shot(const SpectrumTrace& measured, const SpectrumTrace& shot, bool smooth_shot) {
  require_same_bins(measured, shot);
  if (measured.units == TraceUnits::shot_relative_db || shot.units == TraceUnits::shot_relative_db) {
    throw DomainError("normalize_to_shot: inputs must be linear PSDs");
  }
  SpectrumTrace out = measured;
  out.units = TraceUnits::shot_relative_db;
  out.raw = measured.raw;
  const double mean_shot = smooth_shot ? mean_value(shot) : 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double s = smooth_shot ? mean_shot : shot.value[i];
    if (!(s > 0.0)) throw DomainError("normalize_to_shot: shot bin is not positive");
    if (!(measured.value[i] > 0.0)) throw DomainError("normalize_to_shot: measured bin is not positive");
    out.value[i] = to_db(measured.value[i] / s);
  }
  return out;
}

SpectrumTrace denormalize(const SpectrumTrace& normalized_db, const SpectrumTrace& shot, bool smooth_shot) {
  require_same_bins(normalized_db, shot);
  if (normalized_db.units != TraceUnits::shot_relative_db) throw DomainError("denormalize: input must be in dB");
  SpectrumTrace out = normalized_db;
  out.units = shot.units;
  const double mean_shot = smooth_shot ? mean_value(shot) : 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.value[i] = from_db(normalized_db.value[i]) * (smooth_shot ? mean_shot : shot.value[i]);
  }
  return out;
}

double dark_correct_linear(double measured, double dark) {
  if (!(dark >= 0.0)) throw DomainError("dark_correct: dark level must be >= 0");
  if (!(dark < measured)) throw DomainError("dark_correct: dark level must lie below the measured level");
  if (!(dark < 1.0)) throw DomainError("dark_correct: dark level must lie below shot noise");
  return (measured - dark) / (1.0 - dark);
}

double dark_correct(double measured_db, double dark_db) {
  const double dark = std::isinf(dark_db) && dark_db < 0 ? 0.0 : from_db(dark_db);
  return to_db(dark_correct_linear(from_db(measured_db), dark));
}

SpectrumTrace dark_correct(const SpectrumTrace& measured_db, const SpectrumTrace& dark_db) {
  require_same_bins(measured_db, dark_db);
  if (measured_db.units != TraceUnits::shot_relative_db || dark_db.units != TraceUnits::shot_relative_db) {
    throw DomainError("dark_correct: traces must be shot-relative dB");
  }
  SpectrumTrace out = measured_db;
  for (std::size_t i = 0; i < out.size(); ++i) out.value[i] = dark_correct(measured_db.value[i], dark_db.value[i]);
  return out;
}

double solve_dark_level(double measured_db, double corrected_db) {
  const double vm = from_db(measured_db);
  const double vc = from_db(corrected_db);
  if (vc == 1.0) throw DomainError("solve_dark_level: corrected level equals shot noise");
  const double vd = (vm - vc) / (1.0 - vc);
  if (!(vd > 0.0) || !(vd < vm)) throw DomainError("solve_dark_level: no dark level maps the pair");
  return to_db(vd);
}

void write_csv(const SpectrumTrace& trace, std::ostream& os) {
  os << "frequency_hz,value,units,rbw_hz,averages\n";
  const std::string units(to_string(trace.units));
  char buf[160];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%zu\n", trace.frequency_hz[i], trace.value[i],
                  units.c_str(), trace.rbw_hz[i], trace.averages[i]);
    os << buf;
  }
}

void write_csv(const SpectrumTrace& trace, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(trace, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

SpectrumTrace read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "frequency_hz,value,units,rbw_hz,averages") {
    throw DomainError("read_csv: missing or unexpected header");
  }
  SpectrumTrace t;
  bool have_units = false;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f, v, u, r, a;
    if (!std::getline(ss, f, ',') || !std::getline(ss, v, ',') || !std::getline(ss, u, ',') ||
        !std::getline(ss, r, ',') || !std::getline(ss, a)) {
      throw DomainError("read_csv: malformed row at line " + std::to_string(lineno));
    }
    const TraceUnits units = parse_trace_units(u);
    if (have_units && units != t.units) throw DomainError("read_csv: mixed units");
    t.units = units;
    have_units = true;
    auto num = [&](const std::string& s) {
      char* end = nullptr;
      const double x = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') throw DomainError("read_csv: bad number at line " + std::to_string(lineno));
      return x;
    };
    const double avg = num(a);
    t.push_back(num(f), num(v), num(r), static_cast<std::size_t>(avg));
  }
  t.validate();
  return t;
}

SpectrumTrace read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_csv(is);
}

}  // namespace bhd
