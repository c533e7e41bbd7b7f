#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bhd/time_series.hpp"

namespace bhd {

enum class TraceUnits { V2_per_Hz, A2_per_Hz, shot_relative, shot_relative_db };
std::string_view to_string(TraceUnits u);
TraceUnits parse_trace_units(std::string_view s);

/// Frequency-binned PSD estimate. RBW and averages are stored per bin because
/// a stitched trace mixes spans.
struct SpectrumTrace {
  std::vector<double> frequency_hz;
  std::vector<double> value;
  std::vector<double> rbw_hz;
  std::vector<std::size_t> averages;
  TraceUnits units = TraceUnits::V2_per_Hz;
  bool raw = false;               // straight from the estimator: DC and first bin still present
  std::vector<double> seams_hz;   // span boundaries of a stitched trace

  std::size_t size() const noexcept { return frequency_hz.size(); }
  bool empty() const noexcept { return frequency_hz.empty(); }
  double rbw() const { return rbw_hz.empty() ? 0.0 : rbw_hz.front(); }
  double max_frequency() const { return frequency_hz.empty() ? 0.0 : frequency_hz.back(); }
  void push_back(double f, double v, double rbw, std::size_t avg);
  void validate() const;

  /// Mean of `value` over bins with lo <= f <= hi.
  double band_mean(double lo_hz, double hi_hz) const;
  /// Sum of value * rbw over bins with lo <= f <= hi (linear units only).
  double band_power(double lo_hz, double hi_hz) const;
};

struct SpanSpec {
  double span_hz = 0.0;
  std::size_t lines = 0;
  std::size_t averages = 0;

  double rbw_hz() const { return span_hz / static_cast<double>(lines); }
};

/// Analyzer settings, one entry per span, sorted by increasing span edge.
struct SpanPlan {
  std::vector<SpanSpec> spans;

  /// "span:lines:averages" entries separated by commas, e.g. "800:800:200, 6400:800:200".
  static SpanPlan parse(std::string_view text);
  void validate() const;
  std::string to_string() const;
};

/// Averaged power spectrum with a periodic Hann window and 50 % overlap.
/// Segment length is fs / rbw and must be an integer number of samples.
/// Reports bins 0..lines (DC up to the span edge) in units^2 / Hz.
SpectrumTrace welch_psd(const TimeSeries& series, double span_hz, std::size_t lines, std::size_t averages,
                        unsigned workers = 0);

/// Samples needed by welch_psd at the given settings.
std::size_t welch_required_samples(double sample_rate_hz, double span_hz, std::size_t lines, std::size_t averages);

/// Merge traces sorted by span; each frequency comes from the lowest span that
/// covers it. The DC bin and first bin of raw traces are dropped.
SpectrumTrace stitch_spans(const std::vector<SpectrumTrace>& traces);

/// 10 log10(measured / shot) per bin. With smooth_shot the broadband mean of
/// the shot trace is used as the divisor.
SpectrumTrace normalize_to_shot(const SpectrumTrace& measured, const SpectrumTrace& shot, bool smooth_shot = false);
SpectrumTrace denormalize(const SpectrumTrace& normalized_db, const SpectrumTrace& shot, bool smooth_shot = false);

/// Linear shot-relative variances: (Vm - Vd) / (1 - Vd).
double dark_correct_linear(double measured, double dark);
/// Shot-relative dB in and out.
double dark_correct(double measured_db, double dark_db);
SpectrumTrace dark_correct(const SpectrumTrace& measured_db, const SpectrumTrace& dark_db);
/// Dark level (shot-relative dB) that maps measured_db onto corrected_db.
double solve_dark_level(double measured_db, double corrected_db);

void write_csv(const SpectrumTrace& trace, std::ostream& os);
void write_csv(const SpectrumTrace& trace, const std::string& path);
SpectrumTrace read_csv(std::istream& is);
SpectrumTrace read_csv(const std::string& path);

}  // namespace bhd
