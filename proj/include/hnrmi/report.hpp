#pragma once

// Plain-file outputs for the Monte Carlo studies: CSV (header row, '.'
// decimal, UTF-8) and small self-contained SVG charts with no external
// dependencies. Byte-deterministic for a given report.

#include <string>
#include <vector>

#include "hnrmi/experiments.hpp"

namespace hnrmi {

// Columns: x, lower, upper, mean.
void write_band_csv(const std::string& path, const BandReport& report);

// Columns: model, functional, sigma, zeta, length, lo, hi, se. For an N-IG
// process the sigma column carries beta.
void write_interval_csv(const std::string& path,
                        const std::vector<IntervalCell>& cells);

// Columns: j, exact_p, mc_p (mc_p empty when no MC pass was run).
void write_n0_csv(const std::string& path, const N0Report& report);

// Columns: sample_id, sigma, zeta, model, expected_proportion, se.
void write_posterior_csv(const std::string& path,
                         const std::vector<PosteriorCell>& cells);

// Columns: sigma, zeta, var_inner, var_outer, gap, se_gap, expected_gap.
void write_variance_csv(const std::string& path,
                        const std::vector<VarianceGapCell>& cells);

// Line chart of the band (lower/upper/mean curves).
void write_band_svg(const std::string& path, const BandReport& report);

// Bar chart of the exact N0 pmf with MC overlay when present.
void write_n0_svg(const std::string& path, const N0Report& report);

}  // namespace hnrmi
