#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "specoarse/pipeline.hpp"
#include "specoarse/sparse_matrix.hpp"
#include "specoarse/verify.hpp"

namespace specoarse {

using Json = nlohmann::ordered_json;

/// Shortest text that reads back as the same double.
std::string format_double(double v);

Json to_json(const SampleConfig& cfg);
SampleConfig sample_config_from_json(const Json& j);

/// Values, provenance and per-sample traces. Contains no timing so that
/// identical inputs give byte-identical output.
Json to_json(const SpectrumEstimate& estimate);

/// Header `value,residual,iterations,sample,shift`; one row per value, using
/// the smallest-residual provenance record.
void write_csv(std::ostream& out, const SpectrumEstimate& estimate);

Json to_json(const InterlaceReport& report);

/// Discs as circles in the complex plane, eigenvalues (if any) as dots on the
/// real axis.
std::string gershgorin_svg(std::span<const GershgorinDisc> discs,
                           std::span<const double> eigenvalues, const std::string& title);

/// Fine spectrum on the bottom row, each sample's coarse spectrum on a row
/// above it, arrows from every shift to the value it converged to.
std::string spectrum_svg(const SpectrumEstimate& estimate, std::span<const double> fine_spectrum,
                         const std::string& title);

}  // namespace specoarse
