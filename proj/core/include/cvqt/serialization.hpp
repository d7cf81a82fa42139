#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cvqt/analysis.hpp"
#include "cvqt/channels.hpp"
#include "cvqt/distributions.hpp"
#include "cvqt/fock.hpp"

namespace cvqt {

using nlohmann::json;

/// Parses "a+bi", "a-bi", "a", "bi", "i", "-i" (whitespace-free). Throws DomainError.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

/// %.17g: shortest text that round-trips every double, independent of locale state.
std::string format_double(double v);

/// "mend:21", "tmsv:0.8", "custom:d0,d1,..." (entries may be complex).
ResourceKind parse_resource(std::string_view text);
/// "coherent:<z>", "cat:<z>", "qubit:<a>,<b>", "custom:<c0>,<c1>,...".
InputStateSpec parse_input(std::string_view text);

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const FockVector& v);
FockVector fock_vector_from_json(const json& j);

json to_json(const ResourceKind& kind);
json to_json(const ResourceSpectrum& r);
ResourceKind resource_from_json(const json& j);

json to_json(const InputStateSpec& spec);
InputStateSpec input_from_json(const json& j);

json to_json(const GridSpec& g);
json to_json(const Domain& d);

/// Metadata only (no per-point arrays).
json grid_metadata(const DistributionGrid& g);
/// Metadata plus re/im axes and P, F arrays.
json to_json(const DistributionGrid& g);
void write_grid_csv(std::ostream& os, const DistributionGrid& g);

json to_json(const AverageResult& r);
json to_json(const AcceptanceResult& r);
json to_json(const MaxFidelityResult& r);
json to_json(const SweepResult& r);
void write_sweep_csv(std::ostream& os, const SweepResult& r);

} // namespace cvqt
