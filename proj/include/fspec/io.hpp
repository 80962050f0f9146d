#pragma once

// JSON encodings of every file format read or written by the command line.
// Complex numbers are [re, im] pairs; operators are row-major.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fspec/cagos.hpp"
#include "fspec/decomposition.hpp"
#include "fspec/filtering.hpp"
#include "fspec/povm.hpp"
#include "fspec/process.hpp"
#include "fspec/spectral.hpp"

namespace fspec::io {

using Json = nlohmann::json;

[[nodiscard]] Json to_json(const Operator& op);
[[nodiscard]] Json to_json(const AtomicTracePovm& nu);
[[nodiscard]] Json to_json(const AutocovarianceSequence& gamma);
[[nodiscard]] Json to_json(const TransferFunction& phi);
[[nodiscard]] Json to_json(const FirFilter& fir);
[[nodiscard]] Json to_json(const ProcessSample& x);

[[nodiscard]] Operator operator_from_json(const Json& j);
[[nodiscard]] AtomicTracePovm povm_from_json(const Json& j);
[[nodiscard]] AutocovarianceSequence autocov_from_json(const Json& j);
[[nodiscard]] TransferFunction transfer_from_json(const Json& j);
[[nodiscard]] FirFilter fir_from_json(const Json& j);
[[nodiscard]] ProcessSample series_from_json(const Json& j);

/// Per-atom {freq, mass, rank, sigmas, vectors}; sigmas are density eigenvalues.
[[nodiscard]] Json ckl_report(const CklSystem& sys);
[[nodiscard]] Json hfpca_report(const CklSystem& sys, const RankFunction& q);

[[nodiscard]] Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Json& doc);

}  // namespace fspec::io
