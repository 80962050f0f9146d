#include "fspec/io.hpp"

#include <fstream>

namespace fspec::io {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("field \"") + key + "\": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::parse, "complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Eigen::Index positive_dim(const Json& j, const char* key) {
  const auto value = get<long long>(j, key);
  if (value <= 0) throw Error(ErrorKind::parse, std::string("\"") + key + "\" must be positive");
  return static_cast<Eigen::Index>(value);
}

}  // namespace

Json to_json(const Operator& op) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < op.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.cols(); ++c) entries.push_back(complex_json(op(r, c)));
  }
  return {{"rows", op.rows()}, {"cols", op.cols()}, {"entries", std::move(entries)}};
}

Operator operator_from_json(const Json& j) {
  const auto rows = positive_dim(j, "rows");
  const auto cols = positive_dim(j, "cols");
  const auto& entries = field(j, "entries");
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw Error(ErrorKind::parse, "operator needs rows*cols entries");
  }
  Operator op(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) op(r, c) = complex_from_json(entries[static_cast<std::size_t>(r * cols + c)]);
  }
  if (!op.allFinite()) throw Error(ErrorKind::parse, "operator has non-finite entries");
  return op;
}

Json to_json(const AtomicTracePovm& nu) {
  Json atoms = Json::array();
  for (const auto& a : nu.atoms()) atoms.push_back({{"freq", a.freq}, {"weight", to_json(a.weight)}});
  return {{"dim", nu.dim()}, {"atoms", std::move(atoms)}};
}

AtomicTracePovm povm_from_json(const Json& j) {
  const auto dim = positive_dim(j, "dim");
  const auto& atoms_json = field(j, "atoms");
  if (!atoms_json.is_array()) throw Error(ErrorKind::parse, "\"atoms\" must be an array");
  std::vector<PovmAtom> atoms;
  for (const auto& a : atoms_json) {
    const double freq = get<double>(a, "freq");
    if (!atoms.empty() && !(freq > atoms.back().freq)) {
      throw Error(ErrorKind::parse, "atom frequencies must be strictly increasing");
    }
    atoms.push_back({freq, operator_from_json(field(a, "weight"))});
  }
  return {dim, std::move(atoms)};
}

Json to_json(const AutocovarianceSequence& gamma) {
  Json values = Json::array();
  for (const auto& v : gamma.values()) values.push_back(to_json(v));
  return {{"dim", gamma.dim()}, {"max_lag", gamma.max_lag()}, {"values", std::move(values)}};
}

AutocovarianceSequence autocov_from_json(const Json& j) {
  const auto dim = positive_dim(j, "dim");
  const auto max_lag = get<int>(j, "max_lag");
  const auto& values_json = field(j, "values");
  if (!values_json.is_array() || static_cast<int>(values_json.size()) != max_lag + 1) {
    throw Error(ErrorKind::parse, "autocovariance needs max_lag + 1 values");
  }
  std::vector<Operator> values;
  for (const auto& v : values_json) values.push_back(operator_from_json(v));
  return {dim, std::move(values)};
}

Json to_json(const TransferFunction& phi) {
  Json ops = Json::array();
  Json domains = Json::array();
  for (std::size_t j = 0; j < phi.size(); ++j) {
    ops.push_back(to_json(phi.op(j)));
    domains.push_back(phi.is_partial(j) ? to_json(phi.domain(j)) : Json(nullptr));
  }
  Json out{{"in_dim", phi.in_dim()}, {"out_dim", phi.out_dim()}, {"freqs", phi.freqs()}, {"ops", std::move(ops)}};
  if (!phi.is_total()) out["domains"] = std::move(domains);
  return out;
}

TransferFunction transfer_from_json(const Json& j) {
  const auto in_dim = positive_dim(j, "in_dim");
  const auto out_dim = positive_dim(j, "out_dim");
  auto freqs = get<std::vector<double>>(j, "freqs");
  const auto& ops_json = field(j, "ops");
  if (!ops_json.is_array()) throw Error(ErrorKind::parse, "\"ops\" must be an array");
  std::vector<Operator> ops;
  for (const auto& o : ops_json) {
    ops.push_back(operator_from_json(o));
    if (ops.back().rows() != out_dim || ops.back().cols() != in_dim) {
      throw Error(ErrorKind::parse, "transfer operator shape differs from in_dim/out_dim");
    }
  }
  std::vector<std::optional<Operator>> domains;
  if (j.contains("domains") && !j.at("domains").is_null()) {
    for (const auto& d : j.at("domains")) {
      domains.push_back(d.is_null() ? std::nullopt : std::optional<Operator>(operator_from_json(d)));
    }
  }
  return {std::move(freqs), std::move(ops), std::move(domains)};
}

Json to_json(const FirFilter& fir) {
  Json taps = Json::array();
  for (const auto& [s, op] : fir.taps) taps.push_back({{"s", s}, {"op", to_json(op)}});
  return {{"taps", std::move(taps)}};
}

FirFilter fir_from_json(const Json& j) {
  FirFilter fir;
  const auto& taps = field(j, "taps");
  if (!taps.is_array()) throw Error(ErrorKind::parse, "\"taps\" must be an array");
  for (const auto& t : taps) {
    const int s = get<int>(t, "s");
    if (!fir.taps.emplace(s, operator_from_json(field(t, "op"))).second) {
      throw Error(ErrorKind::parse, "duplicate tap s = " + std::to_string(s));
    }
  }
  return fir;
}

Json to_json(const ProcessSample& x) {
  Json values = Json::array();
  for (const auto& block : x.values) {
    Json per_time = Json::array();
    for (Eigen::Index r = 0; r < block.cols(); ++r) per_time.push_back(vector_json(block.col(r)));
    values.push_back(std::move(per_time));
  }
  return {{"dim", x.dim}, {"period", x.period}, {"realizations", x.realizations}, {"values", std::move(values)}};
}

ProcessSample series_from_json(const Json& j) {
  ProcessSample x;
  x.dim = positive_dim(j, "dim");
  x.period = static_cast<int>(positive_dim(j, "period"));
  x.realizations = positive_dim(j, "realizations");
  const auto& values = field(j, "values");
  if (!values.is_array() || static_cast<int>(values.size()) != x.period) {
    throw Error(ErrorKind::parse, "series needs one entry per time");
  }
  for (const auto& per_time : values) {
    if (!per_time.is_array() || static_cast<Eigen::Index>(per_time.size()) != x.realizations) {
      throw Error(ErrorKind::parse, "series needs one vector per realization at each time");
    }
    Operator block(x.dim, x.realizations);
    for (Eigen::Index r = 0; r < x.realizations; ++r) {
      const auto& v = per_time[static_cast<std::size_t>(r)];
      if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != x.dim) {
        throw Error(ErrorKind::parse, "series vector has the wrong dimension");
      }
      for (Eigen::Index i = 0; i < x.dim; ++i) block(i, r) = complex_from_json(v[static_cast<std::size_t>(i)]);
    }
    x.values.push_back(std::move(block));
  }
  return x;
}

Json ckl_report(const CklSystem& sys) {
  Json atoms = Json::array();
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const auto& a = sys.atom(j);
    const RealVector sigmas = sys.density_sigmas(j);
    Json vectors = Json::array();
    for (Eigen::Index n = 0; n < a.rank; ++n) vectors.push_back(vector_json(a.vectors.col(n)));
    atoms.push_back({{"freq", a.freq},
                     {"mass", a.mass},
                     {"rank", a.rank},
                     {"sigmas", std::vector<double>(sigmas.data(), sigmas.data() + a.rank)},
                     {"vectors", std::move(vectors)}});
  }
  return {{"dim", sys.dim()}, {"atoms", std::move(atoms)}, {"completeness_residual", ckl_completeness_residual(sys)}};
}

Json hfpca_report(const CklSystem& sys, const RankFunction& q) {
  std::vector<int> ranks;
  for (std::size_t j = 0; j < q.size(); ++j) ranks.push_back(static_cast<int>(q.at(j, sys.dim())));
  const auto theta = hfpca_projector(sys, q);
  return {{"q", ranks},
          {"optimal_error", hfpca_optimal_error(sys, q)},
          {"achieved_error", hfpca_error(sys.source(), theta)},
          {"tie_warnings", hfpca_tie_warnings(sys, q)}};
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace fspec::io
