#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "outage.hpp"
#include "parallel.hpp"
#include "units.hpp"

namespace slicing {

/// Value on the interference axis meaning "no eMBB interference".
inline constexpr double kNoInterference = -std::numeric_limits<double>::infinity();

/// dBm grid: lo, lo + step, ..., hi.
inline std::vector<double> dbm_axis(double lo, double hi, double step = 1.0) {
  require(step > 0.0 && hi >= lo, "axis needs hi >= lo and a positive step");
  std::vector<double> axis;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) axis.push_back(lo + step * static_cast<double>(i));
  return axis;
}

struct TableAxes {
  std::vector<double> pu_dbm = dbm_axis(-30.0, 30.0);
  std::vector<double> pe_dbm = with_sentinel(dbm_axis(-30.0, 30.0));

  static std::vector<double> with_sentinel(std::vector<double> axis) {
    axis.insert(axis.begin(), kNoInterference);
    return axis;
  }
};

/// Tabulated outage p(P_u, P_e) for uniform per-frequency powers at fixed
/// (Gamma_u, F_u, r_u). Rows follow the interference axis, columns the URLLC power axis.
struct OutageTable {
  static constexpr std::uint32_t kVersion = 1;

  std::vector<double> axis_pu_dbm;
  std::vector<double> axis_pe_dbm;  // may hold kNoInterference
  double gamma_u = 0.0;             // mean URLLC SNR, per mW
  std::size_t F_u = 0;
  double r_u = 0.0;
  std::size_t M_u = 1;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // row-major, axis_pe x axis_pu

  double at(std::size_t pe_row, std::size_t pu_col) const {
    return values[pe_row * axis_pu_dbm.size() + pu_col];
  }

  bool operator==(const OutageTable& o) const {
    auto same_bits = [](const std::vector<double>& a, const std::vector<double>& b) {
      return a.size() == b.size() &&
             (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    };
    return same_bits(axis_pu_dbm, o.axis_pu_dbm) && same_bits(axis_pe_dbm, o.axis_pe_dbm) &&
           std::bit_cast<std::uint64_t>(gamma_u) == std::bit_cast<std::uint64_t>(o.gamma_u) &&
           F_u == o.F_u && std::bit_cast<std::uint64_t>(r_u) == std::bit_cast<std::uint64_t>(o.r_u) &&
           M_u == o.M_u && trials == o.trials && seed == o.seed && same_bits(values, o.values);
  }
};

/// Seed used for every cell of the row at interference level pe_dbm.
inline std::uint64_t table_row_seed(std::uint64_t seed, double pe_dbm) {
  return derive_seed(seed, {stream_tag("table-row"), std::bit_cast<std::uint64_t>(pe_dbm)});
}

namespace detail {

// Outage counts for one interference row. All cells of the row share the
// row's draws; per draw, the smallest non-outage column is found by bisection
// since the accumulated information grows with P_u.
inline std::vector<double> table_row(const std::vector<double>& pu_dbm, double pe_dbm,
                                     double Gamma_u, std::size_t F_u, double r_u,
                                     std::uint64_t trials, std::uint64_t row_seed,
                                     unsigned threads) {
  const std::size_t cols = pu_dbm.size();
  const double target = static_cast<double>(F_u) * r_u;
  const double pe_mw = pe_dbm == kNoInterference ? 0.0 : dbm_to_mw(pe_dbm);
  std::vector<std::vector<double>> pu_vec(cols);
  for (std::size_t j = 0; j < cols; ++j) pu_vec[j].assign(F_u, dbm_to_mw(pu_dbm[j]));
  const std::vector<double> pe_vec(F_u, pe_mw);

  const std::uint64_t blocks = block_count(trials);
  // first_ok[b][j]: trials in block b whose first non-outage column is j (j == cols: never)
  std::vector<std::vector<std::uint64_t>> first_ok(blocks, std::vector<std::uint64_t>(cols + 1, 0));
  parallel_for(
      blocks,
      [&](std::size_t b) {
        Stream rng(block_seed(row_seed, b));
        const std::uint64_t begin = b * kTrialBlock;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kTrialBlock);
        std::vector<double> x(F_u);
        auto& hist = first_ok[b];
        for (std::uint64_t t = begin; t < end; ++t) {
          for (auto& v : x) v = rng.exponential(Gamma_u);
          std::size_t lo = 0, hi = cols;
          while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (trial_bits(x, pu_vec[mid], pe_vec) > target)
              hi = mid;
            else
              lo = mid + 1;
          }
          ++hist[lo];
        }
      },
      threads);

  std::vector<std::uint64_t> hist(cols + 1, 0);
  for (const auto& h : first_ok)
    for (std::size_t j = 0; j <= cols; ++j) hist[j] += h[j];
  std::vector<double> row(cols);
  std::uint64_t ok = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    ok += hist[j];
    row[j] = static_cast<double>(trials - ok) / static_cast<double>(trials);
  }
  return row;
}

}  // namespace detail

inline OutageTable build_table(double Gamma_u, std::size_t F_u, double r_u, std::size_t M_u,
                               const TableAxes& axes, std::uint64_t trials, std::uint64_t seed,
                               unsigned threads = default_threads()) {
  require(!axes.pu_dbm.empty() && !axes.pe_dbm.empty(), "table axes must be nonempty");
  require(std::is_sorted(axes.pu_dbm.begin(), axes.pu_dbm.end()), "P_u axis must be ascending");
  require(std::is_sorted(axes.pe_dbm.begin(), axes.pe_dbm.end()), "P_e axis must be ascending");
  require(trials >= 1 && F_u >= 1 && Gamma_u > 0.0, "invalid table parameters");
  OutageTable table;
  table.axis_pu_dbm = axes.pu_dbm;
  table.axis_pe_dbm = axes.pe_dbm;
  table.gamma_u = Gamma_u;
  table.F_u = F_u;
  table.r_u = r_u;
  table.M_u = M_u;
  table.trials = trials;
  table.seed = seed;
  table.values.reserve(axes.pe_dbm.size() * axes.pu_dbm.size());
  for (double pe : axes.pe_dbm) {
    const auto row = detail::table_row(axes.pu_dbm, pe, Gamma_u, F_u, r_u, trials,
                                       table_row_seed(seed, pe), threads);
    table.values.insert(table.values.end(), row.begin(), row.end());
  }
  return table;
}

struct TableQuery {
  double pu_dbm = 0.0;
  double pe_row_dbm = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
  double p_hat = 0.0;

  double pu_mw() const { return dbm_to_mw(pu_dbm); }
};

/// Row used for an interference query: the no-interference row for zero power,
/// otherwise the first row at or above the query (conservative rounding).
inline std::size_t table_row_for(const OutageTable& table, double pe_mw) {
  const auto& axis = table.axis_pe_dbm;
  if (pe_mw <= 0.0) {
    if (!axis.empty() && axis.front() == kNoInterference) return 0;
    // without a sentinel row, the weakest tabulated interference still bounds it
    for (std::size_t i = 0; i < axis.size(); ++i)
      if (axis[i] != kNoInterference) return i;
  } else {
    const double q = mw_to_dbm(pe_mw);
    for (std::size_t i = 0; i < axis.size(); ++i)
      if (axis[i] != kNoInterference && axis[i] >= q - 1e-9) return i;
  }
  throw Error(ErrorKind::table_exhausted,
              "interference " + std::to_string(mw_to_dbm(pe_mw)) + " dBm is beyond the table");
}

/// Smallest tabulated P_u whose outage is at most epsilon_u at the conservative
/// interference row.
inline TableQuery min_feasible_power(const OutageTable& table, double pe_mw, double epsilon_u) {
  TableQuery q;
  q.row = table_row_for(table, pe_mw);
  q.pe_row_dbm = table.axis_pe_dbm[q.row];
  for (std::size_t j = 0; j < table.axis_pu_dbm.size(); ++j) {
    if (table.at(q.row, j) <= epsilon_u) {
      q.col = j;
      q.pu_dbm = table.axis_pu_dbm[j];
      q.p_hat = table.at(q.row, j);
      return q;
    }
  }
  throw Error(ErrorKind::table_exhausted,
              "no tabulated P_u reaches the outage target; extend the P_u axis");
}

// ---------------------------------------------------------------------------
// Persistence: a text form and a compact little-endian binary form. Both carry
// the full metadata and round-trip every double bit-exactly.

namespace detail {

inline constexpr char kTextMagic[] = "slicing-outage-table";
inline constexpr char kBinaryMagic[8] = {'S', 'L', 'O', 'T', 'A', 'B', 'L', '1'};

inline std::string format_double(double v) {
  if (v == kNoInterference) return "none";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& tok) {
  if (tok == "none") return kNoInterference;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) throw Error(ErrorKind::io, "malformed number '" + tok + "'");
  return v;
}

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "binary tables assume little-endian");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw Error(ErrorKind::io, "truncated binary table");
  return v;
}

}  // namespace detail

inline void write_table_text(std::ostream& os, const OutageTable& t) {
  os << detail::kTextMagic << ' ' << OutageTable::kVersion << '\n';
  os << "gamma_u_per_mw " << detail::format_double(t.gamma_u) << '\n';
  os << "gamma_u_db " << detail::format_double(snr_per_mw_to_db(t.gamma_u)) << '\n';
  os << "F_u " << t.F_u << '\n';
  os << "r_u " << detail::format_double(t.r_u) << '\n';
  os << "M_u " << t.M_u << '\n';
  os << "trials " << t.trials << '\n';
  os << "seed " << t.seed << '\n';
  os << "axis_pu_dbm " << t.axis_pu_dbm.size();
  for (double v : t.axis_pu_dbm) os << ' ' << detail::format_double(v);
  os << "\naxis_pe_dbm " << t.axis_pe_dbm.size();
  for (double v : t.axis_pe_dbm) os << ' ' << detail::format_double(v);
  os << "\nvalues\n";
  for (std::size_t r = 0; r < t.axis_pe_dbm.size(); ++r) {
    for (std::size_t c = 0; c < t.axis_pu_dbm.size(); ++c)
      os << (c ? " " : "") << detail::format_double(t.at(r, c));
    os << '\n';
  }
}

inline OutageTable read_table_text(std::istream& is) {
  auto expect = [&](const char* key) {
    std::string tok;
    if (!(is >> tok) || tok != key)
      throw Error(ErrorKind::io, std::string("expected '") + key + "' in table header");
  };
  auto next = [&]() {
    std::string tok;
    if (!(is >> tok)) throw Error(ErrorKind::io, "truncated table");
    return tok;
  };
  auto next_uint = [&]() {
    const auto tok = next();
    try {
      std::size_t used = 0;
      const auto v = std::stoull(tok, &used);
      if (used == tok.size()) return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::io, "malformed integer '" + tok + "'");
  };

  OutageTable t;
  expect(detail::kTextMagic);
  if (next_uint() != OutageTable::kVersion) throw Error(ErrorKind::io, "unsupported table version");
  expect("gamma_u_per_mw");
  t.gamma_u = detail::parse_double(next());
  expect("gamma_u_db");
  next();
  expect("F_u");
  t.F_u = next_uint();
  expect("r_u");
  t.r_u = detail::parse_double(next());
  expect("M_u");
  t.M_u = next_uint();
  expect("trials");
  t.trials = next_uint();
  expect("seed");
  t.seed = next_uint();
  expect("axis_pu_dbm");
  t.axis_pu_dbm.resize(next_uint());
  for (auto& v : t.axis_pu_dbm) v = detail::parse_double(next());
  expect("axis_pe_dbm");
  t.axis_pe_dbm.resize(next_uint());
  for (auto& v : t.axis_pe_dbm) v = detail::parse_double(next());
  expect("values");
  t.values.resize(t.axis_pu_dbm.size() * t.axis_pe_dbm.size());
  for (auto& v : t.values) v = detail::parse_double(next());
  return t;
}

inline void write_table_binary(std::ostream& os, const OutageTable& t) {
  os.write(detail::kBinaryMagic, sizeof detail::kBinaryMagic);
  detail::put<std::uint32_t>(os, OutageTable::kVersion);
  detail::put<double>(os, t.gamma_u);
  detail::put<std::uint64_t>(os, t.F_u);
  detail::put<double>(os, t.r_u);
  detail::put<std::uint64_t>(os, t.M_u);
  detail::put<std::uint64_t>(os, t.trials);
  detail::put<std::uint64_t>(os, t.seed);
  detail::put<std::uint64_t>(os, t.axis_pu_dbm.size());
  detail::put<std::uint64_t>(os, t.axis_pe_dbm.size());
  for (double v : t.axis_pu_dbm) detail::put(os, v);
  for (double v : t.axis_pe_dbm) detail::put(os, v);
  for (double v : t.values) detail::put(os, v);
}

inline OutageTable read_table_binary(std::istream& is) {
  char magic[sizeof detail::kBinaryMagic];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, detail::kBinaryMagic, sizeof magic) != 0)
    throw Error(ErrorKind::io, "not a binary outage table");
  if (detail::get<std::uint32_t>(is) != OutageTable::kVersion)
    throw Error(ErrorKind::io, "unsupported table version");
  OutageTable t;
  t.gamma_u = detail::get<double>(is);
  t.F_u = detail::get<std::uint64_t>(is);
  t.r_u = detail::get<double>(is);
  t.M_u = detail::get<std::uint64_t>(is);
  t.trials = detail::get<std::uint64_t>(is);
  t.seed = detail::get<std::uint64_t>(is);
  t.axis_pu_dbm.resize(detail::get<std::uint64_t>(is));
  t.axis_pe_dbm.resize(detail::get<std::uint64_t>(is));
  for (auto& v : t.axis_pu_dbm) v = detail::get<double>(is);
  for (auto& v : t.axis_pe_dbm) v = detail::get<double>(is);
  t.values.resize(t.axis_pu_dbm.size() * t.axis_pe_dbm.size());
  for (auto& v : t.values) v = detail::get<double>(is);
  return t;
}

enum class TableEncoding { text, binary };

inline void save_table(const std::string& path, const OutageTable& t,
                       TableEncoding enc = TableEncoding::text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  if (enc == TableEncoding::text)
    write_table_text(os, t);
  else
    write_table_binary(os, t);
  if (!os) throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

/// Loads either encoding, detected from the leading bytes.
inline OutageTable load_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  char head[sizeof detail::kBinaryMagic] = {};
  is.read(head, sizeof head);
  is.clear();
  is.seekg(0);
  if (std::memcmp(head, detail::kBinaryMagic, sizeof head) == 0) return read_table_binary(is);
  return read_table_text(is);
}

}  // namespace slicing
