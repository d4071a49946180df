#pragma once

// Small CSV reader and writers for the command-line tools. Numbers are
// written with 17 significant digits so files round-trip exactly and are
// byte-stable.

#include "algcpd/error.hpp"
#include "algcpd/runtime/runtime.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace algcpd::io {

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

  const std::vector<double>& column(const std::string& name) const
  {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return columns[i];
    throw Error("CSV has no column '" + name + "'");
  }
};

inline std::string format_number(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string trim(std::string s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

} // namespace detail

/// Numeric CSV with a header row.
inline Table read_table(std::istream& in, const std::string& name = "input")
{
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(name + ": empty CSV");
  for (auto& h : detail::split(line)) t.header.push_back(detail::trim(h));
  t.columns.resize(t.header.size());
  std::size_t lineNo = 1;
  while (std::getline(in, line))
  {
    ++lineNo;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != t.header.size())
      throw Error(name + " line " + std::to_string(lineNo) + ": expected " + std::to_string(t.header.size()) +
                  " fields, got " + std::to_string(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
      const std::string c = detail::trim(cells[i]);
      double v = 0.0;
      const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || p != c.data() + c.size())
        throw Error(name + " line " + std::to_string(lineNo) + ": '" + c + "' is not a number");
      t.columns[i].push_back(v);
    }
  }
  return t;
}

inline Table read_table(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_table(in, path);
}

/// Writes `header` then the columns row by row.
inline void write_table(std::ostream& os, const std::vector<std::string>& header,
                        const std::vector<const std::vector<double>*>& columns)
{
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  const std::size_t n = columns.empty() ? 0 : columns.front()->size();
  for (std::size_t r = 0; r < n; ++r)
  {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << format_number((*columns[i])[r]);
    os << "\n";
  }
}

inline void write_series(std::ostream& os, const std::vector<double>& t, const std::vector<double>& x)
{
  write_table(os, {"time", "value"}, {&t, &x});
}

inline void write_truth(std::ostream& os, const std::vector<double>& truth)
{
  write_table(os, {"time"}, {&truth});
}

/// time,score,kind
inline void write_detections(std::ostream& os, const std::vector<Detection>& d)
{
  os << "time,score,kind\n";
  for (const auto& x : d) os << format_number(x.time) << "," << format_number(x.score) << "," << x.kind << "\n";
}

inline std::vector<Detection> read_detections(const std::string& path)
{
  const Table t = read_table(path);
  const auto& time = t.column("time");
  const auto& score = t.column("score");
  const auto& kind = t.column("kind");
  std::vector<Detection> out(t.rows());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = Detection{time[i], static_cast<unsigned>(kind[i]), score[i], 0};
  return out;
}

/// time,v,slope,d with time the window middle.
inline void write_trace(std::ostream& os, const DecisionTrace& tr)
{
  std::vector<double> t(tr.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = tr.t_of(k);
  write_table(os, {"time", "v", "slope", "d"}, {&t, &tr.v, &tr.slope, &tr.d});
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path + "'");
  fn(os);
  if (!os) throw Error("error while writing '" + path + "'");
}

} // namespace algcpd::io
