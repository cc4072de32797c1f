#include "ntn/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ntn {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

const char* const kTraceHeader =
    "n,sat_global_idx,hap_x,hap_y,v_x,v_y,a_x,a_y,d1,d2,d3,c1,c2,c3,e2e,reward";

std::string trace_csv(const std::vector<SlotRecord>& rows) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const SlotRecord& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.sat_global_idx);
    for (double v : {r.hap_x, r.hap_y, r.v_x, r.v_y, r.a_x, r.a_y, r.d1, r.d2, r.d3, r.c1, r.c2,
                     r.c3, r.e2e, r.reward}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace ntn
