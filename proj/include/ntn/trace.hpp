#pragma once

#include <string>
#include <vector>

// Number formatting and the CSV row schema shared by every per-slot trace.

namespace ntn {

// Shortest decimal string that parses back to exactly the same double
// (std::to_chars); "nan"/"inf" for non-finite values.
std::string format_double(double v);

// One simulated slot. Positions m, velocities m/s, accelerations m/s^2,
// distances m, rates bps.
struct SlotRecord {
  int n = 0;                 // 1-based slot index within the episode
  int sat_global_idx = -1;   // associated satellite
  double hap_x = 0, hap_y = 0;
  double v_x = 0, v_y = 0;
  double a_x = 0, a_y = 0;
  double d1 = 0, d2 = 0, d3 = 0;      // src-sat, sat-hap, hap-dst
  double c1 = 0, c2 = 0, c3 = 0;      // hop capacities
  double e2e = 0;                     // delivered end-to-end rate
  double reward = 0;                  // sigmoid-shaped; nan when uncalibrated
};

extern const char* const kTraceHeader;

std::string trace_csv(const std::vector<SlotRecord>& rows);

// Atomic text write: temp file in the same directory, then rename.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace ntn
