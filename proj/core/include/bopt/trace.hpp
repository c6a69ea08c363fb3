#pragma once

#include <string>

#include "bopt/driver.hpp"

namespace bopt {

// Versioned delimited-text trace schema. Serialization is byte-deterministic;
// per-iteration wall times deliberately stay out of the file so reruns and
// different worker counts produce identical bytes.
std::string emit_trace(const RegretTrace& trace);
RegretTrace parse_trace(const std::string& text);

void write_trace_file(const std::string& path, const RegretTrace& trace);
RegretTrace read_trace_file(const std::string& path);

// "<task>__<method>__seed<k>.trace"
std::string trace_filename(const RegretTrace& trace);

// Equality over the persisted schema (wall times excluded).
bool trace_equal(const RegretTrace& a, const RegretTrace& b);

}  // namespace bopt
