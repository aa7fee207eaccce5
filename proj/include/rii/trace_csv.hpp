#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rii/chain.hpp"
#include "rii/dqds.hpp"

namespace rii {

/// Columns t,n,q,e,v,w with one row per chain index; w is blank at n = 0.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Columns t,n,q,e.
void write_trace_csv(std::ostream& out, const std::vector<QdTraceRecord>& trace);

void save_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace);
void save_trace_csv(const std::string& path, const std::vector<QdTraceRecord>& trace);

}  // namespace rii
