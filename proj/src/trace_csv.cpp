#include "rii/trace_csv.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

#include "rii/errors.hpp"

namespace rii {

namespace {

class PrecisionGuard {
 public:
  explicit PrecisionGuard(std::ostream& out) : out_(out), prec_(out.precision()) {
    out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
  }
  ~PrecisionGuard() { out_.precision(prec_); }

 private:
  std::ostream& out_;
  std::streamsize prec_;
};

template <class Trace>
void save(const std::string& path, const Trace& trace) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  write_trace_csv(f, trace);
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  PrecisionGuard guard(out);
  out << "t,n,q,e,v,w\n";
  for (const auto& r : trace) {
    for (std::size_t n = 0; n < r.q.size(); ++n) {
      out << r.t << ',' << n << ',' << r.q[n] << ',' << r.e[n] << ',' << r.v[n] << ',';
      if (n > 0) out << r.w[n - 1];
      out << '\n';
    }
  }
}

void write_trace_csv(std::ostream& out, const std::vector<QdTraceRecord>& trace) {
  PrecisionGuard guard(out);
  out << "t,n,q,e\n";
  for (const auto& r : trace) {
    for (std::size_t n = 0; n < r.q.size(); ++n) {
      out << r.t << ',' << n << ',' << r.q[n] << ',' << r.e[n] << '\n';
    }
  }
}

void save_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  save(path, trace);
}

void save_trace_csv(const std::string& path, const std::vector<QdTraceRecord>& trace) {
  save(path, trace);
}

}  // namespace rii
