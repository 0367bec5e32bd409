#pragma once

#include <string>

#include "core/detect1d.hpp"
#include "core/detectnd.hpp"
#include "core/jsonio.hpp"
#include "core/oracle.hpp"

namespace polymax {

njson witness_json(const Witness& w);

/// 1-D certificate: interval, params, pieces/breakpoints on accept, the full
/// query log, the witness on reject, and the convexity promise.
njson certificate_1d(const DetectOutcome& out, const Rat& a, const Rat& b,
                     const std::string& algorithm, njson params);

/// n-D certificate: grid (when present), cells, the assembled function,
/// per-line records, queries, witness, promise.
njson certificate_nd(const NdOutcome& out, const GridSpec* grid,
                     const std::string& algorithm, njson params);

struct ReplayReport {
  bool ok = true;
  long replayed = 0;
  long mismatches = 0;
  std::string first_mismatch;
};

/// Replays every logged query of a certificate against the oracle and, for
/// accept certificates, re-evaluates the reconstruction at each logged point.
ReplayReport verify_certificate(const njson& cert, const FunctionOracle& o);

njson replay_report_json(const ReplayReport& r);

}  // namespace polymax
