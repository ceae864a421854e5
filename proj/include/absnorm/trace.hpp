#ifndef ABSNORM_TRACE_HPP
#define ABSNORM_TRACE_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "absnorm/parameters.hpp"
#include "absnorm/refine.hpp"

namespace absnorm {

// Line-delimited JSON, one object per line:
//   {"type":"header","format":"absnorm-trace","version":1,"conforming":bool,"toy":{k,ell}|null}
//   {"type":"round","round":j,"i":..,"p":..,"steps":n,"v":{"2":"digits",...}}
//   {"type":"step","round":j,"step":s,"scanned":"int","nodes":n,
//    "u_lengths":{"2":..},"u_discrepancy":{"2":"num/den"},"x_lengths":{"2":..},
//    "u":{"2":"digits",...}}
// Digit strings use the DigitBlock character encoding.

class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TraceWriter {
public:
    TraceWriter(std::ostream& out, const ParamTable& params);
    void write_round(std::uint64_t round, const RefineResult& result);

private:
    std::ostream& out_;
};

struct TraceStep {
    std::uint64_t step = 0;
    std::string scanned;
    std::vector<DigitBlock> u;
    std::vector<Rational> u_discrepancy;
    std::vector<std::uint64_t> x_lengths;
};

struct TraceRound {
    std::uint64_t round = 0;
    std::uint64_t i = 0;
    std::uint64_t p = 0;
    std::vector<DigitBlock> v;
    std::vector<TraceStep> steps;
};

struct TraceData {
    bool conforming = true;
    std::optional<ToyOverride> toy;
    std::vector<TraceRound> rounds;
};

TraceData read_trace(std::istream& in);

struct RoundVerdict {
    std::uint64_t round = 0;
    std::uint64_t i = 0;
    GuaranteeReport report;
};

/// Rebuilds each round's blocks from the trace (R_0 = ([0,1)), chaining the
/// outputs) and re-runs check_round. Recorded indices are compared with
/// `expected_control` when given.
std::vector<RoundVerdict> verify_trace(const TraceData& trace, const ParamTable& params,
                                       const std::vector<std::uint64_t>* expected_control,
                                       std::uint64_t stride);

}  // namespace absnorm

#endif
