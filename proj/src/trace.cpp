#include "absnorm/trace.hpp"

#include <json.hpp>
#include <sstream>

namespace absnorm {

using nlohmann::json;

namespace {

json per_base_blocks(const std::vector<DigitBlock>& blocks) {
    json j = json::object();
    for (const auto& b : blocks) j[std::to_string(b.base())] = b.to_string();
    return j;
}

DigitBlock parse_block(std::uint32_t base, const std::string& text) {
    if (base <= 36) return DigitBlock::from_string(base, text);
    std::vector<Digit> digits;
    std::istringstream in(text);
    unsigned long d;
    while (in >> d) digits.push_back(static_cast<Digit>(d));
    if (!in.eof()) throw TraceFormatError("malformed digit list");
    return DigitBlock(base, std::move(digits));
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw TraceFormatError(std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw TraceFormatError(std::string("bad field '") + name + "': " + e.what());
    }
}

// Blocks for bases 2..t, in order.
std::vector<DigitBlock> blocks_for(const json& j, const char* name, std::uint32_t t) {
    const json& obj = field<json>(j, name);
    std::vector<DigitBlock> out;
    for (std::uint32_t b = 2; b <= t; ++b) {
        const auto key = std::to_string(b);
        if (!obj.contains(key)) throw TraceFormatError(std::string(name) + " lacks base " + key);
        try {
            out.push_back(parse_block(b, obj.at(key).get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw TraceFormatError(std::string(name) + " base " + key + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

TraceWriter::TraceWriter(std::ostream& out, const ParamTable& params) : out_(out) {
    json h = {{"type", "header"}, {"format", "absnorm-trace"}, {"version", 1},
              {"conforming", params.conforming()}};
    if (params.toy()) {
        h["toy"] = {{"k", params.toy()->k}, {"ell", params.toy()->ell}};
    } else {
        h["toy"] = nullptr;
    }
    out_ << h.dump() << '\n';
}

void TraceWriter::write_round(std::uint64_t round, const RefineResult& result) {
    json r = {{"type", "round"}, {"round", round}, {"i", result.i}, {"p", result.p},
              {"steps", result.trace.size()}, {"v", per_base_blocks(result.v)}};
    out_ << r.dump() << '\n';
    for (const auto& step : result.trace) {
        json lengths = json::object(), disc = json::object(), xl = json::object();
        for (std::size_t k = 0; k < step.u.size(); ++k) {
            const auto key = std::to_string(k + 2);
            lengths[key] = step.u[k].size();
            disc[key] = to_fraction_string(step.u_discrepancy[k]);
            xl[key] = step.x_length[k];
        }
        json s = {{"type", "step"}, {"round", round}, {"step", step.step},
                  {"scanned", step.scanned.get_str()}, {"nodes", step.nodes_visited},
                  {"u_lengths", lengths}, {"u_discrepancy", disc}, {"x_lengths", xl},
                  {"u", per_base_blocks(step.u)}};
        out_ << s.dump() << '\n';
    }
    out_.flush();
}

TraceData read_trace(std::istream& in) {
    TraceData data;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            const auto type = field<std::string>(j, "type");
            if (type == "header") {
                if (field<std::string>(j, "format") != "absnorm-trace") throw TraceFormatError("unknown format");
                data.conforming = field<bool>(j, "conforming");
                if (j.contains("toy") && !j.at("toy").is_null()) {
                    data.toy = ToyOverride{field<std::uint64_t>(j.at("toy"), "k"),
                                           field<std::uint64_t>(j.at("toy"), "ell")};
                }
                header = true;
            } else if (type == "round") {
                if (!header) throw TraceFormatError("round before header");
                TraceRound r;
                r.round = field<std::uint64_t>(j, "round");
                r.i = field<std::uint64_t>(j, "i");
                r.p = field<std::uint64_t>(j, "p");
                if (r.i < 1 || r.p < 1) throw TraceFormatError("i and p must be positive");
                r.v = blocks_for(j, "v", static_cast<std::uint32_t>(r.i + 1));
                data.rounds.push_back(std::move(r));
            } else if (type == "step") {
                if (data.rounds.empty()) throw TraceFormatError("step before any round");
                TraceRound& r = data.rounds.back();
                if (field<std::uint64_t>(j, "round") != r.round) throw TraceFormatError("step round mismatch");
                const auto t = static_cast<std::uint32_t>(r.i + 1);
                TraceStep s;
                s.step = field<std::uint64_t>(j, "step");
                s.scanned = field<std::string>(j, "scanned");
                s.u = blocks_for(j, "u", t);
                const json& disc = field<json>(j, "u_discrepancy");
                const json& xl = field<json>(j, "x_lengths");
                for (std::uint32_t b = 2; b <= t; ++b) {
                    const auto key = std::to_string(b);
                    try {
                        s.u_discrepancy.push_back(parse_fraction(disc.at(key).get<std::string>()));
                        s.x_lengths.push_back(xl.at(key).get<std::uint64_t>());
                    } catch (const std::exception& e) {
                        throw TraceFormatError("step base " + key + ": " + e.what());
                    }
                }
                r.steps.push_back(std::move(s));
            } else {
                throw TraceFormatError("unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw TraceFormatError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const TraceFormatError& e) {
            throw TraceFormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header) throw TraceFormatError("missing header");
    return data;
}

std::vector<RoundVerdict> verify_trace(const TraceData& trace, const ParamTable& params,
                                       const std::vector<std::uint64_t>* expected_control,
                                       std::uint64_t stride) {
    std::vector<RoundVerdict> verdicts;
    std::vector<DigitBlock> previous{DigitBlock(2)};  // R_0 = ([0,1))
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const TraceRound& tr = trace.rounds[k];
        RoundVerdict verdict;
        verdict.round = tr.round;
        verdict.i = tr.i;
        GuaranteeReport& report = verdict.report;
        if (tr.round != k + 1) report.violations.push_back("round numbers out of sequence");
        if (tr.p + 1 != previous.size() + 1) {
            report.violations.push_back("p does not match the previous round's sequence length");
            verdicts.push_back(std::move(verdict));
            break;
        }
        if (expected_control) {
            if (k >= expected_control->size() || (*expected_control)[k] != tr.i) {
                report.violations.push_back("refinement index differs from the control sequence");
            }
        }
        RoundBlocks rb;
        rb.i = tr.i;
        rb.p = tr.p;
        rb.input_x = previous;
        rb.v = tr.v;
        const auto t = static_cast<std::uint32_t>(tr.i + 1);
        std::vector<DigitBlock> x;
        for (std::uint32_t b = 2; b <= t; ++b) {
            DigitBlock xb = b <= tr.p + 1 ? previous[b - 2] : DigitBlock(b);
            xb.append(tr.v[b - 2]);
            x.push_back(std::move(xb));
        }
        for (const auto& s : tr.steps) {
            rb.u.push_back(s.u);
            rb.recorded_u_discrepancy.insert(rb.recorded_u_discrepancy.end(), s.u_discrepancy.begin(),
                                             s.u_discrepancy.end());
            for (std::uint32_t b = 2; b <= t; ++b) {
                x[b - 2].append(s.u[b - 2]);
                if (x[b - 2].size() != s.x_lengths[b - 2]) {
                    report.violations.push_back("step " + std::to_string(s.step) +
                                                ": recorded x length mismatch in base " + std::to_string(b));
                }
            }
        }
        GuaranteeReport checked = check_round(rb, params, stride);
        report.refused = checked.refused;
        report.notices = std::move(checked.notices);
        report.violations.insert(report.violations.end(), checked.violations.begin(),
                                 checked.violations.end());
        verdicts.push_back(std::move(verdict));
        previous = std::move(x);
    }
    return verdicts;
}

}  // namespace absnorm
