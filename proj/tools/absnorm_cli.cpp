#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absnorm/discrepancy.hpp"
#include "absnorm/parameters.hpp"
#include "absnorm/pipeline.hpp"
#include "absnorm/predicate.hpp"
#include "absnorm/reduction.hpp"
#include "absnorm/trace.hpp"

namespace {

using namespace absnorm;

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;
constexpr int kTruncated = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceFlags {
    std::string builtin;
    std::string predicate;
    std::string predicate_file;
    std::string control;
};

void add_source_flags(CLI::App* cmd, SourceFlags& s, bool allow_control) {
    cmd->add_option("--builtin", s.builtin, "Constant predicate: true or false")
        ->check(CLI::IsMember({"true", "false"}));
    cmd->add_option("--predicate", s.predicate, "Predicate C(x,y) in the expression language");
    cmd->add_option("--predicate-file", s.predicate_file, "File holding the predicate");
    if (allow_control) {
        cmd->add_option("--control", s.control, "Explicit control sequence, comma separated");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint64_t> parse_control(const std::string& text) {
    std::vector<std::uint64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || v < 1) {
            throw UsageError("control values must be positive integers, got '" + item + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw UsageError("empty control sequence");
    return values;
}

int sources_given(const SourceFlags& s) {
    return !s.builtin.empty() + !s.predicate.empty() + !s.predicate_file.empty() + !s.control.empty();
}

std::optional<Predicate> predicate_of(const SourceFlags& s) {
    if (!s.builtin.empty()) return Predicate::constant(s.builtin == "true");
    if (!s.predicate.empty()) return Predicate::parse(s.predicate);
    if (!s.predicate_file.empty()) return Predicate::parse(read_file(s.predicate_file));
    return std::nullopt;
}

std::unique_ptr<ControlSequence> control_of(const SourceFlags& s) {
    if (sources_given(s) != 1) {
        throw UsageError("give exactly one of --builtin, --predicate, --predicate-file" +
                         std::string(s.control.empty() ? "" : ", --control"));
    }
    if (!s.control.empty()) return std::make_unique<ExplicitSequence>(parse_control(s.control));
    return first_reduction_stream(*predicate_of(s));
}

std::optional<ToyOverride> parse_toy(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::optional<std::uint64_t> k, ell;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--toy-params expects k=..,ell=..");
        const std::string key = item.substr(0, eq);
        std::uint64_t value = 0;
        try {
            std::size_t used = 0;
            value = std::stoull(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw UsageError("bad value in --toy-params: " + item);
        }
        if (key == "k") {
            k = value;
        } else if (key == "ell") {
            ell = value;
        } else {
            throw UsageError("unknown key in --toy-params: " + key);
        }
    }
    if (!k || !ell || *k < 1 || *ell < 1) throw UsageError("--toy-params needs positive k and ell");
    return ToyOverride{*k, *ell};
}

ParamTable params_of(const std::optional<ToyOverride>& toy) {
    if (!toy) return ParamTable();
    std::cerr << "note: non-conforming run with toy parameters k=" << toy->k << ", ell=" << toy->ell
              << '\n';
    return ParamTable(*toy);
}

void print_digits(std::ostream& out, const DigitBlock& digits) {
    if (digits.base() <= 10) {
        for (Digit d : digits.digits()) out << static_cast<char>('0' + d);
    } else {
        bool first = true;
        for (Digit d : digits.digits()) {
            if (!first) out << ' ';
            out << d;
            first = false;
        }
    }
    out << '\n';
}

DigitBlock read_digit_stream(std::istream& in, std::uint32_t base) {
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<Digit> digits;
    if (base <= 10) {
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            if (c < '0' || c >= static_cast<char>('0' + base)) {
                throw UsageError(std::string("not a base-") + std::to_string(base) + " digit: '" + c + "'");
            }
            digits.push_back(static_cast<Digit>(c - '0'));
        }
    } else {
        std::istringstream words(text);
        std::string w;
        while (words >> w) {
            if (w.find_first_not_of("0123456789") != std::string::npos || w.size() > 10) {
                throw UsageError("not a base-" + std::to_string(base) + " digit: '" + w + "'");
            }
            const auto v = std::stoull(w);
            if (v >= base) throw UsageError("digit out of range: " + w);
            digits.push_back(static_cast<Digit>(v));
        }
    }
    if (digits.empty()) throw UsageError("empty digit stream");
    return DigitBlock(base, std::move(digits));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Digits of absolutely normal or absolutely abnormal reals"};
    app.require_subcommand(1);

    SourceFlags digits_src, reduce_src, verify_src;
    std::uint32_t base = 2;
    std::uint64_t count = 0;
    std::string trace_path, toy_text, input_path;
    std::uint64_t max_rounds = 0, stride = 0, block_length = 1, max_i = 3;

    const auto base_check = CLI::Range(2u, 1u << 24);

    auto* digits_cmd = app.add_subcommand("digits", "Print digits of the limit real");
    add_source_flags(digits_cmd, digits_src, true);
    digits_cmd->add_option("--base", base, "Output base")->check(base_check);
    digits_cmd->add_option("--count", count, "Number of digits")->required()->check(CLI::PositiveNumber);
    digits_cmd->add_option("--trace", trace_path, "Write the refinement trace here");
    digits_cmd->add_option("--toy-params", toy_text, "Test-only parameter override k=..,ell=..");
    digits_cmd->add_option("--max-rounds", max_rounds, "Stop after this many rounds (0: no limit)");

    auto* reduce_cmd = app.add_subcommand("reduce", "Print a prefix of the control sequence");
    add_source_flags(reduce_cmd, reduce_src, false);
    reduce_cmd->add_option("--count", count, "Number of values")->required()->check(CLI::PositiveNumber);

    auto* analyze_cmd = app.add_subcommand("analyze", "Discrepancy profile of a digit stream as CSV");
    analyze_cmd->add_option("--input", input_path, "Digit file (default: standard input)");
    analyze_cmd->add_option("--base", base, "Base of the digits")->check(base_check);
    analyze_cmd->add_option("--block-length", block_length, "Block length for D_ell")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--stride", stride, "Row spacing (0: final row only)");

    auto* params_cmd = app.add_subcommand("params", "Print the parameter table");
    params_cmd->add_option("--max-i", max_i, "Largest index")->check(CLI::Range(1, 64));

    auto* verify_cmd = app.add_subcommand("verify", "Re-check the guarantees recorded in a trace");
    verify_cmd->add_option("--trace", trace_path, "Trace file")->required();
    add_source_flags(verify_cmd, verify_src, true);
    verify_cmd->add_option("--stride", stride, "Sampling stride for prefix bounds (default 16)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*digits_cmd) {
            const ParamTable params = params_of(parse_toy(toy_text));
            auto control = control_of(digits_src);
            std::ofstream trace_file;
            std::unique_ptr<TraceWriter> writer;
            if (!trace_path.empty()) {
                trace_file.open(trace_path, std::ios::binary);
                if (!trace_file) throw UsageError("cannot write " + trace_path);
                writer = std::make_unique<TraceWriter>(trace_file, params);
            }
            DigitsOptions options;
            options.max_rounds = max_rounds;
            if (writer) {
                options.on_round = [&](const PipelineState&, const AdvanceOutcome& outcome) {
                    writer->write_round(outcome.state.round, outcome.result);
                };
            }
            const DigitsResult result = absnorm::digits(*control, base, count, params, options);
            print_digits(std::cout, result.digits);
            if (result.truncated) {
                std::cerr << "truncated after " << result.rounds << " rounds: " << result.digits.size()
                          << " of " << count << " digits determined\n";
                return kTruncated;
            }
            return kOk;
        }
        if (*reduce_cmd) {
            auto control = control_of(reduce_src);
            for (std::uint64_t v : take(*control, count)) std::cout << v << '\n';
            return kOk;
        }
        if (*analyze_cmd) {
            DigitBlock digits(base);
            if (input_path.empty()) {
                digits = read_digit_stream(std::cin, base);
            } else {
                std::ifstream in(input_path, std::ios::binary);
                if (!in) throw UsageError("cannot read " + input_path);
                digits = read_digit_stream(in, base);
            }
            std::cout << "prefix_length,D,D_ell\n";
            const auto row = [&](std::size_t n) {
                const DigitBlock prefix = digits.prefix(n);
                std::cout << n << ',' << to_fraction_string(simple_discrepancy(prefix)) << ','
                          << to_fraction_string(block_discrepancy(prefix, block_length)) << '\n';
            };
            if (stride > 0) {
                for (std::size_t n = stride; n <= digits.size(); n += stride) row(n);
            }
            if (stride == 0 || digits.size() % stride != 0) row(digits.size());
            return kOk;
        }
        if (*params_cmd) {
            const ParamTable params;
            std::cout << "i,delta,k,ell\n";
            for (std::uint64_t i = 1; i <= max_i; ++i) {
                std::cout << i << ',' << to_fraction_string(params.delta(i)) << ',' << params.k(i) << ','
                          << params.ell(i) << '\n';
            }
            return kOk;
        }
        if (*verify_cmd) {
            std::ifstream in(trace_path, std::ios::binary);
            if (!in) throw UsageError("cannot read " + trace_path);
            const TraceData trace = read_trace(in);
            if (!trace.conforming || trace.toy) {
                std::cout << "refused: trace was produced with non-conforming toy parameters\n";
                return kUsage;
            }
            std::vector<std::uint64_t> expected;
            const bool compare = sources_given(verify_src) > 0;
            if (compare) {
                auto control = control_of(verify_src);
                expected = take(*control, trace.rounds.size());
            }
            const ParamTable params;
            const auto verdicts =
                verify_trace(trace, params, compare ? &expected : nullptr, stride == 0 ? 16 : stride);
            bool all = !verdicts.empty();
            for (const auto& v : verdicts) {
                const bool pass = v.report.ok();
                all = all && pass;
                std::cout << "round " << v.round << " (i=" << v.i << "): " << (pass ? "pass" : "FAIL") << '\n';
                for (const auto& msg : v.report.violations) std::cout << "  violation: " << msg << '\n';
                for (const auto& msg : v.report.notices) std::cout << "  notice: " << msg << '\n';
            }
            if (verdicts.empty()) std::cout << "no rounds in trace\n";
            return all ? kOk : kInternal;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "predicate parse error at " << e.line() << ':' << e.column() << ": " << e.what() << '\n';
        return kUsage;
    } catch (const TraceFormatError& e) {
        std::cerr << "malformed trace: " << e.what() << '\n';
        return kUsage;
    } catch (const InternalError& e) {
        std::cerr << "internal assertion failed: " << e.what() << '\n';
        return kInternal;
    } catch (const PredicateError& e) {
        std::cerr << "predicate evaluation failed: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
