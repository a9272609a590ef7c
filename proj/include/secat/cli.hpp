// Command layer: each subcommand is a function from a request to a report,
// written to a stream, so tests can drive commands in-process. Reports come
// in two shapes: a line-oriented text form that ends with a wall-clock
// line, and a structured JSON form that carries no timing and is therefore
// byte-identical across runs on the same input.
//
// Exit code contract: 0 for success (including an OVER_CAP outcome, which
// is an answer, not an error), 1 for a mathematical failure (REJECT,
// INCONSISTENT, a failing example), 2 for unusable input.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secat {
namespace cli {

struct CommandRequest {
    std::string command;   // chain | certify | estimate | bounds | examples
    std::string subject;   // chain: secat|relcat|cat|compl, certify:
                           // relcat|pushcat|suspension, estimate:
                           // cat|compl|secat-of-hom
    std::vector<std::string> inputs;
    std::string map_name;     // chain: pick a map when the file has several
    std::string object_name;  // chain: pick a complex likewise
    std::string emit_key;     // estimate: key of the emitted fact line
    std::string data_dir;     // examples: bundled data location
    int cap = 4;
    bool trace = false;
    bool list = false;
    std::string format = "text";  // text | structured
    std::vector<std::string> disabled_rules;
};

int run_command(const CommandRequest& req, std::ostream& out);

// Parses argv-style arguments into a request and runs it. Usage problems
// print to err and return 2.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Item ids of the bundled example suite, in run order.
std::vector<std::string> example_ids();

}  // namespace cli
}  // namespace secat
