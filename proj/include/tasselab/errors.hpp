#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tasselab {

// Invalid arguments or out-of-range values detected before any work is done.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed external data (PGM, manifest, config). The message names the
// offending file and, where applicable, the line.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bounded resource (rounds, retries) was exhausted.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A target value outside the reachable encoding range [0, 47].
struct unrepresentable_error : domain_error {
    using domain_error::domain_error;
};

// Thrown by draw_prediction when max_rounds runs out; carries the numbers
// accepted before exhaustion.
struct draw_exhausted_error : resource_error {
    draw_exhausted_error(std::string message, std::vector<int> partial, int rounds_used)
        : resource_error(std::move(message)), collected(std::move(partial)), rounds(rounds_used) {}

    std::vector<int> collected;
    int rounds;
};

}  // namespace tasselab
