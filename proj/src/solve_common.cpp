#include "dcflow/solve.hpp"

namespace dcflow {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max_iterations";
        case SolveStatus::Diverged: return "diverged";
        default: return "domain_error";
    }
}

} // namespace dcflow
