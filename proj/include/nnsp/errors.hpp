#pragma once

#include <stdexcept>
#include <string>

namespace nnsp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateEdge : Error { using Error::Error; };
struct InvalidWeight : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidEdgeSet : Error { using Error::Error; };
struct PartitionMismatch : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct DuplicateCenter : Error { using Error::Error; };
struct IndivisibleClusterSize : Error { using Error::Error; };
struct InvalidSize : Error { using Error::Error; };
struct InvalidEdge : Error { using Error::Error; };
struct EmptySamplingSet : Error { using Error::Error; };
struct BoundaryTooLarge : Error { using Error::Error; };
struct InvalidBudget : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace nnsp
