#pragma once

#include <cstdint>

#include <boost/dynamic_bitset.hpp>

namespace locforge {

using ObjId = std::uint32_t;
using ArrowId = std::uint32_t;
using Elem = std::uint32_t;  // index into a finite frame or carrier

// Subsets of a finite index set (arrows into an object, sieves of an object, ...).
using Bits = boost::dynamic_bitset<std::uint64_t>;

}  // namespace locforge
