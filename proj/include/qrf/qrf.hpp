#pragma once

// Quantum reference frame toolkit: group elements and Haar quadrature,
// charge-sector Hilbert spaces, frame-state families, twirl/encode/recover
// channels, the relational frame-change instrument, and balanced homodyne
// detection tables.

#include "qrf/bhd.hpp"
#include "qrf/change_frame.hpp"
#include "qrf/channels.hpp"
#include "qrf/frames.hpp"
#include "qrf/group.hpp"
#include "qrf/haar.hpp"
#include "qrf/metrics.hpp"
#include "qrf/rep.hpp"
#include "qrf/spaces.hpp"
#include "qrf/states.hpp"
#include "qrf/table.hpp"

namespace qrf {
inline constexpr const char* version = "0.1.0";
}
