#pragma once

#include "qtnet/cavity.hpp"
#include "qtnet/common.hpp"
#include "qtnet/netsim.hpp"
#include "qtnet/outcome.hpp"
#include "qtnet/qstate.hpp"
#include "qtnet/reports.hpp"
#include "qtnet/teleport.hpp"
#include "qtnet/transcript.hpp"
