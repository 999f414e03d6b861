#pragma once

#include "powercal/csv_io.hpp"
#include "powercal/envelope.hpp"
#include "powercal/error.hpp"
#include "powercal/estimator.hpp"
#include "powercal/fitting.hpp"
#include "powercal/host.hpp"
#include "powercal/hostsim.hpp"
#include "powercal/lookup.hpp"
#include "powercal/profile_builder.hpp"
#include "powercal/recorded_host.hpp"
#include "powercal/reference_servers.hpp"
#include "powercal/serialization.hpp"
#include "powercal/telemetry.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"
#include "powercal/units.hpp"
#include "powercal/workloads.hpp"
