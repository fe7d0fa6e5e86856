#pragma once

#include "qccd/benchmarks.hpp"
#include "qccd/circuit.hpp"
#include "qccd/cost_model.hpp"
#include "qccd/dag.hpp"
#include "qccd/device_graph.hpp"
#include "qccd/errors.hpp"
#include "qccd/machine_state.hpp"
#include "qccd/mapping.hpp"
#include "qccd/oracle.hpp"
#include "qccd/pipeline.hpp"
#include "qccd/qasm.hpp"
#include "qccd/schedule.hpp"
#include "qccd/scheduler.hpp"
#include "qccd/topology.hpp"
#include "qccd/validate.hpp"
