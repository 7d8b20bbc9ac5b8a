#pragma once

#include <iosfwd>
#include <string>

#include "ddtopt/model.hpp"
#include "ddtopt/sim.hpp"

namespace ddtopt {

// All floats are printed with 17 significant digits so round-trips through
// text are lossless.
std::string format_double(double x);

// Columns: t,v,theta,omega,u1,u2
void write_torque_csv(std::ostream& os, const TorqueTrajectory& traj);

// Columns: t,x,y,theta,v,omega,phiR,phiL
void write_kinematic_csv(std::ostream& os, const KinematicTrajectory& traj);

// Columns: t,event
void write_events_csv(std::ostream& os, const std::vector<Event>& events);

// Lines "phase,duration" followed by "total,<time>".
void write_plan(std::ostream& os, const PhasePlan& plan);
PhasePlan read_plan(std::istream& is);
PhasePlan read_plan_file(const std::string& path);

// Rows of a t,vdx,vdy reference file; header line optional.
RefSignal read_ref_csv(const std::string& path);

}  // namespace ddtopt
