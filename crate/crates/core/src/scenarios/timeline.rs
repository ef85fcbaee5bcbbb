use rayon::prelude::*;
use serde::Serialize;

use super::{LadderScenario, ScenarioError, Vehicle, DEFAULT_RESISTIVITY};
use crate::network::assemble;
use crate::search::{search_efficient, SearchConfig};

/// Kinematics and power demand of a vehicle that starts from rest at every
/// intersection, accelerates, cruises and brakes to a stop at the next one.
///
/// Demand while accelerating is the traction power `m a v` capped at
/// `peak_power`, so it ramps up and then plateaus. Braking feeds back
/// `regen_efficiency · m d v`. Auxiliary load is drawn throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingProfile {
    pub max_speed: f64,
    pub acceleration: f64,
    pub deceleration: f64,
    pub mass: f64,
    pub peak_power: f64,
    pub cruise_power: f64,
    pub auxiliary_power: f64,
    pub regen_efficiency: f64,
}

impl Default for DrivingProfile {
    fn default() -> Self {
        Self {
            max_speed: 14.0,
            acceleration: 1.0,
            deceleration: 1.0,
            mass: 18_000.0,
            peak_power: 250e3,
            cruise_power: 40e3,
            auxiliary_power: 20e3,
            regen_efficiency: 0.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteParams {
    pub route_length: f64,
    pub intersection_spacing: f64,
    pub substation_pos: f64,
    pub substation_voltage: f64,
    /// Zero connects the substation directly to the wire.
    pub feeder_length: f64,
    pub resistivity: f64,
    pub dt: f64,
    pub profile: DrivingProfile,
}

impl Default for RouteParams {
    fn default() -> Self {
        Self {
            route_length: 8000.0,
            intersection_spacing: 200.0,
            substation_pos: 0.0,
            substation_voltage: 600.0,
            feeder_length: 0.0,
            resistivity: DEFAULT_RESISTIVITY,
            dt: 1.0,
            profile: DrivingProfile::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineStep {
    pub time: f64,
    pub position: f64,
    pub speed: f64,
    pub demanded: f64,
    pub alpha_hat: f64,
    pub received: f64,
    /// `(1 − α̂) · demanded · dt`, energy a storage device would have to
    /// supply.
    pub deficit_energy: f64,
}

impl RouteParams {
    fn segments(&self) -> Result<usize, ScenarioError> {
        let bad = |m: &str| Err(ScenarioError::Route(m.into()));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if !(self.intersection_spacing > 0.0 && self.route_length > 0.0) {
            return bad("route length and spacing must be positive");
        }
        let n = (self.route_length / self.intersection_spacing).round();
        if (n * self.intersection_spacing - self.route_length).abs() > 1e-9 * self.route_length {
            return bad("intersection spacing must divide the route length");
        }
        if !(0.0..=self.route_length).contains(&self.substation_pos) {
            return bad("substation must lie on the route");
        }
        let p = &self.profile;
        if !(p.max_speed > 0.0 && p.acceleration > 0.0 && p.deceleration > 0.0 && p.mass > 0.0) {
            return bad("speed, acceleration, deceleration and mass must be positive");
        }
        Ok(n as usize)
    }

    fn scenario(&self, vehicle: Vehicle, intersections: usize) -> LadderScenario {
        LadderScenario {
            substation_voltage: self.substation_voltage,
            feed_points: vec![self.substation_pos],
            feeder_length: self.feeder_length,
            vehicles: vec![vehicle],
            junctions: (0..=intersections)
                .map(|k| k as f64 * self.intersection_spacing)
                .collect(),
            resistivity: self.resistivity,
        }
    }

    fn alpha_at(
        &self,
        vehicle: Vehicle,
        intersections: usize,
        cfg: &SearchConfig,
    ) -> Result<f64, ScenarioError> {
        if self.feeder_length == 0.0 && vehicle.position == self.substation_pos {
            // no wire between source and vehicle
            return Ok(1.0);
        }
        let spec = self.scenario(vehicle, intersections).to_circuit()?;
        let sys = assemble(&spec)?;
        Ok(search_efficient(&sys, cfg)?.alpha_hat)
    }
}

struct SegmentMotion {
    peak_speed: f64,
    t_accel: f64,
    t_cruise: f64,
    t_brake: f64,
}

impl SegmentMotion {
    fn new(p: &DrivingProfile, length: f64) -> Self {
        let (a, d) = (p.acceleration, p.deceleration);
        let v = p.max_speed.min((2.0 * length * a * d / (a + d)).sqrt());
        let cruise_dist = length - v * v / (2.0 * a) - v * v / (2.0 * d);
        Self {
            peak_speed: v,
            t_accel: v / a,
            t_cruise: (cruise_dist / v).max(0.0),
            t_brake: v / d,
        }
    }

    fn duration(&self) -> f64 {
        self.t_accel + self.t_cruise + self.t_brake
    }

    /// Distance from the segment start, speed and power demand at time `t`
    /// after leaving the intersection.
    fn state(&self, p: &DrivingProfile, t: f64) -> (f64, f64, f64) {
        let (a, d, v) = (p.acceleration, p.deceleration, self.peak_speed);
        let accel_dist = 0.5 * a * self.t_accel * self.t_accel;
        if t < self.t_accel {
            let speed = a * t;
            (
                0.5 * a * t * t,
                speed,
                p.auxiliary_power + (p.mass * a * speed).min(p.peak_power),
            )
        } else if t < self.t_accel + self.t_cruise {
            let tc = t - self.t_accel;
            (accel_dist + v * tc, v, p.auxiliary_power + p.cruise_power)
        } else {
            let tb = (t - self.t_accel - self.t_cruise).min(self.t_brake);
            let speed = v - d * tb;
            let s = accel_dist + v * self.t_cruise + v * tb - 0.5 * d * tb * tb;
            (
                s,
                speed,
                p.auxiliary_power - p.regen_efficiency * p.mass * d * speed,
            )
        }
    }
}

fn step(
    time: f64,
    position: f64,
    speed: f64,
    demanded: f64,
    alpha_hat: f64,
    dt: f64,
) -> TimelineStep {
    TimelineStep {
        time,
        position,
        speed,
        demanded,
        alpha_hat,
        received: alpha_hat * demanded,
        deficit_energy: (1.0 - alpha_hat) * demanded * dt,
    }
}

/// Quasi-static simulation of one vehicle driving the route, stopping at
/// every intersection. Each time step is an independent supply problem and
/// the steps are solved in parallel.
pub fn straight_route_timeline(
    params: &RouteParams,
    cfg: &SearchConfig,
) -> Result<Vec<TimelineStep>, ScenarioError> {
    let n = params.segments()?;
    let motion = SegmentMotion::new(&params.profile, params.intersection_spacing);
    let total = n as f64 * motion.duration();
    let steps = (total / params.dt).ceil() as usize;

    (0..steps)
        .into_par_iter()
        .map(|k| {
            let time = k as f64 * params.dt;
            let seg = ((time / motion.duration()) as usize).min(n - 1);
            let (s, speed, demanded) =
                motion.state(&params.profile, time - seg as f64 * motion.duration());
            let position = (seg as f64 * params.intersection_spacing + s).min(params.route_length);
            let vehicle = Vehicle {
                position,
                power: demanded,
            };
            let alpha = params.alpha_at(vehicle, n, cfg)?;
            Ok(step(time, position, speed, demanded, alpha, params.dt))
        })
        .collect()
}

/// The vehicle parked at each of `positions` in turn with a fixed demand.
/// Step `k` is stamped with time `k · dt`.
pub fn constant_demand_sweep(
    params: &RouteParams,
    demanded: f64,
    positions: &[f64],
    cfg: &SearchConfig,
) -> Result<Vec<TimelineStep>, ScenarioError> {
    let n = params.segments()?;
    positions
        .par_iter()
        .enumerate()
        .map(|(k, &position)| {
            let alpha = params.alpha_at(
                Vehicle {
                    position,
                    power: demanded,
                },
                n,
                cfg,
            )?;
            Ok(step(
                k as f64 * params.dt,
                position,
                0.0,
                demanded,
                alpha,
                params.dt,
            ))
        })
        .collect()
}
